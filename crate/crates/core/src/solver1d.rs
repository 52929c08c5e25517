//! One-dimensional finite-volume driver.
//!
//! First order uses forward Euler with piecewise-constant states; second
//! order reconstructs (ρ, u, p) with the Venkatakrishnan-limited slope and
//! integrates with the two-stage SSP Runge–Kutta method.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fds::{interface_flux, SchemeKind};
use crate::scalar::Real;
use crate::state::{
    cons_to_prim_unchecked, prim_to_cons, prim_to_cons_unchecked, sound_speed_sq, Conserved, FluxVector, GasModel, Primitive,
};

/// Face counts above which fluxes are evaluated on the rayon pool. Each
/// face is independent, so results do not depend on the schedule.
const PARALLEL_THRESHOLD: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D<T> {
    pub x_min: T,
    pub x_max: T,
    /// Cell averages of (ρ, ρu, ρE).
    pub cells: Vec<Conserved<T>>,
    pub time: T,
}

impl<T: Real> Grid1D<T> {
    pub fn from_fn(x_min: T, x_max: T, n_cells: usize, init: impl Fn(T) -> Primitive<T>, gas: &GasModel<T>) -> Result<Self> {
        if n_cells < 4 {
            return Err(Error::Config(format!("grid needs at least 4 cells, got {n_cells}")));
        }
        if !(x_max > x_min) {
            return Err(Error::Config(format!("empty domain [{x_min}, {x_max}]")));
        }
        let dx = (x_max - x_min) / T::c(n_cells as f64);
        let cells =
            (0..n_cells).map(|i| prim_to_cons(&init(x_min + (T::c(i as f64) + T::half()) * dx), gas)).collect::<Result<Vec<_>>>()?;
        Ok(Self { x_min, x_max, cells, time: T::zero() })
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn dx(&self) -> T {
        (self.x_max - self.x_min) / T::c(self.cells.len() as f64)
    }

    pub fn center(&self, i: usize) -> T {
        self.x_min + (T::c(i as f64) + T::half()) * self.dx()
    }

    pub fn centers(&self) -> Vec<T> {
        (0..self.n_cells()).map(|i| self.center(i)).collect()
    }

    pub fn primitives(&self, gas: &GasModel<T>) -> Result<Vec<Primitive<T>>> {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let w = cons_to_prim_unchecked(q, gas);
                if w.is_physical() {
                    Ok(w)
                } else {
                    Err(Error::BlowUp { step: 0, cell: i, rho: w.rho.f64(), p: w.p.f64() })
                }
            })
            .collect()
    }

    /// Σ U_i·dx per component.
    pub fn totals(&self) -> [T; 3] {
        let dx = self.dx();
        let mut t = [T::zero(); 3];
        for q in &self.cells {
            for k in 0..3 {
                t[k] = t[k] + q[k] * dx;
            }
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// Zero-gradient extrapolation.
    Transmissive,
    /// Solid wall: mirrored state with negated velocity.
    Reflective,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boundaries {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
}

impl Boundaries {
    pub fn both(bc: BoundaryCondition) -> Self {
        Self { left: bc, right: bc }
    }

    pub fn validate(&self) -> Result<()> {
        let periodic = |b| b == BoundaryCondition::Periodic;
        if periodic(self.left) != periodic(self.right) {
            return Err(Error::Config("periodic boundaries must be set on both ends".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeControls<T> {
    pub cfl: T,
    pub t_final: T,
    pub max_steps: usize,
    /// Overrides the CFL step (still clipped at `t_final`).
    pub fixed_dt: Option<T>,
}

impl<T: Real> TimeControls<T> {
    pub fn new(cfl: T, t_final: T) -> Self {
        Self { cfl, t_final, max_steps: 10_000_000, fixed_dt: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > T::zero() && self.cfl <= T::one()) {
            return Err(Error::Config(format!("CFL number {} outside (0, 1]", self.cfl)));
        }
        if !(self.t_final >= T::zero()) {
            return Err(Error::Config(format!("final time {} must be non-negative", self.t_final)));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > T::zero()) {
                return Err(Error::Config(format!("fixed time step {dt} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    First,
    Second,
}

impl Order {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(Error::Config(format!("order must be 1 or 2, got {n}"))),
        }
    }

    pub fn ghost_cells(self) -> usize {
        match self {
            Order::First => 1,
            Order::Second => 2,
        }
    }

    pub fn number(self) -> u32 {
        match self {
            Order::First => 1,
            Order::Second => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionConfig<T> {
    pub order: Order,
    /// Venkatakrishnan constant K in ε² = (KΔx)³.
    pub limiter_k: T,
}

impl<T: Real> ReconstructionConfig<T> {
    pub fn first_order() -> Self {
        Self { order: Order::First, limiter_k: T::c(0.1) }
    }

    pub fn second_order(limiter_k: T) -> Self {
        Self { order: Order::Second, limiter_k }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == Order::Second && !(self.limiter_k > T::zero()) {
            return Err(Error::Config(format!("limiter constant K = {} must be positive", self.limiter_k)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLog<T> {
    pub steps: usize,
    pub time: T,
    pub min_dt: T,
    pub max_dt: T,
    /// False when `max_steps` stopped the run early.
    pub reached_final: bool,
}

/// dt = cfl·dx / max(|u| + a).
pub fn compute_dt<T: Real>(states: &[Primitive<T>], gas: &GasModel<T>, dx: T, cfl: T) -> Result<T> {
    let mut smax = T::zero();
    for w in states {
        w.check()?;
        smax = smax.max(w.u.abs() + sound_speed_sq(w, gas).sqrt());
    }
    Ok(cfl * dx / smax)
}

/// ε² = (KΔx)³
pub fn limiter_epsilon_sq<T: Real>(k: T, dx: T) -> T {
    (k * dx).powi(3)
}

/// Limited slope ((Δ₊²+ε²)Δ₋ + (Δ₋²+ε²)Δ₊) / (Δ₊² + Δ₋² + 2ε²); the face
/// values are the cell value ± half of it.
#[inline]
pub fn venkatakrishnan_slope<T: Real>(dminus: T, dplus: T, eps2: T) -> T {
    let (m2, p2) = (dminus * dminus, dplus * dplus);
    let den = p2 + m2 + T::two() * eps2;
    if den == T::zero() {
        return T::zero();
    }
    ((p2 + eps2) * dminus + (m2 + eps2) * dplus) / den
}

/// Face values on either side of each interior face.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceValues<T> {
    /// Value just left of face j (from cell j−1).
    pub left: Vec<T>,
    /// Value just right of face j (from cell j).
    pub right: Vec<T>,
}

/// Reconstructs one variable. `values` holds the n interior cells padded by
/// two ghost cells on each side; the n+1 faces of the interior are returned.
pub fn muscl_reconstruct<T: Real>(values: &[T], dx: T, k: T) -> FaceValues<T> {
    assert!(values.len() >= 5, "need two ghost cells on each side");
    let eps2 = limiter_epsilon_sq(k, dx);
    let slope = |c: usize| venkatakrishnan_slope(values[c] - values[c - 1], values[c + 1] - values[c], eps2);
    let n = values.len() - 4;
    let mut left = Vec::with_capacity(n + 1);
    let mut right = Vec::with_capacity(n + 1);
    for j in 0..=n {
        left.push(values[j + 1] + T::half() * slope(j + 1));
        right.push(values[j + 2] - T::half() * slope(j + 2));
    }
    FaceValues { left, right }
}

fn pad<T: Real>(w: &[Primitive<T>], ng: usize, bc: &Boundaries) -> Vec<Primitive<T>> {
    let n = w.len();
    let mut out = Vec::with_capacity(n + 2 * ng);
    for k in (1..=ng).rev() {
        out.push(match bc.left {
            BoundaryCondition::Transmissive => w[0],
            BoundaryCondition::Reflective => w[k - 1].mirrored(),
            BoundaryCondition::Periodic => w[n - k],
        });
    }
    out.extend_from_slice(w);
    for k in 1..=ng {
        out.push(match bc.right {
            BoundaryCondition::Transmissive => w[n - 1],
            BoundaryCondition::Reflective => w[n - k].mirrored(),
            BoundaryCondition::Periodic => w[k - 1],
        });
    }
    out
}

struct Stepper<'a, T> {
    scheme: SchemeKind,
    recon: ReconstructionConfig<T>,
    bc: Boundaries,
    gas: &'a GasModel<T>,
    dx: T,
}

impl<T: Real> Stepper<'_, T> {
    fn primitives(&self, cells: &[Conserved<T>], step: usize) -> Result<Vec<Primitive<T>>> {
        let mut out = Vec::with_capacity(cells.len());
        for (i, q) in cells.iter().enumerate() {
            let w = cons_to_prim_unchecked(q, self.gas);
            if !w.is_physical() {
                return Err(Error::BlowUp { step, cell: i, rho: w.rho.f64(), p: w.p.f64() });
            }
            out.push(w);
        }
        Ok(out)
    }

    /// Face states (left, right) for the n+1 faces.
    fn face_states(&self, w: &[Primitive<T>], step: usize) -> Result<Vec<(Primitive<T>, Primitive<T>)>> {
        let n = w.len();
        let ng = self.recon.order.ghost_cells();
        let padded = pad(w, ng, &self.bc);
        match self.recon.order {
            Order::First => Ok((0..=n).map(|j| (padded[j], padded[j + 1])).collect()),
            Order::Second => {
                let k = self.recon.limiter_k;
                let comp = |f: fn(&Primitive<T>) -> T| {
                    let v: Vec<T> = padded.iter().map(f).collect();
                    muscl_reconstruct(&v, self.dx, k)
                };
                let rho = comp(|w| w.rho);
                let u = comp(|w| w.u);
                let p = comp(|w| w.p);
                let mut faces = Vec::with_capacity(n + 1);
                for j in 0..=n {
                    let l = Primitive::new_unchecked(rho.left[j], u.left[j], p.left[j]);
                    let r = Primitive::new_unchecked(rho.right[j], u.right[j], p.right[j]);
                    for (side, cell) in [(l, j.saturating_sub(1)), (r, j.min(n - 1))] {
                        if !side.is_physical() {
                            return Err(Error::BlowUp { step, cell, rho: side.rho.f64(), p: side.p.f64() });
                        }
                    }
                    faces.push((l, r));
                }
                Ok(faces)
            }
        }
    }

    fn fluxes(&self, w: &[Primitive<T>], step: usize) -> Result<Vec<FluxVector<T>>> {
        let faces = self.face_states(w, step)?;
        let flux = |(l, r): &(Primitive<T>, Primitive<T>)| interface_flux(self.scheme, l, r, self.gas);
        Ok(if faces.len() >= PARALLEL_THRESHOLD { faces.par_iter().map(flux).collect() } else { faces.iter().map(flux).collect() })
    }

    /// U − (dt/dx)(F_{i+½} − F_{i−½})
    fn euler_update(&self, cells: &[Conserved<T>], w: &[Primitive<T>], dt: T, step: usize) -> Result<Vec<Conserved<T>>> {
        let f = self.fluxes(w, step)?;
        let r = dt / self.dx;
        Ok(cells.iter().enumerate().map(|(i, q)| *q - (f[i + 1] - f[i]) * r).collect())
    }
}

/// Advances `grid` from its current time to `controls.t_final`.
pub fn advance<T: Real>(
    grid: &Grid1D<T>,
    scheme: SchemeKind,
    recon: ReconstructionConfig<T>,
    bc: Boundaries,
    controls: TimeControls<T>,
    gas: &GasModel<T>,
) -> Result<(Grid1D<T>, StepLog<T>)> {
    bc.validate()?;
    controls.validate()?;
    recon.validate()?;
    let dx = grid.dx();
    let stepper = Stepper { scheme, recon, bc, gas, dx };
    let mut cells = grid.cells.clone();
    let mut t = grid.time;
    let mut log = StepLog { steps: 0, time: t, min_dt: T::infinity(), max_dt: T::zero(), reached_final: false };

    while t < controls.t_final {
        if log.steps >= controls.max_steps {
            break;
        }
        let step = log.steps + 1;
        let w = stepper.primitives(&cells, step)?;
        let mut dt = match controls.fixed_dt {
            Some(dt) => dt,
            None => compute_dt(&w, gas, dx, controls.cfl)?,
        };
        if t + dt > controls.t_final {
            dt = controls.t_final - t;
        }
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::BlowUp { step, cell: 0, rho: f64::NAN, p: f64::NAN });
        }
        cells = match recon.order {
            Order::First => stepper.euler_update(&cells, &w, dt, step)?,
            Order::Second => {
                let stage = stepper.euler_update(&cells, &w, dt, step)?;
                let w1 = stepper.primitives(&stage, step)?;
                let stage2 = stepper.euler_update(&stage, &w1, dt, step)?;
                cells.iter().zip(&stage2).map(|(a, b)| (*a + *b) * T::half()).collect()
            }
        };
        t = if t + dt >= controls.t_final { controls.t_final } else { t + dt };
        log.steps = step;
        log.min_dt = log.min_dt.min(dt);
        log.max_dt = log.max_dt.max(dt);
    }
    // final states must be physical too
    stepper.primitives(&cells, log.steps)?;
    log.time = t;
    log.reached_final = t >= controls.t_final;
    Ok((Grid1D { x_min: grid.x_min, x_max: grid.x_max, cells, time: t }, log))
}

/// Builds a primitive-state vector of the grid without physicality checks;
/// useful for output after a successful run.
pub fn primitives_unchecked<T: Real>(grid: &Grid1D<T>, gas: &GasModel<T>) -> Vec<Primitive<T>> {
    grid.cells.iter().map(|q| cons_to_prim_unchecked(q, gas)).collect()
}

/// Conserved state of a primitive, without validation.
pub fn conserved_unchecked<T: Real>(w: &Primitive<T>, gas: &GasModel<T>) -> Conserved<T> {
    prim_to_cons_unchecked(w, gas)
}
