//! One-dimensional benchmark problems, error norms against reference
//! solutions and convergence-order estimates.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fds::{error3, SchemeKind};
use crate::riemann::RiemannSolution;
use crate::scalar::Real;
use crate::solver1d::{advance, Boundaries, BoundaryCondition, Grid1D, ReconstructionConfig, StepLog, TimeControls};
use crate::state::{cons_to_prim_unchecked, internal_energy, prim_to_cons, GasModel, Primitive};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition<T> {
    /// Single jump at `x0`.
    Riemann { x0: T, left: Primitive<T>, right: Primitive<T> },
    /// ρ = 1 + A·sin(πx) with constant u and p.
    Smooth { amplitude: T, u: T, p: T },
    /// Jumps at `x1` and `x2`.
    ThreeState { x1: T, x2: T, left: Primitive<T>, middle: Primitive<T>, right: Primitive<T> },
    /// `left` for x < x0, otherwise (1 + A·sin(kπx), 0, 1).
    ShockEntropy { x0: T, left: Primitive<T>, amplitude: T, wavenumber: T },
}

impl<T: Real> InitialCondition<T> {
    pub fn state_at(&self, x: T) -> Primitive<T> {
        match *self {
            InitialCondition::Riemann { x0, left, right } => {
                if x < x0 {
                    left
                } else {
                    right
                }
            }
            InitialCondition::Smooth { amplitude, u, p } => Primitive::new_unchecked(T::one() + amplitude * (T::PI() * x).sin(), u, p),
            InitialCondition::ThreeState { x1, x2, left, middle, right } => {
                if x < x1 {
                    left
                } else if x < x2 {
                    middle
                } else {
                    right
                }
            }
            InitialCondition::ShockEntropy { x0, left, amplitude, wavenumber } => {
                if x < x0 {
                    left
                } else {
                    Primitive::new_unchecked(T::one() + amplitude * (wavenumber * T::PI() * x).sin(), T::zero(), T::one())
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    ExactRiemann,
    TranslatedSmooth,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec<T> {
    pub name: &'static str,
    pub title: &'static str,
    pub x_min: T,
    pub x_max: T,
    pub initial: InitialCondition<T>,
    pub boundaries: Boundaries,
    pub t_final: T,
    /// Additional output times before `t_final`.
    pub snapshots: Vec<T>,
    pub n_cells: usize,
    pub cfl: T,
    pub reference: ReferenceKind,
}

impl<T: Real> CaseSpec<T> {
    pub fn initial_grid(&self, n_cells: usize, gas: &GasModel<T>) -> Result<Grid1D<T>> {
        Grid1D::from_fn(self.x_min, self.x_max, n_cells, |x| self.initial.state_at(x), gas)
    }

    /// Location of the (first) discontinuity, if any.
    pub fn discontinuity(&self) -> Option<T> {
        match self.initial {
            InitialCondition::Riemann { x0, .. } | InitialCondition::ShockEntropy { x0, .. } => Some(x0),
            InitialCondition::ThreeState { x1, .. } => Some(x1),
            InitialCondition::Smooth { .. } => None,
        }
    }

    /// One-line parameter summary.
    pub fn describe(&self) -> String {
        let fmt_w = |w: &Primitive<T>| format!("({}, {}, {})", w.rho, w.u, w.p);
        let ic = match &self.initial {
            InitialCondition::Riemann { x0, left, right } => format!("x0={x0} L={} R={}", fmt_w(left), fmt_w(right)),
            InitialCondition::Smooth { amplitude, u, p } => format!("rho=1+{amplitude}sin(pi x) u={u} p={p}"),
            InitialCondition::ThreeState { x1, x2, left, middle, right } => {
                format!("x1={x1} x2={x2} L={} M={} R={}", fmt_w(left), fmt_w(middle), fmt_w(right))
            }
            InitialCondition::ShockEntropy { x0, left, amplitude, wavenumber } => {
                format!("x0={x0} L={} R=(1+{amplitude}sin({wavenumber}pi x), 0, 1)", fmt_w(left))
            }
        };
        format!(
            "domain=[{}, {}] t={} cells={} cfl={} bc={:?}/{:?} {ic}",
            self.x_min, self.x_max, self.t_final, self.n_cells, self.cfl, self.boundaries.left, self.boundaries.right
        )
    }
}

fn prim<T: Real>(rho: f64, u: f64, p: f64) -> Primitive<T> {
    Primitive::new_unchecked(T::c(rho), T::c(u), T::c(p))
}

/// State given as (ρ, m, E) with m = ρu and E the total energy per volume.
fn from_conserved<T: Real>(rho: f64, m: f64, e: f64, gas: &GasModel<T>) -> Primitive<T> {
    cons_to_prim_unchecked(&crate::linalg::Vector([T::c(rho), T::c(m), T::c(e)]), gas)
}

/// The eleven one-dimensional test problems.
pub fn case_registry<T: Real>() -> Vec<CaseSpec<T>> {
    let gas = GasModel::<T>::air();
    let transmissive = Boundaries::both(BoundaryCondition::Transmissive);
    let riemann = |name, title, x_min: f64, x_max: f64, x0: f64, l, r, t: f64| CaseSpec {
        name,
        title,
        x_min: T::c(x_min),
        x_max: T::c(x_max),
        initial: InitialCondition::Riemann { x0: T::c(x0), left: l, right: r },
        boundaries: transmissive,
        t_final: T::c(t),
        snapshots: vec![],
        n_cells: 100,
        cfl: T::c(0.8),
        reference: ReferenceKind::ExactRiemann,
    };
    vec![
        CaseSpec {
            name: "smooth",
            title: "periodic smooth density wave",
            x_min: T::zero(),
            x_max: T::two(),
            initial: InitialCondition::Smooth { amplitude: T::c(0.2), u: T::c(0.1), p: T::c(0.5) },
            boundaries: Boundaries::both(BoundaryCondition::Periodic),
            t_final: T::c(0.5),
            snapshots: vec![],
            n_cells: 40,
            cfl: T::c(0.8),
            reference: ReferenceKind::TranslatedSmooth,
        },
        riemann("sod", "Sod shock tube (dimensional)", -10.0, 10.0, 0.0, prim(1.0, 0.0, 1e5), prim(0.125, 0.0, 1e4), 0.01),
        riemann("lax", "Lax shock tube", 0.0, 1.0, 0.5, prim(0.445, 0.698, 3.528), prim(0.5, 0.0, 0.571), 0.15),
        riemann("sonic", "sonic-point rarefaction", 0.0, 1.0, 0.3, prim(1.0, 0.75, 1.0), prim(0.125, 0.0, 0.1), 0.2),
        riemann("strong-shock", "strong shock", 0.0, 1.0, 0.5, prim(1.0, 0.0, 1000.0), prim(1.0, 0.0, 0.01), 0.012),
        riemann("contact", "stationary contact", 0.0, 1.0, 0.5, prim(1.4, 0.0, 1.0), prim(1.0, 0.0, 1.0), 1.0),
        riemann(
            "slow-contact",
            "strong shock with slowly moving contact",
            0.0,
            1.0,
            0.8,
            prim(1.0, -19.59745, 1000.0),
            prim(1.0, -19.59745, 0.01),
            0.012,
        ),
        CaseSpec {
            reference: ReferenceKind::ExactRiemann,
            ..riemann(
                "slow-shock",
                "slowly moving shock",
                0.0,
                1.0,
                0.2,
                from_conserved(3.86, -3.1266, 27.0913, &gas),
                from_conserved(1.0, -3.44, 8.4168, &gas),
                4.0,
            )
        },
        riemann("mach3", "Mach 3 expansion", 0.0, 1.0, 0.4, prim(3.857, 0.92, 10.333), prim(1.0, 3.55, 1.0), 0.1),
        CaseSpec {
            name: "blast",
            title: "interacting blast waves",
            x_min: T::zero(),
            x_max: T::one(),
            initial: InitialCondition::ThreeState {
                x1: T::c(0.1),
                x2: T::c(0.9),
                left: prim(1.0, 0.0, 1000.0),
                middle: prim(1.0, 0.0, 0.01),
                right: prim(1.0, 0.0, 100.0),
            },
            boundaries: Boundaries::both(BoundaryCondition::Reflective),
            t_final: T::c(0.038),
            snapshots: vec![T::c(0.026)],
            n_cells: 3000,
            cfl: T::c(0.5),
            reference: ReferenceKind::None,
        },
        CaseSpec {
            name: "shock-entropy",
            title: "shock / entropy-wave interaction",
            x_min: -T::one(),
            x_max: T::one(),
            initial: InitialCondition::ShockEntropy {
                x0: T::c(-0.8),
                left: prim(3.857143, 2.629369, 10.3333),
                amplitude: T::c(0.2),
                wavenumber: T::c(5.0),
            },
            boundaries: transmissive,
            t_final: T::c(0.47),
            snapshots: vec![],
            n_cells: 800,
            cfl: T::c(0.8),
            reference: ReferenceKind::None,
        },
    ]
}

pub fn find_case<T: Real>(name: &str) -> Result<CaseSpec<T>> {
    case_registry().into_iter().find(|c| c.name == name).ok_or_else(|| Error::Config(format!("unknown 1D case '{name}'")))
}

/// Optional overrides for a benchmark run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions<T> {
    pub n_cells: Option<usize>,
    pub cfl: Option<T>,
    pub t_final: Option<T>,
    pub max_steps: Option<usize>,
}

impl<T> Default for RunOptions<T> {
    fn default() -> Self {
        Self { n_cells: None, cfl: None, t_final: None, max_steps: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseRun<T> {
    pub grid: Grid1D<T>,
    pub log: StepLog<T>,
    /// Grids at the case's snapshot times, in order.
    pub snapshots: Vec<Grid1D<T>>,
}

pub fn run_case<T: Real>(
    case: &CaseSpec<T>,
    scheme: SchemeKind,
    recon: ReconstructionConfig<T>,
    options: RunOptions<T>,
    gas: &GasModel<T>,
) -> Result<CaseRun<T>> {
    let n = options.n_cells.unwrap_or(case.n_cells);
    let t_final = options.t_final.unwrap_or(case.t_final);
    if !(t_final > T::zero()) {
        return Err(Error::Config(format!("final time {t_final} must be positive")));
    }
    let mut grid = case.initial_grid(n, gas)?;
    let mut snapshots = Vec::new();
    let mut log = StepLog { steps: 0, time: T::zero(), min_dt: T::infinity(), max_dt: T::zero(), reached_final: false };
    let stops: Vec<T> = case.snapshots.iter().copied().filter(|&s| s < t_final).chain([t_final]).collect();
    for (k, &stop) in stops.iter().enumerate() {
        let mut controls = TimeControls::new(options.cfl.unwrap_or(case.cfl), stop);
        if let Some(m) = options.max_steps {
            controls.max_steps = m.saturating_sub(log.steps);
        }
        let (next, part) = advance(&grid, scheme, recon, case.boundaries, controls, gas).map_err(|e| match e {
            Error::BlowUp { step, cell, rho, p } => Error::BlowUp { step: step + log.steps, cell, rho, p },
            other => other,
        })?;
        log = StepLog {
            steps: log.steps + part.steps,
            time: part.time,
            min_dt: log.min_dt.min(part.min_dt),
            max_dt: log.max_dt.max(part.max_dt),
            reached_final: part.reached_final,
        };
        grid = next;
        if k + 1 < stops.len() {
            snapshots.push(grid.clone());
        }
        if !part.reached_final {
            break;
        }
    }
    Ok(CaseRun { grid, log, snapshots })
}

/// Variable compared by the error norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    Density,
    Velocity,
    Pressure,
    InternalEnergy,
}

impl Variable {
    pub fn of<T: Real>(self, w: &Primitive<T>, gas: &GasModel<T>) -> T {
        match self {
            Variable::Density => w.rho,
            Variable::Velocity => w.u,
            Variable::Pressure => w.p,
            Variable::InternalEnergy => internal_energy(w, gas),
        }
    }
}

impl FromStr for Variable {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rho" | "density" => Ok(Variable::Density),
            "u" | "velocity" => Ok(Variable::Velocity),
            "p" | "pressure" => Ok(Variable::Pressure),
            "e" | "energy" => Ok(Variable::InternalEnergy),
            other => Err(format!("unknown variable '{other}'")),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::Density => "rho",
            Variable::Velocity => "u",
            Variable::Pressure => "p",
            Variable::InternalEnergy => "e",
        })
    }
}

/// Reference solution of a case at time `t`, as a function of x.
pub fn reference_sampler<T: Real>(case: &CaseSpec<T>, t: T, gas: &GasModel<T>) -> Result<Box<dyn Fn(T) -> Primitive<T> + Send + Sync>> {
    match (case.reference, case.initial) {
        (ReferenceKind::ExactRiemann, InitialCondition::Riemann { x0, left, right }) => {
            let sol = RiemannSolution::new(left, right, x0, *gas)?;
            Ok(Box::new(move |x| sol.at(x, t)))
        }
        (ReferenceKind::TranslatedSmooth, InitialCondition::Smooth { amplitude, u, p }) => {
            let ic = InitialCondition::Smooth { amplitude, u, p };
            Ok(Box::new(move |x| ic.state_at(x - u * t)))
        }
        _ => Err(Error::NoReference(format!("case '{}' has no reference solution", case.name))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport<T> {
    pub l1: T,
    pub l2: T,
    pub linf: T,
}

/// L1 = Σ|e|·dx, L2 = √(Σe²·dx), L∞ = max|e|, with e sampled at cell
/// centres.
pub fn error_norms<T: Real>(
    grid: &Grid1D<T>,
    reference: &dyn Fn(T) -> Primitive<T>,
    variable: Variable,
    gas: &GasModel<T>,
) -> ErrorReport<T> {
    let dx = grid.dx();
    let (mut s1, mut s2, mut inf) = (T::zero(), T::zero(), T::zero());
    for (i, q) in grid.cells.iter().enumerate() {
        let w = cons_to_prim_unchecked(q, gas);
        let e = (variable.of(&w, gas) - variable.of(&reference(grid.center(i)), gas)).abs();
        s1 = s1 + e;
        s2 = s2 + e * e;
        inf = inf.max(e);
    }
    ErrorReport { l1: s1 * dx, l2: (s2 * dx).sqrt(), linf: inf }
}

/// s = (log E₁ − log E₂)/(log h₁ − log h₂)
pub fn eoc<T: Real>(e1: T, h1: T, e2: T, h2: T) -> Result<T> {
    if !(e1 > T::zero() && e2 > T::zero()) || h1 == h2 || !(h1 > T::zero() && h2 > T::zero()) {
        return Err(Error::InvalidEoc);
    }
    Ok((e1.ln() - e2.ln()) / (h1.ln() - h2.ln()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow<T> {
    pub cells: usize,
    pub h: T,
    pub errors: ErrorReport<T>,
    /// Orders relative to the previous (coarser) row.
    pub eoc: Option<ErrorReport<T>>,
}

pub fn convergence_study<T: Real>(
    case: &CaseSpec<T>,
    scheme: SchemeKind,
    recon: ReconstructionConfig<T>,
    grids: &[usize],
    variable: Variable,
    cfl: Option<T>,
    gas: &GasModel<T>,
) -> Result<Vec<ConvergenceRow<T>>> {
    let reference = reference_sampler(case, case.t_final, gas)?;
    let mut rows: Vec<ConvergenceRow<T>> = Vec::new();
    for &n in grids {
        let run = run_case(case, scheme, recon, RunOptions { n_cells: Some(n), cfl, ..Default::default() }, gas)?;
        let errors = error_norms(&run.grid, reference.as_ref(), variable, gas);
        let h = run.grid.dx();
        let order = match rows.last() {
            Some(prev) => Some(ErrorReport {
                l1: eoc(prev.errors.l1, prev.h, errors.l1, h)?,
                l2: eoc(prev.errors.l2, prev.h, errors.l2, h)?,
                linf: eoc(prev.errors.linf, prev.h, errors.linf, h)?,
            }),
            None => None,
        };
        rows.push(ConvergenceRow { cells: n, h, errors, eoc: order });
    }
    Ok(rows)
}

/// Left and right states of the steady shock family at Mach `m`:
/// p_l = 1/(γM²), ρ_l = 1, u_l = 1, right state from the jump relations.
pub fn steady_shock_states<T: Real>(m: T, gas: &GasModel<T>) -> (Primitive<T>, Primitive<T>) {
    let g = gas.gamma();
    let (one, two) = (T::one(), T::two());
    let m2 = m * m;
    let pl = (g * m2).recip();
    let pr = pl * (two * g * m2 - (g - one)) / (g + one);
    let ratio = pr / pl;
    let k = (g + one) / (g - one);
    let rhor = (k * ratio + one) / (k + ratio);
    let ur = (g * (two + (g - one) * m2) * pr / ((two * g * m2 + one - g) * rhor)).sqrt();
    (Primitive::new_unchecked(one, one, pl), Primitive::new_unchecked(rhor, ur, pr))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Error3Row<T> {
    pub mach: T,
    pub error3: T,
    /// max(|ρE|_l, |ρE|_r)
    pub scale: T,
    pub density_ratio: T,
}

pub fn error3_sweep<T: Real>(machs: &[T], gas: &GasModel<T>) -> Result<Vec<Error3Row<T>>> {
    machs
        .iter()
        .map(|&m| {
            if !(m > T::one()) {
                return Err(Error::Config(format!("Mach number {m} must exceed 1")));
            }
            let (l, r) = steady_shock_states(m, gas);
            let scale = prim_to_cons(&l, gas)?[2].abs().max(prim_to_cons(&r, gas)?[2].abs());
            Ok(Error3Row { mach: m, error3: error3(&l, &r, gas), scale, density_ratio: r.rho / l.rho })
        })
        .collect()
}

/// Largest ratio, over interior cells of the rarefaction fan
/// (`head`, `tail`), of a cell's density jump to the mean jump of its two
/// neighbours. An expansion shock shows up as a large ratio.
pub fn fan_jump_ratio<T: Real>(grid: &Grid1D<T>, head: T, tail: T, gas: &GasModel<T>) -> T {
    let rho: Vec<T> = grid.cells.iter().map(|q| cons_to_prim_unchecked(q, gas).rho).collect();
    let inside: Vec<usize> = (0..grid.n_cells()).filter(|&i| grid.center(i) > head && grid.center(i) < tail).collect();
    let mut worst = T::zero();
    if inside.len() < 4 {
        return worst;
    }
    let jump = |i: usize| (rho[i + 1] - rho[i]).abs();
    let (first, last) = (inside[0], *inside.last().unwrap());
    for i in first + 1..last - 1 {
        let neighbours = T::half() * (jump(i - 1) + jump(i + 1));
        if neighbours > T::zero() {
            worst = worst.max(jump(i) / neighbours);
        } else if jump(i) > T::zero() {
            return T::infinity();
        }
    }
    worst
}

/// Head and tail positions of the left rarefaction of a Riemann case at
/// time `t`, when the left wave is a rarefaction.
pub fn left_fan_extent<T: Real>(case: &CaseSpec<T>, t: T, gas: &GasModel<T>) -> Result<Option<(T, T)>> {
    let InitialCondition::Riemann { x0, left, right } = case.initial else {
        return Ok(None);
    };
    let sol = RiemannSolution::new(left, right, x0, *gas)?;
    if sol.star.p_star >= left.p {
        return Ok(None);
    }
    let g = gas.gamma();
    let a = (g * left.p / left.rho).sqrt();
    let a_star = a * (sol.star.p_star / left.p).powf((g - T::one()) / (T::two() * g));
    Ok(Some((x0 + (left.u - a) * t, x0 + (sol.star.u_star - a_star) * t)))
}

/// Cell averages of `fine` merged `factor` at a time.
pub fn coarsen<T: Real>(fine: &Grid1D<T>, factor: usize) -> Result<Grid1D<T>> {
    if factor == 0 || !fine.n_cells().is_multiple_of(factor) {
        return Err(Error::Config(format!("cannot coarsen {} cells by {factor}", fine.n_cells())));
    }
    let inv = T::c(factor as f64).recip();
    let cells = fine.cells.chunks(factor).map(|c| c.iter().fold(crate::linalg::Vector::zeros(), |acc, q| acc + *q) * inv).collect();
    Ok(Grid1D { x_min: fine.x_min, x_max: fine.x_max, cells, time: fine.time })
}

/// Σ|ρ_a − ρ_b|·dx between two grids of equal size.
pub fn l1_density_distance<T: Real>(a: &Grid1D<T>, b: &Grid1D<T>) -> Result<T> {
    if a.n_cells() != b.n_cells() {
        return Err(Error::Config("grids differ in size".into()));
    }
    Ok(a.cells.iter().zip(&b.cells).map(|(x, y)| (x[0] - y[0]).abs()).sum::<T>() * a.dx())
}
