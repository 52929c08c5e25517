//! The two-dimensional benchmark problems and the diagnostics used to
//! judge them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solver1d::{Order, ReconstructionConfig};
use crate::state::GasModel;

use super::grid::Mesh2D;
use super::solver::{advance_2d, Bc2D, Boundaries2D, Log2D, Solver2DConfig, StructuredGrid2D};
use super::state::Prim2D;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Case2DKind<T> {
    /// Oblique shock entering at the top-left corner and reflecting off
    /// the bottom wall.
    ShockReflection,
    /// Channel flow over a compression ramp followed by a plateau.
    Ramp,
    /// Moving normal shock meeting a wedge.
    Wedge,
    /// Bow shock in front of a cylinder; free-stream Mach number.
    HalfCylinder { mach: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourVariable {
    Density,
    Pressure,
}

impl ContourVariable {
    pub fn name(self) -> &'static str {
        match self {
            ContourVariable::Density => "rho",
            ContourVariable::Pressure => "p",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case2D<T> {
    pub name: &'static str,
    pub title: &'static str,
    pub kind: Case2DKind<T>,
    /// Grids of interest; the first is the default.
    pub grids: Vec<(usize, usize)>,
    pub order: Order,
    /// Limiter constant K used at second order.
    pub limiter_k: T,
    pub t_final: T,
    /// Residual drop that counts as steady, for steady problems.
    pub steady_drop: Option<T>,
    pub max_steps: usize,
    pub cfl: T,
    pub contour: ContourVariable,
    /// "start:step:end", when the figure states one.
    pub contour_levels: Option<&'static str>,
}

/// Incident shock angle of the reflection problem, measured from the top wall.
pub const INCIDENT_ANGLE_DEG: f64 = 29.0;
/// Prescribed state along the top of the reflection problem.
pub const REFLECTION_TOP: [f64; 4] = [1.69997, 2.61934, -0.50633, 1.52819];
const REFLECTION_INFLOW: [f64; 4] = [1.0, 2.9, 0.0, 1.0 / 1.4];

const RAMP_ANGLE_DEG: f64 = 15.0;
const RAMP_START: f64 = 0.5;
const RAMP_END: f64 = 1.5;

const WEDGE_ANGLE_DEG: f64 = 30.0;
const WEDGE_CORNER: f64 = 0.5;
const WEDGE_SHOCK_X: f64 = 0.25;
const WEDGE_MACH: f64 = 5.5;

const CYLINDER_RADIUS: f64 = 1.0;
const CYLINDER_FAR_X: f64 = 2.0;
const CYLINDER_FAR_Y: f64 = 4.0;

fn prim<T: Real>(s: [f64; 4]) -> Prim2D<T> {
    Prim2D::new_unchecked(T::c(s[0]), T::c(s[1]), T::c(s[2]), T::c(s[3]))
}

/// State behind a normal shock of Mach number `mach` running in +x into
/// the still gas `pre`.
pub fn moving_shock_state<T: Real>(pre: &Prim2D<T>, mach: T, gas: &GasModel<T>) -> Prim2D<T> {
    let g = gas.gamma();
    let (one, two) = (T::one(), T::two());
    let m2 = mach * mach;
    let a = (g * pre.p / pre.rho).sqrt();
    let rho = pre.rho * (g + one) * m2 / ((g - one) * m2 + two);
    let p = pre.p * (two * g * m2 - (g - one)) / (g + one);
    let u = pre.u + two * a * (m2 - one) / ((g + one) * mach);
    Prim2D::new_unchecked(rho, u, pre.v, p)
}

fn ramp_height<T: Real>(x: T) -> T {
    let slope = T::c(RAMP_ANGLE_DEG.to_radians().tan());
    let (s, e) = (T::c(RAMP_START), T::c(RAMP_END));
    if x <= s {
        T::zero()
    } else if x <= e {
        (x - s) * slope
    } else {
        (e - s) * slope
    }
}

fn wedge_height<T: Real>(x: T) -> T {
    let c = T::c(WEDGE_CORNER);
    if x <= c {
        T::zero()
    } else {
        (x - c) * T::c(WEDGE_ANGLE_DEG.to_radians().tan())
    }
}

impl<T: Real> Case2D<T> {
    pub fn default_grid(&self) -> (usize, usize) {
        self.grids[0]
    }

    pub fn mesh(&self, ni: usize, nj: usize) -> Result<Mesh2D<T>> {
        match self.kind {
            Case2DKind::ShockReflection => Mesh2D::rectangle(T::zero(), T::c(3.0), T::zero(), T::one(), ni, nj),
            Case2DKind::Ramp => Mesh2D::sheared(T::zero(), T::c(3.0), T::one(), ramp_height, ni, nj),
            Case2DKind::Wedge => Mesh2D::sheared(T::zero(), T::two(), T::c(1.5), wedge_height, ni, nj),
            Case2DKind::HalfCylinder { .. } => {
                Mesh2D::half_cylinder(T::c(CYLINDER_RADIUS), T::c(CYLINDER_FAR_X), T::c(CYLINDER_FAR_Y), ni, nj)
            }
        }
    }

    /// Free stream (or pre-shock) state.
    pub fn free_stream(&self, gas: &GasModel<T>) -> Prim2D<T> {
        match self.kind {
            Case2DKind::ShockReflection => prim(REFLECTION_INFLOW),
            Case2DKind::Ramp => Prim2D::new_unchecked(T::c(1.4), T::two(), T::zero(), T::one()),
            Case2DKind::Wedge => Prim2D::new_unchecked(T::c(1.4), T::zero(), T::zero(), T::one()),
            Case2DKind::HalfCylinder { mach } => Prim2D::new_unchecked(T::one(), mach, T::zero(), gas.gamma().recip()),
        }
    }

    pub fn initial_state(&self, x: T, _y: T, gas: &GasModel<T>) -> Prim2D<T> {
        let free = self.free_stream(gas);
        match self.kind {
            Case2DKind::Wedge if x < T::c(WEDGE_SHOCK_X) => moving_shock_state(&free, T::c(WEDGE_MACH), gas),
            _ => free,
        }
    }

    pub fn boundaries(&self, mesh: &Mesh2D<T>, gas: &GasModel<T>) -> Boundaries2D<T> {
        let free = self.free_stream(gas);
        let inflow = Bc2D::SupersonicInflow(free);
        let (out, wall) = (Bc2D::SupersonicOutflow, Bc2D::SlipWall);
        match self.kind {
            Case2DKind::ShockReflection => Boundaries2D::uniform(mesh, inflow, out, wall, Bc2D::PostShockDirichlet(prim(REFLECTION_TOP))),
            Case2DKind::Ramp => Boundaries2D::uniform(mesh, inflow, out, wall, wall),
            Case2DKind::Wedge => {
                let post = moving_shock_state(&free, T::c(WEDGE_MACH), gas);
                Boundaries2D::uniform(mesh, Bc2D::PostShockDirichlet(post), out, wall, wall)
            }
            // i-min is the body, i-max the far field, j-ends the outlets
            Case2DKind::HalfCylinder { .. } => Boundaries2D::uniform(mesh, wall, inflow, out, out),
        }
    }

    pub fn initial_grid(&self, ni: usize, nj: usize, gas: &GasModel<T>) -> Result<StructuredGrid2D<T>> {
        let mesh = Arc::new(self.mesh(ni, nj)?);
        StructuredGrid2D::from_fn(mesh, |x, y| self.initial_state(x, y, gas), gas)
    }

    pub fn describe(&self) -> String {
        let grids: Vec<String> = self.grids.iter().map(|(a, b)| format!("{a}x{b}")).collect();
        let stop = match self.steady_drop {
            Some(d) => format!("steady (residual drop {d}, t <= {})", self.t_final),
            None => format!("t={}", self.t_final),
        };
        format!(
            "grids={} order={} K={} cfl={} {stop} contours={} {}",
            grids.join(","),
            self.order.number(),
            self.limiter_k,
            self.cfl,
            self.contour.name(),
            self.contour_levels.unwrap_or("auto")
        )
    }
}

pub fn case_registry_2d<T: Real>() -> Vec<Case2D<T>> {
    let steady = |name, title, kind, levels| Case2D {
        name,
        title,
        kind,
        grids: vec![(120, 40), (240, 80)],
        order: Order::Second,
        // K = 0.1 leaves the residual stalled by limiter chatter
        limiter_k: T::one(),
        t_final: T::c(20.0),
        steady_drop: Some(T::c(1e-4)),
        max_steps: 200_000,
        cfl: T::half(),
        contour: ContourVariable::Pressure,
        contour_levels: Some(levels),
    };
    let cylinder = |name, title, mach: f64| Case2D {
        name,
        title,
        kind: Case2DKind::HalfCylinder { mach: T::c(mach) },
        grids: vec![(45, 45), (20, 320)],
        order: Order::First,
        limiter_k: T::c(0.1),
        t_final: T::c(20.0),
        steady_drop: Some(T::c(1e-4)),
        max_steps: 200_000,
        cfl: T::half(),
        contour: ContourVariable::Density,
        contour_levels: Some("2.0:0.2:5.0"),
    };
    vec![
        steady("shock-reflection", "Oblique shock reflection, M=2.9, 29 degrees", Case2DKind::ShockReflection, "0.7:0.1:2.9"),
        steady("ramp", "Mach 2 channel over a 15 degree ramp", Case2DKind::Ramp, "1.1:0.05:3.8"),
        Case2D {
            name: "wedge",
            title: "Mach 5.5 shock reflecting off a 30 degree wedge",
            kind: Case2DKind::Wedge,
            grids: vec![(400, 400)],
            // the limited second-order scheme undershoots to negative
            // pressure at the foot of the Mach stem on this grid
            order: Order::First,
            limiter_k: T::c(0.1),
            t_final: T::c(0.25),
            steady_drop: None,
            max_steps: 1_000_000,
            cfl: T::half(),
            contour: ContourVariable::Density,
            contour_levels: None,
        },
        cylinder("half-cylinder-m6", "Mach 6 flow past a half cylinder", 6.0),
        cylinder("half-cylinder-m20", "Mach 20 flow past a half cylinder", 20.0),
    ]
}

pub fn find_case_2d<T: Real>(name: &str) -> Result<Case2D<T>> {
    case_registry_2d().into_iter().find(|c| c.name == name).ok_or_else(|| Error::Config(format!("unknown 2D case '{name}'")))
}

/// Overrides for a run; `None` keeps the case default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Run2DOptions<T> {
    pub grid: Option<(usize, usize)>,
    pub order: Option<Order>,
    pub cfl: Option<T>,
    pub t_final: Option<T>,
    pub max_steps: Option<usize>,
    pub limiter_k: Option<T>,
}

impl<T: Real> Default for Run2DOptions<T> {
    fn default() -> Self {
        Self { grid: None, order: None, cfl: None, t_final: None, max_steps: None, limiter_k: None }
    }
}

pub fn run_case_2d<T: Real>(case: &Case2D<T>, options: &Run2DOptions<T>, gas: &GasModel<T>) -> Result<(StructuredGrid2D<T>, Log2D<T>)> {
    let (ni, nj) = options.grid.unwrap_or_else(|| case.default_grid());
    let mut grid = case.initial_grid(ni, nj, gas)?;
    let bc = case.boundaries(&grid.mesh, gas);
    let mut config = Solver2DConfig::new(options.t_final.unwrap_or(case.t_final));
    config.controls.cfl = options.cfl.unwrap_or(case.cfl);
    config.controls.max_steps = options.max_steps.unwrap_or(case.max_steps);
    config.recon = match options.order.unwrap_or(case.order) {
        Order::First => ReconstructionConfig::first_order(),
        Order::Second => ReconstructionConfig::second_order(options.limiter_k.unwrap_or(case.limiter_k)),
    };
    config.steady_drop = case.steady_drop;
    let log = advance_2d(&mut grid, &bc, &config, gas)?;
    Ok((grid, log))
}

/// Mean pressure over cells lying more than `margin` above the incident
/// shock y = 1 − x·tan 29°, for 0.3 ≤ x ≤ 1.5 and y < 0.95; this region
/// sees only the incident shock.
pub fn post_incident_pressure<T: Real>(grid: &StructuredGrid2D<T>, margin: T, gas: &GasModel<T>) -> Result<T> {
    let slope = T::c(INCIDENT_ANGLE_DEG.to_radians().tan());
    let mesh = &grid.mesh;
    let (mut sum, mut count) = (T::zero(), 0usize);
    for j in 0..mesh.nj {
        for i in 0..mesh.ni {
            let (x, y) = mesh.center(i, j);
            if x >= T::c(0.3) && x <= T::c(1.5) && y < T::c(0.95) && y > T::one() - x * slope + margin {
                sum = sum + grid.primitive(i, j, gas).p;
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::Config("no cells in the post-shock sampling region".into()));
    }
    Ok(sum / T::c(count as f64))
}

/// (distance from the body centre, state) along y = 0, from the far field
/// inwards. An even circumferential count averages the two middle rows.
pub fn stagnation_line<T: Real>(grid: &StructuredGrid2D<T>, gas: &GasModel<T>) -> Vec<(T, Prim2D<T>)> {
    let mesh = &grid.mesh;
    let nj = mesh.nj;
    let rows: Vec<usize> = if nj % 2 == 1 { vec![nj / 2] } else { vec![nj / 2 - 1, nj / 2] };
    let k = T::c(rows.len() as f64);
    (0..mesh.ni)
        .rev()
        .map(|i| {
            let mut acc = Prim2D::new_unchecked(T::zero(), T::zero(), T::zero(), T::zero());
            let mut r = T::zero();
            for &j in &rows {
                let w = grid.primitive(i, j, gas);
                acc = Prim2D::new_unchecked(acc.rho + w.rho / k, acc.u + w.u / k, acc.v + w.v / k, acc.p + w.p / k);
                let (x, y) = mesh.center(i, j);
                r = r + x.hypot(y) / k;
            }
            (r, acc)
        })
        .collect()
}

/// Largest relative pressure decrease met while walking the profile
/// towards the wall; zero for a monotone profile.
pub fn max_pressure_dip<T: Real>(profile: &[(T, Prim2D<T>)]) -> T {
    let mut peak = T::zero();
    let mut dip = T::zero();
    for (_, w) in profile {
        peak = peak.max(w.p);
        dip = dip.max((peak - w.p) / peak);
    }
    dip
}
