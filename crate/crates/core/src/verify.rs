//! Randomized self-checks over the algebra, the exact Riemann solver and
//! the conservation properties of the finite-volume drivers.
//!
//! Every check draws its samples from a ChaCha stream seeded by the caller,
//! so a given seed reproduces the report exactly.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench1d::{find_case, run_case, steady_shock_states, RunOptions};
use crate::eigen::{convection_eigensystem, convection_jordan, pressure_eigensystem, verify_jordan, FreeParams};
use crate::error::{Error, Result};
use crate::euler2d::flux::{
    averaged_jump_2d, averages_2d, convection_eigensystem_2d, convection_jacobian_2d, interface_flux_2d, pressure_eigensystem_2d,
    pressure_jacobian_2d, split_flux_2d, wave_strengths_2d, ChainParams2D, Deltas2D, FaceGeometry,
};
use crate::euler2d::grid::Mesh2D;
use crate::euler2d::solver::{advance_2d, Bc2D, Boundaries2D, Solver2DConfig, StructuredGrid2D};
use crate::euler2d::state::{normal_flux, prim_to_cons_2d, Prim2D};
use crate::fds::{
    averaged_jump, dissipation, dissipation_expanded, error3, interface_averages, interface_flux, tvs_pressure_strengths,
    zbs_pressure_strengths, Deltas,
};
use crate::linalg::{Matrix, Vector};
use crate::riemann::{pressure_function, sample, solve_star};
use crate::solver1d::{ReconstructionConfig, TimeControls};
use crate::splitting::{convection_jacobian, pressure_jacobian, pressure_jacobian_at, split_flux, SplittingKind};
use crate::state::{cons_to_prim, physical_flux, prim_to_cons, GasModel, Primitive};
use crate::SchemeKind;

pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Oracle,
    Conservation,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "oracle" => Ok(Suite::Oracle),
            "conservation" => Ok(Suite::Conservation),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!("unknown suite '{other}' (expected algebra, oracle, conservation or all)"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Algebra => "algebra",
            Suite::Oracle => "oracle",
            Suite::Conservation => "conservation",
            Suite::All => "all",
        })
    }
}

/// Worst scaled error of one property over its samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub samples: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{} samples={} worst={:.3e} tol={:.0e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.samples,
            self.worst,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "seed={} checks={} failed={failed}", self.seed, self.checks.len())
    }
}

struct Tally {
    suite: &'static str,
    name: &'static str,
    samples: usize,
    worst: f64,
    tolerance: f64,
}

impl Tally {
    fn new(suite: &'static str, name: &'static str, tolerance: f64) -> Self {
        Self { suite, name, samples: 0, worst: 0.0, tolerance }
    }

    fn add(&mut self, err: f64, scale: f64) {
        self.samples += 1;
        let e = err / scale;
        // NaN must fail
        self.worst = if e.is_nan() { f64::INFINITY } else { self.worst.max(e) };
    }

    fn done(self) -> Check {
        Check { suite: self.suite, name: self.name, samples: self.samples, worst: self.worst, tolerance: self.tolerance }
    }
}

fn state(rng: &mut ChaCha8Rng) -> Primitive<f64> {
    Primitive::new_unchecked(rng.gen_range(0.05..20.0), rng.gen_range(-10.0..10.0), rng.gen_range(0.05..50.0))
}

fn state_2d(rng: &mut ChaCha8Rng) -> Prim2D<f64> {
    Prim2D::new_unchecked(rng.gen_range(0.05..20.0), rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(0.05..50.0))
}

fn direction(rng: &mut ChaCha8Rng) -> FaceGeometry<f64> {
    let (s, c) = rng.gen_range(0.0..std::f64::consts::TAU).sin_cos();
    FaceGeometry { nx: c, ny: s, ds: 1.0 }
}

/// The suites to run for `suite`.
pub fn run_suite(suite: Suite, seed: u64, samples: usize) -> Result<Report> {
    let gas = GasModel::air();
    let mut checks = Vec::new();
    if matches!(suite, Suite::Algebra | Suite::All) {
        checks.extend(algebra(seed, samples, &gas));
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        checks.extend(oracle(seed, samples, &gas));
    }
    if matches!(suite, Suite::Conservation | Suite::All) {
        checks.extend(conservation(seed, &gas)?);
    }
    Ok(Report { seed, checks })
}

/// Splitting consistency, Jacobians, Jordan structure, wave strengths,
/// the U-property and free-parameter invariance, in 1D and 2D.
pub fn algebra(seed: u64, samples: usize, gas: &GasModel<f64>) -> Vec<Check> {
    const S: &str = "algebra";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = Tally::new(S, "split-consistency", 1e-14);
    let mut jac = Tally::new(S, "jacobian-central-difference", 1e-6);
    let mut jordan = Tally::new(S, "jordan-residual", 1e-10);
    let mut eig = Tally::new(S, "eigenvector-residual", 1e-12);
    let mut strengths = Tally::new(S, "wave-strength-reconstruction", 1e-12);
    let mut uprop = Tally::new(S, "u-property", 1e-12);
    let mut x1inv = Tally::new(S, "x1-invariance", 1e-11);
    let mut e3 = Tally::new(S, "error3-random", 1e-12);
    let mut split2 = Tally::new(S, "split-consistency-2d", 1e-14);
    let mut jac2 = Tally::new(S, "jacobian-central-difference-2d", 1e-6);
    let mut jordan2 = Tally::new(S, "jordan-residual-2d", 1e-10);
    let mut eig2 = Tally::new(S, "eigenvector-residual-2d", 1e-12);
    let mut strengths2 = Tally::new(S, "wave-strength-reconstruction-2d", 1e-12);
    let mut uprop2 = Tally::new(S, "u-property-2d", 1e-12);
    let mut consist2 = Tally::new(S, "flux-consistency-2d", 1e-14);
    let mut reduce2 = Tally::new(S, "reduction-to-1d", 1e-13);

    for _ in 0..samples {
        let (l, r) = (state(&mut rng), state(&mut rng));
        let (ql, qr) = (prim_to_cons(&l, gas).expect("sampled state"), prim_to_cons(&r, gas).expect("sampled state"));
        let du = qr - ql;

        for kind in SplittingKind::ALL {
            let f = physical_flux(&l, gas);
            split.add((split_flux(kind, &l, gas).total() - f).max_abs(), f.max_abs());
        }

        let dir = Vector([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
        let h = 1e-7 * ql.max_abs();
        for kind in SplittingKind::ALL {
            for convective in [true, false] {
                let a = if convective { convection_jacobian(kind, &l, gas) } else { pressure_jacobian(kind, &l, gas) };
                let part = |q: &Vector<f64, 3>| {
                    let s = split_flux(kind, &cons_to_prim(q, gas).expect("perturbed state"), gas);
                    if convective {
                        s.convection
                    } else {
                        s.pressure
                    }
                };
                let fd = (part(&(ql + dir * h)) - part(&(ql - dir * h))) * (0.5 / h);
                jac.add((fd - a.mul_vec(&dir)).max_abs(), a.max_abs() * dir.max_abs().max(1e-3));
            }
        }

        for kind in [SplittingKind::ZhaBilgen, SplittingKind::ToroVazquez] {
            if let Ok((a, decomp)) = convection_jordan(kind, &l, gas, FreeParams::default()) {
                match verify_jordan(&a, &decomp) {
                    Ok(res) => jordan.add(res, a.max_abs()),
                    Err(_) => jordan.add(f64::INFINITY, 1.0),
                }
            } else {
                jordan.add(f64::INFINITY, 1.0);
            }
            let a = convection_jacobian(kind, &l, gas);
            let params = FreeParams { x1: rng.gen_range(-10.0..10.0), x3: rng.gen_range(-10.0..10.0) };
            let sys = convection_eigensystem(kind, &l, gas, params);
            let norm = sys.vectors.iter().fold(1.0f64, |m, v| m.max(v.max_abs()));
            eig.add(sys.residual(&a), a.max_abs() * norm);
        }
        for kind in SplittingKind::ALL {
            let a = pressure_jacobian(kind, &l, gas);
            let sys = pressure_eigensystem(kind, &l, gas);
            let norm = sys.vectors.iter().fold(1.0f64, |m, v| m.max(v.max_abs()));
            eig.add(sys.residual(&a), a.max_abs() * norm);
        }

        let avg = interface_averages(&l, &r, gas);
        let d = Deltas::between(&l, &r);
        let scale = du.max_abs() + ql.max_abs() + qr.max_abs();
        for (kind, s) in [
            (SplittingKind::ZhaBilgen, zbs_pressure_strengths(&avg, &d, gas)),
            (SplittingKind::ToroVazquez, tvs_pressure_strengths(&avg, &d)),
        ] {
            let sys = crate::eigen::pressure_eigensystem_at(kind, avg.u_bar, avg.a2_bar, gas.gamma());
            let basis = Matrix::from_columns([sys.vectors[0], sys.vectors[1], sys.vectors[2]]);
            strengths.add((basis.mul_vec(&Vector(s.alpha)) - du).max_abs(), scale);
            let a = pressure_jacobian_at(kind, avg.u_bar, avg.a2_bar, gas.gamma());
            let (pl, pr) = (split_flux(kind, &l, gas).pressure, split_flux(kind, &r, gas).pressure);
            let dfp = pr - pl;
            uprop.add((a.mul_vec(&du) - dfp).max_abs(), a.max_abs() * du.max_abs() + dfp.max_abs() + pl.max_abs() + pr.max_abs());
        }
        let _ = averaged_jump(&avg, &d, gas);

        let (x1, x3) = (rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
        for scheme in SchemeKind::ALL {
            let closed = dissipation(scheme, &l, &r, gas);
            let expanded = dissipation_expanded(scheme, &l, &r, gas, FreeParams { x1, x3 });
            x1inv.add((closed - expanded).max_abs(), closed.max_abs().max(1.0) * (1.0 + x1.abs().max(x3.abs())));
        }

        e3.add(error3(&l, &r, gas).abs(), ql[2].abs().max(qr[2].abs()));

        // two dimensions
        let (wl, wr) = (state_2d(&mut rng), state_2d(&mut rng));
        let geom = direction(&mut rng);
        let f = normal_flux(&wl, geom.nx, geom.ny, gas);
        split2.add((split_flux_2d(&wl, &geom, gas).total() - f).max_abs(), f.max_abs());
        consist2.add((interface_flux_2d(&wl, &wl, &geom, gas) - f).max_abs(), 1.0 + f.max_abs());

        let q = prim_to_cons_2d(&wl, gas).expect("sampled state");
        let dir4 = Vector([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
        let h = 1e-7 * q.max_abs();
        for convective in [true, false] {
            let a = if convective { convection_jacobian_2d(&wl, &geom, gas) } else { pressure_jacobian_2d(&wl, &geom, gas) };
            let part = |q: &Vector<f64, 4>| {
                let w = crate::euler2d::state::cons_to_prim_2d(q, gas).expect("perturbed state");
                let s = split_flux_2d(&w, &geom, gas);
                if convective {
                    s.convection
                } else {
                    s.pressure
                }
            };
            let fd = (part(&(q + dir4 * h)) - part(&(q - dir4 * h))) * (0.5 / h);
            jac2.add((fd - a.mul_vec(&dir4)).max_abs(), a.max_abs() * dir4.max_abs().max(1e-3));
        }

        let ac = convection_jacobian_2d(&wl, &geom, gas);
        if wl.normal_velocity(geom.nx, geom.ny).abs() > 0.1 {
            let params = ChainParams2D { x1: rng.gen_range(-1.0..1.0), x4: rng.gen_range(-1.0..1.0), tangential: rng.gen_range(-1.0..1.0) };
            let sys = convection_eigensystem_2d(&wl, &geom, gas, params);
            match sys.jordan().and_then(|dec| verify_jordan(&ac, &dec)) {
                Ok(res) => {
                    let growth = (1.0 + params.x1.abs() + params.x4.abs() + params.tangential.abs()).powi(2);
                    jordan2.add(res, ac.max_abs() * growth)
                }
                Err(_) => jordan2.add(f64::INFINITY, 1.0),
            }
        }
        let ap = pressure_jacobian_2d(&wl, &geom, gas);
        let sys = pressure_eigensystem_2d(&wl, &geom, gas);
        let norm = sys.vectors.iter().fold(1.0f64, |m, v| m.max(v.max_abs()));
        eig2.add(sys.residual(&ap), ap.max_abs() * norm);

        let avg = averages_2d(&wl, &wr, &geom, gas);
        let d = Deltas2D::between(&wl, &wr, &geom);
        let wbar = Prim2D::new_unchecked(avg.rho_bar, avg.u_bar, avg.v_bar, avg.a2_bar * avg.rho_bar / gas.gamma());
        let jump = averaged_jump_2d(&avg, &d, gas);
        if let Ok(alpha) = wave_strengths_2d(&avg, &d, gas) {
            let sys = pressure_eigensystem_2d(&wbar, &geom, gas);
            let mut sum = Vector::zeros();
            for (v, &a) in sys.vectors.iter().zip(&alpha) {
                sum += *v * a;
            }
            let amax = alpha.iter().fold(0.0f64, |m, a| m.max(a.abs()));
            let vmax = sys.vectors.iter().fold(1.0f64, |m, v| m.max(v.max_abs()));
            strengths2.add((sum - jump).max_abs(), jump.max_abs() + amax * vmax);
        }
        let apbar = pressure_jacobian_2d(&wbar, &geom, gas);
        let du2 = prim_to_cons_2d(&wr, gas).expect("sampled state") - q;
        let (pl, pr) = (split_flux_2d(&wl, &geom, gas).pressure, split_flux_2d(&wr, &geom, gas).pressure);
        uprop2.add((apbar.mul_vec(&du2) - (pr - pl)).max_abs(), apbar.max_abs() * du2.max_abs() + pl.max_abs() + pr.max_abs());

        let x_unit = FaceGeometry::x_unit();
        let f2 =
            interface_flux_2d(&Prim2D::new_unchecked(l.rho, l.u, 0.0, l.p), &Prim2D::new_unchecked(r.rho, r.u, 0.0, r.p), &x_unit, gas);
        let f1 = interface_flux(SchemeKind::ZbsFds, &l, &r, gas);
        let err = (f2[0] - f1[0]).abs().max((f2[1] - f1[1]).abs()).max(f2[2].abs()).max((f2[3] - f1[2]).abs());
        reduce2.add(err, 1.0 + f1.max_abs());
    }

    let mut family = Tally::new(S, "error3-steady-shock-family", 1e-12);
    let mut ratio = Tally::new(S, "density-ratio-mach-1000", 1e-2);
    for m in [1.5, 2.0, 5.0, 10.0, 100.0, 1000.0] {
        let (l, r) = steady_shock_states(m, gas);
        let scale = prim_to_cons(&l, gas).expect("shock state")[2].abs().max(prim_to_cons(&r, gas).expect("shock state")[2].abs());
        family.add(error3(&l, &r, gas).abs(), scale);
        if m == 1000.0 {
            ratio.add((r.rho / l.rho - 6.0).abs(), 1.0);
        }
    }

    vec![
        split.done(),
        jac.done(),
        jordan.done(),
        eig.done(),
        strengths.done(),
        uprop.done(),
        x1inv.done(),
        e3.done(),
        family.done(),
        ratio.done(),
        split2.done(),
        jac2.done(),
        jordan2.done(),
        eig2.done(),
        strengths2.done(),
        uprop2.done(),
        consist2.done(),
        reduce2.done(),
    ]
}

/// Exact Riemann solver against bisection, Rankine–Hugoniot, sampling
/// limits, mirror symmetry and the Sod star state.
pub fn oracle(seed: u64, samples: usize, gas: &GasModel<f64>) -> Vec<Check> {
    const S: &str = "oracle";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut bisect = Tally::new(S, "star-pressure-vs-bisection", 1e-8);
    let mut root = Tally::new(S, "pressure-function-root", 1e-10);
    let mut hugoniot = Tally::new(S, "rankine-hugoniot", 1e-9);
    let mut limits = Tally::new(S, "sampling-limits", 0.0);
    let mut mirror = Tally::new(S, "mirror-symmetry", 1e-10);
    let mut vacuum = Tally::new(S, "vacuum-detection", 0.0);

    let bisection = |l: &Primitive<f64>, r: &Primitive<f64>| {
        let (mut lo, mut hi) = (0.0f64, 1e4f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if pressure_function(mid, l, r, gas) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let rh = |w0: &Primitive<f64>, w1: &Primitive<f64>| {
        let speed = (w0.rho * w0.u - w1.rho * w1.u) / (w0.rho - w1.rho);
        let (q0, q1) = (prim_to_cons(w0, gas).expect("state"), prim_to_cons(w1, gas).expect("state"));
        let (f0, f1) = (physical_flux(w0, gas), physical_flux(w1, gas));
        ((f1 - f0) - (q1 - q0) * speed).max_abs() / (f0.max_abs() + f1.max_abs() + q0.max_abs() + q1.max_abs())
    };

    for _ in 0..samples {
        let l = Primitive::new_unchecked(rng.gen_range(0.05..10.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.01..100.0));
        let r = Primitive::new_unchecked(rng.gen_range(0.05..10.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.01..100.0));
        let s = match solve_star(&l, &r, gas) {
            Ok(s) => s,
            Err(Error::Vacuum { .. }) => {
                // the pressure-positivity condition must indeed fail
                let g = gas.gamma();
                let (al, ar) = ((g * l.p / l.rho).sqrt(), (g * r.p / r.rho).sqrt());
                let cond = 2.0 * (al + ar) / (g - 1.0) - (r.u - l.u);
                vacuum.add(if cond <= 0.0 { 0.0 } else { 1.0 }, 1.0);
                continue;
            }
            Err(_) => {
                bisect.add(f64::INFINITY, 1.0);
                continue;
            }
        };
        let oracle = bisection(&l, &r);
        bisect.add((s.p_star - oracle).abs(), oracle.max(1.0));
        root.add(pressure_function(s.p_star, &l, &r, gas).abs(), l.p.max(r.p));
        if s.p_star > l.p * (1.0 + 1e-6) {
            hugoniot.add(rh(&l, &Primitive::new_unchecked(s.rho_star_l, s.u_star, s.p_star)), 1.0);
        }
        if s.p_star > r.p * (1.0 + 1e-6) {
            hugoniot.add(rh(&Primitive::new_unchecked(s.rho_star_r, s.u_star, s.p_star), &r), 1.0);
        }
        let far_l = sample(&s, &l, &r, gas, -1e3);
        let far_r = sample(&s, &l, &r, gas, 1e3);
        limits.add(if far_l == l && far_r == r { 0.0 } else { 1.0 }, 1.0);
        let m = solve_star(&r.mirrored(), &l.mirrored(), gas).expect("mirrored problem is solvable");
        mirror.add((m.p_star - s.p_star).abs() + (m.u_star + s.u_star).abs(), s.p_star.max(1.0) + s.u_star.abs());
    }

    let mut sod = Tally::new(S, "sod-star-state", 1e-5);
    match solve_star(&Primitive::new_unchecked(1.0, 0.0, 1.0), &Primitive::new_unchecked(0.125, 0.0, 0.1), gas) {
        Ok(s) => sod.add((s.p_star - 0.30313).abs().max((s.u_star - 0.92745).abs()), 1.0),
        Err(_) => sod.add(f64::INFINITY, 1.0),
    }

    vec![bisect.done(), root.done(), hugoniot.done(), limits.done(), mirror.done(), vacuum.done(), sod.done()]
}

/// Short runs of the 1D and 2D drivers checking conserved totals, exact
/// contact preservation, free-stream preservation and the 1D embedding.
pub fn conservation(seed: u64, gas: &GasModel<f64>) -> Result<Vec<Check>> {
    const S: &str = "conservation";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0_75e7);
    let recons = [ReconstructionConfig::first_order(), ReconstructionConfig::second_order(0.1)];

    let mut totals = Tally::new(S, "periodic-totals-1d", 1e-12);
    let smooth = find_case::<f64>("smooth")?;
    for scheme in SchemeKind::ALL {
        for recon in recons {
            let before = smooth.initial_grid(smooth.n_cells, gas)?.totals();
            let run = run_case(&smooth, scheme, recon, RunOptions { max_steps: Some(50), ..Default::default() }, gas)?;
            let after = run.grid.totals();
            for k in 0..3 {
                totals.add((after[k] - before[k]).abs(), before[k].abs().max(1.0));
            }
        }
    }

    let mut contact = Tally::new(S, "stationary-contact", 1e-12);
    let case = find_case::<f64>("contact")?;
    for scheme in SchemeKind::ALL {
        let initial = case.initial_grid(case.n_cells, gas)?.primitives(gas)?;
        let run = run_case(&case, scheme, ReconstructionConfig::first_order(), RunOptions::default(), gas)?;
        let steps_ok = run.log.steps >= 100;
        for (a, b) in run.grid.primitives(gas)?.iter().zip(&initial) {
            contact.add(if steps_ok { (a.rho - b.rho).abs() } else { f64::INFINITY }, 1.0);
        }
    }

    let mut free = Tally::new(S, "free-stream-2d", 1e-12);
    let ramp = |x: f64| if x < 0.5 { 0.0 } else { (x - 0.5) * 0.3f64.tan() };
    let meshes = [Mesh2D::half_cylinder(1.0, 2.0, 4.0, 12, 45)?, Mesh2D::sheared(0.0, 2.0, 1.5, ramp, 30, 20)?];
    for mesh in meshes {
        let mesh = Arc::new(mesh);
        let w = Prim2D::new(rng.gen_range(0.5..2.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(0.5..2.0))?;
        for recon in recons {
            let mut grid = StructuredGrid2D::from_fn(Arc::clone(&mesh), |_, _| w, gas)?;
            let inflow = Bc2D::SupersonicInflow(w);
            let bc = Boundaries2D::uniform(&mesh, inflow, inflow, inflow, inflow);
            let mut cfg = Solver2DConfig::new(10.0);
            cfg.recon = recon;
            cfg.controls.max_steps = 10;
            advance_2d(&mut grid, &bc, &cfg, gas)?;
            let q0 = prim_to_cons_2d(&w, gas)?;
            for q in &grid.cells {
                free.add((*q - q0).max_abs(), q0.max_abs());
            }
        }
    }

    let mut closed = Tally::new(S, "closed-box-totals-2d", 1e-12);
    let mesh = Arc::new(Mesh2D::sheared(0.0, 1.0, 1.0, |x: f64| 0.1 * (3.0 * x).sin(), 24, 20)?);
    let (cx, cy) = (rng.gen_range(0.3..0.7), rng.gen_range(0.3..0.7));
    for recon in recons {
        let mut grid = StructuredGrid2D::from_fn(
            Arc::clone(&mesh),
            |x, y| {
                let bump = (-((x - cx).powi(2) + (y - cy).powi(2)) / 0.02).exp();
                Prim2D::new_unchecked(1.0 + bump, 0.3, -0.2, 1.0 + 2.0 * bump)
            },
            gas,
        )?;
        let before = grid.totals();
        let wall = Bc2D::SlipWall;
        let bc = Boundaries2D::uniform(&mesh, wall, wall, wall, wall);
        let mut cfg = Solver2DConfig::new(0.1);
        cfg.recon = recon;
        advance_2d(&mut grid, &bc, &cfg, gas)?;
        let after = grid.totals();
        for k in [0, 3] {
            closed.add((after[k] - before[k]).abs(), before[k].abs());
        }
    }

    let mut embed = Tally::new(S, "sod-embedding-2d", 1e-12);
    let (l, r) = (Primitive::new(1.0, 0.0, 1.0)?, Primitive::new(0.125, 0.0, 0.1)?);
    let init = |x: f64| if x < 0.5 { l } else { r };
    let n = 100;
    for recon in [ReconstructionConfig::first_order(), ReconstructionConfig::second_order(1.0)] {
        let mut controls = TimeControls::new(0.5, 0.1);
        controls.fixed_dt = Some(0.002);
        let g1 = crate::solver1d::Grid1D::from_fn(0.0, 1.0, n, init, gas)?;
        let bc1 = crate::solver1d::Boundaries::both(crate::solver1d::BoundaryCondition::Transmissive);
        let (g1, _) = crate::solver1d::advance(&g1, SchemeKind::ZbsFds, recon, bc1, controls, gas)?;
        let w1 = g1.primitives(gas)?;
        let mesh = Arc::new(Mesh2D::rectangle(0.0, 1.0, 0.0, 0.02, n, 2)?);
        let mut grid = StructuredGrid2D::from_fn(
            Arc::clone(&mesh),
            |x, _| {
                let s = init(x);
                Prim2D::new_unchecked(s.rho, s.u, 0.0, s.p)
            },
            gas,
        )?;
        let out = Bc2D::SupersonicOutflow;
        let bc = Boundaries2D::uniform(&mesh, out, out, Bc2D::SlipWall, Bc2D::SlipWall);
        advance_2d(&mut grid, &bc, &Solver2DConfig { recon, controls, steady_drop: None }, gas)?;
        for j in 0..2 {
            for (i, a) in w1.iter().enumerate() {
                let b = grid.primitive(i, j, gas);
                let err = (b.rho - a.rho).abs().max((b.u - a.u).abs()).max((b.p - a.p).abs()).max(b.v.abs());
                embed.add(err, 1.0);
            }
        }
    }

    Ok(vec![totals.done(), contact.done(), free.done(), closed.done(), embed.done()])
}
