//! Exact solution of the 1D Euler Riemann problem, used as a reference for
//! error norms.
//!
//! The star pressure is the root of f(p) = f_L(p) + f_R(p) + Δu, found by
//! Newton's method started from the two-rarefaction estimate and guarded by
//! a bracket so that a step never leaves the positive axis.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{GasModel, Primitive};

pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState<T> {
    pub p_star: T,
    pub u_star: T,
    pub rho_star_l: T,
    pub rho_star_r: T,
}

/// f_K(p) and its derivative for one side.
fn side_function<T: Real>(p: T, w: &Primitive<T>, gas: &GasModel<T>) -> (T, T) {
    let g = gas.gamma();
    let (one, two) = (T::one(), T::two());
    let a = (g * w.p / w.rho).sqrt();
    if p > w.p {
        let ak = two / ((g + one) * w.rho);
        let bk = (g - one) / (g + one) * w.p;
        let q = (ak / (p + bk)).sqrt();
        let f = (p - w.p) * q;
        (f, q * (one - (p - w.p) / (two * (bk + p))))
    } else {
        let z = (g - one) / (two * g);
        let ratio = p / w.p;
        let f = two * a / (g - one) * (ratio.powf(z) - one);
        (f, ratio.powf(-(g + one) / (two * g)) / (w.rho * a))
    }
}

/// Pressure function f(p) = f_L + f_R + (u_R − u_L).
pub fn pressure_function<T: Real>(p: T, wl: &Primitive<T>, wr: &Primitive<T>, gas: &GasModel<T>) -> T {
    side_function(p, wl, gas).0 + side_function(p, wr, gas).0 + wr.u - wl.u
}

fn star_density<T: Real>(p: T, w: &Primitive<T>, gas: &GasModel<T>) -> T {
    let g = gas.gamma();
    let one = T::one();
    if p > w.p {
        let r = p / w.p;
        let k = (g - one) / (g + one);
        w.rho * (r + k) / (k * r + one)
    } else {
        w.rho * (p / w.p).powf(g.recip())
    }
}

pub fn solve_star<T: Real>(wl: &Primitive<T>, wr: &Primitive<T>, gas: &GasModel<T>) -> Result<StarState<T>> {
    wl.check()?;
    wr.check()?;
    let g = gas.gamma();
    let (one, two) = (T::one(), T::two());
    let al = (g * wl.p / wl.rho).sqrt();
    let ar = (g * wr.p / wr.rho).sqrt();
    let du = wr.u - wl.u;
    let condition = two * (al + ar) / (g - one) - du;
    if condition <= T::zero() {
        return Err(Error::Vacuum { condition: condition.f64() });
    }

    let pmax = wl.p.max(wr.p);
    let floor = T::c(1e-8) * pmax;
    let z = (g - one) / (two * g);
    let guess = ((al + ar - T::half() * (g - one) * du) / (al / wl.p.powf(z) + ar / wr.p.powf(z))).powf(z.recip());
    let mut p = guess.max(floor);

    let f = |p: T| pressure_function(p, wl, wr, gas);
    // f is increasing; f(0+) < 0 by the vacuum condition
    let mut lo = T::zero();
    let mut hi = pmax.max(p);
    while f(hi) < T::zero() {
        lo = hi;
        hi = hi * T::c(4.0);
    }

    let tol = T::c(1e-10) * pmax;
    let eps = T::epsilon();
    let mut residual = f(p);
    for iteration in 1..=MAX_ITERATIONS {
        if residual < T::zero() {
            lo = lo.max(p);
        } else {
            hi = hi.min(p);
        }
        let (fl, dl) = side_function(p, wl, gas);
        let (fr, dr) = side_function(p, wr, gas);
        let mut next = p - (fl + fr + du) / (dl + dr);
        if !(next > lo && next < hi) {
            next = T::half() * (lo + hi);
        }
        let change = (next - p).abs() / (T::half() * (next + p));
        p = next;
        residual = f(p);
        let converged = change <= T::c(4.0) * eps || (residual.abs() <= tol && change <= T::c(1e-12));
        if converged || residual == T::zero() {
            if residual.abs() > tol {
                return Err(Error::NoConvergence { iterations: iteration, last: p.f64(), residual: residual.f64() });
            }
            let u_star = T::half() * (wl.u + wr.u) + T::half() * (side_function(p, wr, gas).0 - side_function(p, wl, gas).0);
            return Ok(StarState { p_star: p, u_star, rho_star_l: star_density(p, wl, gas), rho_star_r: star_density(p, wr, gas) });
        }
    }
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, last: p.f64(), residual: residual.f64() })
}

/// Solution at similarity coordinate ξ = x/t.
pub fn sample<T: Real>(star: &StarState<T>, wl: &Primitive<T>, wr: &Primitive<T>, gas: &GasModel<T>, xi: T) -> Primitive<T> {
    let g = gas.gamma();
    let (one, two) = (T::one(), T::two());
    let gm1 = g - one;
    let gp1 = g + one;
    let StarState { p_star, u_star, .. } = *star;

    // Work on the left side; the right side is the mirror image.
    let left_side = xi <= u_star;
    let (w, rho_star, s, x) = if left_side { (*wl, star.rho_star_l, one, xi) } else { (wr.mirrored(), star.rho_star_r, -one, -xi) };
    let ustar = s * u_star;
    let a = (g * w.p / w.rho).sqrt();
    let out = if p_star > w.p {
        let speed = w.u - a * (gp1 / (two * g) * p_star / w.p + gm1 / (two * g)).sqrt();
        if x <= speed {
            w
        } else {
            Primitive { rho: rho_star, u: ustar, p: p_star }
        }
    } else {
        let a_star = a * (p_star / w.p).powf(gm1 / (two * g));
        let head = w.u - a;
        let tail = ustar - a_star;
        if x <= head {
            w
        } else if x >= tail {
            Primitive { rho: rho_star, u: ustar, p: p_star }
        } else {
            let c = two / gp1 + gm1 / (gp1 * a) * (w.u - x);
            Primitive { rho: w.rho * c.powf(two / gm1), u: two / gp1 * (a + gm1 / two * w.u + x), p: w.p * c.powf(two * g / gm1) }
        }
    };
    if left_side {
        out
    } else {
        out.mirrored()
    }
}

/// Convenience wrapper: solution of the problem with a jump at `x0`,
/// evaluated at (x, t).
#[derive(Debug, Clone, Copy)]
pub struct RiemannSolution<T> {
    pub star: StarState<T>,
    pub left: Primitive<T>,
    pub right: Primitive<T>,
    pub x0: T,
    pub gas: GasModel<T>,
}

impl<T: Real> RiemannSolution<T> {
    pub fn new(left: Primitive<T>, right: Primitive<T>, x0: T, gas: GasModel<T>) -> Result<Self> {
        Ok(Self { star: solve_star(&left, &right, &gas)?, left, right, x0, gas })
    }

    pub fn at(&self, x: T, t: T) -> Primitive<T> {
        if t <= T::zero() {
            return if x < self.x0 { self.left } else { self.right };
        }
        sample(&self.star, &self.left, &self.right, &self.gas, (x - self.x0) / t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{physical_flux, prim_to_cons};
    use proptest::prelude::*;

    fn air() -> GasModel<f64> {
        GasModel::air()
    }

    fn w(rho: f64, u: f64, p: f64) -> Primitive<f64> {
        Primitive::new(rho, u, p).unwrap()
    }

    fn bisection(wl: &Primitive<f64>, wr: &Primitive<f64>, mut lo: f64, mut hi: f64) -> f64 {
        let g = air();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if pressure_function(mid, wl, wr, &g) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn identical_states() {
        let g = air();
        let st = w(0.8, 0.4, 1.3);
        let s = solve_star(&st, &st, &g).unwrap();
        assert!((s.p_star - 1.3).abs() < 1e-12 && (s.u_star - 0.4).abs() < 1e-12);
        assert!((s.rho_star_l - 0.8).abs() < 1e-12 && (s.rho_star_r - 0.8).abs() < 1e-12);
    }

    #[test]
    fn sod_matches_bisection() {
        let (l, r) = (w(1.0, 0.0, 1.0), w(0.125, 0.0, 0.1));
        let oracle = bisection(&l, &r, 1e-8, 10.0);
        let s = solve_star(&l, &r, &air()).unwrap();
        assert!((s.p_star - oracle).abs() < 1e-8);
        // published reference values for this problem
        assert!((s.p_star - 0.30313).abs() < 1e-5);
        assert!((s.u_star - 0.92745).abs() < 1e-5);
    }

    #[test]
    fn stationary_contact() {
        let s = solve_star(&w(1.4, 0.0, 1.0), &w(1.0, 0.0, 1.0), &air()).unwrap();
        assert!((s.p_star - 1.0).abs() < 1e-12 && s.u_star.abs() < 1e-12);
    }

    #[test]
    fn vacuum_is_reported() {
        let r = solve_star(&w(1.0, -20.0, 0.4), &w(1.0, 20.0, 0.4), &air());
        assert!(matches!(r, Err(Error::Vacuum { .. })));
    }

    #[test]
    fn sampling_limits_and_contact() {
        let g = air();
        let (l, r) = (w(1.0, 0.0, 1.0), w(0.125, 0.0, 0.1));
        let s = solve_star(&l, &r, &g).unwrap();
        assert_eq!(sample(&s, &l, &r, &g, -100.0), l);
        assert_eq!(sample(&s, &l, &r, &g, 100.0), r);
        let below = sample(&s, &l, &r, &g, s.u_star - 1e-9);
        let above = sample(&s, &l, &r, &g, s.u_star + 1e-9);
        assert!((below.p - above.p).abs() < 1e-12 && (below.u - above.u).abs() < 1e-12);
        assert!((below.rho - above.rho).abs() > 0.1);
    }

    #[test]
    fn rarefaction_is_continuous_and_isentropic() {
        let g = air();
        let (l, r) = (w(1.0, 0.0, 1.0), w(0.125, 0.0, 0.1));
        let s = solve_star(&l, &r, &g).unwrap();
        let a = 1.4f64.sqrt();
        let a_star = a * (s.p_star / 1.0).powf(0.2 / 1.4);
        let (head, tail) = (-a, s.u_star - a_star);
        let entropy = |q: Primitive<f64>| q.p / q.rho.powf(1.4);
        let invariant = |q: Primitive<f64>| q.u + 2.0 * (1.4 * q.p / q.rho).sqrt() / 0.4;
        for k in 0..=20 {
            let xi = head + (tail - head) * k as f64 / 20.0;
            let q = sample(&s, &l, &r, &g, xi);
            assert!((entropy(q) - entropy(l)).abs() < 1e-9);
            assert!((invariant(q) - invariant(l)).abs() < 1e-9);
        }
        let tail_in = sample(&s, &l, &r, &g, tail - 1e-10);
        assert!((tail_in.p - s.p_star).abs() < 1e-8 && (tail_in.rho - s.rho_star_l).abs() < 1e-8);
    }

    #[test]
    fn integral_conservation() {
        // ∫U dx over [−L, L] at time t equals the initial integral plus
        // t·(F(w_L) − F(w_R)) while no wave has reached the ends. The
        // quadrature splits at every wave so each piece is smooth.
        let g = air();
        let (l, r) = (w(1.0, 0.75, 1.0), w(0.125, 0.0, 0.1));
        let sol = RiemannSolution::new(l, r, 0.0, g).unwrap();
        let (half_width, t) = (3.0, 0.5);
        let s = sol.star;
        let a_l = 1.4f64.sqrt();
        let a_star = a_l * s.p_star.powf(0.2 / 1.4);
        let a_r = (1.4f64 * 0.1 / 0.125).sqrt();
        let shock = r.u + a_r * (2.4 / 2.8 * s.p_star / r.p + 0.4 / 2.8).sqrt();
        let breaks = [-half_width, (l.u - a_l) * t, (s.u_star - a_star) * t, s.u_star * t, shock * t, half_width];
        // 5-point Gauss–Legendre on many sub-panels of each smooth piece
        let nodes = [0.0, -0.538469310105683, 0.538469310105683, -0.906179845938664, 0.906179845938664];
        let weights = [0.568888888888889, 0.478628670499366, 0.478628670499366, 0.236926885056189, 0.236926885056189];
        let mut total = [0.0; 3];
        for piece in breaks.windows(2) {
            let panels = 400;
            let h = (piece[1] - piece[0]) / panels as f64;
            for k in 0..panels {
                let mid = piece[0] + (k as f64 + 0.5) * h;
                for (x, wt) in nodes.iter().zip(weights) {
                    let q = prim_to_cons(&sol.at(mid + 0.5 * h * x, t), &g).unwrap();
                    for c in 0..3 {
                        total[c] += 0.5 * h * wt * q[c];
                    }
                }
            }
        }
        let ql = prim_to_cons(&l, &g).unwrap();
        let qr = prim_to_cons(&r, &g).unwrap();
        let (fl, fr) = (physical_flux(&l, &g), physical_flux(&r, &g));
        for k in 0..3 {
            let expected = half_width * (ql[k] + qr[k]) + t * (fl[k] - fr[k]);
            assert!((total[k] - expected).abs() < 1e-8, "component {k}: {} vs {expected}", total[k]);
        }
    }

    #[test]
    fn steady_shock_family_is_reproduced() {
        let g = air();
        for m in [2.0f64, 5.0, 10.0, 100.0] {
            let pl = 1.0 / (1.4 * m * m);
            let pr = pl * (2.0 * 1.4 * m * m - 0.4) / 2.4;
            let ratio = pr / pl;
            let rhor = (6.0 * ratio + 1.0) / (6.0 + ratio);
            let ur = (1.4 * (2.0 + 0.4 * m * m) * pr / ((2.0 * 1.4 * m * m + 1.0 - 1.4) * rhor)).sqrt();
            let (l, r) = (w(1.0, 1.0, pl), w(rhor, ur, pr));
            let s = solve_star(&l, &r, &g).unwrap();
            assert!((s.u_star - ur).abs() < 1e-8, "M = {m}");
            assert!((s.p_star - pr).abs() < 1e-8 * pr.max(1.0), "M = {m}");
        }
    }

    fn hugoniot_residual(w0: Primitive<f64>, w1: Primitive<f64>, speed: f64) -> f64 {
        let g = air();
        let (q0, q1) = (prim_to_cons(&w0, &g).unwrap(), prim_to_cons(&w1, &g).unwrap());
        let (f0, f1) = (physical_flux(&w0, &g), physical_flux(&w1, &g));
        ((f1 - f0) - (q1 - q0) * speed).max_abs() / (f0.max_abs() + f1.max_abs() + q0.max_abs() + q1.max_abs())
    }

    prop_compose! {
        fn state()(rho in 0.05f64..10.0, u in -2.0f64..2.0, p in 0.01f64..100.0) -> Primitive<f64> {
            w(rho, u, p)
        }
    }

    proptest! {
        #[test]
        fn newton_matches_bisection(l in state(), r in state()) {
            let g = air();
            if let Ok(s) = solve_star(&l, &r, &g) {
                let oracle = bisection(&l, &r, 0.0, 1e4);
                prop_assert!((s.p_star - oracle).abs() <= 1e-8 * oracle.max(1.0));
                prop_assert!(pressure_function(s.p_star, &l, &r, &g).abs() <= 1e-10 * l.p.max(r.p));
            }
        }

        #[test]
        fn shocks_satisfy_rankine_hugoniot(l in state(), r in state()) {
            let g = air();
            let Ok(s) = solve_star(&l, &r, &g) else { return Ok(()) };
            if s.p_star > l.p * (1.0 + 1e-6) {
                let star = Primitive::new(s.rho_star_l, s.u_star, s.p_star).unwrap();
                let speed = (l.rho * l.u - star.rho * star.u) / (l.rho - star.rho);
                prop_assert!(hugoniot_residual(l, star, speed) <= 1e-9);
            }
            if s.p_star > r.p * (1.0 + 1e-6) {
                let star = Primitive::new(s.rho_star_r, s.u_star, s.p_star).unwrap();
                let speed = (r.rho * r.u - star.rho * star.u) / (r.rho - star.rho);
                prop_assert!(hugoniot_residual(star, r, speed) <= 1e-9);
            }
        }
    }
}
