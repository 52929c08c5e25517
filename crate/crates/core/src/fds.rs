//! ZBS-FDS and TVS-FDS interface fluxes.
//!
//! Both schemes upwind the convective and the pressure parts of a split
//! flux separately. The convective part is defective (a Jordan block of
//! order two) but its upwind dissipation still collapses to |ū|·ΔU-like
//! closed forms; the pressure part is diagonalisable and is upwinded
//! wave by wave with Roe-type averaged eigenvectors.

use std::fmt;
use std::str::FromStr;

use crate::eigen::{convection_eigensystem_at, pressure_eigensystem_at, FreeParams};
use crate::linalg::Vector;
use crate::scalar::Real;
use crate::splitting::SplittingKind;
use crate::state::{physical_flux, prim_to_cons_unchecked, sound_speed_sq, FluxVector, GasModel, Primitive};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    ZbsFds,
    TvsFds,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 2] = [SchemeKind::ZbsFds, SchemeKind::TvsFds];

    pub fn splitting(self) -> SplittingKind {
        match self {
            SchemeKind::ZbsFds => SplittingKind::ZhaBilgen,
            SchemeKind::TvsFds => SplittingKind::ToroVazquez,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            SchemeKind::ZbsFds => "zbs",
            SchemeKind::TvsFds => "tvs",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::ZbsFds => "ZBS-FDS",
            SchemeKind::TvsFds => "TVS-FDS",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "zbs" | "zbs-fds" => Ok(SchemeKind::ZbsFds),
            "tvs" | "tvs-fds" => Ok(SchemeKind::TvsFds),
            other => Err(format!("unknown scheme '{other}' (expected zbs or tvs)")),
        }
    }
}

/// Roe-type interface averages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceAverages<T> {
    pub rho_bar: T,
    pub u_bar: T,
    pub a2_bar: T,
    /// √(ū² + 4ā²)
    pub beta_bar: T,
}

impl<T: Real> InterfaceAverages<T> {
    pub fn a_bar(&self) -> T {
        self.a2_bar.sqrt()
    }
}

/// Primitive jumps across a face, right minus left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deltas<T> {
    pub rho: T,
    pub u: T,
    pub p: T,
}

impl<T: Real> Deltas<T> {
    pub fn between(wl: &Primitive<T>, wr: &Primitive<T>) -> Self {
        Self { rho: wr.rho - wl.rho, u: wr.u - wl.u, p: wr.p - wl.p }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveStrengths<T> {
    pub alpha: [T; 3],
}

/// ρ̄ = √(ρ_Lρ_R); ū and ā² are √ρ-weighted means.
pub fn interface_averages<T: Real>(wl: &Primitive<T>, wr: &Primitive<T>, gas: &GasModel<T>) -> InterfaceAverages<T> {
    let (sl, sr) = (wl.rho.sqrt(), wr.rho.sqrt());
    let inv = (sl + sr).recip();
    let u_bar = (sl * wl.u + sr * wr.u) * inv;
    let a2_bar = (sl * sound_speed_sq(wl, gas) + sr * sound_speed_sq(wr, gas)) * inv;
    InterfaceAverages { rho_bar: sl * sr, u_bar, a2_bar, beta_bar: (u_bar * u_bar + T::c(4.0) * a2_bar).sqrt() }
}

/// ΔU rebuilt from primitive jumps with the averaged state:
/// (Δρ, ρ̄Δu + ūΔρ, Δp/(γ−1) + ½(ū²Δρ + 2ρ̄ūΔu)).
pub fn averaged_jump<T: Real>(avg: &InterfaceAverages<T>, d: &Deltas<T>, gas: &GasModel<T>) -> Vector<T, 3> {
    let InterfaceAverages { rho_bar, u_bar, .. } = *avg;
    Vector([d.rho, rho_bar * d.u + u_bar * d.rho, d.p / gas.gm1() + T::half() * (u_bar * u_bar * d.rho + T::two() * rho_bar * u_bar * d.u)])
}

/// error₃ = Δ(ρE) − Δp/(γ−1) − ½(ū²Δρ + 2ρ̄ūΔu), zero up to round-off.
pub fn error3<T: Real>(wl: &Primitive<T>, wr: &Primitive<T>, gas: &GasModel<T>) -> T {
    let avg = interface_averages(wl, wr, gas);
    let d = Deltas::between(wl, wr);
    let du = prim_to_cons_unchecked(wr, gas) - prim_to_cons_unchecked(wl, gas);
    du[2] - averaged_jump(&avg, &d, gas)[2]
}

pub fn zbs_pressure_strengths<T: Real>(avg: &InterfaceAverages<T>, d: &Deltas<T>, gas: &GasModel<T>) -> WaveStrengths<T> {
    let g = gas.gamma();
    let half_mom = T::half() * avg.rho_bar * d.u;
    let acoustic = (g / gas.gm1()).sqrt() * d.p / (T::two() * avg.a_bar());
    WaveStrengths { alpha: [half_mom - acoustic, d.rho, half_mom + acoustic] }
}

pub fn tvs_pressure_strengths<T: Real>(avg: &InterfaceAverages<T>, d: &Deltas<T>) -> WaveStrengths<T> {
    let half_mom = T::half() * avg.rho_bar * d.u;
    let skew = avg.rho_bar * avg.u_bar * d.u / (T::two() * avg.beta_bar) - d.p / avg.beta_bar;
    WaveStrengths { alpha: [half_mom + skew, d.rho, half_mom - skew] }
}

/// Strengths over the TV convection basis (0,0,1), (1,ū,ū²/2),
/// (x₁, 1+ūx₁, ū+ū²x₁/2): (Δp/(γ−1), Δρ − x₁ρ̄Δu, ρ̄Δu).
pub fn tvs_convection_strengths<T: Real>(avg: &InterfaceAverages<T>, d: &Deltas<T>, gas: &GasModel<T>, x1: T) -> WaveStrengths<T> {
    let m = avg.rho_bar * d.u;
    WaveStrengths { alpha: [d.p / gas.gm1(), d.rho - x1 * m, m] }
}

fn pressure_dissipation<T: Real>(kind: SplittingKind, avg: &InterfaceAverages<T>, s: &WaveStrengths<T>, gas: &GasModel<T>) -> Vector<T, 3> {
    let sys = pressure_eigensystem_at(kind, avg.u_bar, avg.a2_bar, gas.gamma());
    let mut d = Vector::zeros();
    for k in 0..3 {
        d += sys.vectors[k] * (s.alpha[k] * sys.eigenvalues[k].abs());
    }
    d
}

/// Upwind dissipation of the ZBS-FDS flux.
pub fn zbs_dissipation<T: Real>(wl: &Primitive<T>, wr: &Primitive<T>, gas: &GasModel<T>) -> FluxVector<T> {
    let avg = interface_averages(wl, wr, gas);
    let d = Deltas::between(wl, wr);
    let convection = averaged_jump(&avg, &d, gas) * avg.u_bar.abs();
    let s = zbs_pressure_strengths(&avg, &d, gas);
    convection + pressure_dissipation(SplittingKind::ZhaBilgen, &avg, &s, gas)
}

/// Upwind dissipation of the TVS-FDS flux. The convective energy row omits
/// Δp/(γ−1), which travels with the zero eigenvalue.
pub fn tvs_dissipation<T: Real>(wl: &Primitive<T>, wr: &Primitive<T>, gas: &GasModel<T>) -> FluxVector<T> {
    let avg = interface_averages(wl, wr, gas);
    let d = Deltas::between(wl, wr);
    let InterfaceAverages { rho_bar, u_bar, .. } = avg;
    let convection = Vector([d.rho, rho_bar * d.u + u_bar * d.rho, T::half() * (u_bar * u_bar * d.rho + T::two() * rho_bar * u_bar * d.u)])
        * u_bar.abs();
    let s = tvs_pressure_strengths(&avg, &d);
    convection + pressure_dissipation(SplittingKind::ToroVazquez, &avg, &s, gas)
}

/// Dissipation assembled term by term from the generalized-eigenvector
/// expansion with free parameters `params`; agrees with the closed forms.
pub fn dissipation_expanded<T: Real>(
    scheme: SchemeKind,
    wl: &Primitive<T>,
    wr: &Primitive<T>,
    gas: &GasModel<T>,
    params: FreeParams<T>,
) -> FluxVector<T> {
    let avg = interface_averages(wl, wr, gas);
    let d = Deltas::between(wl, wr);
    let kind = scheme.splitting();
    let conv = convection_eigensystem_at(kind, avg.u_bar, avg.a2_bar, gas.gamma(), params);
    let (conv_strengths, pressure_strengths) = match scheme {
        SchemeKind::ZbsFds => {
            let jump = averaged_jump(&avg, &d, gas);
            let basis = conv.basis().expect("ZB convection basis has unit determinant");
            let alpha = basis.solve(&jump).expect("ZB convection basis has unit determinant").0;
            (WaveStrengths { alpha }, zbs_pressure_strengths(&avg, &d, gas))
        }
        SchemeKind::TvsFds => (tvs_convection_strengths(&avg, &d, gas, params.x1), tvs_pressure_strengths(&avg, &d)),
    };
    let mut out = Vector::zeros();
    for k in 0..3 {
        out += conv.vectors[k] * (conv_strengths.alpha[k] * conv.eigenvalues[k].abs());
    }
    out + pressure_dissipation(kind, &avg, &pressure_strengths, gas)
}

pub fn dissipation<T: Real>(scheme: SchemeKind, wl: &Primitive<T>, wr: &Primitive<T>, gas: &GasModel<T>) -> FluxVector<T> {
    match scheme {
        SchemeKind::ZbsFds => zbs_dissipation(wl, wr, gas),
        SchemeKind::TvsFds => tvs_dissipation(wl, wr, gas),
    }
}

/// F_I = ½(F_L + F_R) − ½D. Both states must be physical.
pub fn interface_flux<T: Real>(scheme: SchemeKind, wl: &Primitive<T>, wr: &Primitive<T>, gas: &GasModel<T>) -> FluxVector<T> {
    let avg_flux = (physical_flux(wl, gas) + physical_flux(wr, gas)) * T::half();
    avg_flux - dissipation(scheme, wl, wr, gas) * T::half()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::splitting::{pressure_jacobian_at, split_flux};
    use crate::state::prim_to_cons;
    use proptest::prelude::*;

    fn air() -> GasModel<f64> {
        GasModel::air()
    }

    fn w(rho: f64, u: f64, p: f64) -> Primitive<f64> {
        Primitive::new(rho, u, p).unwrap()
    }

    fn jump(wl: &Primitive<f64>, wr: &Primitive<f64>) -> Vector<f64, 3> {
        let g = air();
        prim_to_cons(wr, &g).unwrap() - prim_to_cons(wl, &g).unwrap()
    }

    #[test]
    fn averages_examples() {
        let g = air();
        let st = w(0.6, 1.2, 2.0);
        let a = interface_averages(&st, &st, &g);
        assert!((a.rho_bar - 0.6).abs() < 1e-15 && (a.u_bar - 1.2).abs() < 1e-15);
        assert!((a.a2_bar - 1.4 * 2.0 / 0.6).abs() < 1e-14);

        let a = interface_averages(&w(1.0, 0.0, 1.0), &w(4.0, 3.0, 1.0), &g);
        assert!((a.u_bar - 2.0).abs() < 1e-15 && (a.rho_bar - 2.0).abs() < 1e-15);

        let a = interface_averages(&w(1.0, 0.0, 1.0), &w(0.125, 0.0, 0.1), &g);
        let s = 0.125f64.sqrt();
        assert!((a.a2_bar - (1.4 + s * 1.12) / (1.0 + s)).abs() < 1e-14);
    }

    #[test]
    fn pure_contact_strengths() {
        let g = air();
        let avg = interface_averages(&w(1.0, 0.3, 1.0), &w(2.0, 0.3, 1.0), &g);
        let d = Deltas { rho: 1.0, u: 0.0, p: 0.0 };
        assert_eq!(zbs_pressure_strengths(&avg, &d, &g).alpha, [0.0, 1.0, 0.0]);
        assert_eq!(tvs_pressure_strengths(&avg, &d).alpha, [0.0, 1.0, 0.0]);
    }

    #[test]
    fn tvs_strengths_at_zero_mean_velocity() {
        let g = air();
        let avg = interface_averages(&w(1.0, -0.5, 1.0), &w(1.0, 0.5, 2.0), &g);
        assert!(avg.u_bar.abs() < 1e-15);
        let d = Deltas { rho: 0.0, u: 1.0, p: 1.0 };
        let s = tvs_pressure_strengths(&avg, &d).alpha;
        assert!((s[0] - (0.5 * avg.rho_bar - 1.0 / avg.beta_bar)).abs() < 1e-15);
        assert!((s[2] - (0.5 * avg.rho_bar + 1.0 / avg.beta_bar)).abs() < 1e-15);
    }

    #[test]
    fn stationary_contact_has_no_dissipation() {
        let g = air();
        let (l, r) = (w(1.4, 0.0, 1.0), w(1.0, 0.0, 1.0));
        for scheme in SchemeKind::ALL {
            assert_eq!(dissipation(scheme, &l, &r, &g).0, [0.0; 3]);
            assert_eq!(interface_flux(scheme, &l, &r, &g).0, [0.0, 1.0, 0.0]);
        }
    }

    #[test]
    fn equal_states_give_physical_flux() {
        let g = air();
        let st = w(0.7, -1.3, 2.9);
        for scheme in SchemeKind::ALL {
            assert_eq!(dissipation(scheme, &st, &st, &g).0, [0.0; 3]);
            let f = interface_flux(scheme, &st, &st, &g);
            assert!((f - physical_flux(&st, &g)).max_abs() <= 1e-14 * f.max_abs());
        }
    }

    #[test]
    fn sod_interface_flux_is_finite() {
        let g = air();
        for scheme in SchemeKind::ALL {
            assert!(interface_flux(scheme, &w(1.0, 0.0, 1.0), &w(0.125, 0.0, 0.1), &g).is_finite());
        }
    }

    #[test]
    fn zbs_pressure_closed_form() {
        // Σ α|λ|R collapses to s·ā·(0, ρ̄Δu, ūρ̄Δu + Δp/(γ−1)), s = √((γ−1)/γ)
        let g = air();
        let (l, r) = (w(1.0, 0.3, 1.0), w(0.4, -0.2, 0.3));
        let avg = interface_averages(&l, &r, &g);
        let d = Deltas::between(&l, &r);
        let s = zbs_pressure_strengths(&avg, &d, &g);
        let got = pressure_dissipation(SplittingKind::ZhaBilgen, &avg, &s, &g);
        let k = (0.4f64 / 1.4).sqrt() * avg.a_bar();
        let expect = Vector([0.0, avg.rho_bar * d.u, avg.u_bar * avg.rho_bar * d.u + d.p / 0.4]) * k;
        assert!((got - expect).max_abs() < 1e-14);
    }

    prop_compose! {
        fn state()(rho in 0.05f64..20.0, u in -10.0f64..10.0, p in 0.05f64..50.0) -> Primitive<f64> {
            w(rho, u, p)
        }
    }

    proptest! {
        #[test]
        fn strengths_reconstruct_jump(l in state(), r in state()) {
            let g = air();
            let avg = interface_averages(&l, &r, &g);
            let d = Deltas::between(&l, &r);
            let du = jump(&l, &r);
            let scale = du.max_abs().max(1e-300) + prim_to_cons(&l, &g).unwrap().max_abs() + prim_to_cons(&r, &g).unwrap().max_abs();
            for (kind, s) in [
                (SplittingKind::ZhaBilgen, zbs_pressure_strengths(&avg, &d, &g)),
                (SplittingKind::ToroVazquez, tvs_pressure_strengths(&avg, &d)),
            ] {
                let sys = pressure_eigensystem_at(kind, avg.u_bar, avg.a2_bar, 1.4);
                let basis = Matrix::from_columns([sys.vectors[0], sys.vectors[1], sys.vectors[2]]);
                let rebuilt = basis.mul_vec(&Vector(s.alpha));
                prop_assert!((rebuilt - du).max_abs() <= 1e-12 * scale);
                // independent oracle: direct linear solve
                let solved = basis.solve(&du).unwrap();
                let alpha_scale = solved.max_abs().max(1.0);
                prop_assert!((solved - Vector(s.alpha)).max_abs() <= 1e-10 * alpha_scale);
            }
        }

        #[test]
        fn pressure_jacobian_u_property(l in state(), r in state()) {
            let g = air();
            let avg = interface_averages(&l, &r, &g);
            let du = jump(&l, &r);
            for kind in [SplittingKind::ZhaBilgen, SplittingKind::ToroVazquez] {
                let a = pressure_jacobian_at(kind, avg.u_bar, avg.a2_bar, 1.4);
                let dfp = split_flux(kind, &r, &g).pressure - split_flux(kind, &l, &g).pressure;
                let lhs = a.mul_vec(&du);
                let scale = a.max_abs() * du.max_abs() + dfp.max_abs()
                    + split_flux(kind, &r, &g).pressure.max_abs() + split_flux(kind, &l, &g).pressure.max_abs();
                prop_assert!((lhs - dfp).max_abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn error3_vanishes(l in state(), r in state()) {
            let g = air();
            let scale = prim_to_cons(&l, &g).unwrap()[2].abs().max(prim_to_cons(&r, &g).unwrap()[2].abs());
            prop_assert!(error3(&l, &r, &g).abs() <= 5e-14 * scale);
        }

        #[test]
        fn free_parameter_invariance(l in state(), r in state(), x1 in -100.0f64..100.0, x3 in -100.0f64..100.0) {
            let g = air();
            for scheme in SchemeKind::ALL {
                let closed = dissipation(scheme, &l, &r, &g);
                let expanded = dissipation_expanded(scheme, &l, &r, &g, FreeParams { x1, x3 });
                let scale = closed.max_abs().max(1.0) * (1.0 + x1.abs().max(x3.abs()));
                prop_assert!((closed - expanded).max_abs() <= 1e-11 * scale, "{scheme}");
            }
        }

        #[test]
        fn mirror_symmetry(l in state(), r in state()) {
            let g = air();
            for scheme in SchemeKind::ALL {
                let f = interface_flux(scheme, &l, &r, &g);
                let m = interface_flux(scheme, &r.mirrored(), &l.mirrored(), &g);
                let scale = f.max_abs().max(1.0);
                prop_assert!((m[0] + f[0]).abs() <= 1e-12 * scale);
                prop_assert!((m[1] - f[1]).abs() <= 1e-12 * scale);
                prop_assert!((m[2] + f[2]).abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn stationary_contact_any_densities(rl in 0.01f64..100.0, rr in 0.01f64..100.0, p in 0.01f64..100.0) {
            let g = air();
            for scheme in SchemeKind::ALL {
                let f = interface_flux(scheme, &w(rl, 0.0, p), &w(rr, 0.0, p), &g);
                prop_assert_eq!(f.0, [0.0, p, 0.0]);
            }
        }
    }
}
