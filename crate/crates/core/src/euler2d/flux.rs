//! Face geometry and the two-dimensional ZBS-FDS face flux.
//!
//! Everything is written in terms of the face normal (nx, ny): the normal
//! velocity u⊥ = u·nx + v·ny and the tangential one u∥ = −u·ny + v·nx.

use crate::eigen::{ChainLink, EigenSystem, FreeParams};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Real;
use crate::splitting::SplitFlux;
use crate::state::GasModel;

use super::state::{normal_flux, total_energy_2d, Flux2D, Prim2D};

/// Relative size of Θ̄² − ū⊥² below which the tangential wave strengths fall
/// back to α₂ = 0, α₃ = Δρ.
pub const STRENGTH_REGULARIZATION: f64 = 1e-8;

/// Unit normal and length of a face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceGeometry<T> {
    pub nx: T,
    pub ny: T,
    pub ds: T,
}

impl<T: Real> FaceGeometry<T> {
    /// Unit normal along +x.
    pub fn x_unit() -> Self {
        Self { nx: T::one(), ny: T::zero(), ds: T::one() }
    }
}

/// Geometry of the face running from `a` to `b`: nx = Δy/Δs, ny = −Δx/Δs.
pub fn face_geometry<T: Real>(a: (T, T), b: (T, T)) -> Result<FaceGeometry<T>> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let ds = dx.hypot(dy);
    if !(ds > T::zero()) {
        return Err(Error::DegenerateFace);
    }
    Ok(FaceGeometry { nx: dy / ds, ny: -dx / ds, ds })
}

/// F_c = u⊥(ρ, ρu, ρv, ρE), F_p = (0, p·nx, p·ny, p·u⊥).
pub fn split_flux_2d<T: Real>(w: &Prim2D<T>, geom: &FaceGeometry<T>, gas: &GasModel<T>) -> SplitFlux<T, 4> {
    let un = w.normal_velocity(geom.nx, geom.ny);
    let e = total_energy_2d(w, gas);
    SplitFlux {
        convection: Vector([w.rho, w.rho * w.u, w.rho * w.v, w.rho * e]) * un,
        pressure: Vector([T::zero(), w.p * geom.nx, w.p * geom.ny, w.p * un]),
    }
}

fn un_ut<T: Real>(w: &Prim2D<T>, g: &FaceGeometry<T>) -> (T, T) {
    (w.u * g.nx + w.v * g.ny, -w.u * g.ny + w.v * g.nx)
}

/// Jacobian of the convection flux with respect to (ρ, ρu, ρv, ρE).
pub fn convection_jacobian_2d<T: Real>(w: &Prim2D<T>, geom: &FaceGeometry<T>, gas: &GasModel<T>) -> Matrix<T, 4> {
    let (nx, ny) = (geom.nx, geom.ny);
    let (un, _) = un_ut(w, geom);
    let (u, v, e) = (w.u, w.v, total_energy_2d(w, gas));
    let z = T::zero();
    Matrix::from_rows([[z, nx, ny, z], [-u * un, un + u * nx, u * ny, z], [-v * un, v * nx, un + v * ny, z], [-e * un, e * nx, e * ny, un]])
}

/// Jacobian of the pressure flux with respect to (ρ, ρu, ρv, ρE).
pub fn pressure_jacobian_2d<T: Real>(w: &Prim2D<T>, geom: &FaceGeometry<T>, gas: &GasModel<T>) -> Matrix<T, 4> {
    let (nx, ny) = (geom.nx, geom.ny);
    let (un, _) = un_ut(w, geom);
    let gm1 = gas.gm1();
    let theta2 = T::half() * (w.u * w.u + w.v * w.v);
    let phi2 = gas.gamma() * w.p / w.rho / (gas.gamma() * gm1);
    let (u, v) = (w.u, w.v);
    let z = T::zero();
    Matrix::from_rows([
        [z, z, z, z],
        [theta2 * nx, -nx * u, -nx * v, nx],
        [theta2 * ny, -ny * u, -ny * v, ny],
        [(theta2 - phi2) * un, phi2 * nx - un * u, phi2 * ny - un * v, un],
    ])
    .scale(gm1)
}

/// Free choices in the chain-closing generalized eigenvector
/// X₂ = (x₁, x₂, x₃, x₄): x₁ and x₄ are free, and
/// (x₂, x₃) = (1 + u⊥x₁)·n + `tangential`·(−ny, nx) satisfies
/// nx·x₂ + ny·x₃ = 1 + u⊥x₁.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChainParams2D<T> {
    pub x1: T,
    pub x4: T,
    pub tangential: T,
}

/// Convection eigensystem: eigenvalue u⊥ (×4), basis
/// X₁ = (1, u, v, E), X₂ (chained to X₁), (nx, u⊥, 0, 0), (ny, 0, u⊥, 0).
///
/// The last two columns become parallel when u⊥ = 0.
pub fn convection_eigensystem_2d<T: Real>(
    w: &Prim2D<T>,
    geom: &FaceGeometry<T>,
    gas: &GasModel<T>,
    params: ChainParams2D<T>,
) -> EigenSystem<T, 4> {
    let (un, _) = un_ut(w, geom);
    let (nx, ny) = (geom.nx, geom.ny);
    let e = total_energy_2d(w, gas);
    let z = T::zero();
    let lead = T::one() + un * params.x1;
    let x2 = lead * nx - params.tangential * ny;
    let x3 = lead * ny + params.tangential * nx;
    EigenSystem {
        eigenvalues: [un; 4],
        vectors: vec![
            Vector([T::one(), w.u, w.v, e]),
            Vector([params.x1, x2, x3, params.x4]),
            Vector([nx, un, z, z]),
            Vector([ny, z, un, z]),
        ],
        chain_links: vec![ChainLink { vector: 1, previous: 0 }],
        free_params: FreeParams { x1: params.x1, x3 },
    }
}

/// Pressure eigensystem: λ = (−sa, 0, 0, sa) with s = √((γ−1)/γ).
///
/// R₂ = (u∥, u·u∥ + Θ²ny, v·u∥ − Θ²nx, 0) vanishes for a fluid at rest.
pub fn pressure_eigensystem_2d<T: Real>(w: &Prim2D<T>, geom: &FaceGeometry<T>, gas: &GasModel<T>) -> EigenSystem<T, 4> {
    let (un, ut) = un_ut(w, geom);
    pressure_eigensystem_2d_at(w.u, w.v, un, ut, gas.gamma() * w.p / w.rho, geom, gas)
}

fn pressure_eigensystem_2d_at<T: Real>(u: T, v: T, un: T, ut: T, a2: T, geom: &FaceGeometry<T>, gas: &GasModel<T>) -> EigenSystem<T, 4> {
    let g = gas.gamma();
    let (nx, ny) = (geom.nx, geom.ny);
    let a = a2.sqrt();
    let lam = (gas.gm1() / g).sqrt() * a;
    let shift = a / (g * gas.gm1()).sqrt();
    let theta2 = T::half() * (u * u + v * v);
    let z = T::zero();
    EigenSystem {
        eigenvalues: [-lam, z, z, lam],
        vectors: vec![
            Vector([z, nx, ny, un - shift]),
            Vector([ut, u * ut + theta2 * ny, v * ut - theta2 * nx, z]),
            Vector([T::one(), nx * un, ny * un, un * un - theta2]),
            Vector([z, nx, ny, un + shift]),
        ],
        chain_links: vec![],
        free_params: FreeParams::default(),
    }
}

/// √ρ-weighted face averages together with the face normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Averages2D<T> {
    pub rho_bar: T,
    pub u_bar: T,
    pub v_bar: T,
    pub a2_bar: T,
    pub nx: T,
    pub ny: T,
}

impl<T: Real> Averages2D<T> {
    pub fn u_perp(&self) -> T {
        self.u_bar * self.nx + self.v_bar * self.ny
    }

    pub fn u_par(&self) -> T {
        -self.u_bar * self.ny + self.v_bar * self.nx
    }

    /// Θ̄² = (ū² + v̄²)/2
    pub fn theta2(&self) -> T {
        T::half() * (self.u_bar * self.u_bar + self.v_bar * self.v_bar)
    }

    pub fn a_bar(&self) -> T {
        self.a2_bar.sqrt()
    }
}

pub fn averages_2d<T: Real>(wl: &Prim2D<T>, wr: &Prim2D<T>, geom: &FaceGeometry<T>, gas: &GasModel<T>) -> Averages2D<T> {
    let (sl, sr) = (wl.rho.sqrt(), wr.rho.sqrt());
    let inv = (sl + sr).recip();
    let g = gas.gamma();
    Averages2D {
        rho_bar: sl * sr,
        u_bar: (sl * wl.u + sr * wr.u) * inv,
        v_bar: (sl * wl.v + sr * wr.v) * inv,
        a2_bar: (sl * g * wl.p / wl.rho + sr * g * wr.p / wr.rho) * inv,
        nx: geom.nx,
        ny: geom.ny,
    }
}

/// Jumps R − L of the primitive variables and of the face-aligned velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deltas2D<T> {
    pub rho: T,
    pub u: T,
    pub v: T,
    pub p: T,
    pub u_perp: T,
    pub u_par: T,
}

impl<T: Real> Deltas2D<T> {
    pub fn between(wl: &Prim2D<T>, wr: &Prim2D<T>, geom: &FaceGeometry<T>) -> Self {
        let (du, dv) = (wr.u - wl.u, wr.v - wl.v);
        Self {
            rho: wr.rho - wl.rho,
            u: du,
            v: dv,
            p: wr.p - wl.p,
            u_perp: du * geom.nx + dv * geom.ny,
            u_par: -du * geom.ny + dv * geom.nx,
        }
    }
}

/// Pressure wave strengths; `regularized` is set when the tangential pair
/// used the fallback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveStrengths2D<T> {
    pub alpha: [T; 4],
    pub regularized: bool,
}

fn acoustic_strengths<T: Real>(avg: &Averages2D<T>, d: &Deltas2D<T>, gas: &GasModel<T>) -> (T, T) {
    let half_mom = T::half() * avg.rho_bar * d.u_perp;
    let acoustic = (gas.gamma() / gas.gm1()).sqrt() * d.p / (T::two() * avg.a_bar());
    (half_mom - acoustic, half_mom + acoustic)
}

fn tangential_denominator<T: Real>(avg: &Averages2D<T>) -> (T, T) {
    let un = avg.u_perp();
    let theta2 = avg.theta2();
    (theta2 - un * un, T::c(STRENGTH_REGULARIZATION) * theta2.max(avg.a2_bar))
}

/// Closed-form pressure wave strengths. Fails when Θ̄² − ū⊥² is too small
/// for α₂ and α₃ to be meaningful.
pub fn wave_strengths_2d<T: Real>(avg: &Averages2D<T>, d: &Deltas2D<T>, gas: &GasModel<T>) -> Result<[T; 4]> {
    let s = wave_strengths_2d_regularized(avg, d, gas);
    if s.regularized {
        let (den, thr) = tangential_denominator(avg);
        return Err(Error::IllConditionedStrengths { denominator: den.f64(), threshold: thr.f64() });
    }
    Ok(s.alpha)
}

/// As [`wave_strengths_2d`], with α₂ = 0 and α₃ = Δρ in the degenerate case.
pub fn wave_strengths_2d_regularized<T: Real>(avg: &Averages2D<T>, d: &Deltas2D<T>, gas: &GasModel<T>) -> WaveStrengths2D<T> {
    let (a1, a4) = acoustic_strengths(avg, d, gas);
    let (den, thr) = tangential_denominator(avg);
    if den.abs() < thr || den == T::zero() {
        return WaveStrengths2D { alpha: [a1, T::zero(), d.rho, a4], regularized: true };
    }
    let ut = avg.u_par();
    let a2 = (ut * d.rho + avg.rho_bar * d.u_par) / den;
    let a3 = d.rho - (ut * ut * d.rho + avg.rho_bar * ut * d.u_par) / den;
    WaveStrengths2D { alpha: [a1, a2, a3, a4], regularized: false }
}

/// ΔU from primitive jumps and averages:
/// (Δρ, ρ̄Δu + ūΔρ, ρ̄Δv + v̄Δρ, Δp/(γ−1) + Θ̄²Δρ + ρ̄(ūΔu + v̄Δv)).
pub fn averaged_jump_2d<T: Real>(avg: &Averages2D<T>, d: &Deltas2D<T>, gas: &GasModel<T>) -> Vector<T, 4> {
    let Averages2D { rho_bar, u_bar, v_bar, .. } = *avg;
    Vector([
        d.rho,
        rho_bar * d.u + u_bar * d.rho,
        rho_bar * d.v + v_bar * d.rho,
        d.p / gas.gm1() + avg.theta2() * d.rho + rho_bar * (u_bar * d.u + v_bar * d.v),
    ])
}

/// Upwind dissipation |ū⊥|ΔU + Σ αᵢ|λ̄ᵢ|R̄ᵢ.
pub fn dissipation_2d<T: Real>(wl: &Prim2D<T>, wr: &Prim2D<T>, geom: &FaceGeometry<T>, gas: &GasModel<T>) -> Flux2D<T> {
    let avg = averages_2d(wl, wr, geom, gas);
    let d = Deltas2D::between(wl, wr, geom);
    let un = avg.u_perp();
    let convection = averaged_jump_2d(&avg, &d, gas) * un.abs();
    let s = wave_strengths_2d_regularized(&avg, &d, gas);
    let sys = pressure_eigensystem_2d_at(avg.u_bar, avg.v_bar, un, avg.u_par(), avg.a2_bar, geom, gas);
    let mut out = convection;
    for k in 0..4 {
        let lam = sys.eigenvalues[k].abs();
        // λ₂ = λ₃ = 0: skipping them keeps a regularized pair out of the sum
        if lam != T::zero() {
            out += sys.vectors[k] * (s.alpha[k] * lam);
        }
    }
    out
}

/// Face flux per unit length: ½(F_L + F_R) − ½D.
pub fn interface_flux_2d<T: Real>(wl: &Prim2D<T>, wr: &Prim2D<T>, geom: &FaceGeometry<T>, gas: &GasModel<T>) -> Flux2D<T> {
    let avg_flux = (normal_flux(wl, geom.nx, geom.ny, gas) + normal_flux(wr, geom.nx, geom.ny, gas)) * T::half();
    avg_flux - dissipation_2d(wl, wr, geom, gas) * T::half()
}
