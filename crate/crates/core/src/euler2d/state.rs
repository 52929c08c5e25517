//! Two-dimensional gas states and the face-normal physical flux.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Real;
use crate::state::GasModel;

/// (ρ, u, v, p)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prim2D<T> {
    pub rho: T,
    pub u: T,
    pub v: T,
    pub p: T,
}

/// (ρ, ρu, ρv, ρE)
pub type Cons2D<T> = Vector<T, 4>;

/// Flux through a face of unit length.
pub type Flux2D<T> = Vector<T, 4>;

impl<T: Real> Prim2D<T> {
    pub fn new(rho: T, u: T, v: T, p: T) -> Result<Self> {
        let w = Self { rho, u, v, p };
        w.check()?;
        Ok(w)
    }

    pub const fn new_unchecked(rho: T, u: T, v: T, p: T) -> Self {
        Self { rho, u, v, p }
    }

    pub fn is_physical(&self) -> bool {
        self.rho > T::zero() && self.p > T::zero() && self.rho.is_finite() && self.p.is_finite() && self.u.is_finite() && self.v.is_finite()
    }

    pub fn check(&self) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            Err(Error::NonPhysical { rho: self.rho.f64(), p: self.p.f64() })
        }
    }

    /// Velocity component along (nx, ny).
    #[inline]
    pub fn normal_velocity(&self, nx: T, ny: T) -> T {
        self.u * nx + self.v * ny
    }

    /// Velocity rotated by `angle` (radians, counter-clockwise).
    pub fn rotated(&self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self { u: c * self.u - s * self.v, v: s * self.u + c * self.v, ..*self }
    }
}

/// Specific total energy E = p/(ρ(γ−1)) + (u² + v²)/2.
pub fn total_energy_2d<T: Real>(w: &Prim2D<T>, gas: &GasModel<T>) -> T {
    w.p / (w.rho * gas.gm1()) + T::half() * (w.u * w.u + w.v * w.v)
}

pub fn sound_speed_2d<T: Real>(w: &Prim2D<T>, gas: &GasModel<T>) -> T {
    (gas.gamma() * w.p / w.rho).sqrt()
}

pub fn prim_to_cons_2d<T: Real>(w: &Prim2D<T>, gas: &GasModel<T>) -> Result<Cons2D<T>> {
    w.check()?;
    Ok(prim_to_cons_2d_unchecked(w, gas))
}

#[inline]
pub(crate) fn prim_to_cons_2d_unchecked<T: Real>(w: &Prim2D<T>, gas: &GasModel<T>) -> Cons2D<T> {
    let (mu, mv) = (w.rho * w.u, w.rho * w.v);
    Vector([w.rho, mu, mv, w.p / gas.gm1() + T::half() * (mu * w.u + mv * w.v)])
}

pub fn cons_to_prim_2d<T: Real>(q: &Cons2D<T>, gas: &GasModel<T>) -> Result<Prim2D<T>> {
    let w = cons_to_prim_2d_unchecked(q, gas);
    w.check()?;
    Ok(w)
}

#[inline]
pub(crate) fn cons_to_prim_2d_unchecked<T: Real>(q: &Cons2D<T>, gas: &GasModel<T>) -> Prim2D<T> {
    let rho = q[0];
    let (u, v) = (q[1] / rho, q[2] / rho);
    let p = gas.gm1() * (q[3] - T::half() * (q[1] * u + q[2] * v));
    Prim2D { rho, u, v, p }
}

/// (ρu⊥, ρuu⊥ + p·nx, ρvu⊥ + p·ny, (ρE + p)u⊥)
pub fn normal_flux<T: Real>(w: &Prim2D<T>, nx: T, ny: T, gas: &GasModel<T>) -> Flux2D<T> {
    let un = w.normal_velocity(nx, ny);
    let mass = w.rho * un;
    let e = total_energy_2d(w, gas);
    Vector([mass, mass * w.u + w.p * nx, mass * w.v + w.p * ny, (w.rho * e + w.p) * un])
}
