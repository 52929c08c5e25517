//! One-dimensional gas states, the ideal-gas equation of state and the
//! physical Euler flux.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Real;

/// Ideal gas with constant ratio of specific heats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel<T> {
    gamma: T,
}

impl<T: Real> GasModel<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if gamma > T::one() && gamma.is_finite() {
            Ok(Self { gamma })
        } else {
            Err(Error::InvalidGamma { gamma: gamma.f64() })
        }
    }

    /// Diatomic gas, γ = 1.4.
    pub fn air() -> Self {
        Self { gamma: T::c(1.4) }
    }

    #[inline]
    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// γ − 1
    #[inline]
    pub fn gm1(&self) -> T {
        self.gamma - T::one()
    }
}

impl<T: Real> Default for GasModel<T> {
    fn default() -> Self {
        Self::air()
    }
}

/// (ρ, u, p)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive<T> {
    pub rho: T,
    pub u: T,
    pub p: T,
}

impl<T: Real> Primitive<T> {
    /// Builds a state, rejecting non-positive density or pressure.
    pub fn new(rho: T, u: T, p: T) -> Result<Self> {
        let w = Self { rho, u, p };
        w.check()?;
        Ok(w)
    }

    /// Builds a state without validation (for ghost cells and tests that
    /// probe the error paths).
    pub const fn new_unchecked(rho: T, u: T, p: T) -> Self {
        Self { rho, u, p }
    }

    pub fn is_physical(&self) -> bool {
        self.rho > T::zero() && self.p > T::zero() && self.u.is_finite() && self.rho.is_finite() && self.p.is_finite()
    }

    pub fn check(&self) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            Err(Error::NonPhysical { rho: self.rho.f64(), p: self.p.f64() })
        }
    }

    /// u → −u
    pub fn mirrored(&self) -> Self {
        Self { u: -self.u, ..*self }
    }
}

/// (ρ, ρu, ρE)
pub type Conserved<T> = Vector<T, 3>;

/// Mass, momentum and energy fluxes.
pub type FluxVector<T> = Vector<T, 3>;

/// Specific total energy E = p/(ρ(γ−1)) + u²/2.
pub fn specific_total_energy<T: Real>(w: &Primitive<T>, gas: &GasModel<T>) -> T {
    w.p / (w.rho * gas.gm1()) + T::half() * w.u * w.u
}

/// Specific internal energy e = p/(ρ(γ−1)).
pub fn internal_energy<T: Real>(w: &Primitive<T>, gas: &GasModel<T>) -> T {
    w.p / (w.rho * gas.gm1())
}

pub fn prim_to_cons<T: Real>(w: &Primitive<T>, gas: &GasModel<T>) -> Result<Conserved<T>> {
    w.check()?;
    Ok(prim_to_cons_unchecked(w, gas))
}

#[inline]
pub(crate) fn prim_to_cons_unchecked<T: Real>(w: &Primitive<T>, gas: &GasModel<T>) -> Conserved<T> {
    let mom = w.rho * w.u;
    Vector([w.rho, mom, w.p / gas.gm1() + T::half() * mom * w.u])
}

pub fn cons_to_prim<T: Real>(q: &Conserved<T>, gas: &GasModel<T>) -> Result<Primitive<T>> {
    let w = cons_to_prim_unchecked(q, gas);
    w.check()?;
    Ok(w)
}

#[inline]
pub(crate) fn cons_to_prim_unchecked<T: Real>(q: &Conserved<T>, gas: &GasModel<T>) -> Primitive<T> {
    let rho = q[0];
    let u = q[1] / rho;
    let p = gas.gm1() * (q[2] - T::half() * q[1] * u);
    Primitive { rho, u, p }
}

pub fn sound_speed<T: Real>(w: &Primitive<T>, gas: &GasModel<T>) -> Result<T> {
    w.check()?;
    Ok((gas.gamma() * w.p / w.rho).sqrt())
}

#[inline]
pub(crate) fn sound_speed_sq<T: Real>(w: &Primitive<T>, gas: &GasModel<T>) -> T {
    gas.gamma() * w.p / w.rho
}

/// F(U) = (ρu, p + ρu², pu + ρuE).
pub fn physical_flux<T: Real>(w: &Primitive<T>, gas: &GasModel<T>) -> FluxVector<T> {
    let e = specific_total_energy(w, gas);
    let mass = w.rho * w.u;
    Vector([mass, w.p + mass * w.u, w.p * w.u + mass * e])
}
