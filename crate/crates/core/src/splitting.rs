//! Convection–pressure splittings F = F_c + F_p of the 1D Euler flux and
//! their closed-form Jacobians.
//!
//! Three splittings are supported:
//!
//! * Liou–Steffen: only the pressure term of the momentum equation is
//!   split off, F_p = (0, p, 0).
//! * Zha–Bilgen: F_p = (0, p, pu), so the pressure eigenvalues carry no
//!   convective speed.
//! * Toro–Vázquez: F_p = (0, p, γpu/(γ−1)), leaving no pressure at all in
//!   the convective part.
//!
//! Jacobians are expressed in terms of (u, a², γ) so that they can be
//! evaluated both at a physical state and at an interface-averaged state.

use std::fmt;
use std::str::FromStr;

use crate::linalg::{Matrix, Vector};
use crate::scalar::Real;
use crate::state::{specific_total_energy, FluxVector, GasModel, Primitive};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingKind {
    LiouSteffen,
    ZhaBilgen,
    ToroVazquez,
}

impl SplittingKind {
    pub const ALL: [SplittingKind; 3] = [SplittingKind::LiouSteffen, SplittingKind::ZhaBilgen, SplittingKind::ToroVazquez];

    pub fn short_name(self) -> &'static str {
        match self {
            SplittingKind::LiouSteffen => "ls",
            SplittingKind::ZhaBilgen => "zb",
            SplittingKind::ToroVazquez => "tv",
        }
    }
}

impl fmt::Display for SplittingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplittingKind::LiouSteffen => "Liou-Steffen",
            SplittingKind::ZhaBilgen => "Zha-Bilgen",
            SplittingKind::ToroVazquez => "Toro-Vazquez",
        })
    }
}

impl FromStr for SplittingKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ls" | "liou-steffen" => Ok(SplittingKind::LiouSteffen),
            "zb" | "zha-bilgen" => Ok(SplittingKind::ZhaBilgen),
            "tv" | "toro-vazquez" => Ok(SplittingKind::ToroVazquez),
            other => Err(format!("unknown splitting '{other}'")),
        }
    }
}

/// A (convection, pressure) pair of flux vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitFlux<T, const N: usize> {
    pub convection: Vector<T, N>,
    pub pressure: Vector<T, N>,
}

impl<T: Real, const N: usize> SplitFlux<T, N> {
    pub fn total(&self) -> Vector<T, N> {
        self.convection + self.pressure
    }
}

/// Energy component of the pressure flux, as a multiple of pu.
fn pressure_energy_factor<T: Real>(kind: SplittingKind, gamma: T) -> T {
    match kind {
        SplittingKind::LiouSteffen => T::zero(),
        SplittingKind::ZhaBilgen => T::one(),
        SplittingKind::ToroVazquez => gamma / (gamma - T::one()),
    }
}

pub fn split_flux<T: Real>(kind: SplittingKind, w: &Primitive<T>, gas: &GasModel<T>) -> SplitFlux<T, 3> {
    let mass = w.rho * w.u;
    let energy = w.rho * specific_total_energy(w, gas);
    let pu = w.p * w.u;
    let k = pressure_energy_factor(kind, gas.gamma());
    let pressure = Vector([T::zero(), w.p, k * pu]);
    let convection = match kind {
        SplittingKind::LiouSteffen => Vector([mass, mass * w.u, w.u * energy + pu]),
        SplittingKind::ZhaBilgen => Vector([mass, mass * w.u, w.u * energy]),
        SplittingKind::ToroVazquez => Vector([mass, mass * w.u, T::half() * mass * w.u * w.u]),
    };
    SplitFlux { convection, pressure }
}

/// Sum of the split parts; equals [`crate::state::physical_flux`] to round-off.
pub fn split_total<T: Real>(kind: SplittingKind, w: &Primitive<T>, gas: &GasModel<T>) -> FluxVector<T> {
    split_flux(kind, w, gas).total()
}

/// E = a²/(γ(γ−1)) + u²/2
#[inline]
pub(crate) fn total_energy_from<T: Real>(u: T, a2: T, gamma: T) -> T {
    a2 / (gamma * (gamma - T::one())) + T::half() * u * u
}

/// ∂F_c/∂U at velocity `u` and squared sound speed `a2`.
pub fn convection_jacobian_at<T: Real>(kind: SplittingKind, u: T, a2: T, gamma: T) -> Matrix<T, 3> {
    let (zero, one, two) = (T::zero(), T::one(), T::two());
    let u2 = u * u;
    let e = total_energy_from(u, a2, gamma);
    let row3 = match kind {
        SplittingKind::LiouSteffen => {
            let gm1 = gamma - one;
            [-gamma * u * e + gm1 * u2 * u, gamma * e - T::c(1.5) * gm1 * u2, gamma * u]
        }
        SplittingKind::ZhaBilgen => [-u * e, e, u],
        SplittingKind::ToroVazquez => [-u2 * u, T::c(1.5) * u2, zero],
    };
    Matrix::from_rows([[zero, one, zero], [-u2, two * u, zero], row3])
}

/// ∂F_p/∂U at velocity `u` and squared sound speed `a2`.
pub fn pressure_jacobian_at<T: Real>(kind: SplittingKind, u: T, a2: T, gamma: T) -> Matrix<T, 3> {
    let zero = T::zero();
    let gm1 = gamma - T::one();
    let u2 = u * u;
    let row2 = [T::half() * gm1 * u2, -gm1 * u, gm1];
    let row3 = match kind {
        SplittingKind::LiouSteffen => [zero, zero, zero],
        SplittingKind::ZhaBilgen => [-a2 * u / gamma + T::half() * gm1 * u2 * u, a2 / gamma - gm1 * u2, gm1 * u],
        SplittingKind::ToroVazquez => [-u * a2 / gm1 + T::half() * gamma * u2 * u, a2 / gm1 - gamma * u2, gamma * u],
    };
    Matrix::from_rows([[zero, zero, zero], row2, row3])
}

pub fn convection_jacobian<T: Real>(kind: SplittingKind, w: &Primitive<T>, gas: &GasModel<T>) -> Matrix<T, 3> {
    convection_jacobian_at(kind, w.u, gas.gamma() * w.p / w.rho, gas.gamma())
}

pub fn pressure_jacobian<T: Real>(kind: SplittingKind, w: &Primitive<T>, gas: &GasModel<T>) -> Matrix<T, 3> {
    pressure_jacobian_at(kind, w.u, gas.gamma() * w.p / w.rho, gas.gamma())
}
