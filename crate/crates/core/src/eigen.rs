//! Eigenstructure of the split Jacobians, including the generalized
//! eigenvectors that complete the defective convection Jacobians, and
//! rank-based Jordan-form checks.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Real;
use crate::splitting::{convection_jacobian_at, total_energy_from, SplittingKind};
use crate::state::{sound_speed_sq, GasModel, Primitive};

/// Relative singular-value threshold below which a value counts as zero.
pub const RANK_TOLERANCE: f64 = 1e-9;

/// Singular values within this factor above the threshold make a rank test
/// inconclusive.
pub const RANK_GAP: f64 = 1e3;

/// `A·X[vector] = λ·X[vector] + X[previous]`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainLink {
    pub vector: usize,
    pub previous: usize,
}

/// The arbitrary constants of the generalized eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FreeParams<T> {
    pub x1: T,
    pub x3: T,
}

/// Eigenvalues paired with basis vectors. `eigenvalues[k]` belongs to
/// `vectors[k]`; a defective system without a completed chain carries fewer
/// vectors than eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<T, const N: usize> {
    pub eigenvalues: [T; N],
    pub vectors: Vec<Vector<T, N>>,
    pub chain_links: Vec<ChainLink>,
    pub free_params: FreeParams<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanDecomposition<T, const N: usize> {
    pub p: Matrix<T, N>,
    pub j: Matrix<T, N>,
}

impl<T: Real, const N: usize> JordanDecomposition<T, N> {
    /// Block sizes read off the superdiagonal of `j`, in order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![1];
        for i in 1..N {
            if self.j[(i - 1, i)] != T::zero() {
                *sizes.last_mut().unwrap() += 1;
            } else {
                sizes.push(1);
            }
        }
        sizes
    }
}

impl<T: Real, const N: usize> EigenSystem<T, N> {
    pub fn is_complete(&self) -> bool {
        self.vectors.len() == N
    }

    /// True when some eigenvector has to be replaced by a generalized one.
    pub fn is_defective(&self) -> bool {
        !self.chain_links.is_empty() || !self.is_complete()
    }

    /// Basis matrix with the vectors as columns.
    pub fn basis(&self) -> Result<Matrix<T, N>> {
        if !self.is_complete() {
            return Err(Error::SingularMatrix { pivot: 0.0 });
        }
        Ok(Matrix::from_columns(std::array::from_fn(|k| self.vectors[k])))
    }

    pub fn jordan(&self) -> Result<JordanDecomposition<T, N>> {
        let p = self.basis()?;
        let mut j = Matrix::zeros();
        for k in 0..N {
            j[(k, k)] = self.eigenvalues[k];
        }
        for link in &self.chain_links {
            j[(link.previous, link.vector)] = T::one();
        }
        Ok(JordanDecomposition { p, j })
    }

    /// Reorders the basis: new position `i` holds old vector `order[i]`.
    pub fn reordered(&self, order: [usize; N]) -> Self {
        assert!(self.is_complete(), "cannot reorder an incomplete basis");
        let mut inverse = [0usize; N];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        Self {
            eigenvalues: order.map(|k| self.eigenvalues[k]),
            vectors: order.iter().map(|&k| self.vectors[k]).collect(),
            chain_links: self.chain_links.iter().map(|l| ChainLink { vector: inverse[l.vector], previous: inverse[l.previous] }).collect(),
            free_params: self.free_params,
        }
    }

    /// Largest max-abs residual of the defining relations
    /// `A·X_k − λ_k X_k (− X_prev)` over all basis vectors.
    pub fn residual(&self, a: &Matrix<T, N>) -> T {
        let mut worst = T::zero();
        for (k, x) in self.vectors.iter().enumerate() {
            let mut r = a.mul_vec(x) - *x * self.eigenvalues[k];
            if let Some(link) = self.chain_links.iter().find(|l| l.vector == k) {
                r -= self.vectors[link.previous];
            }
            worst = worst.max(r.max_abs());
        }
        worst
    }
}

fn ls_convection<T: Real>(u: T, gamma: T) -> EigenSystem<T, 3> {
    let (zero, one) = (T::zero(), T::one());
    EigenSystem {
        eigenvalues: [gamma * u, u, u],
        vectors: vec![Vector([zero, zero, one]), Vector([one, u, T::half() * u * u])],
        chain_links: vec![],
        free_params: FreeParams::default(),
    }
}

/// Convection eigensystem at velocity `u` and squared sound speed `a2`.
///
/// ZB: eigenvalue u (×3), basis (1,u,E), (x₁, 1+ux₁, x₃), (0,0,1) with
/// A·R₂ = u·R₂ + R₁. TV: eigenvalues (0,u,u), basis (0,0,1), (1,u,u²/2),
/// (x₁, 1+ux₁, u+u²x₁/2) with A·R₃ = u·R₃ + R₂. LS has only two
/// independent eigenvectors and no chain.
pub fn convection_eigensystem_at<T: Real>(kind: SplittingKind, u: T, a2: T, gamma: T, params: FreeParams<T>) -> EigenSystem<T, 3> {
    let (zero, one) = (T::zero(), T::one());
    let FreeParams { x1, x3 } = params;
    match kind {
        SplittingKind::LiouSteffen => ls_convection(u, gamma),
        SplittingKind::ZhaBilgen => {
            let e = total_energy_from(u, a2, gamma);
            EigenSystem {
                eigenvalues: [u, u, u],
                vectors: vec![Vector([one, u, e]), Vector([x1, one + u * x1, x3]), Vector([zero, zero, one])],
                chain_links: vec![ChainLink { vector: 1, previous: 0 }],
                free_params: params,
            }
        }
        SplittingKind::ToroVazquez => EigenSystem {
            eigenvalues: [zero, u, u],
            vectors: vec![
                Vector([zero, zero, one]),
                Vector([one, u, T::half() * u * u]),
                Vector([x1, one + u * x1, u + T::half() * u * u * x1]),
            ],
            chain_links: vec![ChainLink { vector: 2, previous: 1 }],
            free_params: FreeParams { x1, x3: zero },
        },
    }
}

pub fn convection_eigensystem<T: Real>(
    kind: SplittingKind,
    w: &Primitive<T>,
    gas: &GasModel<T>,
    params: FreeParams<T>,
) -> EigenSystem<T, 3> {
    convection_eigensystem_at(kind, w.u, sound_speed_sq(w, gas), gas.gamma(), params)
}

/// Pressure eigensystem at velocity `u` and squared sound speed `a2`,
/// ordered (λ₋, 0, λ₊) for ZB and TV.
pub fn pressure_eigensystem_at<T: Real>(kind: SplittingKind, u: T, a2: T, gamma: T) -> EigenSystem<T, 3> {
    let (zero, one, half) = (T::zero(), T::one(), T::half());
    let gm1 = gamma - one;
    let (eigenvalues, vectors) = match kind {
        SplittingKind::LiouSteffen => {
            ([-gm1 * u, zero, zero], vec![Vector([zero, one, zero]), Vector([one, zero, -half * u * u]), Vector([zero, one, u])])
        }
        SplittingKind::ZhaBilgen => {
            let a = a2.sqrt();
            let lam = (gm1 / gamma).sqrt() * a;
            let c = a / (gamma * gm1).sqrt();
            ([-lam, zero, lam], vec![Vector([zero, one, u - c]), Vector([one, u, half * u * u]), Vector([zero, one, u + c])])
        }
        SplittingKind::ToroVazquez => {
            let beta = (u * u + T::c(4.0) * a2).sqrt();
            let (lm, lp) = (half * (u - beta), half * (u + beta));
            ([lm, zero, lp], vec![Vector([zero, one, u + lm / gm1]), Vector([one, u, half * u * u]), Vector([zero, one, u + lp / gm1])])
        }
    };
    EigenSystem { eigenvalues, vectors, chain_links: vec![], free_params: FreeParams::default() }
}

pub fn pressure_eigensystem<T: Real>(kind: SplittingKind, w: &Primitive<T>, gas: &GasModel<T>) -> EigenSystem<T, 3> {
    pressure_eigensystem_at(kind, w.u, sound_speed_sq(w, gas), gas.gamma())
}

/// Ranks of (A − λI)^k for k = 0..=N, with singular values at or below
/// `RANK_TOLERANCE·σ_max(A − λI)^k` counted as zero.
///
/// The threshold for the k-th power is scaled by the k-th power of the
/// shifted matrix's largest singular value rather than by the power's own:
/// a nilpotent part makes the power vanish up to round-off, and its own
/// σ_max would then be round-off too.
pub fn rank_sequence<T: Real, const N: usize>(a: &Matrix<T, N>, lambda: T) -> Result<Vec<usize>> {
    let b = a.shift(lambda);
    let smax = b.singular_values()[0];
    let mut ranks = vec![N];
    if smax == T::zero() {
        ranks.extend(std::iter::repeat_n(0, N));
        return Ok(ranks);
    }
    let mut power = Matrix::identity();
    let mut scale = T::one();
    for _ in 1..=N {
        power = power.mul_mat(&b);
        scale = scale * smax;
        let threshold = T::c(RANK_TOLERANCE) * scale;
        let sv = power.singular_values();
        if let Some(&s) = sv.iter().find(|&&s| s > threshold && s <= threshold * T::c(RANK_GAP)) {
            return Err(Error::RankInconclusive { sigma: s.f64(), threshold: threshold.f64() });
        }
        ranks.push(sv.iter().filter(|&&s| s > threshold).count());
    }
    Ok(ranks)
}

/// Jordan block sizes for eigenvalue `lambda`, largest first.
///
/// The number of blocks of size ≥ k is rank((A−λI)^(k−1)) − rank((A−λI)^k).
pub fn jordan_block_signature<T: Real, const N: usize>(a: &Matrix<T, N>, lambda: T) -> Result<Vec<usize>> {
    let r = rank_sequence(a, lambda)?;
    let at_least: Vec<usize> = (1..=N).map(|k| r[k - 1] - r[k]).collect();
    let mut sizes = Vec::new();
    for k in (1..=N).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, exactly));
    }
    Ok(sizes)
}

/// Dimension of the eigenspace of `lambda`.
pub fn geometric_multiplicity<T: Real, const N: usize>(a: &Matrix<T, N>, lambda: T) -> Result<usize> {
    let r = rank_sequence(a, lambda)?;
    Ok(N - r[1])
}

/// ‖P⁻¹AP − J‖ in the max-abs norm.
pub fn verify_jordan<T: Real, const N: usize>(a: &Matrix<T, N>, decomp: &JordanDecomposition<T, N>) -> Result<T> {
    let pinv = decomp.p.inverse()?;
    Ok((pinv.mul_mat(&a.mul_mat(&decomp.p)) - decomp.j).max_abs())
}

/// Convection Jacobian and its Jordan decomposition for ZB or TV.
pub fn convection_jordan<T: Real>(
    kind: SplittingKind,
    w: &Primitive<T>,
    gas: &GasModel<T>,
    params: FreeParams<T>,
) -> Result<(Matrix<T, 3>, JordanDecomposition<T, 3>)> {
    let a2 = sound_speed_sq(w, gas);
    let a = convection_jacobian_at(kind, w.u, a2, gas.gamma());
    let sys = convection_eigensystem_at(kind, w.u, a2, gas.gamma(), params);
    Ok((a, sys.jordan()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::{convection_jacobian, pressure_jacobian};
    use proptest::prelude::*;

    fn air() -> GasModel<f64> {
        GasModel::air()
    }

    fn w(rho: f64, u: f64, p: f64) -> Primitive<f64> {
        Primitive::new(rho, u, p).unwrap()
    }

    fn oracle_eigenvalues(a: &Matrix<f64, 3>) -> Vec<f64> {
        let m = nalgebra::Matrix3::from_fn(|i, j| a[(i, j)]);
        let mut ev: Vec<f64> = m.eigenvalues().expect("real spectrum").iter().copied().collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ev
    }

    #[test]
    fn tv_basis_has_unit_determinant() {
        let g = air();
        for st in [w(1.0, 0.3, 1.0), w(0.2, -4.0, 7.0)] {
            let sys = convection_eigensystem(SplittingKind::ToroVazquez, &st, &g, FreeParams::default());
            assert!((sys.basis().unwrap().determinant() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zb_chain_head_is_eigenvector() {
        let g = air();
        let st = w(0.7, 1.9, 2.2);
        let a = convection_jacobian(SplittingKind::ZhaBilgen, &st, &g);
        let sys = convection_eigensystem(SplittingKind::ZhaBilgen, &st, &g, FreeParams::default());
        let x = sys.vectors[0];
        assert!((a.mul_vec(&x) - x * st.u).max_abs() < 1e-13);
    }

    #[test]
    fn ls_convection_is_incomplete() {
        let g = air();
        let st = w(1.0, 0.5, 1.0);
        let sys = convection_eigensystem(SplittingKind::LiouSteffen, &st, &g, FreeParams::default());
        assert!(sys.is_defective() && !sys.is_complete());
        let mut m = Matrix::<f64, 3>::zeros();
        for (k, v) in sys.vectors.iter().enumerate() {
            for i in 0..3 {
                m[(i, k)] = v[i];
            }
        }
        assert_eq!(m.rank(1e-12), 2);
        let a = convection_jacobian(SplittingKind::LiouSteffen, &st, &g);
        assert!(sys.residual(&a) < 1e-13);
        assert!(sys.jordan().is_err());
    }

    #[test]
    fn pressure_eigenvalue_examples() {
        let g = air();
        // a = 1 with rho = 1.4, p = 1
        let st = w(1.4, 0.0, 1.0);
        let zb = pressure_eigensystem(SplittingKind::ZhaBilgen, &st, &g);
        let s = (2.0f64 / 7.0).sqrt();
        assert!((zb.eigenvalues[0] + s).abs() < 1e-15 && zb.eigenvalues[1] == 0.0 && (zb.eigenvalues[2] - s).abs() < 1e-15);
        let tv = pressure_eigensystem(SplittingKind::ToroVazquez, &st, &g);
        assert!((tv.eigenvalues[0] + 1.0).abs() < 1e-15 && (tv.eigenvalues[2] - 1.0).abs() < 1e-15);
        let oracle = oracle_eigenvalues(&pressure_jacobian(SplittingKind::ZhaBilgen, &st, &g));
        assert!((oracle[0] + s).abs() < 1e-12 && (oracle[2] - s).abs() < 1e-12);
    }

    #[test]
    fn block_signatures() {
        let g = air();
        let st = w(0.9, 1.3, 1.7);
        let tv = convection_jacobian(SplittingKind::ToroVazquez, &st, &g);
        assert_eq!(jordan_block_signature(&tv, st.u).unwrap(), vec![2]);
        let zb = convection_jacobian(SplittingKind::ZhaBilgen, &st, &g);
        assert_eq!(jordan_block_signature(&zb, st.u).unwrap(), vec![2, 1]);
        assert_eq!(jordan_block_signature(&Matrix::<f64, 3>::identity(), 1.0).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn geometric_multiplicities() {
        let g = air();
        let st = w(1.1, -0.8, 0.6);
        let gm = |k| geometric_multiplicity(&convection_jacobian(k, &st, &g), st.u).unwrap();
        assert_eq!(gm(SplittingKind::LiouSteffen), 1);
        assert_eq!(gm(SplittingKind::ToroVazquez), 1);
        assert_eq!(gm(SplittingKind::ZhaBilgen), 2);
    }

    #[test]
    fn near_coincident_eigenvalues_are_inconclusive() {
        // TV at tiny u: eigenvalues 0 and u nearly merge
        let g = air();
        let st = w(1.0, 1e-4, 1.0);
        let tv = convection_jacobian(SplittingKind::ToroVazquez, &st, &g);
        assert!(matches!(jordan_block_signature(&tv, st.u), Err(Error::RankInconclusive { .. })));
    }

    #[test]
    fn jordan_forms_and_permutations() {
        let g = air();
        let st = w(1.2, 0.6, 2.0);
        let u = st.u;
        let p = FreeParams { x1: 0.3, x3: -1.1 };

        let (a, d) = convection_jordan(SplittingKind::ZhaBilgen, &st, &g, p).unwrap();
        assert_eq!(d.j.0, [[u, 1.0, 0.0], [0.0, u, 0.0], [0.0, 0.0, u]]);
        assert!(verify_jordan(&a, &d).unwrap() <= 1e-10 * a.max_abs());
        assert!((d.p.determinant() - 1.0).abs() < 1e-13);
        let j2 = convection_eigensystem(SplittingKind::ZhaBilgen, &st, &g, p).reordered([2, 0, 1]).jordan().unwrap();
        assert_eq!(j2.j.0, [[u, 0.0, 0.0], [0.0, u, 1.0], [0.0, 0.0, u]]);
        assert_eq!(j2.block_sizes(), vec![1, 2]);
        assert!(verify_jordan(&a, &j2).unwrap() <= 1e-10 * a.max_abs());

        let (a, d) = convection_jordan(SplittingKind::ToroVazquez, &st, &g, p).unwrap();
        assert_eq!(d.j.0, [[0.0, 0.0, 0.0], [0.0, u, 1.0], [0.0, 0.0, u]]);
        assert!(verify_jordan(&a, &d).unwrap() <= 1e-10 * a.max_abs());
        let j2 = convection_eigensystem(SplittingKind::ToroVazquez, &st, &g, p).reordered([1, 2, 0]).jordan().unwrap();
        assert_eq!(j2.j.0, [[u, 1.0, 0.0], [0.0, u, 0.0], [0.0, 0.0, 0.0]]);
        assert!(verify_jordan(&a, &j2).unwrap() <= 1e-10 * a.max_abs());
    }

    proptest! {
        #[test]
        fn chain_relations_hold(
            rho in 0.05f64..20.0, u in -10.0f64..10.0, p in 0.05f64..50.0,
            x1 in -10.0f64..10.0, x3 in -10.0f64..10.0,
        ) {
            let g = air();
            let st = w(rho, u, p);
            for kind in [SplittingKind::ZhaBilgen, SplittingKind::ToroVazquez] {
                let a = convection_jacobian(kind, &st, &g);
                let sys = convection_eigensystem(kind, &st, &g, FreeParams { x1, x3 });
                prop_assert!(sys.residual(&a) <= 1e-12 * a.max_abs());
                let d = sys.jordan().unwrap();
                prop_assert!(d.p.determinant().abs() > 0.0);
            }
        }

        #[test]
        fn pressure_vectors_satisfy_eigen_relation(rho in 0.05f64..20.0, u in -10.0f64..10.0, p in 0.05f64..50.0) {
            let g = air();
            let st = w(rho, u, p);
            for kind in SplittingKind::ALL {
                let a = pressure_jacobian(kind, &st, &g);
                let sys = pressure_eigensystem(kind, &st, &g);
                prop_assert!(sys.residual(&a) <= 1e-12 * a.max_abs());
                prop_assert!(sys.basis().unwrap().determinant().abs() > 0.0);
            }
        }

        #[test]
        fn eigenvalues_agree_with_library_oracle(rho in 0.1f64..10.0, u in -3.0f64..3.0, p in 0.1f64..10.0) {
            let g = air();
            let st = w(rho, u, p);
            for kind in [SplittingKind::ZhaBilgen, SplittingKind::ToroVazquez] {
                let a = pressure_jacobian(kind, &st, &g);
                let mut ours = pressure_eigensystem(kind, &st, &g).eigenvalues.to_vec();
                ours.sort_by(|x, y| x.partial_cmp(y).unwrap());
                let theirs = oracle_eigenvalues(&a);
                for (x, y) in ours.iter().zip(&theirs) {
                    prop_assert!((x - y).abs() <= 1e-9 * a.max_abs());
                }
            }
        }

        #[test]
        fn zb_signature_at_random_states(rho in 0.1f64..10.0, u in -5.0f64..5.0, p in 0.1f64..10.0) {
            let g = air();
            let st = w(rho, u, p);
            let a = convection_jacobian(SplittingKind::ZhaBilgen, &st, &g);
            prop_assert_eq!(jordan_block_signature(&a, st.u).unwrap(), vec![2, 1]);
        }

        #[test]
        fn tv_signature_at_random_states(rho in 0.1f64..10.0, u in 0.2f64..5.0, sign in proptest::bool::ANY, p in 0.1f64..10.0) {
            let g = air();
            let st = w(rho, if sign { u } else { -u }, p);
            let a = convection_jacobian(SplittingKind::ToroVazquez, &st, &g);
            prop_assert_eq!(jordan_block_signature(&a, st.u).unwrap(), vec![2]);
        }
    }
}
