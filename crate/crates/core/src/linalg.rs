//! Fixed-size dense vectors and matrices for the 3×3 and 4×4 systems of the
//! Euler equations.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector<T, const N: usize>(pub [T; N]);

impl<T: Real, const N: usize> Vector<T, N> {
    pub fn zeros() -> Self {
        Self([T::zero(); N])
    }

    pub fn new(data: [T; N]) -> Self {
        Self(data)
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0.iter().zip(other.0.iter()).map(|(&a, &b)| a * b).sum()
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn map(self, f: impl Fn(T) -> T) -> Self {
        Self(self.0.map(f))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn as_array(&self) -> &[T; N] {
        &self.0
    }
}

impl<T: Real, const N: usize> Default for Vector<T, N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<T, const N: usize> Index<usize> for Vector<T, N> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T, const N: usize> IndexMut<usize> for Vector<T, N> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Real, const N: usize> Add for Vector<T, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            self.0[i] = self.0[i] + rhs.0[i];
        }
        self
    }
}

impl<T: Real, const N: usize> AddAssign for Vector<T, N> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real, const N: usize> Sub for Vector<T, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            self.0[i] = self.0[i] - rhs.0[i];
        }
        self
    }
}

impl<T: Real, const N: usize> SubAssign for Vector<T, N> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Real, const N: usize> Neg for Vector<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x)
    }
}

impl<T: Real, const N: usize> Mul<T> for Vector<T, N> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.map(|x| x * s)
    }
}

/// Row-major square matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<T, const N: usize>(pub [[T; N]; N]);

impl<T: Real, const N: usize> Matrix<T, N> {
    pub fn zeros() -> Self {
        Self([[T::zero(); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: [[T; N]; N]) -> Self {
        Self(rows)
    }

    pub fn from_columns(cols: [Vector<T, N>; N]) -> Self {
        let mut m = Self::zeros();
        for (j, c) in cols.iter().enumerate() {
            for i in 0..N {
                m.0[i][j] = c.0[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vector<T, N> {
        Vector(std::array::from_fn(|i| self.0[i][j]))
    }

    pub fn transpose(&self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    pub fn mul_vec(&self, v: &Vector<T, N>) -> Vector<T, N> {
        Vector(std::array::from_fn(|i| (0..N).map(|k| self.0[i][k] * v.0[k]).sum()))
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| (0..N).map(|k| self.0[i][k] * other.0[k][j]).sum())))
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|row| row.map(|x| x * s)))
    }

    /// `self - lambda * I`
    pub fn shift(&self, lambda: T) -> Self {
        let mut m = *self;
        for i in 0..N {
            m.0[i][i] = m.0[i][i] - lambda;
        }
        m
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.mul_mat(self))
    }

    pub fn trace(&self) -> T {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.0.iter().flat_map(|r| r.iter()).fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let scale = self.max_abs();
        let mut a = self.0;
        let mut inv = Self::identity().0;
        for col in 0..N {
            let pivot_row = (col..N).max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap()).unwrap();
            let pivot = a[pivot_row][col];
            if !(pivot.abs() > T::epsilon() * scale * T::c(N as f64)) {
                return Err(Error::SingularMatrix { pivot: pivot.f64() });
            }
            a.swap(col, pivot_row);
            inv.swap(col, pivot_row);
            let pinv = pivot.recip();
            for j in 0..N {
                a[col][j] = a[col][j] * pinv;
                inv[col][j] = inv[col][j] * pinv;
            }
            for r in 0..N {
                if r != col {
                    let f = a[r][col];
                    if f != T::zero() {
                        for j in 0..N {
                            a[r][j] = a[r][j] - f * a[col][j];
                            inv[r][j] = inv[r][j] - f * inv[col][j];
                        }
                    }
                }
            }
        }
        Ok(Self(inv))
    }

    pub fn solve(&self, rhs: &Vector<T, N>) -> Result<Vector<T, N>> {
        Ok(self.inverse()?.mul_vec(rhs))
    }

    /// Determinant via elimination with partial pivoting.
    pub fn determinant(&self) -> T {
        let mut a = self.0;
        let mut det = T::one();
        for col in 0..N {
            let pivot_row = (col..N).max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap()).unwrap();
            if a[pivot_row][col] == T::zero() {
                return T::zero();
            }
            if pivot_row != col {
                a.swap(col, pivot_row);
                det = -det;
            }
            det = det * a[col][col];
            for r in col + 1..N {
                let f = a[r][col] / a[col][col];
                let pivot = a[col];
                for (x, &p) in a[r][col..].iter_mut().zip(&pivot[col..]) {
                    *x = *x - f * p;
                }
            }
        }
        det
    }

    /// Singular values in descending order (one-sided Jacobi), accurate to
    /// high relative precision even for the small values a rank test needs.
    pub fn singular_values(&self) -> [T; N] {
        let mut u = self.0;
        let eps = T::epsilon();
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..N {
                for q in p + 1..N {
                    let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                    for row in u.iter() {
                        alpha = alpha + row[p] * row[p];
                        beta = beta + row[q] * row[q];
                        gamma = gamma + row[p] * row[q];
                    }
                    if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (T::two() * gamma);
                    let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                    let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = (T::one() + t * t).sqrt().recip();
                    let s = c * t;
                    for row in u.iter_mut() {
                        let up = row[p];
                        row[p] = c * up - s * row[q];
                        row[q] = s * up + c * row[q];
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: [T; N] = std::array::from_fn(|j| u.iter().map(|row| row[j] * row[j]).sum::<T>().sqrt());
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    /// Numerical rank: singular values at or below `threshold` count as zero.
    pub fn rank(&self, threshold: T) -> usize {
        self.singular_values().iter().filter(|&&s| s > threshold).count()
    }
}

impl<T, const N: usize> Index<(usize, usize)> for Matrix<T, N> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.0[i][j]
    }
}

impl<T, const N: usize> IndexMut<(usize, usize)> for Matrix<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.0[i][j]
    }
}

impl<T: Real, const N: usize> Sub for Matrix<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])))
    }
}

impl<T: Real, const N: usize> Add for Matrix<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])))
    }
}
