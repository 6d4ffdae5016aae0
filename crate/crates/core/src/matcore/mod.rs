//! Dense complex square matrices.
//!
//! Everything downstream (unitaries, almost-projections, determinant loops)
//! is carried by [`CMatrix`]. The kernel is self-contained: LU determinants,
//! a cyclic Jacobi Hermitian eigensolver, a commuting-pair refinement for
//! unitaries, and the functional calculus built on top of them.

mod eigen;
mod funcs;
mod json;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

pub use eigen::{herm_eig, unitary_eig, EigenSystem};
pub use funcs::{
    apply_unitary_function, exp_skew_hermitian, principal_log_unitary, spectral_projection,
    PrincipalLog, SpectralProjection,
};
pub use json::MatrixJson;

pub type C64 = Complex64;

/// Dense `dim × dim` complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("entries must be finite".into()));
        }
        Ok(CMatrix { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        CMatrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, C64::new(1.0, 0.0))
    }

    pub fn scalar(dim: usize, z: C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = z;
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = z;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Real and imaginary parts given separately, row-major.
    pub fn from_parts(dim: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::InvalidMatrix(format!(
                "re has {} entries but im has {}",
                re.len(),
                im.len()
            )));
        }
        let data = re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect();
        Self::new(dim, data)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.dim + j] = z;
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, z: C64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * z).collect(),
        }
    }

    pub fn scale_real(&self, x: f64) -> CMatrix {
        self.scale(C64::new(x, 0.0))
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    /// `self + z·1`.
    pub fn shift(&self, z: C64) -> CMatrix {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] += z;
        }
        m
    }

    /// Integer power; negative exponents use the adjoint (exact for unitaries).
    pub fn unitary_pow(&self, k: i64) -> CMatrix {
        let mut base = if k < 0 { self.adjoint() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = CMatrix::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &CMatrix) -> CMatrix {
        let n = self.dim + other.dim;
        let mut m = CMatrix::zeros(n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                m.set(self.dim + i, self.dim + j, other.get(i, j));
            }
        }
        m
    }

    /// Assemble `[[a, b], [c, d]]` from four equally sized blocks.
    pub fn block2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> Result<CMatrix> {
        let n = a.dim;
        for blk in [b, c, d] {
            if blk.dim != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: blk.dim,
                });
            }
        }
        let mut m = CMatrix::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, a.get(i, j));
                m.set(i, n + j, b.get(i, j));
                m.set(n + i, j, c.get(i, j));
                m.set(n + i, n + j, d.get(i, j));
            }
        }
        Ok(m)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |a_ij - b_ij|`, a cheap comparison used for exactness checks.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Operator norm of `h - h*`.
    pub fn hermiticity_defect(&self) -> f64 {
        // i(h - h*) is Hermitian; its norm is its spectral radius.
        let skew = self - &self.adjoint();
        hermitian_spectral_radius(&skew.scale(C64::new(0.0, 1.0)))
    }

    /// Operator norm of `m*m - 1`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = (&self.adjoint() * self).shift(C64::new(-1.0, 0.0));
        hermitian_spectral_radius(&g)
    }

    /// Operator norm of `self - 1`.
    pub fn distance_to_identity(&self) -> f64 {
        op_norm(&self.shift(C64::new(-1.0, 0.0)))
    }

    pub fn commutator_with(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let src = &rhs.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        CMatrix { dim: n, data: out }
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Determinant by LU factorisation with partial pivoting.
pub fn lu_det(m: &CMatrix) -> C64 {
    let n = m.dim;
    let mut a = m.data.clone();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
            .expect("non-empty pivot range");
        let p = a[pivot * n + col];
        if p.norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        det *= p;
        for r in col + 1..n {
            let factor = a[r * n + col] / p;
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in col + 1..n {
                let upper = a[col * n + j];
                a[r * n + j] -= factor * upper;
            }
        }
    }
    det
}

/// Largest singular value, from the Hermitian eigendecomposition of `m*m`.
pub fn op_norm(m: &CMatrix) -> f64 {
    let gram = &m.adjoint() * m;
    let (values, _) = eigen::jacobi_eigh(&gram, false);
    values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// `max |λ|` over the spectrum of a Hermitian matrix (no Hermiticity check).
pub fn hermitian_spectral_radius(h: &CMatrix) -> f64 {
    let (values, _) = eigen::jacobi_eigh(h, false);
    values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// A matrix known to be unitary within `utol`.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    m: CMatrix,
    utol: f64,
}

impl Unitary {
    /// Checks `|m*m - 1| ≤ tol` and records the witnessed defect.
    pub fn new(m: CMatrix, tol: f64) -> Result<Self> {
        let defect = m.unitarity_defect();
        if defect > tol {
            return Err(Error::NotUnitary { defect, tol });
        }
        Ok(Unitary { m, utol: defect })
    }

    pub fn with_default_tol(m: CMatrix) -> Result<Self> {
        Self::new(m, Tolerances::default().unitarity)
    }

    /// For matrices unitary by construction (permutations, diagonal phases,
    /// products of unitaries). `utol` is a bound, not a measurement.
    pub(crate) fn assume(m: CMatrix, utol: f64) -> Self {
        Unitary { m, utol }
    }

    pub fn identity(dim: usize) -> Self {
        Unitary {
            m: CMatrix::identity(dim),
            utol: 0.0,
        }
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    #[inline]
    pub fn utol(&self) -> f64 {
        self.utol
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.dim
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary {
            m: self.m.adjoint(),
            utol: self.utol,
        }
    }

    pub fn mul(&self, other: &Unitary) -> Unitary {
        let m = &self.m * &other.m;
        let utol = self.utol + other.utol + f64::EPSILON * self.dim() as f64;
        Unitary { m, utol }
    }

    pub fn pow(&self, k: i64) -> Unitary {
        let steps = k.unsigned_abs().max(1) as f64;
        Unitary {
            m: self.m.unitary_pow(k),
            utol: steps * (self.utol + f64::EPSILON * self.dim() as f64),
        }
    }

    /// Group commutator `u v u* v*`.
    pub fn commutator(&self, other: &Unitary) -> Unitary {
        self.mul(other).mul(&self.adjoint()).mul(&other.adjoint())
    }

    pub fn direct_sum(&self, other: &Unitary) -> Unitary {
        Unitary {
            m: self.m.direct_sum(&other.m),
            utol: self.utol.max(other.utol),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cyclic_shift(n: usize) -> CMatrix {
        CMatrix::from_fn(n, |i, j| {
            if i == (j + 1) % n {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn det_of_identity_and_diagonal() {
        assert!((lu_det(&CMatrix::identity(7)) - 1.0).norm() < 1e-14);
        let i = C64::new(0.0, 1.0);
        let d = lu_det(&CMatrix::from_diag(&[i, i]));
        assert!((d + 1.0).norm() < 1e-14);
    }

    #[test]
    fn det_of_cyclic_shift_is_cycle_sign() {
        for n in 1..=12 {
            let expected = if n % 2 == 1 { 1.0 } else { -1.0 };
            let d = lu_det(&cyclic_shift(n));
            assert!((d - expected).norm() < 1e-12, "n = {n}: {d}");
        }
        let d = lu_det(&cyclic_shift(256));
        assert!((d + 1.0).norm() < 1e-12);
    }

    #[test]
    fn det_of_singular_is_zero() {
        let m = CMatrix::from_fn(3, |i, j| C64::new((i + j) as f64, 0.0));
        assert!(lu_det(&m).norm() < 1e-12);
    }

    #[test]
    fn op_norm_examples() {
        assert!((op_norm(&CMatrix::identity(5)) - 1.0).abs() < 1e-12);
        let d = CMatrix::from_diag(&[C64::new(3.0, 0.0), C64::new(0.0, 4.0)]);
        assert!((op_norm(&d) - 4.0).abs() < 1e-12);
        // rank-one matrix x y*: norm |x||y|
        let m = CMatrix::from_fn(4, |i, j| C64::new((i + 1) as f64, 0.0) * C64::new(0.0, (j + 1) as f64));
        let expected = (30.0_f64).sqrt() * (30.0_f64).sqrt();
        assert!((op_norm(&m) - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn voiculescu_commutator_norm() {
        for n in [3usize, 8, 17] {
            let u = cyclic_shift(n);
            let lam = |k: usize| C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            let v = CMatrix::from_diag(&(1..=n).map(lam).collect::<Vec<_>>());
            let c = u.commutator_with(&v);
            let expected = 2.0 * (PI / n as f64).sin();
            assert!((op_norm(&c) - expected).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn new_rejects_bad_input() {
        assert!(CMatrix::new(0, vec![]).is_err());
        assert!(CMatrix::new(2, vec![C64::new(1.0, 0.0); 3]).is_err());
        assert!(CMatrix::new(1, vec![C64::new(f64::NAN, 0.0)]).is_err());
        assert!(CMatrix::from_parts(1, &[1.0], &[]).is_err());
    }

    #[test]
    fn unitary_checks() {
        assert!(Unitary::with_default_tol(cyclic_shift(5)).is_ok());
        let m = CMatrix::scalar(2, C64::new(1.1, 0.0));
        assert!(matches!(Unitary::with_default_tol(m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let u = Unitary::with_default_tol(cyclic_shift(5)).unwrap();
        let p = u.pow(3);
        let r = u.mul(&u).mul(&u);
        assert!(p.matrix().max_abs_diff(r.matrix()) < 1e-15);
        let q = u.pow(-2).mul(&u.pow(2));
        assert!(q.matrix().max_abs_diff(&CMatrix::identity(5)) < 1e-15);
    }
}
