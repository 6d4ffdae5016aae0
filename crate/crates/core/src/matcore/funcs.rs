//! Functional calculus: principal logarithm, exponential of skew-Hermitian
//! generators, spectral projections.

use super::eigen::{herm_eig, unitary_eig, EigenSystem};
use super::{CMatrix, Unitary, C64};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Principal logarithm of a unitary together with the spectral data it came from.
#[derive(Clone, Debug)]
pub struct PrincipalLog {
    /// Skew-Hermitian `L` with `exp(L) = w`.
    pub log: CMatrix,
    /// Principal arguments in `(-π, π)`, one per eigenvalue.
    pub angles: Vec<f64>,
    /// `min |λ + 1|` over the spectrum.
    pub min_distance_to_minus_one: f64,
    pub eigen: EigenSystem,
}

impl PrincipalLog {
    pub fn compute(w: &Unitary, margin: f64, tol: &Tolerances) -> Result<Self> {
        let eigen = unitary_eig(w, tol)?;
        let mut min_dist = f64::INFINITY;
        let mut worst = C64::new(1.0, 0.0);
        for &z in &eigen.values {
            let d = (z + 1.0).norm();
            if d < min_dist {
                min_dist = d;
                worst = z;
            }
        }
        if min_dist <= margin {
            return Err(Error::BranchCut {
                eigenvalue: format!("{:.6}{:+.6}i", worst.re, worst.im),
                distance: min_dist,
                margin,
            });
        }
        let angles: Vec<f64> = eigen.values.iter().map(|z| z.arg()).collect();
        let mut it = angles.iter();
        let log = eigen.map_values(|_| C64::new(0.0, *it.next().expect("one angle per value")));
        Ok(PrincipalLog {
            log,
            angles,
            min_distance_to_minus_one: min_dist,
            eigen,
        })
    }

    /// `exp(t·L)` computed in the eigenbasis of `w`.
    pub fn exp_scaled(&self, t: f64) -> CMatrix {
        let mut it = self.angles.iter();
        self.eigen
            .map_values(|_| C64::from_polar(1.0, t * it.next().expect("one angle per value")))
    }
}

/// Principal logarithm of `w`: skew-Hermitian with spectrum in `i·(-π, π)`.
/// Fails with `BranchCut` when an eigenvalue is within `margin` of -1.
pub fn principal_log_unitary(w: &Unitary, margin: f64, tol: &Tolerances) -> Result<CMatrix> {
    PrincipalLog::compute(w, margin, tol).map(|l| l.log)
}

/// `exp(L)` for skew-Hermitian `L`, via the eigendecomposition of `-iL`.
pub fn exp_skew_hermitian(l: &CMatrix, tol: &Tolerances) -> Result<Unitary> {
    let h = l.scale(C64::new(0.0, -1.0));
    let es = herm_eig(&h, tol)?;
    let m = es.map_values(|z| C64::from_polar(1.0, z.re));
    Ok(Unitary::assume(m, 1e-12 * l.dim() as f64))
}

/// `f(w)` for a unitary `w` by unitary functional calculus.
pub fn apply_unitary_function(
    w: &Unitary,
    f: impl FnMut(C64) -> C64,
    tol: &Tolerances,
) -> Result<CMatrix> {
    Ok(unitary_eig(w, tol)?.map_values(f))
}

#[derive(Clone, Debug)]
pub struct SpectralProjection {
    pub projection: CMatrix,
    pub rank: usize,
    /// `min |λ - threshold|` over the spectrum.
    pub gap_width: f64,
    pub eigenvalues: Vec<f64>,
}

/// `χ_(threshold, ∞)(e)` for self-adjoint `e`, refusing when an eigenvalue
/// falls inside `(threshold - gap, threshold + gap)`.
pub fn spectral_projection(
    e: &CMatrix,
    threshold: f64,
    gap: f64,
    tol: &Tolerances,
) -> Result<SpectralProjection> {
    let es = herm_eig(e, tol)?;
    let eigenvalues = es.real_values();
    let mut gap_width = f64::INFINITY;
    for &x in &eigenvalues {
        let d = (x - threshold).abs();
        gap_width = gap_width.min(d);
        if d < gap {
            return Err(Error::NoSpectralGap {
                eigenvalue: x,
                lo: threshold - gap,
                hi: threshold + gap,
            });
        }
    }
    let projection = es.map_values(|z| {
        if z.re > threshold {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let rank = eigenvalues.iter().filter(|&&x| x > threshold).count();
    Ok(SpectralProjection {
        projection,
        rank,
        gap_width,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::op_norm;
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn log_of_identity_is_zero() {
        let l = principal_log_unitary(&Unitary::identity(4), 1e-6, &tol()).unwrap();
        assert!(l.max_abs_diff(&CMatrix::zeros(4)) < 1e-15);
    }

    #[test]
    fn log_of_scalar_root_of_unity() {
        for n in [3usize, 4, 10, 64] {
            let z = C64::from_polar(1.0, -2.0 * PI / n as f64);
            let w = Unitary::with_default_tol(CMatrix::scalar(n, z)).unwrap();
            let l = principal_log_unitary(&w, 1e-6, &tol()).unwrap();
            let expected = CMatrix::scalar(n, C64::new(0.0, -2.0 * PI / n as f64));
            assert!(l.max_abs_diff(&expected) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn branch_cut_detected() {
        let w = Unitary::with_default_tol(CMatrix::from_diag(&[C64::new(-1.0, 0.0), C64::new(1.0, 0.0)])).unwrap();
        assert!(matches!(
            principal_log_unitary(&w, 1e-6, &tol()),
            Err(Error::BranchCut { .. })
        ));
        let near = C64::from_polar(1.0, PI - 1e-3);
        let w = Unitary::with_default_tol(CMatrix::from_diag(&[near])).unwrap();
        assert!(principal_log_unitary(&w, 1e-6, &tol()).is_ok());
        assert!(principal_log_unitary(&w, 1e-2, &tol()).is_err());
    }

    #[test]
    fn exp_inverts_log_on_diagonal() {
        let w = Unitary::with_default_tol(CMatrix::from_diag(&[
            C64::from_polar(1.0, 0.4),
            C64::from_polar(1.0, -3.0),
            C64::from_polar(1.0, 2.9),
        ]))
        .unwrap();
        let l = principal_log_unitary(&w, 1e-6, &tol()).unwrap();
        let back = exp_skew_hermitian(&l, &tol()).unwrap();
        assert!(op_norm(&(back.matrix() - w.matrix())) < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let e = CMatrix::from_diag(&[C64::new(0.9, 0.0), C64::new(0.1, 0.0)]);
        let p = spectral_projection(&e, 0.5, 0.1, &tol()).unwrap();
        assert_eq!(p.rank, 1);
        let expected = CMatrix::from_diag(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(p.projection.max_abs_diff(&expected) < 1e-15);

        let e = CMatrix::from_diag(&[C64::new(0.55, 0.0), C64::new(0.45, 0.0)]);
        assert!(matches!(
            spectral_projection(&e, 0.5, 0.1, &tol()),
            Err(Error::NoSpectralGap { .. })
        ));
    }
}
