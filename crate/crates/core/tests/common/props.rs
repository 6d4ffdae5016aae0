//! Property bodies shared by the proptest suite and the acceptance runner.

use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use qrep::invariants::{kappa, TraceMode};
use qrep::matcore::{herm_eig, lu_det, spectral_projection, unitary_eig, PrincipalLog};
use qrep::words::{parse_word, reduce, FreeWord, Letter};
use qrep::{CMatrix, Tolerances, Unitary, C64};
use rand::RngExt;

use super::{max_angle, seeded, su_with_chosen_spectrum, with_angles};

type Outcome = Result<(), TestCaseError>;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Unitary of size `n` with angles in `(-bound, bound)`, not necessarily det 1.
pub fn random_log_safe(seed: u64, n: usize) -> Unitary {
    let mut r = seeded(seed);
    let bound = max_angle(0.05);
    let angles: Vec<f64> = (0..n).map(|_| r.random_range(-bound..bound)).collect();
    with_angles(&mut r, &angles)
}

fn general_matrix(seed: u64, n: usize) -> CMatrix {
    let mut r = seeded(seed);
    CMatrix::from_fn(n, |_, _| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

pub fn word_strategy() -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((prop::sample::select(vec!["a", "b", "s1", "t12", "x_y"]), any::<bool>()), 0..24)
        .prop_map(|v| FreeWord::from_letters(v.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect()))
}

pub fn additivity(s1: u64, s2: u64, n1: usize, n2: usize) -> Outcome {
    let (w1, w2) = (random_log_safe(s1, n1), random_log_safe(s2, n2));
    let k1 = kappa(&w1, TraceMode::Standard, &tol()).unwrap().value;
    let k2 = kappa(&w2, TraceMode::Standard, &tol()).unwrap().value;
    let k = kappa(&w1.direct_sum(&w2), TraceMode::Standard, &tol()).unwrap().value;
    prop_assert!((k - k1 - k2).abs() <= 1e-9, "{k} vs {k1} + {k2}");
    Ok(())
}

pub fn conjugation(s: u64, n: usize) -> Outcome {
    let w = random_log_safe(s, n);
    let q = qrep::families::random_unitary(&mut seeded(s ^ 0x9e37), n);
    let c = q.mul(&w).mul(&q.adjoint());
    let a = kappa(&w, TraceMode::Standard, &tol()).unwrap().value;
    let b = kappa(&c, TraceMode::Standard, &tol()).unwrap().value;
    prop_assert!((a - b).abs() <= 1e-9);
    Ok(())
}

pub fn inversion(s: u64, n: usize) -> Outcome {
    let w = random_log_safe(s, n);
    let a = kappa(&w, TraceMode::Standard, &tol()).unwrap().value;
    let b = kappa(&w.adjoint(), TraceMode::Standard, &tol()).unwrap().value;
    prop_assert!((a + b).abs() <= 1e-9);
    Ok(())
}

pub fn integrality(s: u64, n: usize) -> Outcome {
    let (w, k) = su_with_chosen_spectrum(&mut seeded(s), n, 0.1);
    let r = kappa(&w, TraceMode::Standard, &tol()).unwrap();
    prop_assert!(r.is_integer);
    prop_assert_eq!(r.rounded, Some(k));
    prop_assert!((r.value - k as f64).abs() <= 1e-6);
    Ok(())
}

pub fn exp_log(s: u64, n: usize) -> Outcome {
    let w = random_log_safe(s, n);
    let log = PrincipalLog::compute(&w, 1e-6, &tol()).unwrap();
    prop_assert!((&log.log + &log.log.adjoint()).frobenius_norm() < 1e-10);
    prop_assert!(log.exp_scaled(1.0).max_abs_diff(w.matrix()) <= 1e-8);
    prop_assert!(log.angles.iter().all(|a| a.abs() < PI));
    Ok(())
}

pub fn projection(s: u64, n: usize) -> Outcome {
    let mut r = seeded(s);
    let spectrum: Vec<f64> = (0..n)
        .map(|_| if r.random::<bool>() { r.random_range(-0.5..0.35) } else { r.random_range(0.65..1.5) })
        .collect();
    let q = qrep::families::random_unitary(&mut r, n);
    let d = CMatrix::from_diag(&spectrum.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
    let h = &(q.matrix() * &d) * &q.matrix().adjoint();
    let h = (&h + &h.adjoint()).scale_real(0.5);
    let p = spectral_projection(&h, 0.5, 0.1, &tol()).unwrap();
    prop_assert!((&(&p.projection * &p.projection) - &p.projection).frobenius_norm() <= 1e-8);
    prop_assert!(p.projection.hermiticity_defect() <= 1e-8);
    prop_assert_eq!(p.rank, spectrum.iter().filter(|&&x| x > 0.5).count());
    Ok(())
}

pub fn parser_round_trip(w: FreeWord) -> Outcome {
    let text = w.to_string();
    prop_assert_eq!(parse_word(&text).unwrap(), w);
    Ok(())
}

pub fn reduction(w: FreeWord, v: FreeWord) -> Outcome {
    let r = reduce(&w);
    prop_assert!(r.is_reduced());
    prop_assert_eq!(reduce(&r), r.clone());
    prop_assert!(reduce(&(&w * &w.inverse())).is_empty());
    prop_assert_eq!(reduce(&(&w * &v)), reduce(&(&r * &reduce(&v))));
    for g in ["a", "b", "s1"] {
        prop_assert_eq!(r.exponent_sum(g), w.exponent_sum(g));
    }
    Ok(())
}

pub fn eigen_conjugation(s: u64, n: usize) -> Outcome {
    let w = random_log_safe(s, n);
    let q = qrep::families::random_unitary(&mut seeded(!s), n);
    let c = q.mul(&w).mul(&q.adjoint());
    let mut a: Vec<f64> = unitary_eig(&w, &tol()).unwrap().values.iter().map(|z| z.arg()).collect();
    let mut b: Vec<f64> = unitary_eig(&c, &tol()).unwrap().values.iter().map(|z| z.arg()).collect();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    for (x, y) in a.iter().zip(&b) {
        prop_assert!((x - y).abs() <= 1e-9);
    }
    let h = (w.matrix() + &w.matrix().adjoint()).scale_real(0.5);
    let es = herm_eig(&h, &tol()).unwrap();
    prop_assert!(es.reconstruct().max_abs_diff(&h) <= 1e-10);
    Ok(())
}

pub fn det_multiplicative(s1: u64, s2: u64, n: usize) -> Outcome {
    let (m1, m2) = (general_matrix(s1, n), general_matrix(s2, n));
    let lhs = lu_det(&(&m1 * &m2));
    let rhs = lu_det(&m1) * lu_det(&m2);
    prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    Ok(())
}
