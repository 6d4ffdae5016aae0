#![allow(dead_code)]

pub mod props;

use std::f64::consts::PI;

use qrep::families::{random_unitary, rng};
use qrep::matcore::lu_det;
use qrep::{CMatrix, Unitary, C64};
use rand::RngExt;
use rand_xoshiro::SplitMix64;

/// `Q·diag(e^{iθ_j})·Q*` with `Q` Haar-random.
pub fn with_angles(r: &mut SplitMix64, angles: &[f64]) -> Unitary {
    let q = random_unitary(r, angles.len());
    let d = CMatrix::from_diag(&angles.iter().map(|&t| C64::from_polar(1.0, t)).collect::<Vec<_>>());
    let m = &(q.matrix() * &d) * &q.matrix().adjoint();
    Unitary::with_default_tol(m).unwrap()
}

/// Largest |θ| with `|e^{iθ} + 1| ≥ margin`.
pub fn max_angle(margin: f64) -> f64 {
    PI - 2.0 * (margin / 2.0).asin()
}

/// Unitary with determinant 1 and spectrum at least `margin` from -1, built
/// from a chosen spectrum whose angles sum to `2πk`. Returns `(w, k)`.
pub fn su_with_chosen_spectrum(r: &mut SplitMix64, n: usize, margin: f64) -> (Unitary, i64) {
    let bound = max_angle(margin);
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| r.random_range(-bound..bound)).collect();
        let s: f64 = angles.iter().sum();
        let k = (s / (2.0 * PI)).round();
        let shift = (2.0 * PI * k - s) / n as f64;
        angles.iter_mut().for_each(|a| *a += shift);
        if angles.iter().all(|a| a.abs() < bound) {
            return (with_angles(r, &angles), k as i64);
        }
    }
}

/// Haar unitary rescaled by a random n-th root of `det⁻¹`, kept only if its
/// spectrum stays `margin` away from -1.
pub fn su_by_rejection(r: &mut SplitMix64, n: usize, margin: f64) -> Unitary {
    loop {
        let u = random_unitary(r, n);
        let d = lu_det(u.matrix());
        let m: f64 = r.random_range(0..n) as f64;
        let phase = C64::from_polar(1.0, -(d.arg() + 2.0 * PI * m) / n as f64);
        let w = Unitary::with_default_tol(u.matrix().scale(phase)).unwrap();
        let es = qrep::matcore::unitary_eig(&w, &qrep::Tolerances::default()).unwrap();
        if es.values.iter().all(|z| (z + 1.0).norm() >= margin) {
            return w;
        }
    }
}

pub fn seeded(seed: u64) -> SplitMix64 {
    rng(seed)
}
