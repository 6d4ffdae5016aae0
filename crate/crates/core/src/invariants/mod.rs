//! Scalar invariants of a unitary `w` close to the identity.
//!
//! * [`kappa`] — `(1/2πi)·Tr(log w)` (or the normalised trace `Tr/n`),
//!   computed from the spectrum of `w`.
//! * [`winding_number_det_segment`] — winding number of
//!   `t ↦ det((1-t)·1 + t·w)`, computed from determinants only.
//!
//! The two routes share nothing beyond the matrix type, so their agreement
//! on `SU(n)` is a genuine cross-check.

mod kazhdan;
mod report;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{lu_det, op_norm, CMatrix, PrincipalLog, Unitary, C64};
use crate::tolerances::Tolerances;

pub use kazhdan::{kazhdan_stability, kazhdan_stability_with, KazhdanOptions, KazhdanReport};
pub use report::InvariantReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceMode {
    /// `Tr`, with `Tr(1_n) = n`.
    #[default]
    Standard,
    /// `τ = Tr / n`.
    Normalized,
}

impl std::str::FromStr for TraceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(TraceMode::Standard),
            "normalized" => Ok(TraceMode::Normalized),
            other => Err(Error::InvalidArgument(format!("unknown trace mode `{other}`"))),
        }
    }
}

/// `κ(w) = (1/2πi)·trace(log w)` with the principal logarithm.
pub fn kappa(w: &Unitary, mode: TraceMode, tol: &Tolerances) -> Result<InvariantReport> {
    let log = PrincipalLog::compute(w, tol.branch_margin, tol)?;
    let n = w.dim() as f64;
    let tr = log.log.trace();
    let standard = tr.im / (2.0 * PI);
    let det_defect = (lu_det(w.matrix()) - 1.0).norm();
    let dist = w.matrix().distance_to_identity();

    let (name, value) = match mode {
        TraceMode::Standard => ("kappa", standard),
        TraceMode::Normalized => ("kappa_tau", standard / n),
    };
    let mut report = InvariantReport::new(name, value, tol);
    if mode == TraceMode::Standard {
        let rounded = value.round();
        report.rounded = Some(rounded as i64);
        report.is_integer = det_defect <= tol.det_integral && (value - rounded).abs() <= tol.integer;
    }
    report
        .defect("norm_w_minus_1", dist)
        .defect("within_unit_ball", f64::from(dist < 1.0))
        .defect("within_radius_2", f64::from(dist < 2.0))
        .defect("min_dist_to_minus_1", log.min_distance_to_minus_one)
        .defect("det_defect", det_defect)
        .defect("trace_log_real_part", tr.re)
        .defect("dim", n);
    Ok(report)
}

/// Winding number of the loop `t ↦ det((1-t)·1 + t·w)`, `t ∈ [0, 1]`.
///
/// The argument is continued along an adaptively refined partition; the
/// spectrum of `w` is never computed.
pub fn winding_number_det_segment(w: &Unitary, tol: &Tolerances) -> Result<InvariantReport> {
    let m = w.matrix();
    let det_defect = (lu_det(m) - 1.0).norm();
    if det_defect > tol.loop_closure {
        return Err(Error::NotALoop {
            defect: det_defect,
            tol: tol.loop_closure,
        });
    }
    let pencil = |t: f64| -> Result<C64> {
        let p = m.scale_real(t).shift(C64::new(1.0 - t, 0.0));
        let d = lu_det(&p);
        if d.norm() < tol.path_singular {
            return Err(Error::PathSingular { t, modulus: d.norm() });
        }
        Ok(d)
    };

    let samples = tol.winding_initial_samples.max(1);
    let mut tracker = ArgTracker {
        running_max: 0.0,
        min_modulus: f64::INFINITY,
        evaluations: 0,
        max_depth: tol.winding_max_depth,
        deepest: 0,
    };
    let mut total = 0.0;
    let mut t0 = 0.0;
    let mut d0 = pencil(0.0)?;
    tracker.observe(d0);
    for k in 1..=samples {
        let t1 = k as f64 / samples as f64;
        let d1 = pencil(t1)?;
        tracker.observe(d1);
        total += tracker.increment(&pencil, t0, d0, t1, d1, 0)?;
        t0 = t1;
        d0 = d1;
    }

    let value = total / (2.0 * PI);
    let rounded = value.round();
    let mut report = InvariantReport::new("winding_number", value, tol);
    report.rounded = Some(rounded as i64);
    report.is_integer = (value - rounded).abs() <= tol.integer;
    report
        .defect("det_defect", det_defect)
        .defect("min_abs_det", tracker.min_modulus)
        .defect("max_abs_det", tracker.running_max)
        .defect("det_evaluations", tracker.evaluations as f64)
        .defect("refinement_depth", tracker.deepest as f64)
        .defect("dim", w.dim() as f64);
    Ok(report)
}

struct ArgTracker {
    running_max: f64,
    min_modulus: f64,
    evaluations: usize,
    max_depth: usize,
    deepest: usize,
}

impl ArgTracker {
    fn observe(&mut self, d: C64) {
        self.evaluations += 1;
        self.running_max = self.running_max.max(d.norm());
        self.min_modulus = self.min_modulus.min(d.norm());
    }

    /// Argument increment from `d0` to `d1`, bisecting while it is not
    /// unambiguous: a step above π/2, or a step above π/8 where `|det|` has
    /// dipped below a tenth of the running maximum.
    fn increment(
        &mut self,
        pencil: &dyn Fn(f64) -> Result<C64>,
        t0: f64,
        d0: C64,
        t1: f64,
        d1: C64,
        depth: usize,
    ) -> Result<f64> {
        let step = (d1 / d0).arg();
        let low = d0.norm().min(d1.norm()) < 0.1 * self.running_max;
        if step.abs() <= PI / 2.0 && !(low && step.abs() > PI / 8.0) {
            return Ok(step);
        }
        if depth >= self.max_depth {
            return Err(Error::PathSingular {
                t: 0.5 * (t0 + t1),
                modulus: d0.norm().min(d1.norm()),
            });
        }
        self.deepest = self.deepest.max(depth + 1);
        let tm = 0.5 * (t0 + t1);
        let dm = pencil(tm)?;
        self.observe(dm);
        Ok(self.increment(pencil, t0, d0, tm, dm, depth + 1)?
            + self.increment(pencil, tm, dm, t1, d1, depth + 1)?)
    }
}

/// Samples `(t, |(1-t)·1 + t·w - exp(t·log w)|)` on a uniform grid of `samples` points.
pub fn exel_gap_profile(w: &Unitary, samples: usize, tol: &Tolerances) -> Result<Vec<(f64, f64)>> {
    let log = PrincipalLog::compute(w, tol.branch_margin, tol)?;
    let samples = samples.max(2);
    Ok((0..samples)
        .map(|k| {
            let t = k as f64 / (samples - 1) as f64;
            (t, exel_gap_at(w.matrix(), &log, t))
        })
        .collect())
}

fn exel_gap_at(m: &CMatrix, log: &PrincipalLog, t: f64) -> f64 {
    let segment = m.scale_real(t).shift(C64::new(1.0 - t, 0.0));
    op_norm(&(&segment - &log.exp_scaled(t)))
}

/// `max_t |(1-t)·1 + t·w - exp(2πi·t·h)|` with `h = (1/2πi)·log w`.
///
/// Sampled on a uniform grid, then refined by golden-section search around
/// the best grid point. Strictly below 1 whenever the logarithm exists.
pub fn exel_homotopy_gap(w: &Unitary, tol: &Tolerances) -> Result<f64> {
    let log = PrincipalLog::compute(w, tol.branch_margin, tol)?;
    let gap = |t: f64| exel_gap_at(w.matrix(), &log, t);
    let samples = tol.exel_samples.max(3);
    let h = 1.0 / (samples - 1) as f64;
    let (mut best_t, mut best) = (0.0, 0.0_f64);
    for k in 0..samples {
        let t = k as f64 * h;
        let g = gap(t);
        if g > best {
            best = g;
            best_t = t;
        }
    }
    let (mut lo, mut hi) = ((best_t - h).max(0.0), (best_t + h).min(1.0));
    let ratio = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (gap(x1), gap(x2));
    for _ in 0..40 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = gap(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = gap(x2);
        }
    }
    Ok(best.max(f1).max(f2))
}
