use std::collections::BTreeMap;

use serde::Serialize;

use super::{kappa, InvariantReport, TraceMode};
use crate::error::{Error, Result};
use crate::matcore::{op_norm, PrincipalLog, Unitary};
use crate::tolerances::Tolerances;

#[derive(Clone, Copy, Debug)]
pub struct KazhdanOptions {
    /// Fail with `HypothesisViolated` when a bound does not hold. When false the
    /// experiment runs anyway and reports the failed bounds.
    pub enforce_hypotheses: bool,
}

impl Default for KazhdanOptions {
    fn default() -> Self {
        KazhdanOptions {
            enforce_hypotheses: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KazhdanReport {
    pub genus: usize,
    pub bound: f64,
    pub hypotheses: BTreeMap<String, HypothesisCheck>,
    pub hypotheses_hold: bool,
    pub kappa_before: InvariantReport,
    pub kappa_after: InvariantReport,
    pub path_samples: usize,
    /// `max_t |w(t) - 1|` along the sampled homotopy.
    pub max_path_distance: f64,
    pub path_within_unit_ball: bool,
    pub kappa_constant_along_path: bool,
    pub kappa_equal: bool,
}

fn commutator_product(us: &[Unitary], vs: &[Unitary]) -> Unitary {
    let n = us[0].dim();
    us.iter()
        .zip(vs)
        .fold(Unitary::identity(n), |acc, (u, v)| acc.mul(&u.commutator(v)))
}

pub fn kazhdan_stability(
    us: &[Unitary],
    vs: &[Unitary],
    us2: &[Unitary],
    vs2: &[Unitary],
    tol: &Tolerances,
) -> Result<KazhdanReport> {
    kazhdan_stability_with(us, vs, us2, vs2, KazhdanOptions::default(), tol)
}

/// Compare `κ(∏[u_i, v_i])` with `κ(∏[u'_i, v'_i])` and sample the homotopy
/// `u_i(t) = u_i·exp(t·log(u_i⁻¹u'_i))` (likewise for `v_i`) between them.
pub fn kazhdan_stability_with(
    us: &[Unitary],
    vs: &[Unitary],
    us2: &[Unitary],
    vs2: &[Unitary],
    opts: KazhdanOptions,
    tol: &Tolerances,
) -> Result<KazhdanReport> {
    let g = us.len();
    if g == 0 || vs.len() != g || us2.len() != g || vs2.len() != g {
        return Err(Error::InvalidArgument(
            "need the same positive number of u, v, u', v' unitaries".into(),
        ));
    }
    let n = us[0].dim();
    for x in us.iter().chain(vs).chain(us2).chain(vs2) {
        if x.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.dim(),
            });
        }
    }
    let bound = 1.0 / (5.0 * g as f64);
    let w0 = commutator_product(us, vs);
    let w1 = commutator_product(us2, vs2);

    let mut hypotheses = BTreeMap::new();
    let mut check = |name: String, value: f64| {
        hypotheses.insert(
            name,
            HypothesisCheck {
                value,
                bound,
                holds: value < bound,
            },
        );
    };
    check("commutator_product".into(), w0.matrix().distance_to_identity());
    for i in 0..g {
        check(format!("u{}", i + 1), op_norm(&(us[i].matrix() - us2[i].matrix())));
        check(format!("v{}", i + 1), op_norm(&(vs[i].matrix() - vs2[i].matrix())));
    }
    let violated = hypotheses.iter().find(|(_, c)| !c.holds);
    if let (true, Some((which, c))) = (opts.enforce_hypotheses, violated) {
        return Err(Error::HypothesisViolated {
            which: which.clone(),
            value: c.value,
            bound: c.bound,
        });
    }
    let hypotheses_hold = violated.is_none();

    let kappa_before = kappa(&w0, TraceMode::Standard, tol)?;
    let kappa_after = kappa(&w1, TraceMode::Standard, tol)?;

    let logs_u = us
        .iter()
        .zip(us2)
        .map(|(a, b)| PrincipalLog::compute(&a.adjoint().mul(b), tol.branch_margin, tol))
        .collect::<Result<Vec<_>>>()?;
    let logs_v = vs
        .iter()
        .zip(vs2)
        .map(|(a, b)| PrincipalLog::compute(&a.adjoint().mul(b), tol.branch_margin, tol))
        .collect::<Result<Vec<_>>>()?;

    let samples = tol.homotopy_samples.max(2);
    let mut max_path_distance = 0.0_f64;
    let mut kappa_constant = true;
    for k in 0..samples {
        let t = k as f64 / (samples - 1) as f64;
        let ut: Vec<Unitary> = us
            .iter()
            .zip(&logs_u)
            .map(|(u, l)| u.mul(&Unitary::assume(l.exp_scaled(t), 1e-12)))
            .collect();
        let vt: Vec<Unitary> = vs
            .iter()
            .zip(&logs_v)
            .map(|(v, l)| v.mul(&Unitary::assume(l.exp_scaled(t), 1e-12)))
            .collect();
        let wt = commutator_product(&ut, &vt);
        max_path_distance = max_path_distance.max(wt.matrix().distance_to_identity());
        match kappa(&wt, TraceMode::Standard, tol) {
            Ok(r) if r.rounded == kappa_before.rounded => {}
            _ => kappa_constant = false,
        }
    }

    let kappa_equal = kappa_before.is_integer
        && kappa_after.is_integer
        && kappa_before.rounded == kappa_after.rounded;
    Ok(KazhdanReport {
        genus: g,
        bound,
        hypotheses,
        hypotheses_hold,
        kappa_before,
        kappa_after,
        path_samples: samples,
        max_path_distance,
        path_within_unit_ball: max_path_distance < 1.0,
        kappa_constant_along_path: kappa_constant,
        kappa_equal,
    })
}
