//! Reproducible experiment cases behind the `verify` and `stability` commands.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bott::{k_invariant, verify_index_formula, IndexCase, IndexReport};
use crate::error::{Error, Result};
use crate::families::{perturb, pullback, voiculescu_quasirep, PerturbationSpec};
use crate::invariants::{
    kappa, kazhdan_stability_with, winding_number_det_segment, InvariantReport, KazhdanOptions, KazhdanReport,
    TraceMode,
};
use crate::matcore::Unitary;
use crate::tolerances::Tolerances;
use crate::words::{mult_defect, parse_word, relator_defect, CommutatorDatum, FreeWord, Presentation, QuasiRep};

/// Index formula on the clock/shift pair of size `n` with the fundamental ℤ² class.
pub fn exel_loring_case(n: usize, tol: &Tolerances) -> Result<IndexReport> {
    let qr = voiculescu_quasirep(n)?;
    let datum = CommutatorDatum::fundamental(Presentation::z2())?;
    verify_index_formula(&IndexCase::Z2Bott, &qr, &datum, tol)
}

/// `s1 ↦ a, t1 ↦ b` and every further generator to the identity.
pub fn padded_surface_map(genus: usize) -> BTreeMap<String, FreeWord> {
    let mut map = BTreeMap::new();
    for i in 1..=genus {
        let (s, t) = if i == 1 {
            (FreeWord::generator("a"), FreeWord::generator("b"))
        } else {
            (FreeWord::empty(), FreeWord::empty())
        };
        map.insert(format!("s{i}"), s);
        map.insert(format!("t{i}"), t);
    }
    map
}

/// Clock/shift quasi-representation of `Γ_g`: the ℤ² one for `g = 1`,
/// pulled back along [`padded_surface_map`] otherwise.
pub fn voiculescu_surface(n: usize, genus: usize) -> Result<QuasiRep> {
    let base = voiculescu_quasirep(n)?;
    match genus {
        0 => Err(Error::InvalidArgument("genus must be at least 1".into())),
        1 => Ok(base),
        g => pullback(&base, &padded_surface_map(g)),
    }
}

/// Image `∏[π(a_i), π(b_i)]` of a commutator datum, evaluating each
/// `a_i`, `b_i` as a group element with the strategy of `qr`.
pub fn commutator_product_image(qr: &QuasiRep, datum: &CommutatorDatum) -> Result<Unitary> {
    let mut w = Unitary::identity(qr.dim());
    for (a, b) in &datum.pairs {
        w = w.mul(&qr.element(a)?.commutator(&qr.element(b)?));
    }
    Ok(w)
}

#[derive(Clone, Debug, Serialize)]
pub struct Representative {
    pub label: String,
    pub datum: String,
    pub kappa: InvariantReport,
    pub winding: InvariantReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentativeReport {
    pub dim: usize,
    pub representatives: Vec<Representative>,
    pub kappa_values: Vec<i64>,
    pub identical: bool,
}

/// κ of three representatives of the fundamental ℤ² class on `qr`: the plain
/// commutator `[a,b]`, the conjugate pair `(c a c⁻¹, c b c⁻¹)` and the
/// genus-2 datum padded with identity generators.
pub fn representative_independence(qr: &QuasiRep, conjugator: &str, tol: &Tolerances) -> Result<RepresentativeReport> {
    let z2 = Presentation::z2();
    if qr.presentation() != &z2 {
        return Err(Error::PresentationMismatch);
    }
    let c = parse_word(conjugator)?;
    let conj = |w: FreeWord| &(&c * &w) * &c.inverse();
    let plain = CommutatorDatum::fundamental(z2.clone())?;
    let conjugated = CommutatorDatum::new(
        vec![(conj(FreeWord::generator("a")), conj(FreeWord::generator("b")))],
        z2,
    )?;
    let padded_qr = pullback(qr, &padded_surface_map(2))?;
    let padded = CommutatorDatum::fundamental(padded_qr.presentation().clone())?;

    let mut representatives = Vec::new();
    for (label, q, d) in [
        ("plain", qr, &plain),
        ("conjugated", qr, &conjugated),
        ("padded-genus-2", &padded_qr, &padded),
    ] {
        let w = commutator_product_image(q, d)?;
        representatives.push(Representative {
            label: label.into(),
            datum: d.product_word().to_string(),
            kappa: kappa(&w, TraceMode::Standard, tol)?,
            winding: winding_number_det_segment(&w, tol)?,
        });
    }
    let kappa_values: Vec<i64> = representatives.iter().map(|r| r.kappa.rounded.unwrap_or(0)).collect();
    let identical = representatives.iter().all(|r| r.kappa.is_integer)
        && kappa_values.windows(2).all(|p| p[0] == p[1])
        && representatives
            .windows(2)
            .all(|p| (p[0].kappa.value - p[1].kappa.value).abs() <= 1e-9);
    Ok(RepresentativeReport {
        dim: qr.dim(),
        representatives,
        kappa_values,
        identical,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityCase {
    pub n: usize,
    pub g: usize,
    pub seed: u64,
    pub radius: f64,
    /// Run past failed hypotheses instead of stopping.
    pub probe: bool,
}

/// One CSV row: `n, g, seed, radius, kappa, wn, k, relator_defect,
/// mult_defect, e_defect, gap, status`, all measured on the perturbed datum.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub g: usize,
    pub seed: u64,
    pub radius: f64,
    pub kappa: Option<i64>,
    pub wn: Option<i64>,
    pub k: Option<i64>,
    pub relator_defect: Option<f64>,
    pub mult_defect: Option<f64>,
    pub e_defect: Option<f64>,
    pub gap: Option<f64>,
    pub status: String,
}

pub const SWEEP_COLUMNS: [&str; 12] = [
    "n",
    "g",
    "seed",
    "radius",
    "kappa",
    "wn",
    "k",
    "relator_defect",
    "mult_defect",
    "e_defect",
    "gap",
    "status",
];

impl SweepRow {
    fn failed(case: &StabilityCase, e: &Error) -> Self {
        SweepRow {
            n: case.n,
            g: case.g,
            seed: case.seed,
            radius: case.radius,
            kappa: None,
            wn: None,
            k: None,
            relator_defect: None,
            mult_defect: None,
            e_defect: None,
            gap: None,
            status: e.tag().into(),
        }
    }

    /// Row for one case of an index-formula sweep: `kappa`, `wn` and `k` are
    /// the two right-hand sides and the left-hand side.
    pub fn from_index(n: usize, seed: u64, result: &Result<IndexReport>) -> Self {
        match result {
            Ok(r) => SweepRow {
                n,
                g: r.genus,
                seed,
                radius: 0.0,
                kappa: Some(r.rhs_kappa),
                wn: Some(r.rhs_wn),
                k: Some(r.lhs_k),
                relator_defect: r.defects.get("relator_defect").copied(),
                mult_defect: r.defects.get("mult_defect").copied(),
                e_defect: r.defects.get("e_defect").copied(),
                gap: r.defects.get("spectral_gap_width").copied(),
                status: if r.equal { "ok" } else { "mismatch" }.into(),
            },
            Err(e) => SweepRow::failed(
                &StabilityCase {
                    n,
                    g: 1,
                    seed,
                    radius: 0.0,
                    probe: false,
                },
                e,
            ),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityOutcome {
    pub case: StabilityCase,
    pub row: SweepRow,
    pub kazhdan: Option<KazhdanReport>,
    pub k_report: Option<InvariantReport>,
    pub error: Option<String>,
    #[serde(skip)]
    pub exit_code: i32,
}

/// Perturb every generator of the genus-`g` clock/shift datum by `radius`
/// and compare κ of the commutator products before and after.
///
/// Never fails: errors end up in the row's status column.
pub fn stability_case(case: &StabilityCase, tol: &Tolerances) -> StabilityOutcome {
    match run_stability(case, tol) {
        Ok(o) => o,
        Err(e) => StabilityOutcome {
            case: case.clone(),
            row: SweepRow::failed(case, &e),
            kazhdan: None,
            k_report: None,
            error: Some(e.to_string()),
            exit_code: e.exit_code(),
        },
    }
}

fn run_stability(case: &StabilityCase, tol: &Tolerances) -> Result<StabilityOutcome> {
    let qr = voiculescu_surface(case.n, case.g)?;
    let spec = PerturbationSpec {
        radius: case.radius,
        seed: case.seed,
        targets: Vec::new(),
    };
    let qr2 = perturb(&qr, &spec, tol)?;
    let datum = CommutatorDatum::fundamental(qr.presentation().clone())?;
    let split = |q: &QuasiRep| -> Result<(Vec<Unitary>, Vec<Unitary>)> {
        let mut us = Vec::new();
        let mut vs = Vec::new();
        for (a, b) in &datum.pairs {
            us.push(q.element(a)?);
            vs.push(q.element(b)?);
        }
        Ok((us, vs))
    };
    let (us, vs) = split(&qr)?;
    let (us2, vs2) = split(&qr2)?;
    let opts = KazhdanOptions {
        enforce_hypotheses: !case.probe,
    };
    let report = kazhdan_stability_with(&us, &vs, &us2, &vs2, opts, tol)?;

    let w2 = commutator_product_image(&qr2, &datum)?;
    let wn = winding_number_det_segment(&w2, tol)?;
    let gens: Vec<FreeWord> = qr2
        .presentation()
        .generators
        .iter()
        .flat_map(|g| [FreeWord::generator(g), FreeWord::generator(g).inverse()])
        .collect();

    let mut status = if report.kappa_equal && report.path_within_unit_ball {
        "ok".to_string()
    } else if !report.hypotheses_hold {
        "hypothesis-violated".to_string()
    } else {
        "kappa-changed".to_string()
    };
    let exit_code = match status.as_str() {
        "ok" => 0,
        "hypothesis-violated" => 1,
        _ => 2,
    };
    let k_report = match k_invariant(&us2[0], &vs2[0], tol) {
        Ok(r) => Some(r),
        Err(e) => {
            status.push_str(";k=");
            status.push_str(e.tag());
            None
        }
    };
    let row = SweepRow {
        n: case.n,
        g: case.g,
        seed: case.seed,
        radius: case.radius,
        kappa: report.kappa_after.rounded,
        wn: wn.rounded,
        k: k_report.as_ref().and_then(|r| r.rounded),
        relator_defect: Some(relator_defect(&qr2)?),
        mult_defect: Some(mult_defect(&qr2, &gens)?.epsilon),
        e_defect: k_report.as_ref().map(|r| r.defect_data["e_defect"]),
        gap: k_report.as_ref().map(|r| r.defect_data["spectral_gap_width"]),
        status,
    };
    Ok(StabilityOutcome {
        case: case.clone(),
        row,
        kazhdan: Some(report),
        k_report,
        error: None,
        exit_code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padded_map_shape() {
        let m = padded_surface_map(3);
        assert_eq!(m.len(), 6);
        assert_eq!(m["s1"].to_string(), "a");
        assert!(m["t3"].is_empty());
    }

    #[test]
    fn genus_two_relator_defect() {
        let n = 16;
        let qr = voiculescu_surface(n, 2).unwrap();
        let d = relator_defect(&qr).unwrap();
        assert!((d - 2.0 * (std::f64::consts::PI / n as f64).sin()).abs() < 1e-12);
    }

    #[test]
    fn stability_zero_radius() {
        let case = StabilityCase {
            n: 32,
            g: 1,
            seed: 1,
            radius: 0.0,
            probe: false,
        };
        let o = stability_case(&case, &Tolerances::default());
        assert_eq!(o.row.status, "ok", "{:?}", o.error);
        assert_eq!(o.row.kappa, Some(-1));
        assert_eq!(o.row.wn, Some(-1));
        assert_eq!(o.row.k, Some(1));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&o.row).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), SWEEP_COLUMNS.join(","));
    }

    #[test]
    fn stability_too_large_radius_reports_status() {
        let case = StabilityCase {
            n: 8,
            g: 1,
            seed: 3,
            radius: 0.5,
            probe: false,
        };
        let o = stability_case(&case, &Tolerances::default());
        assert_eq!(o.row.status, "hypothesis-violated");
        assert_eq!(o.exit_code, 1);
    }
}
