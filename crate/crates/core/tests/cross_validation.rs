mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use common::{seeded, su_with_chosen_spectrum};
use qrep::bott::{bott_almost_projection, k_invariant, k_invariant_with, verify_index_formula, IndexCase, Orientation};
use qrep::experiments::{commutator_product_image, stability_case, voiculescu_surface, StabilityCase};
use qrep::families::{commuting_quasirep, direct_sum, perturb, pullback, voiculescu_pair, voiculescu_quasirep, PerturbationSpec};
use qrep::invariants::{exel_homotopy_gap, kappa, winding_number_det_segment, TraceMode};
use qrep::matcore::{lu_det, op_norm, unitary_eig};
use qrep::words::{parse_word, CommutatorDatum, FreeWord, Presentation};
use qrep::{Error, Tolerances, C64};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn map(spec: &[(&str, &str)]) -> BTreeMap<String, FreeWord> {
    spec.iter().map(|(k, v)| (k.to_string(), parse_word(v).unwrap())).collect()
}

#[test]
fn winding_equals_kappa_on_chosen_spectra() {
    // oracle: for angles θ_j in (-π, π) summing to 2πk, every factor of
    // det((1-t) + t·w) moves along a chord, so the total argument change is 2πk
    let mut r = seeded(2024);
    let mut seen = std::collections::BTreeSet::new();
    for i in 0..240 {
        let n = 2 + i % 15;
        let (w, k) = su_with_chosen_spectrum(&mut r, n, 0.1);
        let kap = kappa(&w, TraceMode::Standard, &tol()).unwrap();
        let wn = winding_number_det_segment(&w, &tol()).unwrap();
        assert!(kap.is_integer && wn.is_integer, "case {i}");
        assert_eq!(kap.rounded, Some(k), "case {i}");
        assert_eq!(wn.rounded, Some(k), "case {i}");
        assert!(exel_homotopy_gap(&w, &tol()).unwrap() < 1.0);
        seen.insert(k);
    }
    assert!(seen.len() >= 3, "only saw κ ∈ {seen:?}");
}

#[test]
fn clock_and_shift_oracles() {
    for n in 2..=24usize {
        let (u, v) = voiculescu_pair(n).unwrap();
        // sign of an n-cycle
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        assert!((lu_det(u.matrix()) - sign).norm() < 1e-12, "n = {n}");
        // spectrum of the shift: roots of zⁿ - 1
        let mut args: Vec<f64> = unitary_eig(&u, &tol())
            .unwrap()
            .values
            .iter()
            .map(|z| z.arg().rem_euclid(2.0 * PI))
            .collect();
        args.sort_by(f64::total_cmp);
        let mut roots: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
        roots.sort_by(f64::total_cmp);
        for (a, b) in args.iter().zip(&roots) {
            let d = (a - b).abs();
            assert!(d.min(2.0 * PI - d) < 1e-9, "n = {n}: {a} vs {b}");
        }
        let c = u.commutator(&v);
        let lambda = C64::from_polar(1.0, -2.0 * PI / n as f64);
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { lambda } else { C64::new(0.0, 0.0) };
                assert!((c.matrix().get(i, j) - expected).norm() < 1e-12);
            }
        }
        let dist = c.matrix().distance_to_identity();
        assert!((dist - 2.0 * (PI / n as f64).sin()).abs() < 1e-12);
        assert!(dist < 2.0 * PI / n as f64);
    }
    let (u, v) = voiculescu_pair(2).unwrap();
    assert_eq!(u.matrix().get(0, 1), C64::new(1.0, 0.0));
    assert_eq!(v.matrix().diag(), vec![C64::new(-1.0, 0.0), C64::new(1.0, 0.0)]);
}

#[test]
fn clock_and_shift_kappa_is_minus_one() {
    for n in 4..=64 {
        let qr = voiculescu_quasirep(n).unwrap();
        let w = qr.evaluate(&parse_word("[a,b]").unwrap()).unwrap();
        let k = kappa(&w, TraceMode::Standard, &tol()).unwrap();
        assert_eq!(k.rounded, Some(-1), "n = {n}");
        assert!((k.value + 1.0).abs() <= 1e-6);
        assert_eq!(winding_number_det_segment(&w, &tol()).unwrap().rounded, Some(-1));
    }
}

#[test]
fn pullbacks_and_direct_sums() {
    let n = 64;
    let base = voiculescu_quasirep(n).unwrap();
    let relator = |q: &qrep::words::QuasiRep| {
        let r = q.presentation().relators[0].clone();
        kappa(&q.evaluate(&r).unwrap(), TraceMode::Standard, &tol()).unwrap().rounded
    };
    let swapped = pullback(&base, &map(&[("s1", "b"), ("t1", "a"), ("s2", "1"), ("t2", "1")])).unwrap();
    assert_eq!(relator(&swapped), Some(1));
    let padded = pullback(&base, &map(&[("s1", "a"), ("t1", "b"), ("s2", "1"), ("t2", "1")])).unwrap();
    let d = qrep::words::relator_defect(&padded).unwrap();
    assert!((d - 2.0 * (PI / n as f64).sin()).abs() < 1e-12);

    assert_eq!(relator(&direct_sum(&base, &base).unwrap()), Some(-2));
    let genuine = commuting_quasirep(n, 0.3, -1.1).unwrap();
    let mixed = direct_sum(&base, &genuine).unwrap();
    assert_eq!(mixed.dim(), 2 * n);
    assert_eq!(relator(&mixed), Some(-1));
    assert!(matches!(direct_sum(&base, &swapped), Err(Error::PresentationMismatch)));
}

#[test]
fn index_formula_on_pullbacks() {
    let n = 64;
    let base = voiculescu_quasirep(n).unwrap();
    let cases: [(&[(&str, &str)], i64); 4] = [
        (&[("s1", "a"), ("t1", "b"), ("s2", "1"), ("t2", "1")], 1),
        (&[("s1", "b"), ("t1", "a"), ("s2", "1"), ("t2", "1")], -1),
        (&[("s1", "a"), ("t1", "b"), ("s2", "a"), ("t2", "b")], 2),
        (&[("s1", "a^2"), ("t1", "b"), ("s2", "a b"), ("t2", "b")], 3),
    ];
    for (spec, degree) in cases {
        let m = map(spec);
        let pulled = pullback(&base, &m).unwrap();
        let datum = CommutatorDatum::fundamental(pulled.presentation().clone()).unwrap();
        let r = verify_index_formula(&IndexCase::SurfacePullback { map: m }, &base, &datum, &tol()).unwrap();
        assert_eq!(r.degree, degree, "{spec:?}");
        assert_eq!(r.lhs_k, degree);
        assert!(r.equal, "{spec:?}: {} {} {}", r.lhs_k, r.rhs_wn, r.rhs_kappa);
        assert!((r.normalized_lhs - degree as f64 / n as f64).abs() < 1e-12);
    }
    let datum = CommutatorDatum::fundamental(Presentation::z2()).unwrap();
    let r = verify_index_formula(&IndexCase::Z2Bott, &base, &datum, &tol()).unwrap();
    assert!(r.equal && r.lhs_k == 1 && r.orientation == "+1");
}

#[test]
fn bott_defect_decreases() {
    let mut last = f64::INFINITY;
    for n in [8, 16, 32, 64, 128] {
        let (u, v) = voiculescu_pair(n).unwrap();
        let e = bott_almost_projection(&u, &v, Orientation::Standard, &tol()).unwrap();
        assert!(e.defect < last, "n = {n}");
        assert!((&e.e - &e.e.adjoint()).frobenius_norm() < 1e-12);
        last = e.defect;
    }
    assert!(last < 0.02);
    let (u, v) = voiculescu_pair(64).unwrap();
    assert_eq!(k_invariant(&u, &v, &tol()).unwrap().rounded, Some(1));
    assert_eq!(k_invariant_with(&u, &v, Orientation::Swapped, &tol()).unwrap().rounded, Some(-1));
}

#[test]
fn perturbation_distance_is_exact() {
    let qr = voiculescu_surface(16, 2).unwrap();
    for seed in 0..5 {
        let spec = PerturbationSpec {
            radius: 0.37,
            seed,
            targets: vec!["s1".into(), "t2".into()],
        };
        let p = perturb(&qr, &spec, &tol()).unwrap();
        for g in ["s1", "t1", "s2", "t2"] {
            let d = op_norm(&(p.image(g).unwrap().matrix() - qr.image(g).unwrap().matrix()));
            let expected = if g == "s1" || g == "t2" { 0.37 } else { 0.0 };
            assert!((d - expected).abs() < 1e-10, "{g}: {d}");
        }
        assert_eq!(p, perturb(&qr, &spec, &tol()).unwrap());
    }
}

#[test]
fn genus_two_stability() {
    for seed in 0..4 {
        let case = StabilityCase {
            n: 64,
            g: 2,
            seed,
            radius: 0.09,
            probe: false,
        };
        let o = stability_case(&case, &tol());
        assert_eq!(o.row.status, "ok", "{:?}", o.error);
        let kz = o.kazhdan.unwrap();
        assert!(kz.hypotheses_hold && kz.path_within_unit_ball && kz.kappa_constant_along_path);
        assert_eq!(kz.kappa_before.rounded, Some(-1));
        assert_eq!(kz.kappa_after.rounded, Some(-1));
    }
}

#[test]
fn commutator_image_of_padded_datum_matches_plain() {
    let qr = voiculescu_surface(32, 3).unwrap();
    let datum = CommutatorDatum::fundamental(qr.presentation().clone()).unwrap();
    let w = commutator_product_image(&qr, &datum).unwrap();
    let (u, v) = voiculescu_pair(32).unwrap();
    assert!(w.matrix().max_abs_diff(u.commutator(&v).matrix()) < 1e-12);
}
