//! Bott almost-projection of an almost-commuting pair and its K-theory class.
//!
//! For unitaries `u`, `v` the self-adjoint `2n × 2n` matrix
//!
//! ```text
//! e(u, v) = [ f(v)            g(v) + h(v)·u* ]
//!           [ g(v) + u·h(v)   1 - f(v)       ]
//! ```
//!
//! is an exact projection when `u` and `v` commute, where for
//! `z = e^{2πit}`, `t ∈ [0, 1)`:
//!
//! * `f = 1 - 2t` on `[0, ½]` and `2t - 1` on `[½, 1]`,
//! * `g = √(f - f²)` on `[0, ½]`, zero elsewhere,
//! * `h = √(f - f²)` on `[½, 1]`, zero elsewhere,
//!
//! so that `g·h = 0` and `g² + h² = f - f²`. For almost-commuting pairs `e`
//! is close to a projection, and `rank χ_(½,∞)(e) - n` is the integer `k(u, v)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{pullback, voiculescu_pair};
use crate::invariants::{kappa, winding_number_det_segment, InvariantReport, TraceMode};
use crate::matcore::{op_norm, spectral_projection, unitary_eig, CMatrix, Unitary, C64};
use crate::tolerances::Tolerances;
use crate::words::{mult_defect, relator_defect, CommutatorDatum, FreeWord, PresentationKind, QuasiRep};

/// Which of the two unitaries feeds the functional calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `e(u, v)` as displayed in the module docs.
    Standard,
    /// `e(v, u)`: roles exchanged.
    Swapped,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Standard => 1,
            Orientation::Swapped => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Orientation::Standard => "+1",
            Orientation::Swapped => "-1",
        }
    }

    /// Orientation fixed once per process by [`calibrate`] with default tolerances.
    pub fn calibrated() -> Result<Orientation> {
        static CALIBRATION: OnceLock<Orientation> = OnceLock::new();
        if let Some(o) = CALIBRATION.get() {
            return Ok(*o);
        }
        let o = calibrate(&Tolerances::default())?;
        Ok(*CALIBRATION.get_or_init(|| o))
    }
}

pub const CALIBRATION_DIM: usize = 64;

/// Choose the orientation for which `k(u_n, v_n)` equals the winding number
/// of `det((1-t)·1 + t·[v_n, u_n])` on the clock/shift pair at `n = 64`.
pub fn calibrate(tol: &Tolerances) -> Result<Orientation> {
    let (u, v) = voiculescu_pair(CALIBRATION_DIM)?;
    let e = bott_almost_projection(&u, &v, Orientation::Standard, tol)?;
    let k = push_k_class(&e, tol)?.class;
    let wn = winding_number_det_segment(&v.commutator(&u), tol)?;
    let wn = wn.rounded.unwrap_or(0);
    if k == wn && k != 0 {
        Ok(Orientation::Standard)
    } else if k == -wn && k != 0 {
        Ok(Orientation::Swapped)
    } else {
        Err(Error::InvalidArgument(format!(
            "calibration failed: k = {k}, winding number = {wn}"
        )))
    }
}

/// The circle functions `(f, g, h)` evaluated at `z` on the unit circle.
pub fn circle_functions(z: C64) -> (f64, f64, f64) {
    let t = (z.arg() / (2.0 * PI)).rem_euclid(1.0);
    if t <= 0.5 {
        let f = 1.0 - 2.0 * t;
        (f, (f - f * f).max(0.0).sqrt(), 0.0)
    } else {
        let f = 2.0 * t - 1.0;
        (f, 0.0, (f - f * f).max(0.0).sqrt())
    }
}

/// Self-adjoint near-projection with its recorded defect `|e² - e|`.
#[derive(Clone, Debug)]
pub struct AlmostProjection {
    pub e: CMatrix,
    pub defect: f64,
    pub base_dim: usize,
}

impl AlmostProjection {
    pub fn new(e: CMatrix, base_dim: usize) -> Result<Self> {
        if e.dim() != 2 * base_dim {
            return Err(Error::DimensionMismatch {
                expected: 2 * base_dim,
                found: e.dim(),
            });
        }
        let defect = projection_defect(&e);
        Ok(AlmostProjection { e, defect, base_dim })
    }
}

fn projection_defect(e: &CMatrix) -> f64 {
    op_norm(&(&(e * e) - e))
}

pub fn bott_almost_projection(
    u: &Unitary,
    v: &Unitary,
    orientation: Orientation,
    tol: &Tolerances,
) -> Result<AlmostProjection> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let (u, v) = match orientation {
        Orientation::Standard => (u, v),
        Orientation::Swapped => (v, u),
    };
    let n = u.dim();
    let es = unitary_eig(v, tol)?;
    let funcs: Vec<(f64, f64, f64)> = es.values.iter().map(|&z| circle_functions(z)).collect();
    let real = |x: f64| C64::new(x, 0.0);
    let mut i = 0;
    let f = es.map_values(|_| {
        i += 1;
        real(funcs[i - 1].0)
    });
    let mut i = 0;
    let g = es.map_values(|_| {
        i += 1;
        real(funcs[i - 1].1)
    });
    let mut i = 0;
    let h = es.map_values(|_| {
        i += 1;
        real(funcs[i - 1].2)
    });
    let um = u.matrix();
    let upper = &g + &(&h * &um.adjoint());
    let lower = &g + &(um * &h);
    let one_minus_f = (&CMatrix::identity(n) - &f).clone();
    let e = CMatrix::block2(&f, &upper, &lower, &one_minus_f)?;
    let e = (&e + &e.adjoint()).scale_real(0.5);
    AlmostProjection::new(e, n)
}

#[derive(Clone, Debug, Serialize)]
pub struct PushForward {
    /// `rank(p) - n`.
    pub class: i64,
    pub rank: usize,
    pub gap_width: f64,
    pub defect: f64,
}

/// Class of the spectral projection of `e` relative to the trivial rank-`n`
/// projection `diag(1_n, 0)`.
pub fn push_k_class(e: &AlmostProjection, tol: &Tolerances) -> Result<PushForward> {
    if e.defect >= tol.max_bott_defect {
        return Err(Error::DefectTooLarge {
            defect: e.defect,
            limit: tol.max_bott_defect,
        });
    }
    let p = spectral_projection(&e.e, tol.projection_threshold, tol.spectral_gap, tol)?;
    Ok(PushForward {
        class: p.rank as i64 - e.base_dim as i64,
        rank: p.rank,
        gap_width: p.gap_width,
        defect: e.defect,
    })
}

/// `k(u, v)` in the calibrated orientation.
pub fn k_invariant(u: &Unitary, v: &Unitary, tol: &Tolerances) -> Result<InvariantReport> {
    k_invariant_with(u, v, Orientation::calibrated()?, tol)
}

pub fn k_invariant_with(
    u: &Unitary,
    v: &Unitary,
    orientation: Orientation,
    tol: &Tolerances,
) -> Result<InvariantReport> {
    let e = bott_almost_projection(u, v, orientation, tol)?;
    let push = push_k_class(&e, tol)?;
    let mut r = InvariantReport::new("k", push.class as f64, tol);
    r.rounded = Some(push.class);
    r.is_integer = true;
    r.defect("commutator_defect", u.commutator(v).matrix().distance_to_identity())
        .defect("e_defect", push.defect)
        .defect("spectral_gap_width", push.gap_width)
        .defect("rank", push.rank as f64)
        .defect("base_dim", u.dim() as f64)
        .defect("orientation", orientation.sign() as f64);
    Ok(r)
}

/// Which family the index formula is instantiated on.
#[derive(Clone, Debug, PartialEq)]
pub enum IndexCase {
    /// The quasi-representation is over ℤ² and the datum uses `a`, `b`.
    Z2Bott,
    /// Pull the ℤ² quasi-representation back to `Γ_g` along `s_i, t_i ↦ words`.
    SurfacePullback { map: BTreeMap<String, FreeWord> },
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub case: String,
    pub genus: usize,
    /// Image of the datum's class in `H₂(ℤ²) ≅ ℤ`.
    pub degree: i64,
    pub dim: usize,
    pub lhs_k: i64,
    pub rhs_wn: i64,
    pub rhs_kappa: i64,
    pub normalized_lhs: f64,
    pub rhs_kappa_tau: f64,
    pub equal_integers: bool,
    pub equal_trace: bool,
    pub equal: bool,
    pub orientation: String,
    pub defects: BTreeMap<String, f64>,
    pub reports: Vec<InvariantReport>,
    pub scope: String,
}

const SCOPE_NOTE: &str = "left side instantiated for the Bott class of Z^2 and its pullbacks to surface groups";

/// Compare the Bott pushforward with the winding number and the trace
/// logarithm of the commutator product of `datum` under `qr`.
///
/// The pushforward of the Bott class pairs with the inverse commutator
/// product `∏[π(b̄_i), π(ā_i)]` read right to left, i.e. the `[v, u]`
/// ordering; the right-hand sides are evaluated on that unitary.
pub fn verify_index_formula(
    case: &IndexCase,
    qr: &QuasiRep,
    datum: &CommutatorDatum,
    tol: &Tolerances,
) -> Result<IndexReport> {
    if qr.presentation().kind != PresentationKind::Z2 {
        return Err(Error::InvalidArgument(
            "the index formula is instantiated over a ℤ² quasi-representation".into(),
        ));
    }
    let (evaluated, degree, label) = match case {
        IndexCase::Z2Bott => (qr.clone(), datum.z2_degree(None)?, "z2-bott"),
        IndexCase::SurfacePullback { map } => {
            let pulled = pullback(qr, map)?;
            (pulled, datum.z2_degree(Some(map))?, "surface-pullback")
        }
    };
    if &datum.ambient != evaluated.presentation() {
        return Err(Error::PresentationMismatch);
    }
    let n = qr.dim();
    let orientation = Orientation::calibrated()?;
    let k = k_invariant_with(qr.image("a")?, qr.image("b")?, orientation, tol)?;
    let lhs_k = degree * k.rounded.unwrap_or(0);

    let mut w = Unitary::identity(n);
    for (a, b) in &datum.pairs {
        let pa = evaluated.element(a)?;
        let pb = evaluated.element(b)?;
        w = w.mul(&pa.commutator(&pb));
    }
    let w_inv = w.adjoint();
    let wn = winding_number_det_segment(&w_inv, tol)?;
    let kap = kappa(&w_inv, TraceMode::Standard, tol)?;
    let kap_tau = kappa(&w_inv, TraceMode::Normalized, tol)?;

    let rhs_wn = wn.rounded.unwrap_or(0);
    let rhs_kappa = kap.rounded.unwrap_or(0);
    let normalized_lhs = lhs_k as f64 / n as f64;
    let equal_integers = wn.is_integer && kap.is_integer && lhs_k == rhs_wn && rhs_wn == rhs_kappa;
    let equal_trace = (normalized_lhs - kap_tau.value).abs() <= 1e-9;

    let mut defects = BTreeMap::new();
    defects.insert("relator_defect".into(), relator_defect(&evaluated)?);
    let gens: Vec<FreeWord> = evaluated
        .presentation()
        .generators
        .iter()
        .flat_map(|g| [FreeWord::generator(g), FreeWord::generator(g).inverse()])
        .collect();
    defects.insert("mult_defect".into(), mult_defect(&evaluated, &gens)?.epsilon);
    defects.insert("commutator_product_defect".into(), w.matrix().distance_to_identity());
    defects.insert("e_defect".into(), k.defect_data["e_defect"]);
    defects.insert("spectral_gap_width".into(), k.defect_data["spectral_gap_width"]);

    Ok(IndexReport {
        case: label.into(),
        genus: datum.genus(),
        degree,
        dim: n,
        lhs_k,
        rhs_wn,
        rhs_kappa,
        normalized_lhs,
        rhs_kappa_tau: kap_tau.value,
        equal_integers,
        equal_trace,
        equal: equal_integers && equal_trace,
        orientation: orientation.label().into(),
        defects,
        reports: vec![k, wn, kap, kap_tau],
        scope: SCOPE_NOTE.into(),
    })
}
