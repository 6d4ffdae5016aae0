//! Generators of quasi-representations: the cyclic-shift/clock pair, seeded
//! perturbations, direct sums and pullbacks to surface groups.
//!
//! Randomness comes from `SplitMix64` seeded with a 64-bit integer, so every
//! generated object is a deterministic function of its seed.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{exp_skew_hermitian, hermitian_spectral_radius, CMatrix, Unitary, C64};
use crate::tolerances::Tolerances;
use crate::words::{evaluate, FreeWord, Presentation, PresentationKind, QuasiRep, Strategy};

/// The pair `(u_n, v_n)`: `u_n` the cyclic shift `e_j ↦ e_{j+1}`, `v_n` the
/// clock `diag(λ, λ², …, λⁿ)` with `λ = e^{2πi/n}`.
pub fn voiculescu_pair(n: usize) -> Result<(Unitary, Unitary)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n ≥ 2, got {n}")));
    }
    let u = CMatrix::from_fn(n, |i, j| {
        if i == (j + 1) % n {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let v = CMatrix::from_diag(&(1..=n).map(|k| root_of_unity(k, n)).collect::<Vec<_>>());
    Ok((Unitary::assume(u, 0.0), Unitary::assume(v, 4.0 * f64::EPSILON)))
}

/// `e^{2πik/n}`, with the real and imaginary axes hit exactly.
fn root_of_unity(k: usize, n: usize) -> C64 {
    let k = k % n;
    match (4 * k) % n {
        0 => match 4 * k / n {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        },
        _ => C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64),
    }
}

/// The ℤ² quasi-representation `a ↦ u_n`, `b ↦ v_n`.
pub fn voiculescu_quasirep(n: usize) -> Result<QuasiRep> {
    let (u, v) = voiculescu_pair(n)?;
    z2_quasirep(u, v)
}

pub fn z2_quasirep(u: Unitary, v: Unitary) -> Result<QuasiRep> {
    let mut images = BTreeMap::new();
    images.insert("a".to_string(), u);
    images.insert("b".to_string(), v);
    QuasiRep::new(Presentation::z2(), images, Strategy::Z2NormalForm)
}

/// A genuine ℤ² representation by commuting diagonal unitaries
/// `a ↦ diag(e^{iαj})`, `b ↦ diag(e^{iβj})`.
pub fn commuting_quasirep(n: usize, alpha: f64, beta: f64) -> Result<QuasiRep> {
    let d = |s: f64| {
        let m = CMatrix::from_diag(&(0..n).map(|j| C64::from_polar(1.0, s * j as f64)).collect::<Vec<_>>());
        Unitary::assume(m, 4.0 * f64::EPSILON)
    };
    z2_quasirep(d(alpha), d(beta))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    /// Target `|π'(s) - π(s)|` for each targeted generator.
    pub radius: f64,
    pub seed: u64,
    /// Generators to perturb; empty means all of them.
    #[serde(default)]
    pub targets: Vec<String>,
}

/// Skew-Hermitian matrix with i.i.d. standard complex Gaussian entries,
/// anti-symmetrised: `K = (G - G*)/2`.
pub fn random_skew_hermitian(rng: &mut SplitMix64, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n);
    (&g - &g.adjoint()).scale_real(0.5)
}

fn gaussian_matrix(rng: &mut SplitMix64, n: usize) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut data = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        data.push(C64::new(re * scale, im * scale));
    }
    CMatrix::new(n, data).expect("finite gaussian entries")
}

/// Unitary `exp(K)` with `K` drawn from [`random_skew_hermitian`] and rescaled
/// so that `|exp(K) - 1| = radius`.
pub fn random_unitary_near_identity(rng: &mut SplitMix64, n: usize, radius: f64, tol: &Tolerances) -> Result<Unitary> {
    if !(0.0..2.0).contains(&radius) {
        return Err(Error::RadiusTooLarge(radius));
    }
    if radius == 0.0 {
        return Ok(Unitary::identity(n));
    }
    let k = random_skew_hermitian(rng, n);
    // |exp(sK) - 1| = 2 sin(s·ρ/2) with ρ the spectral radius of K
    let rho = hermitian_spectral_radius(&k.scale(C64::new(0.0, -1.0)));
    let s = 2.0 * (radius / 2.0).asin() / rho;
    exp_skew_hermitian(&k.scale_real(s), tol)
}

/// Multiply each targeted generator image on the right by a seeded
/// `exp(K)` at distance exactly `radius` from the identity.
///
/// A perturbed pullback loses its factorisation through ℤ² and is evaluated
/// with the word-product strategy.
pub fn perturb(qr: &QuasiRep, spec: &PerturbationSpec, tol: &Tolerances) -> Result<QuasiRep> {
    if !(0.0..2.0).contains(&spec.radius) || !spec.radius.is_finite() {
        return Err(Error::RadiusTooLarge(spec.radius));
    }
    if spec.radius == 0.0 {
        return Ok(qr.clone());
    }
    let targets: Vec<&str> = if spec.targets.is_empty() {
        qr.presentation().generators.iter().map(String::as_str).collect()
    } else {
        for t in &spec.targets {
            if !qr.presentation().has_generator(t) {
                return Err(Error::UnboundGenerator(t.clone()));
            }
        }
        qr.presentation()
            .generators
            .iter()
            .map(String::as_str)
            .filter(|g| spec.targets.iter().any(|t| t == g))
            .collect()
    };
    let mut rng = SplitMix64::seed_from_u64(spec.seed);
    let mut images = qr.images().clone();
    for g in targets {
        let e = random_unitary_near_identity(&mut rng, qr.dim(), spec.radius, tol)?;
        let img = images.get_mut(g).expect("validated generator");
        *img = img.mul(&e);
    }
    let strategy = match qr.strategy() {
        Strategy::PullbackThrough { .. } => Strategy::WordProduct,
        s => s.clone(),
    };
    QuasiRep::new(qr.presentation().clone(), images, strategy)
}

/// Compose a ℤ² quasi-representation with the homomorphism `Γ_g → ℤ²`
/// sending each surface generator to the given word over `a`, `b`.
pub fn pullback(base: &QuasiRep, map: &BTreeMap<String, FreeWord>) -> Result<QuasiRep> {
    if base.presentation().kind != PresentationKind::Z2 {
        return Err(Error::InvalidArgument("pullback needs a ℤ² base".into()));
    }
    if map.is_empty() || !map.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(
            "a surface map needs images for s1, t1, …, sg, tg".into(),
        ));
    }
    let presentation = Presentation::surface(map.len() / 2)?;
    for g in &presentation.generators {
        if !map.contains_key(g) {
            return Err(Error::UnboundGenerator(g.clone()));
        }
    }
    if let Some(extra) = map.keys().find(|k| !presentation.has_generator(k)) {
        return Err(Error::InvalidArgument(format!("`{extra}` is not a surface generator")));
    }
    base.presentation().check_words(map.values())?;
    let images = map
        .iter()
        .map(|(g, w)| Ok((g.clone(), evaluate(w, base.images())?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    QuasiRep::new(
        presentation,
        images,
        Strategy::PullbackThrough {
            map: map.clone(),
            base: Box::new(base.clone()),
        },
    )
}

/// Generator-wise block sum `π₁ ⊕ π₂`.
pub fn direct_sum(qr1: &QuasiRep, qr2: &QuasiRep) -> Result<QuasiRep> {
    if qr1.presentation() != qr2.presentation() {
        return Err(Error::PresentationMismatch);
    }
    let images = qr1
        .images()
        .iter()
        .map(|(g, u)| Ok((g.clone(), u.direct_sum(qr2.image(g)?))))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let strategy = match (qr1.strategy(), qr2.strategy()) {
        (Strategy::Z2NormalForm, Strategy::Z2NormalForm) => Strategy::Z2NormalForm,
        (
            Strategy::PullbackThrough { map: m1, base: b1 },
            Strategy::PullbackThrough { map: m2, base: b2 },
        ) if m1 == m2 => Strategy::PullbackThrough {
            map: m1.clone(),
            base: Box::new(direct_sum(b1, b2)?),
        },
        _ => Strategy::WordProduct,
    };
    QuasiRep::new(qr1.presentation().clone(), images, strategy)
}

/// Haar-distributed unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary(rng: &mut SplitMix64, n: usize) -> Unitary {
    let g = gaussian_matrix(rng, n);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for i in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let qi = &done[i];
                let proj: C64 = qi.iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, q) in rest[0].iter_mut().zip(qi) {
                    *x -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|z| *z /= norm);
    }
    let m = CMatrix::from_fn(n, |i, j| cols[j][i]);
    Unitary::assume(m, 1e-13 * n as f64)
}

/// Seeded generator for experiments that need many random unitaries.
pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}
