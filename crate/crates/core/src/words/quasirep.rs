use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::parse::parse_word;
use super::presentation::{Presentation, PresentationJson, PresentationKind};
use super::word::FreeWord;
use crate::error::{Error, Result};
use crate::matcore::{op_norm, CMatrix, MatrixJson, Unitary};
use crate::tolerances::Tolerances;

/// How a quasi-representation assigns a unitary to an arbitrary group element.
#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    /// ℤ² elements are evaluated on the normal form `a^j b^k`.
    Z2NormalForm,
    /// Substitute generator images (words over `a`, `b`) and evaluate with `base`.
    PullbackThrough {
        map: BTreeMap<String, FreeWord>,
        base: Box<QuasiRep>,
    },
    /// Evaluate the given representative word letter by letter.
    WordProduct,
}

/// A unital map from a finitely presented group to `U(n)`, known on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiRep {
    presentation: Presentation,
    images: BTreeMap<String, Unitary>,
    strategy: Strategy,
}

impl QuasiRep {
    pub fn new(
        presentation: Presentation,
        images: BTreeMap<String, Unitary>,
        strategy: Strategy,
    ) -> Result<Self> {
        let mut dim = None;
        for g in &presentation.generators {
            let u = images.get(g).ok_or_else(|| Error::UnboundGenerator(g.clone()))?;
            match dim {
                None => dim = Some(u.dim()),
                Some(n) if n != u.dim() => {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: u.dim(),
                    })
                }
                _ => {}
            }
        }
        if dim.is_none() {
            return Err(Error::InvalidArgument("presentation has no generators".into()));
        }
        if let Some(extra) = images.keys().find(|k| !presentation.has_generator(k)) {
            return Err(Error::InvalidArgument(format!("image given for unknown generator `{extra}`")));
        }
        match &strategy {
            Strategy::Z2NormalForm if presentation.kind != PresentationKind::Z2 => {
                return Err(Error::StrategyUndefined(
                    "the ℤ² normal form needs the Z2 presentation".into(),
                ))
            }
            Strategy::PullbackThrough { map, base } => {
                for g in &presentation.generators {
                    if !map.contains_key(g) {
                        return Err(Error::UnboundGenerator(g.clone()));
                    }
                }
                base.presentation.check_words(map.values())?;
                if base.dim() != dim.unwrap_or(0) {
                    return Err(Error::DimensionMismatch {
                        expected: base.dim(),
                        found: dim.unwrap_or(0),
                    });
                }
            }
            _ => {}
        }
        Ok(QuasiRep {
            presentation,
            images,
            strategy,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn images(&self) -> &BTreeMap<String, Unitary> {
        &self.images
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    pub fn dim(&self) -> usize {
        self.images.values().next().map(Unitary::dim).unwrap_or(0)
    }

    pub fn image(&self, generator: &str) -> Result<&Unitary> {
        self.images
            .get(generator)
            .ok_or_else(|| Error::UnboundGenerator(generator.to_string()))
    }

    /// `π(x)` for the group element represented by `w`, following the strategy.
    pub fn element(&self, w: &FreeWord) -> Result<Unitary> {
        match &self.strategy {
            Strategy::Z2NormalForm => {
                if let Some(g) = w.generators().into_iter().find(|g| *g != "a" && *g != "b") {
                    return Err(Error::StrategyUndefined(format!("`{w}` (generator `{g}`)")));
                }
                let j = w.exponent_sum("a");
                let k = w.exponent_sum("b");
                Ok(self.images["a"].pow(j).mul(&self.images["b"].pow(k)))
            }
            Strategy::PullbackThrough { map, base } => {
                if let Some(g) = w.generators().into_iter().find(|g| !self.presentation.has_generator(g)) {
                    return Err(Error::StrategyUndefined(format!("`{w}` (generator `{g}`)")));
                }
                base.element(&w.substitute(map))
            }
            Strategy::WordProduct => evaluate(w, &self.images),
        }
    }

    /// Evaluate a word letter by letter on the generator images.
    pub fn evaluate(&self, w: &FreeWord) -> Result<Unitary> {
        evaluate(w, &self.images)
    }
}

/// Left-to-right product of the images; inverse letters use the adjoint.
pub fn evaluate(w: &FreeWord, assignment: &BTreeMap<String, Unitary>) -> Result<Unitary> {
    let dim = assignment
        .values()
        .next()
        .map(Unitary::dim)
        .ok_or_else(|| Error::InvalidArgument("empty assignment".into()))?;
    if let Some(u) = assignment.values().find(|u| u.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.dim(),
        });
    }
    let mut acc = Unitary::identity(dim);
    for l in w.letters() {
        let u = assignment
            .get(&l.generator)
            .ok_or_else(|| Error::UnboundGenerator(l.generator.clone()))?;
        acc = if l.inverted { acc.mul(&u.adjoint()) } else { acc.mul(u) };
    }
    Ok(acc)
}

/// `max_r |π(r) - 1|` over the relators, each evaluated letter by letter.
pub fn relator_defect(qr: &QuasiRep) -> Result<f64> {
    if qr.presentation.relators.is_empty() {
        return Err(Error::InvalidArgument("presentation has no relators".into()));
    }
    qr.presentation
        .relators
        .iter()
        .map(|r| Ok(qr.evaluate(r)?.matrix().distance_to_identity()))
        .try_fold(0.0_f64, |acc, d: Result<f64>| Ok(acc.max(d?)))
}

/// Multiplicativity defect of a quasi-representation on a finite set `S`.
#[derive(Clone, Debug, Serialize)]
pub struct MultDefect {
    /// `max_{s,t ∈ S} |π(st) - π(s)π(t)|`.
    pub epsilon: f64,
    /// `max_{s ∈ S} |π(s⁻¹) - π(s)*|`.
    pub inverse_defect: f64,
    pub worst_pair: (String, String),
}

pub fn mult_defect(qr: &QuasiRep, set: &[FreeWord]) -> Result<MultDefect> {
    let images: Vec<Unitary> = set.iter().map(|s| qr.element(s)).collect::<Result<_>>()?;
    let mut epsilon = 0.0_f64;
    let mut worst_pair = (String::new(), String::new());
    for (s, ps) in set.iter().zip(&images) {
        for (t, pt) in set.iter().zip(&images) {
            let pst = qr.element(&(s * t))?;
            let d = op_norm(&(pst.matrix() - ps.mul(pt).matrix()));
            if d > epsilon || worst_pair.0.is_empty() {
                epsilon = epsilon.max(d);
                worst_pair = (s.to_string(), t.to_string());
            }
        }
    }
    let mut inverse_defect = 0.0_f64;
    for (s, ps) in set.iter().zip(&images) {
        let inv = qr.element(&s.inverse())?;
        inverse_defect = inverse_defect.max(op_norm(&(inv.matrix() - ps.adjoint().matrix())));
    }
    Ok(MultDefect {
        epsilon,
        inverse_defect,
        worst_pair,
    })
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ImageJson {
    Inline(MatrixJson),
    File { file: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyJson {
    Z2NormalForm,
    WordProduct,
    Pullback {
        map: BTreeMap<String, String>,
        base: Box<QuasiRepJson>,
    },
}

/// `{"presentation": {...}, "strategy": ..., "images": {"a": <matrix or {"file": path}>}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasiRepJson {
    pub presentation: PresentationJson,
    pub strategy: StrategyJson,
    pub images: BTreeMap<String, ImageJson>,
}

impl From<&QuasiRep> for QuasiRepJson {
    fn from(qr: &QuasiRep) -> Self {
        let strategy = match &qr.strategy {
            Strategy::Z2NormalForm => StrategyJson::Z2NormalForm,
            Strategy::WordProduct => StrategyJson::WordProduct,
            Strategy::PullbackThrough { map, base } => StrategyJson::Pullback {
                map: map.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                base: Box::new(QuasiRepJson::from(base.as_ref())),
            },
        };
        QuasiRepJson {
            presentation: PresentationJson::from(&qr.presentation),
            strategy,
            images: qr
                .images
                .iter()
                .map(|(k, u)| (k.clone(), ImageJson::Inline(MatrixJson::from(u.matrix()))))
                .collect(),
        }
    }
}

impl QuasiRepJson {
    /// Resolve file references relative to `base_dir` and validate everything.
    pub fn resolve(self, base_dir: Option<&Path>, tol: &Tolerances) -> Result<QuasiRep> {
        let presentation = Presentation::try_from(self.presentation)?;
        let mut images = BTreeMap::new();
        for (g, img) in self.images {
            let m = match img {
                ImageJson::Inline(j) => CMatrix::try_from(j)?,
                ImageJson::File { file } => {
                    let path = match base_dir {
                        Some(d) => d.join(&file),
                        None => file.into(),
                    };
                    let text = std::fs::read_to_string(path)?;
                    serde_json::from_str::<CMatrix>(&text)?
                }
            };
            images.insert(g, Unitary::new(m, tol.unitarity)?);
        }
        let strategy = match self.strategy {
            StrategyJson::Z2NormalForm => Strategy::Z2NormalForm,
            StrategyJson::WordProduct => Strategy::WordProduct,
            StrategyJson::Pullback { map, base } => Strategy::PullbackThrough {
                map: map
                    .into_iter()
                    .map(|(k, v)| Ok((k, parse_word(&v)?)))
                    .collect::<Result<_>>()?,
                base: Box::new(base.resolve(base_dir, tol)?),
            },
        };
        QuasiRep::new(presentation, images, strategy)
    }
}

impl Serialize for QuasiRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuasiRepJson::from(self).serialize(s)
    }
}
