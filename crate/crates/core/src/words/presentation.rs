use serde::{Deserialize, Serialize};

use super::parse::parse_word;
use super::word::FreeWord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentationKind {
    /// `⟨a, b ; [a, b]⟩`, the genus-one surface group with generators named `a`, `b`.
    Z2,
    /// `⟨s1, t1, …, sg, tg ; [s1,t1]⋯[sg,tg]⟩`.
    Surface { genus: usize },
    Custom,
}

/// A finite group presentation `F/R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<FreeWord>,
    pub kind: PresentationKind,
}

impl Presentation {
    pub fn z2() -> Self {
        let (a, b) = (FreeWord::generator("a"), FreeWord::generator("b"));
        Presentation {
            generators: vec!["a".into(), "b".into()],
            relators: vec![FreeWord::commutator(&a, &b)],
            kind: PresentationKind::Z2,
        }
    }

    pub fn surface(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidArgument("surface genus must be at least 1".into()));
        }
        let mut generators = Vec::with_capacity(2 * genus);
        let mut relator = FreeWord::empty();
        for i in 1..=genus {
            let (s, t) = (format!("s{i}"), format!("t{i}"));
            relator = relator
                * &FreeWord::commutator(&FreeWord::generator(&s), &FreeWord::generator(&t));
            generators.push(s);
            generators.push(t);
        }
        Ok(Presentation {
            generators,
            relators: vec![relator],
            kind: PresentationKind::Surface { genus },
        })
    }

    pub fn custom(generators: Vec<String>, relators: Vec<FreeWord>) -> Result<Self> {
        let p = Presentation {
            generators,
            relators,
            kind: PresentationKind::Custom,
        };
        p.check_words(p.relators.iter())?;
        Ok(p)
    }

    pub fn has_generator(&self, g: &str) -> bool {
        self.generators.iter().any(|x| x == g)
    }

    /// Every generator appearing in `words` must belong to the presentation.
    pub fn check_words<'a>(&self, words: impl IntoIterator<Item = &'a FreeWord>) -> Result<()> {
        for w in words {
            if let Some(g) = w.generators().into_iter().find(|g| !self.has_generator(g)) {
                return Err(Error::UnboundGenerator(g.to_string()));
            }
        }
        Ok(())
    }

    pub fn genus(&self) -> Option<usize> {
        match self.kind {
            PresentationKind::Z2 => Some(1),
            PresentationKind::Surface { genus } => Some(genus),
            PresentationKind::Custom => None,
        }
    }
}

/// Wire form: `{"kind": "Z2"|"surface"|"custom", "genus", "generators", "relators"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
}

impl From<&Presentation> for PresentationJson {
    fn from(p: &Presentation) -> Self {
        let kind = match p.kind {
            PresentationKind::Z2 => "Z2",
            PresentationKind::Surface { .. } => "surface",
            PresentationKind::Custom => "custom",
        };
        PresentationJson {
            kind: kind.into(),
            genus: p.genus(),
            generators: p.generators.clone(),
            relators: p.relators.iter().map(|r| r.to_string()).collect(),
        }
    }
}

impl TryFrom<PresentationJson> for Presentation {
    type Error = Error;

    fn try_from(j: PresentationJson) -> Result<Self> {
        match j.kind.as_str() {
            "Z2" | "z2" => Ok(Presentation::z2()),
            "surface" => Presentation::surface(j.genus.ok_or_else(|| {
                Error::InvalidArgument("surface presentation needs a genus".into())
            })?),
            "custom" => {
                let relators = j.relators.iter().map(|r| parse_word(r)).collect::<Result<Vec<_>>>()?;
                Presentation::custom(j.generators, relators)
            }
            other => Err(Error::InvalidArgument(format!("unknown presentation kind `{other}`"))),
        }
    }
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Presentation::try_from(PresentationJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A product of commutators `∏ [a_i, b_i]` in the free group on the ambient
/// generators, standing for a class in the second homology of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorDatum {
    pub pairs: Vec<(FreeWord, FreeWord)>,
    pub ambient: Presentation,
}

impl CommutatorDatum {
    pub fn new(pairs: Vec<(FreeWord, FreeWord)>, ambient: Presentation) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidArgument("a commutator datum needs at least one pair".into()));
        }
        ambient.check_words(pairs.iter().flat_map(|(a, b)| [a, b]))?;
        Ok(CommutatorDatum { pairs, ambient })
    }

    /// The surface relator `[s1,t1]⋯[sg,tg]` (or `[a,b]` for ℤ²) as a datum.
    pub fn fundamental(ambient: Presentation) -> Result<Self> {
        let pairs = match ambient.kind {
            PresentationKind::Z2 => vec![(FreeWord::generator("a"), FreeWord::generator("b"))],
            PresentationKind::Surface { genus } => (1..=genus)
                .map(|i| (FreeWord::generator(format!("s{i}")), FreeWord::generator(format!("t{i}"))))
                .collect(),
            PresentationKind::Custom => {
                return Err(Error::InvalidArgument(
                    "custom presentations have no canonical commutator datum".into(),
                ))
            }
        };
        CommutatorDatum::new(pairs, ambient)
    }

    pub fn genus(&self) -> usize {
        self.pairs.len()
    }

    /// `[a_1,b_1]⋯[a_g,b_g]`.
    pub fn product_word(&self) -> FreeWord {
        self.pairs
            .iter()
            .fold(FreeWord::empty(), |acc, (a, b)| acc * &FreeWord::commutator(a, b))
    }

    /// Image of the class in `H₂(ℤ²) ≅ ℤ`, after substituting `map` into the
    /// words: the sum of the 2×2 determinants of the exponent vectors of
    /// `(a_i, b_i)` over the generators `a`, `b`.
    pub fn z2_degree(&self, map: Option<&std::collections::BTreeMap<String, FreeWord>>) -> Result<i64> {
        let mut degree = 0;
        for (a, b) in &self.pairs {
            let (a, b) = match map {
                Some(m) => (a.substitute(m), b.substitute(m)),
                None => (a.clone(), b.clone()),
            };
            for w in [&a, &b] {
                if let Some(g) = w.generators().into_iter().find(|g| *g != "a" && *g != "b") {
                    return Err(Error::StrategyUndefined(format!(
                        "`{w}` is not a word over the ℤ² generators (found `{g}`)"
                    )));
                }
            }
            degree += a.exponent_sum("a") * b.exponent_sum("b") - a.exponent_sum("b") * b.exponent_sum("a");
        }
        Ok(degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_layout() {
        let p = Presentation::surface(2).unwrap();
        assert_eq!(p.generators, ["s1", "t1", "s2", "t2"]);
        assert_eq!(p.relators[0], parse_word("[s1,t1][s2,t2]").unwrap());
        assert!(Presentation::surface(0).is_err());
    }

    #[test]
    fn json_round_trip() {
        for p in [Presentation::z2(), Presentation::surface(3).unwrap()] {
            let s = serde_json::to_string(&p).unwrap();
            let back: Presentation = serde_json::from_str(&s).unwrap();
            assert_eq!(back, p);
        }
        let custom: Presentation = serde_json::from_str(
            r#"{"kind":"custom","generators":["x","y"],"relators":["x^3","[x,y]"]}"#,
        )
        .unwrap();
        assert_eq!(custom.relators.len(), 2);
        let bad: std::result::Result<Presentation, _> =
            serde_json::from_str(r#"{"kind":"custom","generators":["x"],"relators":["y"]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn z2_degrees() {
        let z2 = Presentation::z2();
        let w = |s: &str| parse_word(s).unwrap();
        let plain = CommutatorDatum::fundamental(z2.clone()).unwrap();
        assert_eq!(plain.z2_degree(None).unwrap(), 1);
        let swapped = CommutatorDatum::new(vec![(w("b"), w("a"))], z2.clone()).unwrap();
        assert_eq!(swapped.z2_degree(None).unwrap(), -1);
        let conj = CommutatorDatum::new(vec![(w("b a b^-1"), w("b b b^-1"))], z2.clone()).unwrap();
        assert_eq!(conj.z2_degree(None).unwrap(), 1);
        let padded = CommutatorDatum::new(vec![(w("a"), w("b")), (w("1"), w("1"))], z2).unwrap();
        assert_eq!(padded.z2_degree(None).unwrap(), 1);
    }
}
