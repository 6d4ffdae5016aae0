use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;

/// A generator raised to `+1` or `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: String,
    pub inverted: bool,
}

impl Letter {
    pub fn new(generator: impl Into<String>, inverted: bool) -> Self {
        Letter {
            generator: generator.into(),
            inverted,
        }
    }

    pub fn exponent(&self) -> i64 {
        if self.inverted {
            -1
        } else {
            1
        }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            generator: self.generator.clone(),
            inverted: !self.inverted,
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverted != other.inverted
    }
}

/// An element of a free group, stored as an (unreduced) sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord::default()
    }

    pub fn generator(name: impl Into<String>) -> Self {
        FreeWord {
            letters: vec![Letter::new(name, false)],
        }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        FreeWord { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// `w^k`; negative `k` uses the inverse word.
    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        FreeWord { letters }
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &FreeWord, b: &FreeWord) -> FreeWord {
        a * b * &a.inverse() * &b.inverse()
    }

    /// Free reduction by cancelling adjacent inverse pairs.
    pub fn reduce(&self) -> FreeWord {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            if stack.last().is_some_and(|top| top.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l.clone());
            }
        }
        FreeWord { letters: stack }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    pub fn generators(&self) -> BTreeSet<&str> {
        self.letters.iter().map(|l| l.generator.as_str()).collect()
    }

    /// Sum of exponents of `generator` (the image in the abelianisation).
    pub fn exponent_sum(&self, generator: &str) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator == generator)
            .map(Letter::exponent)
            .sum()
    }

    /// Replace every generator by a word, using `map`; unmapped generators are kept.
    pub fn substitute(&self, map: &BTreeMap<String, FreeWord>) -> FreeWord {
        let mut letters = Vec::new();
        for l in &self.letters {
            match map.get(&l.generator) {
                Some(w) if l.inverted => letters.extend(w.inverse().letters),
                Some(w) => letters.extend_from_slice(&w.letters),
                None => letters.push(l.clone()),
            }
        }
        FreeWord { letters }
    }
}

impl Mul for &FreeWord {
    type Output = FreeWord;

    fn mul(self, rhs: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        FreeWord { letters }
    }
}

impl Mul<&FreeWord> for FreeWord {
    type Output = FreeWord;

    fn mul(mut self, rhs: &FreeWord) -> FreeWord {
        self.letters.extend_from_slice(&rhs.letters);
        self
    }
}

/// Renders in the parser grammar: `a b^-1 c`, with `1` for the empty word.
impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&l.generator)?;
            if l.inverted {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FreeWord {
        FreeWord::generator(s)
    }

    #[test]
    fn reduce_examples() {
        let a = g("a");
        assert!((&a * &a.inverse()).reduce().is_empty());
        let ab = FreeWord::commutator(&a, &g("b"));
        let ba = FreeWord::commutator(&g("b"), &a);
        assert!((&ab * &ba).reduce().is_empty());
        assert_eq!(ab.reduce(), ab);
    }

    #[test]
    fn substitute_inverts_images() {
        let w = g("s").inverse();
        let mut map = BTreeMap::new();
        map.insert("s".to_string(), &g("a") * &g("b"));
        let expected = &g("b").inverse() * &g("a").inverse();
        assert_eq!(w.substitute(&map), expected);
    }

    #[test]
    fn display() {
        assert_eq!(FreeWord::empty().to_string(), "1");
        assert_eq!(FreeWord::commutator(&g("a"), &g("b")).to_string(), "a b a^-1 b^-1");
    }
}
