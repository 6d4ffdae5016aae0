//! Text syntax for free-group words.
//!
//! ```text
//! word     := factor*                       (juxtaposition / whitespace / '*')
//! factor   := atom ( '^' exponent )?
//! atom     := ident | '1' | '(' word ')' | '[' word ',' word ']'
//! exponent := '-'? digits | '(' '-'? digits ')'
//! ident    := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! `[x, y]` expands to `x y x⁻¹ y⁻¹`. The result is not reduced.

use super::word::{FreeWord, Letter};
use crate::error::{Error, Result};

pub const MAX_EXPONENT: i64 = 1_000_000;
pub const MAX_WORD_LETTERS: usize = 10_000_000;

pub fn parse_word(text: &str) -> Result<FreeWord> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace() || b == b'*') {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", b as char)))
        }
    }

    fn word(&mut self) -> Result<FreeWord> {
        let mut letters: Vec<Letter> = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(b')') | Some(b']') | Some(b',') => break,
                _ => {
                    let f = self.factor()?;
                    if letters.len() + f.len() > MAX_WORD_LETTERS {
                        return Err(self.error("word exceeds the letter limit"));
                    }
                    letters.extend_from_slice(f.letters());
                }
            }
        }
        Ok(FreeWord::from_letters(letters))
    }

    fn factor(&mut self) -> Result<FreeWord> {
        let atom = self.atom()?;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(atom);
        }
        self.pos += 1;
        let at = self.pos;
        let k = self.exponent()?;
        if atom.len().saturating_mul(k.unsigned_abs() as usize) > MAX_WORD_LETTERS {
            return Err(Error::Syntax {
                offset: at,
                message: "word exceeds the letter limit".into(),
            });
        }
        Ok(atom.pow(k))
    }

    fn atom(&mut self) -> Result<FreeWord> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b']')?;
                Ok(FreeWord::commutator(&a, &b))
            }
            Some(b'1') => {
                self.pos += 1;
                if matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
                    return Err(self.error("identifiers must start with a letter"));
                }
                Ok(FreeWord::empty())
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                Ok(FreeWord::generator(name))
            }
            Some(b) => Err(self.error(format!("unexpected `{}`", b as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        self.skip_ws();
        let parenthesised = self.peek() == Some(b'(');
        if parenthesised {
            self.pos += 1;
            self.skip_ws();
        }
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(self.error("expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let k: i64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "exponent out of range".into(),
        })?;
        if k == 0 {
            return Err(Error::Syntax {
                offset: start,
                message: "exponent must be nonzero".into(),
            });
        }
        if k.abs() > MAX_EXPONENT {
            return Err(Error::Syntax {
                offset: start,
                message: format!("|exponent| exceeds {MAX_EXPONENT}"),
            });
        }
        if parenthesised {
            self.expect(b')')?;
        }
        Ok(k)
    }
}
