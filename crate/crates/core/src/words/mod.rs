//! Free-group words, group presentations, commutator data and
//! quasi-representations given by their values on generators.

mod parse;
mod presentation;
mod quasirep;
mod word;

pub use parse::{parse_word, MAX_EXPONENT, MAX_WORD_LETTERS};
pub use presentation::{CommutatorDatum, Presentation, PresentationJson, PresentationKind};
pub use quasirep::{
    evaluate, mult_defect, relator_defect, ImageJson, MultDefect, QuasiRep, QuasiRepJson, Strategy,
    StrategyJson,
};
pub use word::{FreeWord, Letter};

/// `reduce` as a free function, mirroring the word API.
pub fn reduce(w: &FreeWord) -> FreeWord {
    w.reduce()
}
