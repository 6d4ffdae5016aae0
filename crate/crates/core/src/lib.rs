//! Topological invariants of unitary quasi-representations of discrete groups.
//!
//! The crate computes three integer invariants attached to an almost-commuting
//! family of unitaries and checks that they agree:
//!
//! * the trace logarithm `κ(w) = (1/2πi)·Tr(log w)` of a commutator product,
//! * the winding number of the determinant loop `t ↦ det((1-t)·1 + t·w)`,
//! * the K-theory pushforward of the Bott class, `k(u, v)`.
//!
//! Modules are layered bottom-up: [`matcore`] (dense complex linear algebra),
//! [`words`] (free-group words and quasi-representations), [`invariants`],
//! [`bott`], [`families`] (generators of examples) and [`cli`].

pub mod bott;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod families;
pub mod invariants;
pub mod matcore;
pub mod tolerances;
pub mod words;

pub use error::{Error, Result};
pub use matcore::{CMatrix, Unitary, C64};
pub use tolerances::Tolerances;
