//! Exact constructions, measures and brute-force oracles for families of
//! words over `{1..s}` in which every pair of members agrees on at least
//! `t_ℓ` coordinates carrying symbol `ℓ`, for each `ℓ`.
//!
//! * [`word`]: words, meets, intersection profiles, the `<_P` preorder.
//! * [`family`]: dense word and set families, `P`-closures, projections, slices.
//! * [`constructions`]: majority and window families, lifts, block products.
//! * [`measures`]: exact p-biased measures and closed-form extremal values.
//! * [`search`]: exact maximum families by bitset maximum-clique search.
//! * [`correlation`]: checks of the negative correlation of complete families.
//! * [`cli`]: the batch front end behind the `isecode` binary.

pub mod cli;
pub mod constructions;
pub mod correlation;
pub mod error;
pub mod family;
pub mod measures;
pub mod search;
pub mod word;

pub use error::{Error, Result};
pub use family::{Family, SetFamily};
pub use word::{SpaceParams, SymbolSet, TVector, Word};
