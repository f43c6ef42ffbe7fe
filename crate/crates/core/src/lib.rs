//! Computer algebra for truncated noncommutative formal power series and
//! the output-feedback group of Fliess operators.
//!
//! The layers, bottom-up:
//!
//! - [`word`]: words, word polynomials, the shuffle product and its adjoint.
//! - [`series`]: truncated vector-valued series and the `fps` text format.
//! - [`composition`]: composition, modified composition, fixed-point inverse.
//! - [`hopf`]: coordinate maps, coproducts and the recursive antipode.
//! - [`feedback`]: the output-feedback group, feedback product, radius formulas.
//! - [`realization`]: state-space realizations and Lie-derivative series.
//! - [`fliess_eval`]: numerical Fliess operators and growth-constant fits.

pub mod composition;
pub mod error;
pub mod feedback;
pub mod fliess_eval;
pub mod hopf;
pub mod rational;
pub mod realization;
pub mod series;
pub mod word;

pub use error::{Error, Result};
pub use rational::Rational;
pub use series::Series;
pub use word::{Alphabet, Word, WordPoly};
