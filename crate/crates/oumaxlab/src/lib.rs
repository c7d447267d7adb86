//! Monte Carlo laboratory for extremes of the Ornstein-Uhlenbeck process
//! and related Darling-Erdos limit theorems: excursion maxima coupled to
//! running suprema, integral tests for lower envelopes, random-walk
//! maxima, and lacunary cosine series in exact phase arithmetic.
//!
//! Throughout, `log x` means `ln(x v e)`, applied independently at every
//! nesting level of an iterated logarithm; see [`limits`].

pub mod error;
pub mod excursion;
pub mod gauge;
pub mod harness;
pub mod lacunary;
pub mod limits;
pub mod ou;
pub mod quad;
pub mod rng;
pub mod special;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
