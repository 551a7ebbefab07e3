//! Exact arithmetic shared by every other module: rationals, univariate
//! Laurent polynomials and dense rational matrices with labelled bases.

mod laurent;
mod linear_map;
mod rational;

pub use laurent::{window_reduce, Laurent};
pub use linear_map::{default_labels, LinearMap};
pub use rational::{format_rational, parse_rational, rat, serde_rational, Rational};
