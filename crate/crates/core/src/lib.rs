//! Exact K-theoretic shadows of spherical pairs from torus wall crossings.
//!
//! [`algebra`] supplies rationals, Laurent polynomials and matrices;
//! [`perverse`] models perverse sheaves on a disk as linear diagrams;
//! [`kgit`] builds the Grothendieck-group maps attached to a simple balanced
//! wall crossing for a `C*` action on affine space and decides the
//! intersection-cohomology saturation criteria.

pub mod algebra;
pub mod batch;
pub mod cli;
pub mod error;
pub mod kgit;
pub mod perverse;
pub mod selfcheck;

pub use error::{Error, Result};
