//! Exact singularity invariants of monomial ideals and multi-circled
//! plurisubharmonic weights.
//!
//! A singularity is given by finitely many exponent vectors `a_i`, read either
//! as the monomial ideal `(z^{a_1}, ..., z^{a_p})` or as the toric weight
//! `u = max_i <a_i, log|z|>`. Everything here depends only on the Newton
//! polyhedron `conv(a_i) + R^n_{>=0}` and is computed in exact rational
//! arithmetic:
//!
//! * [`newton`] builds polyhedra, decides membership and computes covolumes,
//! * [`invariants`] derives the codimension, Lelong number, mixed
//!   Monge-Ampere masses `e_k` and the log canonical threshold,
//! * [`threshold`] evaluates the `E_k` / `F_k` lower-bound ladder and the
//!   equality diagnosis,
//! * [`oracle`] provides slow lattice-counting cross-checks that share no
//!   code with the polyhedral route.

pub mod error;
pub mod hull;
pub mod input;
pub mod invariants;
pub mod lp;
pub mod newton;
pub mod oracle;
pub mod threshold;

mod lattice;
mod linalg;

pub use error::{Error, Result};
pub use input::{parse_rational, ExponentVector, Kind, SingularityInput};
pub use invariants::{InvariantConfig, InvariantSet};

pub use newton::NewtonPolyhedron;
pub use threshold::{Defect, EqualityStructure, ThresholdReport};

/// Exact rational scalar used throughout the crate.
pub type Rational = num_rational::BigRational;
