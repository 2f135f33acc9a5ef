//! Reflection length and bi-invariant word metrics on Coxeter groups.
//!
//! The crate is organized bottom-up:
//!
//! - [`field`], [`matrix`], [`interval`]: exact arithmetic in `Q(2cos(pi/N))`
//!   and certified rational intervals.
//! - [`coxeter`], [`gram`], [`classify`]: Coxeter matrices, their Gram forms,
//!   and the spherical / affine / non-affine classification.
//! - [`tits`], [`roots`]: the Tits representation, canonical element keys,
//!   and reflection enumeration by root depth.
//! - [`ball`], [`quotient`], [`reflen`]: standard-length balls, finite
//!   quotient lower bounds, and the reflection length engine.
//! - [`quasi`]: counting quasimorphisms on free Coxeter groups.
//! - [`filling`]: triangle groups, cusp data and the warp profile.

pub mod ball;
pub mod catalog;
pub mod classify;
pub mod coxeter;
pub mod error;
pub mod field;
pub mod filling;
pub mod gram;
pub mod interval;
pub mod matrix;
mod par;
pub mod quasi;
pub mod quotient;
pub mod reflen;
pub mod roots;
pub mod tits;

pub use classify::{
    classify_component, classify_group, irreducible_components, minimal_nonaffine_subsets,
    ComponentKind, TypeVerdict,
};
pub use coxeter::{CoxeterMatrix, Exponent};
pub use error::{Error, Result};
pub use field::{CosineField, Scalar};
pub use gram::{gram_signature, GramMatrix, Signature};
pub use roots::{enumerate_reflections, Reflection};
pub use tits::{canonical_key, evaluate_word, fixed_space_codim, tits_generator, CoxeterGroup, GroupElement, Key};
pub use ball::{standard_length, StandardBall};
pub use quotient::{FiniteQuotient, QuotientBounds};
pub use quasi::{certify_lower_bound, counting_qm, defect_window, homogenize, reduce_word, FreeCoxeterWord, QuasimorphismCert};
pub use reflen::{
    affine_bound_experiment, carter_length_finite, growth_profile, reflen_ball, reflen_element,
    AffineBoundReport, GrowthRecord, Protocol, ReflLenResult, ReflenBall, ReflenEngine, ReflenOptions, Status,
};
