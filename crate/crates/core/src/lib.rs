//! Hölder- and Minkowski-type inequalities for signed weights whose partial
//! sums are non-negative.
//!
//! The crate covers validation of weights and monotone sequences
//! ([`model`]), the inequality ratios and slacks ([`engine`]), their
//! closed-form constants ([`bounds`]), explicit extremal constructions
//! ([`families`]), a projected local search for large ratios ([`search`])
//! and integral forms over sign-changing densities ([`integral`]).
//!
//! ```
//! use ineq_forge::{engine, SignedWeights, BoundedMonotoneSeq, Direction, WeightedInstance};
//!
//! let w = SignedWeights::alternating(3)?;
//! let a = BoundedMonotoneSeq::tight(vec![3.0, 2.0, 1.0], Direction::NonIncreasing)?;
//! let b = BoundedMonotoneSeq::tight(vec![4.0, 1.0, 1.0], Direction::NonIncreasing)?;
//! let inst = WeightedInstance::new(w, a, b)?;
//! let r = engine::minkowski_ratio(&inst, 2.0)?;
//! assert!(r.ratio <= r.bound);
//! # Ok::<(), ineq_forge::Error>(())
//! ```

pub mod bounds;
pub mod engine;
mod error;
pub mod families;
pub mod integral;
pub mod model;
pub mod schema;
pub mod search;
pub mod sum;

pub use engine::{ExponentPair, RatioReport};
pub use error::{Error, Result};
pub use model::{
    abel_sum, partial_sums, validate_monotone, validate_weights, Admissibility, BoundedMonotoneSeq,
    Direction, MonotoneVerdict, MonotoneViolation, SignedWeights, WeightedInstance,
};

/// The guide's code blocks, compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/ratios.md")]
    mod ratios {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/integrals.md")]
    mod integrals {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
