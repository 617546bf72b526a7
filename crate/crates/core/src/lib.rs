//! Exact computations with homeomorphisms of the interval and the circle.
//!
//! Everything is done in rational arithmetic: piecewise-linear maps and their
//! metrics, fragmentation over an open cover, commutator factorisation by
//! Anderson's trick, ε-net covers with greedy colourings, verified
//! factorisation certificates, and contraction germs at `0`.

pub mod certify;
pub mod commutator;
pub mod cover;
pub mod error;
pub mod fragmentation;
pub mod germs;
pub mod json;
pub mod piecewise;
pub mod pl_homeo;
pub mod rational;

pub use error::{Error, Result};
pub use pl_homeo::{Domain, Homeomorphism, PLMap, SelfSimilarMap, SupportSet};
pub use rational::Q;

// The guide's and the README's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/fragmentation.md")]
    mod fragmentation {}
    #[doc = include_str!("../../../book/src/commutators.md")]
    mod commutators {}
    #[doc = include_str!("../../../book/src/covers.md")]
    mod covers {}
    #[doc = include_str!("../../../book/src/germs.md")]
    mod germs {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
