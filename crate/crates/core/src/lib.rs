//! Exact computations around the multilinear relators `K_n` of groups of
//! prime-power exponent.
//!
//! Everything is carried out over the rationals with arbitrary-precision
//! integers: the free associative algebra and its multilinear truncation,
//! the free Lie ring inside it, the commutative operator algebra spanned by
//! the maps `ψ_w`, the relators `K_n`, and integral lattice membership with
//! explicit certificates.

pub mod cli;
pub mod error;
pub mod freealg;
pub mod lie;
pub mod linalg;
pub mod opalg;
pub mod perm;
pub mod rational;
pub mod relators;
pub mod series;
pub mod suites;

pub use error::{Error, Result};
pub use rational::Q;
