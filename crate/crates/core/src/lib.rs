//! Exact tools for deciding quadratic, polyquadratic, locally quadratic and
//! locally polyquadratic twist relations between representations of finite
//! groups, and between Weil polynomials of abelian varieties over finite fields.
//!
//! Everything is computed at the level of characters with exact cyclotomic
//! values. For semisimple representations over a field of characteristic zero
//! the character determines the representation up to isomorphism, so every
//! relation here is decided without explicit matrix models.

pub mod catalog;
pub mod chartab;
pub mod cyclo;
pub mod error;
pub mod groups;
pub mod twists;
pub mod weil;

pub use error::{Error, Result};
