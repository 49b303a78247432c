//! Exact symbolic computation for connective K-theory classes of degeneracy
//! loci in the four classical types: determinant, Pfaffian, raising-operator,
//! and theta/eta polynomial constructors over a multi-channel formal layer,
//! together with a Chern-root localization oracle that re-derives the same
//! classes geometrically.

pub mod error;
pub mod fgl;
pub mod fraction;
pub mod poly;
pub mod raising;
pub mod rat;
pub mod series;
pub mod triples;

pub use error::{CoreError, Result};
pub use rat::{binom_gen, Rat};
