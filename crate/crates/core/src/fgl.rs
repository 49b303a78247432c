//! Multiplicative formal group law with parameter `b`.
//!
//! First Chern classes of line bundles add through `x (+) y = x + y + b x y`;
//! the inverse (the class of the dual bundle) is `-x / (1 + b x)`, expanded to
//! a root-degree bound.

use crate::error::Result;
use crate::poly::ExactPoly;

/// `x (+) y = x + y + b x y`, exact (no truncation).
pub fn fgl_sum(x: &ExactPoly, y: &ExactPoly) -> Result<ExactPoly> {
    let b = ExactPoly::beta(x.vars())?;
    x.add(y)?.add(&b.mul(x)?.mul(y)?)
}

/// `(-) x = -x / (1 + b x)`, truncated at `max_root_degree`.
pub fn fgl_inverse(x: &ExactPoly, max_root_degree: i64) -> Result<ExactPoly> {
    let b = ExactPoly::beta(x.vars())?;
    let one = ExactPoly::one(x.vars());
    let den = one.add(&b.mul(x)?)?;
    let inv = den.series_inverse(max_root_degree)?;
    Ok(x.neg().mul(&inv)?.truncate(max_root_degree))
}
