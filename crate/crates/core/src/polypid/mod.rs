//! Polynomials in one variable, Laurent polynomials, and the normal forms
//! that drive everything above: Smith form over a Euclidean domain and
//! Birkhoff factorization of transition matrices on P¹.
//!
//! Chart conventions used across the crate: `t = x₁/x₀` is the coordinate on
//! chart 0, `s = x₀/x₁ = t⁻¹` on chart 1. A transition matrix `T` relates the
//! chart coordinates of a section by `f₀ = T f₁`; the line bundle `O(d)` has
//! transition `t^d`.

mod birkhoff;
mod euclid;
pub mod factor;
mod laurent;
mod poly;
mod smith;

pub use birkhoff::{birkhoff_factorize, is_unimodular, Birkhoff};
pub use euclid::Euclidean;
pub use laurent::Laurent;
pub use poly::Poly;
pub use smith::{smith_normal_form, Smith};

use crate::error::Result;
use crate::exactfield::Matrix;

pub type PolyMat = Matrix<Poly>;
pub type LaurentMat = Matrix<Laurent>;

/// Extended gcd `(g, s, t)` with `s·a + t·b = g`, `g` monic.
pub fn gcd_xgcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    a.xgcd(b)
}
