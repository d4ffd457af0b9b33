//! Exact computation of Eilenberg-Watts sheaves and transformations for
//! functors from quasi-coherent sheaves on the projective line to vector
//! spaces.
//!
//! The layers build on each other:
//!
//! * [`exactfield`]: scalars over ℚ or GF(p), dense matrices, row reduction.
//! * [`polypid`]: polynomials, Laurent polynomials, Smith normal form and
//!   Birkhoff factorization of transition matrices.
//! * [`modpid`]: finitely presented modules over the chart rings.
//! * [`sheafp1`]: coherent sheaves on P¹ glued from two charts, Čech
//!   cohomology, splitting types, flat presentations.
//! * [`functors`]: the functor atom calculus, the Watts sheaf `W(F)`, the
//!   transformation `Γ_F` and the classification of totally global functors.
//! * [`cli`]: the job language behind the `ewatts` binary.

pub mod cli;
pub mod error;
pub mod exactfield;
pub mod functors;
pub mod modpid;
pub mod polypid;
pub mod random;
pub mod sheafp1;

pub use error::{Error, Result};
pub use exactfield::{Field, Mat, Scalar};
