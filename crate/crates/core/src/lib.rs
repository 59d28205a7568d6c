//! Exact-arithmetic certification of Zariski density of rational points on
//! del Pezzo surfaces of degree 1 of the shape
//! `y^2 = x^3 + a z^6 + b z^3 w^3 + c w^6` in weighted projective space
//! P(2,3,1,1), together with the 3-section construction that witnesses the
//! density: classification of the cutting curve through a base point, its
//! genus-one Jacobian model, a certified non-torsion point on it, and
//! rational points pushed back to infinitely many distinct fibers.
//!
//! Everything is exact: arbitrary-precision rationals, the quadratic field
//! generated by a cube root of unity, and polynomial arithmetic. There is
//! no floating point anywhere, so all certificate data is bit-reproducible.

pub mod algebra;
pub mod certificate;
pub mod error;
pub mod fiber;
pub mod jacobian;
pub mod multisection;
pub mod surface;

pub use error::Error;
