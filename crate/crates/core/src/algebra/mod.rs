//! Exact arithmetic foundation: rationals, the cube-root-of-unity field,
//! polynomials, resultants, rational roots, local power series, and small
//! exact linear algebra.

pub mod bipoly;
pub mod eis;
pub mod field;
pub mod intutil;
pub mod linalg;
pub mod poly;
pub mod rat;
pub mod roots;
pub mod series;

pub use bipoly::{resultant, resultant_of_univariate, BiPoly, Var};
pub use eis::{eis_conjugate_sum, Eis};
pub use field::{Field, Ring};
pub use poly::Poly;
pub use rat::Rat;
pub use roots::rational_roots;
pub use series::{curve_branch, local_expansion, LaurentSeries};
