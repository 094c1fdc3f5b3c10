//! Arithmetic substrate: `Z/p^M` scalars and polynomials, linear algebra
//! over `Z/p^M`, discrete logarithms in `F_N^x`, Newton polygons and Hensel
//! lifting.
//!
//! Everything here is a pure function of immutable inputs.

pub mod arith;
pub mod charpoly;
pub mod dlog;
pub mod hensel;
pub mod howell;
pub mod matrix;
pub mod newton;
pub mod poly;
pub mod zmod;

pub use charpoly::{berkowitz_charpoly, hessenberg_charpoly};
pub use dlog::{build_dlog_table, is_power, DlogTable};
pub use hensel::hensel_split_distinguished;
pub use howell::{howell_membership, kernel_generators, HowellForm};
pub use matrix::ZMatrix;
pub use newton::{lower_convex_hull, t_sequence, NewtonPolygon};
pub use poly::PadicPoly;
pub use zmod::{valuation_p, CappedValuation, Modulus, Valuation, ZmodElem};
