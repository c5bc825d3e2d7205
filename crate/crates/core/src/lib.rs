//! Drinfeld-style arithmetic over real quadratic function fields: fundamental
//! units, approximation lattices, ideal classes, lattice zeta values and the
//! j-invariant of Drinfeld modules of rank 2.

pub mod algrec;
pub mod classnum;
pub mod cli;
pub mod error;
pub mod field;
pub mod ideals;
pub mod jinv;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod quadunit;
pub mod zeta;

pub use error::{Error, Result};
pub use field::{Fe, Field};
pub use laurent::{AbsVal, Laurent};
pub use poly::Poly;
pub use quadunit::QuadUnit;
