//! Exact rational arithmetic, divisor-class vectors, intersection lattices
//! and linear solving against negative definite Gram blocks.

mod divisor;
mod lattice;
pub(crate) mod linalg;
mod rat;

pub use divisor::{ceil_divisor, floor_divisor, frac_divisor, CurveEntry, CurveName, CurveRegistry, NamedDivisor};
pub use lattice::{ClassVector, IntersectionLattice};
pub use rat::Rat;
