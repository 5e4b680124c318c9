//! Exact stable bases for the K-theory of Hilbert schemes of points in the
//! plane, their wall-crossing matrices, and the Leclerc-Thibon involution on
//! the level-one q-Fock space.

pub mod combin;
pub mod exact;
pub mod fock;
pub mod keyed;
pub mod linalg;
pub mod stable;
pub mod symfunc;
pub mod verify;

pub use combin::Partition;

pub type Rational = num_rational::BigRational;
pub type LaurentPoly = exact::Laurent<Rational>;
pub type Scalar = exact::RatFunc<Rational>;
