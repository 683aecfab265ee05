//! Exact computation of closure and interior operations over truncations
//! of complete local rings in positive characteristic.

pub mod algebra;
pub mod artinistic;
pub mod closures;
pub mod corehull;
pub mod duality;
pub mod error;
pub mod family;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod semigroups;

pub use algebra::{Algebra, Caps, ModelKind, Module, Precision, RIdeal, RingModel, Submodule, Truncation};
pub use closures::{Closure, RingClosure};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec};
pub use lattice::Lattice;
pub use linalg::{Subspace, Vector};
pub use poly::{Mono, Poly};
pub use semigroups::{NumericalSemigroup, SemigroupIdeal};
