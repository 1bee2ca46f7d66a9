pub mod affine_sl2;
pub mod error;
pub mod fock;
pub mod intmat;
pub mod json;
pub mod lattice;
pub mod scalars;
pub mod series;
pub mod symfunc;
pub mod vertexops;

pub use error::{Error, Result};
pub use lattice::{CosetLabel, DualVector, EvenLattice};
pub use scalars::{Cyclotomic, CyclotomicField, Rational};
