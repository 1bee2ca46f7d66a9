//! Fock spaces `V_{beta+L} = M(1) (x) C{beta+L}` with exact coefficients.

mod basis;
mod pairing;
mod vector;

pub use basis::{BasisLabel, FormKind, IntegralBasis};
pub use vector::{FockMonomial, FockSpace, FockVector, Weight};
