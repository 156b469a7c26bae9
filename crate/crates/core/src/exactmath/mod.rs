//! Exact residues, cyclotomic numbers and number-theory helpers.

pub mod cyclo;
pub mod matrix;
pub mod ntheory;
pub mod residue;

pub use cyclo::{cyc, sqrt_int, CycNum};
pub use matrix::CycMatrix;
pub use ntheory::{factorize, inv_mod, kronecker};
pub use residue::{ResidueQ2Z, ResidueQZ};
