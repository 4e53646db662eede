//! Points, matrices, symbol fields, the eigensolver and assumption checks.

pub mod eigh;
pub mod matrix;
pub mod point;
pub mod spectral;
pub mod symbol;
pub mod validate;

pub use eigh::{eigh, Eigh};
pub use matrix::{inner, vec_norm, CMatrix, HermitianMatrix, C64};
pub use point::{CovectorPoint, Geometry};
pub use spectral::{spectral_decompose, SpectralPoint, GAP_TOL};
pub use symbol::SymbolField;
pub use validate::{random_points, validate_assumptions, ValidationReport};
