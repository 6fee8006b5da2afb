//! Second order Darboux displacements of one-dimensional Schrödinger operators.
//!
//! The crate covers Weierstrass elliptic functions, a numerical Schrödinger
//! oracle, first and second order Darboux transformations, the displacement
//! invariance tests, and the two-soliton and Lamé families built on them.

pub mod branch;
pub mod darboux;
pub mod elliptic;
pub mod error;
pub mod invariance;
pub mod jet;
pub mod lame;
pub mod operator;
pub mod scalar;
pub mod settings;
pub mod soliton;
pub mod suite;

pub use error::{Error, Result};
pub use scalar::Real;
pub use settings::Settings;

/// Double precision complex number used by the physics layers.
pub type C64 = num_complex::Complex64;
/// Weierstrass lattice in double precision.
pub type Lattice = elliptic::Lattice<f64>;
/// Weierstrass lattice in single precision.
pub type Lattice32 = elliptic::Lattice<f32>;
/// Double precision Taylor jet.
pub type Jet = jet::Jet<f64>;
