//! Weierstrass elliptic functions on generic complex lattices.
//!
//! ℘, ℘′, ζ and σ are evaluated through Jacobi theta series on a
//! Gauss-reduced basis, after reducing the argument to the period cell.

mod inverse;
mod jacobi;
mod lattice;
mod theta;
mod weierstrass;

pub use inverse::WpBranch;
pub use jacobi::{jacobi_bridge, real_roots};
pub use lattice::Lattice;

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::Real;

pub fn lattice_from_half_periods<T: Real>(omega: Complex<T>, omega_prime: Complex<T>) -> Result<Lattice<T>> {
    Lattice::from_half_periods(omega, omega_prime)
}

pub fn wp<T: Real>(z: Complex<T>, lattice: &Lattice<T>) -> Result<Complex<T>> {
    lattice.wp(z)
}

pub fn wp_prime<T: Real>(z: Complex<T>, lattice: &Lattice<T>) -> Result<Complex<T>> {
    lattice.wp_prime(z)
}

pub fn zeta<T: Real>(z: Complex<T>, lattice: &Lattice<T>) -> Result<Complex<T>> {
    lattice.zeta(z)
}

pub fn sigma<T: Real>(z: Complex<T>, lattice: &Lattice<T>) -> Complex<T> {
    lattice.sigma(z)
}

pub fn wp_inverse<T: Real>(t: Complex<T>, lattice: &Lattice<T>, branch: WpBranch<T>) -> Result<Complex<T>> {
    lattice.wp_inverse(t, branch)
}
