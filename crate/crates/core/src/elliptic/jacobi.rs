use super::lattice::Lattice;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Parameter `m = (e₂−e₃)/(e₁−e₃)` and `scale = √(e₁−e₃)` of the substitution
/// `℘(z) = e₃ + (e₁−e₃)/sn²(√(e₁−e₃)·z, m)`.
pub fn jacobi_bridge<T: Real>(lattice: &Lattice<T>) -> Result<(T, T)> {
    let (e1, e2, e3) = real_roots(lattice)?;
    let m = (e2 - e3) / (e1 - e3);
    Ok((m, (e1 - e3).sqrt()))
}

/// The roots as ordered reals `e₁ > e₂ > e₃`, or an error for a non-rectangular lattice.
pub fn real_roots<T: Real>(lattice: &Lattice<T>) -> Result<(T, T, T)> {
    let big = lattice.e1.norm().max(lattice.e2.norm()).max(lattice.e3.norm());
    let tol = T::lit(1e-8) * big.max(T::one());
    let ok = [lattice.e1, lattice.e2, lattice.e3].iter().all(|e| e.im.abs() <= tol);
    let (e1, e2, e3) = (lattice.e1.re, lattice.e2.re, lattice.e3.re);
    if !ok || !(e3 < e2 && e2 < e1) {
        return Err(Error::NonRectangularLattice);
    }
    Ok((e1, e2, e3))
}
