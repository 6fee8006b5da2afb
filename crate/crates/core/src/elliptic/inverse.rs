use num_complex::Complex;

use super::lattice::Lattice;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which of the two preimages `±z` of ℘⁻¹ to return.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WpBranch<T: Real> {
    /// Coordinate along 2ω in [0, ½]; on a rectangular lattice Re z ∈ [0, ω].
    Canonical,
    /// ℘′(z) equal to the principal root of 4t³ − g₂t − g₃.
    PositiveDerivative,
    /// ℘′(z) equal to minus the principal root.
    NegativeDerivative,
    /// The preimage closest to a given point, modulo the lattice.
    Near(Complex<T>),
}

const GRID: usize = 16;
const MAX_NEWTON: usize = 80;

impl<T: Real> Lattice<T> {
    /// Solves ℘(z) = t.
    pub fn wp_inverse(&self, t: Complex<T>, branch: WpBranch<T>) -> Result<Complex<T>> {
        let z = self.wp_inverse_any(t)?;
        Ok(self.select_branch(t, z, branch))
    }

    fn wp_inverse_any(&self, t: Complex<T>) -> Result<Complex<T>> {
        let scale = T::one() + t.norm();
        let snap = T::epsilon() * T::lit(64.0) * scale;
        for (e, h) in [
            (self.e1, self.omega),
            (self.e2, self.omega + self.omega_prime),
            (self.e3, self.omega_prime),
        ] {
            if (t - e).norm() <= snap {
                return Ok(h);
            }
        }

        let two = T::lit(2.0);
        let mut seeds: Vec<(T, Complex<T>)> = Vec::with_capacity(GRID * GRID);
        for i in 0..GRID {
            for j in 0..GRID {
                let s = (T::from_usize(i).unwrap() + T::lit(0.5)) / T::from_usize(GRID).unwrap() - T::lit(0.5);
                let u = (T::from_usize(j).unwrap() + T::lit(0.5)) / T::from_usize(GRID).unwrap() - T::lit(0.5);
                let z = self.w1 * (two * s) + self.w2 * (two * u);
                if let Ok(w) = self.wp(z) {
                    seeds.push(((w - t).norm(), z));
                }
            }
        }
        seeds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        if t.norm() > T::one() {
            // near the pole ℘ ≈ z⁻²
            seeds.insert(0, (T::zero(), t.sqrt().inv()));
        }

        let tol = T::epsilon() * T::lit(256.0) * scale;
        let accept = T::lit(1e-10).max(tol) * scale;
        let max_step = self.w1.norm().min(self.w2.norm()) / T::lit(4.0);
        let mut best = (T::infinity(), Complex::new(T::zero(), T::zero()));
        for &(_, seed) in seeds.iter().take(6) {
            let mut z = seed;
            for _ in 0..MAX_NEWTON {
                let w = match self.wp(z) {
                    Ok(w) => w,
                    Err(_) => break,
                };
                let f = w - t;
                let r = f.norm();
                if r < best.0 {
                    best = (r, z);
                }
                if r <= tol {
                    return Ok(z);
                }
                let dw = match self.wp_prime(z) {
                    Ok(d) => d,
                    Err(_) => break,
                };
                let mut step = f / dw;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                if step.norm() > max_step {
                    step = step * (max_step / step.norm());
                }
                z = z - step;
                if step.norm() <= T::epsilon() * (T::one() + z.norm()) {
                    break;
                }
            }
            if best.0 <= accept {
                return Ok(best.1);
            }
        }
        if best.0 <= accept {
            Ok(best.1)
        } else {
            Err(Error::NoConvergence(best.0.to_f64().unwrap_or(f64::NAN)))
        }
    }

    fn select_branch(&self, t: Complex<T>, z: Complex<T>, branch: WpBranch<T>) -> Complex<T> {
        let a = self.reduce(z);
        let b = self.reduce(-z);
        match branch {
            WpBranch::Canonical => {
                let tiny = T::lit(1e-12);
                let (sa, ta) = self.coordinates(a);
                let on_edge = sa.abs() <= tiny || (sa - T::lit(0.5)).abs() <= tiny;
                let a_wins = if on_edge { ta >= -tiny } else { sa > T::zero() };
                if a_wins {
                    a
                } else {
                    b
                }
            }
            WpBranch::PositiveDerivative | WpBranch::NegativeDerivative => {
                let four = T::lit(4.0);
                let root = (t * t * t * four - self.g2 * t - self.g3).sqrt();
                let want = if branch == WpBranch::PositiveDerivative { root } else { -root };
                match self.wp_prime(a) {
                    Ok(d) if (d - want).norm() <= (d + want).norm() => a,
                    Ok(_) => b,
                    Err(_) => a,
                }
            }
            WpBranch::Near(p) => {
                let da = self.reduce(a - p).norm();
                let db = self.reduce(b - p).norm();
                let pick = if da <= db { a } else { b };
                p + self.reduce(pick - p)
            }
        }
    }
}
