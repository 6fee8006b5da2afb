use num_complex::Complex;
use num_traits::Zero;

use super::theta::{theta1_third_ratio, theta_values};
use crate::error::{Error, Result};
use crate::scalar::{imag_unit, real, Real};

/// Period lattice `2ωm + 2ω′n` of the Weierstrass functions.
///
/// Evaluation runs on a Gauss-reduced basis `(w1, w2)` so that the theta
/// nome stays small even for very elongated lattices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice<T: Real> {
    pub omega: Complex<T>,
    pub omega_prime: Complex<T>,
    pub g2: Complex<T>,
    pub g3: Complex<T>,
    pub e1: Complex<T>,
    pub e2: Complex<T>,
    pub e3: Complex<T>,
    /// ζ(ω)
    pub eta: Complex<T>,
    /// ζ(ω′)
    pub eta_prime: Complex<T>,
    pub(crate) w1: Complex<T>,
    pub(crate) w2: Complex<T>,
    pub(crate) eta1: Complex<T>,
    pub(crate) eta2: Complex<T>,
    pub(crate) tau: Complex<T>,
    /// θ₂θ₃θ₄ at zero, equal to θ₁′(0).
    pub(crate) theta_prod: Complex<T>,
    /// θ₃θ₄ at zero.
    pub(crate) theta34: Complex<T>,
    /// ℘(w1).
    pub(crate) er1: Complex<T>,
    pub(crate) pole_guard: T,
}

/// Real coordinates of `z` in the basis `(a, b)`.
pub(crate) fn coords<T: Real>(z: Complex<T>, a: Complex<T>, b: Complex<T>) -> (T, T) {
    let det = a.re * b.im - a.im * b.re;
    let s = (z.re * b.im - z.im * b.re) / det;
    let t = (a.re * z.im - a.im * z.re) / det;
    (s, t)
}

fn round_int<T: Real>(x: T) -> i64 {
    x.round().to_i64().expect("finite coordinate")
}

impl<T: Real> Lattice<T> {
    pub fn from_half_periods(omega: Complex<T>, omega_prime: Complex<T>) -> Result<Self> {
        let ratio = omega_prime / omega;
        let finite = omega.re.is_finite()
            && omega.im.is_finite()
            && omega_prime.re.is_finite()
            && omega_prime.im.is_finite();
        if !finite || !(ratio.im > T::epsilon().sqrt()) {
            return Err(Error::DegenerateLattice(ratio.im.to_f64().unwrap_or(f64::NAN)));
        }

        let (mut w1, mut w2) = (omega, omega_prime);
        for _ in 0..200 {
            let tau = w2 / w1;
            let n = tau.re.round();
            w2 = w2 - w1 * n;
            if (w2 / w1).norm() < T::one() - T::epsilon() * T::lit(16.0) {
                let t = w1;
                w1 = w2;
                w2 = -t;
            } else {
                break;
            }
        }
        let tau = w2 / w1;

        let th = theta_values(tau, Complex::zero());
        let c = Complex::new(T::PI(), T::zero()) / (w1 * T::lit(2.0));
        let c2 = c * c / T::lit(3.0);
        let (t2, t3, t4) = (th.t2.powi(4), th.t3.powi(4), th.t4.powi(4));
        let er1 = c2 * (t3 + t4);
        let er2 = c2 * (t2 - t4);
        let er3 = -c2 * (t2 + t3);

        let eta1 = -(c * c) * w1 / T::lit(3.0) * theta1_third_ratio(tau);
        let half_pi_i = imag_unit::<T>() * (T::PI() / T::lit(2.0));
        let eta2 = (eta1 * w2 - half_pi_i) / w1;

        let lookup = |h: Complex<T>| -> (Complex<T>, Complex<T>) {
            let (s, t) = coords(h, w1, w2);
            let (m, n) = (round_int(s), round_int(t));
            let zeta = eta1 * T::from_i64(m).unwrap() + eta2 * T::from_i64(n).unwrap();
            let e = match (m.rem_euclid(2), n.rem_euclid(2)) {
                (1, 0) => er1,
                (1, 1) => er2,
                _ => er3,
            };
            (e, zeta)
        };
        let (e1, eta) = lookup(omega);
        let (e3, eta_prime) = lookup(omega_prime);
        let (e2, _) = lookup(omega + omega_prime);

        let g2 = (e1 * e1 + e2 * e2 + e3 * e3) * T::lit(2.0);
        let g3 = e1 * e2 * e3 * T::lit(4.0);

        Ok(Self {
            omega,
            omega_prime,
            g2,
            g3,
            e1,
            e2,
            e3,
            eta,
            eta_prime,
            w1,
            w2,
            eta1,
            eta2,
            tau,
            theta_prod: th.t2 * th.t3 * th.t4,
            theta34: th.t3 * th.t4,
            er1,
            pole_guard: T::lit(1e-12),
        })
    }

    /// Rectangular lattice with real `omega` and `omega_prime = i·omega_prime_im`.
    pub fn rectangular(omega: T, omega_prime_im: T) -> Result<Self> {
        Self::from_half_periods(real(omega), Complex::new(T::zero(), omega_prime_im))
    }

    pub fn with_pole_guard(mut self, guard: T) -> Self {
        self.pole_guard = guard;
        self
    }

    pub fn pole_guard(&self) -> T {
        self.pole_guard
    }

    /// Real periods of a rectangular lattice: `2ω`.
    pub fn real_period(&self) -> T {
        self.omega.re * T::lit(2.0)
    }

    /// Coordinates of `z` with respect to `(2ω, 2ω′)`.
    pub fn coordinates(&self, z: Complex<T>) -> (T, T) {
        let two = T::lit(2.0);
        coords(z, self.omega * two, self.omega_prime * two)
    }

    /// The representative of `z` modulo the lattice with both coordinates in (−½, ½].
    pub fn reduce(&self, z: Complex<T>) -> Complex<T> {
        let (s, t) = self.coordinates(z);
        let shift = |x: T| -> T {
            let r = x - x.round();
            let half = T::lit(0.5);
            if r <= -half + T::epsilon() * T::lit(64.0) {
                r + T::one()
            } else {
                r
            }
        };
        let (rs, rt) = (shift(s), shift(t));
        let two = T::lit(2.0);
        self.omega * (two * rs) + self.omega_prime * (two * rt)
    }

    /// `true` if `z` is a lattice point up to the pole guard.
    pub fn is_lattice_point(&self, z: Complex<T>) -> bool {
        self.reduce_to_cell(z).0.norm() < self.pole_guard
    }

    /// Argument reduction on the reduced basis: `z = z0 + 2m·w1 + 2n·w2`.
    pub(crate) fn reduce_to_cell(&self, z: Complex<T>) -> (Complex<T>, i64, i64) {
        let two = T::lit(2.0);
        let (s, t) = coords(z, self.w1 * two, self.w2 * two);
        let (m, n) = (round_int(s), round_int(t));
        let z0 = z - self.w1 * (two * T::from_i64(m).unwrap()) - self.w2 * (two * T::from_i64(n).unwrap());
        (z0, m, n)
    }
}
