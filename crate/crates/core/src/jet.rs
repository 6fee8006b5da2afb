//! Truncated Taylor series ("jets") about a point.
//!
//! Potentials expose jets so that derivatives up to fifth order and beyond
//! come out exactly, without finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Real;

/// Maximum number of stored coefficients.
pub const JET_LEN: usize = 16;

/// Taylor coefficients `c[k] = f^(k)(z0) / k!` for `k < len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T: Real> {
    c: [Complex<T>; JET_LEN],
    len: usize,
}

impl<T: Real> Jet<T> {
    pub fn from_coeffs(coeffs: &[Complex<T>]) -> Self {
        let len = coeffs.len().min(JET_LEN);
        let mut c = [Complex::zero(); JET_LEN];
        c[..len].copy_from_slice(&coeffs[..len]);
        Self { c, len }
    }

    pub fn constant(value: Complex<T>) -> Self {
        let mut c = [Complex::zero(); JET_LEN];
        c[0] = value;
        Self { c, len: JET_LEN }
    }

    /// The independent variable `z0 + t`.
    pub fn variable(z0: Complex<T>) -> Self {
        let mut j = Self::constant(z0);
        j.c[1] = Complex::new(T::one(), T::zero());
        j
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.c[..self.len]
    }

    pub fn coeff(&self, k: usize) -> Complex<T> {
        assert!(k < self.len, "jet coefficient {k} beyond valid length {}", self.len);
        self.c[k]
    }

    pub fn value(&self) -> Complex<T> {
        self.coeff(0)
    }

    /// k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> Complex<T> {
        let mut f = T::one();
        for i in 2..=k {
            f = f * T::from_usize(i).unwrap();
        }
        self.coeff(k) * f
    }

    /// Jet of the derivative; one coefficient shorter.
    pub fn deriv(&self) -> Self {
        let mut c = [Complex::zero(); JET_LEN];
        let len = self.len.saturating_sub(1);
        for k in 0..len {
            c[k] = self.c[k + 1] * T::from_usize(k + 1).unwrap();
        }
        Self { c, len }
    }

    /// Antiderivative with the given constant term; one coefficient longer.
    pub fn integrate(&self, c0: Complex<T>) -> Self {
        let mut c = [Complex::zero(); JET_LEN];
        c[0] = c0;
        let len = (self.len + 1).min(JET_LEN);
        for k in 1..len {
            c[k] = self.c[k - 1] / T::from_usize(k).unwrap();
        }
        Self { c, len }
    }

    /// Value of the truncated series at z₀ + h.
    pub fn eval_offset(&self, h: Complex<T>) -> Complex<T> {
        self.c[..self.len].iter().rev().fold(Complex::zero(), |acc, &c| acc * h + c)
    }

    /// The truncated series re-expanded about z₀ + h.
    pub fn recenter(&self, h: Complex<T>) -> Self {
        let mut c = self.c;
        // repeated synthetic division by (z − h)
        for k in 0..self.len {
            for j in (k..self.len - 1).rev() {
                c[j] = c[j] + c[j + 1] * h;
            }
        }
        Self { c, len: self.len }
    }

    pub fn truncate(mut self, len: usize) -> Self {
        self.len = self.len.min(len);
        self
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = *self;
        for k in 0..out.len {
            out.c[k] = out.c[k] * s;
        }
        out
    }

    pub fn recip(&self) -> Self {
        Self::constant(Complex::new(T::one(), T::zero())) / *self
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::constant(Complex::new(T::one(), T::zero())).truncate(self.len);
        for _ in 0..n {
            out = out * *self;
        }
        out
    }

    pub fn exp(&self) -> Self {
        let mut c = [Complex::zero(); JET_LEN];
        c[0] = self.c[0].exp();
        for k in 1..self.len {
            let mut s = Complex::zero();
            for j in 1..=k {
                s = s + self.c[j] * c[k - j] * T::from_usize(j).unwrap();
            }
            c[k] = s / T::from_usize(k).unwrap();
        }
        Self { c, len: self.len }
    }

    pub fn cosh(&self) -> Self {
        let e = self.exp();
        let em = (-*self).exp();
        (e + em).scale(Complex::new(T::lit(0.5), T::zero()))
    }

    pub fn sinh(&self) -> Self {
        let e = self.exp();
        let em = (-*self).exp();
        (e - em).scale(Complex::new(T::lit(0.5), T::zero()))
    }

    /// tanh through e^{∓2z}, so tail coefficients keep relative accuracy.
    pub fn tanh(&self) -> Self {
        let one = Self::constant(Complex::new(T::one(), T::zero()));
        let two = Complex::new(T::lit(2.0), T::zero());
        if self.c[0].re >= T::zero() {
            let t = self.scale(-two).exp();
            (one - t) / (one + t)
        } else {
            let t = self.scale(two).exp();
            (t - one) / (t + one)
        }
    }

    /// sech = 2e^{∓z}/(1 + e^{∓2z}).
    pub fn sech(&self) -> Self {
        let one = Self::constant(Complex::new(T::one(), T::zero()));
        let two = Complex::new(T::lit(2.0), T::zero());
        let e = if self.c[0].re >= T::zero() { (-*self).exp() } else { self.exp() };
        e.scale(two) / (e * e + one)
    }

    /// Series quotient that tolerates a common zero of numerator and
    /// denominator at the expansion point. Leading denominator coefficients
    /// with modulus below `tol` times its largest coefficient are treated as
    /// zero; the result loses one coefficient per cancelled order.
    pub fn div_cancel(&self, den: &Self, tol: T) -> Self {
        let n = self.len.min(den.len);
        let scale = den.c[..n].iter().map(|c| c.norm()).fold(T::zero(), T::max);
        let mut shift = 0;
        while shift + 1 < n && den.c[shift].norm() <= tol * scale {
            shift += 1;
        }
        if shift == 0 {
            return *self / *den;
        }
        let num = Self::from_coeffs(&self.c[shift..n]);
        let d = Self::from_coeffs(&den.c[shift..n]);
        num / d
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let len = self.len.min(rhs.len);
        let mut c = [Complex::zero(); JET_LEN];
        for k in 0..len {
            c[k] = self.c[k] + rhs.c[k];
        }
        Self { c, len }
    }
}

impl<T: Real> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = self;
        for k in 0..out.len {
            out.c[k] = -out.c[k];
        }
        out
    }
}

impl<T: Real> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let len = self.len.min(rhs.len);
        let mut c = [Complex::zero(); JET_LEN];
        for k in 0..len {
            let mut s = Complex::zero();
            for i in 0..=k {
                s = s + self.c[i] * rhs.c[k - i];
            }
            c[k] = s;
        }
        Self { c, len }
    }
}

impl<T: Real> Div for Jet<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let len = self.len.min(rhs.len);
        let mut c = [Complex::zero(); JET_LEN];
        for k in 0..len {
            let mut s = self.c[k];
            for j in 1..=k {
                s = s - rhs.c[j] * c[k - j];
            }
            c[k] = s / rhs.c[0];
        }
        Self { c, len }
    }
}

impl<T: Real> Add<Complex<T>> for Jet<T> {
    type Output = Self;
    fn add(mut self, rhs: Complex<T>) -> Self {
        self.c[0] = self.c[0] + rhs;
        self
    }
}

impl<T: Real> Sub<Complex<T>> for Jet<T> {
    type Output = Self;
    fn sub(mut self, rhs: Complex<T>) -> Self {
        self.c[0] = self.c[0] - rhs;
        self
    }
}

impl<T: Real> Mul<Complex<T>> for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: Complex<T>) -> Self {
        self.scale(rhs)
    }
}

impl<T: Real> Mul<T> for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        self.scale(Complex::new(rhs, T::zero()))
    }
}
