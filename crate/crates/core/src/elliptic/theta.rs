//! Jacobi theta series in the nome `q = exp(iπτ)`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{imag_unit, Real};

const MAX_TERMS: usize = 60;

/// Theta values at an argument `v`, with the derivative of θ₁.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ThetaValues<T: Real> {
    pub t1: Complex<T>,
    pub t1p: Complex<T>,
    pub t2: Complex<T>,
    pub t3: Complex<T>,
    pub t4: Complex<T>,
}

/// `exp(iπτ·k)` for real `k`.
fn nome_power<T: Real>(tau: Complex<T>, k: T) -> Complex<T> {
    (imag_unit::<T>() * tau * (T::PI() * k)).exp()
}

pub(crate) fn theta_values<T: Real>(tau: Complex<T>, v: Complex<T>) -> ThetaValues<T> {
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let eps = T::epsilon();
    let mut t1 = Complex::zero();
    let mut t1p = Complex::zero();
    let mut t2 = Complex::zero();
    for n in 0..MAX_TERMS {
        let nf = T::from_usize(n).unwrap();
        let k = two * nf + T::one();
        let qn = nome_power(tau, (nf + half) * (nf + half));
        let arg = v * k;
        let (s, c) = (arg.sin(), arg.cos());
        let sign = if n % 2 == 0 { T::one() } else { -T::one() };
        let d1 = qn * s * sign;
        let d1p = qn * c * (sign * k);
        let d2 = qn * c;
        t1 = t1 + d1;
        t1p = t1p + d1p;
        t2 = t2 + d2;
        let small = |d: Complex<T>, acc: Complex<T>| d.norm() <= eps * acc.norm();
        if n > 0 && small(d1, t1) && small(d1p, t1p) && small(d2, t2) {
            break;
        }
    }
    let mut t3: Complex<T> = Complex::one();
    let mut t4: Complex<T> = Complex::one();
    for n in 1..MAX_TERMS {
        let nf = T::from_usize(n).unwrap();
        let qn = nome_power(tau, nf * nf);
        let c = (v * (two * nf)).cos() * qn;
        t3 = t3 + c * two;
        let sign = if n % 2 == 0 { T::one() } else { -T::one() };
        t4 = t4 + c * (two * sign);
        if c.norm() * two <= eps * t3.norm().min(t4.norm()) {
            break;
        }
    }
    ThetaValues {
        t1: t1 * two,
        t1p: t1p * two,
        t2: t2 * two,
        t3,
        t4,
    }
}

/// θ₁‴(0)/θ₁′(0).
pub(crate) fn theta1_third_ratio<T: Real>(tau: Complex<T>) -> Complex<T> {
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let mut num = Complex::zero();
    let mut den = Complex::zero();
    for n in 0..MAX_TERMS {
        let nf = T::from_usize(n).unwrap();
        let k = two * nf + T::one();
        let sign = if n % 2 == 0 { T::one() } else { -T::one() };
        let qn = nome_power(tau, (nf + half) * (nf + half)) * sign;
        let dn = qn * k;
        let nn = qn * (-k * k * k);
        num = num + nn;
        den = den + dn;
        if n > 0 && nn.norm() <= T::epsilon() * num.norm() {
            break;
        }
    }
    num / den
}
