#![allow(dead_code)]

use darboux::C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng() -> StdRng {
    StdRng::seed_from_u64(0x5eed_d15b)
}

/// Uniform point in the period cell spanned by 2ω, 2ω′, away from lattice points.
pub fn cell_point(rng: &mut StdRng, omega: C64, omega_prime: C64) -> C64 {
    loop {
        let s: f64 = rng.gen_range(-0.5..0.5);
        let t: f64 = rng.gen_range(-0.5..0.5);
        if s.hypot(t) > 0.05 {
            return omega * (2.0 * s) + omega_prime * (2.0 * t);
        }
    }
}

/// Lattice points with trapezoid weights on the boundary of the truncation
/// square, so the truncation error is a clean power series in 1/n.
fn lattice_points(omega: C64, omega_prime: C64, n: i64) -> impl Iterator<Item = (f64, C64)> {
    let w = move |k: i64| if k.abs() == n { 0.5 } else { 1.0 };
    (-n..=n).flat_map(move |i| {
        (-n..=n).filter_map(move |j| {
            if i == 0 && j == 0 {
                None
            } else {
                Some((w(i) * w(j), omega * (2.0 * i as f64) + omega_prime * (2.0 * j as f64)))
            }
        })
    })
}

/// Brute force Eisenstein sums g₂ = 60Σ′Ω⁻⁴, g₃ = 140Σ′Ω⁻⁶ over |m|,|n| ≤ n.
pub fn eisenstein(omega: C64, omega_prime: C64, n: i64) -> (C64, C64) {
    let mut s4 = C64::new(0.0, 0.0);
    let mut s6 = C64::new(0.0, 0.0);
    for (k, w) in lattice_points(omega, omega_prime, n) {
        let w2 = w * w;
        s4 += (w2 * w2).inv() * k;
        s6 += (w2 * w2 * w2).inv() * k;
    }
    (s4 * 60.0, s6 * 140.0)
}

/// Eisenstein sums at |m|,|n| ≤ 200 with the O(N⁻²) square-truncation tail
/// removed by Richardson extrapolation against the N = 100 sum.
pub fn eisenstein_extrapolated(omega: C64, omega_prime: C64) -> (C64, C64) {
    let (a4, a6) = eisenstein(omega, omega_prime, 200);
    let (b4, b6) = eisenstein(omega, omega_prime, 100);
    ((a4 * 4.0 - b4) / 3.0, (a6 * 4.0 - b6) / 3.0)
}

/// ℘(z) = z⁻² + Σ′[(z−Ω)⁻² − Ω⁻²] over |m|,|n| ≤ n.
pub fn wp_lattice_sum(z: C64, omega: C64, omega_prime: C64, n: i64) -> C64 {
    let mut s = (z * z).inv();
    for (k, w) in lattice_points(omega, omega_prime, n) {
        s += (((z - w) * (z - w)).inv() - (w * w).inv()) * k;
    }
    s
}

pub fn wp_lattice_sum_extrapolated(z: C64, omega: C64, omega_prime: C64) -> C64 {
    let a = wp_lattice_sum(z, omega, omega_prime, 200);
    let b = wp_lattice_sum(z, omega, omega_prime, 100);
    (a * 4.0 - b) / 3.0
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Sixth order central first derivative.
pub fn fd1<F: Fn(f64) -> C64>(f: F, x: f64, h: f64) -> C64 {
    (f(x + 3.0 * h) - f(x - 3.0 * h) - (f(x + 2.0 * h) - f(x - 2.0 * h)) * 9.0 + (f(x + h) - f(x - h)) * 45.0)
        / (60.0 * h)
}

/// Sixth order central first derivative along a complex direction.
pub fn fd1_complex<F: Fn(C64) -> C64>(f: F, z: C64, h: f64) -> C64 {
    fd1(|t| f(z + t), 0.0, h)
}

/// coef·℘(x + ω′) with jets, period 2ω, even.
pub fn wp_potential(lat: &darboux::Lattice, coef: f64) -> darboux::operator::Potential {
    let l = *lat;
    let shift = lat.omega_prime;
    darboux::operator::Potential::from_jet(format!("{coef}wp"), move |z| Ok(l.wp_jet(z + shift)? * C64::new(coef, 0.0)))
        .with_period(lat.real_period())
        .with_even(true)
}

/// coef·sech²x with jets, even.
pub fn sech2_potential(coef: f64) -> darboux::operator::Potential {
    darboux::operator::Potential::from_jet(format!("{coef}sech^2"), move |z| {
        let ch = darboux::Jet::variable(z).cosh();
        Ok((ch * ch).recip() * C64::new(coef, 0.0))
    })
    .with_even(true)
}

pub fn sech(z: C64) -> C64 {
    z.cosh().inv()
}

pub fn csch(z: C64) -> C64 {
    z.sinh().inv()
}

/// ζ(h) = 1/h − ∫₀ʰ (℘(t) − 1/t²) dt by Simpson's rule on the straight
/// path; independent of the stored η constants.
pub fn zeta_by_quadrature(l: &darboux::Lattice, h: C64) -> C64 {
    let n = 4000;
    let f = |k: usize| {
        if k == 0 {
            return c(0.0, 0.0);
        }
        let t = h * (k as f64 / n as f64);
        l.wp(t).unwrap() - (t * t).inv()
    };
    let mut acc = f(0) + f(n);
    for k in 1..n {
        acc += f(k) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    h.inv() - acc * h / (3.0 * n as f64)
}
