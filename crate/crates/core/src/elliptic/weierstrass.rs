use num_complex::Complex;

use super::lattice::Lattice;
use super::theta::{theta_values, ThetaValues};
use crate::error::{Error, Result};
use crate::jet::{Jet, JET_LEN};
use crate::scalar::{imag_unit, Real};

struct Reduced<T: Real> {
    z0: Complex<T>,
    m: i64,
    n: i64,
    th: ThetaValues<T>,
    /// π/(2w1)
    c: Complex<T>,
}

impl<T: Real> Lattice<T> {
    fn reduced(&self, z: Complex<T>) -> Reduced<T> {
        let (z0, m, n) = self.reduce_to_cell(z);
        let c = Complex::new(T::PI(), T::zero()) / (self.w1 * T::lit(2.0));
        let th = theta_values(self.tau, z0 * c);
        Reduced { z0, m, n, th, c }
    }

    fn guard(&self, z: Complex<T>, r: &Reduced<T>) -> Result<()> {
        if r.z0.norm() < self.pole_guard {
            return Err(Error::Pole {
                re: z.re.to_f64().unwrap_or(f64::NAN),
                im: z.im.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    fn eta_of(&self, m: i64, n: i64) -> Complex<T> {
        self.eta1 * T::from_i64(m).unwrap() + self.eta2 * T::from_i64(n).unwrap()
    }

    fn wp_reduced(&self, r: &Reduced<T>) -> Complex<T> {
        let f = r.c * self.theta34 * r.th.t2 / r.th.t1;
        self.er1 + f * f
    }

    /// Weierstrass ℘.
    pub fn wp(&self, z: Complex<T>) -> Result<Complex<T>> {
        let r = self.reduced(z);
        self.guard(z, &r)?;
        Ok(self.wp_reduced(&r))
    }

    /// ℘′.
    pub fn wp_prime(&self, z: Complex<T>) -> Result<Complex<T>> {
        let r = self.reduced(z);
        self.guard(z, &r)?;
        let p = self.theta_prod;
        let c3 = r.c * r.c * r.c;
        Ok(-(c3 * p * p * r.th.t2 * r.th.t3 * r.th.t4) * T::lit(2.0) / r.th.t1.powi(3))
    }

    /// ζ with ζ′ = −℘.
    pub fn zeta(&self, z: Complex<T>) -> Result<Complex<T>> {
        let r = self.reduced(z);
        self.guard(z, &r)?;
        let z0 = self.eta1 * r.z0 / self.w1 + r.c * r.th.t1p / r.th.t1;
        Ok(z0 + self.eta_of(r.m, r.n) * T::lit(2.0))
    }

    /// Weierstrass σ; entire, no pole guard.
    pub fn sigma(&self, z: Complex<T>) -> Complex<T> {
        let r = self.reduced(z);
        let (pre, sign) = self.sigma_factor(&r);
        let s0 = (self.eta1 * r.z0 * r.z0 / (self.w1 * T::lit(2.0))).exp() * r.th.t1 / (r.c * self.theta_prod);
        pre * s0 * sign
    }

    /// σ′ = σζ, finite at lattice points.
    pub fn sigma_prime(&self, z: Complex<T>) -> Complex<T> {
        let r = self.reduced(z);
        let (pre, sign) = self.sigma_factor(&r);
        let g = (self.eta1 * r.z0 * r.z0 / (self.w1 * T::lit(2.0))).exp() / (r.c * self.theta_prod);
        let s0 = g * r.th.t1;
        let ds0 = g * (self.eta1 * r.z0 / self.w1 * r.th.t1 + r.c * r.th.t1p);
        let eta_p = self.eta_of(r.m, r.n);
        pre * (ds0 + s0 * eta_p * T::lit(2.0)) * sign
    }

    /// A logarithm of σ(z); the branch is not continuous in z.
    pub fn ln_sigma(&self, z: Complex<T>) -> Complex<T> {
        let r = self.reduced(z);
        let s0 = (self.eta1 * r.z0 * r.z0 / (self.w1 * T::lit(2.0))) + (r.th.t1 / (r.c * self.theta_prod)).ln();
        let (lnpre, flip) = self.ln_sigma_factor(&r);
        let pi_i = imag_unit::<T>() * T::PI();
        s0 + lnpre + if flip { pi_i } else { Complex::new(T::zero(), T::zero()) }
    }

    fn ln_sigma_factor(&self, r: &Reduced<T>) -> (Complex<T>, bool) {
        let (m, n) = (r.m, r.n);
        let two = T::lit(2.0);
        let p = self.w1 * T::from_i64(m).unwrap() + self.w2 * T::from_i64(n).unwrap();
        let eta_p = self.eta_of(m, n);
        let flip = (m + n + m * n).rem_euclid(2) == 1;
        (eta_p * two * (r.z0 + p), flip)
    }

    fn sigma_factor(&self, r: &Reduced<T>) -> (Complex<T>, T) {
        let (ln, flip) = self.ln_sigma_factor(r);
        (ln.exp(), if flip { -T::one() } else { T::one() })
    }

    /// Taylor jet of ℘ about `z`, from ℘″ = 6℘² − g₂/2.
    pub fn wp_jet(&self, z: Complex<T>) -> Result<Jet<T>> {
        let mut c = [Complex::new(T::zero(), T::zero()); JET_LEN];
        c[0] = self.wp(z)?;
        c[1] = self.wp_prime(z)?;
        for k in 0..JET_LEN - 2 {
            let mut s = Complex::new(T::zero(), T::zero());
            for i in 0..=k {
                s = s + c[i] * c[k - i];
            }
            s = s * T::lit(6.0);
            if k == 0 {
                s = s - self.g2 / T::lit(2.0);
            }
            c[k + 2] = s / T::from_usize((k + 2) * (k + 1)).unwrap();
        }
        Ok(Jet::from_coeffs(&c))
    }

    /// Taylor jet of ζ about `z`.
    pub fn zeta_jet(&self, z: Complex<T>) -> Result<Jet<T>> {
        let w = self.wp_jet(z)?;
        Ok((-w).integrate(self.zeta(z)?))
    }
}
