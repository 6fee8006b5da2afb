//! Bloch solutions of the Lamé equation at the constants of a displacement.
//!
//! Each solution has the product form σ(z−α)σ(z−β)/σ²(z+ω′)·e^{cz}, which is
//! single valued; the half-integer powers of the quotient representation
//! cancel once the zeros of p are written as σ products.

use std::sync::Arc;

use super::{c, lame_displacement_pair};
use crate::branch::TrackedSqrt;
use crate::elliptic::WpBranch;
use crate::error::{Error, Result};
use crate::operator::SchrodingerSolution;
use crate::{Lattice, C64};

/// Zeros of p and the constant of its ζ decomposition
/// (a₁−a₂)/p = ½ζ(x−x₁) − ½ζ(x−x₂) + b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochQuadratureData {
    pub d: C64,
    /// ℘(d)
    pub wp0: C64,
    /// ℘(x₁+ω′) = −½℘₀ + ½√(g₂−3℘₀²)
    pub x1: C64,
    /// ℘(x₂+ω′) = −½℘₀ − ½√(g₂−3℘₀²)
    pub x2: C64,
    /// ½ζ(ω′−x₂) − ½ζ(ω′−x₁)
    pub b: C64,
    pub a1: C64,
    pub a2: C64,
    /// √(g₂−3℘₀²) = (a₁−a₂)/3
    pub root: C64,
}

impl BlochQuadratureData {
    /// p = 6[ζ(x+ω′+d) − ζ(x+ω′) − ζ(d)].
    pub fn p(&self, lattice: &Lattice, x: C64) -> Result<C64> {
        let w = lattice.omega_prime;
        Ok((lattice.zeta(x + w + self.d)? - lattice.zeta(x + w)? - lattice.zeta(self.d)?) * 6.0)
    }

    /// p′ = 6[℘(x+ω′) − ℘(x+ω′+d)].
    pub fn dp(&self, lattice: &Lattice, x: C64) -> Result<C64> {
        let w = lattice.omega_prime;
        Ok((lattice.wp(x + w)? - lattice.wp(x + w + self.d)?) * 6.0)
    }

    /// Residues of 1/p at x₁ and x₂, i.e. 1/p′ there.
    pub fn residues(&self, lattice: &Lattice) -> Result<(C64, C64)> {
        Ok((self.dp(lattice, self.x1)?.inv(), self.dp(lattice, self.x2)?.inv()))
    }

    /// ½ζ(x−x₁) − ½ζ(x−x₂) + b.
    pub fn zeta_decomposition(&self, lattice: &Lattice, x: C64) -> Result<C64> {
        Ok((lattice.zeta(x - self.x1)? - lattice.zeta(x - self.x2)?) * 0.5 + self.b)
    }

    /// exp[ζ(ω)(3d + x₂ − x₁) − ω(3ζ(d) − 2b)], the multiplier of u₂⁻ over 2ω.
    pub fn monodromy_formula(&self, lattice: &Lattice) -> Result<C64> {
        let zd = lattice.zeta(self.d)?;
        Ok((lattice.eta * (self.d * 3.0 + self.x2 - self.x1) - lattice.omega * (zd * 3.0 - self.b * 2.0)).exp())
    }

    /// x₁ + x₂ + 2ω′ + d, a lattice vector.
    fn omega_sum(&self, lattice: &Lattice) -> C64 {
        self.x1 + self.x2 + lattice.omega_prime * 2.0 + self.d
    }
}

fn integer_coords(lattice: &Lattice, z: C64) -> Result<(i64, i64)> {
    let (s, t) = lattice.coordinates(z);
    let (m, n) = (s.round(), t.round());
    if (s - m).abs() > 1e-6 || (t - n).abs() > 1e-6 {
        return Err(Error::ZeroFinding(format!("x1 + x2 + d is not a period: coordinates ({s}, {t})")));
    }
    Ok((m as i64, n as i64))
}

/// Locates x₁, x₂ among the preimages ±z − ω′ as the zeros of p.
///
/// x₁ and x₂ are defined modulo periods; they are reduced to the central
/// cell, and x₂ is then moved by ±2ω′ if needed so that x₁ + x₂ + 2ω′ + d
/// has an even number of 2ω′ steps. Only then does the closed monodromy
/// exponential carry the right sign (moving x₂ by 2ω′ flips it through the
/// Legendre relation while leaving the solution unchanged).
pub fn bloch_quadrature_data(d: C64, lattice: &Lattice) -> Result<BlochQuadratureData> {
    if lattice.is_lattice_point(d) {
        return Err(Error::InvalidParameter(format!("d = {d} is a lattice point")));
    }
    let pair = lame_displacement_pair(d, lattice)?;
    let wp0 = lattice.wp(d)?;
    let root = (pair.a1 - pair.a2) / 3.0;
    if root.norm() < 1e-9 * (1.0 + wp0.norm()) {
        return Err(Error::EqualConstants);
    }
    let mut data = BlochQuadratureData {
        d,
        wp0,
        x1: c(0.0),
        x2: c(0.0),
        b: c(0.0),
        a1: pair.a1,
        a2: pair.a2,
        root,
    };
    let w = lattice.omega_prime;
    let scale = 6.0 * (1.0 + root.norm() + wp0.norm());
    let locate = |t: C64, data: &BlochQuadratureData| -> Result<C64> {
        let z = lattice.wp_inverse(t, WpBranch::Canonical)?;
        let mut best: Option<(f64, C64)> = None;
        for cand in [z - w, -z - w] {
            let x = lattice.reduce(cand);
            let v = data.p(lattice, x).map(|v| v.norm()).unwrap_or(f64::INFINITY);
            if best.is_none_or(|(e, _)| v < e) {
                best = Some((v, x));
            }
        }
        match best {
            Some((v, x)) if v <= 1e-7 * scale => Ok(x),
            _ => {
                let scan: Vec<String> = (0..8)
                    .map(|k| {
                        let x = lattice.omega * (k as f64 / 4.0);
                        let f = lattice.wp(x + w).and_then(|a| Ok(a + lattice.wp(x + w + d)? + wp0));
                        format!("f({:.3}) = {:?}", x.re, f.ok())
                    })
                    .collect();
                Err(Error::ZeroFinding(format!("no zero of p above wp = {t}; {}", scan.join(", "))))
            }
        }
    };
    data.x1 = locate((-wp0 + root) * 0.5, &data)?;
    data.x2 = locate((-wp0 - root) * 0.5, &data)?;
    let (_, n) = integer_coords(lattice, data.omega_sum(lattice))?;
    if n.rem_euclid(2) == 1 {
        let (_, t2) = lattice.coordinates(data.x2);
        data.x2 += if t2 >= 0.0 { -w * 2.0 } else { w * 2.0 };
    }
    data.b = (lattice.zeta(w - data.x2)? - lattice.zeta(w - data.x1)?) * 0.5;
    Ok(data)
}

/// σ(z−α)σ(z−β)/σ²(z+ω′)·e^{cz − ln N}.
#[derive(Debug, Clone, Copy)]
struct Product {
    alpha: C64,
    beta: C64,
    c: C64,
    ln_norm: C64,
}

const CONTOUR_STEP: f64 = 1e-3;

impl Product {
    fn ln_raw(&self, l: &Lattice, z: C64) -> C64 {
        l.ln_sigma(z - self.alpha) + l.ln_sigma(z - self.beta) - l.ln_sigma(z + l.omega_prime) * 2.0 + self.c * z
    }

    fn value(&self, l: &Lattice, z: C64) -> C64 {
        (self.ln_raw(l, z) - self.ln_norm).exp()
    }

    fn log_deriv(&self, l: &Lattice, z: C64) -> Result<C64> {
        Ok(l.zeta(z - self.alpha)? + l.zeta(z - self.beta)? - l.zeta(z + l.omega_prime)? * 2.0 + self.c)
    }

    fn deriv(&self, l: &Lattice, z: C64) -> C64 {
        let u = self.value(l, z);
        if let Ok(ld) = self.log_deriv(l, z) {
            let v = u * ld;
            if v.re.is_finite() && v.im.is_finite() {
                return v;
            }
        }
        // at a zero: four-point contour difference
        let (h, i) = (CONTOUR_STEP, C64::new(0.0, 1.0));
        let f = |dz: C64| self.value(l, z + dz);
        (f(c(h)) - f(c(-h)) - (f(i * h) - f(-i * h)) * i) / (4.0 * h)
    }

    /// Multiplier over the real period 2ω.
    fn multiplier(&self, l: &Lattice) -> C64 {
        (l.eta * (-self.alpha - self.beta - l.omega_prime * 2.0) * 2.0 + l.omega * self.c * 2.0).exp()
    }
}

/// The four Bloch solutions u₂⁻, u₂⁺ (eigenvalue a₂) and u₁⁻, u₁⁺ (a₁) of
/// 6℘(x+ω′), tied together by
/// u₂⁻(x)u₂⁺(x+d) = p(x), u₁⁺(x)u₁⁻(x+d) = p(x) and
/// u₁⁻(x+d) = u₂⁻(x)·[σ(x+ω′)/σ(x+ω′+d)]³e^{3ζ(d)x}, with u₂⁻(x_ref) = 1.
#[derive(Debug, Clone)]
pub struct LameBloch {
    pub lattice: Lattice,
    pub data: BlochQuadratureData,
    pub x_ref: f64,
    /// Exponent of u₂⁻ in the product form.
    pub kappa: C64,
    /// 2mζ(ω) + 2nζ(ω′) for x₁ + x₂ + 2ω′ + d = 2mω + 2nω′.
    pub lambda: C64,
    u2m: Product,
    u2p: Product,
    u1m: Product,
    u1p: Product,
}

impl LameBloch {
    pub fn new(d: C64, lattice: &Lattice) -> Result<Self> {
        let data = bloch_quadrature_data(d, lattice)?;
        let l = *lattice;
        let w = l.omega_prime;
        let (m, n) = integer_coords(&l, data.omega_sum(&l))?;
        let lambda = l.eta * (2 * m) as f64 + l.eta_prime * (2 * n) as f64;
        let zd = l.zeta(d)?;
        let kappa = (lambda + data.b * 2.0 - zd * 3.0) * 0.5;
        let x_ref = reference_point(&data, &l)?;
        let xr = c(x_ref);
        let mut u2m = Product { alpha: data.x1, beta: -w - d, c: kappa, ln_norm: c(0.0) };
        u2m.ln_norm = u2m.ln_raw(&l, xr);
        let ln_p = data.p(&l, xr)?.ln();
        let mut u2p = Product { alpha: data.x2 + d, beta: d - w, c: lambda - kappa, ln_norm: c(0.0) };
        u2p.ln_norm = u2p.ln_raw(&l, xr + d) - ln_p;
        let mut u1m = Product { alpha: data.x1 + d, beta: d - w, c: kappa + zd * 3.0, ln_norm: c(0.0) };
        let ln_ratio = (l.ln_sigma(xr + w) - l.ln_sigma(xr + w + d)) * 3.0 + zd * 3.0 * x_ref;
        u1m.ln_norm = u1m.ln_raw(&l, xr + d) - ln_ratio;
        let mut u1p = Product { alpha: data.x2, beta: -w - d, c: lambda - kappa - zd * 3.0, ln_norm: c(0.0) };
        u1p.ln_norm = u1p.ln_raw(&l, xr) - (ln_p - u1m.ln_raw(&l, xr + d) + u1m.ln_norm);
        Ok(Self { lattice: l, data, x_ref, kappa, lambda, u2m, u2p, u1m, u1p })
    }

    fn solution(&self, f: Product, eigenvalue: C64, label: &str) -> SchrodingerSolution {
        let (l1, l2) = (self.lattice, self.lattice);
        SchrodingerSolution::closed_form(eigenvalue, move |x| f.value(&l1, c(x)), move |x| f.deriv(&l2, c(x)))
            .with_bloch_factor(f.multiplier(&self.lattice))
            .with_label(format!("lame {label}(d = {})", self.data.d))
    }

    pub fn u2_minus(&self) -> SchrodingerSolution {
        self.solution(self.u2m, self.data.a2, "u2-")
    }

    pub fn u2_plus(&self) -> SchrodingerSolution {
        self.solution(self.u2p, self.data.a2, "u2+")
    }

    pub fn u1_minus(&self) -> SchrodingerSolution {
        self.solution(self.u1m, self.data.a1, "u1-")
    }

    pub fn u1_plus(&self) -> SchrodingerSolution {
        self.solution(self.u1p, self.data.a1, "u1+")
    }

    /// u₂⁻ at a complex argument.
    pub fn u2_minus_at(&self, z: C64) -> C64 {
        self.u2m.value(&self.lattice, z)
    }

    pub fn u2_plus_at(&self, z: C64) -> C64 {
        self.u2p.value(&self.lattice, z)
    }

    pub fn u1_minus_at(&self, z: C64) -> C64 {
        self.u1m.value(&self.lattice, z)
    }

    pub fn u1_plus_at(&self, z: C64) -> C64 {
        self.u1p.value(&self.lattice, z)
    }

    /// Multiplier of u₂⁻ over 2ω from the product form.
    pub fn multiplier(&self) -> C64 {
        self.u2m.multiplier(&self.lattice)
    }

    /// [ln u₂⁻]′ = ζ(x−x₁) + ζ(x+ω′+d) − 2ζ(x+ω′) + κ.
    pub fn u2_minus_log_derivative(&self, z: C64) -> Result<C64> {
        self.u2m.log_deriv(&self.lattice, z)
    }
}

/// First of 0, ±ω/8, ±2ω/8, … where p stays clear of zero.
fn reference_point(data: &BlochQuadratureData, l: &Lattice) -> Result<f64> {
    let scale = 1.0 + data.root.norm();
    for k in 0..16 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let x = sign * ((k + 1) / 2) as f64 * l.omega.re / 8.0;
        if let Ok(p) = data.p(l, c(x)) {
            if p.norm() > 1e-2 * scale && p.norm().is_finite() {
                return Ok(x);
            }
        }
    }
    Err(Error::ZeroFinding("no reference point away from the zeros of p".into()))
}

pub fn lame_bloch(d: C64, lattice: &Lattice) -> Result<LameBloch> {
    LameBloch::new(d, lattice)
}

/// u₂⁻ from √p·(σ(x+ω′+d)/σ(x+ω′))^{3/2}·(σ(x−x₁)/σ(x−x₂))^{1/2}·e^{(b−3ζ(d)/2)x},
/// with the root continued along the real axis from `x0`, where u = 1.
pub fn u2_minus_from_root(d: C64, lattice: &Lattice, x0: f64, lo: f64, hi: f64) -> Result<SchrodingerSolution> {
    let data = bloch_quadrature_data(d, lattice)?;
    let l = *lattice;
    let w = l.omega_prime;
    let zd = l.zeta(d)?;
    let k = data.b * 2.0 - zd * 3.0;
    let ln_square = move |x: f64| -> C64 {
        let z = c(x);
        let p = data.p(&l, z).unwrap_or(c(f64::NAN));
        p.ln() + (l.ln_sigma(z + w + d) - l.ln_sigma(z + w)) * 3.0 + l.ln_sigma(z - data.x1) - l.ln_sigma(z - data.x2) + k * z
    };
    let base = ln_square(x0);
    if !(base.re.is_finite() && base.im.is_finite()) {
        return Err(Error::Node(x0));
    }
    let root = Arc::new(TrackedSqrt::new(move |x| (ln_square(x) - base).exp(), x0, lo, hi));
    let half_log = move |x: f64| -> Result<C64> {
        let z = c(x);
        let (p, dp) = (data.p(&l, z)?, data.dp(&l, z)?);
        let s = dp / p + (l.zeta(z + w + d)? - l.zeta(z + w)?) * 3.0 + l.zeta(z - data.x1)? - l.zeta(z - data.x2)? + k;
        Ok(s * 0.5)
    };
    let r2 = root.clone();
    Ok(SchrodingerSolution::closed_form(
        data.a2,
        move |x| root.eval(x),
        move |x| half_log(x).map(|h| r2.eval(x) * h).unwrap_or(c(f64::NAN)),
    )
    .with_domain(lo, hi)
    .with_label(format!("lame u2- root form(d = {d})")))
}

/// u₂⁻ for the displacement `d`, normalized to 1 at the reference point.
pub fn lame_bloch_u2_minus(d: C64, lattice: &Lattice) -> Result<SchrodingerSolution> {
    Ok(LameBloch::new(d, lattice)?.u2_minus())
}

