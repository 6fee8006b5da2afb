//! Two-soliton potentials, the Pöschl–Teller well −6 sech²x and its family
//! of 1-SUSY partners.

use crate::branch::TrackedSqrt;
use crate::error::{Error, Result};
use crate::invariance::{DisplacementPair, PBranch};
use crate::operator::{Potential, SchrodingerSolution};
use crate::{Jet, C64};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// cosh x / cosh(x + d) without cancellation in the derivatives.
fn cosh_ratio(x: Jet, d: C64) -> Jet {
    let one = c(1.0);
    if x.value().re >= 0.0 {
        ((x * -2.0).exp() + one) / ((x * -2.0 - d * 2.0).exp() + one) * (-d).exp()
    } else {
        ((x * 2.0).exp() + one) / ((x * 2.0 + d * 2.0).exp() + one) * d.exp()
    }
}

/// Smallest real displacement of the Pöschl–Teller well, arcsinh √3.
pub fn pt_d_min() -> f64 {
    3f64.sqrt().asinh()
}

/// Parameters of the two-soliton potential. Levels sit at −α₂² and −α₁²;
/// β₁, β₂ move along the isospectral family and may be complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSolitonParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: C64,
    pub beta2: C64,
}

impl TwoSolitonParams {
    pub fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Result<Self> {
        Self::complex(alpha1, alpha2, c(beta1), c(beta2))
    }

    pub fn complex(alpha1: f64, alpha2: f64, beta1: C64, beta2: C64) -> Result<Self> {
        if alpha1 == alpha2 {
            return Err(Error::InvalidParameter("two-soliton levels must differ: alpha1 = alpha2".into()));
        }
        if !(alpha1 > 0.0 && alpha2 > alpha1) {
            return Err(Error::InvalidParameter(format!(
                "two-soliton parameters need 0 < alpha1 < alpha2, got ({alpha1}, {alpha2})"
            )));
        }
        Ok(Self { alpha1, alpha2, beta1, beta2 })
    }

    /// The Pöschl–Teller case (1, 2, 0, 0).
    pub fn poschl_teller() -> Self {
        Self {
            alpha1: 1.0,
            alpha2: 2.0,
            beta1: c(0.0),
            beta2: c(0.0),
        }
    }

    /// Discrete levels (E₀, E₁) = (−α₂², −α₁²).
    pub fn levels(&self) -> (f64, f64) {
        (-self.alpha2 * self.alpha2, -self.alpha1 * self.alpha1)
    }
}

/// V₀ = 2(α₁²−α₂²)(α₁² sech²A tanh²B + α₂² sech²B)/(α₁ tanhA tanhB − α₂)²
/// with A = α₁x+β₁, B = α₂x+β₂, which is the csch/coth form multiplied
/// through by tanh²B so that it stays regular at B = 0.
pub fn two_soliton_potential(params: &TwoSolitonParams) -> Potential {
    let TwoSolitonParams { alpha1: a1, alpha2: a2, beta1: b1, beta2: b2 } = *params;
    let jet = move |z: C64| -> Result<Jet> {
        let x = Jet::variable(z);
        let a = x * c(a1) + b1;
        let b = x * c(a2) + b2;
        let (ta, tb) = (a.tanh(), b.tanh());
        let (sa, sb) = (a.sech(), b.sech());
        let num = sa * sa * tb * tb * c(a1 * a1) + sb * sb * c(a2 * a2);
        let den = ta * tb * c(a1) - c(a2);
        let v = num / (den * den) * c(2.0 * (a1 * a1 - a2 * a2));
        if !v.value().re.is_finite() || !v.value().im.is_finite() {
            return Err(Error::Pole { re: z.re, im: z.im });
        }
        Ok(v)
    };
    let even = b1 == c(0.0) && b2 == c(0.0);
    Potential::from_jet(format!("two-soliton({a1}, {a2}, {b1}, {b2})"), jet).with_even(even)
}

/// −6 sech²x.
pub fn poschl_teller_potential() -> Potential {
    two_soliton_potential(&TwoSolitonParams::poschl_teller()).with_label("-6 sech^2 x")
}

/// Both labellings of the constants producing displacement `d` of the
/// Pöschl–Teller well. `primary` has a₁ − a₂ = 3 coth d √(1 − 3csch²d) with
/// principal roots; this is the labelling used by [`pt_u2_minus`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtRelations {
    pub d: C64,
    pub primary: DisplacementPair,
    pub swapped: DisplacementPair,
    /// Real 0 < |d| < d_min: the root is on its cut, a₁ − a₂ is imaginary
    /// and which pair is called primary is a convention.
    pub on_branch_cut: bool,
}

/// (√(1 − 3csch²d), whether the argument lies on the cut of the root).
fn pt_root(d: C64) -> (C64, bool) {
    let csch = d.sinh().inv();
    let arg = c(1.0) - csch * csch * 3.0;
    (arg.sqrt(), arg.re < 0.0 && arg.im.abs() <= 1e-14 * arg.norm())
}

/// a₁ + a₂ = −5 − 3csch²d, a₁ − a₂ = ±3 coth d √(1 − 3csch²d).
pub fn pt_displacement_relations(d: C64) -> Result<PtRelations> {
    if d.sinh().norm() < 1e-12 {
        return Err(Error::InvalidParameter("displacement must not be a multiple of i*pi".into()));
    }
    let csch = d.sinh().inv();
    let sum = c(-5.0) - csch * csch * 3.0;
    let (root, on_branch_cut) = pt_root(d);
    let diff = d.cosh() * csch * root * 3.0;
    let pair = |a1: C64, a2: C64| DisplacementPair { a1, a2, d, branch: PBranch::Plus };
    Ok(PtRelations {
        d,
        primary: pair((sum + diff) * 0.5, (sum - diff) * 0.5),
        swapped: pair((sum - diff) * 0.5, (sum + diff) * 0.5),
        on_branch_cut,
    })
}

/// a₁(a₂) = ½(−6 − a₂ ± √(−12a₂ − 3a₂²)), upper sign first.
pub fn pt_a1_of_a2(a2: C64) -> [C64; 2] {
    let r = (a2 * -12.0 - a2 * a2 * 3.0).sqrt();
    let base = c(-6.0) - a2;
    [(base + r) * 0.5, (base - r) * 0.5]
}

fn reduce_imag(d: C64) -> C64 {
    let pi = std::f64::consts::PI;
    let mut im = d.im % pi;
    if im > pi / 2.0 {
        im -= pi;
    } else if im <= -pi / 2.0 {
        im += pi;
    }
    C64::new(d.re, im)
}

/// Displacement with `a2` as the second constant of the primary labelling.
/// The magnitude is arccsch(√(−4 − a₂ + √3 √(−a₂(a₂+4)))/√6); its sign is
/// the one for which the primary pair reproduces a₂, and Im d is reduced to
/// (−π/2, π/2]. Real a₂ < −4 admits both d and d̄; rounding noise in Im a₂
/// is dropped so the principal roots pick Im d < 0.
pub fn pt_d_of_a2(a2: C64) -> Result<C64> {
    let a2 = if a2.im.abs() <= 1e-12 * (1.0 + a2.norm()) { c(a2.re) } else { a2 };
    let inner = c(-4.0) - a2 + (-a2 * (a2 + 4.0)).sqrt() * 3f64.sqrt();
    let w = inner.sqrt() / 6f64.sqrt();
    if w.norm() < 1e-300 {
        return Err(Error::InvalidParameter(format!("a2 = {a2} gives an infinite displacement")));
    }
    let d0 = reduce_imag((w.inv() + (w.inv() * w.inv() + 1.0).sqrt()).ln());
    let mut best: Option<(f64, C64)> = None;
    for cand in [d0, -d0] {
        if let Ok(rel) = pt_displacement_relations(cand) {
            let err = (rel.primary.a2 - a2).norm();
            if best.is_none_or(|(e, _)| err < e) {
                best = Some((err, cand));
            }
        }
    }
    match best {
        Some((err, d)) if err <= 1e-6 * (1.0 + a2.norm()) => Ok(d),
        _ => Err(Error::Branch { re: d0.re, im: d0.im }),
    }
}

/// p(x) = −6[tanh x + csch d cosh x sech(x+d)] as a jet.
pub fn pt_p_jet(d: C64, x: C64) -> Jet {
    let t = Jet::variable(x);
    let q = t.tanh() + cosh_ratio(t, d) * d.sinh().inv();
    q * c(-6.0)
}

/// u₂⁻ for the displacement `d` in the primary labelling, with u(0) = 1:
///
/// u² ∝ e^{−x(3coth d + r)} cosh²(x+d) sech⁴x [3 − cosh2d + cosh2x + cosh(2x+2d)]
///      · (r + s(x))/(r − s(x)),
///
/// r = √(1 − 3csch²d), s(x) = coth d + 2 tanh x. Writing the ratio through r
/// rather than √(cosh2d − 7) = √2 sinh d · r keeps it analytic in d. The root
/// is continued along the real axis from x = 0.
pub fn pt_u2_minus(d: C64) -> Result<SchrodingerSolution> {
    let rel = pt_displacement_relations(d)?;
    let (r, _) = pt_root(d);
    let coth = d.cosh() / d.sinh();
    let kappa = coth * 3.0 + r;
    let parts = move |x: f64| {
        let xc = c(x);
        let s = coth + xc.tanh() * 2.0;
        let bracket = c(3.0) - (d * 2.0).cosh() + (xc * 2.0).cosh() + (xc * 2.0 + d * 2.0).cosh();
        (xc, bracket, r + s, r - s)
    };
    let square = move |x: f64| {
        let (xc, bracket, num, den) = parts(x);
        let sech = xc.cosh().inv();
        (-kappa * xc).exp() * (xc + d).cosh().powi(2) * sech.powi(4) * bracket * num / den
    };
    let u0 = square(0.0);
    if !(u0.norm() > 0.0) || !u0.re.is_finite() || !u0.im.is_finite() {
        return Err(Error::InvalidParameter(format!("u2- is singular at x = 0 for d = {d}")));
    }
    let tracked = TrackedSqrt::new(move |x| square(x) / u0, 0.0, -20.0, 20.0);
    let value = {
        let t = tracked.clone();
        move |x: f64| t.eval(x)
    };
    let log_deriv = move |x: f64| {
        let (xc, bracket, num, den) = parts(x);
        let dbracket = (xc * 2.0).sinh() * 2.0 + (xc * 2.0 + d * 2.0).sinh() * 2.0;
        let ds = xc.cosh().powi(-2) * 2.0;
        let l = -kappa + (xc + d).tanh() * 2.0 - xc.tanh() * 4.0 + dbracket / bracket + ds / num + ds / den;
        l * 0.5
    };
    let deriv = move |x: f64| tracked.eval(x) * log_deriv(x);
    Ok(SchrodingerSolution::closed_form(rel.primary.a2, value, deriv).with_label(format!("PT u2-(d = {d})")))
}

/// u₁⁺(x) = u₂⁻(−x) built at displacement −d; the well is even and −d
/// swaps the pair, so this solves the equation at a₁.
pub fn pt_u1_plus(d: C64) -> Result<SchrodingerSolution> {
    let w = pt_u2_minus(-d)?;
    let (v, dv) = (w.clone(), w.clone());
    Ok(SchrodingerSolution::closed_form(w.eigenvalue(), move |x| v.eval(-x), move |x| -dv.eval_deriv(-x))
        .with_label(format!("PT u1+(d = {d})")))
}

/// ΔV = −2[ln u₂⁻]″ from p, with [ln u₂⁻]′ = p′/2p + p/4 + (a₁−a₂)/p.
pub fn pt_delta_v(d: C64) -> Result<Potential> {
    let rel = pt_displacement_relations(d)?;
    let k = rel.primary.difference();
    let jet = move |z: C64| -> Result<Jet> {
        let p = pt_p_jet(d, z);
        if p.value().norm() < 1e-12 {
            return Err(Error::Pole { re: z.re, im: z.im });
        }
        let l = p.deriv() / (p * 2.0) + p * 0.25 + p.recip() * k;
        Ok(l.deriv() * -2.0)
    };
    Ok(Potential::from_jet(format!("PT dV(d = {d})"), jet))
}

/// The partner V₁ = −6 sech²x + ΔV produced by u₂⁻ at eigenvalue `a2`.
/// Members with a₂ < −4 are real and regular.
pub fn pt_family(a2: f64) -> Result<Potential> {
    let d = pt_d_of_a2(c(a2))?;
    let dv = pt_delta_v(d)?;
    let v0 = poschl_teller_potential();
    Ok(Potential::from_jet(format!("PT family(a2 = {a2})"), move |z| Ok(v0.jet(z)? + dv.jet(z)?)))
}

/// γᵢ = arctanh(αᵢ/α₃). For α₃ < αᵢ the value is complex (principal branch).
pub fn gamma_family(alpha1: f64, alpha2: f64, alpha3: f64) -> Result<(C64, C64)> {
    let g = |a: f64| -> Result<C64> {
        let t = a / alpha3;
        if (t.abs() - 1.0).abs() < 1e-12 || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("arctanh argument {t} is singular")));
        }
        Ok(c(t).atanh())
    };
    Ok((g(alpha1)?, g(alpha2)?))
}

/// Two-soliton member of the family with β replaced by γ(α₃).
pub fn gamma_family_potential(alpha1: f64, alpha2: f64, alpha3: f64) -> Result<Potential> {
    let (g1, g2) = gamma_family(alpha1, alpha2, alpha3)?;
    let params = TwoSolitonParams::complex(alpha1, alpha2, g1, g2)?;
    Ok(two_soliton_potential(&params))
}
