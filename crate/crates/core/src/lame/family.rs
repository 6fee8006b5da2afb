//! Partners of 6℘(x+ω′) under first order transformations with u₂⁻ and
//! with u₂⁻ + c·u₂⁺.

use super::{c, lame_d_of_a2, lame_potential, LameBloch, LameContext};
use crate::darboux::{scan_zeros, susy1_kernel};
use crate::error::{Error, Result};
use crate::invariance::DisplacementPair;
use crate::operator::{Potential, SchrodingerSolution};
use crate::{Jet, Lattice, C64};

/// A member V₁ = V₀ + ΔV of the two-gap family.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub potential: Potential,
    pub delta_v: Potential,
    pub pair: DisplacementPair,
    pub bloch: LameBloch,
    /// Set when a₂ lies above E₀ and V₁ may have poles.
    pub warning: Option<String>,
}

/// ΔV = −[(P̃+P)² + 2P̃P − g₂/2]/(P̃+P+℘(d)) + 3P̃ − 3P + ℘(x−x₁) − ℘(x−x₂),
/// P = ℘(x+ω′), P̃ = ℘(x+ω′+d).
fn delta_v_jet(b: &LameBloch, z: C64) -> Result<Jet> {
    let l = &b.lattice;
    let data = &b.data;
    let w = l.omega_prime;
    let p = l.wp_jet(z + w)?;
    let pt = l.wp_jet(z + w + data.d)?;
    let num = (pt + p) * (pt + p) + pt * p * c(2.0) - l.g2 * 0.5;
    let den = pt + p + data.wp0;
    let out = -(num / den) + pt * c(3.0) - p * c(3.0) + l.wp_jet(z - data.x1)? - l.wp_jet(z - data.x2)?;
    if !(out.value().re.is_finite() && out.value().im.is_finite()) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(out)
}

/// The partner of 6℘(x+ω′) built from u₂⁻ at eigenvalue `a2`, with
/// ℘(d) = −(a₁+a₂)/3. Real and regular for real a₂ ≤ E₀ = −√(3g₂).
pub fn two_gap_family(a2: C64, lattice: &Lattice) -> Result<FamilyMember> {
    let ctx = LameContext::new(*lattice)?;
    let (d, pair) = lame_d_of_a2(a2, lattice)?;
    let bloch = LameBloch::new(d, lattice)?;
    let warning = (a2.re > ctx.band_edges[0] || a2.im != 0.0)
        .then(|| format!("a2 = {a2} is not a real value below E0 = {}: potential may have singularities", ctx.band_edges[0]));
    let b1 = bloch.clone();
    let delta_v = Potential::from_jet(format!("lame dV(a2 = {a2})"), move |z| delta_v_jet(&b1, z)).with_period(ctx.period());
    let v0 = lame_potential(lattice);
    let dv = delta_v.clone();
    let potential = Potential::from_jet(format!("lame family(a2 = {a2})"), move |z| Ok(v0.jet(z)? + dv.jet(z)?))
        .with_period(ctx.period());
    Ok(FamilyMember { potential, delta_v, pair, bloch, warning })
}

/// V = V₀ − 2[ln u]″ for u = u₂⁻ + c·u₂⁺, each normalized to 1 at x = 0.
#[derive(Debug, Clone)]
pub struct PerturbedPeriodic {
    pub potential: Potential,
    pub transformation: SchrodingerSolution,
    /// 1/u, normalizable at eigenvalue a₂.
    pub bound_state: SchrodingerSolution,
    pub member: FamilyMember,
    /// Interval scanned for nodes of u.
    pub window: (f64, f64),
}

/// Half-width of the node scan.
pub const PERTURBED_WINDOW: f64 = 12.0;

pub fn perturbed_periodic_potential(a2: C64, coef: C64, lattice: &Lattice) -> Result<PerturbedPeriodic> {
    let member = two_gap_family(a2, lattice)?;
    let minus = member.bloch.u2_minus().normalized_at(0.0)?;
    let plus = member.bloch.u2_plus().normalized_at(0.0)?;
    let u = minus.combine(coef, &plus)?.with_label(format!("u2- + {coef} u2+"));
    let window = (-PERTURBED_WINDOW, PERTURBED_WINDOW);
    let uu = u.clone();
    if let Some(&x) = scan_zeros(&|x| uu.eval(x), window.0, window.1, 4800).first() {
        return Err(Error::Node(x));
    }
    let v0 = lame_potential(lattice);
    let uv = u.clone();
    let a = u.eigenvalue();
    let potential = Potential::new(format!("lame perturbed(a2 = {a2}, c = {coef})"), move |z| {
        if z.im != 0.0 {
            return C64::new(f64::NAN, f64::NAN);
        }
        let l = uv.log_derivative(z.re);
        -v0.eval(z) + a * 2.0 + l * l * 2.0
    });
    let bound_state = susy1_kernel(&u);
    Ok(PerturbedPeriodic { potential, transformation: u, bound_state, member, window })
}
