//! The two-gap Lamé potential 6℘(x+ω′): displacement relations, band edges,
//! closed-form Bloch solutions and the family of 1-SUSY partners.

mod bloch;
mod family;

pub use bloch::{bloch_quadrature_data, lame_bloch, lame_bloch_u2_minus, u2_minus_from_root, BlochQuadratureData, LameBloch};
pub use family::{perturbed_periodic_potential, two_gap_family, FamilyMember, PerturbedPeriodic};

use crate::elliptic::{jacobi_bridge, real_roots, WpBranch};
use crate::error::{Error, Result};
use crate::invariance::{DisplacementPair, PBranch};
use crate::operator::Potential;
use crate::{Jet, Lattice, C64};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// V₀(x) = 6℘(x+ω′), even and 2ω-periodic.
pub fn lame_potential(lattice: &Lattice) -> Potential {
    let l = *lattice;
    Potential::from_jet("6wp(x+w')", move |z| Ok(l.wp_jet(z + l.omega_prime)? * c(6.0)))
        .with_period(lattice.real_period())
        .with_even(true)
}

/// A rectangular lattice with the potential and its five band edges
/// E₀ = −√(3g₂) < E₁ = 3e₃ < E₁′ = 3e₂ < E₂ = 3e₁ < E₂′ = √(3g₂).
#[derive(Debug, Clone)]
pub struct LameContext {
    pub lattice: Lattice,
    pub potential: Potential,
    pub band_edges: [f64; 5],
}

impl LameContext {
    pub fn new(lattice: Lattice) -> Result<Self> {
        let (e1, e2, e3) = real_roots(&lattice)?;
        let s = (3.0 * lattice.g2.re).sqrt();
        Ok(Self {
            potential: lame_potential(&lattice),
            band_edges: [-s, 3.0 * e3, 3.0 * e2, 3.0 * e1, s],
            lattice,
        })
    }

    /// ω = `omega`, ω′ = i·`omega_prime_im`.
    pub fn rectangular(omega: f64, omega_prime_im: f64) -> Result<Self> {
        Self::new(Lattice::rectangular(omega, omega_prime_im)?)
    }

    pub fn period(&self) -> f64 {
        self.lattice.real_period()
    }

    /// The allowed bands [E₀, E₁], [E₁′, E₂] and [E₂′, ∞).
    pub fn bands(&self) -> [(f64, f64); 3] {
        let e = self.band_edges;
        [(e[0], e[1]), (e[2], e[3]), (e[4], f64::INFINITY)]
    }

    /// The gaps (−∞, E₀), (E₁, E₁′) and (E₂, E₂′).
    pub fn gaps(&self) -> [(f64, f64); 3] {
        let e = self.band_edges;
        [(f64::NEG_INFINITY, e[0]), (e[1], e[2]), (e[3], e[4])]
    }
}

/// a₁,₂ = −(3/2)[℘(d) ∓ √(g₂ − 3℘²(d))] with the principal root.
pub fn lame_displacement_pair(d: C64, lattice: &Lattice) -> Result<DisplacementPair> {
    let w = lattice.wp(d)?;
    let r = (lattice.g2 - w * w * 3.0).sqrt();
    Ok(DisplacementPair {
        a1: (w - r) * -1.5,
        a2: (w + r) * -1.5,
        d,
        branch: PBranch::Plus,
    })
}

/// a₁(a₂) = (−a₂ ± √(9g₂ − 3a₂²))/2, upper sign first.
pub fn lame_a1_of_a2(a2: C64, lattice: &Lattice) -> [C64; 2] {
    let r = (lattice.g2 * 9.0 - a2 * a2 * 3.0).sqrt();
    [(r - a2) * 0.5, (-r - a2) * 0.5]
}

/// A displacement whose pair has `a2` as second constant, from
/// ℘(d) = −(a₁+a₂)/3. Of ±d the one with Re d ≥ 0 is returned (the
/// canonical preimage).
pub fn lame_d_of_a2(a2: C64, lattice: &Lattice) -> Result<(C64, DisplacementPair)> {
    let mut best: Option<(f64, C64, DisplacementPair)> = None;
    for a1 in lame_a1_of_a2(a2, lattice) {
        let t = -(a1 + a2) / 3.0;
        let Ok(d) = lattice.wp_inverse(t, WpBranch::Canonical) else {
            continue;
        };
        let Ok(pair) = lame_displacement_pair(d, lattice) else {
            continue;
        };
        let err = (pair.a2 - a2).norm();
        if best.as_ref().is_none_or(|b| err < b.0) {
            best = Some((err, d, pair));
        }
    }
    match best {
        Some((err, d, pair)) if err <= 1e-7 * (1.0 + a2.norm()) => Ok((d, pair)),
        Some((_, d, _)) => Err(Error::Branch { re: d.re, im: d.im }),
        None => Err(Error::InvalidParameter(format!("a2 = {a2} maps to a lattice point"))),
    }
}

/// Every displacement (canonical preimage) whose pair has `a2` as second
/// constant, one per root a₁ of the quadratic, upper sign first.
pub fn lame_displacements_of_a2(a2: C64, lattice: &Lattice) -> Vec<(C64, DisplacementPair)> {
    let mut out: Vec<(C64, DisplacementPair)> = Vec::new();
    for a1 in lame_a1_of_a2(a2, lattice) {
        let Ok(d) = lattice.wp_inverse(-(a1 + a2) / 3.0, WpBranch::Canonical) else {
            continue;
        };
        let Ok(pair) = lame_displacement_pair(d, lattice) else {
            continue;
        };
        let close = (pair.a2 - a2).norm() <= 1e-7 * (1.0 + a2.norm());
        if close && !out.iter().any(|(e, _)| (e - d).norm() <= 1e-9 * (1.0 + d.norm())) {
            out.push((d, pair));
        }
    }
    out
}

/// The real displacements (d_min, d_max) = (℘⁻¹(√(g₂/3)), ω) for which a₁
/// and a₂ are real and lie in the first gap [3e₃, 3e₂].
pub fn real_displacement_range(lattice: &Lattice) -> Result<(f64, f64)> {
    real_roots(lattice)?;
    let t = c((lattice.g2.re / 3.0).sqrt());
    let d = lattice.wp_inverse(t, WpBranch::Canonical)?;
    Ok((d.re, lattice.omega.re))
}

/// Band edges in the Jacobi normalization Ẽ = (E − 6e₃)/(e₁ − e₃).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiEdges {
    pub m: f64,
    /// Ẽ₀, Ẽ₁, Ẽ₁′, Ẽ₂, Ẽ₂′
    pub edges: [f64; 5],
    /// (Ẽ₂′ − Ẽ₀)/4
    pub delta: f64,
}

impl JacobiEdges {
    /// Largest deviation from Ẽ₁ = m+1, Ẽ₁′ = 4m+1, Ẽ₂ = m+4,
    /// Ẽ₀ = 2m+2−2δ, Ẽ₂′ = 2m+2+2δ and δ² = m²−m+1.
    pub fn max_deviation(&self) -> f64 {
        let (m, e, d) = (self.m, self.edges, self.delta);
        [
            e[1] - (m + 1.0),
            e[2] - (4.0 * m + 1.0),
            e[3] - (m + 4.0),
            e[0] - (2.0 * m + 2.0 - 2.0 * d),
            e[4] - (2.0 * m + 2.0 + 2.0 * d),
            d * d - (m * m - m + 1.0),
        ]
        .iter()
        .fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }
}

pub fn jacobi_band_edges(lattice: &Lattice) -> Result<JacobiEdges> {
    let ctx = LameContext::new(*lattice)?;
    let (e1, _, e3) = real_roots(lattice)?;
    let (m, _) = jacobi_bridge(lattice)?;
    let edges = ctx.band_edges.map(|e| (e - 6.0 * e3) / (e1 - e3));
    Ok(JacobiEdges {
        m,
        edges,
        delta: (edges[4] - edges[0]) / 4.0,
    })
}

/// p = 6[ζ(x+ω′+d) − ζ(x+ω′) − ζ(d)] as a jet.
pub fn lame_p_jet(d: C64, lattice: &Lattice, x: C64) -> Result<Jet> {
    let w = lattice.omega_prime;
    Ok((lattice.zeta_jet(x + w + d)? - lattice.zeta_jet(x + w)? - lattice.zeta(d)?) * c(6.0))
}

/// Residual of D² − 6S′D′/D + 3S² − 36g₂ relative to 1 + 36|g₂|, with
/// S, D the sum and difference of V₀(x) and V₀(x+d).
pub fn quartic_identity_residual(d: C64, lattice: &Lattice, x: C64) -> Result<f64> {
    let v = lame_potential(lattice);
    let (a, b) = (v.jet(x)?, v.jet(x + d)?);
    let (s, dd) = (a + b, a - b);
    let e = dd.value() * dd.value() - s.derivative(1) * dd.derivative(1) * 6.0 / dd.value() + s.value() * s.value() * 3.0
        - lattice.g2 * 36.0;
    Ok(e.norm() / (1.0 + 36.0 * lattice.g2.norm()))
}

/// The two-soliton limit: 6℘(x+ω′) → 2 − 6 sech²x as ω → ∞ with ω′ = iπ/2.
/// Returns the Lamé pair at `d` shifted by this constant, for comparison
/// with the Pöschl–Teller relations.
pub fn soliton_limit_pair(d: C64, omega: f64) -> Result<DisplacementPair> {
    let lattice = Lattice::rectangular(omega, std::f64::consts::FRAC_PI_2)?;
    let mut pair = lame_displacement_pair(d, &lattice)?;
    let shift = lattice.e3 * -3.0;
    pair.a1 -= shift;
    pair.a2 -= shift;
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat() -> Lattice {
        Lattice::rectangular(1.0, 2.0).unwrap()
    }

    #[test]
    fn edges_are_ordered() {
        let ctx = LameContext::new(lat()).unwrap();
        let e = ctx.band_edges;
        assert!(e.windows(2).all(|w| w[0] < w[1]), "{e:?}");
        assert!((e[0] - -4.936_866_95).abs() < 1e-7);
    }

    #[test]
    fn pair_at_half_period() {
        let l = lat();
        let p = lame_displacement_pair(l.omega, &l).unwrap();
        assert!((p.a2 - l.e3 * 3.0).norm() < 1e-12);
        assert!((p.a1 - l.e2 * 3.0).norm() < 1e-12);
    }

    #[test]
    fn non_rectangular_rejected() {
        let l = Lattice::from_half_periods(c(1.0), C64::new(0.4, 1.3)).unwrap();
        assert!(LameContext::new(l).is_err());
        assert!(jacobi_band_edges(&l).is_err());
    }
}
