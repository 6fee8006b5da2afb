//! First and second order Darboux (SUSY) transformations.
//!
//! Everything is expressed through values of the transformation functions
//! and their first derivatives; second derivatives come from the Schrödinger
//! equation itself.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operator::{Potential, SchrodingerSolution};
use crate::C64;

/// Value returned by partner potentials at their poles.
pub const POLE_FLAG: f64 = 1e300;

const SCAN_POINTS: usize = 4000;
const SCAN_WINDOW: (f64, f64) = (-10.0, 10.0);

fn flagged(v: C64) -> C64 {
    if v.re.is_finite() && v.im.is_finite() {
        v
    } else {
        C64::new(POLE_FLAG, 0.0)
    }
}

fn on_axis(z: C64) -> Option<f64> {
    (z.im.abs() <= 1e-12 * (1.0 + z.re.abs())).then_some(z.re)
}

fn same(a: C64, b: C64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()))
}

/// Real zeros of a complex function that is real up to a constant phase,
/// located by sign changes of the phase-aligned real part and refined by
/// bisection.
pub fn scan_zeros(f: &dyn Fn(f64) -> C64, a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let xs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let vals: Vec<C64> = xs.iter().map(|&x| f(x)).collect();
    let anchor = vals
        .iter()
        .filter(|v| v.re.is_finite() && v.im.is_finite())
        .fold(C64::new(0.0, 0.0), |m, v| if v.norm() > m.norm() { *v } else { m });
    if anchor.norm() == 0.0 {
        return Vec::new();
    }
    let phase = anchor.conj() / anchor.norm();
    let g = |x: f64| (f(x) * phase).re;
    let mut out = Vec::new();
    for i in 0..n {
        let (ga, gb) = ((vals[i] * phase).re, (vals[i + 1] * phase).re);
        if !(ga.is_finite() && gb.is_finite()) || ga * gb > 0.0 {
            continue;
        }
        let (mut lo, mut hi, mut glo) = (xs[i], xs[i + 1], ga);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let gm = g(mid);
            if gm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if gm * glo < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                glo = gm;
            }
        }
        let x = 0.5 * (lo + hi);
        // a genuine zero of a phase-aligned function has a small modulus
        let scale = vals[i].norm().max(vals[i + 1].norm());
        if f(x).norm() <= 1e-6 * scale.max(1e-300) && out.last().is_none_or(|&p: &f64| (x - p).abs() > 1e-9) {
            out.push(x);
        }
    }
    out
}

fn scan_window(v0: &Potential, sols: &[&SchrodingerSolution]) -> (f64, f64) {
    if let Some(t) = v0.period() {
        return (0.0, t);
    }
    sols.iter().filter_map(|s| s.domain()).fold(SCAN_WINDOW, |w, d| (w.0.max(d.0), w.1.min(d.1)))
}

/// V₁ = V₀ − 2(ln u₁)″ = −V₀ + 2a₁ + 2(u₁′/u₁)².
pub fn susy1_potential(v0: &Potential, u1: &SchrodingerSolution) -> Potential {
    let a1 = u1.eigenvalue();
    let (base, u) = (v0.clone(), u1.clone());
    let (lo, hi) = scan_window(v0, &[u1]);
    let poles = scan_zeros(&|x| u1.eval(x), lo, hi, SCAN_POINTS);
    let mut v1 = Potential::new(format!("susy1[{}]", v0.label()), move |z| match on_axis(z) {
        Some(x) => {
            let w = u.eval_deriv(x) / u.eval(x);
            flagged(-base.eval(z) + a1 * 2.0 + w * w * 2.0)
        }
        None => C64::new(f64::NAN, f64::NAN),
    })
    .with_singularities(poles);
    if let (Some(t), Some(_)) = (v0.period(), u1.bloch_factor()) {
        v1 = v1.with_period(t);
    }
    v1
}

/// v = −u′ + (ln u₁)′u, a solution of the partner equation at the eigenvalue of u.
pub fn susy1_map(u1: &SchrodingerSolution, u: &SchrodingerSolution) -> Result<SchrodingerSolution> {
    let (a1, a) = (u1.eigenvalue(), u.eigenvalue());
    if same(a1, a) {
        return Err(Error::UseKernelFormula);
    }
    let (t1, t2) = (u1.clone(), u1.clone());
    let (s1, s2) = (u.clone(), u.clone());
    let mut v = SchrodingerSolution::new(
        a,
        move |x| {
            let w = t1.eval_deriv(x) / t1.eval(x);
            -s1.eval_deriv(x) + w * s1.eval(x)
        },
        move |x| {
            let w = t2.eval_deriv(x) / t2.eval(x);
            (a - a1 - w * w) * s2.eval(x) + w * s2.eval_deriv(x)
        },
        u.kind(),
    )
    .with_label(format!("L[{}]", u.label()));
    if let (Some(b), Some(_)) = (u.bloch_factor(), u1.bloch_factor()) {
        v = v.with_bloch_factor(b);
    }
    if let Some((lo, hi)) = u.domain() {
        v = v.with_domain(lo, hi);
    }
    Ok(v)
}

/// 1/u₁, the partner solution at a₁.
pub fn susy1_kernel(u1: &SchrodingerSolution) -> SchrodingerSolution {
    let (t1, t2) = (u1.clone(), u1.clone());
    let mut v = SchrodingerSolution::new(
        u1.eigenvalue(),
        move |x| t1.eval(x).inv(),
        move |x| {
            let u = t2.eval(x);
            -t2.eval_deriv(x) / (u * u)
        },
        u1.kind(),
    )
    .with_label(format!("1/{}", u1.label()));
    if let Some(b) = u1.bloch_factor() {
        v = v.with_bloch_factor(b.inv());
    }
    v
}

/// Wronskian of two solutions with its first two derivatives, using
/// W′ = (a₁ − a₂)u₁u₂.
#[derive(Debug, Clone, Copy)]
pub struct WronskianJet {
    pub w: C64,
    pub dw: C64,
    pub ddw: C64,
}

pub fn wronskian_jet(u1: &SchrodingerSolution, u2: &SchrodingerSolution, x: f64) -> WronskianJet {
    let da = u1.eigenvalue() - u2.eigenvalue();
    let (p, dp) = (u1.eval(x), u1.eval_deriv(x));
    let (q, dq) = (u2.eval(x), u2.eval_deriv(x));
    WronskianJet {
        w: p * dq - dp * q,
        dw: da * p * q,
        ddw: da * (dp * q + p * dq),
    }
}

fn check_distinct(u1: &SchrodingerSolution, u2: &SchrodingerSolution) -> Result<()> {
    if same(u1.eigenvalue(), u2.eigenvalue()) {
        Err(Error::EqualConstants)
    } else {
        Ok(())
    }
}

/// V₂ = V₀ − 2[ln W(u₁,u₂)]″.
pub fn susy2_potential(v0: &Potential, u1: &SchrodingerSolution, u2: &SchrodingerSolution) -> Result<Potential> {
    check_distinct(u1, u2)?;
    let (base, p, q) = (v0.clone(), u1.clone(), u2.clone());
    let (lo, hi) = scan_window(v0, &[u1, u2]);
    let poles = scan_zeros(&|x| wronskian_jet(u1, u2, x).w, lo, hi, SCAN_POINTS);
    let mut v2 = Potential::new(format!("susy2[{}]", v0.label()), move |z| match on_axis(z) {
        Some(x) => {
            let j = wronskian_jet(&p, &q, x);
            let l = j.dw / j.w;
            flagged(base.eval(z) - (j.ddw / j.w - l * l) * 2.0)
        }
        None => C64::new(f64::NAN, f64::NAN),
    })
    .with_singularities(poles);
    if let (Some(t), Some(_), Some(_)) = (v0.period(), u1.bloch_factor(), u2.bloch_factor()) {
        v2 = v2.with_period(t);
    }
    Ok(v2)
}

fn normalize(v: SchrodingerSolution, x_ref: f64) -> SchrodingerSolution {
    match v.normalized_at(x_ref) {
        Ok(n) => n,
        Err(_) => v,
    }
}

/// Kernel solutions v₁ = u₂/W (eigenvalue a₁) and v₂ = u₁/W (eigenvalue a₂),
/// normalized to 1 at `x_ref`.
pub fn susy2_kernel_solutions(
    u1: &SchrodingerSolution,
    u2: &SchrodingerSolution,
    x_ref: f64,
) -> Result<(SchrodingerSolution, SchrodingerSolution)> {
    check_distinct(u1, u2)?;
    let make = |num_is_second: bool, eigen: C64| {
        let (p, q) = (u1.clone(), u2.clone());
        let (p2, q2) = (u1.clone(), u2.clone());
        let pick = move |a: &SchrodingerSolution, b: &SchrodingerSolution, x: f64| {
            if num_is_second {
                (b.eval(x), b.eval_deriv(x))
            } else {
                (a.eval(x), a.eval_deriv(x))
            }
        };
        let pick2 = pick;
        SchrodingerSolution::new(
            eigen,
            move |x| {
                let j = wronskian_jet(&p, &q, x);
                pick(&p, &q, x).0 / j.w
            },
            move |x| {
                let j = wronskian_jet(&p2, &q2, x);
                let (n, dn) = pick2(&p2, &q2, x);
                (dn * j.w - n * j.dw) / (j.w * j.w)
            },
            u1.kind(),
        )
    };
    let mut v1 = make(true, u1.eigenvalue()).with_label("u2/W");
    let mut v2 = make(false, u2.eigenvalue()).with_label("u1/W");
    if let (Some(b1), Some(b2)) = (u1.bloch_factor(), u2.bloch_factor()) {
        v1 = v1.with_bloch_factor(b1.inv());
        v2 = v2.with_bloch_factor(b2.inv());
    }
    Ok((normalize(v1, x_ref), normalize(v2, x_ref)))
}

/// The 3×3 Wronskian W(u₁,u₂,u) and its derivative, with second and third
/// derivatives eliminated through the Schrödinger equation.
pub fn wronskian3(u1: &SchrodingerSolution, u2: &SchrodingerSolution, u: &SchrodingerSolution, x: f64) -> (C64, C64) {
    let (a1, a2, a) = (u1.eigenvalue(), u2.eigenvalue(), u.eigenvalue());
    let (p, dp) = (u1.eval(x), u1.eval_deriv(x));
    let (q, dq) = (u2.eval(x), u2.eval_deriv(x));
    let (r, dr) = (u.eval(x), u.eval_deriv(x));
    let w2r = q * dr - dq * r;
    let w1r = p * dr - dp * r;
    let w12 = p * dq - dp * q;
    let w3 = -(a1 * p * w2r - a2 * q * w1r + a * r * w12);
    let dw3 = -(a1 * dp * w2r - a2 * dq * w1r + a * dr * w12);
    (w3, dw3)
}

/// v = W(u₁,u₂,u)/W(u₁,u₂).
pub fn susy2_map(u1: &SchrodingerSolution, u2: &SchrodingerSolution, u: &SchrodingerSolution) -> Result<SchrodingerSolution> {
    check_distinct(u1, u2)?;
    let a = u.eigenvalue();
    if same(a, u1.eigenvalue()) || same(a, u2.eigenvalue()) {
        return Err(Error::UseKernelFormula);
    }
    let parts = Arc::new((u1.clone(), u2.clone(), u.clone()));
    let p2 = parts.clone();
    let mut v = SchrodingerSolution::new(
        a,
        move |x| {
            let (w3, _) = wronskian3(&parts.0, &parts.1, &parts.2, x);
            w3 / wronskian_jet(&parts.0, &parts.1, x).w
        },
        move |x| {
            let (w3, dw3) = wronskian3(&p2.0, &p2.1, &p2.2, x);
            let j = wronskian_jet(&p2.0, &p2.1, x);
            (dw3 * j.w - w3 * j.dw) / (j.w * j.w)
        },
        u.kind(),
    )
    .with_label(format!("W3[{}]", u.label()));
    if let (Some(b), Some(_), Some(_)) = (u.bloch_factor(), u1.bloch_factor(), u2.bloch_factor()) {
        v = v.with_bloch_factor(b);
    }
    Ok(v)
}

/// A first or second order transformation with its transformation functions.
#[derive(Debug, Clone)]
pub struct DarbouxStep {
    functions: Vec<SchrodingerSolution>,
}

impl DarbouxStep {
    pub fn first(u1: SchrodingerSolution) -> Self {
        Self { functions: vec![u1] }
    }

    pub fn second(u1: SchrodingerSolution, u2: SchrodingerSolution) -> Result<Self> {
        check_distinct(&u1, &u2)?;
        Ok(Self { functions: vec![u1, u2] })
    }

    pub fn order(&self) -> usize {
        self.functions.len()
    }

    pub fn transformation_functions(&self) -> &[SchrodingerSolution] {
        &self.functions
    }

    pub fn factorization_constants(&self) -> Vec<C64> {
        self.functions.iter().map(|u| u.eigenvalue()).collect()
    }

    pub fn potential(&self, v0: &Potential) -> Result<Potential> {
        match self.functions.as_slice() {
            [u1] => Ok(susy1_potential(v0, u1)),
            [u1, u2] => susy2_potential(v0, u1, u2),
            _ => unreachable!("order is 1 or 2"),
        }
    }

    pub fn map(&self, u: &SchrodingerSolution) -> Result<SchrodingerSolution> {
        match self.functions.as_slice() {
            [u1] => susy1_map(u1, u),
            [u1, u2] => susy2_map(u1, u2, u),
            _ => unreachable!("order is 1 or 2"),
        }
    }

    /// Zeros of u₁ (order 1) or W(u₁,u₂) (order 2) on [a, b].
    pub fn poles(&self, a: f64, b: f64) -> Vec<f64> {
        match self.functions.as_slice() {
            [u1] => scan_zeros(&|x| u1.eval(x), a, b, SCAN_POINTS),
            [u1, u2] => scan_zeros(&|x| wronskian_jet(u1, u2, x).w, a, b, SCAN_POINTS),
            _ => unreachable!("order is 1 or 2"),
        }
    }
}
