//! First and second order displacement invariance tests, the auxiliary
//! function p(x) and the four Bloch log-derivatives it determines.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operator::{linspace, Potential, SchrodingerSolution, SolutionKind, VerificationReport};
use crate::settings::Settings;
use crate::{Jet, C64};

/// Points where |D|, |M| or |p| fall below this are excluded.
pub const DEGENERATE: f64 = 1e-8;
/// Default grid size of the invariance checks.
pub const DEFAULT_POINTS: usize = 200;

const CANCEL_TOL: f64 = 1e-7;
/// Radius around a symmetric point inside which jets are re-expanded.
pub const NEAR_SYMMETRIC: f64 = 0.15;

/// Which root of the quadratic for p is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PBranch {
    Plus,
    Minus,
}

/// Factorization constants producing a displacement `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementPair {
    pub a1: C64,
    pub a2: C64,
    pub d: C64,
    pub branch: PBranch,
}

impl DisplacementPair {
    pub fn sum(&self) -> C64 {
        self.a1 + self.a2
    }

    pub fn difference(&self) -> C64 {
        self.a1 - self.a2
    }
}

/// S = V₀(x) + V₀(x+d) and D = V₀(x) − V₀(x+d) with their Taylor jets.
#[derive(Debug, Clone)]
pub struct ShiftPair {
    v0: Potential,
    d: C64,
}

/// Jets of S, D, S′/D, T, M and T′/M at one point.
#[derive(Debug, Clone, Copy)]
pub struct ShiftJets {
    pub s: Jet,
    pub d: Jet,
    /// S′/D
    pub q: Jet,
    pub t: Jet,
    pub m: Jet,
    /// T′/M
    pub r: Jet,
    /// Expanded about a symmetric point with the 0/0 cancelled.
    pub regularized: bool,
}

impl ShiftJets {
    /// T − ¼(T′/M)², which equals 4(a₁ + a₂) for invariant potentials.
    pub fn four_a_sum(&self) -> Jet {
        self.t - self.r * self.r * C64::new(0.25, 0.0)
    }

    pub fn p(&self, branch: PBranch) -> Jet {
        let half = self.r * C64::new(0.5, 0.0);
        match branch {
            PBranch::Plus => self.q + half,
            PBranch::Minus => self.q - half,
        }
    }

    /// `true` if D or M vanish while T′ does not.
    pub fn is_degenerate(&self) -> bool {
        if self.regularized {
            return false;
        }
        let t_flat = self.t.derivative(1).norm() < DEGENERATE * (1.0 + self.t.value().norm());
        self.d.value().norm() < DEGENERATE || (self.m.value().norm() < DEGENERATE && !t_flat)
    }

    fn recenter(&self, h: C64) -> Self {
        Self {
            s: self.s.recenter(h),
            d: self.d.recenter(h),
            q: self.q.recenter(h),
            t: self.t.recenter(h),
            m: self.m.recenter(h),
            r: self.r.recenter(h),
            regularized: true,
        }
    }
}

fn div(num: &Jet, den: &Jet, cancel: bool) -> Jet {
    if cancel {
        num.div_cancel(den, CANCEL_TOL)
    } else {
        *num / *den
    }
}

impl ShiftPair {
    pub fn new(v0: &Potential, d: C64) -> Result<Self> {
        if !v0.has_jet() {
            return Err(Error::InvalidParameter(format!("potential '{}' has no analytic derivatives", v0.label())));
        }
        if d.norm() == 0.0 {
            return Err(Error::InvalidParameter("displacement must be nonzero".into()));
        }
        Ok(Self { v0: v0.clone(), d })
    }

    pub fn potential(&self) -> &Potential {
        &self.v0
    }

    pub fn displacement(&self) -> C64 {
        self.d
    }

    pub fn sum(&self, x: C64) -> C64 {
        self.v0.eval(x) + self.v0.eval(x + self.d)
    }

    pub fn difference(&self, x: C64) -> C64 {
        self.v0.eval(x) - self.v0.eval(x + self.d)
    }

    /// Nearest point x = −d/2 (modulo half a period) of an even potential,
    /// where D, S′ and M vanish together.
    pub fn symmetric_point(&self, x: C64) -> Option<C64> {
        if !self.v0.is_even() {
            return None;
        }
        let base = -self.d * 0.5;
        let xs = match self.v0.period() {
            Some(t) => {
                let half = 0.5 * t;
                let k = ((x.re - base.re) / half).round();
                base + k * half
            }
            None => base,
        };
        Some(xs)
    }

    fn raw_jets(&self, x: C64, cancel: bool) -> Result<ShiftJets> {
        let a = self.v0.jet(x)?;
        let b = self.v0.jet(x + self.d)?;
        let (s, d) = (a + b, a - b);
        let q = div(&s.deriv(), &d, cancel);
        let t = q * q + s * C64::new(4.0, 0.0) - div(&d.deriv().deriv(), &d, cancel) * C64::new(2.0, 0.0);
        let m = d - q.deriv();
        let tp = t.deriv();
        // T′ ≡ 0 and M ≡ 0, as for the first order invariant potentials
        let order = if cancel { 2 } else { 1 };
        let small = |j: &Jet, tol: f64| j.coeffs().iter().take(order).all(|c| c.norm() < tol);
        let flat = small(&tp, DEGENERATE * (1.0 + t.value().norm())) && small(&m, DEGENERATE);
        let r = if flat {
            Jet::constant(C64::new(0.0, 0.0)).truncate(tp.len())
        } else {
            div(&tp, &m, cancel)
        };
        Ok(ShiftJets { s, d, q, t, m, r, regularized: cancel })
    }

    /// Jets at x. Within `NEAR_SYMMETRIC` of a symmetric point of an even
    /// potential the jets are expanded there, with the common zero of the
    /// numerators and denominators cancelled, and re-centred at x.
    pub fn jets(&self, x: C64) -> Result<ShiftJets> {
        if let Some(xs) = self.symmetric_point(x) {
            let h = x - xs;
            if h.norm() < NEAR_SYMMETRIC {
                return Ok(self.raw_jets(xs, true)?.recenter(h));
            }
        }
        self.raw_jets(x, false)
    }

    pub fn t(&self, x: C64) -> Result<C64> {
        Ok(self.jets(x)?.t.value())
    }

    pub fn m(&self, x: C64) -> Result<C64> {
        Ok(self.jets(x)?.m.value())
    }
}

/// S, D, T and M for the displacement `d`.
pub fn tmsd(v0: &Potential, d: C64) -> Result<ShiftPair> {
    ShiftPair::new(v0, d)
}

/// 200 points over one period, or over [−5, 5] without a period, dropping
/// points within the singularity margin of a pole.
pub fn default_grid(v0: &Potential) -> Vec<f64> {
    let settings = Settings::default();
    let (lo, hi, margin) = match v0.period() {
        Some(t) => (0.0, t, settings.singularity_margin * t),
        None => (-5.0, 5.0, settings.singularity_margin),
    };
    linspace(lo, hi, DEFAULT_POINTS).into_iter().filter(|&x| v0.distance_to_singularity(x) >= margin).collect()
}

fn finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn constancy(name: &str, used: Vec<f64>, values: &[C64], excluded: usize, total: usize) -> Result<(VerificationReport, C64)> {
    if used.is_empty() {
        return Err(Error::DegenerateGrid { excluded, total });
    }
    let s = Settings::default();
    Ok(VerificationReport::constancy(name, used, values, s.tol(1e-9), s.tol(1e-8), excluded))
}

/// Constancy of V₀(x) + V₀(x+d) − ½[(V₀′(x) + V₀′(x+d))/(V₀(x) − V₀(x+d))]².
pub fn susy1_invariance_lhs(v0: &Potential, d: C64, grid: &[f64]) -> Result<VerificationReport> {
    let pair = ShiftPair::new(v0, d)?;
    let (mut used, mut values, mut excluded) = (Vec::new(), Vec::new(), 0);
    for &x in grid {
        let z = C64::new(x, 0.0);
        let a = v0.jet(z)?;
        let b = v0.jet(z + pair.d)?;
        let dd = a.value() - b.value();
        if dd.norm() < DEGENERATE {
            excluded += 1;
            continue;
        }
        let r = (a.derivative(1) + b.derivative(1)) / dd;
        let val = a.value() + b.value() - r * r * 0.5;
        if !finite(val) {
            excluded += 1;
            continue;
        }
        used.push(x);
        values.push(val);
    }
    Ok(constancy("susy1_invariance", used, &values, excluded, grid.len())?.0)
}

/// Evaluates 4(a₁+a₂) = T − ¼[T′/M]² on the grid and tests it for constancy.
/// Returns the report and the grid mean of a₁ + a₂.
pub fn susy2_invariance_test(v0: &Potential, d: C64, grid: &[f64]) -> Result<(VerificationReport, C64)> {
    let pair = ShiftPair::new(v0, d)?;
    let (mut used, mut values, mut excluded) = (Vec::new(), Vec::new(), 0);
    for &x in grid {
        let z = C64::new(x, 0.0);
        let j = pair.jets(z)?;
        if j.is_degenerate() {
            excluded += 1;
            continue;
        }
        let val = j.four_a_sum().value();
        if !finite(val) {
            excluded += 1;
            continue;
        }
        used.push(x);
        values.push(val);
    }
    let (rep, mean) = constancy("susy2_invariance", used, &values, excluded, grid.len())?;
    Ok((rep, mean / 4.0))
}

type PJetFn = dyn Fn(C64) -> Result<Jet> + Send + Sync;

/// p(x) = 2[ln W(u₁⁺, u₂⁻)]′, with p′ = V₀(x) − V₀(x+d).
#[derive(Clone)]
pub struct PFunction {
    jet: Arc<PJetFn>,
}

impl std::fmt::Debug for PFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("PFunction")
    }
}

/// The four log-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDerivatives {
    /// [ln u₂⁻(x)]′
    pub u2_minus: C64,
    /// [ln u₁⁺(x)]′
    pub u1_plus: C64,
    /// [ln u₂⁺]′ at x + d
    pub u2_plus_shifted: C64,
    /// [ln u₁⁻]′ at x + d
    pub u1_minus_shifted: C64,
}

/// Log-derivatives from p, p′ and the factorization constants.
pub fn log_derivatives(p: C64, dp: C64, a1: C64, a2: C64) -> LogDerivatives {
    let (base, quarter, k) = (dp / (p * 2.0), p / 4.0, (a1 - a2) / p);
    LogDerivatives {
        u2_minus: base + quarter + k,
        u1_plus: base + quarter - k,
        u2_plus_shifted: base - quarter - k,
        u1_minus_shifted: base - quarter + k,
    }
}

impl PFunction {
    pub fn from_jet(f: impl Fn(C64) -> Result<Jet> + Send + Sync + 'static) -> Self {
        Self { jet: Arc::new(f) }
    }

    pub fn jet(&self, x: C64) -> Result<Jet> {
        (self.jet)(x)
    }

    pub fn value(&self, x: f64) -> Result<C64> {
        Ok(self.jet(C64::new(x, 0.0))?.value())
    }

    pub fn log_derivatives(&self, x: f64, a1: C64, a2: C64) -> Result<LogDerivatives> {
        let j = self.jet(C64::new(x, 0.0))?;
        Ok(log_derivatives(j.value(), j.derivative(1), a1, a2))
    }
}

/// p = S′/D ± ½T′/M; only the plus branch satisfies p′ = D.
pub fn reconstruct_p(v0: &Potential, d: C64, branch: PBranch) -> Result<PFunction> {
    let pair = ShiftPair::new(v0, d)?;
    Ok(PFunction::from_jet(move |x| {
        let j = pair.jets(x)?;
        if j.is_degenerate() {
            return Err(Error::Pole { re: x.re, im: x.im });
        }
        Ok(j.p(branch))
    }))
}

fn pointwise_report(name: &str, grid: &[f64], tol: f64, f: impl Fn(f64) -> Result<f64>) -> VerificationReport {
    let (mut used, mut devs, mut excluded) = (Vec::new(), Vec::new(), 0);
    for &x in grid {
        match f(x) {
            Ok(v) if v.is_finite() => {
                used.push(x);
                devs.push(v);
            }
            _ => excluded += 1,
        }
    }
    VerificationReport::from_deviations(name, used, &devs, tol, excluded)
}

/// |p′ − D| / (1 + |D|) on the grid.
pub fn check_p_derivative(v0: &Potential, d: C64, p: &PFunction, grid: &[f64]) -> Result<VerificationReport> {
    let pair = ShiftPair::new(v0, d)?;
    let tol = Settings::default().tol(1e-9);
    Ok(pointwise_report("p_derivative", grid, tol, |x| {
        let j = p.jet(C64::new(x, 0.0))?;
        let dd = pair.difference(C64::new(x, 0.0));
        Ok((j.derivative(1) - dd).norm() / (1.0 + dd.norm()))
    }))
}

/// Residual of 2pp″ − p′² + ¼p⁴ + 4(a₁−a₂)² + 2p²(a₁+a₂−S), relative to
/// 1 + ¼|p|⁴.
pub fn check_quadratic_p(
    v0: &Potential,
    d: C64,
    p: &PFunction,
    a1: C64,
    a2: C64,
    grid: &[f64],
) -> Result<VerificationReport> {
    let pair = ShiftPair::new(v0, d)?;
    let tol = Settings::default().tol(1e-8);
    Ok(pointwise_report("quadratic_p", grid, tol, |x| {
        let z = C64::new(x, 0.0);
        let j = p.jet(z)?;
        let (p0, p1, p2) = (j.value(), j.derivative(1), j.derivative(2));
        let s = pair.sum(z);
        let da = a1 - a2;
        let e = p0 * p2 * 2.0 - p1 * p1 + p0.powi(4) * 0.25 + da * da * 4.0 + p0 * p0 * (a1 + a2 - s) * 2.0;
        Ok(e.norm() / (1.0 + 0.25 * p0.norm().powi(4)))
    }))
}

/// [ln W]″ from the log-derivatives l₁ = [ln u₁⁺]′, l₂ = [ln u₂⁻]′:
/// (a₁−a₂)(l₁+l₂)/(l₂−l₁) − [(a₁−a₂)/(l₂−l₁)]², compared with D/2.
pub fn check_wronskian_identity(
    v0: &Potential,
    d: C64,
    p: &PFunction,
    a1: C64,
    a2: C64,
    grid: &[f64],
) -> Result<VerificationReport> {
    let pair = ShiftPair::new(v0, d)?;
    let tol = Settings::default().tol(1e-8);
    Ok(pointwise_report("log_wronskian", grid, tol, |x| {
        let l = p.log_derivatives(x, a1, a2)?;
        let (l1, l2) = (l.u1_plus, l.u2_minus);
        let da = a1 - a2;
        let r = da / (l2 - l1);
        let lw = da * (l1 + l2) / (l2 - l1) - r * r;
        let half_d = pair.difference(C64::new(x, 0.0)) * 0.5;
        Ok((lw - half_d).norm() / (1.0 + half_d.norm()))
    }))
}

const GL_NODES: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL_WEIGHTS: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

fn gauss8(f: &dyn Fn(f64) -> C64, a: f64, b: f64) -> C64 {
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = C64::new(0.0, 0.0);
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        s += (f(m - h * x) + f(m + h * x)) * w;
    }
    s * h
}

const PANEL: f64 = 0.02;

/// u = exp ∫ₓ₀ˣ f with u′ = f·u, by composite Gauss–Legendre quadrature on
/// [lo, hi]. `f` must be regular there.
pub fn solution_from_log_derivative(
    eigenvalue: C64,
    f: impl Fn(f64) -> C64 + Send + Sync + 'static,
    x0: f64,
    lo: f64,
    hi: f64,
) -> SchrodingerSolution {
    let n = ((hi - lo) / PANEL).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    let nodes: Vec<f64> = (0..=n).map(|i| lo + h * i as f64).collect();
    let mut cum = vec![C64::new(0.0, 0.0); n + 1];
    for i in 0..n {
        cum[i + 1] = cum[i] + gauss8(&f, nodes[i], nodes[i + 1]);
    }
    let f = Arc::new(f);
    let table = Arc::new((nodes, cum, lo, h, n));
    let integral = {
        let (f, table) = (f.clone(), table.clone());
        move |x: f64| {
            let (nodes, cum, lo, h, n) = &*table;
            let k = (((x - lo) / h).floor().max(0.0) as usize).min(*n);
            cum[k] + gauss8(&*f, nodes[k], x)
        }
    };
    let offset = integral(x0);
    let integral = Arc::new(move |x: f64| integral(x) - offset);
    let i2 = integral.clone();
    SchrodingerSolution::new(eigenvalue, move |x| integral(x).exp(), move |x| f(x) * i2(x).exp(), SolutionKind::Numeric)
        .with_domain(lo, hi)
        .with_label("quadrature")
}
