use super::ode::integrate;
use super::potential::Potential;
use super::solution::SchrodingerSolution;
use crate::error::{Error, Result};
use crate::settings::Settings;
use crate::C64;

/// Share of excluded grid points above which a check is degenerate.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Too many grid points had to be excluded.
    Degenerate,
}

/// Residual statistics of one check over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check_name: String,
    pub grid: Vec<f64>,
    pub max_abs_dev: f64,
    pub mean_abs_dev: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub excluded: usize,
    pub status: CheckStatus,
}

impl VerificationReport {
    /// `grid` lists the points actually used; `excluded` counts the rest.
    pub fn from_deviations(name: impl Into<String>, grid: Vec<f64>, devs: &[f64], tolerance: f64, excluded: usize) -> Self {
        let n = devs.len();
        let max = devs.iter().cloned().fold(0.0f64, |m, d| if d.is_nan() { f64::NAN } else { m.max(d) });
        let mean = if n == 0 { f64::NAN } else { devs.iter().sum::<f64>() / n as f64 };
        let total = n + excluded;
        let degenerate = n == 0 || excluded as f64 > MAX_EXCLUDED_FRACTION * total as f64;
        let ok = max <= tolerance;
        let status = if degenerate {
            CheckStatus::Degenerate
        } else if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            check_name: name.into(),
            grid,
            max_abs_dev: max,
            mean_abs_dev: mean,
            tolerance,
            passed: status == CheckStatus::Pass,
            excluded,
            status,
        }
    }

    /// Deviation of complex samples from their mean, passing when
    /// max |z − mean| ≤ atol + rtol·|mean|. Returns the mean too.
    pub fn constancy(
        name: impl Into<String>,
        grid: Vec<f64>,
        values: &[C64],
        atol: f64,
        rtol: f64,
        excluded: usize,
    ) -> (Self, C64) {
        let n = values.len().max(1) as f64;
        let mean = values.iter().sum::<C64>() / n;
        let devs: Vec<f64> = values.iter().map(|v| (v - mean).norm()).collect();
        let tol = atol + rtol * mean.norm();
        (Self::from_deviations(name, grid, &devs, tol, excluded), mean)
    }
}

/// |Δ| ≤ atol + rtol·scale.
pub fn within(delta: f64, atol: f64, rtol: f64, scale: f64) -> bool {
    delta <= atol + rtol * scale
}

/// Uniform grid of n points on [a, b].
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Sixth order central second difference.
fn second_difference(f: &dyn Fn(f64) -> C64, x: f64, h: f64) -> C64 {
    let c = [2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0];
    let mut s = C64::new(0.0, 0.0);
    for (i, w) in c.iter().enumerate() {
        s += f(x + (i as f64 - 3.0) * h) * *w;
    }
    s / (180.0 * h * h)
}

/// u″ with the step chosen where successive halvings agree best.
pub fn second_derivative(f: &dyn Fn(f64) -> C64, x: f64) -> C64 {
    let steps = [0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125];
    let mut best = (f64::INFINITY, C64::new(f64::NAN, f64::NAN));
    let mut prev = second_difference(f, x, steps[0]);
    for &h in &steps[1..] {
        let cur = second_difference(f, x, h);
        let gap = (cur - prev).norm();
        if gap < best.0 {
            best = (gap, cur);
        }
        prev = cur;
    }
    best.1
}

/// Residual |−u″ + (V − a)u| / (1 + |a||u|) of `sol` on the grid. Points
/// closer than the singularity margin to a flagged pole are excluded.
pub fn residual(v: &Potential, sol: &SchrodingerSolution, grid: &[f64]) -> VerificationReport {
    residual_with_tol(v, sol, grid, Settings::default().tol(1e-6))
}

pub fn residual_with_tol(v: &Potential, sol: &SchrodingerSolution, grid: &[f64], tol: f64) -> VerificationReport {
    let settings = Settings::default();
    let margin = settings.singularity_margin * v.period().unwrap_or(1.0);
    let a = sol.eigenvalue();
    let f = |x: f64| sol.eval(x);
    let mut used = Vec::new();
    let mut devs = Vec::new();
    let mut excluded = 0;
    for &x in grid {
        if v.distance_to_singularity(x) < margin {
            excluded += 1;
            continue;
        }
        let u = sol.eval(x);
        let upp = second_derivative(&f, x);
        let r = (-upp + (v.at(x) - a) * u).norm() / (1.0 + a.norm() * u.norm());
        used.push(x);
        devs.push(r);
    }
    VerificationReport::from_deviations(format!("residual[{}]", sol.label()), used, &devs, tol, excluded)
}

/// u(x)v′(x) − u′(x)v(x).
pub fn wronskian(u: &SchrodingerSolution, v: &SchrodingerSolution, x: f64) -> C64 {
    u.eval(x) * v.eval_deriv(x) - u.eval_deriv(x) * v.eval(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochEstimate {
    pub beta: C64,
    /// max |rᵢ − β| / |β| over the sample ratios rᵢ = u(xᵢ+T)/u(xᵢ).
    pub dispersion: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Component-wise median of u(x+T)/u(x) over the samples.
pub fn bloch_factor(sol: &SchrodingerSolution, period: f64, samples: &[f64]) -> Result<BlochEstimate> {
    let ratios: Vec<C64> = samples
        .iter()
        .map(|&x| sol.eval(x + period) / sol.eval(x))
        .filter(|r| r.re.is_finite() && r.im.is_finite())
        .collect();
    if ratios.is_empty() {
        return Err(Error::NotBloch(f64::INFINITY));
    }
    let beta = C64::new(median(ratios.iter().map(|r| r.re).collect()), median(ratios.iter().map(|r| r.im).collect()));
    let dispersion = ratios.iter().map(|r| (r - beta).norm()).fold(0.0, f64::max) / beta.norm();
    if !(dispersion <= 1e-4) {
        return Err(Error::NotBloch(dispersion));
    }
    Ok(BlochEstimate { beta, dispersion })
}

/// Monodromy over one period from the two canonical solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monodromy {
    /// [[u₁(x0+T), u₂(x0+T)], [u₁′(x0+T), u₂′(x0+T)]]
    pub matrix: [[C64; 2]; 2],
    /// Hill discriminant u₁(x0+T) + u₂′(x0+T).
    pub trace: C64,
    /// Eigenvalues of the monodromy, ordered by increasing modulus.
    pub multipliers: (C64, C64),
}

impl Monodromy {
    /// `true` if both multipliers lie on the unit circle within `tol`.
    pub fn is_allowed(&self, tol: f64) -> bool {
        (self.multipliers.0.norm() - 1.0).abs() <= tol && (self.multipliers.1.norm() - 1.0).abs() <= tol
    }
}

pub fn monodromy(v: &Potential, a: C64, x0: f64, period: f64) -> Result<Monodromy> {
    let tol = Settings::default().ode_tol * 1e-2;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let s1 = integrate(v, a, x0, [one, zero], x0 + period, tol)?.eval(x0 + period);
    let s2 = integrate(v, a, x0, [zero, one], x0 + period, tol)?.eval(x0 + period);
    let m = [[s1[0], s2[0]], [s1[1], s2[1]]];
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr / 4.0 - det).sqrt();
    let (b1, b2) = (tr / 2.0 + disc, tr / 2.0 - disc);
    let multipliers = if b1.norm() <= b2.norm() { (b1, b2) } else { (b2, b1) };
    Ok(Monodromy { matrix: m, trace: tr, multipliers })
}

/// Best shift ŝ minimizing the grid L² distance between V₁(x) and V₀(x + ŝ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftFit {
    pub shift: f64,
    /// RMS of V₁(x) − V₀(x + ŝ) over the grid.
    pub residual: f64,
    /// RMS of V₀ over the grid.
    pub reference_norm: f64,
}

impl ShiftFit {
    pub fn relative(&self) -> f64 {
        self.residual / self.reference_norm
    }

    /// The displaced-copy rule: residual below 1e−6·‖V₀‖.
    pub fn is_displaced_copy(&self) -> bool {
        self.residual < 1e-6 * self.reference_norm
    }
}

pub fn shift_fit(v1: &dyn Fn(f64) -> C64, v0: &Potential, grid: &[f64], range: (f64, f64), coarse: usize) -> ShiftFit {
    let target: Vec<C64> = grid.iter().map(|&x| v1(x)).collect();
    let n = grid.len().max(1) as f64;
    let dist = |s: f64| -> f64 {
        let acc: f64 = grid.iter().zip(&target).map(|(&x, t)| (t - v0.at(x + s)).norm_sqr()).sum();
        (acc / n).sqrt()
    };
    let reference_norm = (grid.iter().map(|&x| v0.at(x).norm_sqr()).sum::<f64>() / n).sqrt();
    let (lo, hi) = range;
    let coarse = coarse.max(2);
    let step = (hi - lo) / coarse as f64;
    let mut best = (f64::INFINITY, lo);
    for i in 0..=coarse {
        let s = lo + step * i as f64;
        let d = dist(s);
        if d < best.0 {
            best = (d, s);
        }
    }
    // golden section on the bracketing cell
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (best.1 - step, best.1 + step);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (dist(c), dist(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = dist(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = dist(d);
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    let s = 0.5 * (a + b);
    let r = dist(s);
    let (shift, residual) = if r <= best.0 { (s, r) } else { (best.1, best.0) };
    ShiftFit {
        shift,
        residual,
        reference_norm,
    }
}
