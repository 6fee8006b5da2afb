//! Dormand–Prince 5(4) with Hairer's dense output, for u″ = (V − a)u.

use std::sync::Arc;

use super::potential::Potential;
use super::solution::{SchrodingerSolution, SolutionKind};
use crate::error::{Error, Result};
use crate::settings::Settings;
use crate::C64;

type State = [C64; 2];

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone)]
struct Segment {
    x: f64,
    h: f64,
    r: [State; 5],
}

/// Piecewise quartic interpolant of an accepted step sequence.
#[derive(Debug, Clone)]
pub struct DenseOutput {
    segments: Vec<Segment>,
    lo: f64,
    hi: f64,
}

impl DenseOutput {
    pub fn span(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, x: f64) -> State {
        let seg = self.find(x);
        let th = ((x - seg.x) / seg.h).clamp(0.0, 1.0);
        let th1 = 1.0 - th;
        let mut out = [C64::new(0.0, 0.0); 2];
        for (i, o) in out.iter_mut().enumerate() {
            let r = &seg.r;
            *o = r[0][i] + (r[1][i] + (r[2][i] + (r[3][i] + r[4][i] * th1) * th) * th1) * th;
        }
        out
    }

    fn find(&self, x: f64) -> &Segment {
        let key = |s: &Segment| s.x.min(s.x + s.h);
        let idx = self.segments.partition_point(|s| key(s) <= x);
        &self.segments[idx.saturating_sub(1).min(self.segments.len() - 1)]
    }

    fn merge(mut a: DenseOutput, b: DenseOutput) -> DenseOutput {
        a.segments.extend(b.segments);
        a.segments
            .sort_by(|p, q| p.x.min(p.x + p.h).partial_cmp(&q.x.min(q.x + q.h)).unwrap());
        DenseOutput {
            segments: a.segments,
            lo: a.lo.min(b.lo),
            hi: a.hi.max(b.hi),
        }
    }
}

fn rhs(v: &Potential, a: C64, x: f64, y: &State) -> State {
    [y[1], (v.at(x) - a) * y[0]]
}

fn axpy(y: &State, h: f64, ks: &[State], coef: &[f64]) -> State {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(coef) {
        if c != 0.0 {
            out[0] += k[0] * (h * c);
            out[1] += k[1] * (h * c);
        }
    }
    out
}

/// Integrates from `x0` to `x_end` (either direction).
pub fn integrate(v: &Potential, a: C64, x0: f64, y0: State, x_end: f64, tol: f64) -> Result<DenseOutput> {
    if let Some(&s) = v.singularities_in(x0, x_end).first() {
        return Err(Error::SingularityInRange(s));
    }
    let dir = if x_end >= x0 { 1.0 } else { -1.0 };
    let span = (x_end - x0).abs();
    let mut segments = Vec::new();
    if span == 0.0 {
        return Ok(DenseOutput {
            segments: vec![Segment { x: x0, h: 1.0, r: [y0, [C64::new(0.0, 0.0); 2], [C64::new(0.0, 0.0); 2], [C64::new(0.0, 0.0); 2], [C64::new(0.0, 0.0); 2]] }],
            lo: x0,
            hi: x0,
        });
    }
    let mut x = x0;
    let mut y = y0;
    let mut h = dir * span.min(0.05);
    let mut k0 = rhs(v, a, x, &y);
    for _ in 0..MAX_STEPS {
        if (x_end - x) * dir <= 0.0 {
            break;
        }
        if (x + h - x_end) * dir > 0.0 {
            h = x_end - x;
        }
        if h.abs() < 1e-13 * x.abs().max(1.0) {
            return Err(Error::StepUnderflow(x));
        }
        let mut ks: Vec<State> = Vec::with_capacity(7);
        ks.push(k0);
        for s in 1..7 {
            let ys = axpy(&y, h, &ks, &A[s][..s]);
            ks.push(rhs(v, a, x + C[s] * h, &ys));
        }
        let y_new = axpy(&y, h, &ks[..6], &A[6][..6]);
        let mut err = 0.0f64;
        for i in 0..2 {
            let mut e = C64::new(0.0, 0.0);
            for (s, k) in ks.iter().enumerate() {
                e += k[i] * (h * E[s]);
            }
            let sc = tol + tol * y[i].norm().max(y_new[i].norm());
            err += (e.norm() / sc).powi(2);
        }
        let err = (err / 2.0).sqrt();
        if !err.is_finite() {
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            let k7 = ks[6];
            let mut r = [[C64::new(0.0, 0.0); 2]; 5];
            for i in 0..2 {
                let r1 = y[i];
                let r2 = y_new[i] - y[i];
                let r3 = ks[0][i] * h - r2;
                let r4 = r2 - k7[i] * h - r3;
                let mut r5 = C64::new(0.0, 0.0);
                for (s, k) in ks.iter().enumerate() {
                    r5 += k[i] * (h * D[s]);
                }
                r[0][i] = r1;
                r[1][i] = r2;
                r[2][i] = r3;
                r[3][i] = r4;
                r[4][i] = r5;
            }
            segments.push(Segment { x, h, r });
            x += h;
            y = y_new;
            k0 = k7;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    if (x_end - x) * dir > 0.0 {
        return Err(Error::StepUnderflow(x));
    }
    if dir < 0.0 {
        segments.reverse();
    }
    Ok(DenseOutput {
        segments,
        lo: x0.min(x_end),
        hi: x0.max(x_end),
    })
}

fn solution_from_dense(a: C64, dense: DenseOutput) -> SchrodingerSolution {
    let (lo, hi) = dense.span();
    let d = Arc::new(dense);
    let d2 = d.clone();
    SchrodingerSolution::new(a, move |x| d.eval(x)[0], move |x| d2.eval(x)[1], SolutionKind::Numeric)
        .with_domain(lo, hi)
        .with_label("numeric")
}

/// Numeric solution of u″ = (V − a)u from (u, u′)(x0) = (u0, du0) to x_end.
pub fn integrate_schrodinger(v: &Potential, a: C64, x0: f64, u0: C64, du0: C64, x_end: f64) -> Result<SchrodingerSolution> {
    let tol = Settings::default().ode_tol;
    integrate_schrodinger_tol(v, a, x0, u0, du0, x_end, tol)
}

pub fn integrate_schrodinger_tol(
    v: &Potential,
    a: C64,
    x0: f64,
    u0: C64,
    du0: C64,
    x_end: f64,
    tol: f64,
) -> Result<SchrodingerSolution> {
    let dense = integrate(v, a, x0, [u0, du0], x_end, tol)?;
    Ok(solution_from_dense(a, dense))
}

/// Numeric solution seeded at `x0` and integrated both ways to cover [lo, hi].
pub fn integrate_schrodinger_span(
    v: &Potential,
    a: C64,
    x0: f64,
    u0: C64,
    du0: C64,
    lo: f64,
    hi: f64,
) -> Result<SchrodingerSolution> {
    integrate_schrodinger_span_tol(v, a, x0, u0, du0, lo, hi, Settings::default().ode_tol)
}

#[allow(clippy::too_many_arguments)]
pub fn integrate_schrodinger_span_tol(
    v: &Potential,
    a: C64,
    x0: f64,
    u0: C64,
    du0: C64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<SchrodingerSolution> {
    let fwd = integrate(v, a, x0, [u0, du0], hi.max(x0), tol)?;
    let bwd = integrate(v, a, x0, [u0, du0], lo.min(x0), tol)?;
    Ok(solution_from_dense(a, DenseOutput::merge(bwd, fwd)))
}
