//! Square roots continued along the real axis.

use std::sync::Arc;

use crate::C64;

type SquareFn = dyn Fn(f64) -> C64 + Send + Sync;

/// Default spacing of the stored roots.
pub const TRACK_STEP: f64 = 0.005;

/// The root of f(x) continued from a base point, where it is chosen as the
/// principal root. Each step picks the sign closest to a linear extrapolation
/// of the two previous roots, so simple zeros of the root are crossed
/// correctly.
#[derive(Clone)]
pub struct TrackedSqrt {
    f: Arc<SquareFn>,
    x0: f64,
    h: f64,
    right: Arc<Vec<C64>>,
    left: Arc<Vec<C64>>,
}

impl std::fmt::Debug for TrackedSqrt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TrackedSqrt")
            .field("x0", &self.x0)
            .field("span", &self.span())
            .finish()
    }
}

fn pick(root: C64, pred: C64) -> C64 {
    if (root - pred).norm() <= (root + pred).norm() {
        root
    } else {
        -root
    }
}

fn ambiguous(root: C64, pred: C64) -> bool {
    let (a, b) = ((root - pred).norm(), (root + pred).norm());
    a.min(b) > 0.3 * a.max(b)
}

impl TrackedSqrt {
    /// Tracks √f on [lo, hi] from `x0`; evaluation outside keeps walking.
    pub fn new(f: impl Fn(f64) -> C64 + Send + Sync + 'static, x0: f64, lo: f64, hi: f64) -> Self {
        Self::with_step(f, x0, lo, hi, TRACK_STEP)
    }

    pub fn with_step(f: impl Fn(f64) -> C64 + Send + Sync + 'static, x0: f64, lo: f64, hi: f64, h: f64) -> Self {
        let f: Arc<SquareFn> = Arc::new(f);
        let r0 = f(x0).sqrt();
        let n_right = ((hi - x0).max(0.0) / h).ceil() as usize + 1;
        let n_left = ((x0 - lo).max(0.0) / h).ceil() as usize + 1;
        let right = walk(&*f, x0, h, r0, n_right);
        let left = walk(&*f, x0, -h, r0, n_left);
        Self {
            f,
            x0,
            h,
            right: Arc::new(right),
            left: Arc::new(left),
        }
    }

    /// Interval covered by stored roots.
    pub fn span(&self) -> (f64, f64) {
        (
            self.x0 - self.h * (self.left.len() - 1) as f64,
            self.x0 + self.h * (self.right.len() - 1) as f64,
        )
    }

    /// The squared function.
    pub fn square(&self, x: f64) -> C64 {
        (self.f)(x)
    }

    pub fn eval(&self, x: f64) -> C64 {
        let (table, step) = if x >= self.x0 {
            (&self.right, self.h)
        } else {
            (&self.left, -self.h)
        };
        let t = (x - self.x0) / step;
        let last = table.len() - 1;
        if t > last as f64 {
            let xs = self.x0 + step * last as f64;
            let prev = if last > 0 { table[last - 1] } else { table[last] };
            let n = ((x - xs) / step).ceil() as usize;
            let sub = (x - xs) / n as f64;
            let tail = walk_from(&*self.f, xs, sub, prev, table[last], n);
            return tail[n];
        }
        let k = t.round() as usize;
        let rk = table[k];
        let slope = if k > 0 {
            rk - table[k - 1]
        } else if table.len() > 1 {
            table[1] - rk
        } else {
            C64::new(0.0, 0.0)
        };
        let pred = rk + slope * (t - k as f64);
        pick((self.f)(x).sqrt(), pred)
    }
}

fn walk(f: &SquareFn, x0: f64, h: f64, r0: C64, n: usize) -> Vec<C64> {
    let mut out = vec![r0];
    let mut prev = r0;
    let mut cur = r0;
    for k in 1..n {
        let next = step(f, x0 + h * (k - 1) as f64, h, prev, cur, 0);
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

fn walk_from(f: &SquareFn, xs: f64, h: f64, prev: C64, cur: C64, n: usize) -> Vec<C64> {
    let (mut p, mut c) = (prev, cur);
    let mut out = vec![c];
    for k in 0..n {
        let next = step(f, xs + h * k as f64, h, p, c, 0);
        p = c;
        c = next;
        out.push(c);
    }
    out
}

fn step(f: &SquareFn, x: f64, h: f64, prev: C64, cur: C64, depth: u32) -> C64 {
    let pred = cur * 2.0 - prev;
    let root = f(x + h).sqrt();
    if depth < 4 && ambiguous(root, pred) {
        let sub = h / 8.0;
        let (mut p, mut c) = (cur - (cur - prev) / 8.0, cur);
        for k in 0..8 {
            let next = step(f, x + sub * k as f64, sub, p, c, depth + 1);
            p = c;
            c = next;
        }
        return c;
    }
    pick(root, pred)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn follows_exp_through_many_turns() {
        let s = TrackedSqrt::new(|x| C64::new(0.0, 2.0 * x).exp(), 0.0, -10.0, 10.0);
        for &x in &[-9.7, -3.1, 0.0, 2.5, 9.9, 14.0] {
            let want = C64::new(0.0, x).exp();
            assert!((s.eval(x) - want).norm() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn crosses_a_simple_zero() {
        let s = TrackedSqrt::new(|x| C64::new((x - 1.0) * (x - 1.0), 0.0), 0.0, -2.0, 4.0);
        assert!((s.eval(3.0) - C64::new(-2.0, 0.0)).norm() < 1e-12);
        assert!((s.eval(-1.0) - C64::new(2.0, 0.0)).norm() < 1e-12);
    }
}
