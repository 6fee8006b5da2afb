use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::{Jet, C64};

type ValueFn = dyn Fn(C64) -> C64 + Send + Sync;
type JetFn = dyn Fn(C64) -> Result<Jet> + Send + Sync;

/// An evaluable potential V(x), optionally with Taylor jets for exact
/// derivatives, a period, and a list of real poles within one period.
#[derive(Clone)]
pub struct Potential {
    label: String,
    value: Arc<ValueFn>,
    jet: Option<Arc<JetFn>>,
    period: Option<f64>,
    singularities: Vec<f64>,
    even: bool,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential")
            .field("label", &self.label)
            .field("period", &self.period)
            .field("singularities", &self.singularities)
            .field("even", &self.even)
            .field("analytic", &self.jet.is_some())
            .finish()
    }
}

impl Potential {
    /// A potential known only through its values.
    pub fn new(label: impl Into<String>, f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            value: Arc::new(f),
            jet: None,
            period: None,
            singularities: Vec::new(),
            even: false,
        }
    }

    /// A potential defined by its Taylor jets; values are the constant terms.
    pub fn from_jet(label: impl Into<String>, j: impl Fn(C64) -> Result<Jet> + Send + Sync + 'static) -> Self {
        let j: Arc<JetFn> = Arc::new(j);
        let jj = j.clone();
        Self {
            label: label.into(),
            value: Arc::new(move |z| jj(z).map(|t| t.value()).unwrap_or(C64::new(f64::NAN, f64::NAN))),
            jet: Some(j),
            period: None,
            singularities: Vec::new(),
            even: false,
        }
    }

    /// V = Σ cₖ xᵏ.
    pub fn polynomial(label: impl Into<String>, coeffs: Vec<f64>) -> Self {
        Self::from_jet(label, move |z| {
            let x = Jet::variable(z);
            let mut acc = Jet::constant(C64::new(0.0, 0.0));
            for &c in coeffs.iter().rev() {
                acc = acc * x + C64::new(c, 0.0);
            }
            Ok(acc)
        })
    }

    pub fn zero() -> Self {
        Self::polynomial("0", vec![0.0])
    }

    pub fn with_period(mut self, period: f64) -> Self {
        self.period = Some(period);
        self
    }

    pub fn with_singularities(mut self, poles: Vec<f64>) -> Self {
        self.singularities = poles;
        self
    }

    /// Marks V as even about the origin.
    pub fn with_even(mut self, even: bool) -> Self {
        self.even = even;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn singularities(&self) -> &[f64] {
        &self.singularities
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn has_jet(&self) -> bool {
        self.jet.is_some()
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.value)(z)
    }

    pub fn at(&self, x: f64) -> C64 {
        self.eval(C64::new(x, 0.0))
    }

    pub fn jet(&self, z: C64) -> Result<Jet> {
        match &self.jet {
            Some(j) => j(z),
            None => Err(Error::InvalidParameter(format!(
                "potential '{}' has no analytic derivatives",
                self.label
            ))),
        }
    }

    /// k-th derivative from the jet.
    pub fn derivative(&self, z: C64, k: usize) -> Result<C64> {
        Ok(self.jet(z)?.derivative(k))
    }

    /// x ↦ V(x + d).
    pub fn shifted(&self, d: C64) -> Self {
        let base = self.clone();
        let mut out = match &self.jet {
            Some(_) => {
                let b = base.clone();
                Self::from_jet(format!("{}(x+{})", self.label, d), move |z| b.jet(z + d))
            }
            None => Self::new(format!("{}(x+{})", self.label, d), move |z| base.eval(z + d)),
        };
        out.period = self.period;
        if d.im == 0.0 {
            out.singularities = self.singularities.iter().map(|s| s - d.re).collect();
        }
        out
    }

    /// Real singular points in [a, b], including periodic copies.
    pub fn singularities_in(&self, a: f64, b: f64) -> Vec<f64> {
        let (lo, hi) = (a.min(b), a.max(b));
        let mut out = Vec::new();
        for &s in &self.singularities {
            match self.period {
                Some(t) if t > 0.0 => {
                    let k0 = ((lo - s) / t).ceil() as i64;
                    let k1 = ((hi - s) / t).floor() as i64;
                    for k in k0..=k1 {
                        out.push(s + k as f64 * t);
                    }
                }
                _ => {
                    if s >= lo && s <= hi {
                        out.push(s);
                    }
                }
            }
        }
        out.sort_by(|x, y| x.partial_cmp(y).unwrap());
        out
    }

    /// Distance from x to the nearest flagged singularity.
    pub fn distance_to_singularity(&self, x: f64) -> f64 {
        let reach = self.period.unwrap_or(1.0).max(1.0);
        self.singularities_in(x - reach, x + reach)
            .iter()
            .map(|s| (s - x).abs())
            .fold(f64::INFINITY, f64::min)
    }
}
