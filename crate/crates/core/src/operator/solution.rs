use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::C64;

type RealFn = dyn Fn(f64) -> C64 + Send + Sync;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    ClosedForm,
    Numeric,
}

/// A solution of −u″ + V u = a u on the real axis.
#[derive(Clone)]
pub struct SchrodingerSolution {
    eigenvalue: C64,
    value: Arc<RealFn>,
    deriv: Arc<RealFn>,
    bloch_factor: Option<C64>,
    kind: SolutionKind,
    domain: Option<(f64, f64)>,
    label: String,
}

impl fmt::Debug for SchrodingerSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchrodingerSolution")
            .field("label", &self.label)
            .field("eigenvalue", &self.eigenvalue)
            .field("bloch_factor", &self.bloch_factor)
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .finish()
    }
}

impl SchrodingerSolution {
    pub fn new(
        eigenvalue: C64,
        value: impl Fn(f64) -> C64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> C64 + Send + Sync + 'static,
        kind: SolutionKind,
    ) -> Self {
        Self {
            eigenvalue,
            value: Arc::new(value),
            deriv: Arc::new(deriv),
            bloch_factor: None,
            kind,
            domain: None,
            label: String::new(),
        }
    }

    /// A closed-form solution.
    pub fn closed_form(
        eigenvalue: C64,
        value: impl Fn(f64) -> C64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(eigenvalue, value, deriv, SolutionKind::ClosedForm)
    }

    pub fn with_bloch_factor(mut self, beta: C64) -> Self {
        self.bloch_factor = Some(beta);
        self
    }

    pub fn with_domain(mut self, a: f64, b: f64) -> Self {
        self.domain = Some((a.min(b), a.max(b)));
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn eigenvalue(&self) -> C64 {
        self.eigenvalue
    }

    pub fn eval(&self, x: f64) -> C64 {
        (self.value)(x)
    }

    pub fn eval_deriv(&self, x: f64) -> C64 {
        (self.deriv)(x)
    }

    pub fn bloch_factor(&self) -> Option<C64> {
        self.bloch_factor
    }

    pub fn kind(&self) -> SolutionKind {
        self.kind
    }

    pub fn domain(&self) -> Option<(f64, f64)> {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// u′/u.
    pub fn log_derivative(&self, x: f64) -> C64 {
        self.eval_deriv(x) / self.eval(x)
    }

    /// c·u.
    pub fn scaled(&self, c: C64) -> Self {
        let (v, d) = (self.value.clone(), self.deriv.clone());
        let mut out = self.clone();
        out.value = Arc::new(move |x| v(x) * c);
        out.deriv = Arc::new(move |x| d(x) * c);
        out
    }

    /// The multiple with u(x_ref) = 1.
    pub fn normalized_at(&self, x_ref: f64) -> Result<Self> {
        let u0 = self.eval(x_ref);
        if !(u0.norm() > 1e-300) || !u0.re.is_finite() || !u0.im.is_finite() {
            return Err(Error::Node(x_ref));
        }
        Ok(self.scaled(u0.inv()))
    }

    /// u + c·v; both must share the eigenvalue.
    pub fn combine(&self, c: C64, other: &Self) -> Result<Self> {
        let scale = 1.0 + self.eigenvalue.norm();
        if (self.eigenvalue - other.eigenvalue).norm() > 1e-9 * scale {
            return Err(Error::InvalidParameter("combined solutions must share the eigenvalue".into()));
        }
        let (v1, d1) = (self.value.clone(), self.deriv.clone());
        let (v2, d2) = (other.value.clone(), other.deriv.clone());
        let mut out = Self::new(
            self.eigenvalue,
            move |x| v1(x) + v2(x) * c,
            move |x| d1(x) + d2(x) * c,
            self.kind,
        );
        out.label = format!("{} + ({})·{}", self.label, c, other.label);
        out.domain = self.domain;
        Ok(out)
    }
}
