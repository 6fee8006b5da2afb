//! Library-wide numerical settings.

/// Name of the environment variable that scales every default tolerance.
pub const TOLERANCE_SCALE_VAR: &str = "DARBOUX_TOLERANCE_SCALE";

/// Tunable constants. `Settings::default()` reads the tolerance scale from
/// the environment once per call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Distance to a lattice point below which ℘, ℘′, ζ report a pole.
    pub pole_guard: f64,
    /// Grid margin around singularities, in units of the period.
    pub singularity_margin: f64,
    /// ODE absolute and relative tolerance.
    pub ode_tol: f64,
    /// Absolute floor used by mixed comparisons.
    pub atol: f64,
    /// Multiplier applied to every default tolerance.
    pub tolerance_scale: f64,
}

impl Settings {
    pub fn with_scale(tolerance_scale: f64) -> Self {
        Self {
            pole_guard: 1e-12,
            singularity_margin: 0.05,
            ode_tol: 1e-10,
            atol: 1e-12,
            tolerance_scale,
        }
    }

    pub fn from_env() -> Self {
        let scale = std::env::var(TOLERANCE_SCALE_VAR)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|s| s.is_finite() && *s > 0.0)
            .unwrap_or(1.0);
        Self::with_scale(scale)
    }

    /// Applies the tolerance scale to a default tolerance.
    pub fn tol(&self, base: f64) -> f64 {
        base * self.tolerance_scale
    }
}

impl Default for Settings {
    fn default() -> Self {
        Self::from_env()
    }
}
