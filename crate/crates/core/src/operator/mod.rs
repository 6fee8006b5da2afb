//! Numerical oracle for −u″ + V u = a u: potentials, ODE solutions,
//! residuals, Wronskians and Bloch factors.

mod checks;
mod ode;
mod potential;
mod solution;

pub use checks::{
    bloch_factor, linspace, monodromy, residual, residual_with_tol, second_derivative, shift_fit, within,
    wronskian, BlochEstimate, CheckStatus, Monodromy, ShiftFit, VerificationReport, MAX_EXCLUDED_FRACTION,
};
pub use ode::{integrate, integrate_schrodinger, integrate_schrodinger_span, integrate_schrodinger_span_tol, integrate_schrodinger_tol, DenseOutput};
pub use potential::Potential;
pub use solution::{SchrodingerSolution, SolutionKind};
