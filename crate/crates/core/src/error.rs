use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate lattice: Im(omega'/omega) = {0}")]
    DegenerateLattice(f64),
    #[error("pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },
    #[error("non-rectangular lattice: roots are not real and ordered")]
    NonRectangularLattice,
    #[error("no convergence, last residual {0:e}")]
    NoConvergence(f64),
    #[error("step size underflow near x = {0}")]
    StepUnderflow(f64),
    #[error("interval contains a singularity at x = {0}")]
    SingularityInRange(f64),
    #[error("not a Bloch solution: relative dispersion {0:e}")]
    NotBloch(f64),
    #[error("eigenvalue coincides with a factorization constant: use kernel formula")]
    UseKernelFormula,
    #[error("factorization constants must differ")]
    EqualConstants,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate grid: {excluded} of {total} points excluded")]
    DegenerateGrid { excluded: usize, total: usize },
    #[error("transformation function has a node near x = {0}")]
    Node(f64),
    #[error("zero finding failed: {0}")]
    ZeroFinding(String),
    #[error("value is not real: imaginary part {0:e}")]
    NotReal(f64),
    #[error("branch tracking failed near z = {re} + {im}i")]
    Branch { re: f64, im: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
