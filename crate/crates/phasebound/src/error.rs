use thiserror::Error;

/// All failure modes of the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("potential is singular at x = {x}")]
    EvalAtSingularity { x: f64 },
    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),
    #[error("cannot resolve monotonicity intervals: {0}")]
    NonMonotoneResolutionFailure(String),
    #[error("integration domain too small (half-width {half_width:e}); trajectory unresolved")]
    DomainTooSmall { half_width: f64 },
    #[error("step size underflow at x = {x:e} (h = {h:e})")]
    StiffnessFailure { x: f64, h: f64 },
    #[error("trajectory endpoint unresolved (residual {residual:e} rad)")]
    Unresolved { residual: f64 },
    #[error("energy {e:e} is too close to an eigenvalue")]
    NearEigenvalue { e: f64 },
    #[error("primitive integral of the potential diverges; level counting refused")]
    DivergentPrimitive,
    #[error("staircase bracket refinement failed: {0}")]
    BracketMiss(String),
    #[error("not a degenerate separatrix: {0}")]
    NotAnEigenstate(String),
    #[error("approximation precondition violated (validity ratio {ratio:e})")]
    ConditionViolated { ratio: f64 },
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("no real classical turning points")]
    TurningPointFailure,
    #[error("energy {e:e} lies inside the gap (|E| <= p_y = {p_y:e})")]
    InsideGap { e: f64, p_y: f64 },
    #[error("ring trajectory failed to close (gap {gap:e})")]
    NotClosed { gap: f64 },
    #[error("eigenvalue index {index} out of range ({count} levels found)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 for precondition violations, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_)
            | Error::EvalAtSingularity { .. }
            | Error::DivergentPrimitive
            | Error::InsideGap { .. }
            | Error::ConditionViolated { .. }
            | Error::IndexOutOfRange { .. } => 2,
            _ => 1,
        }
    }
}
