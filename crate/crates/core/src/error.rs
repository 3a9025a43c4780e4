use thiserror::Error;

/// Error type shared by every module of the library.
#[derive(Error, Debug, Clone)]
pub enum MuntzError {
    /// Evaluation point outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter bundle violates one of its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// Gamma-function argument at (or within 1e-14 of) a nonpositive integer.
    #[error("gamma pole at argument {arg}")]
    GammaPole { arg: f64 },

    /// Evaluation at x = 0 or x = b where the basis carries a negative exponent.
    #[error("singular endpoint at x = {x} (exponent {exponent}); request the limit policy for a signed infinity")]
    SingularEndpoint { x: f64, exponent: f64 },

    /// A shifted-parameter inequality required by a closed form fails.
    #[error("parameter shift violated: require {requirement} > -1, got {value}")]
    ParamShift { requirement: &'static str, value: f64 },

    /// The tridiagonal eigenvalue iteration failed to converge.
    #[error("eigenvalue iteration did not converge at node index {index}")]
    EigenNonConvergence { index: usize },

    /// Adaptive quadrature stalled above the requested accuracy.
    #[error("adaptive quadrature did not converge; achieved error estimate {achieved:.3e}")]
    QuadratureNonConvergence { achieved: f64 },

    /// An integrand evaluated to a non-finite value at a quadrature node.
    #[error("non-finite integrand value at node {index} (x = {x})")]
    NonFiniteEval { index: usize, x: f64 },

    /// Finite-difference step size underflowed near an endpoint.
    #[error("finite-difference step underflow near x = {x}; evaluate at an interior point")]
    StepUnderflow { x: f64 },

    /// A magnitude guard tripped during matrix assembly.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Newton iteration exhausted its budget.
    #[error("Newton did not converge after {iterations} iterations (residual {residual:.3e})")]
    NewtonNonConvergence { iterations: usize, residual: f64 },

    /// A linear system is singular to machine precision.
    #[error("singular linear system (condition estimate {cond:.3e})")]
    SingularSystem { cond: f64 },

    /// Adaptive time stepping collapsed below the representable step size.
    #[error("step size collapse at t = {t}; the system may be stiff, relax the tolerances")]
    StepSizeCollapse { t: f64 },

    /// Run-configuration validation failure (CLI front end).
    #[error("validation: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, MuntzError>;
