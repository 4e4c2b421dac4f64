use thiserror::Error;

/// Errors raised by the unfolding, solver, geometry and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum D4Error {
    #[error("invalid unfolding spec: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("linear part is singular (det = {det:e})")]
    SingularLinearPart { det: f64 },
    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("Jacobian of the branch system is singular (det = {det:e})")]
    SingularJacobian { det: f64 },
    #[error("normal vector degenerates (|nu~| = {norm:e})")]
    DegenerateNormal { norm: f64 },
    #[error("point (theta = {theta}, z = {z}) lies on the singular set")]
    SingularPoint { theta: f64, z: f64 },
    #[error("theta = {theta} is not a singular direction of this branch")]
    NotSingularDirection { theta: f64 },
    #[error("degenerate classification input: {reason}")]
    DegenerateInput { reason: String },
    #[error("sign quantity {quantity} vanishes")]
    BoundaryCase { quantity: String },
    #[error("no configuration for case {case}")]
    InfeasibleRegion { case: String },
    #[error("root at theta = {theta} is not transverse (derivative {derivative:e})")]
    NonTransverse { theta: f64, derivative: f64 },
    #[error("polynomial is not square-free on the interval")]
    NonSquareFree,
    #[error("hyperbolic-trigonometric terms are not parity-homogeneous of the required parity")]
    ParityViolation,
}

pub type Result<T> = std::result::Result<T, D4Error>;
