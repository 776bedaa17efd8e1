use thiserror::Error;

/// Failures reported by the library.
///
/// Every variant carries enough context to say what went wrong without a
/// backtrace: the offending value, where it was encountered, or the partial
/// result that failed to converge.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("profile radius R1 = {value:e} is not positive at parameter {at}")]
    NonPositiveRadius { at: f64, value: f64 },

    #[error("curve has zero total length")]
    DegenerateCurve,

    #[error("{what} = {value} lies outside the admissible range")]
    OutOfDomain { what: &'static str, value: f64 },

    #[error("integration step {step} drifts the metric speed by {drift:e} per step")]
    StepTooLarge { step: f64, drift: f64 },

    #[error("base point r = {radius} is a singular point of the Killing field")]
    BaseAtSingularPoint { radius: f64 },

    #[error("profile value f = {value:e} is not positive at interior parameter {at}")]
    NonPositiveProfile { at: f64, value: f64 },

    #[error("argument must be non-zero")]
    ZeroArgument,

    #[error("argument {re}{im:+}i is a zero of the prime function")]
    AtZeroOfPrime { re: f64, im: f64 },

    #[error("prime product needs {required} factors, above the cap of {cap}")]
    AccuracyDegraded { required: u64, cap: u64 },

    #[error("source and target coincide")]
    CoincidentPoints,

    #[error("area integral does not converge (partial value {partial}, tail {tail:e})")]
    DivergentArea { partial: f64, tail: f64 },

    #[error("x1 = {x1} lies outside the chart window [{lo}, {hi}]")]
    OutOfWindow { x1: f64, lo: f64, hi: f64 },

    #[error("potential derivative is not holomorphic (Cauchy-Riemann residual {residual:e})")]
    NonHolomorphic { residual: f64 },

    #[error("curvature convolution does not converge (partial value {partial}, edge weight {edge:e})")]
    DivergentConvolution { partial: f64, edge: f64 },

    #[error("quadrature failed to reach tolerance (estimate {estimate}, error {error:e})")]
    QuadratureFailed { estimate: f64, error: f64 },

    #[error("invalid class description: {0}")]
    InvalidClass(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
