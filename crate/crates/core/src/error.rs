use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("trace velocity {trace_u3} lies within {margin} of a sonic threshold")]
    MarginViolation { trace_u3: f64, margin: f64 },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("argument {value} outside the domain: {reason}")]
    DomainError { value: f64, reason: &'static str },

    #[error("potential {phi} is not above Phi_F = {phi_f}; the inverse of F is undefined")]
    OutOfRange { phi: f64, phi_f: f64 },

    #[error("Bohm condition violated: u3^2 = {u3_sq} <= Ti + 1 = {threshold}")]
    BohmViolation { u3_sq: f64, threshold: f64 },

    #[error("boundary value {value} outside the admissible window [{lo}, {hi}]")]
    InadmissibleBoundaryValue { value: f64, lo: f64, hi: f64 },

    #[error("potential energy V({phi}) = {v} is not positive; no connecting orbit")]
    NonPositiveV { phi: f64, v: f64 },

    #[error("coercivity lost: X'(Phi0) = {value} < {alpha} at z = {z}")]
    CoercivityLoss { value: f64, alpha: f64, z: f64 },

    #[error("tail integral not converged: |integrand| = {value} at z_max = {z_max}")]
    QuadratureTail { value: f64, z_max: f64 },

    #[error("supersonic condition lost at t = {t}: trace u3 = {trace_u3}")]
    SupersonicLost { t: f64, trace_u3: f64 },

    #[error("Bohm margin lost at t = {t}: trace u3 = {trace_u3}")]
    BohmLost { t: f64, trace_u3: f64 },

    #[error("regime mismatch at t = {t}: trace u3 = {trace_u3} no longer {expected}")]
    RegimeMismatch { t: f64, trace_u3: f64, expected: &'static str },

    #[error("density {value} <= 0 at cell {cell}")]
    NegativeDensity { cell: usize, value: f64 },

    #[error("non-positive density supplied to the Poisson solver at cell {cell}")]
    NonPositiveDensity { cell: usize },

    #[error("Newton iteration diverged after {iterations} iterations (residual {residual:e})")]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("symmetrizer e^(-phi_a)(1+h) = {value} <= 0 at cell {cell}")]
    NonPositiveSymmetrizer { cell: usize, value: f64 },

    #[error("decay window too noisy: rms residual {rms}, fitted rate {rate}")]
    WindowTooNoisy { rms: f64, rate: f64 },

    #[error("rate fit failed: {0}")]
    FitFailure(String),

    #[error("singular linear system at row {0}")]
    SingularSystem(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
