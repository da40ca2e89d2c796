use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error("register size {0} not supported (1..={max})", max = crate::qcore::MAX_QUBITS)]
    RegisterSize(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid pulse: {0}")]
    InvalidPulse(String),

    #[error("unknown control parameter `{0}`")]
    UnknownControl(String),

    #[error("control `{control}` is not available on the {model} model")]
    UnsupportedControl {
        control: String,
        model: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coupling parameters (m = {m}, n = {n}) have no solution: {reason}")]
    UnsolvableCoupling { m: i64, n: i64, reason: String },

    #[error("non-finite amplitude at step {step} (t = {t})")]
    NonFinite { step: usize, t: f64 },

    #[error(
        "quadrature did not converge after {levels} refinements (last relative change {change:e})"
    )]
    QuadratureNotConverged { levels: usize, change: f64 },

    #[error("compilation failed: {0}")]
    Compilation(String),

    #[error("sweep point ε = {epsilon} failed: {source}")]
    SweepPoint {
        epsilon: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
