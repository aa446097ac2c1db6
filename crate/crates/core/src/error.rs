use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an input value failed.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Mode window or grid does not fit the requested operation.
    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("mode window mismatch: {left} vs {right}")]
    WindowMismatch { left: usize, right: usize },

    /// The imaginary part of a trace that must be real is not negligible.
    #[error("overlap has imaginary residue {residue:e} (bound {bound:e}); hermitian symmetry broken upstream")]
    ImaginaryResidue { residue: f64, bound: f64 },

    #[error("quantized map is not unitary for N = {n} (deviation {deviation:e}); choose N coprime to b = {b}")]
    NonUnitary { n: usize, b: i64, deviation: f64 },

    /// Operation undefined on the given values (non-positive densities, empty fields).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("chord field is incomplete: expected {expected} values, got {got}")]
    IncompleteField { expected: usize, got: usize },

    #[error("no linear growth segment in ln chi^2; increase the mode window")]
    NoLinearSegment,

    #[error("every K1 sample after burn-in is infinite")]
    AllSamplesInfinite,

    #[error("exponent unidentifiable; widen parameter ranges ({0})")]
    Unidentifiable(String),

    #[error("fit did not converge after {0} iterations")]
    NonConvergence(usize),

    #[error("design matrix is rank deficient")]
    RankDeficient,

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
