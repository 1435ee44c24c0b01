use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arc under-resolved: {cells} grid cell(s) at length {length}")]
    ArcUnderResolved { length: f64, cells: usize },

    #[error("outside unit disc: |z| = {modulus}")]
    OutsideUnitDisc { modulus: f64 },

    #[error("point |z| = {modulus} beyond trusted radius {radius_cap} of a truncated series")]
    BeyondTrustedRadius { modulus: f64, radius_cap: f64 },

    #[error("singular node: non-finite integrand at {node}")]
    SingularNode { node: String },

    #[error("insufficient tail: {levels} non-empty level(s), need at least 3")]
    InsufficientTail { levels: usize },

    #[error("little space may be trivial for alpha = 1")]
    LittleSpaceTrivial,

    #[error("kernel under-resolved: t = {t} below grid step {step}")]
    KernelUnderResolved { t: f64, step: f64 },

    #[error("resolution too coarse: {levels} dyadic level(s), need at least 6")]
    ResolutionTooCoarse { levels: usize },

    #[error("empty operator grid")]
    EmptyGrid,

    #[error("representation mismatch: expected {expected}, got {found}")]
    Mismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("coefficients unavailable up to n = {requested} (have {available})")]
    CoefficientsUnavailable { requested: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the command-line front end: 2 for anything the
    /// caller got wrong, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ArcUnderResolved { .. }
            | Error::OutsideUnitDisc { .. }
            | Error::BeyondTrustedRadius { .. }
            | Error::SingularNode { .. }
            | Error::InsufficientTail { .. }
            | Error::KernelUnderResolved { .. }
            | Error::CoefficientsUnavailable { .. }
            | Error::Csv(_) => 3,
            Error::LittleSpaceTrivial
            | Error::ResolutionTooCoarse { .. }
            | Error::EmptyGrid
            | Error::Mismatch { .. }
            | Error::InvalidParameter(_)
            | Error::Config(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
        }
    }
}
