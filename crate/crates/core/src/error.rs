use thiserror::Error;

/// Errors raised by the numeric kernels, the word layer and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not Hermitian: |h - h*| = {defect:.3e} exceeds {tol:.1e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is not unitary: |m*m - 1| = {defect:.3e} exceeds {tol:.1e}")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("eigenvalue {eigenvalue} lies within {distance:.3e} of -1 (margin {margin:.1e}); principal logarithm undefined")]
    BranchCut {
        eigenvalue: String,
        distance: f64,
        margin: f64,
    },

    #[error("eigenvalue {eigenvalue:.6} lies inside the band ({lo:.4}, {hi:.4}) around the threshold")]
    NoSpectralGap { eigenvalue: f64, lo: f64, hi: f64 },

    #[error("determinant path is singular near t = {t:.6} (|det| = {modulus:.3e})")]
    PathSingular { t: f64, modulus: f64 },

    #[error("path is not a loop: |det(w) - 1| = {defect:.3e} exceeds {tol:.1e}")]
    NotALoop { defect: f64, tol: f64 },

    #[error("almost-projection defect {defect:.4e} is not below {limit:.4e}")]
    DefectTooLarge { defect: f64, limit: f64 },

    #[error("hypothesis `{which}` violated: {value:.6e} is not below {bound:.6e} (excess {:.3e})", value - bound)]
    HypothesisViolated {
        which: String,
        value: f64,
        bound: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("generator `{0}` has no image")]
    UnboundGenerator(String),

    #[error("strategy cannot evaluate `{0}`")]
    StrategyUndefined(String),

    #[error("presentations differ")]
    PresentationMismatch,

    #[error("perturbation radius {0} must lie in [0, 2)")]
    RadiusTooLarge(f64),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 for failed hypotheses or preconditions, 2 for
    /// numerical failure, 3 for I/O and syntax problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HypothesisViolated { .. }
            | Error::DefectTooLarge { .. }
            | Error::NotALoop { .. }
            | Error::NotUnitary { .. }
            | Error::NotHermitian { .. }
            | Error::DimensionMismatch { .. }
            | Error::UnboundGenerator(_)
            | Error::StrategyUndefined(_)
            | Error::PresentationMismatch
            | Error::RadiusTooLarge(_)
            | Error::InvalidArgument(_) => 1,
            Error::BranchCut { .. } | Error::NoSpectralGap { .. } | Error::PathSingular { .. } => 2,
            Error::InvalidMatrix(_) | Error::Syntax { .. } | Error::Io(_) | Error::Json(_) => 3,
        }
    }

    /// Short machine-readable tag, used in CSV status columns.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidMatrix(_) => "invalid-matrix",
            Error::NotHermitian { .. } => "not-hermitian",
            Error::NotUnitary { .. } => "not-unitary",
            Error::BranchCut { .. } => "branch-cut",
            Error::NoSpectralGap { .. } => "no-spectral-gap",
            Error::PathSingular { .. } => "path-singular",
            Error::NotALoop { .. } => "not-a-loop",
            Error::DefectTooLarge { .. } => "defect-too-large",
            Error::HypothesisViolated { .. } => "hypothesis-violated",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::UnboundGenerator(_) => "unbound-generator",
            Error::StrategyUndefined(_) => "strategy-undefined",
            Error::PresentationMismatch => "presentation-mismatch",
            Error::RadiusTooLarge(_) => "radius-too-large",
            Error::Syntax { .. } => "syntax",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
