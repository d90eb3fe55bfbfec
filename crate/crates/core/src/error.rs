use thiserror::Error;

/// Failures raised by the toolkit. Variant names are stable and surface in
/// CLI diagnostics through [`Error::name`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("diagonal block {block} is not Hermitian (defect {defect:.3e})")]
    NotHermitian { block: &'static str, defect: f64 },
    #[error("subspace is not uniformly definite (margin {margin:.3e})")]
    NotUniformlyDefinite { margin: f64 },
    #[error("spectral sets intersect (distance {distance:.3e})")]
    SetsIntersect { distance: f64 },
    #[error("spectra of the diagonal blocks overlap (separation {separation:.3e})")]
    SpectraOverlap { separation: f64 },
    #[error("eigenvalue separation {separation:.3e} is below the conditioning threshold")]
    IllConditioned { separation: f64 },
    #[error("separation must be positive, got {0}")]
    NonpositiveSeparation(f64),
    #[error("spectrum is not real: eigenvalue {re} + {im}i")]
    NonRealSpectrum { re: f64, im: f64 },
    #[error("no uniformly definite invariant subspace of the required dimension: {0}")]
    NoDefiniteInvariantSubspace(String),
    #[error("invariant subspace is not a graph over the positive component (cond {cond:.3e})")]
    NotAGraph { cond: f64 },
    #[error("angular operator is not a uniform contraction (norm {norm})")]
    NotContractive { norm: f64 },
    #[error("perturbation too large: {0}")]
    TooLargePerturbation(String),
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("lambda lies in the spectrum of the lower diagonal block")]
    LambdaInSpectrumA1,
    #[error("lambda lies in the spectrum of a diagonal block")]
    LambdaInUnperturbedSpectrum,
    #[error("profile is not odd (defect {0:.3e})")]
    ProfileNotOdd(f64),
    #[error("profile is not normalized: sup |b| = {0}")]
    ProfileNotNormalized(f64),
    #[error("quadrature did not converge (entries moved by {0:.3e} under node doubling)")]
    QuadratureUnconverged(f64),
    #[error("Schur iteration did not converge")]
    SchurNotConverged,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed instance: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotUniformlyDefinite { .. } => "NotUniformlyDefinite",
            Error::SetsIntersect { .. } => "SetsIntersect",
            Error::SpectraOverlap { .. } => "SpectraOverlap",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::NonpositiveSeparation(_) => "NonpositiveSeparation",
            Error::NonRealSpectrum { .. } => "NonRealSpectrum",
            Error::NoDefiniteInvariantSubspace(_) => "NoDefiniteInvariantSubspace",
            Error::NotAGraph { .. } => "NotAGraph",
            Error::NotContractive { .. } => "NotContractive",
            Error::TooLargePerturbation(_) => "TooLargePerturbation",
            Error::HypothesesNotMet(_) => "HypothesesNotMet",
            Error::LambdaInSpectrumA1 => "LambdaInSpectrumA1",
            Error::LambdaInUnperturbedSpectrum => "LambdaInUnperturbedSpectrum",
            Error::ProfileNotOdd(_) => "ProfileNotOdd",
            Error::ProfileNotNormalized(_) => "ProfileNotNormalized",
            Error::QuadratureUnconverged(_) => "QuadratureUnconverged",
            Error::SchurNotConverged => "SchurNotConverged",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
