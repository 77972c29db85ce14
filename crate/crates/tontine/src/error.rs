use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum TontineError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An exponential-moment integral failed to converge under the
    /// configured truncation bound.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// kappa(p) = M_A(p) / (M_tau(p,0) - M_A(p)) with a denominator at or
    /// below the quadrature tolerance.
    #[error("kappa undefined: |M_tau - M_A| = {denominator:.3e} is below tolerance")]
    KappaUndefined { denominator: f64 },

    /// A power-utility value was requested for inputs that are not in the
    /// finite case of the objective.
    #[error("value not finite: inputs classified as {classification}")]
    NotFinite { classification: String },

    /// The Chini solution h crossed zero while gamma > 0, so the derived
    /// consumption rate would leave the real line.
    #[error("Chini solution crossed zero at t = {t:.4}")]
    ChiniCrossedZero { t: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A Monte Carlo estimate was requested against an ensemble that was
    /// simulated under different preferences or policy.
    #[error("ensemble mismatch: {0}")]
    EnsembleMismatch(String),
}

pub type Result<T> = std::result::Result<T, TontineError>;
