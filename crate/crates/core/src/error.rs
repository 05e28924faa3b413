use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("invalid argument: {0}")]
    Domain(String),

    /// The intertwiner `O` is singular at the exceptional point.
    #[error("operator is singular at the exceptional point (alpha = {alpha})")]
    ExceptionalPoint { alpha: f64 },

    /// The operation needs an unbroken, non-exceptional phase (alpha < 1).
    #[error("operation requires alpha < 1, got alpha = {alpha}")]
    BrokenPhase { alpha: f64 },

    /// A quantity that must stay positive collapsed to (numerical) zero.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A rational closed form was requested inside the exceptional-point window.
    #[error("closed form is 0/0 inside the exceptional-point window (alpha = {alpha}); use the direct chain")]
    EpWindow { alpha: f64 },

    /// A closed-form denominator is too close to zero to give a trustworthy value.
    #[error("closed-form denominator {denominator:e} is too close to a pole")]
    NearPole { denominator: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}

/// Validates a dimensionless (alpha, tau) pair: both finite and nonnegative.
pub(crate) fn ensure_alpha_tau(alpha: f64, tau: f64) -> Result<()> {
    ensure_finite("alpha", alpha)?;
    ensure_finite("tau", tau)?;
    if alpha < 0.0 {
        return Err(Error::Domain(format!("alpha must be >= 0, got {alpha}")));
    }
    if tau < 0.0 {
        return Err(Error::Domain(format!("tau must be >= 0, got {tau}")));
    }
    Ok(())
}
