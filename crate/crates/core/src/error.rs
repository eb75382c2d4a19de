use thiserror::Error;

/// Failures raised while evaluating special functions, R-matrices or checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A denominator (or determinant) fell below the singular guard.
    #[error("singular point: {what} (|value| = {magnitude:e} < guard {guard:e})")]
    Singular {
        what: String,
        magnitude: f64,
        guard: f64,
    },
    /// A Pochhammer base of modulus >= 1.
    #[error("divergent product: base modulus {0} must be < 1")]
    Divergent(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_singular(&self) -> bool {
        matches!(self, Error::Singular { .. })
    }
}

/// Returns `Err(Singular)` when `value` is smaller than `guard` in magnitude.
pub(crate) fn guard_nonzero(
    what: impl FnOnce() -> String,
    value: num_complex::Complex64,
    guard: f64,
) -> Result<()> {
    let magnitude = value.norm();
    if magnitude < guard || !magnitude.is_finite() {
        return Err(Error::Singular {
            what: what(),
            magnitude,
            guard,
        });
    }
    Ok(())
}
