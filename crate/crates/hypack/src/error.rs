use thiserror::Error;

/// Errors reported by the geometry, volume, bound, and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Vector or point dimensions do not match, or are below the m >= 2 floor.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two balls of radius `r` with centers `tau` apart do not intersect.
    #[error("empty intersection: center distance {tau} >= 2r = {two_r}")]
    EmptyIntersection { tau: f64, two_r: f64 },

    /// The threshold function is non-positive at the right end of its range,
    /// so no root exists below `r` (the dimension is below the implicit floor
    /// for this radius). Carries the boundary value for diagnostics.
    #[error("no root in (0, {r}]: boundary value {gamma_at_r} <= 0")]
    NoRoot { r: f64, gamma_at_r: f64 },

    /// The geometric bracket sweep found no sign change down to `checked_down_to`.
    #[error("no sign change found down to x = {checked_down_to}")]
    NoSignChange { checked_down_to: f64 },

    /// A simulation configuration violates its invariants.
    #[error("config error: {0}")]
    Config(String),

    /// The request would exceed a resource guard (e.g. expected point count).
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
