use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    /// The ground level is (nearly) degenerate with the first excited level.
    #[error("gap closure at s = {s}: gap {gap:e} below floor {floor:e}")]
    GapClosure { s: f64, gap: f64, floor: f64 },

    #[error("all endpoint derivatives up to order {max_order} vanish")]
    OrderUndetermined { max_order: usize },

    #[error(
        "integration failed at T = {timescale}: norm drift {norm_drift:e} exceeds {limit:e} \
         ({steps} steps, {rejected} rejected)"
    )]
    IntegrationFailure {
        timescale: f64,
        norm_drift: f64,
        limit: f64,
        steps: usize,
        rejected: usize,
    },

    #[error("step size underflow at s = {s} (h = {step:e})")]
    Stiffness { s: f64, step: f64 },

    #[error("window sampling too coarse: spacing {spacing} exceeds {required}")]
    Sampling { spacing: f64, required: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
