use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zeta has a pole at s = 1")]
    PoleAtOne,

    #[error("|Im s| = {t} exceeds the configured height ceiling {ceiling}")]
    CeilingExceeded { t: f64, ceiling: f64 },

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("zero count {found} on (0, {t_max}] disagrees with the Riemann-von Mangoldt main term {expected:.3} beyond slack {slack:.3}")]
    MissedZeros {
        t_max: f64,
        found: usize,
        expected: f64,
        slack: f64,
    },

    #[error("value {needed} exceeds the sieve limit {limit}")]
    SieveLimit { needed: u64, limit: u64 },

    #[error("Dirichlet polynomial support too large: {0}")]
    SupportSize(String),

    #[error("zero table is empty")]
    EmptyTable,

    #[error("zero table covers (0, {have}] but ({lo}, {hi}] was requested")]
    Coverage { lo: f64, hi: f64, have: f64 },

    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("unknown name {name:?}; known: {known}")]
    UnknownName { name: String, known: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
