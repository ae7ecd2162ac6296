use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("singular rapidity configuration: {0}")]
    SingularPoint(String),

    #[error("degenerate roots: |z_{i} - z_{j}| = {sep:.3e} below separation tolerance")]
    DegenerateRoots { i: usize, j: usize, sep: f64 },

    #[error("root refinement did not converge: worst residual {max_residual:.3e}")]
    RootsNotConverged {
        max_residual: f64,
        residuals: Vec<f64>,
    },

    #[error("root pairing z_m * z_m' = 1 failed: worst residual {0:.3e}")]
    PairingFailed(f64),

    #[error("unsupported charge {charge} (expected 0 or {n})")]
    UnsupportedCharge { charge: u32, n: u32 },

    #[error("pattern not explicitly constructible for r = {r}: {reason}")]
    UnsupportedPattern { r: usize, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("evaluation point too close to a pole: {0}")]
    PoleProximity(String),

    #[error("singular mode {j}: {reason}")]
    SingularMode { j: usize, reason: String },

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("domain error: {0}")]
    Domain(String),
}
