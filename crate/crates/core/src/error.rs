use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("Hölder exponent {0} outside the admissible range")]
    Exponent(f64),
    #[error("level cap {0} is not usable (need 1 <= level <= 62)")]
    LevelCap(u32),
    #[error("domain mismatch: {0}")]
    Domain(&'static str),
    #[error("operator model {0} has no scalar phase on this index type; use its U/U* blocks")]
    BlockModel(&'static str),
    #[error("exact scalars cannot represent the irrational phase of {0}")]
    InexactPhase(&'static str),
    #[error("window mismatch between composed operators")]
    WindowMismatch,
    #[error("truncation leakage: inflate the window by at least {inflate_by}")]
    Leakage { inflate_by: u64 },
    #[error("degenerate kernel point: {0} is zero")]
    DegenerateKernel(KernelGuard),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("parity mismatch: {0}")]
    Parity(&'static str),
    #[error("checkpoint {checkpoint} beyond materialized cap {cap}")]
    BeyondCap { checkpoint: u64, cap: u64 },
    #[error("need at least {need} checkpoints, have {have}")]
    TooFewCheckpoints { need: usize, have: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("singular value iteration did not converge after {steps} steps (residual {residual:e})")]
    NonConvergence { steps: usize, residual: f64 },
    #[error("fast path and operator path disagree at N = {n}: {fast} vs {operator}")]
    PathDisagreement { n: u64, fast: f64, operator: f64 },
    #[error("inputs do not follow the holomorphy pattern: {0}")]
    HolomorphyPattern(&'static str),
    #[error("trace did not stabilize under window doubling (drift {drift:e})")]
    Drift { drift: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelGuard {
    K,
    KPlusM,
    KPlusN,
}

impl core::fmt::Display for KernelGuard {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            KernelGuard::K => "k",
            KernelGuard::KPlusM => "k+m",
            KernelGuard::KPlusN => "k+n",
        })
    }
}
