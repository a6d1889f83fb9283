use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid cutoffs ({max_a}, {max_b}): both must be at least 1")]
    InvalidCutoffs { max_a: usize, max_b: usize },

    #[error("Fock index ({n_a}, {n_b}) outside cutoffs ({max_a}, {max_b})")]
    IndexOutOfRange {
        n_a: usize,
        n_b: usize,
        max_a: usize,
        max_b: usize,
    },

    #[error("non-finite parameter `{0}`")]
    NonFinite(&'static str),

    #[error("parameter `{name}` = {value} is out of range: {reason}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "coherent-state tail mass {tail:.3e} beyond cutoff {max_a} exceeds ceiling {ceiling:.1e}"
    )]
    CutoffTooSmall {
        tail: f64,
        max_a: usize,
        ceiling: f64,
    },

    #[error("moment order {requested} exceeds the supported bound {bound}")]
    MomentOrderTooLarge { requested: usize, bound: usize },

    #[error("criterion needs factorial moments up to order {needed}, only {available} available")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("Stirling index ({n}, {k}) outside 0 <= k <= n <= {bound}")]
    StirlingOutOfRange { n: usize, k: usize, bound: usize },

    #[error("amplitude vector of length {len} does not match basis dimension {dim}")]
    DimensionMismatch { len: usize, dim: usize },

    #[error("state cutoffs {state:?} differ from Hamiltonian cutoffs {hamiltonian:?}")]
    CutoffMismatch {
        state: (usize, usize),
        hamiltonian: (usize, usize),
    },

    #[error("evaluation times must be finite, nonnegative and strictly increasing")]
    InvalidTimes,

    #[error("internal numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
