use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate leaf `{0}`")]
    DuplicateLeaf(String),

    #[error("unknown leaf `{0}`")]
    UnknownLeaf(String),

    #[error("empty leaf label")]
    EmptyLabel,

    #[error("{n} leaves exceeds the cap of {cap}")]
    TooManyLeaves { n: usize, cap: usize },

    #[error("{n} leaves is below the minimum of {min}")]
    TooFewLeaves { n: usize, min: usize },

    #[error("incompatible splits {0} and {1}")]
    IncompatibleSplits(String, String),

    #[error("split {0} is trivial")]
    TrivialSplit(String),

    #[error("label map is not a bijection on the leaf set: {0}")]
    NonBijective(String),

    #[error("label `{0}` is already a leaf")]
    LabelCollision(String),

    #[error("tree has no split {0}")]
    NoSuchSplit(String),

    #[error("operands are over different leaf sets")]
    LeafSetMismatch,

    #[error("quartets cover {covered} of {ambient} leaves; definitiveness is relative to L(Q)")]
    AmbientMismatch { covered: usize, ambient: usize },

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("syntax error on line {line}: {message}")]
    LineSyntax { line: usize, message: String },

    #[error("interior vertex label at byte {0}")]
    InteriorLabel(usize),

    #[error("duplicate leaf in quartet on line {0}")]
    DuplicateLeafInQuartet(usize),

    #[error("witness check failed at k={k}, i={i}: {reason}")]
    WitnessCheckFailed { k: usize, i: usize, reason: String },
}
