use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the models, engines and pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("universe size {0} outside 1..=64")]
    InvalidUniverse(u32),
    #[error("universe of {size} positions too large for exhaustive enumeration (limit {limit})")]
    UniverseTooLarge { size: u32, limit: u32 },
    #[error("position {position} outside universe of size {size}")]
    PositionOutOfRange { position: u32, size: u32 },
    #[error("arguments live in different universes ({0} vs {1})")]
    UniverseMismatch(u32, u32),
    #[error("at least one item is required")]
    NoItems,
    #[error("malformed set label {0:?}")]
    BadSetLabel(String),

    #[error("string {0:?} is not declared in the description system")]
    UnknownString(String),
    #[error("item index {0} is not part of the model")]
    UnknownItem(usize),
    #[error("string {0:?} declared twice")]
    DuplicateString(String),
    #[error("duplicate program: code {code:?} under condition {cond:?}")]
    DuplicateProgram { code: String, cond: Option<String> },
    #[error("program code {0:?} is not a binary word")]
    BadCode(String),
    #[error("model does not define joint complexity")]
    JointUnsupported,

    #[error("unknown member {0:?}")]
    UnknownMember(String),
    #[error("cluster has no members")]
    EmptyCluster,
    #[error("pair ({0:?}, {1:?}) is at infinite distance")]
    InfiniteDistance(String, String),
    #[error("distance matrix is not symmetric at ({0}, {1})")]
    AsymmetricMatrix(usize, usize),
    #[error("negative or non-finite distance at ({0}, {1})")]
    BadDistance(usize, usize),

    #[error("u = {u} exceeds v + w = {vw}")]
    PathExponent { u: u32, vw: u32 },
    #[error("intersection of size {shared} is below the merge threshold 2^{exponent}")]
    MergeThreshold { shared: usize, exponent: i64 },
    #[error("input set is not an ({m}, {l})-cluster: {reason}")]
    NotACluster { m: String, l: i64, reason: String },
    #[error("stream element {index} is not a valid ({m}, {l})-cluster: {reason}")]
    InvalidStreamCluster { index: usize, m: u32, l: i64, reason: String },
    #[error("large-intersection exponent d' = {dprime} must exceed 2d + 1 = {}", 2 * .d + 1)]
    MultiplicityHypothesis { d: u32, dprime: u32 },
    #[error("no referential cluster has a large intersection with the target (stream does not cover it)")]
    StreamCoverage,
    #[error("certificate does not match the registry: {0}")]
    CertificateMismatch(String),
    #[error("epsilon must be 1/k for a positive integer k (denominator {0})")]
    NotUnitFraction(u64),
    #[error("event {event} contains point {point} outside a space of {points} points")]
    EventOutOfSpace { event: usize, point: usize, points: usize },
    #[error("delta must be nonnegative")]
    NegativeDelta,

    #[error("both inputs are empty")]
    EmptyInputs,
    #[error("corrupt compressed payload: {0}")]
    CorruptPayload(&'static str),
    #[error("external compressor failed: {0}")]
    ExternalFailure(String),
    #[error("external compressor is nondeterministic ({first} vs {second} bytes or differing payloads)")]
    Nondeterministic { first: usize, second: usize },
    #[error("decompression is not available for external compressors")]
    NoDecompressor,
    #[error("compressor template must contain {{in}} and {{out}}: {0:?}")]
    BadTemplate(String),
    #[error("corpus directory {0} contains no regular files")]
    EmptyCorpus(PathBuf),

    #[error("{0}")]
    Format(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
