use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("not a matching: {0}")]
    NotAMatching(String),
    #[error("matching is not stable: blocking edge `{0}`")]
    Unstable(String),
    #[error("not a rotation admitted by the given matching")]
    NotARotation,
    #[error("cycles overlap at vertex `{0}`")]
    OverlappingCycles(String),
    #[error("rotation set is not an ideal: `{missing}` precedes a member but is absent")]
    NotAnIdeal { missing: String },
    #[error("matchings are not ordered by the lattice relation")]
    NotOrdered,
    #[error("cap exceeded: more than {0} stable matchings")]
    CapExceeded(usize),
    #[error("oracle size guard exceeded: {edges} edges (limit {limit})")]
    OracleGuard { edges: usize, limit: usize },
    #[error("missing weight for edge `{0}`")]
    MissingWeight(String),
    #[error("median requires an odd number of matchings, got {0}")]
    EvenMedian(usize),
    #[error("index k = {k} out of range 1..={len}")]
    KOutOfRange { k: usize, len: usize },
    #[error("empty matching family")]
    EmptyFamily,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
