use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph has {0} vertices; supported range is 1..=128")]
    VertexCount(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("graph6: empty input")]
    Graph6Empty,
    #[error("graph6: malformed size header")]
    Graph6Header,
    #[error("graph6: byte {byte} at offset {offset} is outside 63..=126")]
    Graph6Byte { offset: usize, byte: u8 },
    #[error("graph6: expected {expected} data bytes, found {found}")]
    Graph6Truncated { expected: usize, found: usize },
    #[error("graph6: trailing data after offset {0}")]
    Graph6Trailing(usize),
    #[error("graph6: nonzero padding bits in final byte")]
    Graph6Padding,
    #[error("graph6: {0} vertices exceeds the 128-vertex limit")]
    Graph6TooLarge(usize),

    #[error("edge list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    #[error("unknown generator kind `{0}`")]
    UnknownGenerator(String),
    #[error("bad generator parameters `{spec}`: {reason}")]
    GeneratorParams { spec: String, reason: String },
    #[error("a spider needs at least 3 legs, got {0}")]
    SpiderLegs(usize),
    #[error("leg lengths must be at least 1")]
    ZeroLeg,

    #[error("graph is not a forest")]
    NotForest,
    #[error("graph is not a tree")]
    NotTree,
    #[error("exact search is limited to {limit} vertices, graph has {n}")]
    SearchLimit { n: usize, limit: usize },

    #[error("set size r = {r} out of range (need {min} <= r <= {max})")]
    SetSize { r: usize, min: usize, max: usize },
    #[error("path merging with w requires every leg to have length >= 2")]
    ShortLeg,
    #[error("split-vertex surgery requires at least 2 split vertices, found {0}")]
    TooFewSplitVertices(usize),
    #[error("set {0} is not independent in the merged path")]
    NotIndependent(String),
    #[error("junction index {index} out of range ({count} junctions)")]
    Junction { index: usize, count: usize },

    #[error("missing parameter `{field}` for {theorem}")]
    MissingField { theorem: &'static str, field: &'static str },
    #[error("{check}: parameters outside the stated domain ({reason})")]
    Domain { check: &'static str, reason: String },
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("search budget of {0} nodes must be positive")]
    Budget(u64),
    #[error("{0}")]
    Parse(String),
}
