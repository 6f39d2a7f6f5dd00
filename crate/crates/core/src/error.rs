use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop at vertex {0} (pair ({0}, {0}))")]
    SelfLoop(usize),

    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },

    #[error("vertex {vertex} is outside 0..{n}")]
    SequenceOutOfRange { vertex: usize, n: usize },

    #[error("graph is not bipartite: odd cycle {}", render_cycle(.cycle))]
    NotBipartite { cycle: Vec<usize> },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{what} would need {requested} vertices, over the budget of {budget}")]
    VertexBudget {
        what: &'static str,
        requested: u128,
        budget: u64,
    },

    #[error("enumeration of {requested} items exceeds the budget of {budget}{hint}")]
    EnumerationBudget {
        requested: u128,
        budget: u128,
        hint: &'static str,
    },

    #[error("pattern has {size} vertices, above the brute-force cap of {cap}; use the tree-decomposition engine")]
    BruteCap { size: usize, cap: usize },

    #[error("pattern is not a recognized path, cycle or complete bipartite graph; use the brute or tree-decomposition engine")]
    UnrecognizedShape,

    #[error("host graph has no vertices")]
    EmptyGraph,

    #[error("t_K{{{r},{d}}}(G) = 0, the statement is vacuous on this graph")]
    Vacuous { r: usize, d: usize },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid edge partition: {0}")]
    InvalidEdgePartition(String),

    #[error("pattern is not applicable: {0}")]
    NotApplicable(String),

    #[error("engines disagree on {pattern}: {detail}")]
    EngineDisagreement { pattern: String, detail: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn render_cycle(cycle: &[usize]) -> String {
    cycle
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
