use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("endpoint {endpoint} of edge {edge} is out of range for {n} vertices")]
    EndpointOutOfRange {
        edge: usize,
        endpoint: usize,
        n: usize,
    },

    #[error("edge {edge} repeats endpoint {endpoint}")]
    RepeatedEndpoint { edge: usize, endpoint: usize },

    #[error("edge {edge} has {size} endpoint(s); at least 2 are required")]
    EdgeTooSmall { edge: usize, size: usize },

    #[error("edge index {index} is out of range for {m} edges")]
    EdgeIndexOutOfRange { index: usize, m: usize },

    #[error("vertex {vertex} is out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("malformed grading: {0}")]
    Grading(String),

    #[error("brute-force oracle is limited to {cap} vertices, got {n}")]
    OracleCap { n: usize, cap: usize },

    #[error("orientation requires m = k*n, got m = {m}, k*n = {kn}")]
    EdgeCount { m: usize, kn: usize },

    #[error("invalid orientation: {0}")]
    Orientation(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("edge set is independent; it contains no circuit")]
    Independent,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("linear rank {linear} disagrees with combinatorial rank {combinatorial}; instance: {instance}")]
    Discrepancy {
        linear: usize,
        combinatorial: usize,
        instance: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short category tag used in CLI diagnostics (`error:<category>:`).
    pub fn category(&self) -> &'static str {
        match self {
            Error::EndpointOutOfRange { .. }
            | Error::RepeatedEndpoint { .. }
            | Error::EdgeTooSmall { .. }
            | Error::EdgeIndexOutOfRange { .. }
            | Error::VertexOutOfRange { .. } => "graph",
            Error::Parameter(_) | Error::NotPrime(_) => "param",
            Error::Grading(_) => "grading",
            Error::OracleCap { .. } => "cap",
            Error::EdgeCount { .. } | Error::Orientation(_) | Error::Independent => "domain",
            Error::Dimension(_) => "dimension",
            Error::Parse { .. } | Error::Json(_) => "json",
            Error::Discrepancy { .. } => "discrepancy",
            Error::Io(_) => "io",
        }
    }
}
