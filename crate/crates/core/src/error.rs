use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("resource guard exceeded: {0}")]
    Guard(String),
    #[error("not a unimodular triangulation: {0}")]
    NotTriangulation(String),
    #[error("triangulation is not regular: its secondary cone has no interior point")]
    NoInteriorPoint,
    #[error("degenerate tropical curve: {0}")]
    DegenerateCurve(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a graph of the required kind: {0}")]
    Graph(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("structural anomaly: {0}")]
    StructuralAnomaly(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
