use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("not weakly Γ-invariant: cycle mismatch {residual:.3e} for generator {generator}")]
    NotWeaklyInvariant { generator: String, residual: f64 },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("boundary condition `{boundary}` is not defined for operator `{operator}`")]
    UnsupportedBoundary { boundary: String, operator: String },

    #[error("window of dimension {dim} exceeds the dense limit {limit}")]
    WindowTooLarge { dim: usize, limit: usize },

    #[error("unresolved cluster at λ = {lambda}: nearest outside value {gap:.3e} away, need > {required:.3e}")]
    UnresolvedCluster { lambda: f64, gap: f64, required: f64 },

    #[error("interior radius {radius} is below the propagation bound {bound}")]
    InteriorRadius { radius: usize, bound: usize },

    #[error("matrix is not an orthogonal projection (residual {0:.3e})")]
    NotProjection(f64),

    #[error("no oracle for irrational flux")]
    IrrationalFlux,

    #[error("operator is not periodic under any finite sublattice")]
    NotPeriodic,

    #[error("λ = {lambda} lies within {width:e} of the band edge {edge}")]
    BandEdge { lambda: f64, edge: f64, width: f64 },

    #[error("no exact jump oracle for this model")]
    NoJumpOracle,

    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownName { kind: &'static str, name: String, known: String },

    #[error("config: {0}")]
    Config(String),

    #[error("linear algebra backend failed: {0}")]
    Backend(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
