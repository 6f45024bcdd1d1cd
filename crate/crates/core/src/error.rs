use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("exact arithmetic requested but {0} carries no exact rational data")]
    ExactModeUnavailable(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("edge {0}-{1} joins two coincident points")]
    CoincidentEdgeEndpoints(usize, usize),

    #[error("vertex {index} is off the model surface (norm residual {residual:e})")]
    OffSurfaceVertex { index: usize, residual: f64 },

    #[error("hyperbolic vertex {0} is not on the upper sheet (x0 <= 0)")]
    NonPositiveSheet(usize),

    #[error("invalid edge list: {0}")]
    InvalidEdge(String),

    #[error("operation requires a {expected} framework, got {found}")]
    WrongGeometry { expected: String, found: String },

    #[error("vertices span an affine subspace of dimension {span} < {dimension}")]
    DegenerateSpan { span: usize, dimension: usize },

    #[error("projective map matrix is singular")]
    SingularMap,

    #[error("vertex {0} is sent to infinity by the projective map")]
    VertexAtInfinity(usize),

    #[error("point lies on the hyperplane sent to infinity")]
    PointAtInfinity,

    #[error("projective map is affine; no finite hyperplane at infinity")]
    AffineMap,

    #[error("force system does not reduce to a single force or couple (total bivector {total:?})")]
    NonDecomposable { total: Vec<f64> },

    #[error("velocity class is based at a point not proportional to the vertex")]
    BasePointMismatch,

    #[error("representatives of edge {0}-{1} are proportional")]
    ProportionalRepresentatives(usize, usize),

    #[error("vertex {0} lies outside the open unit disk")]
    OutsideDisk(usize),

    #[error("velocity at vertex {index} is not tangent (residual {residual:e})")]
    TangencyViolation { index: usize, residual: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("framework is not octahedral: {0}")]
    NotOctahedral(String),

    #[error("improper face coloring: {0}")]
    ImproperColoring(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFiniteEntry { .. } => "NonFiniteEntry",
            Error::ExactModeUnavailable(_) => "ExactModeUnavailable",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Schema(_) => "SchemaError",
            Error::CoincidentEdgeEndpoints(..) => "CoincidentEdgeEndpoints",
            Error::OffSurfaceVertex { .. } => "OffSurfaceVertex",
            Error::NonPositiveSheet(_) => "NonPositiveSheet",
            Error::InvalidEdge(_) => "InvalidEdge",
            Error::WrongGeometry { .. } => "WrongGeometry",
            Error::DegenerateSpan { .. } => "DegenerateSpan",
            Error::SingularMap => "SingularMap",
            Error::VertexAtInfinity(_) => "VertexAtInfinity",
            Error::PointAtInfinity => "PointAtInfinity",
            Error::AffineMap => "AffineMap",
            Error::NonDecomposable { .. } => "NonDecomposable",
            Error::BasePointMismatch => "BasePointMismatch",
            Error::ProportionalRepresentatives(..) => "ProportionalRepresentatives",
            Error::OutsideDisk(_) => "OutsideDisk",
            Error::TangencyViolation { .. } => "TangencyViolation",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::NotOctahedral(_) => "NotOctahedral",
            Error::ImproperColoring(_) => "ImproperColoring",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
