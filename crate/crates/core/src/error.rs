use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown domain `{0}` (expected square, lshape, hexagon, cube or fichera)")]
    UnknownDomain(String),

    #[error("mesh would have {cells} cells, above the cap of {cap}")]
    CellCapExceeded { cells: usize, cap: usize },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate cell {cell} (measure {measure:e})")]
    DegenerateCell { cell: usize, measure: f64 },

    #[error("unsupported quadrature: {0}")]
    UnsupportedQuadrature(String),

    #[error("invalid coefficient descriptor `{0}`")]
    InvalidCoefficient(String),

    #[error("coefficient {name} = {value} below its lower bound {bound} in cell {cell}")]
    CoefficientBelowBound {
        name: &'static str,
        cell: usize,
        value: f64,
        bound: f64,
    },

    #[error("face {face} of cell {cell} is not on the boundary")]
    FaceNotOnBoundary { cell: usize, face: usize },

    #[error("cholesky factorization failed: {0}")]
    Factorization(String),

    #[error("requested {requested} eigenvalues but only {available} finite ones are available")]
    TooManyEigenvalues { requested: usize, available: usize },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("problem too large for dense solver: {n} > {cap}")]
    DenseSizeCap { n: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}
