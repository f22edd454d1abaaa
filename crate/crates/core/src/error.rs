use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generators do not span R^{dim}")]
    NotSpanning { dim: usize },
    #[error("cone is not pointed: it contains a line")]
    NotPointed,
    #[error("vertex enumeration requested in dimension {dim}, supported up to {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("dual cone has empty interior")]
    EmptyInterior,
    #[error("functional does not pair strictly positively with every cone generator")]
    NotInteriorFunctional,
    #[error("functional is not orthogonal to the lattice basis")]
    FunctionalNotOrthogonal,
    #[error("lattice basis vector {index} is not orthogonal to the functional")]
    LatticeNotOrthogonal { index: usize },
    #[error("lattice basis is not linearly independent or has rank >= d")]
    DegenerateLattice,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("chart and cone are inconsistent: {0}")]
    ChartMismatch(String),
    #[error("shift is not in the cone semigroup")]
    NotInCone,
    #[error("window ladder has {distinct} distinct windows, need at least {required}")]
    LadderTooShort { distinct: usize, required: usize },
    #[error("infinite multiplicity is not representable on a grid")]
    InfiniteMultiplicity,
    #[error("grid window does not match the quotient chart: {0}")]
    WindowChartMismatch(String),
    #[error("invalid grid window: {0}")]
    InvalidWindow(String),
    #[error("sample is not a grid shift of this window: {0}")]
    SampleOffGrid(String),
    #[error("unstable result: {0}")]
    Unstable(String),
    #[error("truncation guard: |v|^2 = {norm_sq:.4} exceeds n/3 = {limit:.4}")]
    TruncationGuard { norm_sq: f64, limit: f64 },
    #[error("shift leaves the safe region of the window")]
    UnsafeShift,
    #[error("interior point is not strictly interior or its difference set reaches the window edge")]
    UnsafeInteriorPoint,
    #[error("Gram matrix is not positive semidefinite (min eigenvalue {min_eig:e})")]
    NotConditionallyPsd { min_eig: f64 },
    #[error("input is not exactly rational")]
    IrrationalInput,
    #[error("scenarios are not comparable: {0}")]
    IncomparableScenarios(String),
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
