use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("family is empty")]
    EmptyFamily,
    #[error("family contains an empty set")]
    EmptySet,
    #[error("ground set size {0} is outside 1..=20")]
    GroundTooLarge(usize),
    #[error("element {element} is outside the ground set 1..={n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("point has dimension {got}, family has n = {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {r} is outside 1..={n}")]
    CoordinateOutOfRange { r: usize, n: usize },
    #[error("probability {0} is outside the admissible range")]
    ProbabilityOutOfRange(String),
    #[error("truth table is not monotone: F({lower:#b}) = 1 but F({upper:#b}) = 0")]
    NotMonotone { lower: u32, upper: u32 },
    #[error("truth table is constant")]
    DegenerateConstant,
    #[error("truth table has {got} entries, expected {expected}")]
    TruthTableSize { expected: usize, got: usize },
    #[error("isomorphism test is limited to n <= 8, got n = {0}")]
    GroundTooLargeForIsomorphism(usize),
    #[error("families live on different ground sets ({0} vs {1})")]
    GroundMismatch(usize, usize),
    #[error("Bernstein degree {degree} is below polynomial degree {poly_degree}")]
    DegreeTooSmall { degree: usize, poly_degree: usize },
    #[error("composition would have degree {0}, limit is 4096")]
    CompositionDegreeOverflow(usize),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("inclusion-exclusion is limited to 20 family members, got {0}")]
    FamilyTooLarge(usize),
    #[error("order statistic index r = {r} is outside 1..={n}")]
    IndexOutOfRange { r: usize, n: usize },
    #[error("size list is empty")]
    EmptySizes,
    #[error("a single singleton is the projection; both endpoint derivatives are 1")]
    ProjectionExcluded,
    #[error("the identity module has no Sperner point")]
    IdentityHasNoSpernerPoint,
    #[error("extreme order statistic r = {r} of n = {n} has no interior fixed point")]
    ExtremeOrderStatistic { r: usize, n: usize },
    #[error("a block of size 1 leaves the module without interior fixed points")]
    SingletonBlock,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("operation requires an interior Sperner point")]
    NotInteriorCase,
    #[error("root is not bracketed on [{lo}, {hi}]")]
    NoSignChange { lo: String, hi: String },
    #[error("quantile level {0} is outside [0, 1]")]
    EtaOutOfRange(String),
    #[error("projection has trivial dynamics")]
    ProjectionHasTrivialDynamics,
    #[error("exact iteration would need about {0} bits; use float mode")]
    ExactIterationTooLarge(u64),
    #[error("resource guard exceeded: {0}")]
    ResourceGuardExceeded(String),
    #[error("game tree depth 2N = {0} exceeds 26")]
    TreeTooDeep(usize),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("parse error: {0}")]
    Parse(String),
}
