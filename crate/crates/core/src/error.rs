use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable index {var} out of range for {nvars} variables")]
    VariableOutOfRange { var: usize, nvars: usize },
    #[error("operands live in different rings ({left} vs {right} variables)")]
    NvarsMismatch { left: usize, right: usize },
    #[error("zero input to {0}")]
    ZeroInput(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator of degree {degree} does not split into Gaussian-rational linear factors")]
    IrrationalPole { degree: usize },

    #[error("factors {first} and {second} share a root sheet in z{var}")]
    CoprimalityViolation { first: usize, second: usize, var: usize },
    #[error("factor {index} is not squarefree in z{var}")]
    NonSquarefreeFactor { index: usize, var: usize },
    #[error("leading coefficient of factor {index} in z{var} vanishes at the origin")]
    LeadingCoefficientVanishesAtOrigin { index: usize, var: usize },
    #[error("factor {index} does not depend on z{var}")]
    FactorFreeOfVariable { index: usize, var: usize },
    #[error("component {component} has multiplicity {multiplicity}, a simple pole is required")]
    MultiplePole { component: usize, multiplicity: u32 },
    #[error("order-{order} pole term cannot be reduced: {term}")]
    PoleReductionObstruction { order: u32, term: String },
    #[error("residue form on component {component} is not constant: {form}")]
    NonConstantResidueForm { component: usize, form: String },
    #[error("chart z{var} is invalid for this hypersurface")]
    InvalidChart { var: usize },
    #[error("numerator {0} is not a polynomial multiple of the factored denominator")]
    DenominatorMismatch(String),

    #[error("form degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("wrong antiholomorphic degree: expected {expected}, found {found}")]
    WrongBidegree { expected: usize, found: usize },
    #[error("test forms must share centre and support radius")]
    SupportMismatch,

    #[error("leading coefficient vanishes at the base point")]
    LeadingCoefficientVanishes,
    #[error("root finding did not converge after {iterations} iterations (residual {residual:e})")]
    RootFindingDivergence { iterations: usize, residual: f64 },
    #[error("Newton continuation failed at eps = {eps:e}: {reason}")]
    NewtonContinuationFailure { eps: f64, reason: String },
    #[error("{what} did not converge (residual {residual:e})")]
    NonConvergent { what: String, residual: f64 },
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
