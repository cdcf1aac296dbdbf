use thiserror::Error;

/// Errors raised by the engine.
///
/// Variants are grouped by the module that produces them; `kind()` maps each
/// variant onto the coarse classes used for process exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // coefficient fields
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different coefficient fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("minimal polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("polynomial is reducible, found factor {0}")]
    ReduciblePolynomial(String),
    #[error("unsupported field extension: {0}")]
    UnsupportedExtension(String),

    // polynomials and series
    #[error("arity mismatch: expected {expected} components, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("variable lists differ: [{0}] vs [{1}]")]
    VariableMismatch(String, String),
    #[error("zero input where a nonzero element is required")]
    ZeroInput,
    #[error("order undetermined: no nonzero term below t^{0}")]
    UndeterminedOrder(u32),
    #[error("invalid parametrization: {0}")]
    InvalidParam(String),
    #[error("f∘φ vanishes to precision {0} but cannot be certified zero")]
    Undecidable(u32),

    // valuations
    #[error("values differ: {0} vs {1}")]
    ValueMismatch(String, String),
    #[error("residue undefined: {0}")]
    NotAUnit(String),
    #[error("invalid valuation: {0}")]
    InvalidValuation(String),

    // Hamburger-Noether engine
    #[error("valuation is not centered: parameter {0} has value {1}")]
    NotCentered(String, String),
    #[error("the process already terminated (divisorial at step {0})")]
    Terminated(usize),
    #[error("separation not reached within {max_steps} steps (gaps: {gaps:?})")]
    SeparationNotReached { max_steps: usize, gaps: Vec<i64> },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("no point off P_h·ΠP_f = 0 in the coefficient field; extend the field")]
    PointSearchExhausted,
    #[error("operation requires {expected} variables, found {found}")]
    UnsupportedArity { expected: usize, found: usize },

    // branches
    #[error("tangent direction needs an unsupported extension: {0}")]
    RootNotRepresentable(String),
    #[error("branch expansion exhausted its precision budget")]
    PrecisionExhausted,

    // closure and exponent
    #[error("malformed integral-equation certificate: {0}")]
    MalformedCertificate(String),
    #[error("ideal is not (x,y)-primary up to m^{0}")]
    NotPrimary(u32),
    #[error("ideal is not monomial: {0}")]
    NotMonomial(String),
    #[error("bounds too small: {0}")]
    BoundTooSmall(String),

    // expression front end
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown variable `{name}` at {line}:{column}")]
    UnknownVariable { name: String, line: usize, column: usize },
    #[error("exponent must be a natural number at {line}:{column}")]
    NonNaturalExponent { line: usize, column: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Coarse classification used by front ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Undetermined,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            UndeterminedOrder(_)
            | Undecidable(_)
            | SeparationNotReached { .. }
            | PointSearchExhausted
            | PrecisionExhausted
            | BoundTooSmall(_)
            | NotPrimary(_) => ErrorKind::Undetermined,
            FieldMismatch(..) | VariableMismatch(..) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
