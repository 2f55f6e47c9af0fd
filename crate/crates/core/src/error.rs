use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("division by a non-constant or zero polynomial")]
    BadDivision,
    #[error("structure constants must be parameter-free rationals (pair {0},{1})")]
    ParameterizedConstants(usize, usize),
    #[error("antisymmetry violated at c[{0}][{1}][{2}]")]
    AntisymmetryViolation(usize, usize, usize),
    #[error("Jacobi identity violated for basis triple ({i},{j},{l}); residual {residual}")]
    JacobiViolation {
        i: usize,
        j: usize,
        l: usize,
        residual: String,
    },
    #[error("grading violation: {0}")]
    GradingViolation(String),
    #[error("not a representation: [rho(X{0}), rho(X{1})] != rho([X{0},X{1}]); residual {2}")]
    NotARepresentation(usize, usize, String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),
    #[error("wedge degree overflow: {0} + {1} > 3")]
    DegreeOverflow(usize, usize),
    #[error("contraction degree underflow: form degree {0} > multivector degree {1}")]
    DegreeUnderflow(usize, usize),
    #[error("multivectors belong to different algebras")]
    AlgebraMismatch,
    #[error("algebra is not graded")]
    NotGraded,
    #[error("unsupported module: {0}")]
    UnsupportedModule(String),
    #[error("input carries formal parameters; instantiate them rationally first")]
    Parameterized,
    #[error("c is not triangular ([c,c] != 0)")]
    NotTriangular,
    #[error("bad signature ({0},{1}): need p+q >= 2")]
    BadSignature(usize, usize),
    #[error("element is not a translation (not in V)")]
    NotTranslation,
    #[error("element is not in the mixed block V^h")]
    NotMixedBlock,
    #[error("operation requires dim V = {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("invalid automorphism move: {0}")]
    InvalidMove(String),
    #[error("c is not proportional to JX+^X+")]
    WrongC,
    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),
    #[error("missing binding for parameter '{0}'")]
    MissingParameter(String),
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("document error: {0}")]
    Document(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
