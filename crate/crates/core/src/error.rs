use thiserror::Error;

use crate::planes::PlaneInvariants;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field degree {0} is outside 1..=16")]
    UnsupportedDegree(u32),
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(u32),
    #[error("modulus {modulus} is not an irreducible polynomial of degree {h}")]
    Reducible { h: u32, modulus: String },
    #[error("cannot parse modulus {0:?}")]
    BadModulus(String),
    #[error("bad field configuration: {0}")]
    BadConfig(String),
    #[error("value {value} is not an element of GF({q})")]
    OutOfRange { value: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("equation is degenerate")]
    DegenerateEquation,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("zero vector does not define a point")]
    ZeroVector,
    #[error("vectors are linearly dependent (rank {rank}, expected {expected})")]
    Dependent { rank: usize, expected: usize },
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("point has the wrong rank for this operation")]
    WrongRank,
    #[error("no cubic: the plane lies in a subspace where the determinant vanishes identically")]
    DegenerateCubic,
    #[error("hessian requires a non-zero XYZ coefficient")]
    HessianUndefined,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("plane meets the Veronese surface in no point")]
    NoVeronesePoint,
    #[error("classification is not available for q = {0}")]
    UnsupportedOrder(u32),
    #[error("invariants fit no orbit: {0:?}")]
    Unreachable(Box<PlaneInvariants>),
    #[error("representatives of {0} and {1} lie in one orbit")]
    OrbitClash(String, String),
    #[error("line invariants fit no orbit: od {0:?}")]
    UnreachableLine([u32; 4]),
    #[error("classifying plane [{plane}] failed: {source}")]
    InPlane { plane: String, source: Box<ClassifyError> },
    #[error("no representative of {label} exists for q = {q}")]
    NoRepresentative { label: String, q: u32 },
}

impl From<FieldError> for ClassifyError {
    fn from(e: FieldError) -> Self {
        ClassifyError::Geometry(GeometryError::Field(e))
    }
}
