use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: expected {}", expected.join(", "))]
    Syntax { offset: usize, expected: Vec<String> },
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("square root radicand is not a polynomial in G (offset {offset}); declare branch points explicitly")]
    NonPolynomialRadicand { offset: usize },
    #[error("pole encountered at G = {at}")]
    PoleEncountered { at: Complex64 },
    #[error("branch point encountered at G = {at}")]
    BranchPointEncountered { at: Complex64 },
    #[error("square root continuation is ambiguous at G = {at}")]
    BranchAmbiguity { at: Complex64 },
    #[error("path passes within {distance:e} of a singularity at {near}")]
    SegmentTooClose { distance: f64, near: Complex64 },
    #[error("vector is not of unit length (|v| = {norm})")]
    NotUnit { norm: f64 },
    #[error("G = {at} is a singular point of the data")]
    SingularPoint { at: Complex64 },
    #[error("Gauss curvature vanishes to working precision at G = {at}")]
    FlatPoint { at: Complex64 },
    #[error("quadrature did not reach tolerance within {subintervals} subintervals")]
    QuadratureFailure { subintervals: usize },
    #[error("angle function reaches -1 at G = {at} (antipodal point)")]
    AntipodalPoint { at: Complex64 },
    #[error("invalid Chern-Ricci term list: {0}")]
    InvalidSpec(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("parameter {name} = {value} outside {domain}")]
    ParamOutOfRange { name: String, value: f64, domain: String },
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("family `{0}` has no vertex configuration")]
    NoVertexConfiguration(String),
    #[error("point ({x}, {y}) outside the Scherk graph domain")]
    DomainError { x: f64, y: f64 },
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
