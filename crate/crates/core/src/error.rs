use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator `{name}`")]
    UnknownGenerator { name: String },
    #[error("bad exponent in token `{token}`")]
    BadExponent { token: String },
    #[error("generator index {gen} out of range for rank {rank}")]
    GeneratorOutOfRange { gen: usize, rank: usize },
    #[error("expected {expected} arc images, found {found}")]
    ArcCount { expected: usize, found: usize },
    #[error("arc image of hole {hole} does not match the automorphism")]
    ArcMismatch { hole: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("an open book page needs at least one boundary component")]
    NoBoundary,
    #[error("surface too large: genus {genus}, {boundary_count} boundary components")]
    TooLarge { genus: usize, boundary_count: usize },
    #[error("vector length {found} does not match homology rank {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("unknown curve `{name}`")]
    UnknownCurve { name: String },
    #[error("curve `{name}` declared twice")]
    DuplicateCurve { name: String },
    #[error("boundary index {index} out of range ({count} boundary components)")]
    BadBoundaryIndex { index: usize, count: usize },
    #[error("curve `{curve}`: {source}")]
    CurveWord {
        curve: String,
        #[source]
        source: WordError,
    },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McgError {
    #[error("unknown curve `{name}`")]
    UnknownCurve { name: String },
    #[error("no declared automorphism for curve `{name}`")]
    NoAutomorphism { name: String },
    #[error("no declared inverse automorphism for curve `{name}`")]
    NoInverseAutomorphism { name: String },
    #[error("no declared arc images for curve `{name}`")]
    NoArcImages { name: String },
    #[error("arc images of curve `{name}`: {message}")]
    BadArcImages { name: String, message: String },
    #[error("twist word syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("no occurrence of either side of `{relation}` at position {position}")]
    NoOccurrence { relation: String, position: usize },
    #[error("generator index {gen} out of range")]
    BadGenerator { gen: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("cover degree must be at least 1")]
    ZeroDegree,
    #[error("cover degree {k} exceeds the supported maximum {max}")]
    DegreeTooLarge { k: u32, max: u32 },
    #[error("homomorphism has {found} values but the surface has {expected} generators")]
    LambdaLength { expected: usize, found: usize },
    #[error("unknown generator `{name}` in cover spec")]
    UnknownGenerator { name: String },
    #[error("cover spec must give exactly one of `lambda` or `cutting_class`")]
    AmbiguousSpec,
    #[error("computed genus is not a non-negative integer (chi {chi}, {boundary} boundary components, {components} components)")]
    BadGenus {
        chi: i64,
        boundary: usize,
        components: usize,
    },
    #[error("curve `{name}` is not a lift declared by this cover")]
    UnknownLift { name: String },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Mcg(#[from] McgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoliationError {
    #[error("invalid movie: {}", .diagnostics.join("; "))]
    Invalid { diagnostics: Vec<String> },
    #[error("event {event} carries no incident elliptic points")]
    MissingIncidence { event: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{what}: line {line}, column {column}: {message}")]
    Json {
        what: &'static str,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{what}: expected format tag `{expected}`, found `{found}`")]
    Tag {
        what: &'static str,
        expected: &'static str,
        found: String,
    },
    #[error("{what}: field `{field}`: {message}")]
    Field {
        what: &'static str,
        field: String,
        message: String,
    },
}

impl FormatError {
    pub(crate) fn json(what: &'static str, err: serde_json::Error) -> Self {
        FormatError::Json {
            what,
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }

    pub(crate) fn field(what: &'static str, field: impl Into<String>, message: impl ToString) -> Self {
        FormatError::Field {
            what,
            field: field.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresetError {
    #[error("preset parameter {name} = {value} is out of range ({expected})")]
    Parameter {
        name: &'static str,
        value: i64,
        expected: &'static str,
    },
    #[error("case {case} needs p and q {parity}, got p = {p}, q = {q}")]
    Parity {
        case: u8,
        parity: &'static str,
        p: usize,
        q: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error("{0}")]
    Reference(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
}
