use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ordering identifies distinct basic types `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("unknown basic type `{0}`")]
    UnknownBasic(String),
    #[error("word `{0}` is not in the vocabulary")]
    UnknownWord(String),
    #[error("duplicate dictionary entry `{word} : {ty}`")]
    DuplicateEntry { word: String, ty: String },
    #[error("malformed type `{0}`")]
    TypeSyntax(String),
    #[error("oracle input too large: {len} tokens (limit {limit})")]
    Scale { len: usize, limit: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("codomain of length {left} cannot be glued to domain of length {right}")]
    BoundaryMismatch { left: usize, right: usize },
    #[error("invalid wiring: {0}")]
    InvalidWiring(String),
    #[error("no lexicon entry for `{word} : {ty}`")]
    MissingEntry { word: String, ty: String },
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("symbol `{symbol}` used with arity {found}, expected {expected}")]
    SignatureMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("queries have {left} and {right} free variables")]
    FreeArityMismatch { left: usize, right: usize },
    #[error("malformed query: {0}")]
    QuerySyntax(String),
    #[error("sentence {index} translates to a query with {free} free variables")]
    NonClosedSentence { index: usize, free: usize },
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("link refers to unknown variable `{variable}` of sentence {sentence}")]
    UnknownLinkTarget { sentence: usize, variable: String },
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("sentence {index} is not grammatical: {text}")]
    Ungrammatical { index: usize, text: String },
    #[error(transparent)]
    Json(#[from] JsonError),
}

/// Wrapper so `Error` stays `Clone + Eq`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0}")]
pub struct JsonError(pub String);

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(JsonError(e.to_string()))
    }
}
