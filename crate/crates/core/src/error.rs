use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("invalid interpretation: {0}")]
    Validation(String),

    #[error("{what} exceeds the configured cap of {limit}")]
    ResourceCap { what: &'static str, limit: usize },

    #[error("unknown vertex or element {0:?}")]
    UnknownVertex(String),

    #[error("unknown fixture {0:?} (expected one of fig3, fig4i, fig4ii, fig5, fig7)")]
    UnknownFixture(String),

    #[error("description trees cannot represent Bottom")]
    BottomHasNoTree,

    #[error("soundness violation: {0}")]
    Soundness(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    FileSyntax {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: line {line}, column {column}: {message}")]
    Json {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
