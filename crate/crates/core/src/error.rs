use std::fmt;

/// A syntax error at a byte offset of some input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }

    /// Shift the position, for errors raised on a substring.
    pub fn offset(mut self, by: usize) -> Self {
        self.pos += by;
        self
    }

    /// Two-line rendering: the source, then a caret under the offending byte.
    pub fn render(&self, src: &str) -> String {
        let col = src
            .char_indices()
            .take_while(|(i, _)| *i < self.pos)
            .count();
        format!("{}\n{}\n{}^", self.message, src, " ".repeat(col))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("tree-shape error: {0}")]
    TreeShape(String),
    #[error("translation stalled at stage {stage}: {reason}")]
    Stalled { stage: usize, reason: String },
    #[error("reconstruction failed at round {round}: no matching move within the search bound")]
    ReconstructionFailed { round: usize },
    #[error("construction error: {0}")]
    Construction(String),
    #[error("search bound exhausted: {0}")]
    SearchExhausted(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
}

pub type Result<T> = std::result::Result<T, Error>;
