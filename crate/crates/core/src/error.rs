use crate::geom::Point;

/// Errors raised by the kernel, the searches, the constructions and the file formats.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("zero-length segment at {0}")]
    DegenerateSegment(Point),

    #[error("line coefficients A and B are both zero")]
    DegenerateLine,

    #[error("vertical line not allowed here")]
    VerticalLine,

    #[error("point {0} does not lie on the given line")]
    PointOffLine(Point),

    #[error("empty line set")]
    EmptyLineSet,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid drawing: {0}")]
    InvalidDrawing(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("brute force is capped at {cap} variables, instance has {alpha}")]
    TooManyVariables { alpha: usize, cap: usize },

    #[error("instance exceeds the gadget cap (alpha <= {max_alpha}, beta <= {max_beta})")]
    OverCap { max_alpha: usize, max_beta: usize },

    /// A geometric claim the constructions rely on did not hold.
    #[error("construction check failed [{claim}]: {detail}")]
    Construction { claim: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn construction(claim: &'static str, detail: impl Into<String>) -> Self {
        Error::Construction {
            claim,
            detail: detail.into(),
        }
    }

    /// True for failures of internal construction claims, as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Construction { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
