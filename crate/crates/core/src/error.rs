use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A ladder-operator power would reach past the truncated basis.
    #[error("moment of order {required} needs {required} basis states of headroom above the physical cutoff, state has {available}")]
    Headroom { required: usize, available: usize },

    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// The natural-approach identity requires `<a(T)>` and `<a^2(T)>` to vanish.
    #[error("selection rule violated: |{moment}| = {magnitude:e} at T = {time}")]
    SelectionRule {
        moment: &'static str,
        magnitude: f64,
        time: f64,
    },

    #[error("invalid step: {0}")]
    InvalidStep(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("malformed series: {0}")]
    Series(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
