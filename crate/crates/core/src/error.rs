use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must lie in {range}, got {value}")]
    OutOfRange {
        name: &'static str,
        range: &'static str,
        value: f64,
    },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("r = {r0} has no point in the unit square at {fixed} = {at} (solved value {solved})")]
    OffContour {
        r0: f64,
        fixed: &'static str,
        at: f64,
        solved: f64,
    },

    #[error("masses and probabilities differ in length ({masses} vs {probs})")]
    LengthMismatch { masses: usize, probs: usize },

    #[error("a selection model needs at least one interval")]
    EmptyPartition,

    #[error("interval masses sum to {sum}, expected 1")]
    MassSum { sum: f64 },

    #[error("breakpoints must be strictly increasing (index {index}: {prev} then {next})")]
    BreakpointOrder { index: usize, prev: f64, next: f64 },

    #[error("tabulated CDF is invalid: {0}")]
    InvalidCdf(String),

    #[error("a study set needs at least one z-score")]
    EmptyStudySet,

    #[error("line {line}: cannot parse {text:?} as a z-score")]
    Parse { line: usize, text: String },

    #[error("invalid simulation config: {0}")]
    Config(String),
}
