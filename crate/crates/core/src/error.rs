use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A real argument fell outside the domain of a function.
    Domain {
        what: &'static str,
        value: f64,
    },
    /// Distribution or model parameters failed validation.
    InvalidParams(&'static str),
    EmptyBlock,
    /// Fewer samples than the estimator needs.
    TooFewSamples {
        needed: usize,
        got: usize,
    },
    /// Block carries no shape information (all samples equal or zero spread).
    DegenerateBlock {
        delta: f64,
    },
    /// Δ lies outside the validity range of an approximation.
    OutOfRange {
        delta: f64,
        max: f64,
    },
    NoConvergence {
        iterations: u32,
    },
    NoBlocks,
    NonPositiveDenominator {
        m: f64,
        value: f64,
    },
    UnsupportedMoment(u32),
    InvalidConfig {
        field: &'static str,
        reason: &'static str,
    },
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// Image has fewer distinct intensities than requested classes.
    DegenerateImage {
        distinct: usize,
        classes: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::EmptyBlock => f.write_str("empty sample block"),
            Error::TooFewSamples { needed, got } => {
                write!(f, "too few samples: need at least {needed}, got {got}")
            }
            Error::DegenerateBlock { delta } => {
                write!(f, "degenerate block (delta = {delta:e}); shape estimate unbounded")
            }
            Error::OutOfRange { delta, max } => {
                write!(f, "OutOfRange: delta = {delta} exceeds approximation domain (max {max})")
            }
            Error::NoConvergence { iterations } => {
                write!(f, "solver did not converge within {iterations} iterations")
            }
            Error::NoBlocks => f.write_str("no blocks were folded into the estimate"),
            Error::NonPositiveDenominator { m, value } => {
                write!(f, "non-positive bound denominator {value} at m = {m}")
            }
            Error::UnsupportedMoment(k) => {
                write!(f, "unsupported moment order {k}; expected 2, 4 or 6")
            }
            Error::InvalidConfig { field, reason } => write!(f, "invalid {field}: {reason}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {}x{}, got {}x{}", expected.0, expected.1, got.0, got.1)
            }
            Error::DegenerateImage { distinct, classes } => {
                write!(f, "image has {distinct} distinct intensities, fewer than {classes} classes")
            }
        }
    }
}

impl core::error::Error for Error {}
