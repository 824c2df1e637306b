use core::fmt;

use crate::behavior::Side;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Coarse classification of [`Error`], used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Invalid values, ranges or structurally inconsistent inputs.
    Domain,
    /// Not enough observations to compute the requested quantity.
    InsufficientData,
    /// Malformed textual input.
    Parse,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidProbability {
        index: usize,
        value: f64,
    },
    NotNormalized {
        x: u8,
        y: u8,
        sum: f64,
    },
    InvalidMixture(&'static str),
    Signaling {
        side: Side,
        deviation: f64,
    },
    Range {
        what: &'static str,
        value: f64,
    },
    Geometry(&'static str),
    Structure(&'static str),
    InputExhausted {
        side: Side,
        needed: usize,
        available: usize,
    },
    InsufficientData(&'static str),
    DegenerateBias {
        alpha: f64,
        beta: f64,
    },
    Configuration(&'static str),
    FineTuned {
        alpha: f64,
        beta: f64,
        band: f64,
    },
    Parse(&'static str),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InsufficientData(_) => ErrorKind::InsufficientData,
            Error::Parse(_) => ErrorKind::Parse,
            _ => ErrorKind::Domain,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidProbability { index, value } => {
                write!(f, "entry {index} is not a probability: {value}")
            }
            Error::NotNormalized { x, y, sum } => {
                write!(f, "p(.,.|{x},{y}) sums to {sum}, expected 1")
            }
            Error::InvalidMixture(msg) => write!(f, "invalid mixture: {msg}"),
            Error::Signaling { side, deviation } => write!(
                f,
                "{side:?} marginal depends on the other party's input (deviation {deviation:e})"
            ),
            Error::Range { what, value } => write!(f, "{what} out of range: {value}"),
            Error::Geometry(msg) => write!(f, "geometry error: {msg}"),
            Error::Structure(msg) => write!(f, "structure error: {msg}"),
            Error::InputExhausted { side, needed, available } => write!(
                f,
                "{side:?} input script has {available} entries, run needs {needed}"
            ),
            Error::InsufficientData(msg) => write!(f, "insufficient data: {msg}"),
            Error::DegenerateBias { alpha, beta } => {
                write!(f, "degenerate bias: alpha ({alpha}) equals beta ({beta})")
            }
            Error::Configuration(msg) => write!(f, "configuration error: {msg}"),
            Error::FineTuned { alpha, beta, band } => write!(
                f,
                "fine-tuned behavior: marginalized biases {alpha} and {beta} agree within {band}; mix toward a steerable vertex"
            ),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
