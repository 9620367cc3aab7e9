use crate::padding::PadMode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),

    #[error("corrupt file: {0}")]
    CorruptFile(String),

    #[error("unsupported dtype code {0}")]
    UnsupportedDtype(u8),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("non-finite sample at index {index}")]
    InvalidSample { index: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("{mode} padding needs an even base length, got {len}")]
    OddLength { mode: PadMode, len: usize },

    #[error("inverse transform left an imaginary residue of {residue:e}")]
    NotReal { residue: f64 },

    #[error("kernel spectrum is singular at frequency {frequency:?} (condition ratio {ratio:e})")]
    SingularFrequency { frequency: Vec<usize>, ratio: f64 },

    #[error("{0} kernels cannot be embedded in a layer; use ws or wa")]
    UnsupportedKernelMode(PadMode),

    #[error("mode pair (x {x_mode}, w {w_mode}) is transition row {row}, which is not invertible")]
    NonInvertibleModePair {
        x_mode: PadMode,
        w_mode: PadMode,
        row: usize,
    },

    #[error("layer {layer}: {reason}")]
    Chain { layer: usize, reason: String },

    #[error("layer {index}: {source}")]
    Layer {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("transition row {row} violated: {reason}")]
    RowViolation { row: usize, reason: String },
}
