use std::fmt;

use iconv_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_NON_INVERTIBLE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

/// Why a command stopped early, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(e) => core_exit_code(e),
        }
    }
}

fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::NonInvertibleModePair { .. } | Error::Chain { .. } => EXIT_NON_INVERTIBLE,
        Error::Layer { source, .. } => core_exit_code(source),
        Error::Format(_)
        | Error::CorruptFile(_)
        | Error::UnsupportedDtype(_)
        | Error::Io(_)
        | Error::InvalidSample { .. } => EXIT_DATA,
        Error::Shape(_) | Error::OddLength { .. } | Error::UnsupportedKernelMode(_) => EXIT_USAGE,
        Error::SingularFrequency { .. } | Error::NotReal { .. } | Error::RowViolation { .. } => {
            EXIT_VERIFY
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
