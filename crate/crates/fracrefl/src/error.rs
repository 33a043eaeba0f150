use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] fracrefl_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("wavelet is aliased: Nyquist {nyquist} Hz is below 3 x {fpeak} Hz")]
    Aliasing { nyquist: f64, fpeak: f64 },
    #[error("incident spectrum too weak on [{lo}, {hi}] Hz")]
    IllConditionedBand { lo: f64, hi: f64 },
}

impl Error {
    /// Exit code for the command-line contract: 2 for bad arguments, 3 for solver failures.
    pub fn exit_code(&self) -> i32 {
        use fracrefl_core::Error as C;
        match self {
            Error::Core(C::InvalidParameter { .. } | C::GrazingIncidence(_) | C::BranchCut) => 2,
            Error::Core(_) => 3,
            Error::Usage(_) | Error::Parse(_) | Error::Aliasing { .. } => 2,
            Error::Io(_) | Error::IllConditionedBand { .. } => 3,
        }
    }
}
