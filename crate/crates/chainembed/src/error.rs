use std::path::PathBuf;

/// Errors of the std layer: IO around the core formats and the protocol.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: PathBuf,
        #[source]
        source: chainembed_core::Error,
    },
    #[error(transparent)]
    Core(#[from] chainembed_core::Error),
    #[error("invalid hardware spec `{0}`, expected MxNxL")]
    HardwareSpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
