use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid bounding box: {0}")]
    InvalidBox(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {field}: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("{0}")]
    Screening(String),

    #[error("{0}")]
    Dataset(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, field: &str, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad input rather than by the environment.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Stream(_))
    }
}
