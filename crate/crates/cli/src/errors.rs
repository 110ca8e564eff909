//! Error classes and their process exit codes.

use std::fmt;

/// Anything wrong with the configuration itself.
#[derive(Debug)]
pub struct ConfigError(pub String);

/// Missing or malformed input data.
#[derive(Debug)]
pub struct DataError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}
impl std::error::Error for DataError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Numeric,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 2,
            ErrorKind::Data => 3,
            ErrorKind::Numeric => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::Config => "config",
            ErrorKind::Data => "data",
            ErrorKind::Numeric => "numeric",
        }
    }
}

/// Classifies by the first recognised error in the chain.
pub fn classify(err: &anyhow::Error) -> ErrorKind {
    use spikeonet::Error as E;
    for cause in err.chain() {
        if cause.is::<ConfigError>() || cause.is::<clap::Error>() {
            return ErrorKind::Config;
        }
        if cause.is::<DataError>() || cause.is::<std::io::Error>() {
            return ErrorKind::Data;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Numeric(_) | E::HeavisideBackward { .. } | E::StaleCache { .. } => ErrorKind::Numeric,
                E::Format(_) | E::EmptyDataset | E::Io(_) | E::Json(_) => ErrorKind::Data,
                E::Dimension(_) | E::InvalidArgument(_) | E::OutOfRange { .. } | E::ImmutableSynapse => {
                    ErrorKind::Config
                }
            };
        }
    }
    ErrorKind::Numeric
}

/// One-line JSON object for stderr.
pub fn error_json(err: &anyhow::Error) -> String {
    let kind = classify(err);
    serde_json::json!({
        "error": kind.name(),
        "exit_code": kind.exit_code(),
        "message": format!("{err:#}"),
    })
    .to_string()
}
