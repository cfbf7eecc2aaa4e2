use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration, with the offending field path.
    Config {
        field: String,
        message: String,
    },
    Io(String),
    Core(pairzeta::Error),
    Usage(String),
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, message } => {
                write!(f, "config error at `{field}`: {message}")
            }
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pairzeta::Error> for CliError {
    fn from(e: pairzeta::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
