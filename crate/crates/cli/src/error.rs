use carnap_core::ErrorKind;

/// A failure carrying its process exit code.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub const SCHEMA: i32 = 2;
    pub const DOMAIN: i32 = 3;
    pub const NUMERICAL: i32 = 4;

    pub fn schema(message: impl Into<String>) -> Self {
        Self { code: Self::SCHEMA, message: message.into() }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self { code: Self::DOMAIN, message: message.into() }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self::schema(format!("{}: {err}", path.display()))
    }
}

impl From<carnap_core::Error> for CliError {
    fn from(e: carnap_core::Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Schema => Self::SCHEMA,
            ErrorKind::Domain => Self::DOMAIN,
            ErrorKind::Numerical => Self::NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::schema(e.to_string())
    }
}
