use thiserror::Error;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    BadArgument(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(cavity_qfi::Error),
    #[error(transparent)]
    Model(#[from] cavity_qfi::Error),
    #[error("unknown plot column '{0}'")]
    UnknownColumn(String),
    #[error("plot needs {0}")]
    PlotInput(&'static str),
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{failed} of {total} validation checks failed")]
    ValidationFailed { failed: usize, total: usize },
}

impl CliError {
    /// Short machine-readable tag used in the one-line error report.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::BadArgument(_) => "bad_argument",
            CliError::InvalidScenario(_) => "invalid_scenario",
            CliError::Model(_) => "model",
            CliError::UnknownColumn(_) => "unknown_column",
            CliError::PlotInput(_) => "plot_input",
            CliError::Io { .. } => "io",
            CliError::Json(_) => "json",
            CliError::ValidationFailed { .. } => "validation_failed",
        }
    }

    /// 2 for anything the caller got wrong, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadArgument(_)
            | CliError::InvalidScenario(_)
            | CliError::UnknownColumn(_)
            | CliError::PlotInput(_) => 2,
            CliError::Model(_)
            | CliError::Io { .. }
            | CliError::Json(_)
            | CliError::ValidationFailed { .. } => 1,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// `error kind=<tag> message="<escaped>"` on a single line.
pub fn error_line(kind: &str, message: &str) -> String {
    let mut escaped = String::with_capacity(message.len());
    for c in message.chars() {
        match c {
            '"' => escaped.push_str("\\\""),
            '\\' => escaped.push_str("\\\\"),
            '\n' => escaped.push_str("\\n"),
            '\r' => escaped.push_str("\\r"),
            '\t' => escaped.push_str("\\t"),
            c => escaped.push(c),
        }
    }
    format!("error kind={kind} message=\"{escaped}\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_line_is_single_line() {
        let line = error_line("io", "a \"b\"\nc\\d");
        assert_eq!(line, r#"error kind=io message="a \"b\"\nc\\d""#);
        assert!(!line.contains('\n'));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::BadArgument("x".into()).exit_code(), 2);
        assert_eq!(
            CliError::ValidationFailed {
                failed: 1,
                total: 2
            }
            .exit_code(),
            1
        );
    }
}
