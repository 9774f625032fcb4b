use std::path::PathBuf;

use thiserror::Error;
use vfrac_core::ExprError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Argument parsing failed, or help/version was requested.
    #[error("{0}")]
    Clap(#[from] clap::Error),

    #[error("{0}")]
    Usage(String),

    #[error("invalid {flag} `{text}`: {err}")]
    Expression {
        flag: &'static str,
        text: String,
        err: ExprError,
    },

    #[error(transparent)]
    Library(#[from] vfrac_core::Error),

    #[error("cannot write {}: {err}", path.display())]
    Io { path: PathBuf, err: std::io::Error },
}

impl CliError {
    /// 0 for help/version output, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            _ => 2,
        }
    }

    /// The diagnostic as a single line.
    pub fn one_line(&self) -> String {
        let text = match self {
            CliError::Clap(e) => {
                let rendered = e.to_string();
                rendered.lines().next().unwrap_or_default().to_string()
            }
            other => other.to_string(),
        };
        let text = text.trim_start_matches("error: ");
        text.split_whitespace().collect::<Vec<_>>().join(" ")
    }
}
