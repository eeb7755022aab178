use std::path::PathBuf;

use crate::textio::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}", prefixed(path, source))]
    ParseIn { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Core(#[from] respo_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 for unreadable or malformed input, 3 for an
    /// inconsistent knowledge base, 4 for an unsupported combination or a
    /// size limit, 1 for internal failures.
    pub fn exit_code(&self) -> i32 {
        use respo_core::Error as C;
        match self {
            Error::Parse(_) | Error::ParseIn { .. } | Error::Io { .. } | Error::Usage(_) => 2,
            Error::Core(C::Invalid(_)) => 2,
            Error::Core(C::Inconsistent) => 3,
            Error::Core(
                C::Unsupported(_)
                | C::NotInteractionFree
                | C::TooLarge { .. }
                | C::RewriteDiverged(_)
                | C::Overflow(_),
            ) => 4,
            Error::Core(C::Invariant(_)) => 1,
        }
    }
}

pub(crate) fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write(path: &std::path::Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn prefixed(path: &std::path::Path, e: &ParseError) -> String {
    e.diagnostics
        .iter()
        .map(|d| format!("{}:{d}", path.display()))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Reads and parses a file, attaching the path to parse diagnostics.
pub(crate) fn parse_file<T>(
    path: &std::path::Path,
    parse: impl FnOnce(&str) -> std::result::Result<T, ParseError>,
) -> Result<T> {
    let text = read(path)?;
    parse(&text).map_err(|source| Error::ParseIn {
        path: path.to_path_buf(),
        source,
    })
}
