use std::fs;
use std::path::{Path, PathBuf};

use groupcss::code::CodeDocument;
use groupcss::complex::BuildSpec;
use groupcss::{Budget, CwComplex, GroupSpec};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{origin}:{line}:{column}: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] groupcss::Error),
}

impl CliError {
    /// 1 for a failed verification, 2 for everything the caller must fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(groupcss::Error::Commutation { .. } | groupcss::Error::Incompatible { .. }) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses an argument that is either inline JSON (starting with `{` or `[`)
/// or the path of a JSON file.
pub fn inline_or_file<T: DeserializeOwned>(arg: &str, what: &str) -> CliResult<T> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        parse(trimmed, &format!("<{what} argument>"))
    } else {
        let path = Path::new(arg);
        parse(&read(path)?, &path.display().to_string())
    }
}

pub fn group_spec(arg: &str) -> CliResult<GroupSpec> {
    inline_or_file(arg, "group")
}

pub fn build_spec(arg: &str) -> CliResult<BuildSpec> {
    inline_or_file(arg, "builder")
}

#[derive(Deserialize)]
struct WrappedComplex {
    complex: CwComplex,
}

/// Reads a complex file: either a bare complex or any document carrying one
/// under a `complex` key, such as the output of `build`.
pub fn complex_file(path: &Path) -> CliResult<CwComplex> {
    let text = read(path)?;
    let origin = path.display().to_string();
    let value: serde_json::Value = parse(&text, &origin)?;
    if value.get("vertices").is_some() {
        parse(&text, &origin)
    } else {
        Ok(parse::<WrappedComplex>(&text, &origin)?.complex)
    }
}

pub fn code_file(path: &Path) -> CliResult<CodeDocument> {
    let text = read(path)?;
    let origin = path.display().to_string();
    let value: serde_json::Value = parse(&text, &origin)?;
    // `build` and `generate` nest the code document under a `code` key.
    if value.get("x_families").is_none() && value.get("code").is_some() {
        #[derive(Deserialize)]
        struct Wrapped {
            code: CodeDocument,
        }
        Ok(parse::<Wrapped>(&text, &origin)?.code)
    } else {
        parse(&text, &origin)
    }
}

/// Default caps, then `GROUPCSS_BUDGET`, then the `--budget` flag.
pub fn budget(flag: Option<&str>) -> CliResult<Budget> {
    let mut b = Budget::default();
    if let Ok(env) = std::env::var("GROUPCSS_BUDGET") {
        b = b.with_overrides(&env).map_err(|e| CliError::Usage(format!("GROUPCSS_BUDGET: {e}")))?;
    }
    if let Some(spec) = flag {
        b = b.with_overrides(spec).map_err(|e| CliError::Usage(format!("--budget: {e}")))?;
    }
    Ok(b)
}
