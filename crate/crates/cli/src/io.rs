//! Canonical documents and atomic file output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::CliError;

/// Compact JSON with object keys sorted, followed by a newline.
pub fn to_canonical<T: Serialize>(value: &T) -> Vec<u8> {
    // serde_json::Value keeps object keys in a BTreeMap
    let value = serde_json::to_value(value).expect("library types serialize");
    let mut out = serde_json::to_vec(&value).expect("values serialize");
    out.push(b'\n');
    out
}

pub fn read_document<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.into(), source })
}

fn temp_beside(path: &Path) -> Result<NamedTempFile, CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    NamedTempFile::new_in(dir).map_err(|source| CliError::Write { path: path.into(), source })
}

fn persist(tmp: NamedTempFile, path: &Path) -> Result<(), CliError> {
    // temporary files are created private; outputs are ordinary files
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        fs::set_permissions(tmp.path(), fs::Permissions::from_mode(0o644))
            .map_err(|source| CliError::Write { path: path.into(), source })?;
    }
    tmp.persist(path)
        .map(|_| ())
        .map_err(|e| CliError::Write { path: path.into(), source: e.error })
}

/// Writes `bytes` to a temporary file in the destination directory and
/// renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp = temp_beside(path)?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.flush())
        .map_err(|source| CliError::Write { path: path.into(), source })?;
    persist(tmp, path)
}

/// Atomic CSV output: `fill` writes all rows, then the file is renamed into
/// place.
pub fn write_csv_atomic(
    path: &Path,
    fill: impl FnOnce(&mut csv::Writer<&mut NamedTempFile>) -> csv::Result<()>,
) -> Result<(), CliError> {
    let mut tmp = temp_beside(path)?;
    {
        let mut w = csv::Writer::from_writer(&mut tmp);
        fill(&mut w)
            .and_then(|_| w.flush().map_err(csv::Error::from))
            .map_err(|source| CliError::Csv { path: path.into(), source })?;
    }
    persist(tmp, path)
}

/// Writes the canonical document to `out`, or to stdout when no path is given.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let bytes = to_canonical(value);
    match out {
        Some(path) => write_atomic(path, &bytes),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|source| CliError::Write { path: "<stdout>".into(), source }),
    }
}
