use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::CliError;

/// Reads a whole input; `None` or `-` means standard input.
pub fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        None => read_stdin(),
        Some(p) if p.as_os_str() == "-" => read_stdin(),
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display()))),
    }
}

fn read_stdin() -> Result<String, CliError> {
    let mut text = String::new();
    io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| CliError::Config(format!("cannot read standard input: {e}")))?;
    Ok(text)
}

/// Writes to `path` through a temporary file in the same directory, or to stdout.
pub fn emit(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let fail = |e: &dyn std::fmt::Display| CliError::Io(format!("cannot write {}: {e}", p.display()));
            let mut tmp = NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
            tmp.write_all(bytes).map_err(|e| fail(&e))?;
            tmp.as_file().sync_all().map_err(|e| fail(&e))?;
            tmp.persist(p).map_err(|e| fail(&e.error))?;
            Ok(())
        }
    }
}

pub fn jsonl<T: serde::Serialize>(records: impl IntoIterator<Item = T>) -> Vec<u8> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, &r).expect("records serialize");
        out.push(b'\n');
    }
    out
}
