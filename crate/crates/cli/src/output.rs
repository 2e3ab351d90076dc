//! Output destinations and serialization.
//!
//! JSON numbers use the shortest representation that parses back to the same
//! `f64`, so files are exact and stable. CSV fields use the same rule, in
//! exponent form outside `[1e-5, 1e16)`.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "HEXCH_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

pub fn default_dir() -> Option<PathBuf> {
    std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// `--out` if given, else `default_name` inside `$HEXCH_OUT_DIR`, else stdout.
pub fn resolve(out: &Option<PathBuf>, default_name: &str) -> Sink {
    match (out, default_dir()) {
        (Some(p), _) => Sink::File(p.clone()),
        (None, Some(dir)) => Sink::File(dir.join(default_name)),
        (None, None) => Sink::Stdout,
    }
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())).with("path", path.display().to_string()))
}

pub fn emit(sink: &Sink, text: &str) -> CliResult<()> {
    match sink {
        Sink::File(p) => write_file(p, text),
        Sink::Stdout => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(format!("cannot write to stdout: {e}")))
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output records serialize");
    s.push('\n');
    s
}

/// Number or empty field.
pub fn num(x: Option<f64>) -> String {
    match x {
        None => String::new(),
        Some(v) if v == 0.0 || (1e-5..1e16).contains(&v.abs()) => v.to_string(),
        Some(v) => format!("{v:e}"),
    }
}

/// Builds CSV text from a header and rows of preformatted fields.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv fields are utf-8")
}
