//! Report output: pretty JSON, or CSV with one row per JSON leaf.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A report and whether every check in it passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

/// `(path, value)` for every leaf, with dotted paths and array indices.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(v: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_owned() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(x, &join(k), out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, &join(&i.to_string()), out)),
            Value::String(s) => out.push((prefix.to_owned(), s.clone())),
            Value::Null => out.push((prefix.to_owned(), String::new())),
            other => out.push((prefix.to_owned(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk(v, "", &mut out);
    out
}

pub fn render(v: &Value, format: Format) -> Result<Vec<u8>, Error> {
    match format {
        Format::Json => {
            let mut text = serde_json::to_vec_pretty(v).expect("JSON values always serialize");
            text.push(b'\n');
            Ok(text)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Check(format!("csv encoding failed: {e}"));
            w.write_record(["key", "value"]).map_err(csv_err)?;
            for (k, x) in flatten(v) {
                w.write_record([k, x]).map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| Error::Check(format!("csv encoding failed: {e}")))
        }
    }
}

/// Writes to `path`, or to stdout when it is `None`.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| Error::Io { path: p.display().to_string(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|source| Error::Io { path: "<stdout>".into(), source })
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: name.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| Error::Json { path: name, source })
}
