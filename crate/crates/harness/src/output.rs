//! Writing and reading artifacts. Every file carries the format version and
//! the config hash: CSV and Markdown in a leading comment, JSON as envelope
//! fields, SVG in a comment and a `<metadata>` element.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const FORMAT_VERSION: &str = "skelxai-harness/1";

pub fn stamp(config_hash: &str) -> String {
    format!("format_version={FORMAT_VERSION} config_hash={config_hash}")
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(HarnessError::missing(path));
    }
    fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

/// Rows under a `# format_version=... config_hash=...` line plus any extra
/// comment lines.
pub fn write_csv<S: Serialize>(path: &Path, config_hash: &str, notes: &[&str], rows: &[S]) -> Result<()> {
    let mut text = format!("# {}\n", stamp(config_hash));
    for note in notes {
        text.push_str(&format!("# {note}\n"));
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| HarnessError::io(path, e))?;
    }
    let body = writer.into_inner().map_err(|e| HarnessError::io(path, e))?;
    text.push_str(std::str::from_utf8(&body).expect("csv writes utf-8"));
    write_text(path, &text)
}

pub fn read_csv<D: DeserializeOwned>(path: &Path) -> Result<Vec<D>> {
    let text = read_text(path)?;
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<D>, _>>()
        .map_err(|e| HarnessError::io(path, e))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub format_version: String,
    pub config_hash: String,
    #[serde(flatten)]
    pub body: T,
}

pub fn write_json<S: Serialize>(path: &Path, config_hash: &str, body: &S) -> Result<()> {
    let env = Envelope {
        format_version: FORMAT_VERSION.to_string(),
        config_hash: config_hash.to_string(),
        body,
    };
    let text = serde_json::to_string_pretty(&env).expect("artifact serializes");
    write_text(path, &text)
}

pub fn read_json<D: DeserializeOwned>(path: &Path) -> Result<Envelope<D>> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| HarnessError::io(path, e))
}
