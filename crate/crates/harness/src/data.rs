//! Loading generated datasets and cutting them into windows.

use serde::{Deserialize, Serialize};
use skelxai::skeleton::{extract_windows, SkeletonSequence, Window};

use crate::config::{Resolved, Seeds};
use crate::error::{HarnessError, Result};
use crate::output::{read_json, Envelope};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub label: usize,
    pub file: String,
    pub frames: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seeds: Seeds,
    pub n_sequences: usize,
    pub n_positive: usize,
    pub sequences: Vec<ManifestEntry>,
}

pub fn load_manifest(r: &Resolved) -> Result<Envelope<Manifest>> {
    read_json(&r.cfg.paths.data_dir.join(MANIFEST))
}

pub fn load_sequences(r: &Resolved) -> Result<Vec<SkeletonSequence<f64>>> {
    let manifest = load_manifest(r)?;
    manifest
        .body
        .sequences
        .iter()
        .map(|e| {
            let seq = SkeletonSequence::load_json(&r.cfg.paths.data_dir.join(&e.file), &r.registry)?;
            if seq.label != e.label || seq.id != e.id {
                return Err(HarnessError::Data(format!("{} does not match its manifest entry", e.file)));
            }
            Ok(seq)
        })
        .collect()
}

/// Windows of every sequence in manifest order, with the sequence label.
pub fn load_windows(r: &Resolved) -> Result<Vec<(Window<f64>, usize)>> {
    let mut out = Vec::new();
    for seq in load_sequences(r)? {
        for w in extract_windows(&seq, &r.cfg.window, r.seeds.window)? {
            out.push((w, seq.label));
        }
    }
    Ok(out)
}
