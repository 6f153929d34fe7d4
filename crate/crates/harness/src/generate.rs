use serde::Serialize;
use skelxai::skeleton::SequenceDocument;
use skelxai::synth::generate;

use crate::config::Resolved;
use crate::data::{Manifest, ManifestEntry, MANIFEST};
use crate::error::Result;
use crate::output::write_json;

#[derive(Serialize)]
struct SequenceFile<'a> {
    #[serde(flatten)]
    doc: &'a SequenceDocument<f64>,
}

/// Writes one JSON file per synthetic sequence and the manifest.
pub fn cmd_generate(r: &Resolved) -> Result<Manifest> {
    let dir = &r.cfg.paths.data_dir;
    let sequences = generate::<f64>(&r.cfg.synth, &r.registry)?;
    let mut entries = Vec::with_capacity(sequences.len());
    for seq in &sequences {
        let file = format!("{}.json", seq.id);
        let doc = seq.to_document(&r.registry);
        write_json(&dir.join(&file), &r.hash, &SequenceFile { doc: &doc })?;
        entries.push(ManifestEntry {
            id: seq.id.clone(),
            label: seq.label,
            file,
            frames: seq.frames(),
        });
    }
    let manifest = Manifest {
        seeds: r.seeds.clone(),
        n_sequences: entries.len(),
        n_positive: entries.iter().filter(|e| e.label == 1).count(),
        sequences: entries,
    };
    write_json(&dir.join(MANIFEST), &r.hash, &manifest)?;
    Ok(manifest)
}
