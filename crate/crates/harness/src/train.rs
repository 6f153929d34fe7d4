use serde::{Deserialize, Serialize};
use skelxai::model::{train_toy, Classifier, Ensemble, MemberReport, ModelDocument, ModelInstance, TrainOptions};
use skelxai::skeleton::derive_streams;

use crate::config::Resolved;
use crate::data::load_windows;
use crate::error::{HarnessError, Result};
use crate::output::{read_json, write_json};

pub const ENSEMBLE: &str = "ensemble.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberEntry {
    pub member: usize,
    pub variant: usize,
    pub file: String,
    pub init_file: String,
    pub seed: u64,
    pub held_out_portion: Option<usize>,
    pub n_train: usize,
    pub final_loss: f64,
    pub train_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representative {
    pub variant: usize,
    pub member: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortionEntry {
    pub window_id: String,
    pub portion: usize,
}

/// The training report, which doubles as the ensemble's table of contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleManifest {
    pub train_options: TrainOptions,
    pub n_windows: usize,
    pub members: Vec<MemberEntry>,
    /// One member per variant for per-model evaluation: the one holding out
    /// the last portion, else the variant's last member.
    pub representatives: Vec<Representative>,
    /// Round-robin portion of every training window.
    pub portions: Vec<PortionEntry>,
}

impl EnsembleManifest {
    pub fn min_accuracy(&self) -> f64 {
        self.members.iter().map(|m| m.train_accuracy).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    model: ModelDocument,
}

fn save_model(path: &std::path::Path, hash: &str, model: &ModelInstance<f64>) -> Result<()> {
    write_json(path, hash, &ModelFile { model: model.to_document() })
}

pub fn load_model(path: &std::path::Path) -> Result<ModelInstance<f64>> {
    let file = read_json::<ModelFile>(path)?;
    Ok(ModelInstance::from_document(&file.body.model)?)
}

fn representatives(members: &[MemberEntry], n_portions: usize) -> Vec<Representative> {
    let mut out: Vec<Representative> = Vec::new();
    for m in members {
        let preferred = m.held_out_portion == Some(n_portions.saturating_sub(1));
        match out.iter_mut().find(|r| r.variant == m.variant) {
            Some(r) => {
                let current_preferred = members[r.member].held_out_portion == Some(n_portions.saturating_sub(1));
                if preferred || !current_preferred {
                    r.member = m.member;
                }
            }
            None => out.push(Representative {
                variant: m.variant,
                member: m.member,
            }),
        }
    }
    out
}

/// Trains the roster on the generated windows and writes initial weights,
/// trained weights and the ensemble manifest.
pub fn cmd_train(r: &Resolved) -> Result<EnsembleManifest> {
    let windows = load_windows(r)?;
    if windows.is_empty() {
        return Err(HarnessError::Data("no windows to train on".into()));
    }
    let data: Vec<_> = windows
        .iter()
        .map(|(w, l)| (derive_streams(w, &r.registry, r.cfg.preprocess).0, *l))
        .collect();
    let configs = r.cfg.member_configs(&r.seeds);
    let init = configs
        .iter()
        .map(|(_, c)| ModelInstance::init(c.clone(), &r.registry))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let dir = &r.cfg.paths.model_dir;
    for (i, m) in init.iter().enumerate() {
        save_model(&dir.join(format!("init/member_{i:02}.json")), &r.hash, m)?;
    }
    let (trained, report) = train_toy(&Ensemble::new(init)?, &data, &r.cfg.train)?;
    let members: Vec<MemberEntry> = trained
        .members()
        .iter()
        .zip(&report.members)
        .zip(&configs)
        .map(|((model, rep), (variant, config)): ((&ModelInstance<f64>, &MemberReport), _)| {
            let file = format!("member_{:02}.json", rep.member);
            save_model(&dir.join(&file), &r.hash, model)?;
            Ok(MemberEntry {
                member: rep.member,
                variant: *variant,
                init_file: format!("init/{file}"),
                file,
                seed: config.rng_seed,
                held_out_portion: rep.held_out_portion,
                n_train: rep.n_train,
                final_loss: rep.final_loss,
                train_accuracy: rep.train_accuracy,
            })
        })
        .collect::<Result<_>>()?;
    let n_portions = r.cfg.train.n_portions.max(1);
    let manifest = EnsembleManifest {
        train_options: r.cfg.train.clone(),
        n_windows: windows.len(),
        representatives: representatives(&members, n_portions),
        members,
        portions: windows
            .iter()
            .enumerate()
            .map(|(i, (w, _))| PortionEntry {
                window_id: w.id(),
                portion: i % n_portions,
            })
            .collect(),
    };
    write_json(&dir.join(ENSEMBLE), &r.hash, &manifest)?;
    Ok(manifest)
}

pub fn load_ensemble(r: &Resolved) -> Result<(EnsembleManifest, Vec<ModelInstance<f64>>)> {
    let manifest = read_json::<EnsembleManifest>(&r.cfg.paths.model_dir.join(ENSEMBLE))?.body;
    let models = manifest
        .members
        .iter()
        .map(|m| load_model(&r.cfg.paths.model_dir.join(&m.file)))
        .collect::<Result<Vec<_>>>()?;
    Ok((manifest, models))
}
