use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use skelxai::attribution::{GradCamOptions, Method};
use skelxai::metrics::MetricConfig;
use skelxai::model::{MiniGcnConfig, TrainOptions};
use skelxai::perturb::PerturbationSpec;
use skelxai::seed;
use skelxai::skeleton::{JointRegistry, Preprocess, WindowPolicy};
use skelxai::synth::SynthConfig;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub data_dir: PathBuf,
    pub model_dir: PathBuf,
    pub output_dir: PathBuf,
}

impl Default for Paths {
    fn default() -> Self {
        Self {
            data_dir: "data".into(),
            model_dir: "models".into(),
            output_dir: "results".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    #[default]
    Ensemble,
    PerModel,
    Both,
}

impl Scope {
    pub fn ensemble(self) -> bool {
        matches!(self, Scope::Ensemble | Scope::Both)
    }

    pub fn per_model(self) -> bool {
        matches!(self, Scope::PerModel | Scope::Both)
    }
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ensemble" => Ok(Scope::Ensemble),
            "per_model" => Ok(Scope::PerModel),
            "both" => Ok(Scope::Both),
            _ => Err(format!("unknown scope {s:?}, expected ensemble, per_model or both")),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Ensemble => "ensemble",
            Scope::PerModel => "per_model",
            Scope::Both => "both",
        })
    }
}

/// Skeleton coloring: `green < 0.3 t <= yellow < 0.6 t <= orange < t <= red`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorRule {
    pub threshold: f64,
}

impl Default for ColorRule {
    fn default() -> Self {
        Self { threshold: 0.3 }
    }
}

impl ColorRule {
    pub fn color(&self, score: f64) -> &'static str {
        let t = self.threshold;
        if score < 0.3 * t {
            "green"
        } else if score < 0.6 * t {
            "yellow"
        } else if score < t {
            "orange"
        } else {
            "red"
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    pub color: ColorRule,
    /// Windows drawn as colored skeletons per scope and method.
    pub max_skeletons: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            color: ColorRule::default(),
            max_skeletons: 4,
        }
    }
}

/// One JSON document describing a whole run.
///
/// Component seeds inside `synth`, `train`, `perturbation` and `models` are
/// ignored: every seed is derived from `rng_seed` when the config is
/// resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Relative paths are taken from the config file's directory.
    pub paths: Paths,
    /// Joint registry JSON; the built-in 19-joint infant skeleton if absent.
    pub registry: Option<PathBuf>,
    pub synth: SynthConfig,
    pub window: WindowPolicy,
    pub preprocess: Preprocess,
    /// Architecture variants; empty means the built-in ten-variant roster.
    pub models: Vec<MiniGcnConfig>,
    pub members_per_variant: usize,
    pub train: TrainOptions,
    pub perturbation: PerturbationSpec,
    pub metric: MetricConfig,
    pub methods: Vec<Method>,
    pub gradcam: GradCamOptions,
    pub scope: Scope,
    pub rng_seed: u64,
    /// Evaluation threads; does not affect any output.
    pub workers: usize,
    pub report: ReportConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            paths: Paths::default(),
            registry: None,
            synth: SynthConfig::default(),
            window: WindowPolicy::default(),
            preprocess: Preprocess::default(),
            models: Vec::new(),
            members_per_variant: 1,
            train: TrainOptions::default(),
            perturbation: PerturbationSpec::default(),
            metric: MetricConfig::default(),
            methods: vec![Method::Cam, Method::Gradcam, Method::Random],
            gradcam: GradCamOptions::default(),
            scope: Scope::Ensemble,
            rng_seed: 0,
            workers: 1,
            report: ReportConfig::default(),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub scope: Option<Scope>,
    pub methods: Option<Vec<Method>>,
    pub out: Option<PathBuf>,
}

pub fn parse_methods(list: &str) -> std::result::Result<Vec<Method>, String> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| match Method::parse(s) {
            Some(Method::Fixed) | None => Err(format!("unknown method {s:?}, expected cam, gradcam or random")),
            Some(m) => Ok(m),
        })
        .collect()
}

/// Seeds of every random component, all derived from the global seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub global: u64,
    pub synth: u64,
    pub window: u64,
    pub init: u64,
    pub train: u64,
    pub perturbation: u64,
    pub random_attribution: u64,
}

impl Seeds {
    pub fn derive(global: u64) -> Self {
        let k = |tag: u64| seed::key(&[global, tag]);
        Self {
            global,
            synth: k(1),
            window: k(2),
            init: k(3),
            train: k(4),
            perturbation: k(5),
            random_attribution: k(6),
        }
    }
}

/// A validated config with absolute paths, derived seeds and its hash.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub cfg: RunConfig,
    pub seeds: Seeds,
    pub registry: JointRegistry,
    pub hash: String,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.rng_seed = s;
        }
        if let Some(w) = o.workers {
            self.workers = w;
        }
        if let Some(s) = o.scope {
            self.scope = s;
        }
        if let Some(m) = &o.methods {
            self.methods = m.clone();
        }
        if let Some(out) = &o.out {
            self.paths.output_dir = out.clone();
        }
    }

    /// Variant configs with member seeds, in member order.
    pub fn member_configs(&self, seeds: &Seeds) -> Vec<(usize, MiniGcnConfig)> {
        let variants = if self.models.is_empty() {
            MiniGcnConfig::roster(seeds.init)
        } else {
            self.models.clone()
        };
        let mut out = Vec::new();
        for (v, config) in variants.into_iter().enumerate() {
            for r in 0..self.members_per_variant {
                let mut c = config.clone();
                c.rng_seed = seed::key(&[seeds.init, v as u64, r as u64]);
                out.push((v, c));
            }
        }
        out
    }

    /// Validates, makes paths absolute against `base`, derives seeds and
    /// hashes everything that can influence results.
    pub fn resolve(mut self, base: &Path) -> Result<Resolved> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.methods.is_empty() {
            return bad("methods must not be empty".into());
        }
        for (i, m) in self.methods.iter().enumerate() {
            if *m == Method::Fixed {
                return bad("method fixed cannot be configured".into());
            }
            if self.methods[..i].contains(m) {
                return bad(format!("method {m} listed twice"));
            }
        }
        if self.workers == 0 {
            return bad("workers must be at least 1".into());
        }
        if self.members_per_variant == 0 {
            return bad("members_per_variant must be at least 1".into());
        }
        let t = self.report.color.threshold;
        if !(t > 0.0 && t <= 1.0) {
            return bad(format!("color threshold must lie in (0, 1], got {t}"));
        }
        let absolute = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
        self.paths.data_dir = absolute(&self.paths.data_dir);
        self.paths.model_dir = absolute(&self.paths.model_dir);
        self.paths.output_dir = absolute(&self.paths.output_dir);
        let registry = match &self.registry {
            Some(p) => {
                let p = absolute(p);
                if !p.exists() {
                    return bad(format!("registry file {} not found", p.display()));
                }
                self.registry = Some(p.clone());
                JointRegistry::load(&p).map_err(|e| HarnessError::Config(e.to_string()))?
            }
            None => JointRegistry::default_infant(),
        };

        let seeds = Seeds::derive(self.rng_seed);
        self.synth.rng_seed = seeds.synth;
        self.train.rng_seed = seeds.train;
        self.perturbation.rng_seed = seeds.perturbation;
        self.synth.validate(&registry)?;
        self.metric.validate()?;
        self.perturbation.validate()?;
        for (_, c) in self.member_configs(&seeds) {
            c.validate()?;
        }
        let hash = config_hash(&self, &registry);
        Ok(Resolved {
            cfg: self,
            seeds,
            registry,
            hash,
        })
    }
}

/// SHA-256 of the canonical JSON of the config without paths and worker
/// count, plus the registry contents.
pub fn config_hash(cfg: &RunConfig, registry: &JointRegistry) -> String {
    let mut value = serde_json::to_value(cfg).expect("config serializes");
    let map = value.as_object_mut().expect("config is an object");
    map.remove("paths");
    map.remove("workers");
    map.remove("registry");
    map.insert("registry_contents".into(), serde_json::to_value(registry.to_document()).expect("registry serializes"));
    let digest = Sha256::digest(serde_json::to_string(&value).expect("value serializes").as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
