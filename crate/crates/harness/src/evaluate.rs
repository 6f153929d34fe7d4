use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use skelxai::attribution::{Explainer, Method};
use skelxai::metrics::{aggregate, evaluate_window, AggregateRecord, EvalSettings, Metric, MetricRecord};
use skelxai::model::{Classifier, Ensemble, ModelInstance};
use skelxai::skeleton::{derive_streams, Window};

use crate::config::Resolved;
use crate::data::load_windows;
use crate::error::{HarnessError, Result};
use crate::output::{read_json, write_csv, write_json};
use crate::train::load_ensemble;

pub const SUMMARY: &str = "evaluation_summary.json";

/// One classifier evaluated as a unit: the whole ensemble or one member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScopeSummary {
    /// `ensemble` or `model_<member>`.
    pub scope: String,
    pub members: Vec<usize>,
    pub windows_in: usize,
    pub windows_evaluated: usize,
    pub windows_skipped: usize,
    /// Stability metrics left out of a window for lack of label-preserving
    /// draws, counted per (window, method, metric).
    pub metric_skips: usize,
}

impl ScopeSummary {
    pub fn reconciled(&self) -> bool {
        self.windows_in == self.windows_evaluated + self.windows_skipped
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub methods: Vec<Method>,
    pub scopes: Vec<ScopeSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucRecord {
    pub metric: Metric,
    pub method: Method,
    pub window_id: String,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub window_id: String,
    /// Empty when the whole window was skipped.
    pub method: String,
    pub metric: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionRecord {
    pub window_id: String,
    pub method: Method,
    pub class_idx: usize,
    pub scores: Vec<f64>,
}

pub fn metrics_path(dir: &Path, scope: &str) -> PathBuf {
    dir.join(format!("metrics_{scope}.csv"))
}

pub fn auc_path(dir: &Path, scope: &str) -> PathBuf {
    dir.join(format!("auc_{scope}.csv"))
}

pub fn aggregates_path(dir: &Path, scope: &str) -> PathBuf {
    dir.join(format!("aggregates_{scope}.csv"))
}

pub fn skips_path(dir: &Path, scope: &str) -> PathBuf {
    dir.join(format!("skips_{scope}.csv"))
}

pub fn attributions_path(dir: &Path, scope: &str) -> PathBuf {
    dir.join(format!("attributions_{scope}.json"))
}

pub fn load_summary(r: &Resolved) -> Result<EvaluationSummary> {
    Ok(read_json(&r.cfg.paths.output_dir.join(SUMMARY))?.body)
}

fn explainers(r: &Resolved) -> Vec<Explainer<f64>> {
    r.cfg
        .methods
        .iter()
        .map(|m| match m {
            Method::Cam => Explainer::Cam,
            Method::Gradcam => Explainer::GradCam(r.cfg.gradcam),
            Method::Random => Explainer::Random {
                seed: r.seeds.random_attribution,
            },
            Method::Fixed => unreachable!("rejected when the config is resolved"),
        })
        .collect()
}

struct WindowOutcome {
    records: Vec<MetricRecord>,
    aucs: Vec<AucRecord>,
    skips: Vec<SkipRecord>,
    attributions: Vec<AttributionRecord>,
    evaluated: bool,
}

fn evaluate_one(
    r: &Resolved,
    classifier: &Ensemble<f64>,
    explainers: &[Explainer<f64>],
    window: &Window<f64>,
    label: usize,
) -> Result<WindowOutcome> {
    let id = window.id();
    let mut outcome = WindowOutcome {
        records: vec![],
        aucs: vec![],
        skips: vec![],
        attributions: vec![],
        evaluated: false,
    };
    let (streams, _) = derive_streams(window, &r.registry, r.cfg.preprocess);
    let predicted = classifier.assess(&streams)?.predicted_class;
    if predicted != label {
        outcome.skips.push(SkipRecord {
            window_id: id,
            method: String::new(),
            metric: String::new(),
            reason: format!("predicted class {predicted} but label is {label}"),
        });
        return Ok(outcome);
    }
    let settings = EvalSettings {
        registry: &r.registry,
        preprocess: r.cfg.preprocess,
        metric: &r.cfg.metric,
        perturbation: &r.cfg.perturbation,
    };
    let k = r.cfg.metric.k_range(window.joints());
    for ev in evaluate_window(window, classifier, explainers, &settings)? {
        if ev.records.iter().any(|rec| !rec.value.is_finite()) {
            return Err(HarnessError::Numeric(format!("non-finite metric value on window {id}")));
        }
        for m in &ev.skipped {
            outcome.skips.push(SkipRecord {
                window_id: id.clone(),
                method: ev.method.label().into(),
                metric: m.label().into(),
                reason: "every perturbation changed the predicted class".into(),
            });
        }
        for (metric, auc) in ev.aucs(*k.start(), *k.end())? {
            outcome.aucs.push(AucRecord {
                metric,
                method: ev.method,
                window_id: id.clone(),
                auc,
            });
        }
        outcome.attributions.push(AttributionRecord {
            window_id: id.clone(),
            method: ev.method,
            class_idx: ev.class_idx,
            scores: ev.attribution.scores.to_vec(),
        });
        outcome.records.extend(ev.records);
    }
    outcome.evaluated = true;
    Ok(outcome)
}

fn metric_index(m: Metric) -> usize {
    Metric::ALL.iter().position(|x| *x == m).expect("known metric")
}

/// Evaluates one scope unit and writes its files.
fn evaluate_scope(
    r: &Resolved,
    scope: String,
    members: Vec<usize>,
    models: &[ModelInstance<f64>],
    windows: &[(Window<f64>, usize)],
    pool: &rayon::ThreadPool,
) -> Result<ScopeSummary> {
    use rayon::prelude::*;
    let classifier = Ensemble::new(members.iter().map(|&m| models[m].clone()).collect())?;
    let explainers = explainers(r);
    let outcomes = pool.install(|| {
        windows
            .par_iter()
            .map(|(w, label)| evaluate_one(r, &classifier, &explainers, w, *label))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut records = Vec::new();
    let mut aucs = Vec::new();
    let mut skips = Vec::new();
    let mut attributions = Vec::new();
    let mut evaluated = 0;
    for o in outcomes {
        evaluated += o.evaluated as usize;
        records.extend(o.records);
        aucs.extend(o.aucs);
        skips.extend(o.skips);
        attributions.extend(o.attributions);
    }
    // canonical order, independent of scheduling
    records.sort_by(|a, b| {
        (metric_index(a.metric), a.method, &a.window_id, a.k).cmp(&(metric_index(b.metric), b.method, &b.window_id, b.k))
    });
    aucs.sort_by(|a, b| (metric_index(a.metric), a.method, &a.window_id).cmp(&(metric_index(b.metric), b.method, &b.window_id)));
    skips.sort_by(|a, b| (&a.window_id, &a.method, &a.metric).cmp(&(&b.window_id, &b.method, &b.metric)));
    attributions.sort_by(|a, b| (&a.window_id, a.method).cmp(&(&b.window_id, b.method)));

    let mut aggregates: Vec<AggregateRecord> = Vec::new();
    for metric in Metric::ALL {
        for &method in &r.cfg.methods {
            let values: Vec<f64> = aucs
                .iter()
                .filter(|a| a.metric == metric && a.method == method)
                .map(|a| a.auc)
                .collect();
            if !values.is_empty() {
                aggregates.push(aggregate(metric, method, &values)?);
            }
        }
    }

    let dir = &r.cfg.paths.output_dir;
    write_csv(&metrics_path(dir, &scope), &r.hash, &[], &records)?;
    write_csv(&auc_path(dir, &scope), &r.hash, &[], &aucs)?;
    write_csv(&aggregates_path(dir, &scope), &r.hash, &[], &aggregates)?;
    write_csv(&skips_path(dir, &scope), &r.hash, &[], &skips)?;
    write_json(&attributions_path(dir, &scope), &r.hash, &serde_json::json!({ "attributions": attributions }))?;
    let windows_skipped = skips.iter().filter(|s| s.method.is_empty()).count();
    Ok(ScopeSummary {
        scope,
        members,
        windows_in: windows.len(),
        windows_evaluated: evaluated,
        windows_skipped,
        metric_skips: skips.len() - windows_skipped,
    })
}

/// Runs every configured scope over every window.
pub fn cmd_evaluate(r: &Resolved) -> Result<EvaluationSummary> {
    let (manifest, models) = load_ensemble(r)?;
    let windows = load_windows(r)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(r.cfg.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start {} workers: {e}", r.cfg.workers)))?;
    let mut units: Vec<(String, Vec<usize>)> = Vec::new();
    if r.cfg.scope.ensemble() {
        units.push(("ensemble".into(), (0..models.len()).collect()));
    }
    if r.cfg.scope.per_model() {
        for rep in &manifest.representatives {
            units.push((format!("model_{}", rep.member), vec![rep.member]));
        }
    }
    let mut scopes = Vec::new();
    for (scope, members) in units {
        scopes.push(evaluate_scope(r, scope, members, &models, &windows, &pool)?);
    }
    let summary = EvaluationSummary {
        methods: r.cfg.methods.clone(),
        scopes,
    };
    write_json(&r.cfg.paths.output_dir.join(SUMMARY), &r.hash, &summary)?;
    Ok(summary)
}
