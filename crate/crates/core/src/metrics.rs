//! Faithfulness (PGI, PGU) and stability (RIS, ROS, RRS) metrics, the
//! per-window k sweep, AUC over k and cross-window aggregation.

use std::collections::HashMap;
use std::fmt;

use ndarray::{Array, Dimension};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attribution::{rank, AttributionError, AttributionMap, Explainer, Method};
use crate::model::{Classifier, ModelError};
use crate::numeric::{mean, sample_std};
use crate::perturb::{perturb, PerturbError, PerturbationSpec, Target};
use crate::skeleton::{derive_streams, median_height, JointRegistry, Preprocess, StreamKind, Window};
use crate::Scalar;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("empty perturbation family")]
    EmptyFamily,
    #[error("shape mismatch: {0} vs {1} elements")]
    ShapeMismatch(usize, usize),
    #[error("every perturbation changed the predicted class")]
    NoConsistentPerturbation,
    #[error("records do not cover k = {0}")]
    MissingK(usize),
    #[error("no windows to aggregate")]
    NoWindows,
    #[error("invalid metric config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Attribution(#[from] AttributionError),
    #[error(transparent)]
    Perturb(#[from] PerturbError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Pgi,
    Pgu,
    Risp,
    Risv,
    Risb,
    Ros,
    Rrs,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::Pgi,
        Metric::Pgu,
        Metric::Risp,
        Metric::Risv,
        Metric::Risb,
        Metric::Ros,
        Metric::Rrs,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Metric::Pgi => "pgi",
            Metric::Pgu => "pgu",
            Metric::Risp => "risp",
            Metric::Risv => "risv",
            Metric::Risb => "risb",
            Metric::Ros => "ros",
            Metric::Rrs => "rrs",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Metric::Pgi => "PGI",
            Metric::Pgu => "PGU",
            Metric::Risp => "RISp",
            Metric::Risv => "RISv",
            Metric::Risb => "RISb",
            Metric::Ros => "ROS",
            Metric::Rrs => "RRS",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Metric::ALL.into_iter().find(|m| m.label() == s.trim().to_ascii_lowercase())
    }

    /// Whether larger values are better.
    pub fn higher_is_better(self) -> bool {
        self == Metric::Pgi
    }

    pub fn is_stability(self) -> bool {
        !matches!(self, Metric::Pgi | Metric::Pgu)
    }

    fn stream(self) -> Option<StreamKind> {
        match self {
            Metric::Risp => Some(StreamKind::Position),
            Metric::Risv => Some(StreamKind::Velocity),
            Metric::Risb => Some(StreamKind::Bone),
            _ => None,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricConfig {
    pub p_norm: f64,
    pub epsilon_min: f64,
    pub denom_guard: f64,
    pub k_min: usize,
    /// `None` sweeps up to the joint count.
    pub k_max: Option<usize>,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            p_norm: 2.0,
            epsilon_min: 1e-6,
            denom_guard: 1e-8,
            k_min: 1,
            k_max: None,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<(), MetricsError> {
        if !(self.p_norm >= 1.0) {
            return Err(MetricsError::InvalidConfig(format!("p_norm must be >= 1, got {}", self.p_norm)));
        }
        if !(self.epsilon_min > 0.0) || !(self.denom_guard > 0.0) {
            return Err(MetricsError::InvalidConfig("epsilon_min and denom_guard must be positive".into()));
        }
        if self.k_min == 0 || self.k_max.is_some_and(|k| k < self.k_min) {
            return Err(MetricsError::InvalidConfig("k range must satisfy 1 <= k_min <= k_max".into()));
        }
        Ok(())
    }

    pub fn k_range(&self, joints: usize) -> std::ops::RangeInclusive<usize> {
        self.k_min..=self.k_max.unwrap_or(joints).min(joints)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub metric: Metric,
    pub method: Method,
    pub window_id: String,
    pub k: usize,
    pub value: f64,
    pub n_valid: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRecord {
    pub metric: Metric,
    pub method: Method,
    pub auc_mean: f64,
    pub auc_std: f64,
    pub n_windows: usize,
}

/// Mean absolute gap between the original and perturbed probabilities.
pub fn prediction_gap<T: Scalar>(f_orig: T, f_perturbed: &[T]) -> Result<T, MetricsError> {
    if f_perturbed.is_empty() {
        return Err(MetricsError::EmptyFamily);
    }
    let total: T = f_perturbed.iter().map(|&f| (f_orig - f).abs()).sum();
    Ok(total / T::of_usize(f_perturbed.len()))
}

/// Prediction gap over the top-k perturbation family.
pub fn pgi<T: Scalar>(f_orig: T, f_perturbed: &[T]) -> Result<T, MetricsError> {
    prediction_gap(f_orig, f_perturbed)
}

/// Prediction gap over the non-top-k perturbation family.
pub fn pgu<T: Scalar>(f_orig: T, f_perturbed: &[T]) -> Result<T, MetricsError> {
    prediction_gap(f_orig, f_perturbed)
}

/// `|| (a - b) / d ||_p` with `d = sign(a) * max(|a|, guard)` elementwise.
pub fn relative_change<T: Scalar>(a: &[T], b: &[T], guard: T, p: T) -> Result<T, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::ShapeMismatch(a.len(), b.len()));
    }
    let two = T::of(2.0);
    let mut acc = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        let mag = x.abs().max(guard);
        let d = if x < T::zero() { -mag } else { mag };
        let r = ((x - y) / d).abs();
        acc += if p == two { r * r } else { r.powf(p) };
    }
    Ok(if p == two { acc.sqrt() } else { acc.powf(p.recip()) })
}

/// [`relative_change`] for equally shaped arrays.
pub fn relative_change_arrays<T: Scalar, D: Dimension>(
    a: &Array<T, D>,
    b: &Array<T, D>,
    guard: T,
    p: T,
) -> Result<T, MetricsError> {
    if a.shape() != b.shape() {
        return Err(MetricsError::ShapeMismatch(a.len(), b.len()));
    }
    let av: Vec<T> = a.iter().copied().collect();
    let bv: Vec<T> = b.iter().copied().collect();
    relative_change(&av, &bv, guard, p)
}

/// Largest `numerator / max(denominator, epsilon_min)` over consistent draws.
pub fn max_ratio<T: Scalar>(
    numerators: &[T],
    denominators: &[T],
    consistent: &[bool],
    epsilon_min: T,
) -> Result<(T, usize), MetricsError> {
    let mut best: Option<T> = None;
    let mut n_valid = 0;
    for ((&num, &den), &ok) in numerators.iter().zip(denominators).zip(consistent) {
        if !ok {
            continue;
        }
        n_valid += 1;
        let ratio = num / den.max(epsilon_min);
        best = Some(best.map_or(ratio, |b: T| b.max(ratio)));
    }
    best.map(|b| (b, n_valid)).ok_or(MetricsError::NoConsistentPerturbation)
}

/// Worst-case relative explanation change over label-preserving draws.
///
/// `denom_family[i]` holds the pair whose relative change normalizes draw `i`:
/// a stream tensor before and after, the probabilities, or the logits.
pub fn stability<T: Scalar>(
    e_orig: &[T],
    e_family: &[Vec<T>],
    denom_family: &[(Vec<T>, Vec<T>)],
    cfg: &MetricConfig,
    pred_consistent: &[bool],
) -> Result<(T, usize), MetricsError> {
    if e_family.len() != denom_family.len() || e_family.len() != pred_consistent.len() {
        return Err(MetricsError::ShapeMismatch(e_family.len(), denom_family.len()));
    }
    let guard = T::of(cfg.denom_guard);
    let p = T::of(cfg.p_norm);
    let mut num = Vec::with_capacity(e_family.len());
    let mut den = Vec::with_capacity(e_family.len());
    for (e, (x, x2)) in e_family.iter().zip(denom_family) {
        num.push(relative_change(e_orig, e, guard, p)?);
        den.push(relative_change(x, x2, guard, p)?);
    }
    max_ratio(&num, &den, pred_consistent, T::of(cfg.epsilon_min))
}

/// Normalized trapezoid of `(k, value)` points over `k_min..=k_max`.
pub fn auc_over_k(points: &[(usize, f64)], k_min: usize, k_max: usize) -> Result<f64, MetricsError> {
    let mut by_k = vec![None; k_max + 1];
    for &(k, v) in points {
        if (k_min..=k_max).contains(&k) {
            by_k[k] = Some(v);
        }
    }
    let values = (k_min..=k_max)
        .map(|k| by_k[k].ok_or(MetricsError::MissingK(k)))
        .collect::<Result<Vec<f64>, _>>()?;
    if values.len() == 1 {
        return Ok(values[0]);
    }
    let area: f64 = values.windows(2).map(|w| 0.5 * (w[0] + w[1])).sum();
    Ok(area / (k_max - k_min) as f64)
}

/// Sample mean and standard deviation (`n - 1`) of per-window AUCs.
pub fn aggregate(metric: Metric, method: Method, aucs: &[f64]) -> Result<AggregateRecord, MetricsError> {
    let auc_mean = mean(aucs).ok_or(MetricsError::NoWindows)?;
    Ok(AggregateRecord {
        metric,
        method,
        auc_mean,
        auc_std: sample_std(aucs).unwrap_or(0.0),
        n_windows: aucs.len(),
    })
}

/// Everything `evaluate_window` needs besides the window and classifier.
#[derive(Debug, Clone)]
pub struct EvalSettings<'a> {
    pub registry: &'a JointRegistry,
    pub preprocess: Preprocess,
    pub metric: &'a MetricConfig,
    pub perturbation: &'a PerturbationSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowEvaluation<T> {
    pub window_id: String,
    pub method: Method,
    pub class_idx: usize,
    pub f_orig: T,
    pub attribution: AttributionMap<T>,
    pub records: Vec<MetricRecord>,
    /// Stability metrics with no label-preserving draw.
    pub skipped: Vec<Metric>,
}

impl<T> WindowEvaluation<T> {
    /// Per-metric AUC over this window's k sweep.
    pub fn aucs(&self, k_min: usize, k_max: usize) -> Result<Vec<(Metric, f64)>, MetricsError> {
        Metric::ALL
            .iter()
            .filter(|m| !self.skipped.contains(m))
            .map(|&m| {
                let pts: Vec<(usize, f64)> = self
                    .records
                    .iter()
                    .filter(|r| r.metric == m)
                    .map(|r| (r.k, r.value))
                    .collect();
                auc_over_k(&pts, k_min, k_max).map(|a| (m, a))
            })
            .collect()
    }
}

/// Sweeps k for every explainer on one window.
///
/// For each k the top-k family gives PGI and the complement family gives PGU
/// (0 when the complement is empty). Stability uses the all-joint family,
/// whose draws do not depend on k, so its values are shared by every k of a
/// method. Draw `i` displaces each joint by the same keyed angle whichever
/// target set contains it; predictions are therefore cached per (draw,
/// target set) and shared across methods and k.
pub fn evaluate_window<T: Scalar, C: Classifier<T> + ?Sized>(
    window: &Window<T>,
    classifier: &C,
    explainers: &[Explainer<T>],
    settings: &EvalSettings<'_>,
) -> Result<Vec<WindowEvaluation<T>>, MetricsError> {
    let cfg = settings.metric;
    let spec = settings.perturbation;
    cfg.validate()?;
    spec.validate()?;
    let id = window.id();
    let joints = window.joints();
    let (streams0, _) = derive_streams(window, settings.registry, settings.preprocess);
    let a0 = classifier.assess(&streams0)?;
    let class_idx = a0.predicted_class;
    let f0 = a0.probs[class_idx];
    let height = median_height(window.coords.view(), settings.registry);
    let guard = T::of(cfg.denom_guard);
    let p = T::of(cfg.p_norm);
    let eps = T::of(cfg.epsilon_min);

    // all-joint family, shared by every method
    let mut all_family = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let pw = perturb(window, &spec.with_target(Target::All), height, i)?;
        let (streams, _) = derive_streams(&pw.window, settings.registry, settings.preprocess);
        let a = classifier.assess(&streams)?;
        all_family.push((streams, a));
    }
    let consistent: Vec<bool> = all_family.iter().map(|(_, a)| a.predicted_class == class_idx).collect();
    let mut denominators: HashMap<Metric, Vec<T>> = HashMap::new();
    for m in Metric::ALL.into_iter().filter(|m| m.is_stability()) {
        let den = all_family
            .iter()
            .map(|(s, a)| match m.stream() {
                Some(kind) => relative_change_arrays(&streams0.get(kind).data, &s.get(kind).data, guard, p),
                None if m == Metric::Ros => relative_change(&[f0], &[a.probs[class_idx]], guard, p),
                None => relative_change_arrays(&a0.representation, &a.representation, guard, p),
            })
            .collect::<Result<Vec<T>, _>>()?;
        denominators.insert(m, den);
    }

    // Predictions depend only on which joints move, so families are cached
    // by target mask and shared across methods and k.
    let mut cache: HashMap<Vec<bool>, Vec<T>> = HashMap::new();
    cache.insert(vec![true; joints], all_family.iter().map(|(_, a)| a.probs[class_idx]).collect());
    let mut family_probs = |target: Target| -> Result<Vec<T>, MetricsError> {
        let mask = target.mask(joints)?;
        if let Some(f) = cache.get(&mask) {
            return Ok(f.clone());
        }
        let sub = spec.with_target(target);
        let f = (0..spec.n)
            .map(|i| {
                let pw = perturb(window, &sub, height, i)?;
                let (s, _) = derive_streams(&pw.window, settings.registry, settings.preprocess);
                Ok(classifier.predict(&s)?[class_idx])
            })
            .collect::<Result<Vec<T>, MetricsError>>()?;
        cache.insert(mask, f.clone());
        Ok(f)
    };

    let mut out = Vec::with_capacity(explainers.len());
    for explainer in explainers {
        let method = explainer.method();
        let map0 = explainer.explain(classifier, &a0, class_idx, &id, None)?;
        let mut numerators = vec![T::zero(); spec.n];
        for (i, (_, a)) in all_family.iter().enumerate() {
            if consistent[i] {
                let mi = explainer.explain(classifier, a, class_idx, &id, Some(i))?;
                numerators[i] = relative_change(
                    map0.scores.as_slice().unwrap(),
                    mi.scores.as_slice().unwrap(),
                    guard,
                    p,
                )?;
            }
        }
        let mut stab: Vec<(Metric, T, usize)> = Vec::new();
        let mut skipped = Vec::new();
        for m in Metric::ALL.into_iter().filter(|m| m.is_stability()) {
            match max_ratio(&numerators, &denominators[&m], &consistent, eps) {
                Ok((v, n_valid)) => stab.push((m, v, n_valid)),
                Err(MetricsError::NoConsistentPerturbation) => skipped.push(m),
                Err(e) => return Err(e),
            }
        }

        let mut records = Vec::new();
        for k in cfg.k_range(joints) {
            let ranking = rank(&map0, k)?;
            let top = family_probs(Target::TopK(ranking.clone()))?;
            let pgi_v = pgi(f0, &top)?;
            let pgu_v = if k == joints {
                T::zero()
            } else {
                pgu(f0, &family_probs(Target::NonTopK(ranking))?)?
            };
            let mut push = |metric, value: T, n_valid| {
                records.push(MetricRecord {
                    metric,
                    method,
                    window_id: id.clone(),
                    k,
                    value: value.as_f64(),
                    n_valid,
                })
            };
            push(Metric::Pgi, pgi_v, spec.n);
            push(Metric::Pgu, pgu_v, spec.n);
            for &(m, v, n_valid) in &stab {
                push(m, v, n_valid);
            }
        }
        out.push(WindowEvaluation {
            window_id: id.clone(),
            method,
            class_idx,
            f_orig: f0,
            attribution: map0,
            records,
            skipped,
        });
    }
    Ok(out)
}
