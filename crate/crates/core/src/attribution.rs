//! Per-joint attribution maps (CAM, Grad-CAM, random) and joint rankings.

use std::fmt;

use ndarray::{Array1, Array3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Assessment, Classifier, ForwardTrace, GradTap, ModelError, ModelInstance};
use crate::numeric::median;
use crate::{seed, Scalar};

#[derive(Debug, Error)]
pub enum AttributionError {
    #[error("cannot fuse maps of different methods or windows")]
    MixedMethods,
    #[error("no maps to fuse")]
    Empty,
    #[error("k = {k} outside 1..={joints}")]
    KOutOfRange { k: usize, joints: usize },
    #[error("fixed map has {got} scores for {joints} joints")]
    LengthMismatch { got: usize, joints: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cam,
    Gradcam,
    Random,
    /// A caller-supplied map, used as an oracle attribution.
    Fixed,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Cam => "cam",
            Method::Gradcam => "gradcam",
            Method::Random => "random",
            Method::Fixed => "fixed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cam" => Some(Method::Cam),
            "gradcam" | "grad-cam" | "grad_cam" => Some(Method::Gradcam),
            "random" => Some(Method::Random),
            "fixed" => Some(Method::Fixed),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionMap<T> {
    pub method: Method,
    /// Min-max normalized scores in `[0, 1]`.
    pub scores: Array1<T>,
    pub raw: Array1<T>,
    pub class_idx: usize,
    pub window_id: String,
}

impl<T: Scalar> AttributionMap<T> {
    pub fn from_raw(method: Method, raw: Array1<T>, class_idx: usize, window_id: &str) -> Self {
        Self {
            method,
            scores: normalize(&raw),
            raw,
            class_idx,
            window_id: window_id.to_string(),
        }
    }

    pub fn joints(&self) -> usize {
        self.scores.len()
    }
}

/// Min-max scaling to `[0, 1]`; an all-equal input maps to all zeros.
pub fn normalize<T: Scalar>(raw: &Array1<T>) -> Array1<T> {
    let lo = raw.iter().copied().fold(T::infinity(), T::min);
    let hi = raw.iter().copied().fold(T::neg_infinity(), T::max);
    let span = hi - lo;
    if !(span > T::zero()) || !span.is_finite() {
        return Array1::zeros(raw.len());
    }
    raw.mapv(|x| ((x - lo) / span).max(T::zero()).min(T::one()))
}

/// Joint scores `mean_t sum_n weights[n] * features[n, t, v]`.
pub fn weighted_joint_scores<T: Scalar>(features: &Array3<T>, weights: &[T]) -> Array1<T> {
    let (channels, frames, joints) = features.dim();
    debug_assert_eq!(channels, weights.len());
    let mut raw = Array1::zeros(joints);
    for (n, &w) in weights.iter().enumerate() {
        for t in 0..frames {
            for v in 0..joints {
                raw[v] += w * features[[n, t, v]];
            }
        }
    }
    let inv = T::one() / T::of_usize(frames.max(1));
    raw.mapv_inplace(|x| x * inv);
    raw
}

/// Class activation map from the FC weights of `class_idx`.
pub fn cam<T: Scalar>(trace: &ForwardTrace<T>, model: &ModelInstance<T>, class_idx: usize, window_id: &str) -> AttributionMap<T> {
    let w = model.params.fc_weight.row(class_idx).to_vec();
    let raw = weighted_joint_scores(&trace.feature_maps, &w);
    AttributionMap::from_raw(Method::Cam, raw, class_idx, window_id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct GradCamOptions {
    pub tap: GradTap,
    /// Clamp negative joint scores to zero before normalization.
    pub rectify: bool,
}

/// Channel coefficients: gradients at the tap averaged over (time, joints).
pub fn gradcam_alphas<T: Scalar>(
    trace: &ForwardTrace<T>,
    model: &ModelInstance<T>,
    class_idx: usize,
    tap: GradTap,
) -> Result<Vec<T>, ModelError> {
    let grad = model.grad_at_tap(trace, class_idx, tap)?;
    let (channels, frames, joints) = grad.dim();
    let inv = T::one() / T::of_usize(frames * joints);
    Ok((0..channels)
        .map(|n| grad.index_axis(ndarray::Axis(0), n).iter().copied().sum::<T>() * inv)
        .collect())
}

pub fn gradcam<T: Scalar>(
    trace: &ForwardTrace<T>,
    model: &ModelInstance<T>,
    class_idx: usize,
    opts: GradCamOptions,
    window_id: &str,
) -> Result<AttributionMap<T>, ModelError> {
    let alphas = gradcam_alphas(trace, model, class_idx, opts.tap)?;
    let features = model.tap_activation(trace, opts.tap)?;
    let mut raw = weighted_joint_scores(features, &alphas);
    if opts.rectify {
        raw.mapv_inplace(|x| x.max(T::zero()));
    }
    Ok(AttributionMap::from_raw(Method::Gradcam, raw, class_idx, window_id))
}

/// Uniform `[0, 1)` raw scores keyed by `(rng_seed, window_id, draw)`.
pub fn random_attribution<T: Scalar>(joints: usize, rng_seed: u64, window_id: &str, draw: u64) -> AttributionMap<T> {
    let base = seed::key(&[rng_seed, seed::hash_str(window_id), draw]);
    let raw = (0..joints)
        .map(|v| T::of(seed::unit_f64(seed::key(&[base, v as u64]))))
        .collect();
    AttributionMap::from_raw(Method::Random, raw, 0, window_id)
}

/// Per-joint median of member scores, renormalized.
pub fn ensemble_attribution<T: Scalar>(maps: &[AttributionMap<T>]) -> Result<AttributionMap<T>, AttributionError> {
    let first = maps.first().ok_or(AttributionError::Empty)?;
    if maps
        .iter()
        .any(|m| m.method != first.method || m.window_id != first.window_id || m.joints() != first.joints())
    {
        return Err(AttributionError::MixedMethods);
    }
    let raw: Array1<T> = (0..first.joints())
        .map(|v| {
            let column: Vec<T> = maps.iter().map(|m| m.scores[v]).collect();
            median(&column).expect("nonempty")
        })
        .collect();
    Ok(AttributionMap::from_raw(first.method, raw, first.class_idx, &first.window_id))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointRanking {
    /// Joint indices by descending score, ties by ascending index.
    pub order: Vec<usize>,
    pub k: usize,
}

impl JointRanking {
    pub fn top_k(&self) -> &[usize] {
        &self.order[..self.k]
    }

    pub fn non_top_k(&self) -> &[usize] {
        &self.order[self.k..]
    }
}

pub fn rank<T: Scalar>(map: &AttributionMap<T>, k: usize) -> Result<JointRanking, AttributionError> {
    let joints = map.joints();
    if k == 0 || k > joints {
        return Err(AttributionError::KOutOfRange { k, joints });
    }
    let mut order: Vec<usize> = (0..joints).collect();
    // stable sort keeps ascending index among equal scores
    order.sort_by(|&a, &b| {
        map.scores[b]
            .partial_cmp(&map.scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(JointRanking { order, k })
}

/// How an attribution map is produced for a classifier's assessment.
#[derive(Debug, Clone, PartialEq)]
pub enum Explainer<T> {
    Cam,
    GradCam(GradCamOptions),
    /// Fresh uniform scores per window and per draw.
    Random { seed: u64 },
    /// The same raw scores for every input.
    Fixed(Array1<T>),
}

impl<T: Scalar> Explainer<T> {
    pub fn method(&self) -> Method {
        match self {
            Explainer::Cam => Method::Cam,
            Explainer::GradCam(_) => Method::Gradcam,
            Explainer::Random { .. } => Method::Random,
            Explainer::Fixed(_) => Method::Fixed,
        }
    }

    /// Explains `class_idx` for an assessment of `classifier`.
    ///
    /// `draw` distinguishes perturbed inputs (`Some(i)`) from the original
    /// (`None`); only the random explainer looks at it. Multi-member
    /// classifiers fuse normalized member maps by per-joint median.
    pub fn explain<C: Classifier<T> + ?Sized>(
        &self,
        classifier: &C,
        assessment: &Assessment<T>,
        class_idx: usize,
        window_id: &str,
        draw: Option<usize>,
    ) -> Result<AttributionMap<T>, AttributionError> {
        let members = classifier.members();
        let joints = members.first().ok_or(ModelError::EmptyEnsemble)?.joints();
        let per_member = |f: &dyn Fn(&ForwardTrace<T>, &ModelInstance<T>) -> Result<AttributionMap<T>, AttributionError>| {
            let maps = assessment
                .traces
                .iter()
                .zip(members)
                .map(|(t, m)| f(t, m))
                .collect::<Result<Vec<_>, _>>()?;
            if maps.len() == 1 {
                Ok(maps.into_iter().next().unwrap())
            } else {
                ensemble_attribution(&maps)
            }
        };
        match self {
            Explainer::Cam => per_member(&|t, m| Ok(cam(t, m, class_idx, window_id))),
            Explainer::GradCam(opts) => per_member(&|t, m| Ok(gradcam(t, m, class_idx, *opts, window_id)?)),
            Explainer::Random { seed } => {
                let d = draw.map_or(0, |i| i as u64 + 1);
                let mut map = random_attribution(joints, *seed, window_id, d);
                map.class_idx = class_idx;
                Ok(map)
            }
            Explainer::Fixed(raw) => {
                if raw.len() != joints {
                    return Err(AttributionError::LengthMismatch { got: raw.len(), joints });
                }
                Ok(AttributionMap::from_raw(Method::Fixed, raw.clone(), class_idx, window_id))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_degenerate_is_zero() {
        let z = normalize(&Array1::from(vec![0.4f64; 5]));
        assert!(z.iter().all(|&x| x == 0.0));
        let s = normalize(&Array1::from(vec![1.0f64, 3.0, 2.0]));
        assert_eq!(s.to_vec(), vec![0.0, 1.0, 0.5]);
    }

    #[test]
    fn rank_breaks_ties_by_index() {
        let map = AttributionMap {
            method: Method::Fixed,
            scores: Array1::from(vec![0.2f64, 0.9, 0.9]),
            raw: Array1::from(vec![0.2f64, 0.9, 0.9]),
            class_idx: 0,
            window_id: "w".into(),
        };
        let r = rank(&map, 3).unwrap();
        assert_eq!(r.order, vec![1, 2, 0]);
        assert!(r.non_top_k().is_empty());
        assert!(matches!(rank(&map, 0), Err(AttributionError::KOutOfRange { .. })));
        assert!(matches!(rank(&map, 4), Err(AttributionError::KOutOfRange { .. })));
    }

    #[test]
    fn random_maps_are_keyed() {
        let a = random_attribution::<f64>(19, 3, "s@0", 0);
        let b = random_attribution::<f64>(19, 3, "s@0", 0);
        let c = random_attribution::<f64>(19, 4, "s@0", 0);
        assert_eq!(a, b);
        assert_ne!(a.scores, c.scores);
        assert!(a.scores.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn fusion_rejects_mixed_methods() {
        let a = AttributionMap::from_raw(Method::Cam, Array1::from(vec![0.0f64, 1.0]), 0, "w");
        let mut b = a.clone();
        b.method = Method::Gradcam;
        assert!(matches!(ensemble_attribution(&[a, b]), Err(AttributionError::MixedMethods)));
    }

    #[test]
    fn fusion_takes_joint_medians() {
        let maps: Vec<_> = [0.1f64, 0.9, 0.5]
            .iter()
            .map(|&s| AttributionMap::from_raw(Method::Cam, Array1::from(vec![s, 0.0]), 0, "w"))
            .map(|mut m| {
                m.scores = m.raw.clone();
                m
            })
            .collect();
        let fused = ensemble_attribution(&maps).unwrap();
        assert_eq!(fused.raw[0], 0.5);
        assert_eq!(fused.scores.to_vec(), vec![1.0, 0.0]);
    }
}
