//! Fixed-radius joint perturbation in the image plane.
//!
//! Each targeted joint is displaced by `r` pixels in a random direction; the
//! offset is drawn once per joint and applied to every frame, so bone
//! kinematics inside the window are preserved.

use std::f64::consts::TAU;

use ndarray::Array3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attribution::JointRanking;
use crate::skeleton::Window;
use crate::{seed, Scalar};

#[derive(Debug, Error)]
pub enum PerturbError {
    #[error("window height must be positive, got {0}")]
    NonPositiveHeight(f64),
    #[error("invalid perturbation spec: {0}")]
    InvalidSpec(String),
    #[error("ranking covers {ranking} joints but the window has {joints}")]
    RankingMismatch { ranking: usize, joints: usize },
}

/// Which joints a perturbation moves.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    TopK(JointRanking),
    NonTopK(JointRanking),
    #[default]
    All,
}

impl Target {
    /// Boolean mask over joints.
    pub fn mask(&self, joints: usize) -> Result<Vec<bool>, PerturbError> {
        let (ranking, top) = match self {
            Target::All => return Ok(vec![true; joints]),
            Target::TopK(r) => (r, true),
            Target::NonTopK(r) => (r, false),
        };
        if ranking.order.len() != joints {
            return Err(PerturbError::RankingMismatch {
                ranking: ranking.order.len(),
                joints,
            });
        }
        if ranking.k > joints {
            return Err(PerturbError::InvalidSpec(format!("k = {} exceeds {joints} joints", ranking.k)));
        }
        let mut seen = vec![false; joints];
        for &v in &ranking.order {
            if v >= joints || std::mem::replace(&mut seen[v], true) {
                return Err(PerturbError::InvalidSpec("ranking order is not a permutation".into()));
            }
        }
        let chosen = if top { ranking.top_k() } else { ranking.non_top_k() };
        let mut mask = vec![false; joints];
        for &v in chosen {
            mask[v] = true;
        }
        Ok(mask)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PerturbationSpec {
    /// Radius as a fraction of the window's median height.
    pub r_fraction: f64,
    /// Draws per family.
    pub n: usize,
    pub target: Target,
    pub rng_seed: u64,
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        Self {
            r_fraction: 0.01,
            n: 50,
            target: Target::All,
            rng_seed: 0,
        }
    }
}

impl PerturbationSpec {
    pub fn validate(&self) -> Result<(), PerturbError> {
        if !(self.r_fraction > 0.0) || !self.r_fraction.is_finite() {
            return Err(PerturbError::InvalidSpec(format!("r_fraction must be positive, got {}", self.r_fraction)));
        }
        if self.n == 0 {
            return Err(PerturbError::InvalidSpec("n must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_target(&self, target: Target) -> Self {
        Self {
            target,
            ..self.clone()
        }
    }

    /// Angle of joint `joint` in draw `draw_idx` of window `window_id`.
    pub fn angle(&self, window_id: &str, draw_idx: usize, joint: usize) -> f64 {
        let k = seed::key(&[self.rng_seed, seed::hash_str(window_id), draw_idx as u64, joint as u64]);
        TAU * seed::unit_f64(k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedWindow<T> {
    pub base_id: String,
    pub draw_idx: usize,
    /// Per-joint `(dx, dy)`; zero for untargeted joints.
    pub offsets: Vec<[T; 2]>,
    pub targeted: Vec<bool>,
    /// The displaced window (same frames and id as the base).
    pub window: Window<T>,
}

impl<T: Scalar> PerturbedWindow<T> {
    pub fn coords(&self) -> &Array3<T> {
        &self.window.coords
    }
}

fn check_height<T: Scalar>(height: T) -> Result<(), PerturbError> {
    if height > T::zero() && height.is_finite() {
        Ok(())
    } else {
        Err(PerturbError::NonPositiveHeight(height.as_f64()))
    }
}

/// Applies explicit per-joint angles (radians) to the targeted joints.
pub fn perturb_with_angles<T: Scalar>(
    window: &Window<T>,
    spec: &PerturbationSpec,
    height: T,
    draw_idx: usize,
    angles: &[f64],
) -> Result<PerturbedWindow<T>, PerturbError> {
    check_height(height)?;
    let joints = window.joints();
    let targeted = spec.target.mask(joints)?;
    let r = T::of(spec.r_fraction) * height;
    let offsets: Vec<[T; 2]> = (0..joints)
        .map(|v| {
            if targeted[v] {
                let theta = T::of(angles[v]);
                [r * theta.cos(), r * theta.sin()]
            } else {
                [T::zero(); 2]
            }
        })
        .collect();
    let mut coords = window.coords.clone();
    for t in 0..window.frames() {
        for (v, off) in offsets.iter().enumerate() {
            if targeted[v] {
                coords[[t, v, 0]] += off[0];
                coords[[t, v, 1]] += off[1];
            }
        }
    }
    Ok(PerturbedWindow {
        base_id: window.id(),
        draw_idx,
        offsets,
        targeted,
        window: window.with_coords(coords),
    })
}

/// One keyed draw: angle per joint from `(rng_seed, window, draw, joint)`.
pub fn perturb<T: Scalar>(
    window: &Window<T>,
    spec: &PerturbationSpec,
    height: T,
    draw_idx: usize,
) -> Result<PerturbedWindow<T>, PerturbError> {
    let id = window.id();
    let angles: Vec<f64> = (0..window.joints()).map(|v| spec.angle(&id, draw_idx, v)).collect();
    perturb_with_angles(window, spec, height, draw_idx, &angles)
}

/// Draws `0..spec.n`.
pub fn perturbation_family<T: Scalar>(
    window: &Window<T>,
    spec: &PerturbationSpec,
    height: T,
) -> Result<Vec<PerturbedWindow<T>>, PerturbError> {
    spec.validate()?;
    (0..spec.n).map(|i| perturb(window, spec, height, i)).collect()
}

#[derive(Serialize)]
struct OffsetDump<'a, T> {
    window_id: &'a str,
    draw_idx: usize,
    offsets: &'a [[T; 2]],
}

/// Debug dump of a family's offsets as a JSON array.
pub fn offsets_json<T: Scalar>(family: &[PerturbedWindow<T>]) -> String {
    let dump: Vec<_> = family
        .iter()
        .map(|p| OffsetDump {
            window_id: &p.base_id,
            draw_idx: p.draw_idx,
            offsets: &p.offsets,
        })
        .collect();
    serde_json::to_string_pretty(&dump).expect("offsets serialize")
}
