//! Synthetic labelled skeleton sequences with a planted class signal.
//!
//! Each non-root joint swings its incoming bone around the parent with a
//! slow sinusoid. Bone lengths are fixed within a sequence but vary between
//! subjects. Label-1 sequences lengthen the signal bones and label-0
//! sequences shorten them, so both classes carry evidence at the same
//! joints; class 1 can optionally swing the signal joints wider as well.
//! Every keypoint also carries a constant per-sequence offset, the way a
//! pose detector is biased on a given subject.

use std::f64::consts::PI;

use ndarray::Array3;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::skeleton::{JointRegistry, SkeletonError, SkeletonSequence};
use crate::{seed, Scalar};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synthetic config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_sequences: usize,
    pub fps: f64,
    pub duration_s: f64,
    /// Joint indices whose incoming bone encodes the class.
    pub signal_joints: Vec<usize>,
    /// Per-frame positional jitter in pixels, applied as angular noise so
    /// bone lengths are unaffected.
    pub noise_sigma: f64,
    pub rng_seed: u64,
    /// Fraction of label-1 sequences.
    pub class_balance: f64,
    /// Relative change of each signal joint's incoming bone: label 1
    /// multiplies it by `1 + signal_stretch`, label 0 by `1 - signal_stretch`.
    pub signal_stretch: f64,
    /// Extra swing amplitude (radians) on every signal joint for label 1.
    pub signal_amplitude: f64,
    /// Half-width, as a fraction of height, of the uniform per-sequence
    /// jitter added to every bone length.
    pub bone_jitter: f64,
    /// Radius, as a fraction of height, of a constant per-sequence offset
    /// added to every keypoint after posing (systematic detector bias).
    pub keypoint_bias: f64,
    /// Nominal head-to-ankle height in pixels.
    pub base_height: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        let reg = JointRegistry::default_infant();
        Self {
            n_sequences: 160,
            fps: 4.0,
            duration_s: 15.0,
            signal_joints: vec![
                reg.index_of("right_wrist").unwrap(),
                reg.index_of("left_wrist").unwrap(),
            ],
            noise_sigma: 0.5,
            rng_seed: 7,
            class_balance: 0.15,
            signal_stretch: 0.25,
            signal_amplitude: 0.0,
            bone_jitter: 0.0025,
            keypoint_bias: 0.02,
            base_height: 400.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self, registry: &JointRegistry) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidConfig(m));
        if let Some(&j) = self.signal_joints.iter().find(|&&j| j >= registry.count()) {
            return bad(format!("signal joint {j} out of range"));
        }
        if self.signal_joints.contains(&registry.root()) {
            return bad("the root joint cannot carry a swing signal".into());
        }
        if !(self.bone_jitter >= 0.0 && self.bone_jitter < 0.02) {
            return bad(format!("bone_jitter must lie in [0, 0.02), got {}", self.bone_jitter));
        }
        if !(self.keypoint_bias >= 0.0 && self.keypoint_bias < 0.1) {
            return bad(format!("keypoint_bias must lie in [0, 0.1), got {}", self.keypoint_bias));
        }
        if !(self.signal_stretch >= 0.0 && self.signal_stretch < 0.5) {
            return bad(format!("signal_stretch must lie in [0, 0.5), got {}", self.signal_stretch));
        }
        if !(self.noise_sigma >= 0.0) {
            return bad(format!("noise_sigma must be >= 0, got {}", self.noise_sigma));
        }
        if !(self.class_balance > 0.0 && self.class_balance < 1.0) {
            return bad(format!("class_balance must lie in (0, 1), got {}", self.class_balance));
        }
        if !(self.fps > 0.0 && self.duration_s > 0.0 && self.base_height > 0.0) {
            return bad("fps, duration_s and base_height must be positive".into());
        }
        if (self.fps * self.duration_s).round() < 2.0 {
            return bad("sequences need at least two frames".into());
        }
        Ok(())
    }

    /// Number of label-1 sequences the generator will emit.
    pub fn positives(&self) -> usize {
        (self.n_sequences as f64 * self.class_balance).round() as usize
    }
}

/// Rest pose in units of body height, image axes (y grows downward).
fn template_position(name: &str) -> Option<(f64, f64)> {
    Some(match name {
        "head" => (0.0, 0.0),
        "nose" => (0.0, 0.06),
        "right_eye" => (-0.03, 0.04),
        "left_eye" => (0.03, 0.04),
        "upper_neck" => (0.0, 0.14),
        "thorax" => (0.0, 0.24),
        "right_shoulder" => (-0.10, 0.24),
        "right_elbow" => (-0.20, 0.36),
        "right_wrist" => (-0.24, 0.48),
        "left_shoulder" => (0.10, 0.24),
        "left_elbow" => (0.20, 0.36),
        "left_wrist" => (0.24, 0.48),
        "pelvis" => (0.0, 0.52),
        "right_hip" => (-0.07, 0.54),
        "right_knee" => (-0.10, 0.77),
        "right_ankle" => (-0.10, 1.0),
        "left_hip" => (0.07, 0.54),
        "left_knee" => (0.10, 0.77),
        "left_ankle" => (0.10, 1.0),
        _ => return None,
    })
}

/// Rest bone vectors (child minus parent; the root's absolute position) in
/// body-height units. Joints not in the built-in template hang 0.1 below
/// their parent.
fn rest_bones(registry: &JointRegistry) -> Vec<(f64, f64)> {
    let n = registry.count();
    let mut abs: Vec<Option<(f64, f64)>> = registry.names().iter().map(|n| template_position(n)).collect();
    // resolve unknown joints top-down
    let mut order = vec![registry.root()];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &(p, c) in registry.bones() {
            if p == v {
                order.push(c);
            }
        }
        i += 1;
    }
    if abs[registry.root()].is_none() {
        abs[registry.root()] = Some((0.0, 0.5));
    }
    for &v in &order {
        if abs[v].is_none() {
            let (px, py) = abs[registry.parent(v).unwrap()].unwrap();
            abs[v] = Some((px, py + 0.1));
        }
    }
    let abs: Vec<(f64, f64)> = abs.into_iter().map(Option::unwrap).collect();
    (0..n)
        .map(|v| match registry.parent(v) {
            Some(p) => (abs[v].0 - abs[p].0, abs[v].1 - abs[p].1),
            None => abs[v],
        })
        .collect()
}

/// Generates `cfg.n_sequences` sequences; identical configs give identical output.
pub fn generate<T: Scalar>(cfg: &SynthConfig, registry: &JointRegistry) -> Result<Vec<SkeletonSequence<T>>, SynthError> {
    cfg.validate(registry)?;
    let n = cfg.n_sequences;
    let mut labels = vec![0usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seed::rng(seed::key(&[cfg.rng_seed, 0x1abe1])));
    for &i in order.iter().take(cfg.positives()) {
        labels[i] = 1;
    }
    let bones = rest_bones(registry);
    let mut topo = vec![registry.root()];
    let mut i = 0;
    while i < topo.len() {
        let v = topo[i];
        topo.extend(registry.bones().iter().filter(|(p, _)| *p == v).map(|&(_, c)| c));
        i += 1;
    }
    let frames = (cfg.fps * cfg.duration_s).round() as usize;
    (0..n)
        .map(|s| {
            let mut rng = seed::rng(seed::key(&[cfg.rng_seed, s as u64]));
            let height = cfg.base_height * rng.gen_range(0.9..1.1);
            let origin = (rng.gen_range(280.0..360.0), rng.gen_range(200.0..280.0));
            let drift_amp = (rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0));
            let drift_freq = rng.gen_range(0.05..0.15);
            let swings: Vec<(f64, f64, f64, f64)> = (0..registry.count())
                .map(|v| {
                    let mut amp = rng.gen_range(0.02..0.08);
                    let (bx, by) = bones[v];
                    let rest = (bx * bx + by * by).sqrt();
                    let jitter = rng.gen_range(-1.0..1.0);
                    let mut stretch = if rest > 0.0 { 1.0 + cfg.bone_jitter * jitter / rest } else { 1.0 };
                    if cfg.signal_joints.contains(&v) {
                        if labels[s] == 1 {
                            amp += cfg.signal_amplitude;
                        }
                        stretch += if labels[s] == 1 { cfg.signal_stretch } else { -cfg.signal_stretch };
                    }
                    (stretch, amp, rng.gen_range(0.4..0.9), rng.gen_range(0.0..2.0 * PI))
                })
                .collect();
            let bias: Vec<(f64, f64)> = (0..registry.count())
                .map(|_| {
                    let radius = cfg.keypoint_bias * height * rng.gen_range(0.0f64..1.0).sqrt();
                    let theta = rng.gen_range(0.0..2.0 * PI);
                    (radius * theta.cos(), radius * theta.sin())
                })
                .collect();
            let mut coords = Array3::<T>::zeros((frames, registry.count(), 2));
            let mut pos = vec![(0.0f64, 0.0f64); registry.count()];
            for t in 0..frames {
                let time = t as f64 / cfg.fps;
                for &v in &topo {
                    match registry.parent(v) {
                        None => {
                            let (rx, ry) = bones[v];
                            let w = 2.0 * PI * drift_freq * time;
                            pos[v] = (
                                origin.0 + rx * height + drift_amp.0 * w.sin(),
                                origin.1 + ry * height + drift_amp.1 * w.cos(),
                            );
                        }
                        Some(p) => {
                            let (stretch, amp, freq, phase) = swings[v];
                            let (bx, by) = (bones[v].0 * stretch, bones[v].1 * stretch);
                            let len = (bx * bx + by * by).sqrt() * height;
                            let mut angle = amp * (2.0 * PI * freq * time + phase).sin();
                            if cfg.noise_sigma > 0.0 && len > 0.0 {
                                let z: f64 = rng.sample(StandardNormal);
                                angle += z * cfg.noise_sigma / len;
                            }
                            let (sa, ca) = angle.sin_cos();
                            let (dx, dy) = (bx * ca - by * sa, bx * sa + by * ca);
                            pos[v] = (pos[p].0 + dx * height, pos[p].1 + dy * height);
                        }
                    }
                }
                for (v, &(x, y)) in pos.iter().enumerate() {
                    coords[[t, v, 0]] = T::of(x + bias[v].0);
                    coords[[t, v, 1]] = T::of(y + bias[v].1);
                }
            }
            Ok(SkeletonSequence::new(format!("synth_{s:04}"), cfg.fps, labels[s], coords, registry)?)
        })
        .collect()
}
