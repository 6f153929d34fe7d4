//! Miniature multi-stream graph-convolutional classifier.
//!
//! Each input stream (position, velocity, bone) runs through its own branch
//! of blocks; branch outputs are concatenated channel-wise and passed through
//! a shared trunk. The final feature maps are globally average-pooled over
//! (time, joints) and fed to a fully connected layer producing the logits.
//! Every intermediate the attribution methods need is kept in
//! [`ForwardTrace`], and gradients are computed by explicit reverse-mode
//! passes over the cached activations.

mod ensemble;
mod io;
mod layers;
mod train;

pub use ensemble::{ensemble_representation, Assessment, Classifier, Ensemble};
pub use io::{ModelDocument, TensorDocument, MODEL_FORMAT_VERSION};
pub use layers::{Adjacency, Block, BlockCache, Nonlinearity};
pub use train::{train_toy, MemberReport, Optimizer, TrainOptions, TrainReport};

use ndarray::{concatenate, s, Array1, Array2, Array3, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::argmax;
use crate::skeleton::{JointRegistry, StreamKind, Streams};
use crate::{seed, Scalar};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid model config: {0}")]
    InvalidConfig(String),
    #[error("ensemble has no members")]
    EmptyEnsemble,
    #[error("loss diverged for member {member} at epoch {epoch}")]
    DivergedLoss { member: usize, epoch: usize },
    #[error("invalid training data: {0}")]
    InvalidData(String),
    #[error("model document error: {0}")]
    Format(String),
}

pub const N_CLASSES: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MiniGcnConfig {
    pub branch_width: usize,
    pub n_branch_blocks: usize,
    pub main_width: usize,
    pub n_main_blocks: usize,
    pub temporal_kernel: usize,
    pub nonlinearity: Nonlinearity,
    pub rng_seed: u64,
}

impl Default for MiniGcnConfig {
    fn default() -> Self {
        Self {
            branch_width: 4,
            n_branch_blocks: 1,
            main_width: 8,
            n_main_blocks: 1,
            temporal_kernel: 3,
            nonlinearity: Nonlinearity::Relu,
            rng_seed: 0,
        }
    }
}

impl MiniGcnConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.branch_width == 0 || self.main_width == 0 {
            return Err(ModelError::InvalidConfig("widths must be at least 1".into()));
        }
        if self.temporal_kernel % 2 == 0 {
            return Err(ModelError::InvalidConfig(format!(
                "temporal kernel must be odd, got {}",
                self.temporal_kernel
            )));
        }
        Ok(())
    }

    /// Channels entering the trunk.
    pub fn fused_channels(&self) -> usize {
        if self.n_branch_blocks > 0 {
            3 * self.branch_width
        } else {
            StreamKind::ALL.iter().map(|k| k.channels()).sum()
        }
    }

    /// Channels of the final feature maps.
    pub fn feature_channels(&self) -> usize {
        if self.n_main_blocks > 0 {
            self.main_width
        } else {
            self.fused_channels()
        }
    }

    /// A ten-variant roster differing in width, kernel and nonlinearity.
    pub fn roster(base_seed: u64) -> Vec<MiniGcnConfig> {
        use Nonlinearity::{Relu, Swish};
        let variants: [(usize, usize, usize, Nonlinearity); 10] = [
            (4, 8, 3, Relu),
            (4, 8, 5, Swish),
            (6, 8, 3, Relu),
            (4, 6, 5, Swish),
            (4, 8, 3, Swish),
            (6, 6, 3, Relu),
            (4, 8, 5, Relu),
            (6, 8, 5, Swish),
            (4, 6, 3, Relu),
            (6, 6, 5, Swish),
        ];
        variants
            .iter()
            .enumerate()
            .map(|(i, &(bw, mw, k, act))| MiniGcnConfig {
                branch_width: bw,
                n_branch_blocks: 1,
                main_width: mw,
                n_main_blocks: 1,
                temporal_kernel: k,
                nonlinearity: act,
                rng_seed: seed::key(&[base_seed, i as u64]),
            })
            .collect()
    }
}

/// All trainable tensors. Gradients use the same container.
#[derive(Debug, Clone, PartialEq)]
pub struct Params<T> {
    /// Per (channel, joint) multiplier on the standardized input, stored as
    /// its offset from one. Shape `(INPUT_CHANNELS, joints)`.
    pub input_gain: Array2<T>,
    /// One block list per stream, in [`StreamKind::ALL`] order.
    pub branches: Vec<Vec<Block<T>>>,
    pub main: Vec<Block<T>>,
    /// `(classes, feature_channels)`.
    pub fc_weight: Array2<T>,
    pub fc_bias: Array1<T>,
}

impl<T: Scalar> Params<T> {
    pub fn zeros(config: &MiniGcnConfig, joints: usize) -> Self {
        let k = config.temporal_kernel;
        let branches = StreamKind::ALL
            .iter()
            .map(|kind| {
                (0..config.n_branch_blocks)
                    .map(|j| {
                        let c_in = if j == 0 { kind.channels() } else { config.branch_width };
                        Block::zeros(c_in, config.branch_width, k)
                    })
                    .collect()
            })
            .collect();
        let main = (0..config.n_main_blocks)
            .map(|j| {
                let c_in = if j == 0 { config.fused_channels() } else { config.main_width };
                Block::zeros(c_in, config.main_width, k)
            })
            .collect();
        Self {
            input_gain: Array2::zeros((INPUT_CHANNELS, joints)),
            branches,
            main,
            fc_weight: Array2::zeros((N_CLASSES, config.feature_channels())),
            fc_bias: Array1::zeros(N_CLASSES),
        }
    }

    fn blocks(&self) -> impl Iterator<Item = &Block<T>> {
        self.branches.iter().flatten().chain(self.main.iter())
    }

    /// Visits every parameter tensor in a fixed order as a flat slice.
    pub fn for_each_tensor(&self, mut f: impl FnMut(&[T])) {
        f(self.input_gain.as_slice().unwrap());
        for b in self.blocks() {
            f(b.graph_weight.as_slice().unwrap());
            f(b.temporal_weight.as_slice().unwrap());
            f(b.bias.as_slice().unwrap());
        }
        f(self.fc_weight.as_slice().unwrap());
        f(self.fc_bias.as_slice().unwrap());
    }

    pub fn for_each_tensor_mut(&mut self, mut f: impl FnMut(&mut [T])) {
        f(self.input_gain.as_slice_mut().unwrap());
        for b in self.branches.iter_mut().flatten().chain(self.main.iter_mut()) {
            f(b.graph_weight.as_slice_mut().unwrap());
            f(b.temporal_weight.as_slice_mut().unwrap());
            f(b.bias.as_slice_mut().unwrap());
        }
        f(self.fc_weight.as_slice_mut().unwrap());
        f(self.fc_bias.as_slice_mut().unwrap());
    }

    pub fn flatten(&self) -> Vec<T> {
        let mut out = Vec::new();
        self.for_each_tensor(|s| out.extend_from_slice(s));
        out
    }

    pub fn assign_flat(&mut self, values: &[T]) {
        let mut offset = 0;
        self.for_each_tensor_mut(|s| {
            s.copy_from_slice(&values[offset..offset + s.len()]);
            offset += s.len();
        });
    }

    pub fn len(&self) -> usize {
        let mut n = 0;
        self.for_each_tensor(|s| n += s.len());
        n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: T, other: &Params<T>) {
        let flat = other.flatten();
        let mut offset = 0;
        self.for_each_tensor_mut(|s| {
            let n = s.len();
            for (d, &g) in s.iter_mut().zip(&flat[offset..offset + n]) {
                *d += alpha * g;
            }
            offset += n;
        });
    }

    pub fn all_finite(&self) -> bool {
        let mut ok = true;
        self.for_each_tensor(|s| ok &= s.iter().all(|v| v.is_finite()));
        ok
    }
}

/// Where Grad-CAM reads feature maps and their gradients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum GradTap {
    /// The final feature maps (input of global average pooling).
    #[default]
    Final,
    /// Output of trunk block `i`.
    Main(usize),
    /// Concatenated branch outputs entering the trunk.
    Fusion,
}

#[derive(Debug, Clone)]
pub(crate) struct TraceCache<T> {
    /// Standardized inputs before the gain, one per stream.
    pub inputs: Vec<Array3<T>>,
    pub branches: Vec<Vec<BlockCache<T>>>,
    pub fusion: Array3<T>,
    pub main: Vec<BlockCache<T>>,
}

/// Outputs and cached intermediates of one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace<T> {
    /// Final feature maps `(channels, frames, joints)`.
    pub feature_maps: Array3<T>,
    /// Global average pool of the feature maps.
    pub pooled: Array1<T>,
    /// Pre-softmax outputs.
    pub logits: Array1<T>,
    pub probs: Array1<T>,
    pub predicted_class: usize,
    pub(crate) cache: TraceCache<T>,
}

/// Gradients of some scalar objective with respect to every input stream.
#[derive(Debug, Clone)]
pub struct InputGradients<T> {
    pub position: Array3<T>,
    pub velocity: Array3<T>,
    pub bone: Array3<T>,
}

pub fn softmax<T: Scalar>(logits: &Array1<T>) -> Array1<T> {
    let m = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let e = logits.mapv(|z| (z - m).exp());
    let total: T = e.iter().copied().sum();
    e.mapv(|v| v / total)
}

/// Fixed standardization of the input streams, applied before the branches:
/// each (channel, joint) series loses its own mean, then each channel is
/// divided by its pooled deviation. Channels are ordered position (x, y),
/// velocity (x, y), bone.
#[derive(Debug, Clone, PartialEq)]
pub struct InputNorm<T> {
    /// Shape (channels, joints).
    pub shift: Array2<T>,
    pub scale: Array1<T>,
}

pub const INPUT_CHANNELS: usize = 5;

impl<T: Scalar> InputNorm<T> {
    pub fn identity(joints: usize) -> Self {
        Self {
            shift: Array2::zeros((INPUT_CHANNELS, joints)),
            scale: Array1::ones(INPUT_CHANNELS),
        }
    }

    pub fn joints(&self) -> usize {
        self.shift.ncols()
    }

    /// Per-joint means and pooled per-channel deviations over every frame of
    /// `samples`; a zero deviation keeps scale 1.
    pub fn fit<'a>(joints: usize, samples: impl IntoIterator<Item = &'a Streams<T>>) -> Self {
        let mut sum = Array2::<f64>::zeros((INPUT_CHANNELS, joints));
        let mut sq = Array2::<f64>::zeros((INPUT_CHANNELS, joints));
        let mut count = [0usize; INPUT_CHANNELS];
        for streams in samples {
            let mut c = 0;
            for kind in StreamKind::ALL {
                let data = &streams.get(kind).data;
                for ch in 0..kind.channels() {
                    for row in data.index_axis(Axis(0), ch).outer_iter() {
                        for (v, &x) in row.iter().enumerate() {
                            sum[[c, v]] += x.as_f64();
                            sq[[c, v]] += x.as_f64() * x.as_f64();
                        }
                        count[c] += 1;
                    }
                    c += 1;
                }
            }
        }
        let mut norm = Self::identity(joints);
        for c in 0..INPUT_CHANNELS {
            if count[c] == 0 {
                continue;
            }
            let mut var = 0.0;
            for v in 0..joints {
                let mean = sum[[c, v]] / count[c] as f64;
                var += (sq[[c, v]] / count[c] as f64 - mean * mean).max(0.0);
                norm.shift[[c, v]] = T::of(mean);
            }
            let sd = (var / joints as f64).sqrt();
            if sd > 1e-12 {
                norm.scale[c] = T::of(sd);
            }
        }
        norm
    }

    fn first_channel(kind: StreamKind) -> usize {
        match kind {
            StreamKind::Position => 0,
            StreamKind::Velocity => 2,
            StreamKind::Bone => 4,
        }
    }

    fn apply(&self, kind: StreamKind, data: &Array3<T>) -> Array3<T> {
        let c0 = Self::first_channel(kind);
        let mut out = data.clone();
        for (ch, mut plane) in out.outer_iter_mut().enumerate() {
            let (mu, sigma) = (self.shift.row(c0 + ch), self.scale[c0 + ch]);
            for mut row in plane.outer_iter_mut() {
                row.zip_mut_with(&mu, |x, &m| *x = (*x - m) / sigma);
            }
        }
        out
    }

    fn backward(&self, kind: StreamKind, d: &mut Array3<T>) {
        let c0 = Self::first_channel(kind);
        for (ch, mut plane) in d.outer_iter_mut().enumerate() {
            let sigma = self.scale[c0 + ch];
            plane.mapv_inplace(|x| x / sigma);
        }
    }
}

/// A trained (or freshly initialized) network over a fixed joint graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelInstance<T> {
    pub config: MiniGcnConfig,
    pub adjacency: Adjacency<T>,
    /// Not trained by gradient descent; fitted once from training data.
    pub input_norm: InputNorm<T>,
    pub params: Params<T>,
}

impl<T: Scalar> ModelInstance<T> {
    /// He-uniform block weights, Glorot-uniform FC weights, zero biases,
    /// seeded by `config.rng_seed`.
    pub fn init(config: MiniGcnConfig, registry: &JointRegistry) -> Result<Self, ModelError> {
        config.validate()?;
        let mut params = Params::zeros(&config, registry.count());
        let mut rng = seed::rng(config.rng_seed);
        let mut uniform = |limit: f64, s: &mut [T]| {
            for v in s.iter_mut() {
                *v = T::of(rng.gen_range(-limit..limit));
            }
        };
        for b in params.branches.iter_mut().flatten().chain(params.main.iter_mut()) {
            let (c_in, c_out, k) = (b.c_in(), b.c_out(), b.kernel());
            uniform((6.0 / c_in as f64).sqrt(), b.graph_weight.as_slice_mut().unwrap());
            uniform((6.0 / (c_out * k) as f64).sqrt(), b.temporal_weight.as_slice_mut().unwrap());
        }
        let (classes, channels) = params.fc_weight.dim();
        uniform((6.0 / (channels + classes) as f64).sqrt(), params.fc_weight.as_slice_mut().unwrap());
        Ok(Self {
            config,
            adjacency: Adjacency::normalized(registry),
            input_norm: InputNorm::identity(registry.count()),
            params,
        })
    }

    /// All-zero parameters over the normalized adjacency.
    pub fn zeros(config: MiniGcnConfig, registry: &JointRegistry) -> Result<Self, ModelError> {
        config.validate()?;
        Ok(Self {
            params: Params::zeros(&config, registry.count()),
            adjacency: Adjacency::normalized(registry),
            input_norm: InputNorm::identity(registry.count()),
            config,
        })
    }

    pub fn with_adjacency(mut self, adjacency: Adjacency<T>) -> Self {
        self.adjacency = adjacency;
        self
    }

    pub fn joints(&self) -> usize {
        self.adjacency.joints()
    }

    fn check_streams(&self, streams: &Streams<T>) -> Result<(), ModelError> {
        let (_, frames, _) = streams.position.data.dim();
        for kind in StreamKind::ALL {
            let (c, t, v) = streams.get(kind).data.dim();
            if c != kind.channels() || t != frames || v != self.joints() || t == 0 {
                return Err(ModelError::ShapeMismatch(format!(
                    "{kind:?} stream has shape ({c}, {t}, {v}), expected ({}, {frames}, {})",
                    kind.channels(),
                    self.joints()
                )));
            }
        }
        Ok(())
    }

    pub fn forward(&self, streams: &Streams<T>) -> Result<ForwardTrace<T>, ModelError> {
        self.check_streams(streams)?;
        let act = self.config.nonlinearity;
        let mut branch_caches = Vec::with_capacity(3);
        let mut branch_outputs = Vec::with_capacity(3);
        let mut inputs = Vec::with_capacity(3);
        for (kind, blocks) in StreamKind::ALL.iter().zip(&self.params.branches) {
            let standardized = self.input_norm.apply(*kind, &streams.get(*kind).data);
            let mut x = self.apply_gain(*kind, &standardized);
            inputs.push(standardized);
            let mut caches = Vec::with_capacity(blocks.len());
            for b in blocks {
                let (y, c) = b.forward(&x, &self.adjacency, act);
                caches.push(c);
                x = y;
            }
            branch_caches.push(caches);
            branch_outputs.push(x);
        }
        let views: Vec<_> = branch_outputs.iter().map(|a| a.view()).collect();
        let fusion = concatenate(Axis(0), &views).expect("branches share frames and joints");
        let mut x = fusion.clone();
        let mut main_caches = Vec::with_capacity(self.params.main.len());
        for b in &self.params.main {
            let (y, c) = b.forward(&x, &self.adjacency, act);
            main_caches.push(c);
            x = y;
        }
        let (pooled, logits, probs) = self.head(&x);
        let predicted_class = argmax(logits.as_slice().unwrap());
        Ok(ForwardTrace {
            feature_maps: x,
            pooled,
            logits,
            probs,
            predicted_class,
            cache: TraceCache {
                inputs,
                branches: branch_caches,
                fusion,
                main: main_caches,
            },
        })
    }

    /// Logits alone, skipping everything the backward pass would need.
    pub fn logits(&self, streams: &Streams<T>) -> Result<Array1<T>, ModelError> {
        self.check_streams(streams)?;
        let act = self.config.nonlinearity;
        let mut branch_outputs = Vec::with_capacity(3);
        for (kind, blocks) in StreamKind::ALL.iter().zip(&self.params.branches) {
            let mut x = self.apply_gain(*kind, &self.input_norm.apply(*kind, &streams.get(*kind).data));
            for b in blocks {
                x = b.infer(&x, &self.adjacency, act);
            }
            branch_outputs.push(x);
        }
        let views: Vec<_> = branch_outputs.iter().map(|a| a.view()).collect();
        let mut x = concatenate(Axis(0), &views).expect("branches share frames and joints");
        for b in &self.params.main {
            x = b.infer(&x, &self.adjacency, act);
        }
        Ok(self.head(&x).1)
    }

    fn apply_gain(&self, kind: StreamKind, standardized: &Array3<T>) -> Array3<T> {
        let c0 = InputNorm::<T>::first_channel(kind);
        let mut out = standardized.clone();
        for (ch, mut plane) in out.outer_iter_mut().enumerate() {
            let gain = self.params.input_gain.row(c0 + ch);
            for mut row in plane.outer_iter_mut() {
                row.zip_mut_with(&gain, |x, &g| *x *= T::one() + g);
            }
        }
        out
    }

    fn head(&self, features: &Array3<T>) -> (Array1<T>, Array1<T>, Array1<T>) {
        let pooled = features
            .mean_axis(Axis(2))
            .and_then(|m| m.mean_axis(Axis(1)))
            .expect("non-empty feature maps");
        let logits = self.params.fc_weight.dot(&pooled) + &self.params.fc_bias;
        let probs = softmax(&logits);
        (pooled, logits, probs)
    }

    /// Activation at `tap` from a trace.
    pub fn tap_activation<'a>(&self, trace: &'a ForwardTrace<T>, tap: GradTap) -> Result<&'a Array3<T>, ModelError> {
        let n = self.params.main.len();
        match tap {
            GradTap::Final => Ok(&trace.feature_maps),
            GradTap::Fusion => Ok(&trace.cache.fusion),
            GradTap::Main(i) if i + 1 < n => Ok(&trace.cache.main[i + 1].input),
            GradTap::Main(i) if i + 1 == n => Ok(&trace.feature_maps),
            GradTap::Main(i) => Err(ModelError::InvalidConfig(format!("no trunk block {i}"))),
        }
    }

    /// Number of trunk blocks lying after `tap`.
    fn blocks_after(&self, tap: GradTap) -> Result<usize, ModelError> {
        let n = self.params.main.len();
        match tap {
            GradTap::Final => Ok(0),
            GradTap::Fusion => Ok(n),
            GradTap::Main(i) if i < n => Ok(n - 1 - i),
            GradTap::Main(i) => Err(ModelError::InvalidConfig(format!("no trunk block {i}"))),
        }
    }

    /// Logits recomputed from an arbitrary activation placed at `tap`.
    pub fn logits_from_tap(&self, activation: &Array3<T>, tap: GradTap) -> Result<Array1<T>, ModelError> {
        let after = self.blocks_after(tap)?;
        let n = self.params.main.len();
        let mut x = activation.clone();
        for b in &self.params.main[n - after..] {
            x = b.forward(&x, &self.adjacency, self.config.nonlinearity).0;
        }
        Ok(self.head(&x).1)
    }

    fn d_features(&self, trace: &ForwardTrace<T>, d_logits: &Array1<T>) -> Array3<T> {
        let (c, t, v) = trace.feature_maps.dim();
        let d_pooled = self.params.fc_weight.t().dot(d_logits);
        let scale = T::one() / T::of_usize(t * v);
        Array3::from_shape_fn((c, t, v), |(n, _, _)| d_pooled[n] * scale)
    }

    /// Exact gradient of `logits[class_idx]` with respect to the activation at `tap`.
    pub fn grad_at_tap(&self, trace: &ForwardTrace<T>, class_idx: usize, tap: GradTap) -> Result<Array3<T>, ModelError> {
        if class_idx >= N_CLASSES {
            return Err(ModelError::ShapeMismatch(format!("class {class_idx} out of range")));
        }
        let after = self.blocks_after(tap)?;
        let mut d_logits = Array1::zeros(N_CLASSES);
        d_logits[class_idx] = T::one();
        let mut d = self.d_features(trace, &d_logits);
        let n = self.params.main.len();
        for j in (n - after..n).rev() {
            d = self.params.main[j].backward(
                &trace.cache.main[j],
                &d,
                &self.adjacency,
                self.config.nonlinearity,
                None,
            );
        }
        Ok(d)
    }

    /// Exact `d logits[class_idx] / d feature_maps`.
    pub fn grad_feature_maps(&self, trace: &ForwardTrace<T>, class_idx: usize) -> Result<Array3<T>, ModelError> {
        self.grad_at_tap(trace, class_idx, GradTap::Final)
    }

    /// Full reverse pass for an upstream gradient on the logits. Parameter
    /// gradients are accumulated into `grads`; input gradients are returned.
    pub fn backward(&self, trace: &ForwardTrace<T>, d_logits: &Array1<T>, grads: &mut Params<T>) -> InputGradients<T> {
        let act = self.config.nonlinearity;
        let pooled = &trace.pooled;
        for k in 0..N_CLASSES {
            grads.fc_bias[k] += d_logits[k];
            for n in 0..pooled.len() {
                grads.fc_weight[[k, n]] += d_logits[k] * pooled[n];
            }
        }
        let mut d = self.d_features(trace, d_logits);
        for j in (0..self.params.main.len()).rev() {
            d = self.params.main[j].backward(&trace.cache.main[j], &d, &self.adjacency, act, Some(&mut grads.main[j]));
        }
        let mut offset = 0;
        let mut inputs = Vec::with_capacity(3);
        for (s, kind) in StreamKind::ALL.iter().enumerate() {
            let width = match self.params.branches[s].last() {
                Some(b) => b.c_out(),
                None => kind.channels(),
            };
            let mut ds = d.slice(s![offset..offset + width, .., ..]).to_owned();
            offset += width;
            for j in (0..self.params.branches[s].len()).rev() {
                ds = self.params.branches[s][j].backward(
                    &trace.cache.branches[s][j],
                    &ds,
                    &self.adjacency,
                    act,
                    Some(&mut grads.branches[s][j]),
                );
            }
            let c0 = InputNorm::<T>::first_channel(*kind);
            for (ch, mut plane) in ds.outer_iter_mut().enumerate() {
                let x = trace.cache.inputs[s].index_axis(Axis(0), ch);
                for (t, mut row) in plane.outer_iter_mut().enumerate() {
                    for (v, d) in row.iter_mut().enumerate() {
                        grads.input_gain[[c0 + ch, v]] += *d * x[[t, v]];
                        *d *= T::one() + self.params.input_gain[[c0 + ch, v]];
                    }
                }
            }
            self.input_norm.backward(*kind, &mut ds);
            inputs.push(ds);
        }
        let bone = inputs.pop().unwrap();
        let velocity = inputs.pop().unwrap();
        let position = inputs.pop().unwrap();
        InputGradients {
            position,
            velocity,
            bone,
        }
    }

    /// Cross-entropy against the one-hot label and its gradient, accumulated
    /// into `grads`.
    pub fn loss_and_grad(&self, streams: &Streams<T>, label: usize, grads: &mut Params<T>) -> Result<(T, ForwardTrace<T>), ModelError> {
        self.smoothed_loss_and_grad(streams, label, T::zero(), grads)
    }

    /// Cross-entropy against the label mixed with the uniform distribution
    /// in proportion `smoothing`.
    pub fn smoothed_loss_and_grad(
        &self,
        streams: &Streams<T>,
        label: usize,
        smoothing: T,
        grads: &mut Params<T>,
    ) -> Result<(T, ForwardTrace<T>), ModelError> {
        let trace = self.forward(streams)?;
        let uniform = smoothing / T::of_usize(N_CLASSES);
        let target = |c: usize| if c == label { T::one() - smoothing + uniform } else { uniform };
        let mut loss = T::zero();
        let mut d_logits = trace.probs.clone();
        for c in 0..N_CLASSES {
            let q = target(c);
            if q > T::zero() {
                loss -= q * trace.probs[c].max(T::min_positive_value()).ln();
            }
            d_logits[c] -= q;
        }
        self.backward(&trace, &d_logits, grads);
        Ok((loss, trace))
    }
}
