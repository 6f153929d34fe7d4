use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Classifier, Ensemble, InputNorm, ModelError, ModelInstance, Params};
use crate::skeleton::Streams;
use crate::{seed, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Optimizer {
    /// Gradient descent with heavy-ball momentum (0 gives the plain update).
    Sgd { momentum: f64 },
    Adam { beta1: f64, beta2: f64, epsilon: f64 },
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::Adam {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainOptions {
    pub epochs: usize,
    pub lr: f64,
    pub optimizer: Optimizer,
    pub batch_size: usize,
    /// Sample `i` belongs to portion `i % n_portions`; member `m` never sees
    /// portion `m % n_portions`. With one portion every member sees all data.
    pub n_portions: usize,
    /// Weight each example's loss by the inverse frequency of its class in
    /// the member's fold.
    pub balance_classes: bool,
    /// Fit each member's input standardization on its fold before training.
    pub standardize_inputs: bool,
    /// Weight of the uniform distribution mixed into the one-hot targets.
    pub label_smoothing: f64,
    pub rng_seed: u64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            epochs: 50,
            lr: 0.005,
            optimizer: Optimizer::default(),
            batch_size: 16,
            n_portions: 5,
            balance_classes: true,
            standardize_inputs: true,
            label_smoothing: 0.1,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub member: usize,
    pub held_out_portion: Option<usize>,
    pub n_train: usize,
    pub final_loss: f64,
    pub train_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub members: Vec<MemberReport>,
}

impl TrainReport {
    pub fn min_accuracy(&self) -> f64 {
        self.members.iter().map(|m| m.train_accuracy).fold(f64::INFINITY, f64::min)
    }
}

fn fold_indices(n: usize, member: usize, n_portions: usize) -> (Option<usize>, Vec<usize>) {
    if n_portions <= 1 {
        return (None, (0..n).collect());
    }
    let held = member % n_portions;
    (Some(held), (0..n).filter(|i| i % n_portions != held).collect())
}

/// Trains every member on its own round-robin fold with mini-batch gradient
/// descent on cross-entropy. Deterministic for a given `opts.rng_seed`
/// regardless of thread count.
pub fn train_toy<T: Scalar>(
    ensemble: &Ensemble<T>,
    data: &[(Streams<T>, usize)],
    opts: &TrainOptions,
) -> Result<(Ensemble<T>, TrainReport), ModelError> {
    if data.is_empty() {
        return Err(ModelError::InvalidData("no training examples".into()));
    }
    if let Some((_, label)) = data.iter().find(|(_, l)| *l > 1) {
        return Err(ModelError::InvalidData(format!("label {label} outside {{0, 1}}")));
    }
    let mut members = Vec::with_capacity(ensemble.len());
    let mut reports = Vec::with_capacity(ensemble.len());
    for (m, model) in ensemble.members().iter().enumerate() {
        let (held, fold) = fold_indices(data.len(), m, opts.n_portions);
        let trained = train_member(model, data, &fold, opts, m)?;
        let correct = fold
            .iter()
            .map(|&i| trained.forward(&data[i].0).map(|t| t.predicted_class == data[i].1))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|&c| c)
            .count();
        let loss = mean_loss(&trained, data, &fold)?;
        reports.push(MemberReport {
            member: m,
            held_out_portion: held,
            n_train: fold.len(),
            final_loss: loss,
            train_accuracy: if fold.is_empty() { 1.0 } else { correct as f64 / fold.len() as f64 },
        });
        members.push(trained);
    }
    Ok((Ensemble::new(members)?, TrainReport { members: reports }))
}

fn mean_loss<T: Scalar>(model: &ModelInstance<T>, data: &[(Streams<T>, usize)], fold: &[usize]) -> Result<f64, ModelError> {
    if fold.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for &i in fold {
        let trace = model.forward(&data[i].0)?;
        total -= trace.probs[data[i].1].as_f64().max(f64::MIN_POSITIVE).ln();
    }
    Ok(total / fold.len() as f64)
}

fn train_member<T: Scalar>(
    model: &ModelInstance<T>,
    data: &[(Streams<T>, usize)],
    fold: &[usize],
    opts: &TrainOptions,
    member: usize,
) -> Result<ModelInstance<T>, ModelError> {
    let mut model = model.clone();
    if opts.epochs == 0 || opts.lr == 0.0 || fold.is_empty() {
        return Ok(model);
    }
    if opts.standardize_inputs {
        model.input_norm = InputNorm::fit(model.joints(), fold.iter().map(|&i| &data[i].0));
    }
    let batch = opts.batch_size.max(1);
    let mut state = OptimizerState::new(opts.optimizer, opts.lr, model.params.len());
    let mut class_weight = [T::one(); 2];
    if opts.balance_classes {
        let positives = fold.iter().filter(|&&i| data[i].1 == 1).count();
        for (c, count) in [(0, fold.len() - positives), (1, positives)] {
            if count > 0 {
                class_weight[c] = T::of(fold.len() as f64 / (2.0 * count as f64));
            }
        }
    }
    let smoothing = T::of(opts.label_smoothing);
    let mut order = fold.to_vec();
    for epoch in 0..opts.epochs {
        let mut rng = seed::rng(seed::key(&[opts.rng_seed, member as u64, epoch as u64]));
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for chunk in order.chunks(batch) {
            let per_sample = chunk
                .par_iter()
                .map(|&i| {
                    let mut g = Params::zeros(&model.config, model.joints());
                    model
                        .smoothed_loss_and_grad(&data[i].0, data[i].1, smoothing, &mut g)
                        .map(|(loss, _)| (loss, g, class_weight[data[i].1]))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut grad = Params::zeros(&model.config, model.joints());
            for (loss, g, w) in &per_sample {
                epoch_loss += (*loss * *w).as_f64();
                grad.add_scaled(*w, g);
            }
            let scale = T::one() / T::of_usize(chunk.len());
            let mut g_flat = grad.flatten();
            g_flat.iter_mut().for_each(|g| *g *= scale);
            let mut p_flat = model.params.flatten();
            state.step(&mut p_flat, &g_flat);
            model.params.assign_flat(&p_flat);
        }
        if !epoch_loss.is_finite() || !model.params.all_finite() {
            return Err(ModelError::DivergedLoss { member, epoch });
        }
    }
    Ok(model)
}

struct OptimizerState<T> {
    optimizer: Optimizer,
    lr: T,
    first: Vec<T>,
    second: Vec<T>,
    steps: i32,
}

impl<T: Scalar> OptimizerState<T> {
    fn new(optimizer: Optimizer, lr: f64, n: usize) -> Self {
        Self {
            optimizer,
            lr: T::of(lr),
            first: vec![T::zero(); n],
            second: vec![T::zero(); n],
            steps: 0,
        }
    }

    fn step(&mut self, params: &mut [T], grad: &[T]) {
        self.steps += 1;
        match self.optimizer {
            Optimizer::Sgd { momentum } => {
                let mu = T::of(momentum);
                for ((p, v), &g) in params.iter_mut().zip(&mut self.first).zip(grad) {
                    *v = mu * *v - self.lr * g;
                    *p += *v;
                }
            }
            Optimizer::Adam { beta1, beta2, epsilon } => {
                let (b1, b2, eps) = (T::of(beta1), T::of(beta2), T::of(epsilon));
                let c1 = T::one() - b1.powi(self.steps);
                let c2 = T::one() - b2.powi(self.steps);
                for (((p, m), v), &g) in params.iter_mut().zip(&mut self.first).zip(&mut self.second).zip(grad) {
                    *m = b1 * *m + (T::one() - b1) * g;
                    *v = b2 * *v + (T::one() - b2) * g * g;
                    *p -= self.lr * (*m / c1) / ((*v / c2).sqrt() + eps);
                }
            }
        }
    }
}
