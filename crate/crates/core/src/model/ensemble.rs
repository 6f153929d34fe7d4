use ndarray::Array1;

use super::{softmax, ForwardTrace, ModelError, ModelInstance, N_CLASSES};
use crate::numeric::{argmax, median};
use crate::skeleton::Streams;
use crate::Scalar;

/// Median-fused collection of models sharing one joint graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<T> {
    members: Vec<ModelInstance<T>>,
}

impl<T: Scalar> Ensemble<T> {
    pub fn new(members: Vec<ModelInstance<T>>) -> Result<Self, ModelError> {
        let first = members.first().ok_or(ModelError::EmptyEnsemble)?;
        let joints = first.joints();
        for (i, m) in members.iter().enumerate() {
            if m.joints() != joints || m.params.fc_bias.len() != N_CLASSES {
                return Err(ModelError::ShapeMismatch(format!(
                    "member {i} has {} joints and {} classes, expected {joints} and {N_CLASSES}",
                    m.joints(),
                    m.params.fc_bias.len()
                )));
            }
        }
        Ok(Self { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn into_members(self) -> Vec<ModelInstance<T>> {
        self.members
    }

    /// Median over members of the class-1 probability, with the member traces.
    pub fn ensemble_predict(&self, streams: &Streams<T>) -> Result<(T, Vec<ForwardTrace<T>>), ModelError> {
        let traces = self
            .members
            .iter()
            .map(|m| m.forward(streams))
            .collect::<Result<Vec<_>, _>>()?;
        let p1: Vec<T> = traces.iter().map(|t| t.probs[1]).collect();
        let prob = median(&p1).ok_or(ModelError::EmptyEnsemble)?;
        Ok((prob, traces))
    }
}

/// Member logits concatenated in member order.
pub fn ensemble_representation<T: Scalar>(traces: &[ForwardTrace<T>]) -> Array1<T> {
    traces.iter().flat_map(|t| t.logits.iter().copied()).collect()
}

/// Prediction of a single model or an ensemble on one input.
#[derive(Debug, Clone)]
pub struct Assessment<T> {
    pub traces: Vec<ForwardTrace<T>>,
    /// Per-class median of member probabilities.
    pub probs: Array1<T>,
    pub predicted_class: usize,
    /// Concatenated member logits.
    pub representation: Array1<T>,
}

/// Anything that classifies streams through one or more [`ModelInstance`]s.
pub trait Classifier<T: Scalar>: Sync {
    fn members(&self) -> &[ModelInstance<T>];

    fn assess(&self, streams: &Streams<T>) -> Result<Assessment<T>, ModelError> {
        let members = self.members();
        if members.is_empty() {
            return Err(ModelError::EmptyEnsemble);
        }
        let traces = members
            .iter()
            .map(|m| m.forward(streams))
            .collect::<Result<Vec<_>, _>>()?;
        let probs: Array1<T> = (0..N_CLASSES)
            .map(|c| {
                let column: Vec<T> = traces.iter().map(|t| t.probs[c]).collect();
                median(&column).expect("nonempty")
            })
            .collect();
        let predicted_class = argmax(probs.as_slice().unwrap());
        let representation = ensemble_representation(&traces);
        Ok(Assessment {
            traces,
            probs,
            predicted_class,
            representation,
        })
    }

    /// Per-class median probabilities without traces; equal to
    /// `assess(streams)?.probs`.
    fn predict(&self, streams: &Streams<T>) -> Result<Array1<T>, ModelError> {
        let members = self.members();
        if members.is_empty() {
            return Err(ModelError::EmptyEnsemble);
        }
        let probs = members
            .iter()
            .map(|m| m.logits(streams).map(|l| softmax(&l)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((0..N_CLASSES)
            .map(|c| {
                let column: Vec<T> = probs.iter().map(|p| p[c]).collect();
                median(&column).expect("nonempty")
            })
            .collect())
    }
}

impl<T: Scalar> Classifier<T> for ModelInstance<T> {
    fn members(&self) -> &[ModelInstance<T>] {
        std::slice::from_ref(self)
    }
}

impl<T: Scalar> Classifier<T> for Ensemble<T> {
    fn members(&self) -> &[ModelInstance<T>] {
        &self.members
    }
}
