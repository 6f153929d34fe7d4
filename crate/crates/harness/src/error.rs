use std::path::Path;

use skelxai::metrics::MetricsError;
use skelxai::model::ModelError;
use skelxai::perturb::PerturbError;
use skelxai::skeleton::SkeletonError;
use skelxai::stats::StatsError;
use skelxai::synth::SynthError;
use thiserror::Error;

/// Failure classes, one per process exit code.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Data(_) => 3,
            HarnessError::Numeric(_) => 4,
        }
    }

    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        HarnessError::Data(format!("{}: {e}", path.display()))
    }

    pub fn missing(path: &Path) -> Self {
        HarnessError::Data(format!("missing input {}", path.display()))
    }
}

impl From<SkeletonError> for HarnessError {
    fn from(e: SkeletonError) -> Self {
        match e {
            SkeletonError::InvalidRegistry(_) => HarnessError::Config(e.to_string()),
            _ => HarnessError::Data(e.to_string()),
        }
    }
}

impl From<SynthError> for HarnessError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::InvalidConfig(_) => HarnessError::Config(e.to_string()),
            SynthError::Skeleton(e) => e.into(),
        }
    }
}

impl From<ModelError> for HarnessError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::InvalidConfig(_) => HarnessError::Config(e.to_string()),
            ModelError::DivergedLoss { .. } => HarnessError::Numeric(e.to_string()),
            _ => HarnessError::Data(e.to_string()),
        }
    }
}

impl From<PerturbError> for HarnessError {
    fn from(e: PerturbError) -> Self {
        match e {
            PerturbError::InvalidSpec(_) => HarnessError::Config(e.to_string()),
            PerturbError::NonPositiveHeight(_) => HarnessError::Numeric(e.to_string()),
            PerturbError::RankingMismatch { .. } => HarnessError::Data(e.to_string()),
        }
    }
}

impl From<MetricsError> for HarnessError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::InvalidConfig(_) => HarnessError::Config(e.to_string()),
            MetricsError::Model(e) => e.into(),
            MetricsError::Perturb(e) => e.into(),
            _ => HarnessError::Data(e.to_string()),
        }
    }
}

impl From<StatsError> for HarnessError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::InsufficientSamples { .. } => HarnessError::Data(e.to_string()),
            StatsError::NonFinite => HarnessError::Numeric(e.to_string()),
        }
    }
}
