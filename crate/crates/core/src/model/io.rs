//! JSON documents for model weights.

use std::path::Path;

use ndarray::{ArrayD, IxDyn};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Adjacency, InputNorm, MiniGcnConfig, ModelError, ModelInstance, Params, INPUT_CHANNELS, N_CLASSES};
use crate::Scalar;

pub const MODEL_FORMAT_VERSION: &str = "skelxai-model/1";

/// A tensor stored as nested JSON arrays with its shape spelled out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDocument {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format_version: String,
    pub config: MiniGcnConfig,
    pub n_classes: usize,
    pub adjacency: TensorDocument,
    pub input_shift: TensorDocument,
    pub input_scale: TensorDocument,
    pub params: Vec<TensorDocument>,
}

fn nest<T: Scalar>(shape: &[usize], flat: &[T]) -> Value {
    match shape {
        [] => Value::from(flat[0].as_f64()),
        [n] => Value::Array(flat[..*n].iter().map(|v| Value::from(v.as_f64())).collect()),
        [n, rest @ ..] => {
            let stride: usize = rest.iter().product();
            Value::Array((0..*n).map(|i| nest(rest, &flat[i * stride..(i + 1) * stride])).collect())
        }
    }
}

fn unnest<T: Scalar>(value: &Value, shape: &[usize], out: &mut Vec<T>, name: &str) -> Result<(), ModelError> {
    let bad = || ModelError::Format(format!("tensor {name} does not match its declared shape"));
    match shape {
        [] => {
            let x = value.as_f64().ok_or_else(bad)?;
            out.push(T::of(x));
        }
        [n, rest @ ..] => {
            let items = value.as_array().ok_or_else(bad)?;
            if items.len() != *n {
                return Err(bad());
            }
            for item in items {
                unnest(item, rest, out, name)?;
            }
        }
    }
    Ok(())
}

fn tensor_doc<T: Scalar>(name: String, shape: &[usize], flat: &[T]) -> TensorDocument {
    TensorDocument {
        name,
        shape: shape.to_vec(),
        data: nest(shape, flat),
    }
}

fn read_tensor<T: Scalar>(doc: &TensorDocument, name: &str, shape: &[usize]) -> Result<ArrayD<T>, ModelError> {
    if doc.name != name || doc.shape != shape {
        return Err(ModelError::Format(format!(
            "expected tensor {name} with shape {shape:?}, found {} with shape {:?}",
            doc.name, doc.shape
        )));
    }
    let mut flat: Vec<T> = Vec::with_capacity(shape.iter().product());
    unnest(&doc.data, shape, &mut flat, name)?;
    if flat.iter().any(|v| !v.is_finite()) {
        return Err(ModelError::Format(format!("tensor {name} holds non-finite values")));
    }
    Ok(ArrayD::from_shape_vec(IxDyn(shape), flat).expect("length checked by unnest"))
}

/// Parameter tensor names in serialization order.
fn tensor_names<T: Scalar>(params: &Params<T>) -> Vec<(String, Vec<usize>)> {
    let mut out = vec![("input.gain".to_string(), params.input_gain.shape().to_vec())];
    let mut push_block = |prefix: String, b: &super::Block<T>| {
        out.push((format!("{prefix}.graph_weight"), b.graph_weight.shape().to_vec()));
        out.push((format!("{prefix}.temporal_weight"), b.temporal_weight.shape().to_vec()));
        out.push((format!("{prefix}.bias"), b.bias.shape().to_vec()));
    };
    for (s, blocks) in params.branches.iter().enumerate() {
        for (j, b) in blocks.iter().enumerate() {
            push_block(format!("branch{s}.block{j}"), b);
        }
    }
    for (j, b) in params.main.iter().enumerate() {
        push_block(format!("main.block{j}"), b);
    }
    out.push(("fc.weight".into(), params.fc_weight.shape().to_vec()));
    out.push(("fc.bias".into(), params.fc_bias.shape().to_vec()));
    out
}

impl<T: Scalar> ModelInstance<T> {
    pub fn to_document(&self) -> ModelDocument {
        let names = tensor_names(&self.params);
        let mut tensors = Vec::with_capacity(names.len());
        let mut it = names.into_iter();
        self.params.for_each_tensor(|flat| {
            let (name, shape) = it.next().expect("one name per tensor");
            tensors.push(tensor_doc(name, &shape, flat));
        });
        let adj = self.adjacency.dense();
        ModelDocument {
            format_version: MODEL_FORMAT_VERSION.to_string(),
            config: self.config.clone(),
            n_classes: N_CLASSES,
            adjacency: tensor_doc("adjacency".into(), adj.shape(), adj.as_slice().unwrap()),
            input_shift: tensor_doc(
                "input.shift".into(),
                self.input_norm.shift.shape(),
                self.input_norm.shift.as_slice().unwrap(),
            ),
            input_scale: tensor_doc("input.scale".into(), &[INPUT_CHANNELS], self.input_norm.scale.as_slice().unwrap()),
            params: tensors,
        }
    }

    pub fn from_document(doc: &ModelDocument) -> Result<Self, ModelError> {
        if doc.format_version != MODEL_FORMAT_VERSION {
            return Err(ModelError::Format(format!("unsupported format version {}", doc.format_version)));
        }
        if doc.n_classes != N_CLASSES {
            return Err(ModelError::Format(format!("expected {N_CLASSES} classes, found {}", doc.n_classes)));
        }
        doc.config.validate()?;
        let joints = doc.adjacency.shape.first().copied().unwrap_or(0);
        let adj = read_tensor::<T>(&doc.adjacency, "adjacency", &[joints, joints])?;
        let adjacency = Adjacency::from_dense(adj.into_dimensionality().expect("2-d"));
        let shift = read_tensor::<T>(&doc.input_shift, "input.shift", &[INPUT_CHANNELS, joints])?;
        let scale = read_tensor::<T>(&doc.input_scale, "input.scale", &[INPUT_CHANNELS])?;
        if scale.iter().any(|&s| !(s > T::zero())) {
            return Err(ModelError::Format("input scales must be positive".into()));
        }
        let input_norm = InputNorm {
            shift: shift.into_dimensionality().expect("2-d"),
            scale: scale.into_dimensionality().expect("1-d"),
        };
        let mut params = Params::<T>::zeros(&doc.config, joints);
        let names = tensor_names(&params);
        if names.len() != doc.params.len() {
            return Err(ModelError::Format(format!(
                "expected {} parameter tensors, found {}",
                names.len(),
                doc.params.len()
            )));
        }
        let mut loaded = Vec::with_capacity(names.len());
        for ((name, shape), t) in names.iter().zip(&doc.params) {
            loaded.push(read_tensor::<T>(t, name, shape)?);
        }
        let mut it = loaded.into_iter();
        params.for_each_tensor_mut(|dst| {
            let src = it.next().expect("one tensor per slot");
            dst.copy_from_slice(src.as_slice().expect("standard layout"));
        });
        Ok(Self {
            config: doc.config.clone(),
            adjacency,
            input_norm,
            params,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("model document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: ModelDocument = serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        std::fs::write(path, self.to_json()).map_err(|e| ModelError::Format(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ModelError::Format(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
