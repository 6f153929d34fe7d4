//! Skeleton sequences, the joint/bone graph, windowing and the three model
//! input streams (position, velocity, bone).

use std::collections::VecDeque;
use std::path::Path;

use ndarray::{s, Array3, ArrayView3};
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::median;
use crate::{seed, Scalar};

#[derive(Debug, Error)]
pub enum SkeletonError {
    #[error("invalid joint registry: {0}")]
    InvalidRegistry(String),
    #[error("invalid sequence {id}: {reason}")]
    InvalidSequence { id: String, reason: String },
    #[error("sequence {id} too short: {frames} frames, need at least {needed}")]
    SequenceTooShort {
        id: String,
        frames: usize,
        needed: usize,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {reason}")]
    Parse { path: String, reason: String },
}

/// Names of the default 19-joint infant layout, in canonical order.
pub const DEFAULT_JOINTS: [&str; 19] = [
    "head",
    "nose",
    "right_eye",
    "left_eye",
    "upper_neck",
    "thorax",
    "right_shoulder",
    "right_elbow",
    "right_wrist",
    "left_shoulder",
    "left_elbow",
    "left_wrist",
    "pelvis",
    "right_hip",
    "right_knee",
    "right_ankle",
    "left_hip",
    "left_knee",
    "left_ankle",
];

const DEFAULT_BONES: [(&str, &str); 18] = [
    ("pelvis", "thorax"),
    ("thorax", "upper_neck"),
    ("upper_neck", "head"),
    ("head", "nose"),
    ("nose", "right_eye"),
    ("nose", "left_eye"),
    ("thorax", "right_shoulder"),
    ("right_shoulder", "right_elbow"),
    ("right_elbow", "right_wrist"),
    ("thorax", "left_shoulder"),
    ("left_shoulder", "left_elbow"),
    ("left_elbow", "left_wrist"),
    ("pelvis", "right_hip"),
    ("right_hip", "right_knee"),
    ("right_knee", "right_ankle"),
    ("pelvis", "left_hip"),
    ("left_hip", "left_knee"),
    ("left_knee", "left_ankle"),
];

/// Ordered joint names plus a rooted bone tree.
///
/// Bones are `(parent, child)` index pairs. Every joint except the root has
/// exactly one parent, so the bone stream can attach one length to each joint.
#[derive(Debug, Clone, PartialEq)]
pub struct JointRegistry {
    names: Vec<String>,
    bones: Vec<(usize, usize)>,
    parents: Vec<Option<usize>>,
    center: Vec<usize>,
    head: usize,
    left_ankle: usize,
}

/// On-disk form of a registry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegistryDocument {
    pub names: Vec<String>,
    /// `[parent, child]` name pairs.
    pub bones: Vec<[String; 2]>,
    /// Joints whose mean position centers the position stream; defaults to the root.
    #[serde(default)]
    pub center: Vec<String>,
}

impl JointRegistry {
    pub fn new(
        names: Vec<String>,
        bones: Vec<(usize, usize)>,
        center: Vec<usize>,
    ) -> Result<Self, SkeletonError> {
        let n = names.len();
        let bad = |m: String| SkeletonError::InvalidRegistry(m);
        if n == 0 {
            return Err(bad("no joints".into()));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(bad(format!("duplicate joint name {a:?}")));
            }
        }
        if bones.len() + 1 != n {
            return Err(bad(format!(
                "a tree over {n} joints needs {} bones, got {}",
                n - 1,
                bones.len()
            )));
        }
        let mut parents = vec![None; n];
        for &(p, c) in &bones {
            if p >= n || c >= n {
                return Err(bad(format!("bone ({p}, {c}) out of range for {n} joints")));
            }
            if p == c {
                return Err(bad(format!("self-loop at joint {p}")));
            }
            if parents[c].is_some() {
                return Err(bad(format!("joint {c} has more than one parent")));
            }
            parents[c] = Some(p);
        }
        // n - 1 edges with unique parents leave exactly one root; connectivity
        // from that root then implies acyclicity.
        let root = parents
            .iter()
            .position(Option::is_none)
            .ok_or_else(|| bad("bone graph has no root".into()))?;
        let mut children = vec![Vec::new(); n];
        for &(p, c) in &bones {
            children[p].push(c);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &c in &children[v] {
                if !seen[c] {
                    seen[c] = true;
                    queue.push_back(c);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(bad("bone graph is not connected".into()));
        }
        let find = |label: &str| {
            names
                .iter()
                .position(|x| x == label)
                .ok_or_else(|| bad(format!("registry must contain {label:?}")))
        };
        let head = find("head")?;
        let left_ankle = find("left_ankle")?;
        let center = if center.is_empty() { vec![root] } else { center };
        if center.iter().any(|&c| c >= n) {
            return Err(bad("center joint out of range".into()));
        }
        Ok(Self {
            names,
            bones,
            parents,
            center,
            head,
            left_ankle,
        })
    }

    /// The 19-joint infant layout rooted at the pelvis.
    pub fn default_infant() -> Self {
        let names: Vec<String> = DEFAULT_JOINTS.iter().map(|s| s.to_string()).collect();
        let idx = |n: &str| DEFAULT_JOINTS.iter().position(|x| *x == n).unwrap();
        let bones = DEFAULT_BONES.iter().map(|(p, c)| (idx(p), idx(c))).collect();
        let center = vec![idx("pelvis"), idx("right_hip"), idx("left_hip")];
        Self::new(names, bones, center).expect("default registry is valid")
    }

    pub fn from_document(doc: &RegistryDocument) -> Result<Self, SkeletonError> {
        let lookup = |n: &String| {
            doc.names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| SkeletonError::InvalidRegistry(format!("unknown joint {n:?}")))
        };
        let bones = doc
            .bones
            .iter()
            .map(|[p, c]| Ok((lookup(p)?, lookup(c)?)))
            .collect::<Result<Vec<_>, SkeletonError>>()?;
        let center = doc.center.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
        Self::new(doc.names.clone(), bones, center)
    }

    pub fn to_document(&self) -> RegistryDocument {
        RegistryDocument {
            names: self.names.clone(),
            bones: self
                .bones
                .iter()
                .map(|&(p, c)| [self.names[p].clone(), self.names[c].clone()])
                .collect(),
            center: self.center.iter().map(|&c| self.names[c].clone()).collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, SkeletonError> {
        let text = read_to_string(path)?;
        let doc: RegistryDocument = serde_json::from_str(&text).map_err(|e| SkeletonError::Parse {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_document(&doc)
    }

    pub fn count(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn bones(&self) -> &[(usize, usize)] {
        &self.bones
    }
    pub fn parent(&self, joint: usize) -> Option<usize> {
        self.parents[joint]
    }
    pub fn root(&self) -> usize {
        self.parents.iter().position(Option::is_none).unwrap()
    }
    pub fn center_joints(&self) -> &[usize] {
        &self.center
    }
    pub fn head(&self) -> usize {
        self.head
    }
    pub fn left_ankle(&self) -> usize {
        self.left_ankle
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Returns the same skeleton with joints relabelled so that old joint `j`
    /// becomes new joint `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, SkeletonError> {
        let n = self.count();
        let mut names = vec![String::new(); n];
        for (old, &new) in perm.iter().enumerate() {
            names[new] = self.names[old].clone();
        }
        let bones = self.bones.iter().map(|&(p, c)| (perm[p], perm[c])).collect();
        let center = self.center.iter().map(|&c| perm[c]).collect();
        Self::new(names, bones, center)
    }
}

/// A fixed-rate 2D joint-coordinate series in pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonSequence<T> {
    pub id: String,
    pub fps: f64,
    /// 0 = no CP, 1 = CP.
    pub label: usize,
    /// Shape `(frames, joints, 2)`.
    pub coords: Array3<T>,
}

impl<T: Scalar> SkeletonSequence<T> {
    pub fn new(
        id: impl Into<String>,
        fps: f64,
        label: usize,
        coords: Array3<T>,
        registry: &JointRegistry,
    ) -> Result<Self, SkeletonError> {
        let seq = Self {
            id: id.into(),
            fps,
            label,
            coords,
        };
        seq.validate(registry)?;
        Ok(seq)
    }

    pub fn validate(&self, registry: &JointRegistry) -> Result<(), SkeletonError> {
        let fail = |reason: String| {
            Err(SkeletonError::InvalidSequence {
                id: self.id.clone(),
                reason,
            })
        };
        let (frames, joints, dims) = self.coords.dim();
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return fail(format!("fps must be positive, got {}", self.fps));
        }
        if frames < 2 {
            return fail(format!("needs at least 2 frames, got {frames}"));
        }
        if joints != registry.count() || dims != 2 {
            return fail(format!(
                "coords shape ({frames}, {joints}, {dims}) does not match {} joints x 2",
                registry.count()
            ));
        }
        if self.label > 1 {
            return fail(format!("label must be 0 or 1, got {}", self.label));
        }
        if self.coords.iter().any(|v| !v.is_finite()) {
            return fail("non-finite coordinate".into());
        }
        Ok(())
    }

    pub fn frames(&self) -> usize {
        self.coords.dim().0
    }
}

/// A contiguous slice `[start_frame, end_frame)` of one sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Window<T> {
    pub source_id: String,
    pub start_frame: usize,
    pub end_frame: usize,
    /// Shape `(win_frames, joints, 2)`.
    pub coords: Array3<T>,
}

impl<T: Scalar> Window<T> {
    /// Stable identifier `"<source>@<start>"`.
    pub fn id(&self) -> String {
        format!("{}@{}", self.source_id, self.start_frame)
    }

    pub fn frames(&self) -> usize {
        self.coords.dim().0
    }

    pub fn joints(&self) -> usize {
        self.coords.dim().1
    }

    /// Same window with replacement coordinates (used by perturbation).
    pub fn with_coords(&self, coords: Array3<T>) -> Self {
        debug_assert_eq!(coords.dim(), self.coords.dim());
        Self {
            source_id: self.source_id.clone(),
            start_frame: self.start_frame,
            end_frame: self.end_frame,
            coords,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WindowPolicy {
    pub window_seconds: f64,
    /// Frames skipped at each end; `None` means one window length.
    pub guard_frames: Option<usize>,
    pub max_per_sequence: Option<usize>,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        Self {
            window_seconds: 5.0,
            guard_frames: None,
            max_per_sequence: None,
        }
    }
}

impl WindowPolicy {
    pub fn window_frames(&self, fps: f64) -> usize {
        (self.window_seconds * fps).round() as usize
    }
}

/// Picks non-overlapping windows from the guarded middle of a sequence.
///
/// The usable region is tiled into `floor(usable / win)` slots after a random
/// start offset inside the slack; a random subset of at most
/// `max_per_sequence` slots is returned in temporal order.
pub fn extract_windows<T: Scalar>(
    seq: &SkeletonSequence<T>,
    policy: &WindowPolicy,
    rng_seed: u64,
) -> Result<Vec<Window<T>>, SkeletonError> {
    let win = policy.window_frames(seq.fps).max(1);
    let guard = policy.guard_frames.unwrap_or(win);
    let frames = seq.frames();
    let needed = 2 * guard + win;
    if frames < needed {
        return Err(SkeletonError::SequenceTooShort {
            id: seq.id.clone(),
            frames,
            needed,
        });
    }
    let usable = frames - 2 * guard;
    let slots = usable / win;
    let take = policy.max_per_sequence.map_or(slots, |m| m.min(slots));
    let mut rng = seed::rng(seed::key(&[rng_seed, seed::hash_str(&seq.id)]));
    let slack = usable - slots * win;
    let offset = rng.gen_range(0..=slack);
    let mut chosen = index::sample(&mut rng, slots, take).into_vec();
    chosen.sort_unstable();
    Ok(chosen
        .into_iter()
        .map(|slot| {
            let start = guard + offset + slot * win;
            Window {
                source_id: seq.id.clone(),
                start_frame: start,
                end_frame: start + win,
                coords: seq.coords.slice(s![start..start + win, .., ..]).to_owned(),
            }
        })
        .collect())
}

/// Median over frames of the head to left-ankle distance.
pub fn median_height<T: Scalar>(coords: ArrayView3<'_, T>, registry: &JointRegistry) -> T {
    let (h, a) = (registry.head(), registry.left_ankle());
    let per_frame: Vec<T> = (0..coords.dim().0)
        .map(|t| {
            let dx = coords[[t, h, 0]] - coords[[t, a, 0]];
            let dy = coords[[t, h, 1]] - coords[[t, a, 1]];
            dx.hypot(dy)
        })
        .collect();
    median(&per_frame).unwrap_or_else(T::zero)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StreamKind {
    Position,
    Velocity,
    Bone,
}

impl StreamKind {
    pub const ALL: [StreamKind; 3] = [StreamKind::Position, StreamKind::Velocity, StreamKind::Bone];

    pub fn channels(self) -> usize {
        match self {
            StreamKind::Position | StreamKind::Velocity => 2,
            StreamKind::Bone => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreamTensor<T> {
    pub kind: StreamKind,
    /// Shape `(channels, win_frames, joints)`.
    pub data: Array3<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Streams<T> {
    pub position: StreamTensor<T>,
    pub velocity: StreamTensor<T>,
    pub bone: StreamTensor<T>,
}

impl<T> Streams<T> {
    pub fn get(&self, kind: StreamKind) -> &StreamTensor<T> {
        match kind {
            StreamKind::Position => &self.position,
            StreamKind::Velocity => &self.velocity,
            StreamKind::Bone => &self.bone,
        }
    }

    pub fn get_mut(&mut self, kind: StreamKind) -> &mut StreamTensor<T> {
        match kind {
            StreamKind::Position => &mut self.position,
            StreamKind::Velocity => &mut self.velocity,
            StreamKind::Bone => &mut self.bone,
        }
    }
}

/// Coordinate normalization applied before the model sees a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preprocess {
    /// Pixels as-is.
    Raw,
    /// Subtract the window-mean of the registry's center joints, divide by the
    /// window's median height.
    #[default]
    CenterScale,
}

/// Parameters of the affine map applied to the position stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization<T> {
    pub center: [T; 2],
    pub scale: T,
}

impl<T: Scalar> Normalization<T> {
    pub fn identity() -> Self {
        Self {
            center: [T::zero(); 2],
            scale: T::one(),
        }
    }

    pub fn fit(coords: ArrayView3<'_, T>, registry: &JointRegistry, mode: Preprocess) -> Self {
        match mode {
            Preprocess::Raw => Self::identity(),
            Preprocess::CenterScale => {
                let frames = coords.dim().0;
                let centers = registry.center_joints();
                let denom = T::of_usize(frames * centers.len());
                let mut center = [T::zero(); 2];
                for (d, c) in center.iter_mut().enumerate() {
                    let mut acc = T::zero();
                    for t in 0..frames {
                        for &j in centers {
                            acc += coords[[t, j, d]];
                        }
                    }
                    *c = acc / denom;
                }
                let h = median_height(coords, registry);
                let scale = if h > T::zero() && h.is_finite() { h } else { T::one() };
                Self { center, scale }
            }
        }
    }
}

/// Builds the position, velocity and bone streams for one window.
///
/// Velocity is the forward frame difference of the position stream with the
/// last difference repeated, so all streams share `win_frames`. The bone
/// stream holds, per joint, the length of the bone from its parent (0 at the
/// root).
pub fn derive_streams<T: Scalar>(
    window: &Window<T>,
    registry: &JointRegistry,
    mode: Preprocess,
) -> (Streams<T>, Normalization<T>) {
    let norm = Normalization::fit(window.coords.view(), registry, mode);
    let (frames, joints, _) = window.coords.dim();
    let mut pos = Array3::zeros((2, frames, joints));
    for t in 0..frames {
        for v in 0..joints {
            for d in 0..2 {
                pos[[d, t, v]] = (window.coords[[t, v, d]] - norm.center[d]) / norm.scale;
            }
        }
    }
    let mut vel = Array3::zeros((2, frames, joints));
    if frames >= 2 {
        for d in 0..2 {
            for t in 0..frames - 1 {
                for v in 0..joints {
                    vel[[d, t, v]] = pos[[d, t + 1, v]] - pos[[d, t, v]];
                }
            }
            for v in 0..joints {
                vel[[d, frames - 1, v]] = vel[[d, frames - 2, v]];
            }
        }
    }
    let mut bone = Array3::zeros((1, frames, joints));
    for v in 0..joints {
        if let Some(p) = registry.parent(v) {
            for t in 0..frames {
                let dx = pos[[0, t, v]] - pos[[0, t, p]];
                let dy = pos[[1, t, v]] - pos[[1, t, p]];
                bone[[0, t, v]] = dx.hypot(dy);
            }
        }
    }
    (
        Streams {
            position: StreamTensor {
                kind: StreamKind::Position,
                data: pos,
            },
            velocity: StreamTensor {
                kind: StreamKind::Velocity,
                data: vel,
            },
            bone: StreamTensor {
                kind: StreamKind::Bone,
                data: bone,
            },
        },
        norm,
    )
}

/// Inverts the position stream back to pixel coordinates `(frames, joints, 2)`.
pub fn reconstruct_coords<T: Scalar>(position: &StreamTensor<T>, norm: &Normalization<T>) -> Array3<T> {
    let (_, frames, joints) = position.data.dim();
    Array3::from_shape_fn((frames, joints, 2), |(t, v, d)| {
        position.data[[d, t, v]] * norm.scale + norm.center[d]
    })
}

/// One sequence in the JSON ingestion format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceDocument<T> {
    pub id: String,
    pub fps: f64,
    pub label: usize,
    pub joints: Vec<String>,
    /// `frames[t][v] = [x, y]`.
    pub frames: Vec<Vec<[T; 2]>>,
}

/// Sidecar metadata for the CSV ingestion format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceMetadata {
    pub id: String,
    pub fps: f64,
    pub label: usize,
    pub joints: Vec<String>,
}

fn read_to_string(path: &Path) -> Result<String, SkeletonError> {
    std::fs::read_to_string(path).map_err(|source| SkeletonError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Maps a file's joint order onto the registry's canonical order.
fn joint_mapping(file_joints: &[String], registry: &JointRegistry, id: &str) -> Result<Vec<usize>, SkeletonError> {
    if file_joints.len() != registry.count() {
        return Err(SkeletonError::InvalidSequence {
            id: id.to_string(),
            reason: format!(
                "file lists {} joints, registry has {}",
                file_joints.len(),
                registry.count()
            ),
        });
    }
    file_joints
        .iter()
        .map(|name| {
            registry.index_of(name).ok_or_else(|| SkeletonError::InvalidSequence {
                id: id.to_string(),
                reason: format!("joint {name:?} not in registry"),
            })
        })
        .collect()
}

impl<T: Scalar> SkeletonSequence<T> {
    pub fn from_document(doc: SequenceDocument<T>, registry: &JointRegistry) -> Result<Self, SkeletonError> {
        let map = joint_mapping(&doc.joints, registry, &doc.id)?;
        let frames = doc.frames.len();
        let mut coords = Array3::zeros((frames, registry.count(), 2));
        for (t, frame) in doc.frames.iter().enumerate() {
            if frame.len() != map.len() {
                return Err(SkeletonError::InvalidSequence {
                    id: doc.id.clone(),
                    reason: format!("frame {t} has {} joints", frame.len()),
                });
            }
            for (file_j, xy) in frame.iter().enumerate() {
                coords[[t, map[file_j], 0]] = xy[0];
                coords[[t, map[file_j], 1]] = xy[1];
            }
        }
        Self::new(doc.id, doc.fps, doc.label, coords, registry)
    }

    pub fn to_document(&self, registry: &JointRegistry) -> SequenceDocument<T> {
        let (frames, joints, _) = self.coords.dim();
        SequenceDocument {
            id: self.id.clone(),
            fps: self.fps,
            label: self.label,
            joints: registry.names().to_vec(),
            frames: (0..frames)
                .map(|t| (0..joints).map(|v| [self.coords[[t, v, 0]], self.coords[[t, v, 1]]]).collect())
                .collect(),
        }
    }

    pub fn load_json(path: &Path, registry: &JointRegistry) -> Result<Self, SkeletonError> {
        let text = read_to_string(path)?;
        let doc: SequenceDocument<T> = serde_json::from_str(&text).map_err(|e| SkeletonError::Parse {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_document(doc, registry)
    }

    pub fn save_json(&self, path: &Path, registry: &JointRegistry) -> Result<(), SkeletonError> {
        let text = serde_json::to_string(&self.to_document(registry)).expect("sequence serializes");
        std::fs::write(path, text).map_err(|source| SkeletonError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Loads `frame,joint,x,y` rows; `joint` may be a name or a file-order index.
    pub fn load_csv(csv_path: &Path, meta_path: &Path, registry: &JointRegistry) -> Result<Self, SkeletonError> {
        let meta: SequenceMetadata =
            serde_json::from_str(&read_to_string(meta_path)?).map_err(|e| SkeletonError::Parse {
                path: meta_path.display().to_string(),
                reason: e.to_string(),
            })?;
        let map = joint_mapping(&meta.joints, registry, &meta.id)?;
        let parse_err = |reason: String| SkeletonError::Parse {
            path: csv_path.display().to_string(),
            reason,
        };
        let mut reader = csv::Reader::from_path(csv_path).map_err(|e| parse_err(e.to_string()))?;
        let mut rows: Vec<(usize, usize, T, T)> = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| parse_err(e.to_string()))?;
            if record.len() != 4 {
                return Err(parse_err(format!("expected 4 columns, got {}", record.len())));
            }
            let frame: usize = record[0].trim().parse().map_err(|_| parse_err(format!("bad frame {:?}", &record[0])))?;
            let joint_field = record[1].trim();
            let file_j = match joint_field.parse::<usize>() {
                Ok(i) if i < map.len() => i,
                Ok(i) => return Err(parse_err(format!("joint index {i} out of range"))),
                Err(_) => meta
                    .joints
                    .iter()
                    .position(|n| n == joint_field)
                    .ok_or_else(|| parse_err(format!("unknown joint {joint_field:?}")))?,
            };
            let x: f64 = record[2].trim().parse().map_err(|_| parse_err(format!("bad x {:?}", &record[2])))?;
            let y: f64 = record[3].trim().parse().map_err(|_| parse_err(format!("bad y {:?}", &record[3])))?;
            rows.push((frame, map[file_j], T::of(x), T::of(y)));
        }
        let frames = rows.iter().map(|r| r.0 + 1).max().unwrap_or(0);
        let mut coords = Array3::from_elem((frames, registry.count(), 2), T::nan());
        for (t, v, x, y) in rows {
            coords[[t, v, 0]] = x;
            coords[[t, v, 1]] = y;
        }
        Self::new(meta.id, meta.fps, meta.label, coords, registry)
    }
}
