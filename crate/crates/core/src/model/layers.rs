//! Graph-convolution blocks with hand-written backward passes.
//!
//! A block maps `(c_in, frames, joints)` to `(c_out, frames, joints)`:
//! channel mixing, aggregation over the normalized joint adjacency, a
//! same-length temporal convolution with bias, then the nonlinearity.
//! The kernels are plain slice loops: channel counts are single digits, where
//! packed matrix products spend most of their time packing.

use ndarray::{Array1, Array2, Array3, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::skeleton::JointRegistry;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nonlinearity {
    Relu,
    Swish,
}

impl Nonlinearity {
    #[inline]
    pub fn apply<T: Scalar>(self, x: T) -> T {
        match self {
            Nonlinearity::Relu => x.max(T::zero()),
            Nonlinearity::Swish => x / (T::one() + (-x).exp()),
        }
    }

    #[inline]
    pub fn derivative<T: Scalar>(self, x: T) -> T {
        match self {
            Nonlinearity::Relu => {
                if x > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Nonlinearity::Swish => {
                let s = T::one() / (T::one() + (-x).exp());
                s + x * s * (T::one() - s)
            }
        }
    }
}

/// Joint adjacency, stored dense (for I/O) and as per-row and per-column
/// nonzeros for the compute.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjacency<T> {
    dense: Array2<T>,
    rows: Vec<Vec<(usize, T)>>,
    cols: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> Adjacency<T> {
    pub fn from_dense(dense: Array2<T>) -> Self {
        let nonzeros = |a: ArrayView2<'_, T>| -> Vec<Vec<(usize, T)>> {
            a.outer_iter()
                .map(|r| r.iter().enumerate().filter(|(_, &x)| x != T::zero()).map(|(u, &x)| (u, x)).collect())
                .collect()
        };
        let rows = nonzeros(dense.view());
        let cols = nonzeros(dense.t());
        Self { dense, rows, cols }
    }

    /// `D^{-1/2} (A + I) D^{-1/2}` over the undirected bone graph.
    pub fn normalized(registry: &JointRegistry) -> Self {
        let n = registry.count();
        let mut a = Array2::<T>::eye(n);
        for &(p, c) in registry.bones() {
            a[[p, c]] = T::one();
            a[[c, p]] = T::one();
        }
        let deg: Vec<T> = (0..n).map(|v| a.row(v).iter().copied().sum::<T>()).collect();
        let dense = Array2::from_shape_fn((n, n), |(v, u)| a[[v, u]] / (deg[v] * deg[u]).sqrt());
        Self::from_dense(dense)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_dense(Array2::eye(n))
    }

    pub fn dense(&self) -> &Array2<T> {
        &self.dense
    }

    pub fn joints(&self) -> usize {
        self.dense.nrows()
    }

    /// `out[r, v] = sum_u A[v, u] x[r, u]` for every row `r` of joints.
    #[inline(always)]
    fn aggregate(&self, x: &[T], out: &mut [T]) {
        spread(&self.rows, x, out);
    }

    /// `out[r, u] = sum_v A[v, u] x[r, v]`.
    #[inline(always)]
    fn aggregate_transposed(&self, x: &[T], out: &mut [T]) {
        spread(&self.cols, x, out);
    }
}

#[inline(always)]
fn spread<T: Scalar>(lists: &[Vec<(usize, T)>], x: &[T], out: &mut [T]) {
    let n = lists.len();
    for (src, dst) in x.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
        for (d, list) in dst.iter_mut().zip(lists) {
            *d = list.iter().fold(T::zero(), |acc, &(u, a)| acc + a * src[u]);
        }
    }
}

#[inline(always)]
fn axpy<T: Scalar>(a: T, x: &[T], y: &mut [T]) {
    for (y, &x) in y.iter_mut().zip(x) {
        *y += a * x;
    }
}

#[inline(always)]
fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    let mut acc = [T::zero(); 4];
    let (xc, yc) = (x.chunks_exact(4), y.chunks_exact(4));
    let tail = xc.remainder().iter().zip(yc.remainder()).fold(T::zero(), |s, (&a, &b)| s + a * b);
    for (a, b) in xc.zip(yc) {
        for l in 0..4 {
            acc[l] += a[l] * b[l];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block<T> {
    /// `(c_out, c_in)` channel mixing ahead of the graph aggregation.
    pub graph_weight: Array2<T>,
    /// `(c_out, c_out, kernel)` temporal kernel.
    pub temporal_weight: Array3<T>,
    pub bias: Array1<T>,
}

/// Activations kept from a forward pass for the backward pass.
#[derive(Debug, Clone)]
pub struct BlockCache<T> {
    pub input: Array3<T>,
    pub aggregated: Array3<T>,
    pub pre_activation: Array3<T>,
}

/// Frame range `[t0, t1)` of outputs that read a valid input frame at offset `shift`.
#[inline(always)]
fn valid_frames(frames: usize, shift: isize) -> (usize, usize) {
    let t0 = (-shift).max(0) as usize;
    let t1 = (frames as isize - shift).clamp(0, frames as isize) as usize;
    (t0, t1.max(t0))
}

impl<T: Scalar> Block<T> {
    pub fn zeros(c_in: usize, c_out: usize, kernel: usize) -> Self {
        Self {
            graph_weight: Array2::zeros((c_out, c_in)),
            temporal_weight: Array3::zeros((c_out, c_out, kernel)),
            bias: Array1::zeros(c_out),
        }
    }

    pub fn c_in(&self) -> usize {
        self.graph_weight.ncols()
    }
    pub fn c_out(&self) -> usize {
        self.graph_weight.nrows()
    }
    pub fn kernel(&self) -> usize {
        self.temporal_weight.dim().2
    }

    /// Returns the aggregated activations and the pre-activations, both
    /// `(c_out, frames, joints)` flattened.
    fn linear(&self, x: &[T], frames: usize, joints: usize, adj: &Adjacency<T>) -> (Vec<T>, Vec<T>) {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports AVX2. FMA stays disabled, so the result
            // is bit-identical to the baseline build.
            return unsafe { self.linear_avx2(x, frames, joints, adj) };
        }
        self.linear_impl(x, frames, joints, adj)
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn linear_avx2(&self, x: &[T], frames: usize, joints: usize, adj: &Adjacency<T>) -> (Vec<T>, Vec<T>) {
        self.linear_impl(x, frames, joints, adj)
    }

    #[inline(always)]
    fn linear_impl(&self, x: &[T], frames: usize, joints: usize, adj: &Adjacency<T>) -> (Vec<T>, Vec<T>) {
        let (c_in, c_out) = (self.c_in(), self.c_out());
        let plane = frames * joints;

        // channel mixing
        let mut mixed = vec![T::zero(); c_out * plane];
        for (o, dst) in mixed.chunks_exact_mut(plane).enumerate() {
            for i in 0..c_in {
                axpy(self.graph_weight[[o, i]], &x[i * plane..(i + 1) * plane], dst);
            }
        }
        // graph aggregation: g[o, t, v] = sum_u A[v, u] m[o, t, u]
        let mut agg = vec![T::zero(); c_out * plane];
        adj.aggregate(&mixed, &mut agg);
        // same-length temporal convolution; output frame t reads input
        // frame t + tau - pad, zero outside the window
        let k = self.kernel();
        let pad = (k / 2) as isize;
        let mut pre = vec![T::zero(); c_out * plane];
        for (o, dst) in pre.chunks_exact_mut(plane).enumerate() {
            dst.fill(self.bias[o]);
            for i in 0..c_out {
                let src = &agg[i * plane..(i + 1) * plane];
                for tau in 0..k {
                    let shift = tau as isize - pad;
                    let (t0, t1) = valid_frames(frames, shift);
                    let s0 = (t0 as isize + shift) as usize;
                    axpy(
                        self.temporal_weight[[o, i, tau]],
                        &src[s0 * joints..(s0 + t1 - t0) * joints],
                        &mut dst[t0 * joints..t1 * joints],
                    );
                }
            }
        }
        (agg, pre)
    }

    pub fn forward(&self, input: &Array3<T>, adj: &Adjacency<T>, act: Nonlinearity) -> (Array3<T>, BlockCache<T>) {
        let (c_in, frames, joints) = input.dim();
        debug_assert_eq!(c_in, self.c_in());
        let x = input.as_standard_layout();
        let (agg, pre) = self.linear(x.as_slice().unwrap(), frames, joints, adj);
        let shape = (self.c_out(), frames, joints);
        let out = Array3::from_shape_vec(shape, pre.iter().map(|&h| act.apply(h)).collect()).unwrap();
        (
            out,
            BlockCache {
                input: input.clone(),
                aggregated: Array3::from_shape_vec(shape, agg).unwrap(),
                pre_activation: Array3::from_shape_vec(shape, pre).unwrap(),
            },
        )
    }

    /// Forward pass without keeping intermediates.
    pub fn infer(&self, input: &Array3<T>, adj: &Adjacency<T>, act: Nonlinearity) -> Array3<T> {
        let (_, frames, joints) = input.dim();
        let x = input.as_standard_layout();
        let (_, mut pre) = self.linear(x.as_slice().unwrap(), frames, joints, adj);
        pre.iter_mut().for_each(|h| *h = act.apply(*h));
        Array3::from_shape_vec((self.c_out(), frames, joints), pre).unwrap()
    }

    /// Returns the gradient with respect to the block input and accumulates
    /// parameter gradients into `grad` when given.
    pub fn backward(
        &self,
        cache: &BlockCache<T>,
        d_out: &Array3<T>,
        adj: &Adjacency<T>,
        act: Nonlinearity,
        grad: Option<&mut Block<T>>,
    ) -> Array3<T> {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: see `linear`.
            return unsafe { self.backward_avx2(cache, d_out, adj, act, grad) };
        }
        self.backward_impl(cache, d_out, adj, act, grad)
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn backward_avx2(
        &self,
        cache: &BlockCache<T>,
        d_out: &Array3<T>,
        adj: &Adjacency<T>,
        act: Nonlinearity,
        grad: Option<&mut Block<T>>,
    ) -> Array3<T> {
        self.backward_impl(cache, d_out, adj, act, grad)
    }

    #[inline(always)]
    fn backward_impl(
        &self,
        cache: &BlockCache<T>,
        d_out: &Array3<T>,
        adj: &Adjacency<T>,
        act: Nonlinearity,
        grad: Option<&mut Block<T>>,
    ) -> Array3<T> {
        let (c_in, frames, joints) = cache.input.dim();
        let c_out = self.c_out();
        let plane = frames * joints;
        let k = self.kernel();
        let pad = (k / 2) as isize;
        let x = cache.input.as_slice().unwrap();
        let agg = cache.aggregated.as_slice().unwrap();
        let h = cache.pre_activation.as_slice().unwrap();
        let dy = d_out.as_standard_layout();
        let dh: Vec<T> = dy.iter().zip(h).map(|(&d, &p)| d * act.derivative(p)).collect();

        let mut grad = grad;
        if let Some(gb) = grad.as_deref_mut() {
            for (o, row) in dh.chunks_exact(plane).enumerate() {
                gb.bias[o] += row.iter().copied().sum::<T>();
                for i in 0..c_out {
                    let src = &agg[i * plane..(i + 1) * plane];
                    for tau in 0..k {
                        let shift = tau as isize - pad;
                        let (t0, t1) = valid_frames(frames, shift);
                        let s0 = (t0 as isize + shift) as usize;
                        gb.temporal_weight[[o, i, tau]] +=
                            dot(&row[t0 * joints..t1 * joints], &src[s0 * joints..(s0 + t1 - t0) * joints]);
                    }
                }
            }
        }

        // temporal convolution
        let mut dg = vec![T::zero(); c_out * plane];
        for (o, row) in dh.chunks_exact(plane).enumerate() {
            for i in 0..c_out {
                let dst = &mut dg[i * plane..(i + 1) * plane];
                for tau in 0..k {
                    let shift = tau as isize - pad;
                    let (t0, t1) = valid_frames(frames, shift);
                    let s0 = (t0 as isize + shift) as usize;
                    axpy(
                        self.temporal_weight[[o, i, tau]],
                        &row[t0 * joints..t1 * joints],
                        &mut dst[s0 * joints..(s0 + t1 - t0) * joints],
                    );
                }
            }
        }

        // graph aggregation (transpose)
        let mut dm = vec![T::zero(); c_out * plane];
        adj.aggregate_transposed(&dg, &mut dm);

        // channel mixing
        let mut dx = vec![T::zero(); c_in * plane];
        for (o, row) in dm.chunks_exact(plane).enumerate() {
            for i in 0..c_in {
                let xi = &x[i * plane..(i + 1) * plane];
                if let Some(gb) = grad.as_deref_mut() {
                    gb.graph_weight[[o, i]] += dot(row, xi);
                }
                axpy(self.graph_weight[[o, i]], row, &mut dx[i * plane..(i + 1) * plane]);
            }
        }
        Array3::from_shape_vec((c_in, frames, joints), dx).unwrap()
    }
}
