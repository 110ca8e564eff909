//! Minimal dense-network engine.
//!
//! Layers are stored as `out × in` weight matrices and evaluated on row-major
//! batches (`batch × features`). Reverse-mode gradients are hand-written for
//! the stack; there is no general autodiff graph.

mod adam;
mod checkpoint;
mod fit;
mod loss;

pub use adam::{AdamConfig, AdamState};
pub use checkpoint::{Checkpoint, LayerRecord, CHECKPOINT_VERSION};
pub use fit::{fit_mse, FitConfig};
pub use loss::{cross_entropy_loss, mse_loss, mse_loss_batch};

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::Rng;
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Identity,
    /// Unit step at zero: `1` when the pre-activation is `>= 0`. Inference only.
    Heaviside,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Identity => z,
            Activation::Heaviside => {
                if z >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Identity => "identity",
            Activation::Heaviside => "heaviside",
        }
    }
}

/// A fully-connected layer `y = act(W x + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    weights: Array2<f64>,
    biases: Array1<f64>,
    pub activation: Activation,
}

impl DenseLayer {
    pub fn new(weights: Array2<f64>, biases: Array1<f64>, activation: Activation) -> Result<Self> {
        if weights.nrows() != biases.len() {
            return Err(Error::dim(format!(
                "weights have {} rows but bias has {} entries",
                weights.nrows(),
                biases.len()
            )));
        }
        if weights.ncols() == 0 || weights.nrows() == 0 {
            return Err(Error::dim("layer dimensions must be positive"));
        }
        Ok(Self {
            weights,
            biases,
            activation,
        })
    }

    /// Glorot-uniform weights in `±sqrt(6 / (fan_in + fan_out))`, zero biases.
    pub fn glorot<R: Rng + ?Sized>(
        input: usize,
        output: usize,
        activation: Activation,
        rng: &mut R,
    ) -> Self {
        let limit = (6.0 / (input + output) as f64).sqrt();
        let dist = Uniform::new_inclusive(-limit, limit).expect("finite glorot bounds");
        let weights = Array2::from_shape_simple_fn((output, input), || dist.sample(rng));
        Self {
            weights,
            biases: Array1::zeros(output),
            activation,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.weights.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.weights
    }

    pub fn biases(&self) -> &Array1<f64> {
        &self.biases
    }

    fn pre_activation(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        let mut z = x.dot(&self.weights.t());
        z += &self.biases;
        z
    }
}

/// Gradient of one layer's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrad {
    pub weights: Array2<f64>,
    pub biases: Array1<f64>,
}

/// Parameter gradients for a whole [`DenseNet`], in layer order.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerGrad>,
}

impl Gradients {
    pub fn zeros_like(net: &DenseNet) -> Self {
        Self {
            layers: net
                .layers
                .iter()
                .map(|l| LayerGrad {
                    weights: Array2::zeros(l.weights.raw_dim()),
                    biases: Array1::zeros(l.biases.len()),
                })
                .collect(),
        }
    }

    /// Adds `other` into `self` in layer order.
    pub fn accumulate(&mut self, other: &Gradients) {
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            a.weights += &b.weights;
            a.biases += &b.biases;
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for g in &mut self.layers {
            g.weights *= factor;
            g.biases *= factor;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.layers
            .iter()
            .all(|g| g.weights.iter().chain(g.biases.iter()).all(|&v| v == 0.0))
    }
}

/// Activations recorded by a forward pass, consumed by [`DenseNet::backward`].
#[derive(Debug, Clone)]
pub struct ForwardCache {
    inputs: Vec<Array2<f64>>,
    pre_activations: Vec<Array2<f64>>,
    version: u64,
}

impl ForwardCache {
    pub fn batch_size(&self) -> usize {
        self.inputs.first().map_or(0, |x| x.nrows())
    }
}

/// An ordered stack of dense layers.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseNet {
    layers: Vec<DenseLayer>,
    version: u64,
}

impl DenseNet {
    pub fn from_layers(layers: Vec<DenseLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::dim("a network needs at least one layer"));
        }
        for (k, pair) in layers.windows(2).enumerate() {
            if pair[0].output_dim() != pair[1].input_dim() {
                return Err(Error::dim(format!(
                    "layer {k} outputs {} values but layer {} expects {}",
                    pair[0].output_dim(),
                    k + 1,
                    pair[1].input_dim()
                )));
            }
        }
        Ok(Self { layers, version: 0 })
    }

    /// Builds a Glorot-initialised stack from `(width, activation)` pairs.
    pub fn glorot<R: Rng + ?Sized>(
        input_dim: usize,
        spec: &[(usize, Activation)],
        rng: &mut R,
    ) -> Result<Self> {
        if input_dim == 0 || spec.iter().any(|&(w, _)| w == 0) {
            return Err(Error::dim("layer widths must be positive"));
        }
        let mut fan_in = input_dim;
        let mut layers = Vec::with_capacity(spec.len());
        for &(width, act) in spec {
            layers.push(DenseLayer::glorot(fan_in, width, act, rng));
            fan_in = width;
        }
        Self::from_layers(layers)
    }

    /// Hidden layers use ReLU, the last layer is linear.
    pub fn mlp<R: Rng + ?Sized>(input_dim: usize, widths: &[usize], rng: &mut R) -> Result<Self> {
        let spec: Vec<_> = widths
            .iter()
            .enumerate()
            .map(|(k, &w)| {
                let act = if k + 1 == widths.len() {
                    Activation::Identity
                } else {
                    Activation::Relu
                };
                (w, act)
            })
            .collect();
        Self::glorot(input_dim, &spec, rng)
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].output_dim()
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn num_params(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum()
    }

    /// Parameter version; bumped on every mutation so stale caches are caught.
    pub fn version(&self) -> u64 {
        self.version
    }

    /// Mutable access to a layer's weights and biases.
    pub fn layer_params_mut(&mut self, k: usize) -> (&mut Array2<f64>, &mut Array1<f64>) {
        self.version += 1;
        let layer = &mut self.layers[k];
        (&mut layer.weights, &mut layer.biases)
    }

    pub fn set_activation(&mut self, k: usize, activation: Activation) {
        self.version += 1;
        self.layers[k].activation = activation;
    }

    pub fn is_trainable(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.activation != Activation::Heaviside)
    }

    fn check_input(&self, cols: usize) -> Result<()> {
        if cols != self.input_dim() {
            return Err(Error::dim(format!(
                "network expects {} inputs, got {cols}",
                self.input_dim()
            )));
        }
        Ok(())
    }

    /// Forward pass on a single input vector.
    pub fn forward(&self, x: ArrayView1<'_, f64>) -> Result<(Array1<f64>, ForwardCache)> {
        let batch = x.insert_axis(Axis(0));
        let (out, cache) = self.forward_batch(batch)?;
        Ok((out.index_axis_move(Axis(0), 0), cache))
    }

    /// Forward pass on a `batch × input_dim` matrix, recording activations.
    pub fn forward_batch(&self, x: ArrayView2<'_, f64>) -> Result<(Array2<f64>, ForwardCache)> {
        self.check_input(x.ncols())?;
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut pre_activations = Vec::with_capacity(self.layers.len());
        let mut current = x.to_owned();
        for layer in &self.layers {
            let z = layer.pre_activation(current.view());
            let act = layer.activation;
            let a = z.mapv(|v| act.apply(v));
            inputs.push(current);
            pre_activations.push(z);
            current = a;
        }
        Ok((
            current,
            ForwardCache {
                inputs,
                pre_activations,
                version: self.version,
            },
        ))
    }

    /// Forward pass without recording a cache.
    pub fn predict_batch(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        self.check_input(x.ncols())?;
        let mut current: Option<Array2<f64>> = None;
        for layer in &self.layers {
            let mut z = match &current {
                Some(a) => layer.pre_activation(a.view()),
                None => layer.pre_activation(x),
            };
            let act = layer.activation;
            z.mapv_inplace(|v| act.apply(v));
            current = Some(z);
        }
        Ok(current.expect("at least one layer"))
    }

    pub fn predict(&self, x: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        let out = self.predict_batch(x.insert_axis(Axis(0)))?;
        Ok(out.index_axis_move(Axis(0), 0))
    }

    /// Reverse pass: `loss_grad` is `dL/d(output)` with the batch's shape.
    /// Parameter gradients are summed over the batch.
    pub fn backward(&self, cache: &ForwardCache, loss_grad: ArrayView2<'_, f64>) -> Result<Gradients> {
        self.backward_full(cache, loss_grad).map(|(g, _)| g)
    }

    /// Like [`backward`](Self::backward) but also returns `dL/d(input)`.
    pub fn backward_full(
        &self,
        cache: &ForwardCache,
        loss_grad: ArrayView2<'_, f64>,
    ) -> Result<(Gradients, Array2<f64>)> {
        if let Some(k) = self
            .layers
            .iter()
            .position(|l| l.activation == Activation::Heaviside)
        {
            return Err(Error::HeavisideBackward { layer: k });
        }
        if cache.version != self.version || cache.inputs.len() != self.layers.len() {
            return Err(Error::StaleCache {
                cached: cache.version,
                current: self.version,
            });
        }
        let batch = cache.batch_size();
        if loss_grad.dim() != (batch, self.output_dim()) {
            return Err(Error::dim(format!(
                "loss gradient has shape {:?}, expected ({batch}, {})",
                loss_grad.dim(),
                self.output_dim()
            )));
        }

        let mut grads = Vec::with_capacity(self.layers.len());
        let mut upstream = loss_grad.as_standard_layout().into_owned();
        for (k, layer) in self.layers.iter().enumerate().rev() {
            let z = &cache.pre_activations[k];
            if layer.activation == Activation::Relu {
                ndarray::Zip::from(&mut upstream)
                    .and(z)
                    .for_each(|g, &zv| {
                        if zv <= 0.0 {
                            *g = 0.0;
                        }
                    });
            }
            let dw = upstream.t().dot(&cache.inputs[k]).as_standard_layout().into_owned();
            let db = upstream.sum_axis(Axis(0));
            let next = upstream.dot(&layer.weights);
            grads.push(LayerGrad {
                weights: dw,
                biases: db,
            });
            upstream = next;
        }
        grads.reverse();
        Ok((Gradients { layers: grads }, upstream))
    }

    /// One Adam update of every parameter tensor.
    pub fn apply_adam(&mut self, grads: &Gradients, state: &mut AdamState) -> Result<()> {
        if grads.layers.len() != self.layers.len() {
            return Err(Error::dim("gradient count does not match layer count"));
        }
        let mut params: Vec<&mut [f64]> = Vec::with_capacity(2 * self.layers.len());
        for layer in &mut self.layers {
            params.push(
                layer
                    .weights
                    .as_slice_mut()
                    .expect("weights are standard layout"),
            );
            params.push(layer.biases.as_slice_mut().expect("contiguous biases"));
        }
        let mut grad_slices: Vec<&[f64]> = Vec::with_capacity(params.len());
        for g in &grads.layers {
            grad_slices.push(g.weights.as_slice().ok_or_else(|| {
                Error::dim("gradient weights must be in standard layout")
            })?);
            grad_slices.push(g.biases.as_slice().expect("contiguous bias grad"));
        }
        state.step(&mut params, &grad_slices)?;
        self.version += 1;
        Ok(())
    }

    /// Shapes of every parameter tensor, weights then biases per layer.
    pub fn param_shapes(&self) -> Vec<usize> {
        self.layers
            .iter()
            .flat_map(|l| [l.weights.len(), l.biases.len()])
            .collect()
    }
}
