//! Spiking neural-network building blocks and a spiking DeepONet.
//!
//! Spike trains and membrane inputs are `time × neuron` matrices. Dense
//! layers store `output × input` weights and take `batch × feature` inputs.

pub mod data;
pub mod deeponet;
pub mod encoding;
mod error;
pub mod membrane;
pub mod metrics;
pub mod mlp_membrane;
pub mod nn;
pub mod synapse;

pub use encoding::{FloatPrecision, GridEncoder, IntervalGrid, SpikeTrain};
pub use error::{Error, Result};
pub use membrane::{EulerLif, IntegralLif, LifConfig, MembraneModel, MembraneTrace, PassThrough};
pub use metrics::EvalReport;
pub use mlp_membrane::MembraneEmulator;
pub use nn::{Activation, AdamConfig, Checkpoint, DenseLayer, DenseNet};
pub use synapse::{StdpParams, SynapseWeights};
