//! JSON checkpoint format for dense networks.
//!
//! ```json
//! { "version": "spikeonet-ckpt-1", "role": "mlp-membrane",
//!   "input_dim": 2, "output_dim": 1,
//!   "layers": [ { "input": 2, "output": 1, "activation": "identity",
//!                 "weights": [0.5, -0.5], "biases": [0.0] } ] }
//! ```
//! Weights are row-major `output × input`.

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::{Activation, DenseLayer, DenseNet};
use crate::error::{Error, Result};

pub const CHECKPOINT_VERSION: &str = "spikeonet-ckpt-1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerRecord {
    pub input: usize,
    pub output: usize,
    pub activation: Activation,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
    pub input_dim: usize,
    pub output_dim: usize,
    pub layers: Vec<LayerRecord>,
}

impl Checkpoint {
    pub fn from_net(net: &DenseNet, role: Option<&str>) -> Self {
        Self {
            version: CHECKPOINT_VERSION.to_owned(),
            role: role.map(str::to_owned),
            input_dim: net.input_dim(),
            output_dim: net.output_dim(),
            layers: net
                .layers()
                .iter()
                .map(|l| LayerRecord {
                    input: l.input_dim(),
                    output: l.output_dim(),
                    activation: l.activation,
                    weights: l.weights().iter().copied().collect(),
                    biases: l.biases().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_net(&self) -> Result<DenseNet> {
        if self.version != CHECKPOINT_VERSION {
            return Err(Error::Format(format!(
                "unsupported checkpoint version {:?}",
                self.version
            )));
        }
        let layers = self
            .layers
            .iter()
            .map(|r| {
                let weights = Array2::from_shape_vec((r.output, r.input), r.weights.clone())
                    .map_err(|e| Error::Format(format!("layer weights: {e}")))?;
                DenseLayer::new(weights, Array1::from(r.biases.clone()), r.activation)
            })
            .collect::<Result<Vec<_>>>()?;
        let net = DenseNet::from_layers(layers)?;
        if net.input_dim() != self.input_dim || net.output_dim() != self.output_dim {
            return Err(Error::Format(
                "declared dims disagree with layer shapes".into(),
            ));
        }
        Ok(net)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&fs::read(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roundtrip_preserves_network() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let net = DenseNet::mlp(3, &[4, 2], &mut rng).unwrap();
        let ckpt = Checkpoint::from_net(&net, Some("branch"));
        let text = serde_json::to_string(&ckpt).unwrap();
        let back: Checkpoint = serde_json::from_str(&text).unwrap();
        let restored = back.to_net().unwrap();
        assert_eq!(restored.layers(), net.layers());
        assert!(text.contains("\"version\":\"spikeonet-ckpt-1\""));
        assert!(text.contains("\"activation\":\"relu\""));
    }

    #[test]
    fn rejects_wrong_version_and_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let net = DenseNet::mlp(2, &[2], &mut rng).unwrap();
        let mut ckpt = Checkpoint::from_net(&net, None);
        ckpt.version = "other".into();
        assert!(ckpt.to_net().is_err());
        let mut ckpt = Checkpoint::from_net(&net, None);
        ckpt.layers[0].weights.pop();
        assert!(ckpt.to_net().is_err());
    }
}
