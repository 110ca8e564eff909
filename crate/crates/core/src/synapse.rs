//! Synaptic weights: the static all-ones synapse and the STDP rule.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::encoding::SpikeTrain;
use crate::error::{Error, Result};

/// Weight matrix `pre × post`.
#[derive(Debug, Clone, PartialEq)]
pub struct SynapseWeights {
    w: Array2<f64>,
    frozen: bool,
}

impl SynapseWeights {
    pub fn new(w: Array2<f64>) -> Result<Self> {
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("synapse weights must be finite".into()));
        }
        Ok(Self { w, frozen: false })
    }

    /// The static synapse: every weight is 1 and cannot change.
    pub fn static_ones(pre: usize, post: usize) -> Self {
        Self {
            w: Array2::ones((pre, post)),
            frozen: true,
        }
    }

    pub fn is_static(&self) -> bool {
        self.frozen
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.w
    }

    pub fn pre(&self) -> usize {
        self.w.nrows()
    }

    pub fn post(&self) -> usize {
        self.w.ncols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StdpParams {
    pub a_pre: f64,
    pub a_post: f64,
    pub tau: f64,
    /// Optional `[w_min, w_max]` clamp applied after every update.
    pub clamp: Option<(f64, f64)>,
}

impl Default for StdpParams {
    fn default() -> Self {
        Self {
            a_pre: 0.01,
            a_post: 0.01,
            tau: 20.0,
            clamp: None,
        }
    }
}

impl StdpParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a_pre > 0.0 && self.a_post > 0.0 && self.tau > 0.0) {
            return Err(Error::arg("STDP amplitudes and tau must be positive"));
        }
        if let Some((lo, hi)) = self.clamp {
            if !(lo <= hi) {
                return Err(Error::arg("STDP clamp needs w_min <= w_max"));
            }
        }
        Ok(())
    }
}

/// Weight change for a spike pair separated by `dt = t_post - t_pre`:
/// `A_pre e^{-dt/τ}` when `dt >= 0`, `-A_post e^{dt/τ}` otherwise.
pub fn stdp_delta(dt: f64, p: &StdpParams) -> f64 {
    if dt >= 0.0 {
        p.a_pre * (-dt / p.tau).exp()
    } else {
        -p.a_post * (dt / p.tau).exp()
    }
}

fn spike_times(train: &SpikeTrain) -> Vec<Vec<f64>> {
    (0..train.neurons())
        .map(|i| {
            train
                .spike_times(i)
                .into_iter()
                .map(|t| t as f64 * train.dt())
                .collect()
        })
        .collect()
}

/// All-pairs STDP weight change for one sample, without touching any weights.
pub fn stdp_deltas(pre: &SpikeTrain, post: &SpikeTrain, p: &StdpParams) -> Result<Array2<f64>> {
    p.validate()?;
    if pre.n_t() != post.n_t() {
        return Err(Error::dim(format!(
            "pre and post trains differ in length: {} vs {}",
            pre.n_t(),
            post.n_t()
        )));
    }
    let pre_times = spike_times(pre);
    let post_times = spike_times(post);
    let mut delta = Array2::zeros((pre.neurons(), post.neurons()));
    for (i, tp) in pre_times.iter().enumerate() {
        if tp.is_empty() {
            continue;
        }
        for (j, tq) in post_times.iter().enumerate() {
            // canonical order: pre spikes ascending, then post spikes ascending
            let mut sum = 0.0;
            for &t_pre in tp {
                for &t_post in tq {
                    sum += stdp_delta(t_post - t_pre, p);
                }
            }
            delta[[i, j]] = sum;
        }
    }
    Ok(delta)
}

fn add_delta(w: &mut SynapseWeights, delta: &Array2<f64>, p: &StdpParams) -> Result<()> {
    if w.frozen {
        return Err(Error::ImmutableSynapse);
    }
    if w.w.dim() != delta.dim() {
        return Err(Error::dim(format!(
            "weights are {:?} but the trains imply {:?}",
            w.w.dim(),
            delta.dim()
        )));
    }
    w.w += delta;
    if let Some((lo, hi)) = p.clamp {
        w.w.mapv_inplace(|v| v.clamp(lo, hi));
    }
    Ok(())
}

/// Applies the STDP rule for one sample and returns the updated weights.
pub fn stdp_apply(
    w: &SynapseWeights,
    pre: &SpikeTrain,
    post: &SpikeTrain,
    p: &StdpParams,
) -> Result<SynapseWeights> {
    if w.frozen {
        return Err(Error::ImmutableSynapse);
    }
    let delta = stdp_deltas(pre, post, p)?;
    let mut out = w.clone();
    add_delta(&mut out, &delta, p)?;
    Ok(out)
}

/// STDP over several samples. Per-sample changes are computed on separate
/// threads and then added in batch order, so the result is bit-identical to
/// applying [`stdp_apply`] to each sample in turn.
pub fn stdp_apply_partitioned(
    w: &SynapseWeights,
    batches: &[(SpikeTrain, SpikeTrain)],
    p: &StdpParams,
) -> Result<SynapseWeights> {
    if w.frozen {
        return Err(Error::ImmutableSynapse);
    }
    let deltas: Vec<Result<Array2<f64>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = batches
            .iter()
            .map(|(pre, post)| scope.spawn(move || stdp_deltas(pre, post, p)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("STDP worker panicked"))
            .collect()
    });
    let mut out = w.clone();
    for delta in deltas {
        add_delta(&mut out, &delta?, p)?;
    }
    Ok(out)
}

/// Propagates spikes through a static synapse: `out[t] = spikes[t] · W`.
pub fn static_apply(w: &SynapseWeights, spikes: &SpikeTrain) -> Result<Array2<f64>> {
    if !w.frozen {
        return Err(Error::arg("static_apply expects a static synapse"));
    }
    if spikes.neurons() != w.pre() {
        return Err(Error::dim(format!(
            "synapse has {} inputs but the train has {} neurons",
            w.pre(),
            spikes.neurons()
        )));
    }
    Ok(spikes.to_f64().dot(&w.w))
}
