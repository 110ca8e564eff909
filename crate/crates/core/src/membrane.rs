//! Leaky integrate-and-fire membranes.
//!
//! Two solvers share threshold, reset and refractory semantics:
//! [`lif_euler_run`] marches `V ← βV + (Δt/C)·I` and [`lif_integral_run`]
//! evaluates the convolution solution of the RC equation with a trapezoid
//! rule over the current history since the last reset.

use std::fmt::Write as _;

use ndarray::{Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::encoding::SpikeTrain;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResetMode {
    /// Voltage returns to `v_rest` after a spike.
    ToRest,
    /// Voltage drops by `v_thresh` after a spike.
    SubtractThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Refractory {
    None,
    /// The post-spike voltage is pulled down by `2 · v_thresh` from the
    /// pre-spike voltage, whatever the reset mode.
    DoubleThresholdReset,
    /// The threshold is raised by `amount` for `steps` steps after a spike.
    RaisedThreshold { steps: usize, amount: f64 },
}

/// Physical constants and firing rules of a LIF layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LifConfig {
    /// Resistance `R`.
    pub r: f64,
    /// Capacitance `C`.
    pub c: f64,
    pub v_rest: f64,
    pub v_thresh: f64,
    pub dt: f64,
    pub reset: ResetMode,
    pub refractory: Refractory,
}

impl Default for LifConfig {
    /// `V_rest = 0`, `V_thresh = 1`, `β = 0.95` with `Δt = 1`, `τ = 20`.
    /// `R = 20, C = 1` so a unit input spike injects exactly one threshold.
    fn default() -> Self {
        Self {
            r: 20.0,
            c: 1.0,
            v_rest: 0.0,
            v_thresh: 1.0,
            dt: 1.0,
            reset: ResetMode::ToRest,
            refractory: Refractory::None,
        }
    }
}

impl LifConfig {
    /// Config with time constant `τ = Δt / (1 - β)` and the given resistance.
    pub fn from_beta(beta: f64, dt: f64, r: f64) -> Result<Self> {
        let tau = dt / (1.0 - beta);
        let cfg = Self {
            r,
            c: tau / r,
            dt,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `τ = R C`.
    pub fn tau(&self) -> f64 {
        self.r * self.c
    }

    /// `β = 1 - Δt / τ`.
    pub fn beta(&self) -> f64 {
        1.0 - self.dt / self.tau()
    }

    /// Gain applied to the input current in the Euler update, `Δt / C`.
    pub fn injection_gain(&self) -> f64 {
        self.dt / self.c
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("r", self.r), ("c", self.c), ("dt", self.dt)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::arg(format!("{name} must be positive, got {v}")));
            }
        }
        let beta = self.beta();
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::arg(format!("beta = 1 - dt/tau must lie in (0, 1), got {beta}")));
        }
        if !(self.v_thresh > self.v_rest) {
            return Err(Error::arg("v_thresh must exceed v_rest"));
        }
        if let Refractory::RaisedThreshold { amount, .. } = self.refractory {
            if !(amount.is_finite() && amount >= 0.0) {
                return Err(Error::arg("raised-threshold amount must be non-negative"));
            }
        }
        Ok(())
    }
}

/// Voltage and spike record of a membrane run, both `time × neuron`.
#[derive(Debug, Clone, PartialEq)]
pub struct MembraneTrace {
    /// Voltage after any reset at each step.
    pub voltages: Array2<f64>,
    /// Voltage before the threshold test at each step.
    pub pre_reset: Array2<f64>,
    pub spikes: SpikeTrain,
}

impl MembraneTrace {
    /// CSV rows `time,neuron,voltage,spike` in time-major order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time,neuron,voltage,spike\n");
        let dt = self.spikes.dt();
        for ((t, i), v) in self.voltages.indexed_iter() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                t as f64 * dt,
                i,
                v,
                self.spikes.data()[[t, i]]
            );
        }
        out
    }
}

/// Per-neuron firing state shared by both solvers.
struct FiringRule<'a> {
    cfg: &'a LifConfig,
    raised_for: usize,
}

impl<'a> FiringRule<'a> {
    fn new(cfg: &'a LifConfig) -> Self {
        Self { cfg, raised_for: 0 }
    }

    fn threshold(&self) -> f64 {
        match self.cfg.refractory {
            Refractory::RaisedThreshold { amount, .. } if self.raised_for > 0 => {
                self.cfg.v_thresh + amount
            }
            _ => self.cfg.v_thresh,
        }
    }

    /// Returns `(spiked, post-reset voltage)` and advances refractory counters.
    fn fire(&mut self, v: f64) -> (bool, f64) {
        let spiked = v >= self.threshold();
        if self.raised_for > 0 {
            self.raised_for -= 1;
        }
        if !spiked {
            return (false, v);
        }
        let after = match (self.cfg.refractory, self.cfg.reset) {
            (Refractory::DoubleThresholdReset, _) => v - 2.0 * self.cfg.v_thresh,
            (_, ResetMode::ToRest) => self.cfg.v_rest,
            (_, ResetMode::SubtractThreshold) => v - self.cfg.v_thresh,
        };
        if let Refractory::RaisedThreshold { steps, .. } = self.cfg.refractory {
            self.raised_for = steps;
        }
        (true, after)
    }
}

fn check_input(cfg: &LifConfig, current: &ArrayView2<'_, f64>) -> Result<()> {
    cfg.validate()?;
    if current.nrows() == 0 || current.ncols() == 0 {
        return Err(Error::dim("input current must be a non-empty time × neuron matrix"));
    }
    if current.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite input current".into()));
    }
    Ok(())
}

/// Forward-Euler LIF: `V[t] = β V[t-1] + (Δt/C) I[t]`, starting from rest.
/// Requires `v_rest = 0`.
pub fn lif_euler_run(cfg: &LifConfig, current: ArrayView2<'_, f64>) -> Result<MembraneTrace> {
    check_input(cfg, &current)?;
    if cfg.v_rest != 0.0 {
        return Err(Error::arg(
            "the Euler recurrence assumes v_rest = 0; use lif_integral_run",
        ));
    }
    let (n_t, n) = current.dim();
    let beta = cfg.beta();
    let gain = cfg.injection_gain();
    let mut voltages = Array2::zeros((n_t, n));
    let mut pre_reset = Array2::zeros((n_t, n));
    let mut spikes = Array2::<u8>::zeros((n_t, n));
    for i in 0..n {
        let mut rule = FiringRule::new(cfg);
        let mut v = 0.0;
        for t in 0..n_t {
            let raw = beta * v + gain * current[[t, i]];
            let (spiked, after) = rule.fire(raw);
            pre_reset[[t, i]] = raw;
            voltages[[t, i]] = after;
            spikes[[t, i]] = u8::from(spiked);
            v = after;
        }
    }
    Ok(MembraneTrace {
        voltages,
        pre_reset,
        spikes: SpikeTrain::new(spikes, cfg.dt)?,
    })
}

/// LIF from the integral solution
/// `V(t) = V₀ e^{-(t-t₀)/τ} + (R/τ) ∫₀^{t-t₀} e^{-s/τ} I(t-s) ds`,
/// where `t₀` is the last reset (or the start) and `V₀` the voltage then.
/// The integral is a composite trapezoid over the stored current samples,
/// recomputed at every step.
pub fn lif_integral_run(cfg: &LifConfig, current: ArrayView2<'_, f64>) -> Result<MembraneTrace> {
    check_input(cfg, &current)?;
    let (n_t, n) = current.dim();
    let tau = cfg.tau();
    let scale = cfg.r / tau;
    let dt = cfg.dt;
    let mut voltages = Array2::zeros((n_t, n));
    let mut pre_reset = Array2::zeros((n_t, n));
    let mut spikes = Array2::<u8>::zeros((n_t, n));
    for i in 0..n {
        let mut rule = FiringRule::new(cfg);
        let mut start = 0usize;
        let mut v_start = cfg.v_rest;
        for t in 0..n_t {
            let span = t - start;
            let mut integral = 0.0;
            if span > 0 {
                for j in 0..=span {
                    let w = if j == 0 || j == span { 0.5 } else { 1.0 };
                    integral += w * (-(j as f64) * dt / tau).exp() * current[[t - j, i]];
                }
                integral *= dt;
            }
            let raw = v_start * (-(span as f64) * dt / tau).exp() + scale * integral;
            let (spiked, after) = rule.fire(raw);
            pre_reset[[t, i]] = raw;
            voltages[[t, i]] = after;
            spikes[[t, i]] = u8::from(spiked);
            if spiked {
                start = t;
                v_start = after;
            }
        }
    }
    Ok(MembraneTrace {
        voltages,
        pre_reset,
        spikes: SpikeTrain::new(spikes, cfg.dt)?,
    })
}

/// Number of spikes per neuron (column sums of the spike trace).
pub fn spike_count(trace: &MembraneTrace) -> Vec<usize> {
    count_spikes(&trace.spikes)
}

pub fn count_spikes(train: &SpikeTrain) -> Vec<usize> {
    train
        .data()
        .map(|&v| v as usize)
        .sum_axis(Axis(0))
        .to_vec()
}

/// A layer that maps `time × neuron` input currents to `time × neuron` output
/// activity. LIF solvers, the MLP emulator and a pass-through all fit here.
pub trait MembraneModel {
    fn name(&self) -> &str;

    fn respond(&self, current: ArrayView2<'_, f64>) -> Result<Array2<f64>>;

    /// Time-summed output activity per neuron.
    fn counts(&self, current: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        Ok(self.respond(current)?.sum_axis(Axis(0)).to_vec())
    }
}

/// No membrane: inputs pass through unchanged, so counts are summed inputs.
#[derive(Debug, Clone, Copy, Default)]
pub struct PassThrough;

impl MembraneModel for PassThrough {
    fn name(&self) -> &str {
        "no-membrane"
    }

    fn respond(&self, current: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        Ok(current.to_owned())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EulerLif(pub LifConfig);

impl MembraneModel for EulerLif {
    fn name(&self) -> &str {
        "lif-euler"
    }

    fn respond(&self, current: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        Ok(lif_euler_run(&self.0, current)?.spikes.to_f64())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegralLif(pub LifConfig);

impl MembraneModel for IntegralLif {
    fn name(&self) -> &str {
        "lif-integral"
    }

    fn respond(&self, current: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        Ok(lif_integral_run(&self.0, current)?.spikes.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn cfg() -> LifConfig {
        LifConfig::default()
    }

    #[test]
    fn default_constants() {
        let c = cfg();
        assert_eq!(c.tau(), 20.0);
        assert!((c.beta() - 0.95).abs() < 1e-15);
        assert_eq!(c.injection_gain(), 1.0);
        let b = LifConfig::from_beta(0.95, 1.0, 1.0).unwrap();
        assert!((b.beta() - 0.95).abs() < 1e-12);
        assert!((b.c - 20.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut c = cfg();
        c.v_thresh = -1.0;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.dt = 40.0;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.v_rest = 0.2;
        assert!(lif_euler_run(&c, Array2::zeros((3, 1)).view()).is_err());
        assert!(lif_integral_run(&c, Array2::zeros((3, 1)).view()).is_ok());
    }

    #[test]
    fn zero_input_stays_at_rest() {
        let tr = lif_euler_run(&cfg(), Array2::zeros((20, 3)).view()).unwrap();
        assert!(tr.voltages.iter().all(|&v| v == 0.0));
        assert_eq!(tr.spikes.total_spikes(), 0);
    }

    #[test]
    fn single_pulse_decays_geometrically() {
        let mut input = Array2::zeros((40, 1));
        input[[0, 0]] = 0.5;
        let tr = lif_euler_run(&cfg(), input.view()).unwrap();
        let beta = cfg().beta();
        let mut expected = 0.5;
        for t in 0..40 {
            assert_eq!(tr.voltages[[t, 0]], expected);
            expected *= beta;
        }
        assert_eq!(tr.spikes.total_spikes(), 0);
    }

    #[test]
    fn constant_injection_first_spike_matches_recurrence() {
        // Oracle: iterate v <- 0.95 v + 0.2 until v >= 1.
        let beta = cfg().beta();
        let mut v = 0.0;
        let mut oracle = None;
        for t in 0..100 {
            v = beta * v + 0.2;
            if v >= 1.0 {
                oracle = Some((t, v));
                break;
            }
        }
        let (t_star, v_star) = oracle.unwrap();
        assert_eq!(t_star, 5);
        assert!((v_star - 1.0596).abs() < 1e-4);

        let tr = lif_euler_run(&cfg(), Array2::from_elem((30, 1), 0.2).view()).unwrap();
        assert_eq!(tr.spikes.spike_times(0)[0], t_star);
        assert_eq!(tr.pre_reset[[t_star, 0]], v_star);
        assert_eq!(tr.voltages[[t_star, 0]], 0.0);
    }

    #[test]
    fn unit_spike_fires_immediately() {
        let input = array![[1.0], [0.0], [1.0]];
        let tr = lif_euler_run(&cfg(), input.view()).unwrap();
        assert_eq!(tr.spikes.spike_times(0), vec![0, 2]);
    }

    #[test]
    fn subtract_reset_removes_exactly_one_threshold() {
        let mut c = cfg();
        c.reset = ResetMode::SubtractThreshold;
        let tr = lif_euler_run(&c, Array2::from_elem((30, 1), 0.7).view()).unwrap();
        let mut seen = 0;
        for t in 0..30 {
            if tr.spikes.data()[[t, 0]] == 1 {
                seen += 1;
                assert_eq!(tr.voltages[[t, 0]], tr.pre_reset[[t, 0]] - 1.0);
            } else {
                assert_eq!(tr.voltages[[t, 0]], tr.pre_reset[[t, 0]]);
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn refractory_variants_suppress_firing() {
        let drive = Array2::from_elem((40, 1), 0.6);
        let base = lif_euler_run(&cfg(), drive.view()).unwrap();
        let mut c = cfg();
        c.refractory = Refractory::DoubleThresholdReset;
        let double = lif_euler_run(&c, drive.view()).unwrap();
        let t0 = double.spikes.spike_times(0)[0];
        assert_eq!(double.voltages[[t0, 0]], double.pre_reset[[t0, 0]] - 2.0);
        assert!(double.spikes.total_spikes() < base.spikes.total_spikes());

        c.refractory = Refractory::RaisedThreshold {
            steps: 3,
            amount: 10.0,
        };
        let raised = lif_euler_run(&c, drive.view()).unwrap();
        let times = raised.spikes.spike_times(0);
        for pair in times.windows(2) {
            assert!(pair[1] - pair[0] > 3);
        }
    }

    #[test]
    fn integral_zero_input_matches_closed_form() {
        // tau / dt = 100
        let c = LifConfig {
            r: 1.0,
            c: 100.0,
            v_rest: 0.5,
            v_thresh: 1.0,
            dt: 1.0,
            ..LifConfig::default()
        };
        let tr = lif_integral_run(&c, Array2::zeros((300, 1)).view()).unwrap();
        for t in 0..300 {
            let exact = 0.5 * (-(t as f64) / 100.0).exp();
            assert!((tr.voltages[[t, 0]] - exact).abs() < 1e-6);
        }
    }

    #[test]
    fn integral_reaches_rc_steady_state() {
        // tau = 2, dt = 0.01, run to t = 10 tau, threshold out of reach.
        let c = LifConfig {
            r: 2.0,
            c: 1.0,
            v_rest: 0.0,
            v_thresh: 1e9,
            dt: 0.01,
            ..LifConfig::default()
        };
        let i0 = 0.3;
        let steps = 2001;
        let tr = lif_integral_run(&c, Array2::from_elem((steps, 1), i0).view()).unwrap();
        let v_end = tr.voltages[[steps - 1, 0]];
        assert!((v_end - c.r * i0).abs() / (c.r * i0) < 0.01, "{v_end}");
    }

    #[test]
    fn reset_to_rest_caps_post_reset_voltage() {
        let drive = Array2::from_shape_fn((50, 4), |(t, i)| ((t * 7 + i * 3) % 5) as f64 * 0.3);
        let tr = lif_euler_run(&cfg(), drive.view()).unwrap();
        for ((t, i), &v) in tr.voltages.indexed_iter() {
            if tr.spikes.data()[[t, i]] == 1 {
                assert_eq!(v, 0.0);
                assert!(tr.pre_reset[[t, i]] >= 1.0);
            } else {
                assert!(tr.pre_reset[[t, i]] < 1.0);
            }
            assert!(v < 1.0);
        }
    }

    #[test]
    fn spike_count_cases() {
        let tr = lif_euler_run(&cfg(), Array2::zeros((5, 3)).view()).unwrap();
        assert_eq!(spike_count(&tr), vec![0, 0, 0]);
        let eye = SpikeTrain::new(Array2::eye(4).mapv(|v: f64| v as u8), 1.0).unwrap();
        assert_eq!(count_spikes(&eye), vec![1; 4]);
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let tr = lif_euler_run(&cfg(), array![[1.0, 0.0], [0.2, 0.0]].view()).unwrap();
        let csv = tr.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "time,neuron,voltage,spike");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "0,0,0,1");
    }

    #[test]
    fn pass_through_counts_inputs() {
        let counts = PassThrough
            .counts(array![[1.0, 0.5], [1.0, 0.25]].view())
            .unwrap();
        assert_eq!(counts, vec![2.0, 0.75]);
        let lif = EulerLif(cfg()).counts(array![[1.0], [1.0]].view()).unwrap();
        assert_eq!(lif, vec![2.0]);
    }
}
