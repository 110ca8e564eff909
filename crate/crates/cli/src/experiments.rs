//! The experiments: typed computations plus writers for their run directories.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ndarray::Array2;
use serde_json::json;
use spikeonet::data::{
    add_noise, grf_poisson_dataset, load_mnist_split, resolve_mnist_dir, save_poisson_dataset,
    verify_mnist_dir, GrfSample, MnistRecord, PoissonDatasetSpec, Split, TestFunction,
};
use spikeonet::deeponet::{
    naive_regression, train_classification, train_regression, ClassificationOutcome, ClassificationSetup,
    NaiveSetup, RegressionOutcome, RegressionSetup, TrainConfig,
};
use spikeonet::encoding::{FloatPrecision, GridEncoder, IntervalGrid};
use spikeonet::membrane::{lif_euler_run, lif_integral_run, IntegralLif, LifConfig, MembraneModel, PassThrough};
use spikeonet::metrics::{l2_error, savgol_smooth};
use spikeonet::mlp_membrane::{
    bit_agreement, mnist_membrane_dataset, ricker_regression, ricker_task, train_emulator, RickerResult,
    RickerSetup,
};
use spikeonet::nn::{Checkpoint, FitConfig};
use spikeonet::{DenseNet, EvalReport, MembraneEmulator};

use crate::config::{Experiment, ExperimentConfig};
use crate::errors::{ConfigError, DataError};
use crate::output::{RunDir, RunReport};

fn need<T: Clone>(value: &Option<T>, key: &str) -> Result<T> {
    value
        .clone()
        .ok_or_else(|| ConfigError(format!("missing config key {key}")).into())
}

fn f9(v: f64) -> String {
    format!("{v:.9}")
}

fn history_csv(history: &[f64]) -> String {
    let mut out = String::from("epoch,loss\n");
    for (e, l) in history.iter().enumerate() {
        let _ = writeln!(out, "{e},{l:.12e}");
    }
    out
}

fn seed(cfg: &ExperimentConfig) -> u64 {
    cfg.seed.unwrap_or(0)
}

// ------------------------------------------------------------------ naive

#[derive(Debug, Clone)]
pub struct NaiveRow {
    pub function: String,
    pub noise_sigma: f64,
    /// Against the targets the network was fitted to.
    pub l2: f64,
    /// Against the noise-free function.
    pub l2_clean: f64,
    pub x: Vec<f64>,
    pub targets: Vec<f64>,
    pub fitted: Vec<f64>,
    pub net: DenseNet,
}

pub fn naive_setup(cfg: &ExperimentConfig) -> Result<NaiveSetup> {
    let (encoder, n_t) = cfg.grid_encoder()?;
    Ok(NaiveSetup {
        encoder,
        n_t,
        lif: need(&cfg.lif, "lif")?,
        fit: FitConfig {
            epochs: need(&cfg.epochs, "epochs")?,
            batch_size: 1,
            lr: need(&cfg.lr, "lr")?,
            seed: seed(cfg),
        },
        init_seed: seed(cfg),
    })
}

fn parse_function(name: &str, k: f64) -> Result<TestFunction> {
    Ok(match name {
        "step" => TestFunction::Step,
        "square" => TestFunction::Square,
        "sin-ode" => TestFunction::SinOde { k },
        other => return Err(ConfigError(format!("unknown function {other:?}")).into()),
    })
}

/// Every configured function, noise-free then noisy.
pub fn naive_rows(cfg: &ExperimentConfig) -> Result<Vec<NaiveRow>> {
    let setup = naive_setup(cfg)?;
    let n_x = need(&cfg.n_x, "n_x")?;
    let sigma = need(&cfg.noise_sigma, "noise_sigma")?;
    let k = need(&cfg.sin_k, "sin_k")?;
    let mut rows = Vec::new();
    for (i, name) in need(&cfg.functions, "functions")?.iter().enumerate() {
        let f = parse_function(name, k)?;
        let grid = f.default_grid(n_x)?;
        let clean = f.values(&grid)?;
        let mut variants = vec![(0.0, clean.clone())];
        if sigma > 0.0 {
            variants.push((sigma, add_noise(&clean, sigma, seed(cfg).wrapping_add(i as u64))?));
        }
        for (noise, targets) in variants {
            let out = naive_regression(&grid, &targets, &setup)?;
            rows.push(NaiveRow {
                function: f.name().to_string(),
                noise_sigma: noise,
                l2: out.l2,
                l2_clean: l2_error(&out.fitted, &clean)?,
                x: grid.points(),
                targets,
                fitted: out.fitted,
                net: out.net,
            });
        }
    }
    Ok(rows)
}

fn write_naive(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<serde_json::Value> {
    let rows = naive_rows(cfg)?;
    let mut metrics = String::from("function,noise_sigma,l2,l2_clean\n");
    let mut fits = String::from("function,noise_sigma,x,target,fitted\n");
    for r in &rows {
        let _ = writeln!(metrics, "{},{},{},{}", r.function, r.noise_sigma, f9(r.l2), f9(r.l2_clean));
        for ((x, t), y) in r.x.iter().zip(&r.targets).zip(&r.fitted) {
            let _ = writeln!(fits, "{},{},{x},{t},{y}", r.function, r.noise_sigma);
        }
        let tag = if r.noise_sigma > 0.0 { "noisy" } else { "clean" };
        run.write_json(
            &format!("checkpoints/{}-{tag}.json", r.function),
            &Checkpoint::from_net(&r.net, Some("naive-regression")),
        )?;
    }
    run.write("metrics.csv", metrics)?;
    run.write("fits.csv", fits)?;
    Ok(json!(rows
        .iter()
        .map(|r| json!({"function": r.function, "noise_sigma": r.noise_sigma, "l2": r.l2, "l2_clean": r.l2_clean}))
        .collect::<Vec<_>>()))
}

// ------------------------------------------------------------- regression

pub fn poisson_spec(cfg: &ExperimentConfig) -> Result<PoissonDatasetSpec> {
    Ok(PoissonDatasetSpec {
        samples: need(&cfg.samples, "samples")?,
        n_x: need(&cfg.n_x, "n_x")?,
        a: 0.0,
        b: 1.0,
        length_scale: need(&cfg.length_scale, "length_scale")?,
        seed: seed(cfg),
    })
}

pub fn regression_setup(cfg: &ExperimentConfig, encoder: GridEncoder, n_t: usize) -> Result<RegressionSetup> {
    let [window, order] = need(&cfg.smoothing, "smoothing")?;
    Ok(RegressionSetup {
        encoder,
        n_t,
        lif: need(&cfg.lif, "lif")?,
        branch_widths: need(&cfg.branch_widths, "branch_widths")?,
        trunk_widths: need(&cfg.trunk_widths, "trunk_widths")?,
        train: TrainConfig {
            epochs: need(&cfg.epochs, "epochs")?,
            batch_size: need(&cfg.batch_size, "batch_size")?,
            lr: need(&cfg.lr, "lr")?,
            seed: seed(cfg),
            loss: need(&cfg.loss, "loss")?,
            train_trunk: true,
        },
        smoothing: (window > 0).then_some((window, order)),
        init_seed: seed(cfg),
    })
}

pub struct PoissonData {
    pub spec: PoissonDatasetSpec,
    pub samples: Vec<GrfSample>,
    pub split: Split,
}

pub fn poisson_data(cfg: &ExperimentConfig) -> Result<PoissonData> {
    let spec = poisson_spec(cfg)?;
    let samples = grf_poisson_dataset(&spec)?;
    let split = Split::new(spec.samples, need(&cfg.n_train, "n_train")?, seed(cfg))?;
    Ok(PoissonData { spec, samples, split })
}

fn write_dataset(run: &mut RunDir, data: &PoissonData, cfg: &ExperimentConfig) -> Result<()> {
    save_poisson_dataset(&run.path("dataset"), &data.spec, &data.samples, &data.split, seed(cfg))?;
    run.record("dataset/poisson.csv")?;
    run.record("dataset/poisson.json")
}

fn predictions_csv(data: &PoissonData, out: &RegressionOutcome, smoothing: Option<(usize, usize)>) -> Result<String> {
    let mut csv = String::from("sample,x,u_true,u_pred,u_smoothed\n");
    for (row, &i) in out.predictions.rows().into_iter().zip(&data.split.test) {
        let s = &data.samples[i];
        let pred = row.to_vec();
        let smooth = match smoothing {
            Some((w, o)) => savgol_smooth(&pred, w, o)?,
            None => pred.clone(),
        };
        for k in 0..pred.len() {
            let _ = writeln!(
                csv,
                "{i},{},{},{},{}",
                s.grid.point(k),
                s.u_values[k],
                pred[k],
                smooth[k]
            );
        }
    }
    Ok(csv)
}

fn write_regression(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<serde_json::Value> {
    let data = poisson_data(cfg)?;
    let (encoder, n_t) = cfg.grid_encoder()?;
    let setup = regression_setup(cfg, encoder, n_t)?;
    let out = train_regression(&data.samples, &data.split, &setup)?;
    write_dataset(run, &data, cfg)?;
    let mut metrics = format!("{}\n", EvalReport::CSV_HEADER);
    metrics.push_str(&out.smoothed.csv_row("smoothed"));
    metrics.push('\n');
    metrics.push_str(&out.raw.csv_row("raw"));
    metrics.push('\n');
    run.write("metrics.csv", metrics)?;
    run.write("predictions.csv", predictions_csv(&data, &out, setup.smoothing)?)?;
    run.write("history.csv", history_csv(&out.history))?;
    run.write_json("checkpoints/deeponet.json", &out.model.to_envelope())?;
    Ok(json!({
        "encoder": encoder.name(),
        "n_t": n_t,
        "smoothed": out.smoothed.summary_json("smoothed"),
        "raw": out.raw.summary_json("raw"),
        "split_sha256": data.split.fingerprint(),
    }))
}

/// One row of the encoder comparison.
#[derive(Debug, Clone)]
pub struct EncodingRow {
    pub label: &'static str,
    pub encoder: GridEncoder,
    pub n_t: usize,
    pub smoothed: EvalReport,
    pub raw: EvalReport,
    pub split_sha256: String,
}

/// Labels and encoders in table order.
pub fn comparison_variants(cfg: &ExperimentConfig) -> Result<Vec<(&'static str, GridEncoder, usize)>> {
    let n_t = need(&cfg.n_t, "n_t")?;
    let precision = FloatPrecision::from_bits(need(&cfg.float_precision, "float_precision")?)?;
    Ok(vec![
        ("Rate", GridEncoder::Rate { seed: seed(cfg) }, n_t),
        ("Floating point", GridEncoder::FloatingPoint { precision }, n_t),
        ("Lower triangular", GridEncoder::LowerTriangular, n_t),
        ("Lower triangular and 10x time steps", GridEncoder::LowerTriangular, 10 * n_t),
        ("Direct encoding", GridEncoder::Direct, n_t),
    ])
}

pub fn compare_rows(cfg: &ExperimentConfig, data: &PoissonData) -> Result<Vec<EncodingRow>> {
    let mut rows = Vec::new();
    for (label, encoder, n_t) in comparison_variants(cfg)? {
        let setup = regression_setup(cfg, encoder, n_t)?;
        let out = train_regression(&data.samples, &data.split, &setup).with_context(|| format!("encoder {label}"))?;
        rows.push(EncodingRow {
            label,
            encoder,
            n_t: encoder.effective_steps(n_t),
            smoothed: out.smoothed,
            raw: out.raw,
            split_sha256: data.split.fingerprint(),
        });
    }
    Ok(rows)
}

fn write_compare(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<serde_json::Value> {
    let data = poisson_data(cfg)?;
    let rows = compare_rows(cfg, &data)?;
    write_dataset(run, &data, cfg)?;
    let mut metrics = String::from("encoding,n_t,mean_l2,median_l2,std_l2,raw_mean_l2,split_sha256\n");
    let mut table = String::from("| Encoding | Mean L2 | Median L2 | Std L2 |\n|---|---|---|---|\n");
    for r in &rows {
        let _ = writeln!(
            metrics,
            "{},{},{},{},{},{},{}",
            r.label,
            r.n_t,
            f9(r.smoothed.mean),
            f9(r.smoothed.median),
            f9(r.smoothed.std),
            f9(r.raw.mean),
            r.split_sha256
        );
        let _ = writeln!(
            table,
            "| {} | {:.4} | {:.4} | {:.4} |",
            r.label, r.smoothed.mean, r.smoothed.median, r.smoothed.std
        );
    }
    run.write("metrics.csv", metrics)?;
    run.write("table.md", &table)?;
    print!("{table}");
    Ok(json!(rows
        .iter()
        .map(|r| json!({"encoding": r.label, "n_t": r.n_t, "mean_l2": r.smoothed.mean, "raw_mean_l2": r.raw.mean}))
        .collect::<Vec<_>>()))
}

// --------------------------------------------------------------------- mnist

/// Explicit config path, then `SPIKEONET_DATA_DIR`, then `data/mnist` under
/// the workspace.
pub fn mnist_dir(cfg: &ExperimentConfig) -> Result<PathBuf> {
    if let Some(dir) = resolve_mnist_dir(cfg.mnist_dir.as_deref()) {
        return Ok(dir);
    }
    let fallback = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist");
    if cfg.mnist_dir.is_none() && fallback.join(spikeonet::data::TRAIN_IMAGES).is_file() {
        return Ok(fallback);
    }
    Err(DataError(format!(
        "MNIST files not found (looked at {}, ${}, {})",
        cfg.mnist_dir.as_deref().map_or("-".into(), |p| p.display().to_string()),
        spikeonet::data::DATA_DIR_ENV,
        fallback.display()
    ))
    .into())
}

fn load_mnist(cfg: &ExperimentConfig, train: bool, limit: usize) -> Result<Vec<MnistRecord>> {
    let dir = mnist_dir(cfg)?;
    verify_mnist_dir(&dir).map_err(|e| DataError(format!("{}: {e}", dir.display())))?;
    Ok(load_mnist_split(&dir, train, Some(limit))?)
}

pub fn classification_setup(cfg: &ExperimentConfig) -> Result<ClassificationSetup> {
    if cfg.encoder.as_deref() != Some("rate") {
        return Err(ConfigError("mnist-classification supports only the rate encoder".into()).into());
    }
    Ok(ClassificationSetup {
        n_t: need(&cfg.n_t, "n_t")? * cfg.oversample.unwrap_or(1),
        encode_seed: seed(cfg),
        lif: need(&cfg.lif, "lif")?,
        branch_widths: need(&cfg.branch_widths, "branch_widths")?,
        trunk_widths: need(&cfg.trunk_widths, "trunk_widths")?,
        train: TrainConfig {
            epochs: need(&cfg.epochs, "epochs")?,
            batch_size: need(&cfg.batch_size, "batch_size")?,
            lr: need(&cfg.lr, "lr")?,
            seed: seed(cfg),
            loss: need(&cfg.loss, "loss")?,
            train_trunk: true,
        },
        init_seed: seed(cfg),
    })
}

pub fn classification(cfg: &ExperimentConfig) -> Result<ClassificationOutcome> {
    let setup = classification_setup(cfg)?;
    let train = load_mnist(cfg, true, need(&cfg.train_size, "train_size")?)?;
    let test = load_mnist(cfg, false, need(&cfg.test_size, "test_size")?)?;
    Ok(train_classification(&train, &test, &setup)?)
}

fn write_mnist(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<serde_json::Value> {
    let out = classification(cfg)?;
    run.write(
        "metrics.csv",
        format!(
            "split,accuracy\ntrain,{}\ntest,{}\n",
            f9(out.train_accuracy),
            f9(out.test_accuracy)
        ),
    )?;
    let mut preds = String::from("index,predicted\n");
    for (i, p) in out.test_predictions.iter().enumerate() {
        let _ = writeln!(preds, "{i},{p}");
    }
    run.write("predictions.csv", preds)?;
    run.write("history.csv", history_csv(&out.history))?;
    run.write_json("checkpoints/deeponet.json", &out.model.to_envelope())?;
    Ok(json!({"train_accuracy": out.train_accuracy, "test_accuracy": out.test_accuracy}))
}

// ------------------------------------------------------------------ membrane

pub struct MembraneOutcome {
    pub emulator: MembraneEmulator,
    /// Per-bit agreement with the Euler oracle on held-out images, when the
    /// emulator was trained in this run.
    pub held_out_agreement: Option<f64>,
    pub target_spike_fraction: Option<f64>,
    pub history: Vec<f64>,
    /// no-membrane, mlp-membrane, lif-integral.
    pub results: Vec<RickerResult>,
}

/// Held-out images used to score the emulator.
pub const EMULATOR_HELD_OUT: usize = 50;

pub fn ricker_setup(cfg: &ExperimentConfig) -> Result<RickerSetup> {
    Ok(RickerSetup {
        n_grid: need(&cfg.ricker_points, "ricker_points")?,
        n_t: need(&cfg.n_t, "n_t")?,
        head_widths: need(&cfg.head_widths, "head_widths")?,
        fit: FitConfig {
            epochs: need(&cfg.epochs, "epochs")?,
            batch_size: need(&cfg.batch_size, "batch_size")?,
            lr: need(&cfg.lr, "lr")?,
            seed: seed(cfg),
        },
        init_seed: seed(cfg),
        timing_reps: need(&cfg.timing_reps, "timing_reps")?,
        timing_chunk: 100,
    })
}

pub fn membrane(cfg: &ExperimentConfig) -> Result<MembraneOutcome> {
    if cfg.encoder.as_deref() != Some("lower-triangular") {
        return Err(ConfigError("mlp-membrane encodes the Ricker grid lower-triangularly".into()).into());
    }
    let setup = ricker_setup(cfg)?;
    let lif = need(&cfg.lif, "lif")?;
    let (emulator, agreement, fraction, history) = match &cfg.emulator_path {
        Some(path) => {
            let emu = MembraneEmulator::load(path).with_context(|| format!("loading {}", path.display()))?;
            (emu, None, None, Vec::new())
        }
        None => {
            let images = need(&cfg.emulator_images, "emulator_images")?;
            if images <= EMULATOR_HELD_OUT {
                return Err(ConfigError(format!("emulator_images must exceed {EMULATOR_HELD_OUT}")).into());
            }
            let records = load_mnist(cfg, true, images)?;
            let n_train = images - EMULATOR_HELD_OUT;
            let s = seed(cfg);
            let train = mnist_membrane_dataset(&records[..n_train], setup.window(), s, &lif, 200)?;
            let held = mnist_membrane_dataset(
                &records[n_train..],
                setup.window(),
                s.wrapping_add(n_train as u64),
                &lif,
                EMULATOR_HELD_OUT,
            )?;
            let fit = FitConfig {
                epochs: need(&cfg.emulator_epochs, "emulator_epochs")?,
                batch_size: 64,
                lr: 1e-3,
                seed: s,
            };
            let (emu, history) = train_emulator(&train, &fit)?;
            let out = emu.emulate_rows(held.inputs.view())?;
            let agreement = bit_agreement(out.view(), held.targets.view())?;
            (emu, Some(agreement), Some(train.target_spike_fraction()), history)
        }
    };
    if emulator.n_t() != setup.window() {
        return Err(ConfigError(format!(
            "emulator window is {} steps, the Ricker task needs {}",
            emulator.n_t(),
            setup.window()
        ))
        .into());
    }
    let task = ricker_task(&setup)?;
    let backends: [&dyn MembraneModel; 3] = [&PassThrough, &emulator, &IntegralLif(lif)];
    let results = backends
        .iter()
        .map(|b| ricker_regression(*b, &task, &setup))
        .collect::<spikeonet::Result<Vec<_>>>()?;
    Ok(MembraneOutcome {
        emulator,
        held_out_agreement: agreement,
        target_spike_fraction: fraction,
        history,
        results,
    })
}

fn write_membrane(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<serde_json::Value> {
    let out = membrane(cfg)?;
    let mut metrics = format!("backend,{}\n", &EvalReport::CSV_HEADER["label,".len()..]);
    let mut timing = String::from("backend,time_per_sample_ms\n");
    for r in &out.results {
        metrics.push_str(&r.report.csv_row(&r.backend));
        metrics.push('\n');
        let _ = writeln!(timing, "{},{:.6}", r.backend, r.report.time_per_sample_ms.unwrap_or(f64::NAN));
    }
    run.write("metrics.csv", metrics)?;
    run.write("timing.csv", &timing)?;
    if let Some(a) = out.held_out_agreement {
        run.write(
            "emulator.csv",
            format!(
                "held_out_agreement,target_spike_fraction\n{},{}\n",
                f9(a),
                f9(out.target_spike_fraction.unwrap_or(f64::NAN))
            ),
        )?;
        run.write("history.csv", history_csv(&out.history))?;
    }
    run.write_json("checkpoints/emulator.json", &out.emulator.to_checkpoint())?;
    print!("{timing}");
    Ok(json!({
        "held_out_agreement": out.held_out_agreement,
        "backends": out.results.iter().map(|r| r.report.summary_json(&r.backend)).collect::<Vec<_>>(),
    }))
}

// ------------------------------------------------------------ small tools

/// `neuron × time` rendering of the encoded grid on `[0, 1]`.
pub fn encode_inspect(cfg: &ExperimentConfig) -> Result<(Array2<f64>, String)> {
    let (encoder, n_t) = cfg.grid_encoder()?;
    let grid = IntervalGrid::new(0.0, 1.0, need(&cfg.n_x, "n_x")?)?;
    let enc = encoder.encode_grid(&grid, n_t)?;
    let binary = enc.iter().all(|&v| v == 0.0 || v == 1.0);
    let mut text = String::new();
    for col in enc.columns() {
        let cells: Vec<String> = col
            .iter()
            .map(|&v| if binary { format!("{v:.0}") } else { format!("{v:.4}") })
            .collect();
        let _ = writeln!(text, "{}", cells.join(" "));
    }
    Ok((enc, text))
}

fn write_encode_inspect(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<serde_json::Value> {
    let (enc, text) = encode_inspect(cfg)?;
    print!("{text}");
    run.write("encoding.txt", &text)?;
    let mut metrics = String::from("neuron,total,first_active_step\n");
    for (k, col) in enc.columns().into_iter().enumerate() {
        let first = col.iter().position(|&v| v != 0.0).map_or(String::new(), |t| t.to_string());
        let _ = writeln!(metrics, "{k},{},{first}", col.sum());
    }
    run.write("metrics.csv", metrics)?;
    Ok(json!({"n_t": enc.nrows(), "neurons": enc.ncols()}))
}

/// Euler and integral traces of one neuron under a constant current.
pub fn lif_traces(cfg: &ExperimentConfig) -> Result<(LifConfig, [spikeonet::MembraneTrace; 2])> {
    let lif = need(&cfg.lif, "lif")?;
    let current = Array2::from_elem((need(&cfg.n_t, "n_t")?, 1), need(&cfg.current, "current")?);
    Ok((lif, [lif_euler_run(&lif, current.view())?, lif_integral_run(&lif, current.view())?]))
}

fn write_lif_trace(cfg: &ExperimentConfig, run: &mut RunDir) -> Result<serde_json::Value> {
    let (_, traces) = lif_traces(cfg)?;
    let mut metrics = String::from("solver,spikes,first_spike_step,final_voltage\n");
    let mut summary = Vec::new();
    for (name, trace) in ["euler", "integral"].iter().zip(&traces) {
        run.write(&format!("trace-{name}.csv"), trace.to_csv())?;
        let times = trace.spikes.spike_times(0);
        let first = times.first().map_or(String::new(), usize::to_string);
        let last = trace.voltages[[trace.voltages.nrows() - 1, 0]];
        let _ = writeln!(metrics, "{name},{},{first},{}", times.len(), f9(last));
        summary.push(json!({"solver": name, "spikes": times.len(), "first_spike_step": times.first()}));
    }
    run.write("metrics.csv", &metrics)?;
    print!("{metrics}");
    Ok(json!(summary))
}

/// Runs `experiment` with a resolved config, writing into `cfg.out`.
pub fn run_resolved(cfg: &ExperimentConfig) -> Result<RunReport> {
    let experiment = cfg
        .experiment
        .ok_or_else(|| ConfigError("config has no experiment".into()))?;
    let mut run = RunDir::create(&cfg.out_dir())?;
    run.write_json("resolved-config.json", cfg)?;
    let summary = match experiment {
        Experiment::NaiveRegression => write_naive(cfg, &mut run)?,
        Experiment::MlpMembrane => write_membrane(cfg, &mut run)?,
        Experiment::DeeponetRegression => write_regression(cfg, &mut run)?,
        Experiment::MnistClassification => write_mnist(cfg, &mut run)?,
        Experiment::EncodeInspect => write_encode_inspect(cfg, &mut run)?,
        Experiment::LifTrace => write_lif_trace(cfg, &mut run)?,
        Experiment::CompareEncodings => write_compare(cfg, &mut run)?,
    };
    run.finish(experiment.name(), seed(cfg), summary)
}
