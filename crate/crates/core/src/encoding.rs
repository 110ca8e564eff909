//! Spike encoders and decoders.
//!
//! A [`SpikeTrain`] is a binary `time × neuron` matrix. Grid encoders treat
//! each point of an [`IntervalGrid`] as one neuron.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary spike matrix with shape `(n_t, neurons)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpikeTrain {
    data: Array2<u8>,
    dt: OrderedDt,
}

// f64 wrapper so SpikeTrain can be Eq; dt is always finite and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
struct OrderedDt(f64);
impl Eq for OrderedDt {}

impl SpikeTrain {
    pub fn new(data: Array2<u8>, dt: f64) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::dim("spike trains need at least one step and one neuron"));
        }
        if let Some(v) = data.iter().find(|&&v| v > 1) {
            return Err(Error::arg(format!("spike entries must be 0 or 1, found {v}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::arg(format!("dt must be positive, got {dt}")));
        }
        Ok(Self {
            data,
            dt: OrderedDt(dt),
        })
    }

    /// Builds a train from a real matrix whose entries are exactly 0 or 1.
    pub fn from_binary_f64(values: ArrayView2<'_, f64>, dt: f64) -> Result<Self> {
        let mut data = Array2::zeros(values.raw_dim());
        for (d, &v) in data.iter_mut().zip(values.iter()) {
            *d = if v == 0.0 {
                0
            } else if v == 1.0 {
                1
            } else {
                return Err(Error::arg(format!("non-binary spike value {v}")));
            };
        }
        Self::new(data, dt)
    }

    pub fn zeros(n_t: usize, neurons: usize) -> Result<Self> {
        Self::new(Array2::zeros((n_t, neurons)), 1.0)
    }

    pub fn n_t(&self) -> usize {
        self.data.nrows()
    }

    pub fn neurons(&self) -> usize {
        self.data.ncols()
    }

    pub fn dt(&self) -> f64 {
        self.dt.0
    }

    pub fn data(&self) -> &Array2<u8> {
        &self.data
    }

    pub fn to_f64(&self) -> Array2<f64> {
        self.data.mapv(f64::from)
    }

    pub fn total_spikes(&self) -> usize {
        self.data.iter().map(|&v| v as usize).sum()
    }

    /// The matrix transposed to `neuron × time`, the layout used when
    /// printing interval encodings point by point.
    pub fn point_rows(&self) -> Array2<u8> {
        self.data.t().to_owned()
    }

    /// Spike times of one neuron.
    pub fn spike_times(&self, neuron: usize) -> Vec<usize> {
        self.data
            .column(neuron)
            .iter()
            .enumerate()
            .filter_map(|(t, &v)| (v == 1).then_some(t))
            .collect()
    }

    /// Renders `neuron × time` rows of `0`/`1` characters.
    pub fn render_point_rows(&self) -> String {
        let mut out = String::new();
        for row in self.data.t().rows() {
            for &v in row {
                out.push(if v == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub const MAGIC: [u8; 4] = *b"SPKT";

    /// Binary container: `SPKT`, `n_t: u32 LE`, `neurons: u32 LE`, `dt: f64 LE`,
    /// then each time step's row packed MSB-first into `ceil(neurons / 8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let (n_t, n) = self.data.dim();
        let row_bytes = n.div_ceil(8);
        let mut out = Vec::with_capacity(20 + n_t * row_bytes);
        out.extend_from_slice(&Self::MAGIC);
        out.extend_from_slice(&(n_t as u32).to_le_bytes());
        out.extend_from_slice(&(n as u32).to_le_bytes());
        out.extend_from_slice(&self.dt.0.to_le_bytes());
        for row in self.data.rows() {
            let mut packed = vec![0u8; row_bytes];
            for (i, &v) in row.iter().enumerate() {
                if v == 1 {
                    packed[i / 8] |= 0x80 >> (i % 8);
                }
            }
            out.extend_from_slice(&packed);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 20 || bytes[..4] != Self::MAGIC {
            return Err(Error::Format("missing SPKT header".into()));
        }
        let n_t = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let dt = f64::from_le_bytes(bytes[12..20].try_into().unwrap());
        let row_bytes = n.div_ceil(8);
        let body = &bytes[20..];
        if body.len() != n_t * row_bytes {
            return Err(Error::Format(format!(
                "SPKT body has {} bytes, expected {}",
                body.len(),
                n_t * row_bytes
            )));
        }
        let data = Array2::from_shape_fn((n_t, n), |(t, i)| {
            (body[t * row_bytes + i / 8] >> (7 - i % 8)) & 1
        });
        Self::new(data, dt)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<u8>> = self.data.rows().into_iter().map(|r| r.to_vec()).collect();
        serde_json::json!({ "dt": self.dt.0, "spikes": rows })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            dt: f64,
            spikes: Vec<Vec<u8>>,
        }
        let doc: Doc = serde_json::from_value(value.clone())?;
        let n_t = doc.spikes.len();
        let n = doc.spikes.first().map_or(0, Vec::len);
        if doc.spikes.iter().any(|r| r.len() != n) {
            return Err(Error::Format("ragged spike rows".into()));
        }
        let flat: Vec<u8> = doc.spikes.into_iter().flatten().collect();
        let data = Array2::from_shape_vec((n_t, n), flat)
            .map_err(|e| Error::Format(e.to_string()))?;
        Self::new(data, doc.dt)
    }
}

/// Evenly spaced points `a + k (b - a) / (n - 1)`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalGrid {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl IntervalGrid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::arg(format!("interval needs a < b, got [{a}, {b}]")));
        }
        if n < 2 {
            return Err(Error::arg("a grid needs at least two points"));
        }
        Ok(Self { a, b, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / (self.n - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.n {
            self.b
        } else {
            self.a + k as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }

    /// Points mapped onto `[0, 1]` via `(x - a) / (b - a)`.
    pub fn normalized(&self) -> Vec<f64> {
        (0..self.n)
            .map(|k| k as f64 / (self.n - 1) as f64)
            .collect()
    }
}

fn check_unit(values: &[f64]) -> Result<()> {
    for &v in values {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                value: v,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    Ok(())
}

fn check_steps(n_t: usize) -> Result<()> {
    if n_t == 0 {
        return Err(Error::arg("n_t must be at least 1"));
    }
    Ok(())
}

/// Rate (Bernoulli) encoding: every step of neuron `i` fires with probability `values[i]`.
pub fn rate_encode(values: &[f64], n_t: usize, seed: u64) -> Result<SpikeTrain> {
    rate_encode_with(values, n_t, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn rate_encode_with<R: Rng + ?Sized>(values: &[f64], n_t: usize, rng: &mut R) -> Result<SpikeTrain> {
    check_unit(values)?;
    check_steps(n_t)?;
    if values.is_empty() {
        return Err(Error::dim("nothing to encode"));
    }
    let data = Array2::from_shape_fn((n_t, values.len()), |(_, i)| {
        u8::from(rng.random::<f64>() < values[i])
    });
    SpikeTrain::new(data, 1.0)
}

/// Mean firing per neuron along the time axis.
pub fn rate_decode(train: &SpikeTrain) -> Vec<f64> {
    train
        .data
        .mapv(f64::from)
        .mean_axis(Axis(0))
        .expect("non-empty train")
        .to_vec()
}

/// Quantile index of `v` among `n_t` equal bins of `[0, 1]`, with `v = 1`
/// folded into the last bin.
pub fn latency_quantile(v: f64, n_t: usize) -> usize {
    ((v * n_t as f64).floor() as usize).min(n_t - 1)
}

/// Time-to-first-spike encoding: one spike per neuron at
/// `(n_t - 1) - quantile(v)`, so bright values fire first.
pub fn latency_encode(values: &[f64], n_t: usize) -> Result<SpikeTrain> {
    check_unit(values)?;
    check_steps(n_t)?;
    if values.is_empty() {
        return Err(Error::dim("nothing to encode"));
    }
    let mut data = Array2::zeros((n_t, values.len()));
    for (i, &v) in values.iter().enumerate() {
        data[[n_t - 1 - latency_quantile(v, n_t), i]] = 1;
    }
    SpikeTrain::new(data, 1.0)
}

/// Identity-matrix interval encoding: point `k` fires only at step `k`.
pub fn identity_encode(grid: &IntervalGrid, n_t: usize) -> Result<SpikeTrain> {
    if n_t != grid.n {
        return Err(Error::arg(format!(
            "identity encoding needs n_t == N_x, got {n_t} and {}",
            grid.n
        )));
    }
    SpikeTrain::new(Array2::from_shape_fn((n_t, grid.n), |(t, k)| u8::from(t == k)), 1.0)
}

/// Lower-triangular interval encoding. `n_t` must be `m · N_x`; point `n`
/// fires during the first `m (n + 1)` steps.
pub fn lower_triangle_encode(grid: &IntervalGrid, n_t: usize) -> Result<SpikeTrain> {
    if n_t == 0 || n_t % grid.n != 0 {
        return Err(Error::arg(format!(
            "lower-triangular encoding needs n_t to be a positive multiple of N_x = {}, got {n_t}",
            grid.n
        )));
    }
    let m = n_t / grid.n;
    SpikeTrain::new(
        Array2::from_shape_fn((n_t, grid.n), |(t, k)| u8::from(t < m * (k + 1))),
        1.0,
    )
}

/// Lower-triangular encoding with fewer steps than points: point `n` fires
/// during the first `floor(n · n_t / N_x) + 1` steps, so neighbouring points
/// share a level and the code becomes a staircase.
pub fn lower_triangle_encode_coarse(grid: &IntervalGrid, n_t: usize) -> Result<SpikeTrain> {
    if n_t == 0 || n_t > grid.n {
        return Err(Error::arg(format!(
            "coarse lower-triangular encoding needs 1 <= n_t <= N_x = {}, got {n_t}",
            grid.n
        )));
    }
    SpikeTrain::new(
        Array2::from_shape_fn((n_t, grid.n), |(t, k)| u8::from(t <= k * n_t / grid.n)),
        1.0,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FloatPrecision {
    #[serde(rename = "32")]
    Single,
    #[serde(rename = "64")]
    Double,
}

impl FloatPrecision {
    pub fn bits(self) -> usize {
        match self {
            FloatPrecision::Single => 32,
            FloatPrecision::Double => 64,
        }
    }

    pub fn from_bits(bits: usize) -> Result<Self> {
        match bits {
            32 => Ok(FloatPrecision::Single),
            64 => Ok(FloatPrecision::Double),
            _ => Err(Error::arg(format!("float precision must be 32 or 64, got {bits}"))),
        }
    }
}

/// IEEE-754 bit pattern of `x`, most significant bit first.
pub fn float_encode(x: f64, precision: FloatPrecision) -> Result<Vec<u8>> {
    if !x.is_finite() {
        return Err(Error::arg(format!("cannot float-encode non-finite {x}")));
    }
    let (bits, width) = match precision {
        FloatPrecision::Single => (u64::from((x as f32).to_bits()), 32),
        FloatPrecision::Double => (x.to_bits(), 64),
    };
    Ok((0..width)
        .map(|i| ((bits >> (width - 1 - i)) & 1) as u8)
        .collect())
}

/// Inverse of [`float_encode`]. Single-precision rows decode to the exact
/// `f32` value widened to `f64`.
pub fn float_decode(bits: &[u8]) -> Result<f64> {
    let precision = FloatPrecision::from_bits(bits.len())?;
    let mut word = 0u64;
    for &b in bits {
        if b > 1 {
            return Err(Error::arg(format!("bit rows hold 0/1, found {b}")));
        }
        word = (word << 1) | u64::from(b);
    }
    let value = match precision {
        FloatPrecision::Single => f64::from(f32::from_bits(word as u32)),
        FloatPrecision::Double => f64::from_bits(word),
    };
    if !value.is_finite() {
        return Err(Error::arg("bit pattern encodes NaN or infinity"));
    }
    Ok(value)
}

/// Floating-point encoding of every grid point: `precision` time steps.
pub fn float_encode_grid(grid: &IntervalGrid, precision: FloatPrecision) -> Result<SpikeTrain> {
    let width = precision.bits();
    let mut data = Array2::zeros((width, grid.n));
    for (k, x) in grid.points().into_iter().enumerate() {
        for (t, b) in float_encode(x, precision)?.into_iter().enumerate() {
            data[[t, k]] = b;
        }
    }
    SpikeTrain::new(data, 1.0)
}

/// Direct encoding: `n_t` copies of the raw values as real-valued input currents.
pub fn direct_encode(values: &[f64], n_t: usize) -> Result<Array2<f64>> {
    check_steps(n_t)?;
    let row = Array1::from(values.to_vec());
    Ok(row
        .broadcast((n_t, values.len()))
        .expect("row broadcasts over time")
        .to_owned())
}

/// How interval points are turned into membrane input currents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GridEncoder {
    Rate { seed: u64 },
    Latency,
    Identity,
    /// `n_t >= N_x` uses the exact rule; fewer steps fall back to the staircase.
    LowerTriangular,
    FloatingPoint { precision: FloatPrecision },
    Direct,
}

impl GridEncoder {
    pub fn name(&self) -> &'static str {
        match self {
            GridEncoder::Rate { .. } => "rate",
            GridEncoder::Latency => "latency",
            GridEncoder::Identity => "identity",
            GridEncoder::LowerTriangular => "lower-triangular",
            GridEncoder::FloatingPoint { .. } => "floating-point",
            GridEncoder::Direct => "direct",
        }
    }

    /// Steps actually produced for a requested `n_t` (floating point ignores it).
    pub fn effective_steps(&self, n_t: usize) -> usize {
        match self {
            GridEncoder::FloatingPoint { precision } => precision.bits(),
            _ => n_t,
        }
    }

    /// Encodes every grid point into a `time × point` current matrix.
    pub fn encode_grid(&self, grid: &IntervalGrid, n_t: usize) -> Result<Array2<f64>> {
        let unit = grid.normalized();
        let train = match *self {
            GridEncoder::Rate { seed } => rate_encode(&unit, n_t, seed)?,
            GridEncoder::Latency => latency_encode(&unit, n_t)?,
            GridEncoder::Identity => identity_encode(grid, n_t)?,
            GridEncoder::LowerTriangular if n_t >= grid.n => lower_triangle_encode(grid, n_t)?,
            GridEncoder::LowerTriangular => lower_triangle_encode_coarse(grid, n_t)?,
            GridEncoder::FloatingPoint { precision } => float_encode_grid(grid, precision)?,
            GridEncoder::Direct => return direct_encode(&unit, n_t),
        };
        Ok(train.to_f64())
    }
}
