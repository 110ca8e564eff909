//! Gaussian random fields, 1-D Poisson solves and additive noise.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::encoding::IntervalGrid;
use crate::error::{Error, Result};

const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-6;

/// Squared-exponential kernel `exp(-(x - x')² / (2ℓ²))`.
pub fn rbf_kernel(x: f64, y: f64, length_scale: f64) -> f64 {
    let d = x - y;
    (-d * d / (2.0 * length_scale * length_scale)).exp()
}

/// Zero-mean GP sampler with a cached Cholesky factor.
#[derive(Debug, Clone)]
pub struct GrfSampler {
    factor: DMatrix<f64>,
    jitter: f64,
}

impl GrfSampler {
    pub fn new(grid: &IntervalGrid, length_scale: f64) -> Result<Self> {
        if !(length_scale > 0.0 && length_scale.is_finite()) {
            return Err(Error::arg(format!("length scale must be positive, got {length_scale}")));
        }
        let xs = grid.points();
        let n = xs.len();
        let cov = DMatrix::from_fn(n, n, |i, j| rbf_kernel(xs[i], xs[j], length_scale));
        let mut jitter = JITTER_START;
        loop {
            let jittered = &cov + DMatrix::identity(n, n) * jitter;
            if let Some(chol) = jittered.cholesky() {
                return Ok(Self {
                    factor: chol.l(),
                    jitter,
                });
            }
            jitter *= 10.0;
            if jitter > JITTER_MAX * 1.000_001 {
                return Err(Error::Numeric(format!(
                    "covariance not positive definite with jitter up to {JITTER_MAX}"
                )));
            }
        }
    }

    /// Jitter that made the covariance factorizable.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn sample(&self, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = DVector::from_fn(self.factor.nrows(), |_, _| StandardNormal.sample(&mut rng));
        (&self.factor * z).iter().copied().collect()
    }
}

pub fn grf_sample(grid: &IntervalGrid, length_scale: f64, seed: u64) -> Result<Vec<f64>> {
    Ok(GrfSampler::new(grid, length_scale)?.sample(seed))
}

/// Solves `u'' = f` with `u(a) = u(b) = 0` by second-order central
/// differences. `f` is sampled on every grid point; boundary entries of `f`
/// are ignored.
pub fn poisson_solve_1d(f: &[f64], grid: &IntervalGrid) -> Result<Vec<f64>> {
    let n = grid.n;
    if n < 3 {
        return Err(Error::arg("Poisson solve needs at least three grid points"));
    }
    if f.len() != n {
        return Err(Error::dim(format!("f has {} values for {n} grid points", f.len())));
    }
    let h2 = grid.spacing() * grid.spacing();
    let m = n - 2;
    // Thomas algorithm on the constant tridiagonal (1, -2, 1).
    let mut c_prime = vec![0.0; m];
    let mut d_prime = vec![0.0; m];
    for i in 0..m {
        let rhs = f[i + 1] * h2;
        let (denom, prev_d): (f64, f64) = if i == 0 {
            (-2.0, 0.0)
        } else {
            (-2.0 - c_prime[i - 1], d_prime[i - 1])
        };
        assert!(denom.abs() > f64::EPSILON, "tridiagonal Poisson system is singular");
        c_prime[i] = 1.0 / denom;
        d_prime[i] = (rhs - prev_d) / denom;
    }
    let mut u = vec![0.0; n];
    for i in (0..m).rev() {
        let next = if i + 1 < m { u[i + 2] } else { 0.0 };
        u[i + 1] = d_prime[i] - c_prime[i] * next;
    }
    Ok(u)
}

/// `values + N(0, σ²)` drawn from a seeded stream.
pub fn add_noise(values: &[f64], sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::arg(format!("noise sigma must be non-negative, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(values.to_vec());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::arg(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(values.iter().map(|v| v + normal.sample(&mut rng)).collect())
}
