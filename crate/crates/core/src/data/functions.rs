//! Analytic regression targets.

use serde::{Deserialize, Serialize};

use super::grf::poisson_solve_1d;
use crate::encoding::IntervalGrid;
use crate::error::Result;

/// 1 on `[-1, 0]`, 2 on `(0, 1]`.
pub fn step(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        2.0
    }
}

pub fn square(x: f64) -> f64 {
    x * x
}

/// Mexican-hat wavelet `(1/(πσ⁴)) (1 - r²/(2σ²)) exp(-r²/(2σ²))`.
pub fn ricker2d(x: f64, y: f64, sigma: f64) -> f64 {
    let r2 = x * x + y * y;
    let s2 = sigma * sigma;
    (1.0 - 0.5 * r2 / s2) * (-r2 / (2.0 * s2)).exp() / (std::f64::consts::PI * s2 * s2)
}

pub const RICKER_SIGMA: f64 = 0.4;

/// `n × n` tensor grid on `[-1, 1]²`, row-major in `(x, y)`, with the
/// wavelet values.
pub fn ricker_grid(n: usize, sigma: f64) -> Result<(IntervalGrid, Vec<(usize, usize)>, Vec<f64>)> {
    let axis = IntervalGrid::new(-1.0, 1.0, n)?;
    let xs = axis.points();
    let mut idx = Vec::with_capacity(n * n);
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            idx.push((i, j));
            values.push(ricker2d(xs[i], xs[j], sigma));
        }
    }
    Ok((axis, idx, values))
}

/// One-dimensional targets for the naive regression experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum TestFunction {
    Step,
    Square,
    /// Solution of `u'' = sin(kx)` with zero Dirichlet data.
    SinOde {
        #[serde(default = "default_k")]
        k: f64,
    },
}

fn default_k() -> f64 {
    std::f64::consts::PI
}

impl TestFunction {
    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::Step => "step",
            TestFunction::Square => "square",
            TestFunction::SinOde { .. } => "sin-ode",
        }
    }

    pub fn all() -> [TestFunction; 3] {
        [
            TestFunction::Step,
            TestFunction::Square,
            TestFunction::SinOde { k: default_k() },
        ]
    }

    pub fn default_grid(&self, n: usize) -> Result<IntervalGrid> {
        match self {
            TestFunction::Step => IntervalGrid::new(-1.0, 1.0, n),
            _ => IntervalGrid::new(0.0, 1.0, n),
        }
    }

    pub fn values(&self, grid: &IntervalGrid) -> Result<Vec<f64>> {
        let xs = grid.points();
        Ok(match *self {
            TestFunction::Step => xs.iter().map(|&x| step(x)).collect(),
            TestFunction::Square => xs.iter().map(|&x| square(x)).collect(),
            TestFunction::SinOde { k } => {
                let f: Vec<f64> = xs.iter().map(|&x| (k * x).sin()).collect();
                poisson_solve_1d(&f, grid)?
            }
        })
    }
}
