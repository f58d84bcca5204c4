//! Kozachenko–Leonenko nearest-neighbour entropy estimation for scalar
//! samples.

use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::digamma;

use crate::error::{Error, Result};
use crate::expr::Expression;

pub const DEFAULT_K: usize = 5;
pub const MIN_SAMPLES: usize = 50;
/// Number of disjoint folds used for the standard error.
pub const FOLDS: usize = 20;
/// Relative size of the jitter added when samples contain exact ties.
const JITTER_SCALE: f64 = 1e-12;
const JITTER_SEED: u64 = 0x6a69_7474_6572;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub value: f64,
    pub stderr: f64,
    pub n: usize,
    pub k: usize,
}

/// Entropy estimate in nats with a fold-based standard error.
///
/// The standard error is `sd(fold estimates) / sqrt(folds)` over up to 20
/// disjoint consecutive folds, each estimated independently.
pub fn knn_entropy(samples: &[f64], k: usize) -> Result<EstimateResult> {
    let n = samples.len();
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            need: MIN_SAMPLES,
            got: n,
        });
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "neighbour order {k} must lie in [1, {}]",
            n - 1
        )));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("samples must be finite".into()));
    }
    let value = kl_estimate(samples, k)?;

    let folds = FOLDS.min(n / (2 * (k + 1))).max(2);
    let size = n / folds;
    let fold_values: Vec<f64> = (0..folds)
        .into_par_iter()
        .map(|j| kl_estimate(&samples[j * size..(j + 1) * size], k.min(size - 1)))
        .collect::<Result<_>>()?;
    let mean = fold_values.iter().sum::<f64>() / folds as f64;
    let var = fold_values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (folds - 1) as f64;
    let stderr = (var / folds as f64).sqrt().max(f64::MIN_POSITIVE);
    Ok(EstimateResult {
        value,
        stderr,
        n,
        k,
    })
}

fn kl_estimate(samples: &[f64], k: usize) -> Result<f64> {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if xs[0] == xs[n - 1] {
        return Err(Error::DegenerateSamples);
    }
    if xs.windows(2).any(|w| w[0] == w[1]) {
        let scale = JITTER_SCALE * xs[0].abs().max(xs[n - 1].abs()).max(xs[n - 1] - xs[0]);
        let mut rng = ChaCha8Rng::seed_from_u64(JITTER_SEED);
        xs.iter_mut()
            .for_each(|x| *x += scale * (rng.random::<f64>() - 0.5));
        xs.sort_by(f64::total_cmp);
    }
    let mut log_sum = 0.0;
    for i in 0..n {
        // merge outward from i until k neighbours are taken
        let (mut l, mut r) = (i, i);
        let mut eps = 0.0;
        for _ in 0..k {
            let dl = if l > 0 {
                xs[i] - xs[l - 1]
            } else {
                f64::INFINITY
            };
            let dr = if r + 1 < n {
                xs[r + 1] - xs[i]
            } else {
                f64::INFINITY
            };
            if dl <= dr {
                l -= 1;
                eps = dl;
            } else {
                r += 1;
                eps = dr;
            }
        }
        if eps <= 0.0 {
            return Err(Error::DegenerateSamples);
        }
        log_sum += eps.ln();
    }
    Ok(digamma(n as f64) - digamma(k as f64) + LN_2 + log_sum / n as f64)
}

/// Sample every independent term of `expr` with seeds derived from `seed`,
/// combine, and estimate the entropy of the result.
pub fn estimate_functional(
    expr: &Expression,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<EstimateResult> {
    knn_entropy(&expr.sample(n, seed), k)
}
