//! Seeded random corpora and the corpus runner for the continuous registry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::inverse::inverse_theorem_check;
use super::registry::{run_check, CheckDef, Param, REGISTRY};
use crate::distributions::DensityModel;
use crate::grid::Numerics;
use crate::report::InequalityReport;

pub const DEFAULT_CORPUS_SIZE: usize = 100;

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}

/// `count` models cycling through Gaussian, uniform, exponential, Laplace
/// and 2-3 component Gaussian mixtures with random parameters.
pub fn random_corpus(seed: u64, count: usize) -> Vec<DensityModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let r = &mut rng;
            match i % 5 {
                0 => DensityModel::Gaussian {
                    mean: r.random_range(-4.0..=4.0),
                    variance: log_uniform(r, 0.25, 4.0),
                },
                1 => {
                    let lower = r.random_range(-4.0..=4.0);
                    DensityModel::Uniform {
                        lower,
                        upper: lower + log_uniform(r, 0.25, 4.0),
                    }
                }
                2 => DensityModel::Exponential {
                    rate: log_uniform(r, 0.25, 4.0),
                    shift: r.random_range(-4.0..=4.0),
                    reflected: r.random_bool(0.5),
                },
                3 => DensityModel::Laplace {
                    location: r.random_range(-4.0..=4.0),
                    scale: log_uniform(r, 0.25, 2.0),
                },
                _ => {
                    let k = r.random_range(2..=3);
                    let raw: Vec<f64> = (0..k).map(|_| r.random_range(0.1..=1.0)).collect();
                    let total: f64 = raw.iter().sum();
                    let components = (0..k)
                        .map(|_| DensityModel::Gaussian {
                            mean: r.random_range(-4.0..=4.0),
                            variance: r.random_range(0.25..=4.0),
                        })
                        .collect();
                    DensityModel::Mixture {
                        weights: raw.iter().map(|w| w / total).collect(),
                        components,
                    }
                }
            }
        })
        .collect()
}

/// One scheduled evaluation: a check, a parameter value and the corpus
/// indices of its inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub def: &'static CheckDef,
    pub param: Param,
    pub indices: Vec<usize>,
}

/// For corpus index `i` the inputs are models `i, i+1, ...` (mod size).
pub fn schedule(defs: &[&'static CheckDef], corpus_len: usize) -> Vec<Task> {
    let mut tasks = Vec::new();
    for def in defs {
        for &param in def.params {
            let k = def.arity(param);
            for i in 0..corpus_len {
                tasks.push(Task {
                    def,
                    param,
                    indices: (0..k).map(|j| (i + j) % corpus_len).collect(),
                });
            }
        }
    }
    tasks
}

/// Run tasks concurrently; results come back in task order and failures
/// become skipped reports.
pub fn run_tasks(
    tasks: &[Task],
    corpus: &[DensityModel],
    numerics: &Numerics,
) -> Vec<InequalityReport> {
    tasks
        .par_iter()
        .map(|t| {
            let models: Vec<DensityModel> = t.indices.iter().map(|&i| corpus[i].clone()).collect();
            let mut r = run_check(t.def, &models, t.param, numerics).unwrap_or_else(|e| {
                InequalityReport::skipped(
                    t.def.id,
                    super::registry::describe_inputs(t.def, &models, t.param),
                    e.to_string(),
                )
            });
            r.inputs.push(format!("corpus_index={}", t.indices[0]));
            r
        })
        .collect()
}

/// The full registry over a corpus.
pub fn run_registry(corpus: &[DensityModel], numerics: &Numerics) -> Vec<InequalityReport> {
    let defs: Vec<&'static CheckDef> = REGISTRY.iter().collect();
    run_tasks(&schedule(&defs, corpus.len()), corpus, numerics)
}

/// The inverse-theorem bundle for every corpus model, in corpus order.
pub fn run_inverse(corpus: &[DensityModel], numerics: &Numerics) -> Vec<InequalityReport> {
    corpus
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let mut reports = inverse_theorem_check(m, numerics).unwrap_or_else(|e| {
                vec![InequalityReport::skipped(
                    "inverse",
                    vec![format!("X={m}")],
                    e.to_string(),
                )]
            });
            for r in &mut reports {
                r.inputs.push(format!("corpus_index={i}"));
            }
            reports
        })
        .flatten()
        .collect()
}
