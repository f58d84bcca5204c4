use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Normal};

use super::DensityModel;
use crate::grid::GridSampler;

pub(super) fn sample(m: &DensityModel, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let DensityModel::Gridded(g) = m {
        let sampler = GridSampler::new(g);
        return (0..n).map(|_| sampler.quantile(rng.random())).collect();
    }
    (0..n).map(|_| draw(m, &mut rng)).collect()
}

fn draw<R: Rng>(m: &DensityModel, rng: &mut R) -> f64 {
    match m {
        DensityModel::Gaussian { mean, variance } => Normal::new(*mean, variance.sqrt())
            .expect("validated variance")
            .sample(rng),
        DensityModel::Uniform { lower, upper } => lower + (upper - lower) * rng.random::<f64>(),
        DensityModel::Exponential {
            rate,
            shift,
            reflected,
        } => {
            let e = Exp::new(*rate).expect("validated rate").sample(rng);
            if *reflected {
                shift - e
            } else {
                shift + e
            }
        }
        DensityModel::Laplace { location, scale } => {
            let u: f64 = rng.random::<f64>() - 0.5;
            location - scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
        }
        DensityModel::Gamma {
            shape,
            scale,
            shift,
            reflected,
        } => {
            let g = Gamma::new(*shape, *scale)
                .expect("validated gamma")
                .sample(rng);
            if *reflected {
                shift - g
            } else {
                shift + g
            }
        }
        DensityModel::Mixture {
            weights,
            components,
        } => {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = components.len() - 1;
            for (i, w) in weights.iter().enumerate() {
                acc += w;
                if u < acc {
                    pick = i;
                    break;
                }
            }
            draw(&components[pick], rng)
        }
        DensityModel::Gridded(g) => {
            let u: f64 = rng.random();
            g.quantile(u)
        }
    }
}
