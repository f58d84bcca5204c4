//! One-dimensional distribution catalog.
//!
//! Every model exposes its density, distribution and survival functions,
//! exact moments, closed-form differential entropy where one exists, an
//! affine action `x -> a x + b`, reproducible sampling and a Poincaré
//! constant. Entropies are in nats throughout.
//!
//! One-sided families (exponential, gamma) carry a `shift` and a `reflected`
//! flag so that negation and translation stay inside the family: the model
//! describes `shift + E` or `shift - E` with `E` the unshifted base law.

mod poincare;
mod sampling;

use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::{digamma, gamma_lr, gamma_ur, ln_gamma};

use crate::error::{Error, Result};
use crate::grid::GridDensity;

pub use poincare::{spectral_poincare, spectral_poincare_at};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ln(2 pi e), the entropy offset of a standard Gaussian times two.
pub const LN_2PI_E: f64 = 2.837_877_066_409_345_3;

/// Tolerance for mixture weights to be silently renormalized.
const WEIGHT_TOLERANCE: f64 = 1e-9;

/// A one-dimensional law.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityModel {
    Gaussian {
        mean: f64,
        variance: f64,
    },
    Uniform {
        lower: f64,
        upper: f64,
    },
    Exponential {
        rate: f64,
        shift: f64,
        reflected: bool,
    },
    Laplace {
        location: f64,
        scale: f64,
    },
    Gamma {
        shape: f64,
        scale: f64,
        shift: f64,
        reflected: bool,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<DensityModel>,
    },
    Gridded(GridDensity),
}

/// Mean and variance of a model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
}

impl MomentSummary {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// Parameter record accepted by [`make_model`]; this is also the shape of a
/// distribution entry in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Gaussian {
        mean: f64,
        variance: f64,
    },
    Uniform {
        lower: f64,
        upper: f64,
    },
    Exponential {
        rate: f64,
        #[serde(default)]
        shift: f64,
        #[serde(default)]
        reflected: bool,
    },
    Laplace {
        location: f64,
        scale: f64,
    },
    Gamma {
        shape: f64,
        scale: f64,
        #[serde(default)]
        shift: f64,
        #[serde(default)]
        reflected: bool,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<ModelSpec>,
    },
}

/// Build and validate a model from its parameter record.
///
/// Mixture weights within 1e-9 of summing to one are renormalized; anything
/// further off is rejected.
pub fn make_model(spec: &ModelSpec) -> Result<DensityModel> {
    let model = match spec {
        ModelSpec::Gaussian { mean, variance } => DensityModel::Gaussian {
            mean: *mean,
            variance: *variance,
        },
        ModelSpec::Uniform { lower, upper } => DensityModel::Uniform {
            lower: *lower,
            upper: *upper,
        },
        ModelSpec::Exponential {
            rate,
            shift,
            reflected,
        } => DensityModel::Exponential {
            rate: *rate,
            shift: *shift,
            reflected: *reflected,
        },
        ModelSpec::Laplace { location, scale } => DensityModel::Laplace {
            location: *location,
            scale: *scale,
        },
        ModelSpec::Gamma {
            shape,
            scale,
            shift,
            reflected,
        } => DensityModel::Gamma {
            shape: *shape,
            scale: *scale,
            shift: *shift,
            reflected: *reflected,
        },
        ModelSpec::Mixture {
            weights,
            components,
        } => {
            let components = components
                .iter()
                .map(make_model)
                .collect::<Result<Vec<_>>>()?;
            return DensityModel::mixture(weights.clone(), components);
        }
    };
    model.validate()?;
    Ok(model)
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be finite, got {v}"
        )))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    finite(name, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

impl DensityModel {
    pub fn gaussian(mean: f64, variance: f64) -> Result<Self> {
        let m = DensityModel::Gaussian { mean, variance };
        m.validate()?;
        Ok(m)
    }

    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        let m = DensityModel::Uniform { lower, upper };
        m.validate()?;
        Ok(m)
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        let m = DensityModel::Exponential {
            rate,
            shift: 0.0,
            reflected: false,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn laplace(location: f64, scale: f64) -> Result<Self> {
        let m = DensityModel::Laplace { location, scale };
        m.validate()?;
        Ok(m)
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        let m = DensityModel::Gamma {
            shape,
            scale,
            shift: 0.0,
            reflected: false,
        };
        m.validate()?;
        Ok(m)
    }

    /// Finite mixture; weights are renormalized when within 1e-9 of one.
    pub fn mixture(weights: Vec<f64>, components: Vec<DensityModel>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyMixture);
        }
        if weights.len() != components.len() {
            return Err(Error::InvalidParameter(format!(
                "mixture has {} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        for w in &weights {
            finite("mixture weight", *w)?;
            if *w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "mixture weight must be nonnegative, got {w}"
                )));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::WeightsNotNormalized { sum });
        }
        let weights = weights.iter().map(|w| w / sum).collect();
        let m = DensityModel::Mixture {
            weights,
            components,
        };
        m.validate()?;
        Ok(m)
    }

    /// Check the kind-specific parameter constraints.
    pub fn validate(&self) -> Result<()> {
        match self {
            DensityModel::Gaussian { mean, variance } => {
                finite("mean", *mean)?;
                positive("variance", *variance)
            }
            DensityModel::Uniform { lower, upper } => {
                finite("lower", *lower)?;
                finite("upper", *upper)?;
                if upper > lower {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "uniform needs lower < upper, got [{lower}, {upper}]"
                    )))
                }
            }
            DensityModel::Exponential { rate, shift, .. } => {
                finite("shift", *shift)?;
                positive("rate", *rate)
            }
            DensityModel::Laplace { location, scale } => {
                finite("location", *location)?;
                positive("scale", *scale)
            }
            DensityModel::Gamma {
                shape,
                scale,
                shift,
                ..
            } => {
                finite("shift", *shift)?;
                positive("shape", *shape)?;
                positive("scale", *scale)
            }
            DensityModel::Mixture {
                weights,
                components,
            } => {
                if components.is_empty() {
                    return Err(Error::EmptyMixture);
                }
                let sum: f64 = weights.iter().sum();
                if (sum - 1.0).abs() > 1e-12 || weights.iter().any(|w| *w < 0.0) {
                    return Err(Error::WeightsNotNormalized { sum });
                }
                components.iter().try_for_each(DensityModel::validate)
            }
            DensityModel::Gridded(g) => g.validate(),
        }
    }

    /// Parameter record for analytic models; `None` for gridded ones.
    pub fn to_spec(&self) -> Option<ModelSpec> {
        Some(match self {
            DensityModel::Gaussian { mean, variance } => ModelSpec::Gaussian {
                mean: *mean,
                variance: *variance,
            },
            DensityModel::Uniform { lower, upper } => ModelSpec::Uniform {
                lower: *lower,
                upper: *upper,
            },
            DensityModel::Exponential {
                rate,
                shift,
                reflected,
            } => ModelSpec::Exponential {
                rate: *rate,
                shift: *shift,
                reflected: *reflected,
            },
            DensityModel::Laplace { location, scale } => ModelSpec::Laplace {
                location: *location,
                scale: *scale,
            },
            DensityModel::Gamma {
                shape,
                scale,
                shift,
                reflected,
            } => ModelSpec::Gamma {
                shape: *shape,
                scale: *scale,
                shift: *shift,
                reflected: *reflected,
            },
            DensityModel::Mixture {
                weights,
                components,
            } => ModelSpec::Mixture {
                weights: weights.clone(),
                components: components
                    .iter()
                    .map(DensityModel::to_spec)
                    .collect::<Option<Vec<_>>>()?,
            },
            DensityModel::Gridded(_) => return None,
        })
    }

    pub fn moments(&self) -> MomentSummary {
        match self {
            DensityModel::Gaussian { mean, variance } => MomentSummary {
                mean: *mean,
                variance: *variance,
            },
            DensityModel::Uniform { lower, upper } => MomentSummary {
                mean: 0.5 * (lower + upper),
                variance: (upper - lower).powi(2) / 12.0,
            },
            DensityModel::Exponential {
                rate,
                shift,
                reflected,
            } => MomentSummary {
                mean: shift + sign(*reflected) / rate,
                variance: 1.0 / (rate * rate),
            },
            DensityModel::Laplace { location, scale } => MomentSummary {
                mean: *location,
                variance: 2.0 * scale * scale,
            },
            DensityModel::Gamma {
                shape,
                scale,
                shift,
                reflected,
            } => MomentSummary {
                mean: shift + sign(*reflected) * shape * scale,
                variance: shape * scale * scale,
            },
            DensityModel::Mixture {
                weights,
                components,
            } => {
                let parts: Vec<MomentSummary> =
                    components.iter().map(DensityModel::moments).collect();
                let mean: f64 = weights.iter().zip(&parts).map(|(w, m)| w * m.mean).sum();
                let within: f64 = weights
                    .iter()
                    .zip(&parts)
                    .map(|(w, m)| w * m.variance)
                    .sum();
                let between: f64 = weights
                    .iter()
                    .zip(&parts)
                    .map(|(w, m)| w * (m.mean - mean).powi(2))
                    .sum();
                MomentSummary {
                    mean,
                    variance: within + between,
                }
            }
            DensityModel::Gridded(g) => g.moments(),
        }
    }

    /// Closed-interval hull of the support (endpoints may be infinite).
    pub fn support(&self) -> (f64, f64) {
        match self {
            DensityModel::Gaussian { .. } | DensityModel::Laplace { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            DensityModel::Uniform { lower, upper } => (*lower, *upper),
            DensityModel::Exponential {
                shift, reflected, ..
            }
            | DensityModel::Gamma {
                shift, reflected, ..
            } => {
                if *reflected {
                    (f64::NEG_INFINITY, *shift)
                } else {
                    (*shift, f64::INFINITY)
                }
            }
            DensityModel::Mixture { components, .. } => components
                .iter()
                .map(DensityModel::support)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| {
                    (lo.min(a), hi.max(b))
                }),
            DensityModel::Gridded(g) => g.support(),
        }
    }

    /// True when the density is smooth on the whole line (no jumps or kinks),
    /// so that point sampling on a grid is spectrally accurate.
    pub fn is_smooth(&self) -> bool {
        match self {
            DensityModel::Gaussian { .. } => true,
            DensityModel::Mixture { components, .. } => {
                components.iter().all(DensityModel::is_smooth)
            }
            _ => false,
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            DensityModel::Gaussian { mean, variance } => {
                let z = x - mean;
                (-0.5 * z * z / variance).exp() / (2.0 * std::f64::consts::PI * variance).sqrt()
            }
            DensityModel::Uniform { lower, upper } => {
                if x >= *lower && x <= *upper {
                    1.0 / (upper - lower)
                } else {
                    0.0
                }
            }
            DensityModel::Exponential {
                rate,
                shift,
                reflected,
            } => {
                let t = one_sided_arg(x, *shift, *reflected);
                if t < 0.0 {
                    0.0
                } else {
                    rate * (-rate * t).exp()
                }
            }
            DensityModel::Laplace { location, scale } => {
                (-(x - location).abs() / scale).exp() / (2.0 * scale)
            }
            DensityModel::Gamma {
                shape,
                scale,
                shift,
                reflected,
            } => {
                let t = one_sided_arg(x, *shift, *reflected);
                if t < 0.0 {
                    0.0
                } else if t == 0.0 {
                    match shape.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Less) => f64::INFINITY,
                        Some(std::cmp::Ordering::Equal) => 1.0 / scale,
                        _ => 0.0,
                    }
                } else {
                    ((shape - 1.0) * t.ln() - t / scale - ln_gamma(*shape) - shape * scale.ln())
                        .exp()
                }
            }
            DensityModel::Mixture {
                weights,
                components,
            } => weights
                .iter()
                .zip(components)
                .map(|(w, c)| w * c.pdf(x))
                .sum(),
            DensityModel::Gridded(g) => g.pdf(x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            DensityModel::Gaussian { mean, variance } => {
                0.5 * erfc(-(x - mean) / (2.0 * variance).sqrt())
            }
            DensityModel::Uniform { lower, upper } => {
                ((x - lower) / (upper - lower)).clamp(0.0, 1.0)
            }
            DensityModel::Exponential { rate, .. } => {
                self.one_sided_cdf(x, |t| -(-rate * t).exp_m1(), |t| (-rate * t).exp())
            }
            DensityModel::Laplace { location, scale } => {
                let z = (x - location) / scale;
                if z < 0.0 {
                    0.5 * z.exp()
                } else {
                    1.0 - 0.5 * (-z).exp()
                }
            }
            DensityModel::Gamma { shape, scale, .. } => self.one_sided_cdf(
                x,
                |t| gamma_lr(*shape, t / scale),
                |t| gamma_ur(*shape, t / scale),
            ),
            DensityModel::Mixture {
                weights,
                components,
            } => weights
                .iter()
                .zip(components)
                .map(|(w, c)| w * c.cdf(x))
                .sum(),
            DensityModel::Gridded(g) => g.cdf(x),
        }
    }

    /// Survival function `P(X > x)`, accurate deep in the right tail.
    pub fn sf(&self, x: f64) -> f64 {
        match self {
            DensityModel::Gaussian { mean, variance } => {
                0.5 * erfc((x - mean) / (2.0 * variance).sqrt())
            }
            DensityModel::Uniform { lower, upper } => {
                ((upper - x) / (upper - lower)).clamp(0.0, 1.0)
            }
            DensityModel::Exponential { rate, .. } => {
                self.one_sided_sf(x, |t| -(-rate * t).exp_m1(), |t| (-rate * t).exp())
            }
            DensityModel::Laplace { location, scale } => {
                let z = (x - location) / scale;
                if z < 0.0 {
                    1.0 - 0.5 * z.exp()
                } else {
                    0.5 * (-z).exp()
                }
            }
            DensityModel::Gamma { shape, scale, .. } => self.one_sided_sf(
                x,
                |t| gamma_lr(*shape, t / scale),
                |t| gamma_ur(*shape, t / scale),
            ),
            DensityModel::Mixture {
                weights,
                components,
            } => weights
                .iter()
                .zip(components)
                .map(|(w, c)| w * c.sf(x))
                .sum(),
            DensityModel::Gridded(g) => 1.0 - g.cdf(x),
        }
    }

    fn one_sided_cdf(
        &self,
        x: f64,
        base_cdf: impl Fn(f64) -> f64,
        base_sf: impl Fn(f64) -> f64,
    ) -> f64 {
        let (shift, reflected) = self.one_sided_params();
        if reflected {
            let t = shift - x;
            if t <= 0.0 {
                1.0
            } else {
                base_sf(t)
            }
        } else {
            let t = x - shift;
            if t <= 0.0 {
                0.0
            } else {
                base_cdf(t)
            }
        }
    }

    fn one_sided_sf(
        &self,
        x: f64,
        base_cdf: impl Fn(f64) -> f64,
        base_sf: impl Fn(f64) -> f64,
    ) -> f64 {
        let (shift, reflected) = self.one_sided_params();
        if reflected {
            let t = shift - x;
            if t <= 0.0 {
                0.0
            } else {
                base_cdf(t)
            }
        } else {
            let t = x - shift;
            if t <= 0.0 {
                1.0
            } else {
                base_sf(t)
            }
        }
    }

    fn one_sided_params(&self) -> (f64, bool) {
        match self {
            DensityModel::Exponential {
                shift, reflected, ..
            }
            | DensityModel::Gamma {
                shift, reflected, ..
            } => (*shift, *reflected),
            _ => unreachable!("not a one-sided family"),
        }
    }

    /// Mass strictly outside `[lo, hi]`.
    pub fn mass_outside(&self, lo: f64, hi: f64) -> f64 {
        (self.cdf(lo) + self.sf(hi)).max(0.0)
    }

    /// Smallest `x` (searched outward from the mean) with `cdf(x) <= mass`.
    pub fn lower_tail_point(&self, mass: f64) -> f64 {
        let m = self.moments();
        let sd = m.std_dev();
        let (lo_sup, _) = self.support();
        let mut hi = m.mean;
        let mut lo = m.mean - sd;
        let mut steps = 0;
        while self.cdf(lo) > mass {
            hi = lo;
            lo = m.mean - sd * 2f64.powi(steps + 1);
            steps += 1;
            if lo <= lo_sup || steps > 60 {
                return lo.max(lo_sup);
            }
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) > mass {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    /// Largest `x` (searched outward from the mean) with `sf(x) <= mass`.
    pub fn upper_tail_point(&self, mass: f64) -> f64 {
        let m = self.moments();
        let sd = m.std_dev();
        let (_, hi_sup) = self.support();
        let mut lo = m.mean;
        let mut hi = m.mean + sd;
        let mut steps = 0;
        while self.sf(hi) > mass {
            lo = hi;
            hi = m.mean + sd * 2f64.powi(steps + 1);
            steps += 1;
            if hi >= hi_sup || steps > 60 {
                return hi.min(hi_sup);
            }
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.sf(mid) > mass {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Differential entropy in nats for the analytic families; `None` for
    /// mixtures and gridded models, which go through the grid pipeline.
    pub fn closed_form_entropy(&self) -> Option<f64> {
        match self {
            DensityModel::Gaussian { variance, .. } => Some(0.5 * (LN_2PI_E + variance.ln())),
            DensityModel::Uniform { lower, upper } => Some((upper - lower).ln()),
            DensityModel::Exponential { rate, .. } => Some(1.0 - rate.ln()),
            DensityModel::Laplace { scale, .. } => Some(1.0 + (2.0 * scale).ln()),
            DensityModel::Gamma { shape, scale, .. } => {
                Some(shape + scale.ln() + ln_gamma(*shape) + (1.0 - shape) * digamma(*shape))
            }
            DensityModel::Mixture { .. } | DensityModel::Gridded(_) => None,
        }
    }

    /// Law of `a X + b`. Negating a one-sided family flips its `reflected`
    /// flag instead of leaving the family.
    pub fn affine(&self, a: f64, b: f64) -> Result<DensityModel> {
        finite("affine scale", a)?;
        finite("affine offset", b)?;
        if a == 0.0 {
            return Err(Error::DegenerateAffine);
        }
        let out = match self {
            DensityModel::Gaussian { mean, variance } => DensityModel::Gaussian {
                mean: a * mean + b,
                variance: a * a * variance,
            },
            DensityModel::Uniform { lower, upper } => {
                let (p, q) = (a * lower + b, a * upper + b);
                DensityModel::Uniform {
                    lower: p.min(q),
                    upper: p.max(q),
                }
            }
            DensityModel::Exponential {
                rate,
                shift,
                reflected,
            } => DensityModel::Exponential {
                rate: rate / a.abs(),
                shift: a * shift + b,
                reflected: *reflected != (a < 0.0),
            },
            DensityModel::Laplace { location, scale } => DensityModel::Laplace {
                location: a * location + b,
                scale: a.abs() * scale,
            },
            DensityModel::Gamma {
                shape,
                scale,
                shift,
                reflected,
            } => DensityModel::Gamma {
                shape: *shape,
                scale: a.abs() * scale,
                shift: a * shift + b,
                reflected: *reflected != (a < 0.0),
            },
            DensityModel::Mixture {
                weights,
                components,
            } => DensityModel::Mixture {
                weights: weights.clone(),
                components: components
                    .iter()
                    .map(|c| c.affine(a, b))
                    .collect::<Result<Vec<_>>>()?,
            },
            DensityModel::Gridded(g) => DensityModel::Gridded(g.affine(a, b)),
        };
        out.validate()?;
        Ok(out)
    }

    /// Law of `-X`.
    pub fn negate(&self) -> DensityModel {
        self.affine(-1.0, 0.0).expect("negation of a valid model")
    }

    /// Poincaré constant `R(X)`.
    ///
    /// Gaussian, uniform and exponential laws come from the closed-form
    /// table; every other kind goes through the spectral oracle, which
    /// returns `None` when it fails to converge or the support is
    /// disconnected.
    pub fn poincare_constant(&self) -> Result<Option<f64>> {
        let m = self.moments();
        if !m.variance.is_finite() {
            return Err(Error::InfiniteVariance);
        }
        Ok(match self {
            DensityModel::Gaussian { variance, .. } => Some(*variance),
            DensityModel::Uniform { lower, upper } => {
                Some((upper - lower).powi(2) / (std::f64::consts::PI.powi(2)))
            }
            DensityModel::Exponential { rate, .. } => Some(4.0 / (rate * rate)),
            DensityModel::Gridded(g) => poincare::grid_poincare(g),
            _ => {
                let (lo, hi) = self.oracle_window();
                spectral_poincare(|x| self.pdf(x), lo, hi)
            }
        })
    }

    /// Window used by the spectral oracle: mean ± 12 sd widened to the
    /// 1e-30 tail quantiles, clipped to the support.
    pub fn oracle_window(&self) -> (f64, f64) {
        let m = self.moments();
        let sd = m.std_dev();
        let (slo, shi) = self.support();
        let lo = (m.mean - 12.0 * sd)
            .min(self.lower_tail_point(1e-30))
            .max(slo);
        let hi = (m.mean + 12.0 * sd)
            .max(self.upper_tail_point(1e-30))
            .min(shi);
        (lo, hi)
    }

    /// `n` reproducible draws for the given seed.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        sampling::sample(self, n, seed)
    }
}

fn sign(reflected: bool) -> f64 {
    if reflected {
        -1.0
    } else {
        1.0
    }
}

fn one_sided_arg(x: f64, shift: f64, reflected: bool) -> f64 {
    if reflected {
        shift - x
    } else {
        x - shift
    }
}

/// Affine image of a model, as a free function.
pub fn affine(m: &DensityModel, a: f64, b: f64) -> Result<DensityModel> {
    m.affine(a, b)
}

/// Closed-form entropy, as a free function.
pub fn closed_form_entropy(m: &DensityModel) -> Option<f64> {
    m.closed_form_entropy()
}

/// Renders models in the expression grammar accepted by [`crate::expr`].
impl fmt::Display for DensityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityModel::Gaussian { mean, variance } => write!(f, "gaussian({mean},{variance})"),
            DensityModel::Uniform { lower, upper } => write!(f, "uniform({lower},{upper})"),
            DensityModel::Exponential {
                rate,
                shift,
                reflected,
            } => {
                if *reflected {
                    write!(f, "exponential({rate},{shift},-1)")
                } else if *shift != 0.0 {
                    write!(f, "exponential({rate},{shift})")
                } else {
                    write!(f, "exponential({rate})")
                }
            }
            DensityModel::Laplace { location, scale } => write!(f, "laplace({location},{scale})"),
            DensityModel::Gamma {
                shape,
                scale,
                shift,
                reflected,
            } => {
                if *reflected {
                    write!(f, "gamma({shape},{scale},{shift},-1)")
                } else if *shift != 0.0 {
                    write!(f, "gamma({shape},{scale},{shift})")
                } else {
                    write!(f, "gamma({shape},{scale})")
                }
            }
            DensityModel::Mixture {
                weights,
                components,
            } => {
                write!(f, "mixture(")?;
                for (i, (w, c)) in weights.iter().zip(components).enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{w}*{c}")?;
                }
                write!(f, ")")
            }
            DensityModel::Gridded(g) => write!(
                f,
                "gridded(origin={},step={},count={})",
                g.spec.origin, g.spec.step, g.spec.count
            ),
        }
    }
}
