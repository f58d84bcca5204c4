//! Gridded densities: discretization, convolution, quadrature entropy,
//! relative entropy and moment-matched Gaussian fits.
//!
//! A grid stores one value per cell; node `i` sits at the cell centre
//! `origin + i * step`. Smooth models are point-sampled at the centres, all
//! others store exact cell averages computed from their distribution
//! function, so the only mass lost at discretization is the truncated tail.
//!
//! Every grid carries `error_estimate`, a conservative bound (nats) on the
//! entropy error inherited from truncation, resampling and earlier
//! convolutions. [`entropy`] adds a Richardson term obtained by recomputing
//! on the half-resolution grid.

mod pchip;

use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::distributions::{DensityModel, MomentSummary};
use crate::error::{Error, Result};
use pchip::Pchip;

pub const DEFAULT_COUNT: usize = 1 << 14;
pub const DEFAULT_WINDOW_SIGMAS: f64 = 12.0;
pub const MIN_COUNT: usize = 1 << 8;
/// Hard cap on grid size; larger convolution outputs are coarsened.
pub const MAX_COUNT: usize = 1 << 21;

/// Widest window (in standard deviations) tried before giving up on a tail.
const MAX_WINDOW_SIGMAS: f64 = 64.0;
/// Target truncated mass per side.
const TAIL_TARGET: f64 = 5e-13;
/// Truncated mass beyond which the grid pipeline refuses a model.
const TAIL_LIMIT: f64 = 1e-6;
/// Mass trimmed from each end of a convolution output.
const TRIM_MASS: f64 = 1e-16;
/// Growth allowed when two grids of different steps are aligned.
const ALIGN_GROWTH: usize = 4;
/// Densities below this are treated as zero.
const DENSITY_FLOOR: f64 = 1e-300;

/// Grid numerics shared by every pipeline stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    pub grid_count: usize,
    pub window_sigmas: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            grid_count: DEFAULT_COUNT,
            window_sigmas: DEFAULT_WINDOW_SIGMAS,
        }
    }
}

impl Numerics {
    pub fn validate(&self) -> Result<()> {
        if !self.grid_count.is_power_of_two()
            || self.grid_count < MIN_COUNT
            || self.grid_count > MAX_COUNT
        {
            return Err(Error::InvalidParameter(format!(
                "grid count must be a power of two in [2^8, 2^21], got {}",
                self.grid_count
            )));
        }
        if !(self.window_sigmas.is_finite() && self.window_sigmas >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "window must be at least one standard deviation, got {}",
                self.window_sigmas
            )));
        }
        Ok(())
    }
}

/// A value in nats together with its numerical error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Centre of cell 0.
    pub origin: f64,
    pub step: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn node(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.step
    }

    /// Left edge of cell 0 and right edge of the last cell.
    pub fn extent(&self) -> (f64, f64) {
        let half = 0.5 * self.step;
        (self.origin - half, self.node(self.count - 1) + half)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    pub spec: GridSpec,
    /// Density per unit length, one value per cell.
    pub values: Vec<f64>,
    /// `|1 - sum(values) * step|` before the last renormalization.
    pub mass_defect: f64,
    /// Accumulated entropy error bound in nats.
    pub error_estimate: f64,
}

/// Entropy error attributed to a lost mass `m`.
fn truncation_error(m: f64) -> f64 {
    if m > 0.0 {
        m * (2.0 - m.ln())
    } else {
        0.0
    }
}

fn raw_entropy(values: &[f64], step: f64) -> f64 {
    -values
        .iter()
        .filter(|&&v| v > DENSITY_FLOOR)
        .map(|&v| v * v.ln())
        .sum::<f64>()
        * step
}

fn half_resolution(values: &[f64]) -> Vec<f64> {
    values
        .chunks(2)
        .map(|c| 0.5 * c.iter().sum::<f64>())
        .collect()
}

impl GridDensity {
    /// Build from raw values, recording the mass defect and renormalizing.
    pub fn from_values(
        origin: f64,
        step: f64,
        mut values: Vec<f64>,
        inherited_err: f64,
    ) -> Result<Self> {
        if !(step > 0.0 && step.is_finite() && origin.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid needs finite origin and positive step, got {origin}, {step}"
            )));
        }
        for v in values.iter_mut() {
            if !v.is_finite() || *v < DENSITY_FLOOR {
                *v = 0.0;
            }
        }
        let count = values.len().next_power_of_two().max(MIN_COUNT);
        values.resize(count, 0.0);
        let mass: f64 = values.iter().sum::<f64>() * step;
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::InvalidParameter("grid carries no mass".into()));
        }
        let mass_defect = (1.0 - mass).abs();
        values.iter_mut().for_each(|v| *v /= mass);
        Ok(GridDensity {
            spec: GridSpec {
                origin,
                step,
                count,
            },
            values,
            mass_defect,
            error_estimate: inherited_err + truncation_error(mass_defect),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.spec.count || !self.spec.count.is_power_of_two() {
            return Err(Error::InvalidParameter(
                "grid count must be a power of two".into(),
            ));
        }
        if self.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "grid values must be finite and nonnegative".into(),
            ));
        }
        let mass = self.mass();
        if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "grid mass {mass} is not 1"
            )));
        }
        Ok(())
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spec.step
    }

    pub fn moments(&self) -> MomentSummary {
        let h = self.spec.step;
        let mass = self.mass();
        let mean = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.spec.node(i))
            .sum::<f64>()
            * h
            / mass;
        let variance = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * (self.spec.node(i) - mean).powi(2))
            .sum::<f64>()
            * h
            / mass;
        MomentSummary { mean, variance }
    }

    /// Extent of the cells carrying positive density.
    pub fn support(&self) -> (f64, f64) {
        let first = self.values.iter().position(|&v| v > 0.0).unwrap_or(0);
        let last = self.values.iter().rposition(|&v| v > 0.0).unwrap_or(0);
        let half = 0.5 * self.spec.step;
        (self.spec.node(first) - half, self.spec.node(last) + half)
    }

    fn cell_of(&self, x: f64) -> Option<usize> {
        let (lo, _) = self.spec.extent();
        let s = ((x - lo) / self.spec.step).floor();
        if s >= 0.0 && (s as usize) < self.spec.count {
            Some(s as usize)
        } else {
            None
        }
    }

    /// Piecewise-constant density.
    pub fn pdf(&self, x: f64) -> f64 {
        self.cell_of(x).map_or(0.0, |i| self.values[i])
    }

    /// Cumulative mass at the right edge of every cell.
    pub fn cumulative(&self) -> Vec<f64> {
        self.values
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v * self.spec.step;
                Some(*acc)
            })
            .collect()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.spec.extent();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let i = self.cell_of(x).unwrap_or(self.spec.count - 1);
        let before: f64 = self.values[..i].iter().sum::<f64>() * self.spec.step;
        let left = lo + i as f64 * self.spec.step;
        (before + self.values[i] * (x - left)).min(1.0)
    }

    /// Inverse of the piecewise-linear distribution function.
    pub fn quantile(&self, u: f64) -> f64 {
        quantile_from_cumulative(&self.spec, &self.values, &self.cumulative(), u)
    }

    /// Law of `a X + b`; the grid keeps its count.
    pub fn affine(&self, a: f64, b: f64) -> GridDensity {
        let base = if a < 0.0 { reflect(self) } else { self.clone() };
        let s = a.abs();
        GridDensity {
            spec: GridSpec {
                origin: s * base.spec.origin + b,
                step: s * base.spec.step,
                count: base.spec.count,
            },
            values: base.values.iter().map(|v| v / s).collect(),
            mass_defect: base.mass_defect,
            error_estimate: base.error_estimate,
        }
    }

    /// Same window and count semantics, new step; monotone cubic
    /// interpolation of the density when refining and of the distribution
    /// function when coarsening, then renormalized. The entropy change is
    /// booked into `error_estimate`.
    pub fn resample(&self, step: f64) -> Result<GridDensity> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!("resample step {step}")));
        }
        let (lo, hi) = self.spec.extent();
        let n = ((hi - lo) / step - 1e-9).ceil().max(1.0) as usize;
        if n > MAX_COUNT {
            return Err(Error::IncompatibleGrids(format!(
                "resampling to step {step} needs {n} cells"
            )));
        }
        let origin = lo + 0.5 * step;
        let h = self.spec.step;
        let values: Vec<f64> = if step <= h {
            let p = Pchip::new(self.spec.origin, h, &self.values);
            (0..n)
                .map(|i| {
                    let x = origin + i as f64 * step;
                    if x < lo || x > hi {
                        0.0
                    } else {
                        p.eval(x).max(0.0)
                    }
                })
                .collect()
        } else {
            let mut cum = Vec::with_capacity(self.spec.count + 1);
            cum.push(0.0);
            cum.extend(self.cumulative());
            let p = Pchip::new(lo, h, &cum);
            let total = *cum.last().unwrap();
            let at = |x: f64| {
                if x <= lo {
                    0.0
                } else if x >= hi {
                    total
                } else {
                    p.eval(x)
                }
            };
            (0..n)
                .map(|i| {
                    let a = lo + i as f64 * step;
                    ((at(a + step) - at(a)) / step).max(0.0)
                })
                .collect()
        };
        let before = raw_entropy(&self.values, h);
        let mut out = GridDensity::from_values(origin, step, values, self.error_estimate)?;
        let after = raw_entropy(&out.values, step);
        out.error_estimate += (after - before).abs();
        out.mass_defect = out.mass_defect.max(self.mass_defect);
        Ok(out)
    }

    /// Merge neighbouring cells pairwise (step doubles).
    fn coarsen(&self) -> Result<GridDensity> {
        let merged = half_resolution(&self.values);
        let step = 2.0 * self.spec.step;
        let origin = self.spec.origin + 0.5 * self.spec.step;
        let before = raw_entropy(&self.values, self.spec.step);
        let mut out = GridDensity::from_values(origin, step, merged, self.error_estimate)?;
        out.error_estimate += (raw_entropy(&out.values, step) - before).abs();
        Ok(out)
    }

    fn trimmed(&self) -> (usize, usize, f64) {
        let h = self.spec.step;
        let mut first = 0;
        let mut acc = 0.0;
        while first < self.values.len() && acc + self.values[first] * h < TRIM_MASS {
            acc += self.values[first] * h;
            first += 1;
        }
        let mut last = self.values.len();
        let mut acc_r = 0.0;
        while last > first + 1 && acc_r + self.values[last - 1] * h < TRIM_MASS {
            acc_r += self.values[last - 1] * h;
            last -= 1;
        }
        (first, last, acc + acc_r)
    }
}

fn quantile_from_cumulative(spec: &GridSpec, values: &[f64], cum: &[f64], u: f64) -> f64 {
    let total = *cum.last().unwrap_or(&1.0);
    let target = u.clamp(0.0, 1.0) * total;
    let i = cum.partition_point(|&c| c < target).min(values.len() - 1);
    let before = if i == 0 { 0.0 } else { cum[i - 1] };
    let left = spec.extent().0 + i as f64 * spec.step;
    if values[i] > 0.0 {
        left + ((target - before) / values[i]).clamp(0.0, spec.step)
    } else {
        left
    }
}

/// Draw-friendly view of a grid: precomputed cumulative masses.
pub(crate) struct GridSampler<'a> {
    grid: &'a GridDensity,
    cum: Vec<f64>,
}

impl<'a> GridSampler<'a> {
    pub(crate) fn new(grid: &'a GridDensity) -> Self {
        GridSampler {
            cum: grid.cumulative(),
            grid,
        }
    }

    pub(crate) fn quantile(&self, u: f64) -> f64 {
        quantile_from_cumulative(&self.grid.spec, &self.grid.values, &self.cum, u)
    }
}

/// Window for a model: mean ± `window_sigmas` standard deviations clipped to
/// the support, widened until each tail holds at most 5e-13.
fn window(m: &DensityModel, window_sigmas: f64) -> Result<(f64, f64, f64)> {
    let mo = m.moments();
    if !mo.variance.is_finite() {
        return Err(Error::InfiniteVariance);
    }
    let sd = mo.std_dev();
    let (slo, shi) = m.support();
    let mut lo = (mo.mean - window_sigmas * sd).max(slo);
    let mut hi = (mo.mean + window_sigmas * sd).min(shi);
    let lo_limit = (mo.mean - MAX_WINDOW_SIGMAS * sd).max(slo);
    let hi_limit = (mo.mean + MAX_WINDOW_SIGMAS * sd).min(shi);
    while lo > lo_limit && m.cdf(lo) > TAIL_TARGET {
        lo = (lo - sd).max(lo_limit);
    }
    while hi < hi_limit && m.sf(hi) > TAIL_TARGET {
        hi = (hi + sd).min(hi_limit);
    }
    let tail = m.mass_outside(lo, hi);
    if tail > TAIL_LIMIT {
        return Err(Error::TailTooHeavy { mass: tail });
    }
    Ok((lo, hi, tail))
}

/// Discretize a model onto `count` cells.
pub fn discretize(m: &DensityModel, window_sigmas: f64, count: usize) -> Result<GridDensity> {
    Numerics {
        grid_count: count,
        window_sigmas,
    }
    .validate()?;
    if let DensityModel::Gridded(g) = m {
        return Ok(g.clone());
    }
    let (lo, hi, _) = window(m, window_sigmas)?;
    let h = (hi - lo) / count as f64;
    let origin = lo + 0.5 * h;
    let values: Vec<f64> = if m.is_smooth() {
        (0..count).map(|i| m.pdf(origin + i as f64 * h)).collect()
    } else {
        let edges: Vec<f64> = (0..=count).map(|i| lo + i as f64 * h).collect();
        let cdf: Vec<f64> = edges.iter().map(|&x| m.cdf(x)).collect();
        let sf: Vec<f64> = edges.iter().map(|&x| m.sf(x)).collect();
        (0..count)
            .map(|i| {
                let mass = if cdf[i + 1] <= 0.5 {
                    cdf[i + 1] - cdf[i]
                } else {
                    sf[i] - sf[i + 1]
                };
                mass.max(0.0) / h
            })
            .collect()
    };
    GridDensity::from_values(origin, h, values, 0.0)
}

/// Discretize with the given numerics.
pub fn discretize_with(m: &DensityModel, numerics: &Numerics) -> Result<GridDensity> {
    discretize(m, numerics.window_sigmas, numerics.grid_count)
}

/// Density of `-X`.
pub fn reflect(f: &GridDensity) -> GridDensity {
    let last = f.spec.node(f.spec.count - 1);
    GridDensity {
        spec: GridSpec {
            origin: -last,
            ..f.spec
        },
        values: f.values.iter().rev().copied().collect(),
        mass_defect: f.mass_defect,
        error_estimate: f.error_estimate,
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(n), p.plan_fft_inverse(n))
    })
}

fn same_step(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.max(b)
}

/// Bring two grids onto a common step: the finer step unless the joint span
/// would then need more than [`ALIGN_GROWTH`] times the larger input's
/// cell count.
fn align(f: &GridDensity, g: &GridDensity) -> Result<(GridDensity, GridDensity)> {
    let (hf, hg) = (f.spec.step, g.spec.step);
    if same_step(hf, hg) {
        return Ok((f.clone(), g.clone()));
    }
    let span_f = f.spec.count as f64 * hf;
    let span_g = g.spec.count as f64 * hg;
    let cap = (ALIGN_GROWTH * f.spec.count.max(g.spec.count)).min(MAX_COUNT / 2) as f64;
    let step = hf.min(hg).max((span_f + span_g) / cap);
    let (narrow_lo, narrow_hi) = {
        let (a, b) = f.support();
        let (c, d) = g.support();
        if b - a < d - c {
            (a, b)
        } else {
            (c, d)
        }
    };
    if step > 0.25 * (narrow_hi - narrow_lo) {
        return Err(Error::IncompatibleGrids(format!(
            "step {step:.3e} cannot resolve a support of width {:.3e}",
            narrow_hi - narrow_lo
        )));
    }
    let rf = if same_step(hf, step) {
        f.clone()
    } else {
        f.resample(step)?
    };
    let rg = if same_step(hg, step) {
        g.clone()
    } else {
        g.resample(step)?
    };
    Ok((rf, rg))
}

/// Density of `X + Y` for independent `X ~ f`, `Y ~ g` by zero-padded FFT
/// convolution.
pub fn convolve(f: &GridDensity, g: &GridDensity) -> Result<GridDensity> {
    let (f, g) = align(f, g)?;
    let h = f.spec.step;
    let (nf, ng) = (f.spec.count, g.spec.count);
    let n_out = nf + ng - 1;
    let n = n_out.next_power_of_two();
    let (fwd, inv) = plans(n);
    let load = |v: &[f64]| {
        let mut buf = vec![Complex::new(0.0, 0.0); n];
        for (b, x) in buf.iter_mut().zip(v) {
            b.re = *x;
        }
        buf
    };
    let mut a = load(&f.values);
    let mut b = load(&g.values);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= *y;
    }
    inv.process(&mut a);
    let scale = h / n as f64;
    let raw: Vec<f64> = a[..n_out].iter().map(|c| (c.re * scale).max(0.0)).collect();
    let origin = f.spec.origin + g.spec.origin;
    let tmp = GridDensity {
        spec: GridSpec {
            origin,
            step: h,
            count: n_out,
        },
        values: raw,
        mass_defect: 0.0,
        error_estimate: 0.0,
    };
    let (first, last, trimmed) = tmp.trimmed();
    let values = tmp.values[first..last].to_vec();
    let inherited = f.error_estimate + g.error_estimate + truncation_error(trimmed);
    let mut out = GridDensity::from_values(tmp.spec.node(first), h, values, inherited)?;
    while out.spec.count > MAX_COUNT {
        out = out.coarsen()?;
    }
    Ok(out)
}

/// Quadrature entropy `-sum v ln v h` with its error bound.
pub fn entropy(f: &GridDensity) -> Estimate {
    let h = f.spec.step;
    let full = raw_entropy(&f.values, h);
    let half = raw_entropy(&half_resolution(&f.values), 2.0 * h);
    let roundoff = 1e-13 * (1.0 + full.abs());
    Estimate {
        value: full,
        err: (full - half).abs() + f.error_estimate + f.mass_defect * full.abs() + roundoff,
    }
}

/// Relative entropy `D(f || g)` for a reference model with a positive
/// density over the grid; clamped to zero when negative within error.
pub fn kl_divergence(f: &GridDensity, g: &DensityModel) -> Result<Estimate> {
    let h = f.spec.step;
    let log_ref = |x: f64| -> Result<f64> {
        let l = ln_pdf(g, x);
        if l == f64::NEG_INFINITY {
            Err(Error::ZeroReferenceDensity { x })
        } else {
            Ok(l)
        }
    };
    let mut full = 0.0;
    for (i, &v) in f.values.iter().enumerate() {
        if v > DENSITY_FLOOR {
            full += v * (v.ln() - log_ref(f.spec.node(i))?);
        }
    }
    full *= h;
    let mut half = 0.0;
    for (j, &v) in half_resolution(&f.values).iter().enumerate() {
        if v > DENSITY_FLOOR {
            let x = f.spec.origin + (2 * j) as f64 * h + 0.5 * h;
            half += v * (v.ln() - log_ref(x)?);
        }
    }
    half *= 2.0 * h;
    let err = (full - half).abs() + f.error_estimate + 1e-13 * (1.0 + full.abs());
    let value = if full < 0.0 && full >= -err {
        0.0
    } else {
        full
    };
    Ok(Estimate { value, err })
}

fn ln_pdf(m: &DensityModel, x: f64) -> f64 {
    match m {
        DensityModel::Gaussian { mean, variance } => {
            -0.5 * ((x - mean).powi(2) / variance + (2.0 * std::f64::consts::PI * variance).ln())
        }
        _ => m.pdf(x).ln(),
    }
}

/// Gaussian with the grid's mean and variance.
pub fn gaussian_fit(f: &GridDensity) -> DensityModel {
    let m = f.moments();
    DensityModel::Gaussian {
        mean: m.mean,
        variance: m.variance,
    }
}

/// `||f - g||_1`, including the mass of `g` outside the grid window.
pub fn l1_distance(f: &GridDensity, g: &DensityModel) -> f64 {
    let h = f.spec.step;
    let inside: f64 = f
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (v - g.pdf(f.spec.node(i))).abs())
        .sum::<f64>()
        * h;
    let (lo, hi) = f.spec.extent();
    inside + g.mass_outside(lo, hi)
}
