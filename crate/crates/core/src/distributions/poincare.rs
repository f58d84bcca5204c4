//! Spectral oracle for Poincaré constants.
//!
//! `R(X)` is the largest value of `E[g^2] / E[g'^2]` over zero-mean `g`. On a
//! cell-centred grid with density weights `b_i = f(x_i) h` and derivative
//! weights `a_{i+1/2} = f(x_i + h/2) / h`, the quotient becomes the pencil
//! `A g = lambda B g` with `A` tridiagonal (free ends) and `B` diagonal.
//! Constants lie in the kernel of `A`, so `R = 1 / lambda_1` with `lambda_1`
//! the second smallest eigenvalue, found by Sturm-sequence bisection on the
//! symmetric form `B^{-1/2} A B^{-1/2}`.

use crate::grid::GridDensity;

const START_CELLS: usize = 1 << 10;
const MAX_CELLS: usize = 1 << 18;
const REL_TOLERANCE: f64 = 0.005;

/// Refine by doubling until successive estimates differ by less than 0.5%.
/// `None` if the density vanishes inside the window or refinement stalls.
pub fn spectral_poincare(pdf: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Option<f64> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return None;
    }
    let mut cells = START_CELLS;
    let mut prev = spectral_poincare_at(&pdf, lo, hi, cells)?;
    while cells < MAX_CELLS {
        cells *= 2;
        let next = spectral_poincare_at(&pdf, lo, hi, cells)?;
        if ((next - prev) / next).abs() < REL_TOLERANCE {
            return Some(next);
        }
        prev = next;
    }
    None
}

/// Single-resolution estimate with `cells` cells on `[lo, hi]`.
pub fn spectral_poincare_at(
    pdf: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    cells: usize,
) -> Option<f64> {
    let h = (hi - lo) / cells as f64;
    let mass: Vec<f64> = (0..cells)
        .map(|i| pdf(lo + (i as f64 + 0.5) * h) * h)
        .collect();
    let stiff: Vec<f64> = (1..cells).map(|i| pdf(lo + i as f64 * h) / h).collect();
    pencil_poincare(&mass, &stiff)
}

/// Oracle at the grid's own resolution over its positive region.
pub(crate) fn grid_poincare(g: &GridDensity) -> Option<f64> {
    let v = &g.values;
    let first = v.iter().position(|&x| x > 0.0)?;
    let last = v.iter().rposition(|&x| x > 0.0)?;
    let h = g.spec.step;
    let mass: Vec<f64> = v[first..=last].iter().map(|x| x * h).collect();
    let stiff: Vec<f64> = v[first..=last]
        .windows(2)
        .map(|w| (w[0] * w[1]).sqrt() / h)
        .collect();
    pencil_poincare(&mass, &stiff)
}

fn pencil_poincare(mass: &[f64], stiff: &[f64]) -> Option<f64> {
    let n = mass.len();
    if n < 3
        || mass.iter().any(|&b| b.is_nan() || b <= 0.0)
        || stiff.iter().any(|&a| a.is_nan() || a <= 0.0)
    {
        return None;
    }
    let mut diag = vec![0.0; n];
    for (i, a) in stiff.iter().enumerate() {
        diag[i] += a;
        diag[i + 1] += a;
    }
    for (d, b) in diag.iter_mut().zip(mass) {
        *d /= b;
    }
    let off2: Vec<f64> = stiff
        .iter()
        .enumerate()
        .map(|(i, a)| (a / (mass[i].sqrt() * mass[i + 1].sqrt())).powi(2))
        .collect();
    let lambda = kth_smallest_eigenvalue(&diag, &off2, 1);
    if lambda > 0.0 && lambda.is_finite() {
        Some(1.0 / lambda)
    } else {
        None
    }
}

/// Number of eigenvalues strictly below `x` (Sturm count).
fn count_below(diag: &[f64], off2: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let denom = if q.abs() < f64::MIN_POSITIVE {
            f64::MIN_POSITIVE
        } else {
            q
        };
        q = diag[i] - x - off2[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// `k`-th smallest eigenvalue (0-based) of the symmetric tridiagonal matrix
/// with the given diagonal and squared off-diagonal.
fn kth_smallest_eigenvalue(diag: &[f64], off2: &[f64], k: usize) -> f64 {
    let n = diag.len();
    let mut upper = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += off2[i - 1].sqrt();
        }
        if i + 1 < n {
            r += off2[i].sqrt();
        }
        upper = upper.max(diag[i] + r);
    }
    let (mut lo, mut hi) = (0.0, upper);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(diag, off2, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DensityModel;

    #[test]
    fn uniform_matches_sturm_liouville_eigenvalue() {
        let r = spectral_poincare(|_| 1.0, 0.0, 1.0).unwrap();
        let exact = 1.0 / std::f64::consts::PI.powi(2);
        assert!((r - exact).abs() / exact < 1e-3, "{r}");
    }

    #[test]
    fn gaussian_matches_variance() {
        let g = DensityModel::gaussian(0.3, 2.5).unwrap();
        let (lo, hi) = g.oracle_window();
        let r = spectral_poincare(|x| g.pdf(x), lo, hi).unwrap();
        assert!((r - 2.5).abs() / 2.5 < 0.01, "{r}");
    }

    #[test]
    fn exponential_approaches_four_on_long_half_line() {
        let e = DensityModel::exponential(1.0).unwrap();
        // truncation at L shifts the bottom of the spectrum to 1/4 + (pi/L)^2
        let r = spectral_poincare(|x| e.pdf(x), 0.0, 400.0).unwrap();
        assert!((r - 4.0).abs() / 4.0 < 0.01, "{r}");
        let r_default = spectral_poincare(|x| e.pdf(x), 0.0, e.oracle_window().1).unwrap();
        assert!(r_default < 4.0 && r_default > 3.8, "{r_default}");
    }

    #[test]
    fn laplace_oracle_near_four_b_squared() {
        let l = DensityModel::laplace(0.0, 1.0).unwrap();
        let r = l.poincare_constant().unwrap().unwrap();
        assert!(r > 3.9 && r <= 4.0 + 1e-9, "{r}");
    }

    #[test]
    fn disconnected_support_is_unavailable() {
        let m = DensityModel::mixture(
            vec![0.5, 0.5],
            vec![
                DensityModel::uniform(0.0, 1.0).unwrap(),
                DensityModel::uniform(3.0, 4.0).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(m.poincare_constant().unwrap(), None);
    }
}
