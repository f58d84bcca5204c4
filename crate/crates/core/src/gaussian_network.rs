//! Closed-form entropy algebra for jointly Gaussian vectors.
//!
//! Variables are addressed by label. Conditional laws come from Schur
//! complements, so conditionally independent copies and Markov chains can
//! be appended exactly and every entropy is a log-determinant.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::LN_2PI_E;
use crate::error::{Error, Result};
use crate::report::InequalityReport;

/// Tolerance for the exact covariance-algebra checks.
pub const ALGEBRA_TOLERANCE: f64 = 1e-9;
/// Tolerance for data-processing checks.
pub const DATA_PROCESSING_TOLERANCE: f64 = 1e-10;

const SYMMETRY_TOLERANCE: f64 = 1e-12;
const EIGEN_CLAMP: f64 = -1e-10;
/// Eigenvalues below this fraction of the block scale count as zero.
const DEGENERACY_RATIO: f64 = 1e-12;

/// Differential entropy that may be `-inf` for a degenerate law.
#[derive(Debug, Clone, PartialEq)]
pub enum DiffEntropy {
    Finite(f64),
    NegInfinity { reason: String },
}

impl DiffEntropy {
    pub fn value(&self) -> f64 {
        match self {
            DiffEntropy::Finite(v) => *v,
            DiffEntropy::NegInfinity { .. } => f64::NEG_INFINITY,
        }
    }

    pub fn finite(&self) -> Result<f64> {
        match self {
            DiffEntropy::Finite(v) => Ok(*v),
            DiffEntropy::NegInfinity { reason } => Err(Error::DegenerateSubset {
                labels: reason.clone(),
            }),
        }
    }
}

impl fmt::Display for DiffEntropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffEntropy::Finite(v) => write!(f, "{v}"),
            DiffEntropy::NegInfinity { reason } => write!(f, "-inf ({reason})"),
        }
    }
}

/// One step of a conditional extension: append `new_labels` whose joint law
/// given `given` copies the law of `template_target` given
/// `template_given`, independent of everything else given `given`. An
/// empty `given` appends an independent copy of `template_target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovStep {
    pub new_labels: Vec<String>,
    pub given: Vec<String>,
    pub template_target: Vec<String>,
    pub template_given: Vec<String>,
}

impl MarkovStep {
    pub fn new(
        new_labels: &[&str],
        given: &[&str],
        template_target: &[&str],
        template_given: &[&str],
    ) -> Self {
        let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
        MarkovStep {
            new_labels: own(new_labels),
            given: own(given),
            template_target: own(template_target),
            template_given: own(template_given),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianVector {
    names: Vec<String>,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

fn ln_det_entropy(eigs: &[f64], k: usize) -> f64 {
    0.5 * (k as f64 * LN_2PI_E + eigs.iter().map(|l| l.ln()).sum::<f64>())
}

fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().iter().copied().collect()
}

impl GaussianVector {
    pub fn new(names: Vec<String>, mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = names.len();
        if mean.len() != n || cov.nrows() != n || cov.ncols() != n {
            return Err(Error::InvalidParameter(format!(
                "{n} labels but mean of length {} and covariance {}x{}",
                mean.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::InvalidParameter(format!("duplicate label {a}")));
            }
        }
        let scale = cov.amax().max(1.0);
        let asymmetry = (&cov - cov.transpose()).amax();
        if asymmetry > SYMMETRY_TOLERANCE * scale {
            return Err(Error::NotSymmetric { asymmetry });
        }
        let cov = (&cov + cov.transpose()) * 0.5;
        let min_eigenvalue = sym_eigenvalues(&cov)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if n > 0 && min_eigenvalue < EIGEN_CLAMP * scale {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(GaussianVector { names, mean, cov })
    }

    /// Independent centred coordinates with the given variances.
    pub fn independent(vars: &[(&str, f64)]) -> Result<Self> {
        for (name, v) in vars {
            if !(v.is_finite() && *v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "variance of {name} must be positive, got {v}"
                )));
            }
        }
        let names = vars.iter().map(|(n, _)| n.to_string()).collect();
        let cov = DMatrix::from_diagonal(&DVector::from_iterator(
            vars.len(),
            vars.iter().map(|(_, v)| *v),
        ));
        Self::new(names, DVector::zeros(vars.len()), cov)
    }

    /// Unit-variance centred pair with correlation `rho`.
    pub fn correlated_pair(x: &str, y: &str, rho: f64) -> Result<Self> {
        if rho.is_nan() || rho.abs() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "correlation must lie in (-1, 1), got {rho}"
            )));
        }
        Self::new(
            vec![x.to_string(), y.to_string()],
            DVector::zeros(2),
            DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]),
        )
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    fn index(&self, label: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    fn indices<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.index(l.as_ref())).collect()
    }

    fn block(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.cov[(rows[i], cols[j])])
    }

    pub fn covariance(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self.cov[(self.index(a)?, self.index(b)?)])
    }

    /// Conditional covariance of `a` given `b` (Schur complement); errors if
    /// the conditioning block is singular.
    fn schur<S: AsRef<str>>(&self, a: &[S], b: &[S]) -> Result<DMatrix<f64>> {
        let ia = self.indices(a)?;
        let ib = self.indices(b)?;
        let saa = self.block(&ia, &ia);
        if ib.is_empty() {
            return Ok(saa);
        }
        let sbb = self.block(&ib, &ib);
        let chol = self.pd_factor(&sbb, b)?;
        let sab = self.block(&ia, &ib);
        let s = &saa - &sab * chol.solve(&sab.transpose());
        Ok((&s + s.transpose()) * 0.5)
    }

    fn pd_factor<S: AsRef<str>>(
        &self,
        m: &DMatrix<f64>,
        labels: &[S],
    ) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
        let scale = m.diagonal().amax().max(f64::MIN_POSITIVE);
        let min = sym_eigenvalues(m).into_iter().fold(f64::INFINITY, f64::min);
        let degenerate = || Error::DegenerateSubset {
            labels: join(labels),
        };
        if min <= DEGENERACY_RATIO * scale {
            return Err(degenerate());
        }
        nalgebra::Cholesky::new(m.clone()).ok_or_else(degenerate)
    }

    /// `h(A)`; errors on a singular block.
    pub fn joint_entropy<S: AsRef<str>>(&self, subset: &[S]) -> Result<f64> {
        let idx = self.indices(subset)?;
        let m = self.block(&idx, &idx);
        let scale = m.diagonal().amax().max(f64::MIN_POSITIVE);
        let eigs = sym_eigenvalues(&m);
        if eigs.iter().any(|&l| l <= DEGENERACY_RATIO * scale) {
            return Err(Error::DegenerateSubset {
                labels: join(subset),
            });
        }
        Ok(ln_det_entropy(&eigs, idx.len()))
    }

    /// `h(A | B)`; `-inf` when `A` is (partly) determined by `B`.
    pub fn conditional_entropy<S: AsRef<str>>(&self, a: &[S], b: &[S]) -> Result<DiffEntropy> {
        let s = self.schur(a, b)?;
        let scale = self
            .block(&self.indices(a)?, &self.indices(a)?)
            .diagonal()
            .amax()
            .max(f64::MIN_POSITIVE);
        let eigs = sym_eigenvalues(&s);
        if eigs.iter().any(|&l| l <= DEGENERACY_RATIO * scale) {
            return Ok(DiffEntropy::NegInfinity {
                reason: format!("{} is determined by {}", join(a), join(b)),
            });
        }
        Ok(DiffEntropy::Finite(ln_det_entropy(&eigs, a.len())))
    }

    /// `I(A; B)`.
    pub fn mutual_information<S: AsRef<str>>(&self, a: &[S], b: &[S]) -> Result<f64> {
        let h = self.joint_entropy(a)?;
        let hc = self.conditional_entropy(a, b)?;
        Ok(h - hc.finite()?)
    }

    /// `I(A; B | C)`.
    pub fn conditional_mutual_information<S: AsRef<str>>(
        &self,
        a: &[S],
        b: &[S],
        c: &[S],
    ) -> Result<f64> {
        let bc: Vec<&str> = b.iter().chain(c).map(|s| s.as_ref()).collect();
        let cc: Vec<&str> = c.iter().map(|s| s.as_ref()).collect();
        let aa: Vec<&str> = a.iter().map(|s| s.as_ref()).collect();
        let h_c = self.conditional_entropy(&aa, &cc)?.finite()?;
        let h_bc = self.conditional_entropy(&aa, &bc)?.finite()?;
        Ok(h_c - h_bc)
    }

    /// Append the linear combination `sum coef * label`.
    pub fn add_linear(&self, name: &str, terms: &[(&str, f64)]) -> Result<Self> {
        if self.names.iter().any(|n| n == name) {
            return Err(Error::InvalidParameter(format!("duplicate label {name}")));
        }
        let n = self.names.len();
        let mut w = DVector::zeros(n);
        for (label, c) in terms {
            w[self.index(label)?] += c;
        }
        let cross = &self.cov * &w;
        let var = w.dot(&cross);
        let mut cov = DMatrix::zeros(n + 1, n + 1);
        cov.view_mut((0, 0), (n, n)).copy_from(&self.cov);
        for i in 0..n {
            cov[(i, n)] = cross[i];
            cov[(n, i)] = cross[i];
        }
        cov[(n, n)] = var;
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mean =
            DVector::from_iterator(n + 1, self.mean.iter().copied().chain([w.dot(&self.mean)]));
        Ok(GaussianVector { names, mean, cov })
    }

    /// Apply the steps in order; see [`MarkovStep`].
    pub fn extend_markov(&self, steps: &[MarkovStep]) -> Result<Self> {
        let mut v = self.clone();
        for s in steps {
            v = v.extend_one(s)?;
        }
        Ok(v)
    }

    fn extend_one(&self, s: &MarkovStep) -> Result<Self> {
        if s.new_labels.len() != s.template_target.len() || s.given.len() != s.template_given.len()
        {
            return Err(Error::InvalidParameter(format!(
                "step adding {} pairs {} targets with {} templates and {} conditions with {} templates",
                join(&s.new_labels),
                s.new_labels.len(),
                s.template_target.len(),
                s.given.len(),
                s.template_given.len()
            )));
        }
        for (i, l) in s.new_labels.iter().enumerate() {
            if self.names.contains(l) || s.new_labels[..i].contains(l) {
                return Err(Error::InvalidParameter(format!("duplicate label {l}")));
            }
        }
        let it = self.indices(&s.template_target)?;
        let itg = self.indices(&s.template_given)?;
        let ig = self.indices(&s.given)?;
        let n = self.names.len();
        let m = it.len();

        // new = mu_t + K (given - mu_tg) + noise, noise ~ N(0, S)
        let (gain, noise) = if itg.is_empty() {
            (DMatrix::zeros(m, 0), self.block(&it, &it))
        } else {
            let stg = self.block(&itg, &itg);
            let chol = self.pd_factor(&stg, &s.template_given)?;
            let s_t_tg = self.block(&it, &itg);
            let gain = chol.solve(&s_t_tg.transpose()).transpose();
            let noise = self.block(&it, &it) - &gain * s_t_tg.transpose();
            (gain, (&noise + noise.transpose()) * 0.5)
        };

        let all: Vec<usize> = (0..n).collect();
        let s_g_all = self.block(&ig, &all);
        let cross = &gain * &s_g_all; // m x n
        let s_gg = self.block(&ig, &ig);
        let new_cov = &gain * &s_gg * gain.transpose() + &noise;

        let mut cov = DMatrix::zeros(n + m, n + m);
        cov.view_mut((0, 0), (n, n)).copy_from(&self.cov);
        cov.view_mut((n, 0), (m, n)).copy_from(&cross);
        cov.view_mut((0, n), (n, m)).copy_from(&cross.transpose());
        cov.view_mut((n, n), (m, m))
            .copy_from(&((&new_cov + new_cov.transpose()) * 0.5));

        let mu_t = DVector::from_iterator(m, it.iter().map(|&i| self.mean[i]));
        let mu_tg = DVector::from_iterator(itg.len(), itg.iter().map(|&i| self.mean[i]));
        let mu_g = DVector::from_iterator(ig.len(), ig.iter().map(|&i| self.mean[i]));
        let new_mean = mu_t + &gain * (mu_g - mu_tg);
        let mean = DVector::from_iterator(n + m, self.mean.iter().chain(new_mean.iter()).copied());

        let mut names = self.names.clone();
        names.extend(s.new_labels.iter().cloned());
        GaussianVector::new(names, mean, cov)
    }
}

fn join<S: AsRef<str>>(labels: &[S]) -> String {
    let parts: Vec<&str> = labels.iter().map(|s| s.as_ref()).collect();
    format!("({})", parts.join(","))
}

/// `lhs <= rhs` with `slack = rhs - lhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl Bound {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Bound {
            lhs,
            rhs,
            slack: rhs - lhs,
        }
    }
}

/// Entropic Balog–Szemerédi–Gowers scenario for a correlated unit-variance
/// pair. `condition_mi` is `h(X)+h(Y)-ln K <= h(X,Y)`, `condition_sum` is
/// `h(X+Y) <= h(X)/2 + h(Y)/2 + ln K`. With `X2 - Y - X1 - Y'` a Markov
/// chain: `conclusion_a` is `h(X)-ln K <= h(X2|X1,Y)`, `conclusion_b` is
/// `h(Y)-ln K <= h(Y'|X1,Y)`, `conclusion_c` is
/// `h(X2+Y'|X1,Y) <= h(X)/2 + h(Y)/2 + 7 ln K`, and `information_form` is
/// `I(X2+Y';Y'|X1,Y) + I(X2+Y';X2|X1,Y) <= 16 ln K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsgScenarioReport {
    pub rho: f64,
    pub k: f64,
    pub ln_k: f64,
    pub condition_mi: Bound,
    pub condition_sum: Bound,
    pub conclusion_a: Bound,
    pub conclusion_b: Bound,
    pub conclusion_c: Bound,
    pub information_form: Bound,
    /// `(I(X2+Y';Y'|X1,Y) + I(X2+Y';X2|X1,Y)) / ln K`, the smallest constant
    /// that would make the information form tight.
    pub empirical_constant: Option<f64>,
}

impl BsgScenarioReport {
    pub fn all_hold(&self, tol: f64) -> bool {
        [
            self.conclusion_a,
            self.conclusion_b,
            self.conclusion_c,
            self.information_form,
        ]
        .iter()
        .all(|b| b.slack >= -tol)
    }

    pub fn to_reports(&self) -> Vec<InequalityReport> {
        let inputs = vec![format!("rho={}", self.rho), format!("ln_k={}", self.ln_k)];
        [
            ("bsg_entropy_x", self.conclusion_a),
            ("bsg_entropy_y", self.conclusion_b),
            ("bsg_sum", self.conclusion_c),
            ("bsg_information", self.information_form),
        ]
        .into_iter()
        .map(|(id, b)| {
            InequalityReport::inequality(id, b.lhs, b.rhs, ALGEBRA_TOLERANCE, inputs.clone())
        })
        .collect()
    }
}

/// `ln K` for the BSG hypotheses: the smallest value satisfying both,
/// from the scalar variances so that entropy offsets cancel exactly.
pub fn bsg_ln_k(v: &GaussianVector, x: &str, y: &str) -> Result<f64> {
    let (vx, vy, c) = (
        v.covariance(x, x)?,
        v.covariance(y, y)?,
        v.covariance(x, y)?,
    );
    // I(X;Y) = -ln(1 - rho^2)/2, h(X+Y) - h(X)/2 - h(Y)/2 = ln(var(X+Y)/sqrt(vx vy))/2
    let mi = -0.5 * (-(c * c) / (vx * vy)).ln_1p();
    let sum = 0.5 * ((vx + vy + 2.0 * c) / (vx * vy).sqrt()).ln();
    Ok(mi.max(sum).max(0.0))
}

fn bsg_chain(rho: f64) -> Result<GaussianVector> {
    GaussianVector::correlated_pair("X", "Y", rho)?.extend_markov(&[
        MarkovStep::new(&["X1"], &["Y"], &["X"], &["Y"]),
        MarkovStep::new(&["X2"], &["Y"], &["X"], &["Y"]),
        MarkovStep::new(&["Y'"], &["X1"], &["Y"], &["X"]),
    ])
}

pub fn run_bsg_scenario(rho: f64) -> Result<BsgScenarioReport> {
    let v = bsg_chain(rho)?;
    let ln_k = bsg_ln_k(&v, "X", "Y")?;
    let hx = v.joint_entropy(&["X"])?;
    let hy = v.joint_entropy(&["Y"])?;
    let hxy = v.joint_entropy(&["X", "Y"])?;
    let v = v.add_linear("X+Y", &[("X", 1.0), ("Y", 1.0)])?;
    let h_sum = v.joint_entropy(&["X+Y"])?;
    let v = v.add_linear("X2+Y'", &[("X2", 1.0), ("Y'", 1.0)])?;
    let h_x2 = v.conditional_entropy(&["X2"], &["X1", "Y"])?.value();
    let h_yp = v.conditional_entropy(&["Y'"], &["X1", "Y"])?.value();
    let h_s = v.conditional_entropy(&["X2+Y'"], &["X1", "Y"])?.value();
    let info = v.conditional_mutual_information(&["X2+Y'"], &["Y'"], &["X1", "Y"])?
        + v.conditional_mutual_information(&["X2+Y'"], &["X2"], &["X1", "Y"])?;
    Ok(BsgScenarioReport {
        rho,
        k: ln_k.exp(),
        ln_k,
        condition_mi: Bound::new(hx + hy - ln_k, hxy),
        condition_sum: Bound::new(h_sum, 0.5 * hx + 0.5 * hy + ln_k),
        conclusion_a: Bound::new(hx - ln_k, h_x2),
        conclusion_b: Bound::new(hy - ln_k, h_yp),
        conclusion_c: Bound::new(h_s, 0.5 * hx + 0.5 * hy + 7.0 * ln_k),
        information_form: Bound::new(info, 16.0 * ln_k),
        empirical_constant: (ln_k > 0.0).then(|| info / ln_k),
    })
}

/// Weak BSG: `h(X1 - X2 | Y) <= h(X) + 4 ln K` with `X1, X2` conditionally
/// independent copies of `X` given `Y`.
pub fn run_weak_bsg_scenario(rho: f64) -> Result<InequalityReport> {
    let v = bsg_chain(rho)?;
    let ln_k = bsg_ln_k(&v, "X", "Y")?;
    let hx = v.joint_entropy(&["X"])?;
    let v = v.add_linear("X1-X2", &[("X1", 1.0), ("X2", -1.0)])?;
    let lhs = v.conditional_entropy(&["X1-X2"], &["Y"])?.value();
    Ok(InequalityReport::inequality(
        "weak_bsg",
        lhs,
        hx + 4.0 * ln_k,
        ALGEBRA_TOLERANCE,
        vec![format!("rho={rho}"), format!("ln_k={ln_k}")],
    ))
}

/// Independent `X ~ N(0, var_x)`, `Y ~ N(0, var_y)`, `Z = X - Y`, two
/// conditionally independent copies of `(X, Y)` given `Z` and one
/// independent copy. Returns the inequality
/// `h(X3+Y3) + h(X1) + h(Y2) <= h(X3-Y2) + h(X1-Y3) + h(Z)` and the identity
/// `h(Z,Y1,Y2) + h(Z) - h(Y1) - h(Y2) = h(X1) + h(X2)`.
pub fn run_ccond_scenario(var_x: f64, var_y: f64) -> Result<(InequalityReport, InequalityReport)> {
    let v = GaussianVector::independent(&[("X", var_x), ("Y", var_y)])?
        .add_linear("Z", &[("X", 1.0), ("Y", -1.0)])?
        .extend_markov(&[
            MarkovStep::new(&["X1", "Y1"], &["Z"], &["X", "Y"], &["Z"]),
            MarkovStep::new(&["X2", "Y2"], &["Z"], &["X", "Y"], &["Z"]),
            MarkovStep::new(&["X3", "Y3"], &[], &["X", "Y"], &[]),
        ])?
        .add_linear("X3+Y3", &[("X3", 1.0), ("Y3", 1.0)])?
        .add_linear("X3-Y2", &[("X3", 1.0), ("Y2", -1.0)])?
        .add_linear("X1-Y3", &[("X1", 1.0), ("Y3", -1.0)])?;
    let h = |l: &[&str]| v.joint_entropy(l);
    let inputs = vec![format!("var_x={var_x}"), format!("var_y={var_y}")];
    let ccond = InequalityReport::inequality(
        "ccond",
        h(&["X3+Y3"])? + h(&["X1"])? + h(&["Y2"])?,
        h(&["X3-Y2"])? + h(&["X1-Y3"])? + h(&["Z"])?,
        ALGEBRA_TOLERANCE,
        inputs.clone(),
    );
    let mic = InequalityReport::identity(
        "mic",
        h(&["Z", "Y1", "Y2"])? + h(&["Z"])? - h(&["Y1"])? - h(&["Y2"])?,
        h(&["X1"])? + h(&["X2"])?,
        ALGEBRA_TOLERANCE,
        inputs,
    );
    Ok((ccond, mic))
}

fn triple(var_x: f64, var_y: f64, var_z: f64) -> Result<GaussianVector> {
    GaussianVector::independent(&[("X", var_x), ("Y", var_y), ("Z", var_z)])
}

fn triple_inputs(var_x: f64, var_y: f64, var_z: f64) -> Vec<String> {
    vec![
        format!("var_x={var_x}"),
        format!("var_y={var_y}"),
        format!("var_z={var_z}"),
    ]
}

/// `I(X; X-Z) <= I(X; (X-Y, Y-Z))` for independent Gaussians.
pub fn run_sub_diff(var_x: f64, var_y: f64, var_z: f64) -> Result<InequalityReport> {
    let v = triple(var_x, var_y, var_z)?
        .add_linear("X-Y", &[("X", 1.0), ("Y", -1.0)])?
        .add_linear("Y-Z", &[("Y", 1.0), ("Z", -1.0)])?
        .add_linear("X-Z", &[("X", 1.0), ("Z", -1.0)])?;
    Ok(InequalityReport::inequality(
        "sub_diff",
        v.mutual_information(&["X"], &["X-Z"])?,
        v.mutual_information(&["X"], &["X-Y", "Y-Z"])?,
        DATA_PROCESSING_TOLERANCE,
        triple_inputs(var_x, var_y, var_z),
    ))
}

/// `I(X+Y+Z; X) <= I(X+Y; X)` for independent Gaussians.
pub fn run_c3122_mi(var_x: f64, var_y: f64, var_z: f64) -> Result<InequalityReport> {
    let v = triple(var_x, var_y, var_z)?
        .add_linear("X+Y", &[("X", 1.0), ("Y", 1.0)])?
        .add_linear("X+Y+Z", &[("X", 1.0), ("Y", 1.0), ("Z", 1.0)])?;
    Ok(InequalityReport::inequality(
        "c3122_mi",
        v.mutual_information(&["X+Y+Z"], &["X"])?,
        v.mutual_information(&["X+Y"], &["X"])?,
        DATA_PROCESSING_TOLERANCE,
        triple_inputs(var_x, var_y, var_z),
    ))
}

/// Data processing along the chain `X2 - Y - X1 - Y'`:
/// `I(X2; X1) <= I(X2; Y)`, `I(X2; Y') <= I(X2; X1)`, `I(Y; Y') <= I(Y; X1)`.
pub fn run_data_processing(rho: f64) -> Result<Vec<InequalityReport>> {
    let v = bsg_chain(rho)?;
    let mi = |a: &str, b: &str| v.mutual_information(&[a], &[b]);
    let inputs = vec![format!("rho={rho}")];
    Ok(vec![
        InequalityReport::inequality(
            "data_processing",
            mi("X2", "X1")?,
            mi("X2", "Y")?,
            DATA_PROCESSING_TOLERANCE,
            inputs.clone(),
        ),
        InequalityReport::inequality(
            "data_processing",
            mi("X2", "Y'")?,
            mi("X2", "X1")?,
            DATA_PROCESSING_TOLERANCE,
            inputs.clone(),
        ),
        InequalityReport::inequality(
            "data_processing",
            mi("Y", "Y'")?,
            mi("Y", "X1")?,
            DATA_PROCESSING_TOLERANCE,
            inputs,
        ),
    ])
}

/// Correlations `a, a+step, ..., b` (inclusive, `round((b-a)/step)+1` values).
pub fn rho_sweep(a: f64, b: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && a.is_finite() && b.is_finite() && b >= a) {
        return Err(Error::InvalidParameter(format!("bad sweep {a}:{b}:{step}")));
    }
    let n = ((b - a) / step).round() as usize + 1;
    let rhos: Vec<f64> = (0..n)
        .map(|i| {
            let r = a + i as f64 * step;
            // snap to the step lattice so 0 is exactly 0
            (r / step).round() * step
        })
        .collect();
    if rhos.iter().any(|r| r.is_nan() || r.abs() >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "sweep {a}:{b}:{step} leaves (-1, 1)"
        )));
    }
    Ok(rhos)
}

/// Log-uniform variances in `[0.1, 10]` for seeded sweeps.
pub fn random_variances(seed: u64, count: usize, arity: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..arity)
                .map(|_| 10f64.powf(rng.random_range(-1.0..=1.0)))
                .collect()
        })
        .collect()
}
