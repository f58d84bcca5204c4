//! Exact Shannon-entropy counterparts of the sumset inequalities over cyclic
//! groups `Z_n`, by exhaustive computation on dense probability tables.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{CheckKind, InequalityReport};

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 64;
pub const MAX_AXES: usize = 5;
/// Normalization tolerance and verdict band of every discrete check.
pub const DISCRETE_TOLERANCE: f64 = 1e-12;
/// Denominator floor of the discrete doubling-difference ratio.
pub const RATIO_FLOOR: f64 = 1e-9;

/// Shannon entropy in nats with `0 ln 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Probability mass function on `Z_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DiscretePmf {
    probs: Vec<f64>,
}

impl DiscretePmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let n = probs.len();
        if !(MIN_ORDER..=MAX_ORDER).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "group order {n} outside [{MIN_ORDER}, {MAX_ORDER}]"
            )));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidParameter(
                "probabilities must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > DISCRETE_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {sum}, more than {DISCRETE_TOLERANCE:e} away from 1"
            )));
        }
        Ok(DiscretePmf { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn point_mass(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::InvalidParameter(format!("point {at} not in Z_{n}")));
        }
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Self::new(probs)
    }

    /// Random pmf: uniform weights, each zeroed with probability 1/5, at
    /// least one kept.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Result<Self> {
        let mut w: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.2) {
                    0.0
                } else {
                    rng.random_range(0.0..1.0)
                }
            })
            .collect();
        if w.iter().all(|&x| x == 0.0) {
            w[rng.random_range(0..n)] = 1.0;
        }
        let total: f64 = w.iter().sum();
        Self::new(w.into_iter().map(|x| x / total).collect())
    }

    pub fn order(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.probs)
    }

    /// Law of `-X`.
    pub fn negate(&self) -> Self {
        let n = self.order();
        DiscretePmf {
            probs: (0..n).map(|i| self.probs[(n - i) % n]).collect(),
        }
    }
}

impl TryFrom<Vec<f64>> for DiscretePmf {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<DiscretePmf> for Vec<f64> {
    fn from(p: DiscretePmf) -> Self {
        p.probs
    }
}

impl fmt::Display for DiscretePmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}[", self.order())?;
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// Law of `X + Y` for independent `X ~ p`, `Y ~ q` (cyclic convolution).
pub fn sum_pmf(p: &DiscretePmf, q: &DiscretePmf) -> Result<DiscretePmf> {
    let n = p.order();
    if q.order() != n {
        return Err(Error::GroupMismatch(n, q.order()));
    }
    let mut out = vec![0.0; n];
    for (i, &a) in p.probs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (j, &b) in q.probs.iter().enumerate() {
            out[(i + j) % n] += a * b;
        }
    }
    Ok(DiscretePmf { probs: out })
}

/// Law of `X - Y` for independent `X ~ p`, `Y ~ q`.
pub fn diff_pmf(p: &DiscretePmf, q: &DiscretePmf) -> Result<DiscretePmf> {
    sum_pmf(p, &q.negate())
}

/// Dense joint probability table, row-major over `dims`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteJoint {
    dims: Vec<usize>,
    table: Vec<f64>,
}

impl DiscreteJoint {
    pub fn new(dims: Vec<usize>, table: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.len() > MAX_AXES {
            return Err(Error::InvalidParameter(format!(
                "joint needs 1 to {MAX_AXES} axes, got {}",
                dims.len()
            )));
        }
        if dims.iter().any(|&d| !(1..=MAX_ORDER).contains(&d)) {
            return Err(Error::InvalidParameter(format!(
                "axis sizes must lie in [1, {MAX_ORDER}]"
            )));
        }
        let cells: usize = dims.iter().product();
        if table.len() != cells {
            return Err(Error::InvalidParameter(format!(
                "table has {} cells, dims need {cells}",
                table.len()
            )));
        }
        if table.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidParameter(
                "probabilities must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = table.iter().sum();
        if (sum - 1.0).abs() > DISCRETE_TOLERANCE {
            return Err(Error::InvalidParameter(format!("joint sums to {sum}")));
        }
        Ok(DiscreteJoint { dims, table })
    }

    /// Joint law of independent factors.
    pub fn product(factors: &[&DiscretePmf]) -> Result<Self> {
        let dims: Vec<usize> = factors.iter().map(|p| p.order()).collect();
        let mut table = vec![1.0];
        for p in factors {
            table = table
                .iter()
                .flat_map(|&a| p.probs.iter().map(move |&b| a * b))
                .collect();
        }
        Self::new(dims, table)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Marginal table over `axes` (in the given order).
    pub fn marginal(&self, axes: &[usize]) -> Result<Vec<f64>> {
        let mut seen = vec![false; self.dims.len()];
        for &a in axes {
            if a >= self.dims.len() || seen[a] {
                return Err(Error::InvalidParameter(format!("bad axis list {axes:?}")));
            }
            seen[a] = true;
        }
        let size: usize = axes.iter().map(|&a| self.dims[a]).product();
        let mut out = vec![0.0; size];
        let mut index = vec![0usize; self.dims.len()];
        for &p in &self.table {
            if p != 0.0 {
                let cell = axes.iter().fold(0, |acc, &a| acc * self.dims[a] + index[a]);
                out[cell] += p;
            }
            for k in (0..self.dims.len()).rev() {
                index[k] += 1;
                if index[k] < self.dims[k] {
                    break;
                }
                index[k] = 0;
            }
        }
        Ok(out)
    }
}

/// Exact entropy of the marginal over `axes`.
pub fn discrete_entropy(j: &DiscreteJoint, axes: &[usize]) -> Result<f64> {
    Ok(shannon_entropy(&j.marginal(axes)?))
}

/// A joint law of `(X1, X2)` on `Z_n1 x Z_n2` with maps `F: Z_n1 -> A`,
/// `G: Z_n2 -> A` and `R: Z_n1 x Z_n2 -> B` (`R` indexed `x1 * n2 + x2`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalInstance {
    pub joint: DiscreteJoint,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub r: Vec<usize>,
}

impl FunctionalInstance {
    /// Random instance on `Z_n x Z_n` with `F, G` into `Z_m` and `R` into
    /// `Z_{n*n}`; mass only on cells where `F(x1) = G(x2)`.
    pub fn random<R: Rng>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        let f: Vec<usize> = (0..n).map(|_| rng.random_range(0..m)).collect();
        let mut g: Vec<usize> = (0..n).map(|_| rng.random_range(0..m)).collect();
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        g[b] = f[a];
        let r: Vec<usize> = if rng.random_bool(0.5) {
            (0..n * n).collect()
        } else {
            (0..n * n).map(|_| rng.random_range(0..n * n)).collect()
        };
        let mut w = vec![0.0; n * n];
        for x1 in 0..n {
            for x2 in 0..n {
                if f[x1] == g[x2] && !rng.random_bool(0.25) {
                    w[x1 * n + x2] = rng.random_range(0.0..1.0);
                }
            }
        }
        w[a * n + b] += 0.5;
        let total: f64 = w.iter().sum();
        let joint = DiscreteJoint::new(vec![n, n], w.into_iter().map(|x| x / total).collect())?;
        Ok(FunctionalInstance { joint, f, g, r })
    }

    fn validate(&self) -> Result<()> {
        let [n1, n2] = self.joint.dims() else {
            return Err(Error::InvalidParameter(
                "functional instance needs a 2-axis joint".into(),
            ));
        };
        if self.f.len() != *n1 || self.g.len() != *n2 || self.r.len() != n1 * n2 {
            return Err(Error::InvalidParameter(
                "map lengths do not match the joint".into(),
            ));
        }
        for x1 in 0..*n1 {
            for x2 in 0..*n2 {
                if self.joint.table()[x1 * n2 + x2] > 0.0 && self.f[x1] != self.g[x2] {
                    return Err(Error::InconsistentMaps { x1, x2 });
                }
            }
        }
        Ok(())
    }
}

fn pushforward(probs: &[f64], map: impl Fn(usize) -> usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for (i, &p) in probs.iter().enumerate() {
        let k = map(i);
        if out.len() <= k {
            out.resize(k + 1, 0.0);
        }
        out[k] += p;
    }
    out
}

/// `H(X12) + H(X0) <= H(X1) + H(X2)` for `X0 = F(X1) = G(X2)`,
/// `X12 = R(X1, X2)`.
pub fn check_functional_submodularity(inst: &FunctionalInstance) -> Result<InequalityReport> {
    inst.validate()?;
    let j = &inst.joint;
    let x1 = j.marginal(&[0])?;
    let x2 = j.marginal(&[1])?;
    let h0 = shannon_entropy(&pushforward(&x1, |i| inst.f[i]));
    let h12 = shannon_entropy(&pushforward(j.table(), |i| inst.r[i]));
    let (h1, h2) = (shannon_entropy(&x1), shannon_entropy(&x2));
    let inputs = vec![
        format!("P={:?}", j.table()),
        format!("dims={:?}", j.dims()),
        format!("F={:?}", inst.f),
        format!("G={:?}", inst.g),
        format!("R={:?}", inst.r),
    ];
    Ok(InequalityReport::inequality(
        "functional_submodularity",
        h12 + h0,
        h1 + h2,
        DISCRETE_TOLERANCE,
        inputs,
    ))
}

/// Exact joint of `(X1, Y1, X2, Y2)`: two copies of independent `(X, Y)`
/// that are conditionally independent given `X + Y`.
pub fn covering_joint(p: &DiscretePmf, q: &DiscretePmf) -> Result<DiscreteJoint> {
    let n = p.order();
    let s = sum_pmf(p, q)?;
    let mut table = vec![0.0; n.pow(4)];
    for x1 in 0..n {
        for y1 in 0..n {
            let a = p.probs[x1] * q.probs[y1];
            if a == 0.0 {
                continue;
            }
            let sum = (x1 + y1) % n;
            for x2 in 0..n {
                let y2 = (sum + n - x2) % n;
                let b = p.probs[x2] * q.probs[y2];
                table[((x1 * n + y1) * n + x2) * n + y2] = a * b / s.probs[sum];
            }
        }
    }
    let total: f64 = table.iter().sum();
    table.iter_mut().for_each(|v| *v /= total);
    DiscreteJoint::new(vec![n; 4], table)
}

/// `H(X1, X2, Y1 | Y2) = 2 H(X) + H(Y) - H(X + Y)` on the covering joint.
pub fn check_covering_lemma(p: &DiscretePmf, q: &DiscretePmf) -> Result<InequalityReport> {
    let j = covering_joint(p, q)?;
    let lhs = discrete_entropy(&j, &[0, 1, 2, 3])? - discrete_entropy(&j, &[3])?;
    let rhs = 2.0 * p.entropy() + q.entropy() - sum_pmf(p, q)?.entropy();
    Ok(InequalityReport::identity(
        "covering_lemma",
        lhs,
        rhs,
        DISCRETE_TOLERANCE,
        vec![format!("X={p}"), format!("Y={q}")],
    ))
}

/// A discrete registry entry; report ids carry the `discrete.` prefix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteCheckDef {
    pub id: &'static str,
    pub statement: &'static str,
    pub kind: CheckKind,
    /// Inputs per parameter value; the list holds `n` for parameterized
    /// checks and `0` otherwise.
    pub params: &'static [usize],
}

impl DiscreteCheckDef {
    pub fn arity(&self, n: usize) -> usize {
        match self.id {
            "discrete.doubling_difference" | "discrete.sigma_delta" => 1,
            "discrete.trivial2" | "discrete.sum_difference" | "discrete.iterated_sum" => 2,
            "discrete.ruzsa_triangle" | "discrete.csumdiff" | "discrete.c3122" => 3,
            "discrete.four_variable" => 4,
            "discrete.plunnecke_ruzsa" => n + 1,
            _ => 0,
        }
    }
}

const NO_PARAM: &[usize] = &[0];

pub const DISCRETE_REGISTRY: &[DiscreteCheckDef] = &[
    DiscreteCheckDef {
        id: "discrete.trivial2",
        statement: "H(X+Y) <= H(X) + H(Y)",
        kind: CheckKind::Inequality,
        params: NO_PARAM,
    },
    DiscreteCheckDef {
        id: "discrete.ruzsa_triangle",
        statement: "H(X-Z) <= H(X-Y) + H(Y-Z) - H(Y)",
        kind: CheckKind::Inequality,
        params: NO_PARAM,
    },
    DiscreteCheckDef {
        id: "discrete.csumdiff",
        statement: "H(X-Z) + H(Y) <= H(X+Y) + H(Y+Z)",
        kind: CheckKind::Inequality,
        params: NO_PARAM,
    },
    DiscreteCheckDef {
        id: "discrete.c3122",
        statement: "H(X+Y+Z) + H(Y) <= H(X+Y) + H(Y+Z)",
        kind: CheckKind::Inequality,
        params: NO_PARAM,
    },
    DiscreteCheckDef {
        id: "discrete.doubling_difference",
        statement: "1/2 <= (H(X+X') - H(X)) / (H(X-X') - H(X)) <= 2",
        kind: CheckKind::TwoSided,
        params: NO_PARAM,
    },
    DiscreteCheckDef {
        id: "discrete.sigma_delta",
        statement: "(H(X-X') - H(X))/2 <= H(X+X') - H(X) <= 2 (H(X-X') - H(X))",
        kind: CheckKind::TwoSided,
        params: NO_PARAM,
    },
    DiscreteCheckDef {
        id: "discrete.sum_difference",
        statement: "H(X+Y) <= 3 H(X-Y) - H(X) - H(Y)",
        kind: CheckKind::Inequality,
        params: NO_PARAM,
    },
    DiscreteCheckDef {
        id: "discrete.plunnecke_ruzsa",
        statement: "H(X+Y_1+...+Y_n) <= H(X) + sum_i (H(X+Y_i) - H(X))",
        kind: CheckKind::Inequality,
        params: &[1, 2, 3, 4],
    },
    DiscreteCheckDef {
        id: "discrete.four_variable",
        statement: "H(X+Y+Z+W) + H(Y) + H(Z) <= H(X+Y) + H(Y+Z) + H(Z+W)",
        kind: CheckKind::Inequality,
        params: NO_PARAM,
    },
    DiscreteCheckDef {
        id: "discrete.iterated_sum",
        statement: "H(S_0+...+S_n) <= (2n+1) H(X+Y) - n H(X) - n H(Y), S_i = X_i + Y_i i.i.d.",
        kind: CheckKind::Inequality,
        params: &[1, 2, 3],
    },
];

pub fn find_discrete_check(id: &str) -> Option<&'static DiscreteCheckDef> {
    DISCRETE_REGISTRY.iter().find(|d| d.id == id)
}

fn sum_all(pmfs: &[&DiscretePmf]) -> Result<DiscretePmf> {
    let mut acc = pmfs[0].clone();
    for p in &pmfs[1..] {
        acc = sum_pmf(&acc, p)?;
    }
    Ok(acc)
}

fn h_sum(a: &DiscretePmf, b: &DiscretePmf) -> Result<f64> {
    Ok(sum_pmf(a, b)?.entropy())
}

fn h_diff(a: &DiscretePmf, b: &DiscretePmf) -> Result<f64> {
    Ok(diff_pmf(a, b)?.entropy())
}

/// Evaluate one discrete registry check exactly; `n` is the family
/// parameter (ignored by unparameterized checks).
pub fn check_discrete_registry(
    def: &DiscreteCheckDef,
    pmfs: &[DiscretePmf],
    n: usize,
) -> Result<InequalityReport> {
    let want = def.arity(n);
    if want == 0 || !def.params.contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "{} does not take n={n}",
            def.id
        )));
    }
    if pmfs.len() != want {
        return Err(Error::Arity {
            check: def.id.to_string(),
            expected: want,
            got: pmfs.len(),
        });
    }
    let order = pmfs[0].order();
    if let Some(p) = pmfs.iter().find(|p| p.order() != order) {
        return Err(Error::GroupMismatch(order, p.order()));
    }
    let names: Vec<String> = if def.id == "discrete.plunnecke_ruzsa" {
        std::iter::once("X".to_string())
            .chain((1..pmfs.len()).map(|i| format!("Y{i}")))
            .collect()
    } else {
        ["X", "Y", "Z", "W"][..pmfs.len()]
            .iter()
            .map(|s| s.to_string())
            .collect()
    };
    let mut inputs: Vec<String> = names
        .iter()
        .zip(pmfs)
        .map(|(l, p)| format!("{l}={p}"))
        .collect();
    if def.params != NO_PARAM {
        inputs.push(format!("n={n}"));
    }
    let id = def.id;
    let tol = DISCRETE_TOLERANCE;
    let ineq = |lhs: f64, rhs: f64, inputs| InequalityReport::inequality(id, lhs, rhs, tol, inputs);
    let report = match id {
        "discrete.trivial2" => {
            let (x, y) = (&pmfs[0], &pmfs[1]);
            ineq(h_sum(x, y)?, x.entropy() + y.entropy(), inputs)
        }
        "discrete.ruzsa_triangle" => {
            let (x, y, z) = (&pmfs[0], &pmfs[1], &pmfs[2]);
            ineq(
                h_diff(x, z)?,
                h_diff(x, y)? + h_diff(y, z)? - y.entropy(),
                inputs,
            )
        }
        "discrete.csumdiff" => {
            let (x, y, z) = (&pmfs[0], &pmfs[1], &pmfs[2]);
            ineq(
                h_diff(x, z)? + y.entropy(),
                h_sum(x, y)? + h_sum(y, z)?,
                inputs,
            )
        }
        "discrete.c3122" => {
            let (x, y, z) = (&pmfs[0], &pmfs[1], &pmfs[2]);
            ineq(
                sum_all(&[x, y, z])?.entropy() + y.entropy(),
                h_sum(x, y)? + h_sum(y, z)?,
                inputs,
            )
        }
        "discrete.doubling_difference" | "discrete.sigma_delta" => {
            let x = &pmfs[0];
            let plus = h_sum(x, x)? - x.entropy();
            let minus = h_diff(x, x)? - x.entropy();
            if id == "discrete.sigma_delta" {
                InequalityReport::two_sided(id, 0.5 * minus, plus, 2.0 * minus, 3.0 * tol, inputs)
            } else if minus.abs() <= RATIO_FLOOR {
                InequalityReport::undetermined(
                    id,
                    CheckKind::TwoSided,
                    inputs,
                    format!("degenerate denominator: |H(X-X') - H(X)| <= {RATIO_FLOOR:e}"),
                )
            } else {
                InequalityReport::two_sided(id, 0.5, plus / minus, 2.0, tol / minus, inputs)
            }
        }
        "discrete.sum_difference" => {
            let (x, y) = (&pmfs[0], &pmfs[1]);
            ineq(
                h_sum(x, y)?,
                3.0 * h_diff(x, y)? - x.entropy() - y.entropy(),
                inputs,
            )
        }
        "discrete.plunnecke_ruzsa" => {
            let x = &pmfs[0];
            let all: Vec<&DiscretePmf> = pmfs.iter().collect();
            let lhs = sum_all(&all)?.entropy();
            let mut rhs = x.entropy();
            for y in &pmfs[1..] {
                rhs += h_sum(x, y)? - x.entropy();
            }
            ineq(lhs, rhs, inputs)
        }
        "discrete.four_variable" => {
            let (x, y, z, w) = (&pmfs[0], &pmfs[1], &pmfs[2], &pmfs[3]);
            let lhs = sum_all(&[x, y, z, w])?.entropy() + y.entropy() + z.entropy();
            ineq(lhs, h_sum(x, y)? + h_sum(y, z)? + h_sum(z, w)?, inputs)
        }
        "discrete.iterated_sum" => {
            let (x, y) = (&pmfs[0], &pmfs[1]);
            let s = sum_pmf(x, y)?;
            let copies = vec![&s; n + 1];
            let nf = n as f64;
            let rhs = (2.0 * nf + 1.0) * s.entropy() - nf * x.entropy() - nf * y.entropy();
            ineq(sum_all(&copies)?.entropy(), rhs, inputs)
        }
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    Ok(report)
}

/// `count` seeded random pmfs on `Z_order`.
pub fn random_pmfs(seed: u64, count: usize, order: usize) -> Result<Vec<DiscretePmf>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| DiscretePmf::random(order, &mut rng))
        .collect()
}

fn corpus_note(r: &mut InequalityReport, i: usize) {
    r.inputs.push(format!("corpus_index={i}"));
}

/// Every discrete registry check over the corpus; inputs for index `i` are
/// pmfs `i, i+1, ...` (mod size). Order: registry, then parameter, then
/// index.
pub fn run_discrete_registry(
    defs: &[&'static DiscreteCheckDef],
    corpus: &[DiscretePmf],
) -> Vec<InequalityReport> {
    let len = corpus.len();
    let tasks: Vec<(&DiscreteCheckDef, usize, usize)> = defs
        .iter()
        .flat_map(|d| {
            d.params
                .iter()
                .flat_map(move |&n| (0..len).map(move |i| (*d, n, i)))
        })
        .collect();
    tasks
        .par_iter()
        .map(|&(def, n, i)| {
            let pmfs: Vec<DiscretePmf> = (0..def.arity(n))
                .map(|j| corpus[(i + j) % len].clone())
                .collect();
            let mut r = check_discrete_registry(def, &pmfs, n)
                .unwrap_or_else(|e| InequalityReport::skipped(def.id, vec![], e.to_string()));
            corpus_note(&mut r, i);
            r
        })
        .collect()
}

/// Covering lemma on consecutive corpus pairs `(i, i+1)`.
pub fn run_covering(corpus: &[DiscretePmf]) -> Vec<InequalityReport> {
    let len = corpus.len();
    (0..len)
        .into_par_iter()
        .map(|i| {
            let (p, q) = (&corpus[i], &corpus[(i + 1) % len]);
            let mut r = check_covering_lemma(p, q).unwrap_or_else(|e| {
                InequalityReport::skipped("covering_lemma", vec![], e.to_string())
            });
            corpus_note(&mut r, i);
            r
        })
        .collect()
}

/// Seeded random functional-submodularity trials on `Z_n x Z_n` with maps
/// into `Z_2`.
pub fn run_submodularity(seed: u64, trials: usize, n: usize) -> Result<Vec<InequalityReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances: Vec<FunctionalInstance> = (0..trials)
        .map(|_| FunctionalInstance::random(n, 2, &mut rng))
        .collect::<Result<_>>()?;
    instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let mut r = check_functional_submodularity(inst)?;
            r.inputs.push(format!("trial={i}"));
            Ok(r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn pmf(v: &[f64]) -> DiscretePmf {
        DiscretePmf::new(v.to_vec()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!((pmf(&[0.5, 0.5]).entropy() - LN_2).abs() < 1e-15);
        assert_eq!(DiscretePmf::point_mass(4, 2).unwrap().entropy(), 0.0);
        assert!((pmf(&[0.5, 0.25, 0.25]).entropy() - 1.5 * LN_2).abs() < 1e-15);
        let j = DiscreteJoint::product(&[&pmf(&[0.5, 0.5]), &pmf(&[0.5, 0.25, 0.25])]).unwrap();
        assert!((discrete_entropy(&j, &[0, 1]).unwrap() - 2.5 * LN_2).abs() < 1e-14);
        assert!((discrete_entropy(&j, &[1]).unwrap() - 1.5 * LN_2).abs() < 1e-14);
    }

    #[test]
    fn validation() {
        assert!(DiscretePmf::new(vec![1.0]).is_err());
        assert!(DiscretePmf::new(vec![0.5, 0.6]).is_err());
        assert!(DiscretePmf::new(vec![1.5, -0.5]).is_err());
        assert!(DiscretePmf::new(vec![1.0 / 65.0; 65]).is_err());
        assert!(DiscreteJoint::new(vec![2; 6], vec![1.0 / 64.0; 64]).is_err());
        assert!(sum_pmf(&pmf(&[0.5, 0.5]), &pmf(&[1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn convolution_examples() {
        let h = pmf(&[0.5, 0.5, 0.0]);
        let s = sum_pmf(&h, &h).unwrap();
        for (a, b) in s.probs().iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
        let p = pmf(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(
            sum_pmf(&DiscretePmf::point_mass(4, 0).unwrap(), &p).unwrap(),
            p
        );
        let u = sum_pmf(&DiscretePmf::uniform(4).unwrap(), &p).unwrap();
        assert!(u.probs().iter().all(|x| (x - 0.25).abs() < 1e-15));
        let d = diff_pmf(&DiscretePmf::point_mass(4, 0).unwrap(), &p).unwrap();
        assert_eq!(d.probs(), &[0.1, 0.4, 0.3, 0.2]);
    }

    #[test]
    fn covering_examples() {
        let u = DiscretePmf::uniform(2).unwrap();
        let r = check_covering_lemma(&u, &u).unwrap();
        assert!(
            (r.lhs.unwrap() - 2.0 * LN_2).abs() < 1e-12
                && (r.rhs.unwrap() - 2.0 * LN_2).abs() < 1e-12
        );
        assert_eq!(r.verdict, Verdict::Holds);
        let q = pmf(&[0.2, 0.3, 0.5]);
        let r = check_covering_lemma(&DiscretePmf::point_mass(3, 0).unwrap(), &q).unwrap();
        // X + Y determines Y, so both sides vanish
        assert!(
            r.lhs.unwrap().abs() < 1e-12 && r.rhs.unwrap().abs() < 1e-12,
            "{r:?}"
        );
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn covering_joint_marginals() {
        let p = pmf(&[0.2, 0.3, 0.5]);
        let q = pmf(&[0.6, 0.4, 0.0]);
        let j = covering_joint(&p, &q).unwrap();
        for (axes, want) in [([0usize, 1usize], &p), ([2, 3], &p)] {
            let m = j.marginal(&axes).unwrap();
            for x in 0..3 {
                for y in 0..3 {
                    assert!((m[x * 3 + y] - want.probs()[x] * q.probs()[y]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn submodularity_examples() {
        let p = pmf(&[0.1, 0.2, 0.3, 0.4]);
        let mut table = vec![0.0; 16];
        for i in 0..4 {
            table[i * 4 + i] = p.probs()[i];
        }
        let joint = DiscreteJoint::new(vec![4, 4], table.clone()).unwrap();
        let diag = FunctionalInstance {
            joint: joint.clone(),
            f: (0..4).collect(),
            g: (0..4).collect(),
            r: (0..16).map(|c| c / 4).collect(),
        };
        let r = check_functional_submodularity(&diag).unwrap();
        assert!(r.slack.unwrap().abs() < 1e-12, "{r:?}");
        let indep = DiscreteJoint::product(&[&p, &p]).unwrap();
        let constant = FunctionalInstance {
            joint: indep,
            f: vec![0; 4],
            g: vec![0; 4],
            r: (0..16).collect(),
        };
        let r = check_functional_submodularity(&constant).unwrap();
        assert!(r.slack.unwrap().abs() < 1e-12);
        let bad = FunctionalInstance {
            g: vec![1, 0, 0, 0],
            ..diag
        };
        assert_eq!(
            check_functional_submodularity(&bad),
            Err(Error::InconsistentMaps { x1: 0, x2: 0 })
        );
    }

    #[test]
    fn uniform_registry_closed_forms() {
        let u = DiscretePmf::uniform(5).unwrap();
        let ln5 = 5f64.ln();
        let r = check_discrete_registry(
            find_discrete_check("discrete.sum_difference").unwrap(),
            &[u.clone(), u.clone()],
            0,
        )
        .unwrap();
        assert!((r.lhs.unwrap() - ln5).abs() < 1e-14 && (r.rhs.unwrap() - ln5).abs() < 1e-14);
        let r = check_discrete_registry(
            find_discrete_check("discrete.trivial2").unwrap(),
            &[u.clone(), u.clone()],
            0,
        )
        .unwrap();
        assert!((r.slack.unwrap() - ln5).abs() < 1e-14);
        let r = check_discrete_registry(
            find_discrete_check("discrete.doubling_difference").unwrap(),
            &[u],
            0,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn half_half_sum_difference() {
        let h = pmf(&[0.5, 0.5, 0.0, 0.0]);
        let r = check_discrete_registry(
            find_discrete_check("discrete.sum_difference").unwrap(),
            &[h.clone(), h],
            0,
        )
        .unwrap();
        // H(X+Y) = H(X-Y) = 1.5 ln 2, H(X) = ln 2
        assert!((r.lhs.unwrap() - 1.5 * LN_2).abs() < 1e-15);
        assert!((r.slack.unwrap() - 1.0 * LN_2).abs() < 1e-14);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn corpus_runs_are_clean() {
        let corpus = random_pmfs(11, 40, 6).unwrap();
        let defs: Vec<_> = DISCRETE_REGISTRY.iter().collect();
        let reports = run_discrete_registry(&defs, &corpus);
        assert_eq!(reports.len(), 40 * 15);
        assert!(reports
            .iter()
            .all(|r| r.verdict != Verdict::Violated && r.verdict != Verdict::Skipped));
        let cov = run_covering(&random_pmfs(3, 20, 5).unwrap());
        assert!(cov.iter().all(|r| r.verdict == Verdict::Holds));
        let sub = run_submodularity(5, 100, 4).unwrap();
        assert!(sub.iter().all(|r| r.slack.unwrap() >= -DISCRETE_TOLERANCE));
    }

    #[test]
    fn pmf_json_round_trip() {
        let p = pmf(&[0.25, 0.75]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[0.25,0.75]");
        assert_eq!(serde_json::from_str::<DiscretePmf>(&s).unwrap(), p);
        assert!(serde_json::from_str::<DiscretePmf>("[0.3,0.3]").is_err());
    }

    proptest! {
        #[test]
        fn sum_is_normalized_and_commutes(a in prop::collection::vec(0.0f64..1.0, 7), b in prop::collection::vec(0.0f64..1.0, 7)) {
            let norm = |v: Vec<f64>| {
                let t: f64 = v.iter().sum::<f64>() + 1e-3;
                let mut w: Vec<f64> = v.iter().map(|x| x / t).collect();
                w[0] += 1.0 - w.iter().sum::<f64>();
                DiscretePmf::new(w).unwrap()
            };
            let (p, q) = (norm(a), norm(b));
            let s = sum_pmf(&p, &q).unwrap();
            let t = sum_pmf(&q, &p).unwrap();
            prop_assert!((s.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (x, y) in s.probs().iter().zip(t.probs()) {
                prop_assert!((x - y).abs() < 1e-15);
            }
            prop_assert!(s.entropy() >= p.entropy().max(q.entropy()) - 1e-12);
        }
    }
}
