//! Continuous sumset inequalities as executable checks.

use serde::{Deserialize, Serialize};

use super::functionals::{combine, Evaluator, HALF_LN_2};
use crate::distributions::DensityModel;
use crate::error::{Error, Result};
use crate::grid::{self, Estimate, Numerics};
use crate::report::{CheckKind, InequalityReport};

/// Extra parameter of a parameterized check family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    None,
    Alpha(f64),
    N(usize),
}

/// A registered check. `statement` is the claim in plain notation with
/// independent copies implied (`X'` is an independent copy of `X`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckDef {
    pub id: &'static str,
    pub name: &'static str,
    pub statement: &'static str,
    pub kind: CheckKind,
    /// Parameter values swept when the check runs over a corpus.
    pub params: &'static [Param],
}

impl CheckDef {
    pub fn accepts(&self, param: Param) -> bool {
        match (self.id, param) {
            ("sum_difference_mi", Param::Alpha(a)) => (0.0..=1.0).contains(&a),
            ("plunnecke_ruzsa" | "iterated_sum", Param::N(n)) => n >= 1,
            ("sum_difference_mi" | "plunnecke_ruzsa" | "iterated_sum", _) => false,
            (_, p) => p == Param::None,
        }
    }

    /// Number of model inputs for a parameter value.
    pub fn arity(&self, param: Param) -> usize {
        match (self.id, param) {
            ("doubling_difference" | "sigma_delta" | "epi_doubling", _) => 1,
            ("lower_bound" | "sum_difference" | "sum_difference_mi" | "iterated_sum", _) => 2,
            ("ruzsa_triangle" | "triangle_metric" | "csumdiff" | "c3122", _) => 3,
            ("four_variable", _) => 4,
            ("plunnecke_ruzsa", Param::N(n)) => n + 1,
            _ => 0,
        }
    }
}

const NONE: &[Param] = &[Param::None];

pub const REGISTRY: &[CheckDef] = &[
    CheckDef {
        id: "lower_bound",
        name: "sum lower bound",
        statement: "max(h(X), h(Y)) <= h(X+Y)",
        kind: CheckKind::Inequality,
        params: NONE,
    },
    CheckDef {
        id: "ruzsa_triangle",
        name: "Ruzsa triangle inequality",
        statement: "h(X-Z) <= h(X-Y) + h(Y-Z) - h(Y)",
        kind: CheckKind::Inequality,
        params: NONE,
    },
    CheckDef {
        id: "triangle_metric",
        name: "Ruzsa distance triangle inequality",
        statement: "dist(X,Z) <= dist(X,Y) + dist(Y,Z), dist(A,B) = h(A-B) - h(A)/2 - h(B)/2",
        kind: CheckKind::Inequality,
        params: NONE,
    },
    CheckDef {
        id: "csumdiff",
        name: "sum-difference submodularity",
        statement: "h(X-Z) + h(Y) <= h(X+Y) + h(Y+Z)",
        kind: CheckKind::Inequality,
        params: NONE,
    },
    CheckDef {
        id: "c3122",
        name: "three-term submodularity",
        statement: "h(X+Y+Z) + h(Y) <= h(X+Y) + h(Y+Z)",
        kind: CheckKind::Inequality,
        params: NONE,
    },
    CheckDef {
        id: "doubling_difference",
        name: "doubling-difference inequality",
        statement: "1/2 <= (h(X+X') - h(X)) / (h(X-X') - h(X)) <= 2",
        kind: CheckKind::TwoSided,
        params: NONE,
    },
    CheckDef {
        id: "sigma_delta",
        name: "doubling versus difference constant",
        statement: "delta^(1/2) <= sigma <= delta^2, sigma = exp(h(X+X') - h(X)), delta = exp(h(X-X') - h(X))",
        kind: CheckKind::TwoSided,
        params: NONE,
    },
    CheckDef {
        id: "sum_difference",
        name: "sum-difference inequality",
        statement: "h(X+Y) <= 3 h(X-Y) - h(X) - h(Y)",
        kind: CheckKind::Inequality,
        params: NONE,
    },
    CheckDef {
        id: "sum_difference_mi",
        name: "sum-difference inequality for information",
        statement: "a I(X+Y;X) + (1-a) I(X+Y;Y) <= (1+a) I(X-Y;X) + (2-a) I(X-Y;Y)",
        kind: CheckKind::Inequality,
        params: &[
            Param::Alpha(0.0),
            Param::Alpha(0.25),
            Param::Alpha(0.5),
            Param::Alpha(0.75),
            Param::Alpha(1.0),
        ],
    },
    CheckDef {
        id: "plunnecke_ruzsa",
        name: "Plunnecke-Ruzsa inequality",
        statement: "h(X+Y_1+...+Y_n) <= h(X) + sum_i ln K_i, ln K_i = h(X+Y_i) - h(X)",
        kind: CheckKind::Inequality,
        params: &[Param::N(1), Param::N(2), Param::N(3), Param::N(4)],
    },
    CheckDef {
        id: "four_variable",
        name: "four-variable submodularity",
        statement: "h(X+Y+Z+W) + h(Y) + h(Z) <= h(X+Y) + h(Y+Z) + h(Z+W)",
        kind: CheckKind::Inequality,
        params: NONE,
    },
    CheckDef {
        id: "iterated_sum",
        name: "iterated sum bound",
        statement: "h(S_0+...+S_n) <= (2n+1) h(X+Y) - n h(X) - n h(Y), S_i = X_i + Y_i i.i.d.",
        kind: CheckKind::Inequality,
        params: &[Param::N(1), Param::N(2), Param::N(3)],
    },
    CheckDef {
        id: "epi_doubling",
        name: "entropy-power floor on doubling",
        statement: "sqrt(2) <= min(sigma, delta)",
        kind: CheckKind::Inequality,
        params: NONE,
    },
];

pub fn find_check(id: &str) -> Option<&'static CheckDef> {
    REGISTRY.iter().find(|d| d.id == id)
}

fn labels(n: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["X", "Y", "Z", "W"];
    if n <= 4 {
        NAMES[..n].iter().map(|s| s.to_string()).collect()
    } else {
        std::iter::once("X".to_string())
            .chain((1..n).map(|i| format!("Y{i}")))
            .collect()
    }
}

/// Echo of the inputs: `label=model` for every model, then the parameter.
pub fn describe_inputs(def: &CheckDef, models: &[DensityModel], param: Param) -> Vec<String> {
    let names = if def.id == "plunnecke_ruzsa" {
        std::iter::once("X".to_string())
            .chain((1..models.len()).map(|i| format!("Y{i}")))
            .collect()
    } else {
        labels(models.len())
    };
    let mut out: Vec<String> = names
        .iter()
        .zip(models)
        .map(|(n, m)| format!("{n}={m}"))
        .collect();
    match param {
        Param::None => {}
        Param::Alpha(a) => out.push(format!("alpha={a}")),
        Param::N(n) => out.push(format!("n={n}")),
    }
    out
}

fn ineq(id: &str, lhs: Estimate, rhs: Estimate, inputs: Vec<String>) -> InequalityReport {
    InequalityReport::inequality(id, lhs.value, rhs.value, lhs.err + rhs.err, inputs)
}

/// Evaluate one check on one input tuple.
pub fn run_check(
    def: &CheckDef,
    models: &[DensityModel],
    param: Param,
    numerics: &Numerics,
) -> Result<InequalityReport> {
    let want = def.arity(param);
    if want == 0 || !def.accepts(param) {
        return Err(Error::InvalidParameter(format!(
            "{} does not take {param:?}",
            def.id
        )));
    }
    if models.len() != want {
        return Err(Error::Arity {
            check: def.id.to_string(),
            expected: want,
            got: models.len(),
        });
    }
    let inputs = describe_inputs(def, models, param);
    let mut ev = Evaluator::new(*numerics);
    let id = def.id;
    let report = match id {
        "lower_bound" => {
            let (x, y) = (&models[0], &models[1]);
            let hx = ev.h1(x)?;
            let hy = ev.h1(y)?;
            let big = if hx.value >= hy.value { hx } else { hy };
            let s = ev.h_sum(x, y)?;
            InequalityReport::inequality(id, big.value, s.value, hx.err + hy.err + s.err, inputs)
        }
        "ruzsa_triangle" => {
            let (x, y, z) = (&models[0], &models[1], &models[2]);
            let lhs = ev.h_diff(x, z)?;
            let rhs = combine(&[
                (1.0, ev.h_diff(x, y)?),
                (1.0, ev.h_diff(y, z)?),
                (-1.0, ev.h1(y)?),
            ]);
            ineq(id, lhs, rhs, inputs)
        }
        "triangle_metric" => {
            let (x, y, z) = (&models[0], &models[1], &models[2]);
            let lhs = ev.ruzsa_distance(x, z)?;
            let rhs = combine(&[
                (1.0, ev.ruzsa_distance(x, y)?),
                (1.0, ev.ruzsa_distance(y, z)?),
            ]);
            ineq(id, lhs, rhs, inputs)
        }
        "csumdiff" => {
            let (x, y, z) = (&models[0], &models[1], &models[2]);
            let lhs = combine(&[(1.0, ev.h_diff(x, z)?), (1.0, ev.h1(y)?)]);
            let rhs = combine(&[(1.0, ev.h_sum(x, y)?), (1.0, ev.h_sum(y, z)?)]);
            ineq(id, lhs, rhs, inputs)
        }
        "c3122" => {
            let (x, y, z) = (&models[0], &models[1], &models[2]);
            let lhs = combine(&[
                (1.0, ev.h(&[(false, x), (false, y), (false, z)])?),
                (1.0, ev.h1(y)?),
            ]);
            let rhs = combine(&[(1.0, ev.h_sum(x, y)?), (1.0, ev.h_sum(y, z)?)]);
            ineq(id, lhs, rhs, inputs)
        }
        "doubling_difference" => {
            let f = ev.doubling_and_difference(&models[0])?;
            let m = f.delta_minus;
            if m.value.abs() <= m.err {
                InequalityReport::undetermined(
                    id,
                    CheckKind::TwoSided,
                    inputs,
                    "degenerate denominator: |h(X-X') - h(X)| within error",
                )
            } else {
                let r = f.ratio();
                InequalityReport::two_sided(id, 0.5, r.value, 2.0, r.err, inputs)
            }
        }
        "sigma_delta" => {
            let f = ev.doubling_and_difference(&models[0])?;
            let (p, m) = (f.delta_plus, f.delta_minus);
            InequalityReport::two_sided(
                id,
                0.5 * m.value,
                p.value,
                2.0 * m.value,
                p.err + 2.0 * m.err,
                inputs,
            )
            .with_note(format!("sigma={} delta={}", f.sigma, f.delta))
        }
        "sum_difference" => {
            let (x, y) = (&models[0], &models[1]);
            let lhs = ev.h_sum(x, y)?;
            let rhs = combine(&[
                (3.0, ev.h_diff(x, y)?),
                (-1.0, ev.h1(x)?),
                (-1.0, ev.h1(y)?),
            ]);
            ineq(id, lhs, rhs, inputs)
        }
        "sum_difference_mi" => {
            let Param::Alpha(a) = param else {
                unreachable!()
            };
            let (x, y) = (&models[0], &models[1]);
            let (hx, hy) = (ev.h1(x)?, ev.h1(y)?);
            let s = ev.h_sum(x, y)?;
            let d = ev.h_diff(x, y)?;
            // I(X+Y;X) = h(X+Y) - h(Y), I(X-Y;Y) = h(X-Y) - h(X), etc.
            let lhs = combine(&[(1.0, s), (-a, hy), (-(1.0 - a), hx)]);
            let rhs = combine(&[(3.0, d), (-(1.0 + a), hy), (-(2.0 - a), hx)]);
            ineq(id, lhs, rhs, inputs)
        }
        "plunnecke_ruzsa" => {
            let x = &models[0];
            let hx = ev.h1(x)?;
            let terms: Vec<(bool, &DensityModel)> = models.iter().map(|m| (false, m)).collect();
            let lhs = ev.h(&terms)?;
            let mut parts = vec![(1.0, hx)];
            for y in &models[1..] {
                parts.push((1.0, ev.h_sum(x, y)?));
                parts.push((-1.0, hx));
            }
            let rhs = combine(&parts);
            ineq(id, lhs, rhs, inputs)
        }
        "four_variable" => {
            let (x, y, z, w) = (&models[0], &models[1], &models[2], &models[3]);
            let lhs = combine(&[
                (
                    1.0,
                    ev.h(&[(false, x), (false, y), (false, z), (false, w)])?,
                ),
                (1.0, ev.h1(y)?),
                (1.0, ev.h1(z)?),
            ]);
            let rhs = combine(&[
                (1.0, ev.h_sum(x, y)?),
                (1.0, ev.h_sum(y, z)?),
                (1.0, ev.h_sum(z, w)?),
            ]);
            ineq(id, lhs, rhs, inputs)
        }
        "iterated_sum" => {
            let Param::N(n) = param else { unreachable!() };
            let (x, y) = (&models[0], &models[1]);
            let lhs = grid::entropy(&ev.grid_iid(&[(false, x), (false, y)], n + 1)?);
            let nf = n as f64;
            let rhs = combine(&[
                (2.0 * nf + 1.0, ev.h_sum(x, y)?),
                (-nf, ev.h1(x)?),
                (-nf, ev.h1(y)?),
            ]);
            ineq(id, lhs, rhs, inputs)
        }
        "epi_doubling" => {
            let f = ev.doubling_and_difference(&models[0])?;
            let low = if f.delta_plus.value <= f.delta_minus.value {
                f.delta_plus
            } else {
                f.delta_minus
            };
            InequalityReport::inequality(id, HALF_LN_2, low.value, low.err, inputs)
                .with_note(format!("sigma={} delta={}", f.sigma, f.delta))
        }
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    Ok(report)
}

/// Closed form of the Plunnecke-Ruzsa gap `lhs - rhs` for `X ~ N(0,1)`,
/// `Y_i ~ N(0, tau^2)`.
pub fn plunnecke_gaussian_gap(n: usize, tau2: f64) -> f64 {
    0.5 * (1.0 + n as f64 * tau2).ln() - 0.5 * n as f64 * (1.0 + tau2).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{EULER_GAMMA, LN_2PI_E};
    use crate::report::Verdict;
    use std::f64::consts::LN_2;

    fn n() -> Numerics {
        Numerics::default()
    }

    fn g(v: f64) -> DensityModel {
        DensityModel::gaussian(0.0, v).unwrap()
    }

    #[test]
    fn ruzsa_triangle_gaussians() {
        let def = find_check("ruzsa_triangle").unwrap();
        let r = run_check(def, &[g(1.0), g(1.0), g(1.0)], Param::None, &n()).unwrap();
        let c2 = 0.5 * (LN_2PI_E + LN_2);
        assert!((r.lhs.unwrap() - c2).abs() < 1e-6);
        assert!((r.rhs.unwrap() - (2.0 * c2 - 0.5 * LN_2PI_E)).abs() < 1e-6);
        assert!((r.slack.unwrap() - 0.5 * LN_2).abs() < 1e-6);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn doubling_difference_examples() {
        let def = find_check("doubling_difference").unwrap();
        let r = run_check(def, &[g(1.0)], Param::None, &n()).unwrap();
        let b = r.bracket.unwrap();
        assert!((b.value - 1.0).abs() <= r.err.unwrap().max(1e-6));
        assert_eq!(r.verdict, Verdict::Holds);
        let e = DensityModel::exponential(1.0).unwrap();
        let r = run_check(def, &[e], Param::None, &n()).unwrap();
        assert!((r.bracket.unwrap().value - EULER_GAMMA / LN_2).abs() < 1e-3);
    }

    #[test]
    fn sum_difference_exponentials() {
        let def = find_check("sum_difference").unwrap();
        let e = DensityModel::exponential(1.0).unwrap();
        let r = run_check(def, &[e.clone(), e], Param::None, &n()).unwrap();
        assert!((r.lhs.unwrap() - (1.0 + EULER_GAMMA)).abs() < 1e-4);
        assert!((r.rhs.unwrap() - (3.0 * (1.0 + LN_2) - 2.0)).abs() < 1e-4);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn triangle_metric_with_repeated_input() {
        let def = find_check("triangle_metric").unwrap();
        let x = DensityModel::laplace(0.5, 1.5).unwrap();
        let z = DensityModel::uniform(-1.0, 2.0).unwrap();
        let r = run_check(def, &[x.clone(), x.clone(), z], Param::None, &n()).unwrap();
        let dxx = crate::checks::ruzsa_distance(&x, &x, &n()).unwrap();
        assert!((r.slack.unwrap() - dxx.value).abs() <= r.err.unwrap() + dxx.err);
        assert!(r.slack.unwrap() >= 0.0);
    }

    #[test]
    fn plunnecke_gaussian_closed_form() {
        let def = find_check("plunnecke_ruzsa").unwrap();
        for n_y in 1..=4 {
            let tau2 = 0.7;
            let mut models = vec![g(1.0)];
            models.extend((0..n_y).map(|_| g(tau2)));
            let r = run_check(def, &models, Param::N(n_y), &n()).unwrap();
            let gap = r.lhs.unwrap() - r.rhs.unwrap();
            let exact = plunnecke_gaussian_gap(n_y, tau2);
            assert!(exact <= 0.0);
            assert!(
                (gap - exact).abs() <= 2.0 * r.err.unwrap().max(1e-7),
                "{n_y}: {gap} vs {exact}"
            );
        }
    }

    #[test]
    fn arity_and_param_errors() {
        let def = find_check("c3122").unwrap();
        assert!(matches!(
            run_check(def, &[g(1.0)], Param::None, &n()),
            Err(Error::Arity { .. })
        ));
        assert!(run_check(def, &[g(1.0), g(1.0), g(1.0)], Param::N(2), &n()).is_err());
        assert!(find_check("frobnicate").is_none());
    }

    #[test]
    fn every_check_holds_on_mixed_inputs() {
        let pool = [
            DensityModel::gaussian(1.0, 2.0).unwrap(),
            DensityModel::uniform(-1.0, 0.5).unwrap(),
            DensityModel::exponential(0.7).unwrap(),
            DensityModel::laplace(-2.0, 0.5).unwrap(),
            DensityModel::mixture(
                vec![0.4, 0.6],
                vec![g(0.3), DensityModel::gaussian(3.0, 1.0).unwrap()],
            )
            .unwrap(),
        ];
        for def in REGISTRY {
            for &p in def.params {
                let k = def.arity(p);
                let models: Vec<DensityModel> =
                    (0..k).map(|i| pool[i % pool.len()].clone()).collect();
                let r = run_check(def, &models, p, &n()).unwrap();
                assert_ne!(r.verdict, Verdict::Violated, "{r:?}");
            }
        }
    }
}
