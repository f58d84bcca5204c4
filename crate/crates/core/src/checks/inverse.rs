//! Stability bundle around the Gaussian equality case of `sigma >= sqrt(2)`:
//! distance to the moment-matched Gaussian versus doubling and difference
//! constants, the Poincaré-weighted entropy-jump contraction and Pinsker.

use serde::{Deserialize, Serialize};

use super::functionals::{combine, Evaluator, HALF_LN_2};
use crate::distributions::DensityModel;
use crate::error::Result;
use crate::grid::{self, Estimate, Numerics};
use crate::report::InequalityReport;

/// Quantities shared by the bundle's reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseQuantities {
    pub entropy: Estimate,
    pub variance: f64,
    /// `D(f || phi)` against the moment-matched Gaussian.
    pub relative_entropy: Estimate,
    pub gaussian_entropy: f64,
    pub delta_plus: Estimate,
    pub delta_minus: Estimate,
    pub l1_to_gaussian: f64,
    pub poincare: Option<f64>,
}

pub fn inverse_quantities(m: &DensityModel, numerics: &Numerics) -> Result<InverseQuantities> {
    let mut ev = Evaluator::new(*numerics);
    let f = ev.grid(&[(false, m)])?;
    let entropy = grid::entropy(&f);
    let fit = grid::gaussian_fit(&f);
    let relative_entropy = grid::kl_divergence(&f, &fit)?;
    let rf = ev.doubling_and_difference(m)?;
    Ok(InverseQuantities {
        entropy,
        variance: f.moments().variance,
        relative_entropy,
        gaussian_entropy: fit
            .closed_form_entropy()
            .expect("Gaussian entropy is closed form"),
        delta_plus: rf.delta_plus,
        delta_minus: rf.delta_minus,
        l1_to_gaussian: grid::l1_distance(&f, &fit),
        poincare: m.poincare_constant()?,
    })
}

/// Report ids produced by [`inverse_theorem_check`], in order.
pub const INVERSE_REPORT_IDS: [&str; 8] = [
    "inverse.sigma_lower",
    "inverse.delta_lower",
    "inverse.sigma_stability",
    "inverse.delta_stability",
    "inverse.sigma_upper",
    "inverse.delta_upper",
    "inverse.entropy_jump",
    "inverse.pinsker",
];

/// All reports, in log form (`Delta_+ = ln sigma`, `Delta_- = ln delta`):
///
/// * `ln 2 / 2 <= Delta_+` and `ln 2 / 2 <= Delta_-`;
/// * `D <= (2R/s^2 + 1)(Delta_+ - ln 2 / 2)` and
///   `D <= (2R/s^2 + 1)(2 Delta_- - ln 2 / 2)`;
/// * `Delta_+ <= ln 2 / 2 + D` and `Delta_- <= ln 2 / 2 + D`;
/// * `s^2 / (2R + s^2) (h(phi) - h(X)) <= h((X+X')/sqrt 2) - h(X)`;
/// * `||f - phi||_1^2 / 2 <= D`.
///
/// The three reports that need the Poincaré constant `R` are skipped when it
/// is unavailable.
pub fn inverse_theorem_check(
    m: &DensityModel,
    numerics: &Numerics,
) -> Result<Vec<InequalityReport>> {
    let q = inverse_quantities(m, numerics)?;
    Ok(reports_from(&q, vec![format!("X={m}")]))
}

pub fn reports_from(q: &InverseQuantities, inputs: Vec<String>) -> Vec<InequalityReport> {
    let d = q.relative_entropy;
    let (p, mi) = (q.delta_plus, q.delta_minus);
    let ids = INVERSE_REPORT_IDS;
    let exact = |v: f64| Estimate { value: v, err: 0.0 };
    let ineq = |id: &str, lhs: Estimate, rhs: Estimate| {
        InequalityReport::inequality(id, lhs.value, rhs.value, lhs.err + rhs.err, inputs.clone())
    };
    let mut out = vec![
        ineq(ids[0], exact(HALF_LN_2), p),
        ineq(ids[1], exact(HALF_LN_2), mi),
    ];
    let gap = combine(&[(1.0, exact(q.gaussian_entropy)), (-1.0, q.entropy)]);
    match q.poincare {
        Some(r) => {
            let w = 2.0 * r / q.variance + 1.0;
            out.push(ineq(ids[2], d, combine(&[(w, p), (-w, exact(HALF_LN_2))])));
            out.push(ineq(
                ids[3],
                d,
                combine(&[(2.0 * w, mi), (-w, exact(HALF_LN_2))]),
            ));
            out.push(ineq(
                ids[4],
                p,
                combine(&[(1.0, exact(HALF_LN_2)), (1.0, d)]),
            ));
            out.push(ineq(
                ids[5],
                mi,
                combine(&[(1.0, exact(HALF_LN_2)), (1.0, d)]),
            ));
            out.push(ineq(
                ids[6],
                combine(&[(1.0 / w, gap)]),
                combine(&[(1.0, p), (-1.0, exact(HALF_LN_2))]),
            ));
        }
        None => {
            let reason = "Poincare constant unavailable";
            out.push(InequalityReport::skipped(ids[2], inputs.clone(), reason));
            out.push(InequalityReport::skipped(ids[3], inputs.clone(), reason));
            out.push(ineq(
                ids[4],
                p,
                combine(&[(1.0, exact(HALF_LN_2)), (1.0, d)]),
            ));
            out.push(ineq(
                ids[5],
                mi,
                combine(&[(1.0, exact(HALF_LN_2)), (1.0, d)]),
            ));
            out.push(InequalityReport::skipped(ids[6], inputs.clone(), reason));
        }
    }
    out.push(ineq(ids[7], exact(0.5 * q.l1_to_gaussian.powi(2)), d));
    out
}
