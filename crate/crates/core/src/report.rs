//! Uniform result record for every executable inequality and identity.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Inequality,
    Identity,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Skipped => "skipped",
        })
    }
}

/// `lower <= value <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

/// Outcome of one check on one input tuple. Sides are oriented so that the
/// claim reads `lhs <= rhs` (or `lhs == rhs` for identities); `slack` is
/// `rhs - lhs`. Skipped reports carry `null` numbers in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub check_id: String,
    pub kind: CheckKind,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub err: Option<f64>,
    pub verdict: Verdict,
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<Bracket>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl InequalityReport {
    /// `lhs <= rhs`: violated only when `slack < -err`, inconclusive when
    /// `|slack| <= err`.
    pub fn inequality(check_id: &str, lhs: f64, rhs: f64, err: f64, inputs: Vec<String>) -> Self {
        let verdict = inequality_verdict(rhs - lhs, err);
        Self::build(
            check_id,
            CheckKind::Inequality,
            lhs,
            rhs,
            err,
            verdict,
            inputs,
        )
    }

    /// `lhs == rhs` within `err`.
    pub fn identity(check_id: &str, lhs: f64, rhs: f64, err: f64, inputs: Vec<String>) -> Self {
        let verdict = identity_verdict(rhs - lhs, err);
        Self::build(
            check_id,
            CheckKind::Identity,
            lhs,
            rhs,
            err,
            verdict,
            inputs,
        )
    }

    /// `lower <= value <= upper`, each bound uncertain by `err`. The reported
    /// `rhs` is whichever bound is closer, so `slack` is the distance to it.
    pub fn two_sided(
        check_id: &str,
        lower: f64,
        value: f64,
        upper: f64,
        err: f64,
        inputs: Vec<String>,
    ) -> Self {
        let (to_lower, to_upper) = (value - lower, upper - value);
        let inner = Self::inequality(check_id, 0.0, to_lower.min(to_upper), err, inputs);
        let (lhs, rhs) = if to_lower <= to_upper {
            (-value, -lower)
        } else {
            (value, upper)
        };
        InequalityReport {
            kind: CheckKind::TwoSided,
            lhs: Some(lhs),
            rhs: Some(rhs),
            bracket: Some(Bracket {
                lower,
                value,
                upper,
            }),
            ..inner
        }
    }

    pub fn skipped(check_id: &str, inputs: Vec<String>, reason: impl Into<String>) -> Self {
        InequalityReport {
            check_id: check_id.to_string(),
            kind: CheckKind::Inequality,
            lhs: None,
            rhs: None,
            slack: None,
            err: None,
            verdict: Verdict::Skipped,
            inputs,
            bracket: None,
            note: Some(reason.into()),
        }
    }

    /// No verdict can be reached (for example a vanishing denominator).
    pub fn undetermined(
        check_id: &str,
        kind: CheckKind,
        inputs: Vec<String>,
        reason: impl Into<String>,
    ) -> Self {
        InequalityReport {
            kind,
            verdict: Verdict::Inconclusive,
            ..Self::skipped(check_id, inputs, reason)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Replace the error band and recompute the verdict; reports without
    /// numbers are unchanged.
    pub fn with_err(mut self, err: f64) -> Self {
        if let (Some(slack), Some(_)) = (self.slack, self.err) {
            self.err = Some(err);
            self.verdict = match self.kind {
                CheckKind::Identity => identity_verdict(slack, err),
                CheckKind::Inequality | CheckKind::TwoSided => inequality_verdict(slack, err),
            };
        }
        self
    }

    pub fn slack_or_nan(&self) -> f64 {
        self.slack.unwrap_or(f64::NAN)
    }

    fn build(
        check_id: &str,
        kind: CheckKind,
        lhs: f64,
        rhs: f64,
        err: f64,
        verdict: Verdict,
        inputs: Vec<String>,
    ) -> Self {
        InequalityReport {
            check_id: check_id.to_string(),
            kind,
            lhs: Some(lhs),
            rhs: Some(rhs),
            slack: Some(rhs - lhs),
            err: Some(err),
            verdict,
            inputs,
            bracket: None,
            note: None,
        }
    }
}

fn inequality_verdict(slack: f64, err: f64) -> Verdict {
    if slack.is_infinite() {
        if slack > 0.0 {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    } else if slack.is_nan() || !err.is_finite() {
        Verdict::Inconclusive
    } else if slack < -err {
        Verdict::Violated
    } else if slack.abs() <= err {
        Verdict::Inconclusive
    } else {
        Verdict::Holds
    }
}

fn identity_verdict(slack: f64, err: f64) -> Verdict {
    if slack.abs() <= err {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn tally<'a>(reports: impl IntoIterator<Item = &'a InequalityReport>) -> Self {
        let mut s = Summary::default();
        for r in reports {
            match r.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::Inconclusive => s.inconclusive += 1,
                Verdict::Skipped => s.skipped += 1,
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.holds + self.violated + self.inconclusive + self.skipped
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_bands() {
        let r = |lhs, rhs| InequalityReport::inequality("t", lhs, rhs, 0.1, vec![]).verdict;
        assert_eq!(r(0.0, 1.0), Verdict::Holds);
        assert_eq!(r(0.0, 0.05), Verdict::Inconclusive);
        assert_eq!(r(0.0, -0.05), Verdict::Inconclusive);
        assert_eq!(r(0.0, -0.2), Verdict::Violated);
    }

    #[test]
    fn identity_and_two_sided() {
        assert_eq!(
            InequalityReport::identity("t", 1.0, 1.0 + 1e-13, 1e-12, vec![]).verdict,
            Verdict::Holds
        );
        assert_eq!(
            InequalityReport::identity("t", 1.0, 1.1, 1e-12, vec![]).verdict,
            Verdict::Violated
        );
        let t = InequalityReport::two_sided("t", 0.5, 1.0, 2.0, 1e-3, vec![]);
        assert_eq!(t.verdict, Verdict::Holds);
        assert!((t.slack.unwrap() - 0.5).abs() < 1e-15);
        let t = InequalityReport::two_sided("t", 0.5, 2.5, 2.0, 1e-3, vec![]);
        assert_eq!(t.verdict, Verdict::Violated);
    }

    #[test]
    fn with_err_rejudges() {
        let r = InequalityReport::inequality("t", 0.0, -1e-11, 1e-12, vec![]);
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.with_err(1e-10).verdict, Verdict::Inconclusive);
        let i = InequalityReport::identity("t", 0.0, 1e-11, 1e-12, vec![]).with_err(1e-10);
        assert_eq!(i.verdict, Verdict::Holds);
        let s = InequalityReport::skipped("t", vec![], "x").with_err(1.0);
        assert_eq!((s.verdict, s.err), (Verdict::Skipped, None));
    }

    #[test]
    fn summary_counts() {
        let reports = vec![
            InequalityReport::inequality("a", 0.0, 1.0, 0.0, vec![]),
            InequalityReport::inequality("a", 0.0, -1.0, 0.0, vec![]),
            InequalityReport::skipped("b", vec![], "no constant"),
        ];
        let s = Summary::tally(&reports);
        assert_eq!(
            (s.holds, s.violated, s.inconclusive, s.skipped),
            (1, 1, 0, 1)
        );
        assert_eq!(s.total(), reports.len());
    }
}
