//! Suite configuration, orchestration and machine-readable reports.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::{
    random_corpus, run_inverse, run_tasks, schedule, CheckDef, DEFAULT_CORPUS_SIZE, REGISTRY,
};
use crate::discrete::{
    random_pmfs, run_covering, run_discrete_registry, run_submodularity, DiscretePmf,
    DISCRETE_REGISTRY, DISCRETE_TOLERANCE, MAX_ORDER, MIN_ORDER,
};
use crate::distributions::{make_model, DensityModel, ModelSpec};
use crate::error::{Error, Result};
use crate::expr::{derive_seed, parse_model};
use crate::gaussian_network::{
    random_variances, rho_sweep, run_bsg_scenario, run_c3122_mi, run_ccond_scenario,
    run_data_processing, run_sub_diff, run_weak_bsg_scenario, ALGEBRA_TOLERANCE,
    DATA_PROCESSING_TOLERANCE,
};
use crate::grid::{Numerics, DEFAULT_COUNT, DEFAULT_WINDOW_SIGMAS};
use crate::report::{InequalityReport, Summary, Verdict};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Largest accepted configuration document.
pub const MAX_CONFIG_BYTES: usize = 1 << 20;
/// Random variance pairs and triples for the Gaussian identities.
pub const GAUSSIAN_TRIALS: usize = 50;
pub const DEFAULT_DISCRETE_ORDER: usize = 6;
pub const DEFAULT_DISCRETE_COUNT: usize = 500;
pub const MAX_CORPUS_SIZE: usize = 10_000;
pub const MAX_DISCRETE_COUNT: usize = 100_000;
pub const SUBMODULARITY_ORDER: usize = 4;
pub const SUBMODULARITY_TRIALS: usize = 1000;
/// Correlation sweep for the BSG and data-processing scenarios.
pub const RHO_SWEEP: (f64, f64, f64) = (-0.95, 0.95, 0.05);

/// Gaussian-network check ids.
pub const GAUSSIAN_CHECKS: [&str; 7] = [
    "sub_diff",
    "c3122_mi",
    "ccond",
    "mic",
    "data_processing",
    "bsg",
    "weak_bsg",
];
/// Discrete checks outside the discrete registry.
pub const DISCRETE_EXTRA_CHECKS: [&str; 2] = ["covering_lemma", "functional_submodularity"];
pub const INVERSE_CHECK: &str = "inverse_theorem";

/// Every selectable check id in run order.
pub fn all_check_ids() -> Vec<&'static str> {
    REGISTRY
        .iter()
        .map(|d| d.id)
        .chain(std::iter::once(INVERSE_CHECK))
        .chain(GAUSSIAN_CHECKS)
        .chain(DISCRETE_REGISTRY.iter().map(|d| d.id))
        .chain(DISCRETE_EXTRA_CHECKS)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Config(format!(
                "unknown format `{other}` (expected json or csv)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Overrides of the fixed tolerance bands of the exact checks.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrete: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_processing: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteNumerics {
    #[serde(default = "default_count")]
    pub grid_count: usize,
    #[serde(default = "default_window")]
    pub window_sigmas: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_count() -> usize {
    DEFAULT_COUNT
}

fn default_window() -> f64 {
    DEFAULT_WINDOW_SIGMAS
}

impl Default for SuiteNumerics {
    fn default() -> Self {
        SuiteNumerics {
            grid_count: DEFAULT_COUNT,
            window_sigmas: DEFAULT_WINDOW_SIGMAS,
            tolerances: Tolerances::default(),
        }
    }
}

impl SuiteNumerics {
    pub fn grid(&self) -> Numerics {
        Numerics {
            grid_count: self.grid_count,
            window_sigmas: self.window_sigmas,
        }
    }
}

/// A corpus entry: a model literal such as `"gaussian(0,1)"` or a
/// parameter record such as `{"kind": "uniform", "lower": 0, "upper": 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelEntry {
    Literal(String),
    Spec(ModelSpec),
}

impl ModelEntry {
    pub fn build(&self) -> Result<DensityModel> {
        match self {
            ModelEntry::Literal(s) => parse_model(s),
            ModelEntry::Spec(spec) => make_model(spec),
        }
    }
}

/// `"default-corpus"` or explicit models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CorpusSpec {
    Named(String),
    Models(Vec<ModelEntry>),
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec::Named(DEFAULT_CORPUS.to_string())
    }
}

pub const DEFAULT_CORPUS: &str = "default-corpus";

/// Random pmfs on `Z_order` or explicit probability vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DiscreteCorpusSpec {
    Random { order: usize, count: usize },
    Pmfs(Vec<DiscretePmf>),
}

impl Default for DiscreteCorpusSpec {
    fn default() -> Self {
        DiscreteCorpusSpec::Random {
            order: DEFAULT_DISCRETE_ORDER,
            count: DEFAULT_DISCRETE_COUNT,
        }
    }
}

/// `"all"` or a list of check ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckSelection {
    All(String),
    Ids(Vec<String>),
}

impl Default for CheckSelection {
    fn default() -> Self {
        CheckSelection::All("all".to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    #[serde(default)]
    pub numerics: SuiteNumerics,
    #[serde(default)]
    pub corpus: CorpusSpec,
    #[serde(default = "default_corpus_size")]
    pub corpus_size: usize,
    #[serde(default)]
    pub discrete_corpus: DiscreteCorpusSpec,
    #[serde(default)]
    pub checks: CheckSelection,
    #[serde(default)]
    pub output: OutputSpec,
    /// Include wall-clock times; reports are then no longer byte-identical
    /// across runs.
    #[serde(default)]
    pub timings: bool,
}

fn default_corpus_size() -> usize {
    DEFAULT_CORPUS_SIZE
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        SuiteConfig {
            seed,
            numerics: SuiteNumerics::default(),
            corpus: CorpusSpec::default(),
            corpus_size: DEFAULT_CORPUS_SIZE,
            discrete_corpus: DiscreteCorpusSpec::default(),
            checks: CheckSelection::default(),
            output: OutputSpec::default(),
            timings: false,
        }
    }

    /// Parse and validate a JSON configuration.
    pub fn from_json(text: &str) -> Result<Self> {
        if text.len() > MAX_CONFIG_BYTES {
            return Err(Error::Config(format!(
                "configuration exceeds {MAX_CONFIG_BYTES} bytes"
            )));
        }
        let cfg: SuiteConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.numerics
            .grid()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        for (name, t) in [
            ("discrete", self.numerics.tolerances.discrete),
            ("algebra", self.numerics.tolerances.algebra),
            ("data_processing", self.numerics.tolerances.data_processing),
        ] {
            if let Some(t) = t {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(Error::Config(format!(
                        "tolerance `{name}` must be finite and nonnegative"
                    )));
                }
            }
        }
        self.selected_checks()?;
        match &self.corpus {
            CorpusSpec::Named(_) if !(1..=MAX_CORPUS_SIZE).contains(&self.corpus_size) => {
                return Err(Error::Config(format!(
                    "corpus_size must lie in [1, {MAX_CORPUS_SIZE}]"
                )));
            }
            CorpusSpec::Named(name) if name != DEFAULT_CORPUS => {
                return Err(Error::Config(format!("unknown corpus `{name}`")));
            }
            CorpusSpec::Named(_) => {}
            CorpusSpec::Models(_) => {
                self.models()?;
            }
        }
        match &self.discrete_corpus {
            DiscreteCorpusSpec::Random { order, count } => {
                if !(MIN_ORDER..=MAX_ORDER).contains(order) {
                    return Err(Error::Config(format!(
                        "discrete order must lie in [{MIN_ORDER}, {MAX_ORDER}]"
                    )));
                }
                if !(1..=MAX_DISCRETE_COUNT).contains(count) {
                    return Err(Error::Config(format!(
                        "discrete count must lie in [1, {MAX_DISCRETE_COUNT}]"
                    )));
                }
            }
            DiscreteCorpusSpec::Pmfs(_) => {
                self.discrete_models()?;
            }
        }
        Ok(())
    }

    /// Selected ids in canonical run order, duplicates removed.
    pub fn selected_checks(&self) -> Result<Vec<&'static str>> {
        let all = all_check_ids();
        match &self.checks {
            CheckSelection::All(s) if s == "all" => Ok(all),
            CheckSelection::All(s) => Err(Error::Config(format!(
                "checks must be \"all\" or a list of ids, got `{s}`"
            ))),
            CheckSelection::Ids(ids) => {
                if ids.is_empty() {
                    return Err(Error::Config("no checks selected".into()));
                }
                let mut wanted = BTreeSet::new();
                for id in ids {
                    if !all.contains(&id.as_str()) {
                        return Err(Error::UnknownCheck(id.clone()));
                    }
                    wanted.insert(id.as_str());
                }
                Ok(all.into_iter().filter(|id| wanted.contains(id)).collect())
            }
        }
    }

    pub fn models(&self) -> Result<Vec<DensityModel>> {
        match &self.corpus {
            CorpusSpec::Named(name) if name == DEFAULT_CORPUS => {
                Ok(random_corpus(derive_seed(self.seed, 0), self.corpus_size))
            }
            CorpusSpec::Named(name) => Err(Error::Config(format!("unknown corpus `{name}`"))),
            CorpusSpec::Models(list) => {
                if list.is_empty() {
                    return Err(Error::Config("corpus is empty".into()));
                }
                list.iter()
                    .enumerate()
                    .map(|(i, m)| {
                        m.build()
                            .map_err(|e| Error::Config(format!("corpus entry {i}: {e}")))
                    })
                    .collect()
            }
        }
    }

    pub fn discrete_models(&self) -> Result<Vec<DiscretePmf>> {
        match &self.discrete_corpus {
            DiscreteCorpusSpec::Random { order, count } => {
                random_pmfs(derive_seed(self.seed, 1), *count, *order)
                    .map_err(|e| Error::Config(e.to_string()))
            }
            DiscreteCorpusSpec::Pmfs(list) => {
                let order = list
                    .first()
                    .map(|p| p.order())
                    .ok_or_else(|| Error::Config("discrete corpus is empty".into()))?;
                if let Some(p) = list.iter().find(|p| p.order() != order) {
                    return Err(Error::Config(format!(
                        "discrete corpus mixes Z_{order} and Z_{}",
                        p.order()
                    )));
                }
                Ok(list.clone())
            }
        }
    }
}

/// Per-family tally in the suite report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub check_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statement: Option<String>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub families: Vec<FamilySummary>,
    pub reports: Vec<InequalityReport>,
}

impl SuiteReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Flat projection: one row per report, numbers empty when absent.
    pub fn to_csv(&self) -> Result<String> {
        reports_to_csv(&self.reports)
    }

    pub fn has_violations(&self) -> bool {
        self.summary.violated > 0
    }
}

pub fn reports_to_csv(reports: &[InequalityReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "check_id", "kind", "lhs", "rhs", "slack", "err", "verdict", "inputs", "note",
    ])
    .map_err(io)?;
    let num = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
    for r in reports {
        let kind = serde_json::to_value(r.kind).map_err(|e| Error::Io(e.to_string()))?;
        w.write_record([
            r.check_id.clone(),
            kind.as_str().unwrap_or_default().to_string(),
            num(r.lhs),
            num(r.rhs),
            num(r.slack),
            num(r.err),
            r.verdict.to_string(),
            r.inputs.join("; "),
            r.note.clone().unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn rescale(
    reports: Vec<InequalityReport>,
    base: f64,
    wanted: Option<f64>,
) -> Vec<InequalityReport> {
    match wanted {
        Some(t) if t != base => reports
            .into_iter()
            .map(|r| match r.err {
                Some(e) => r.with_err(e * t / base),
                None => r,
            })
            .collect(),
        _ => reports,
    }
}

fn or_skip(id: &str, inputs: Vec<String>, r: Result<InequalityReport>) -> InequalityReport {
    r.unwrap_or_else(|e| InequalityReport::skipped(id, inputs, e.to_string()))
}

struct Context<'a> {
    cfg: &'a SuiteConfig,
    numerics: Numerics,
    corpus: Vec<DensityModel>,
    discrete: Vec<DiscretePmf>,
}

impl Context<'_> {
    fn run(&self, id: &str) -> Result<Vec<InequalityReport>> {
        let tol = self.cfg.numerics.tolerances;
        let seed = self.cfg.seed;
        if let Some(def) = REGISTRY.iter().find(|d| d.id == id) {
            let defs: Vec<&'static CheckDef> = vec![def];
            return Ok(run_tasks(
                &schedule(&defs, self.corpus.len()),
                &self.corpus,
                &self.numerics,
            ));
        }
        if let Some(def) = DISCRETE_REGISTRY.iter().find(|d| d.id == id) {
            let reports = run_discrete_registry(&[def], &self.discrete);
            return Ok(rescale(reports, DISCRETE_TOLERANCE, tol.discrete));
        }
        let sweep = || rho_sweep(RHO_SWEEP.0, RHO_SWEEP.1, RHO_SWEEP.2);
        let reports = match id {
            INVERSE_CHECK => run_inverse(&self.corpus, &self.numerics),
            "covering_lemma" => rescale(
                run_covering(&self.discrete),
                DISCRETE_TOLERANCE,
                tol.discrete,
            ),
            "functional_submodularity" => rescale(
                run_submodularity(
                    derive_seed(seed, 3),
                    SUBMODULARITY_TRIALS,
                    SUBMODULARITY_ORDER,
                )?,
                DISCRETE_TOLERANCE,
                tol.discrete,
            ),
            "ccond" | "mic" => {
                let pairs = random_variances(derive_seed(seed, 4), GAUSSIAN_TRIALS, 2);
                let reports = pairs
                    .par_iter()
                    .map(|v| {
                        let inputs = vec![format!("var_x={}", v[0]), format!("var_y={}", v[1])];
                        let r =
                            run_ccond_scenario(v[0], v[1])
                                .map(|(c, m)| if id == "ccond" { c } else { m });
                        or_skip(id, inputs, r)
                    })
                    .collect();
                rescale(reports, ALGEBRA_TOLERANCE, tol.algebra)
            }
            "sub_diff" | "c3122_mi" => {
                let triples = random_variances(derive_seed(seed, 5), GAUSSIAN_TRIALS, 3);
                let reports = triples
                    .par_iter()
                    .map(|v| {
                        let inputs = vec![
                            format!("var_x={}", v[0]),
                            format!("var_y={}", v[1]),
                            format!("var_z={}", v[2]),
                        ];
                        let r = if id == "sub_diff" {
                            run_sub_diff(v[0], v[1], v[2])
                        } else {
                            run_c3122_mi(v[0], v[1], v[2])
                        };
                        or_skip(id, inputs, r)
                    })
                    .collect();
                rescale(reports, DATA_PROCESSING_TOLERANCE, tol.data_processing)
            }
            "data_processing" => {
                let reports = sweep()?
                    .par_iter()
                    .map(|&rho| {
                        run_data_processing(rho).unwrap_or_else(|e| {
                            vec![InequalityReport::skipped(
                                id,
                                vec![format!("rho={rho}")],
                                e.to_string(),
                            )]
                        })
                    })
                    .flatten()
                    .collect();
                rescale(reports, DATA_PROCESSING_TOLERANCE, tol.data_processing)
            }
            "bsg" => {
                let reports = sweep()?
                    .par_iter()
                    .map(|&rho| match run_bsg_scenario(rho) {
                        Ok(s) => s.to_reports(),
                        Err(e) => vec![InequalityReport::skipped(
                            id,
                            vec![format!("rho={rho}")],
                            e.to_string(),
                        )],
                    })
                    .flatten()
                    .collect();
                rescale(reports, ALGEBRA_TOLERANCE, tol.algebra)
            }
            "weak_bsg" => {
                let reports = sweep()?
                    .par_iter()
                    .map(|&rho| or_skip(id, vec![format!("rho={rho}")], run_weak_bsg_scenario(rho)))
                    .collect();
                rescale(reports, ALGEBRA_TOLERANCE, tol.algebra)
            }
            other => return Err(Error::UnknownCheck(other.to_string())),
        };
        Ok(reports)
    }
}

fn statement_of(id: &str) -> Option<String> {
    REGISTRY
        .iter()
        .find(|d| d.id == id)
        .map(|d| d.statement)
        .or_else(|| {
            DISCRETE_REGISTRY
                .iter()
                .find(|d| d.id == id)
                .map(|d| d.statement)
        })
        .map(str::to_string)
}

/// Run every selected check. Check-level failures become skipped reports;
/// only configuration problems are errors.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let ctx = Context {
        cfg,
        numerics: cfg.numerics.grid(),
        corpus: cfg.models()?,
        discrete: cfg.discrete_models()?,
    };
    let mut reports = Vec::new();
    let mut families = Vec::new();
    for id in cfg.selected_checks()? {
        let start = Instant::now();
        let batch = ctx
            .run(id)
            .unwrap_or_else(|e| vec![InequalityReport::skipped(id, vec![], e.to_string())]);
        families.push(FamilySummary {
            check_id: id.to_string(),
            statement: statement_of(id),
            summary: Summary::tally(&batch),
            seconds: cfg.timings.then(|| start.elapsed().as_secs_f64()),
        });
        reports.extend(batch);
    }
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        config: cfg.clone(),
        summary: Summary::tally(&reports),
        families,
        reports,
    })
}

/// Exit status for a finished run: 0 without violations, 1 otherwise.
pub fn exit_code(reports: &[InequalityReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Violated) {
        1
    } else {
        0
    }
}
