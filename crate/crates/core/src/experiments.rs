//! Benchmark experiments: dataset, classifiers with grids, run protocol and
//! pass/fail thresholds, plus the reports they produce.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::classifier::ClassifierKind;
use crate::data::{load_csv, make_blobs, make_moons, CsvOptions, LabeledDataset};
use crate::error::{Error, Result};
use crate::eval::{
    repeated_runs, welch_t_from_samples, Grid, RunRecord, RunStats, RunsProtocol, SplitSeeding, TTestResult,
};

pub const PRESET_IDS: [&str; 3] = ["moons5", "moons25", "blobs5"];

pub const DEFAULT_MOONS_NOISE: f64 = 0.2;
pub const DEFAULT_N_SAMPLES: usize = 400;
pub const DEFAULT_BLOBS_STD: f64 = 1.5;
pub const DEFAULT_SEED: u64 = 0;

pub fn default_blob_centers() -> Vec<Vec<f64>> {
    vec![vec![0.0, 0.0], vec![5.0, 5.0]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "lowercase")]
pub enum DatasetSpec {
    Moons {
        n_samples: usize,
        noise: f64,
    },
    Blobs {
        n_samples: usize,
        centers: Vec<Vec<f64>>,
        std: f64,
    },
    Csv {
        path: PathBuf,
        label_column: usize,
        #[serde(default = "default_true")]
        has_header: bool,
        #[serde(default)]
        missing_token: Option<String>,
    },
}

fn default_true() -> bool {
    true
}

impl DatasetSpec {
    pub fn build(&self, seed: u64) -> Result<LabeledDataset> {
        match self {
            DatasetSpec::Moons { n_samples, noise } => make_moons(*n_samples, *noise, seed),
            DatasetSpec::Blobs { n_samples, centers, std } => make_blobs(*n_samples, centers, *std, seed),
            DatasetSpec::Csv { path, label_column, has_header, missing_token } => {
                let mut opts = CsvOptions::new(*label_column, *has_header);
                if let Some(token) = missing_token {
                    opts.missing_token = token.clone();
                }
                load_csv(path, &opts)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    pub grid: Grid,
}

impl ClassifierSpec {
    /// The declared default search space for each classifier.
    pub fn with_default_grid(kind: ClassifierKind) -> Self {
        let grid = match kind {
            ClassifierKind::Smpa => json!({
                "kind": ["pchip", "clamped-cubic"],
                "lambda": ["log", "sqrt"],
                "base_margin": [20.0, 30.0],
            }),
            ClassifierKind::Mpa => json!({
                "n_members": [3, 5],
                "initial_rate": [0.5, 1.5],
            }),
            ClassifierKind::Knn => json!({ "k": [1, 3, 5, 7, 9, 15] }),
            ClassifierKind::Perceptron => json!({ "rate": [0.01, 0.1, 1.0] }),
            ClassifierKind::Dtree => json!({
                "max_depth": [2, 4, 6, 8, 10],
                "min_leaf": [1, 5],
            }),
        };
        Self { kind, grid: serde_json::from_value(grid).expect("static grid") }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValueFloor {
    pub versus: ClassifierKind,
    /// The reference-versus-`versus` p-value must exceed this.
    pub min_p: f64,
}

/// Pass/fail thresholds on the reference classifier's results.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Acceptance {
    #[serde(default)]
    pub min_mean: Option<f64>,
    #[serde(default)]
    pub max_mean: Option<f64>,
    #[serde(default)]
    pub max_std_sample: Option<f64>,
    #[serde(default)]
    pub min_p_value: Vec<PValueFloor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    pub dataset: DatasetSpec,
    pub classifiers: Vec<ClassifierSpec>,
    /// Row the others are t-tested against; must appear in `classifiers`.
    pub reference: ClassifierKind,
    pub n_runs: usize,
    /// Run `i` uses `seed + i` to generate its dataset, split it and fit.
    pub seed: u64,
    pub test_fraction: f64,
    pub folds: usize,
    #[serde(default)]
    pub acceptance: Acceptance,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn preset(id: &str) -> Option<Self> {
        let moons = DatasetSpec::Moons { n_samples: DEFAULT_N_SAMPLES, noise: DEFAULT_MOONS_NOISE };
        let (dataset, n_runs, acceptance) = match id {
            "moons5" => (
                moons,
                5,
                Acceptance {
                    min_mean: Some(0.94),
                    max_std_sample: Some(0.03),
                    min_p_value: vec![PValueFloor { versus: ClassifierKind::Dtree, min_p: 0.01 }],
                    ..Acceptance::default()
                },
            ),
            "moons25" => (
                moons,
                25,
                Acceptance {
                    min_mean: Some(0.929),
                    max_mean: Some(1.0),
                    max_std_sample: Some(0.05),
                    ..Acceptance::default()
                },
            ),
            "blobs5" => (
                DatasetSpec::Blobs {
                    n_samples: DEFAULT_N_SAMPLES,
                    centers: default_blob_centers(),
                    std: DEFAULT_BLOBS_STD,
                },
                5,
                Acceptance { min_mean: Some(0.96), ..Acceptance::default() },
            ),
            _ => return None,
        };
        let classifiers =
            [ClassifierKind::Smpa, ClassifierKind::Knn, ClassifierKind::Perceptron, ClassifierKind::Dtree]
                .into_iter()
                .map(ClassifierSpec::with_default_grid)
                .collect();
        Some(Self {
            id: id.to_owned(),
            dataset,
            classifiers,
            reference: ClassifierKind::Smpa,
            n_runs,
            seed: DEFAULT_SEED,
            test_fraction: 0.2,
            folds: crate::eval::DEFAULT_FOLDS,
            acceptance,
            output_dir: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::invalid_arg("experiment id is empty"));
        }
        let kinds: BTreeSet<_> = self.classifiers.iter().map(|c| c.kind).collect();
        if kinds.len() != self.classifiers.len() {
            return Err(Error::invalid_arg(format!("experiment '{}' lists a classifier twice", self.id)));
        }
        if !kinds.contains(&self.reference) {
            return Err(Error::invalid_arg(format!(
                "reference classifier {} is not among the experiment's classifiers",
                self.reference
            )));
        }
        if let DatasetSpec::Csv { path, .. } = &self.dataset {
            if !path.exists() {
                return Err(Error::invalid_arg(format!("dataset file {} does not exist", path.display())));
            }
        }
        Ok(())
    }

    /// Pin the epoch count of every classifier that trains in epochs.
    pub fn override_epochs(&mut self, epochs: usize) {
        for spec in &mut self.classifiers {
            if spec.kind.default_params().contains_key("epochs") {
                spec.grid.insert("epochs".into(), vec![json!(epochs)]);
            }
        }
    }
}

/// Parse a config file holding one experiment or a list of them.
pub fn parse_configs(text: &str) -> Result<Vec<ExperimentConfig>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let configs: Vec<ExperimentConfig> =
        if value.is_array() { serde_json::from_value(value)? } else { vec![serde_json::from_value(value)?] };
    let mut ids = BTreeSet::new();
    for c in &configs {
        if !ids.insert(c.id.as_str()) {
            return Err(Error::invalid_arg(format!("duplicate experiment id '{}'", c.id)));
        }
    }
    Ok(configs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierRow {
    pub classifier: ClassifierKind,
    pub grid: Grid,
    pub stats: RunStats,
    pub runs: Vec<RunRecord>,
    /// Reference minus this classifier; absent on the reference row.
    pub vs_reference: Option<TTestResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub observed: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub experiment_id: String,
    pub dataset: DatasetSpec,
    pub n_samples: usize,
    pub n_features: usize,
    pub seed: u64,
    pub n_runs: usize,
    pub test_fraction: f64,
    pub folds: usize,
    pub reference: ClassifierKind,
    pub rows: Vec<ClassifierRow>,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<EvaluationReport> {
    config.validate()?;
    // Generated datasets are redrawn from each run's seed; files are fixed.
    let data = config.dataset.build(config.seed)?;
    let fixed = matches!(config.dataset, DatasetSpec::Csv { .. });
    let source = |seed: u64| if fixed { Ok(data.clone()) } else { config.dataset.build(seed) };
    let protocol = RunsProtocol {
        dataset: &source,
        n_runs: config.n_runs,
        seed0: config.seed,
        test_fraction: config.test_fraction,
        folds: config.folds,
        split_seeding: SplitSeeding::PerRun,
    };
    let mut rows = config
        .classifiers
        .iter()
        .map(|spec| {
            let outcome = repeated_runs(&spec.kind, &spec.grid, &protocol)?;
            Ok(ClassifierRow {
                classifier: spec.kind,
                grid: spec.grid.clone(),
                stats: outcome.stats,
                runs: outcome.records,
                vs_reference: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let reference = rows.iter().find(|r| r.classifier == config.reference).expect("validated").stats.clone();
    for row in rows.iter_mut().filter(|r| r.classifier != config.reference) {
        row.vs_reference = Some(welch_t_from_samples(&reference.per_run_scores, &row.stats.per_run_scores)?);
    }
    let checks = evaluate_checks(&config.acceptance, config.reference, &reference, &rows);
    Ok(EvaluationReport {
        experiment_id: config.id.clone(),
        dataset: config.dataset.clone(),
        n_samples: data.n_samples(),
        n_features: data.n_features(),
        seed: config.seed,
        n_runs: config.n_runs,
        test_fraction: config.test_fraction,
        folds: config.folds,
        reference: config.reference,
        passed: checks.iter().all(|c| c.passed),
        rows,
        checks,
    })
}

fn evaluate_checks(
    acceptance: &Acceptance,
    reference: ClassifierKind,
    stats: &RunStats,
    rows: &[ClassifierRow],
) -> Vec<CheckOutcome> {
    let mut checks = Vec::new();
    let mut push = |name: String, observed: f64, threshold: f64, passed: bool| {
        checks.push(CheckOutcome { name, observed, threshold, passed });
    };
    if let Some(t) = acceptance.min_mean {
        push(format!("{reference} mean accuracy >= {t}"), stats.mean, t, stats.mean >= t);
    }
    if let Some(t) = acceptance.max_mean {
        push(format!("{reference} mean accuracy <= {t}"), stats.mean, t, stats.mean <= t);
    }
    if let Some(t) = acceptance.max_std_sample {
        push(format!("{reference} sample std <= {t}"), stats.std_sample, t, stats.std_sample <= t);
    }
    for floor in &acceptance.min_p_value {
        let p = rows
            .iter()
            .find(|r| r.classifier == floor.versus)
            .and_then(|r| r.vs_reference)
            .map_or(f64::NAN, |t| t.p_value_two_sided);
        push(format!("p-value {reference} vs {} > {}", floor.versus, floor.min_p), p, floor.min_p, p > floor.min_p);
    }
    checks
}

impl EvaluationReport {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    /// One row per run: run index, run seed, then each classifier's test accuracy.
    pub fn scores_csv(&self) -> String {
        let mut out = String::from("run,seed");
        for row in &self.rows {
            write!(out, ",{}", row.classifier).unwrap();
        }
        out.push('\n');
        for run in 0..self.n_runs {
            write!(out, "{run},{}", self.seed.wrapping_add(run as u64)).unwrap();
            for row in &self.rows {
                write!(out, ",{}", row.stats.per_run_scores[run]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Plain-text table: classifier, mean accuracy, population std, and the
    /// t-statistic and p-value against the reference.
    pub fn summary_table(&self) -> String {
        let mut out = format!("{} ({} runs, seed {})\n", self.experiment_id, self.n_runs, self.seed);
        writeln!(
            out,
            "{:<12} {:>13} {:>13} {:>11} {:>9}",
            "Classifier", "Mean Accuracy", "Std Deviation", "T-Statistic", "P-Value"
        )
        .unwrap();
        for row in &self.rows {
            let (t, p) = match row.vs_reference {
                Some(r) => (format!("{:.4}", r.t_statistic), format!("{:.4}", r.p_value_two_sided)),
                None => ("NA".to_owned(), "NA".to_owned()),
            };
            writeln!(
                out,
                "{:<12} {:>13.4} {:>13.4} {:>11} {:>9}",
                row.classifier.as_str().to_uppercase(),
                row.stats.mean,
                row.stats.std_population,
                t,
                p
            )
            .unwrap();
        }
        for check in &self.checks {
            writeln!(
                out,
                "[{}] {} (observed {:.4})",
                if check.passed { "PASS" } else { "FAIL" },
                check.name,
                check.observed
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for id in PRESET_IDS {
            let c = ExperimentConfig::preset(id).unwrap();
            c.validate().unwrap();
            let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
            assert_eq!(back, c);
        }
        assert!(ExperimentConfig::preset("moons6").is_none());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let c = serde_json::to_value(ExperimentConfig::preset("moons5").unwrap()).unwrap();
        let text = serde_json::to_string(&vec![c.clone(), c]).unwrap();
        assert!(parse_configs(&text).is_err());
    }

    #[test]
    fn epoch_override_only_touches_epoch_based_classifiers() {
        let mut c = ExperimentConfig::preset("moons5").unwrap();
        c.override_epochs(7);
        for spec in &c.classifiers {
            let has = spec.grid.contains_key("epochs");
            assert_eq!(has, matches!(spec.kind, ClassifierKind::Smpa | ClassifierKind::Perceptron));
        }
    }

    #[test]
    fn small_experiment_end_to_end() {
        let mut c = ExperimentConfig::preset("blobs5").unwrap();
        c.dataset = DatasetSpec::Blobs { n_samples: 80, centers: default_blob_centers(), std: 1.0 };
        c.n_runs = 3;
        c.override_epochs(20);
        let report = run_experiment(&c).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.rows[0].vs_reference.is_none());
        assert!(report.rows[1..].iter().all(|r| r.vs_reference.is_some()));
        assert_eq!(report.scores_csv().lines().count(), 4);
        assert!(report.summary_table().contains("SMPA"));
        assert_eq!(report.to_json().unwrap(), run_experiment(&c).unwrap().to_json().unwrap());
    }
}
