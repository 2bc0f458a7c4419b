use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, ensure, Context, Result};
use movingpoints::classifier::{Classifier, ClassifierKind, Estimator, FittedModel, Params};
use movingpoints::data::{load_csv, make_blobs, make_moons, CsvOptions, LabeledDataset};
use movingpoints::eval::{accuracy, grid_search, sequential_backward_selection, Grid, DEFAULT_FOLDS};
use movingpoints::experiments::{
    default_blob_centers, parse_configs, run_experiment, ClassifierSpec, ExperimentConfig, PRESET_IDS,
};
use ndarray::Array2;
use serde::Serialize;
use serde_json::Value;

use crate::files::write_atomic;
use crate::svg;
use crate::Generator;

/// Points sampled along an SMPA boundary for `boundary.csv`.
const TRACE_POINTS: usize = 200;

fn parse_kind(name: &str) -> Result<ClassifierKind> {
    ClassifierKind::parse(name).ok_or_else(|| {
        let known: Vec<_> = ClassifierKind::ALL.iter().map(|k| k.as_str()).collect();
        anyhow!("unknown classifier '{name}' (expected one of {})", known.join(", "))
    })
}

fn parse_json_object(flag: &str, text: &str) -> Result<serde_json::Map<String, Value>> {
    match serde_json::from_str(text).with_context(|| format!("{flag} is not valid JSON"))? {
        Value::Object(map) => Ok(map),
        _ => bail!("{flag} must be a JSON object"),
    }
}

/// Scalars become one-element lists so any override map is also a grid.
fn grid_from_json(text: &str) -> Result<Grid> {
    parse_json_object("--grid", text)?
        .into_iter()
        .map(|(k, v)| {
            let values = match v {
                Value::Array(list) => list,
                other => vec![other],
            };
            ensure!(!values.is_empty(), "--grid entry '{k}' has no values");
            Ok((k, values))
        })
        .collect()
}

fn load_dataset(path: &Path, label_column: Option<usize>) -> Result<LabeledDataset> {
    let label_column = match label_column {
        Some(c) => c,
        None => {
            let mut rdr = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
            let width = rdr.headers().with_context(|| format!("cannot read header of {}", path.display()))?.len();
            ensure!(width >= 2, "{} needs at least one feature column and a label column", path.display());
            width - 1
        }
    };
    load_csv(path, &CsvOptions::new(label_column, true)).with_context(|| format!("cannot load {}", path.display()))
}

pub fn generate(
    generator: Generator,
    n_samples: usize,
    noise: f64,
    centers: Option<&str>,
    std: f64,
    seed: u64,
    out: &Path,
) -> Result<ExitCode> {
    let data = match generator {
        Generator::Moons => make_moons(n_samples, noise, seed)?,
        Generator::Blobs => {
            let centers: Vec<Vec<f64>> = match centers {
                Some(text) => serde_json::from_str(text).context("--centers must be a JSON list of points")?,
                None => default_blob_centers(),
            };
            make_blobs(n_samples, &centers, std, seed)?
        }
    };
    write_atomic(out, data.to_csv_string().as_bytes())?;
    let [c0, c1] = data.class_counts();
    println!("wrote {}: n={} d={} class0={c0} class1={c1}", out.display(), data.n_samples(), data.n_features());
    Ok(ExitCode::SUCCESS)
}

pub struct TrainArgs {
    pub classifier: String,
    pub data: PathBuf,
    pub label_column: Option<usize>,
    pub grid: Option<String>,
    pub epochs: Option<usize>,
    pub seed: u64,
    pub out: PathBuf,
}

fn pin_epochs(kind: ClassifierKind, grid: &mut Grid, epochs: Option<usize>) -> Result<()> {
    if let Some(e) = epochs {
        ensure!(kind.default_params().contains_key("epochs"), "--epochs does not apply to {kind}");
        grid.insert("epochs".into(), vec![Value::from(e)]);
    }
    Ok(())
}

/// Search the grid when it holds alternatives, otherwise use it as is.
fn choose_params(kind: ClassifierKind, grid: &Grid, data: &LabeledDataset, seed: u64) -> Result<Params> {
    if grid.values().all(|v| v.len() == 1) {
        return Ok(grid.iter().map(|(k, v)| (k.clone(), v[0].clone())).collect());
    }
    let search = grid_search(&kind, grid, data, DEFAULT_FOLDS, seed)?;
    println!(
        "grid search: {} configurations, best cv accuracy {:.4} with {}",
        search.all_results.len(),
        search.best_cv_score,
        serde_json::to_string(&search.best_config)?
    );
    Ok(search.best_config)
}

pub fn train(args: &TrainArgs) -> Result<ExitCode> {
    let kind = parse_kind(&args.classifier)?;
    let data = load_dataset(&args.data, args.label_column)?;
    let mut grid = match &args.grid {
        Some(text) => grid_from_json(text)?,
        None => Grid::new(),
    };
    pin_epochs(kind, &mut grid, args.epochs)?;
    let params = choose_params(kind, &grid, &data, args.seed)?;
    let model = kind.fit(&data, &params, args.seed)?;

    let mut model_json = model.to_json()?;
    model_json.push('\n');
    let model_path = args.out.join("model.json");
    write_atomic(&model_path, model_json.as_bytes())?;
    let mut written = vec![model_path];

    if let Some(history) = model.error_history() {
        let mut csv = String::from("epoch,errors\n");
        for (epoch, errors) in history.iter().enumerate() {
            writeln!(csv, "{},{errors}", epoch + 1)?;
        }
        let path = args.out.join("convergence.csv");
        write_atomic(&path, csv.as_bytes())?;
        written.push(path);
    }
    if let FittedModel::Smpa(smpa) = &model.model {
        let trace = smpa.boundary_trace(TRACE_POINTS)?;
        let scaled = Array2::from_shape_fn((trace.len(), 2), |(i, j)| if j == 0 { trace[i].0 } else { trace[i].1 });
        let original = model.scaler.inverse_transform(&scaled)?;
        let mut csv = String::from("x,y\n");
        for row in original.rows() {
            writeln!(csv, "{},{}", row[0], row[1])?;
        }
        let path = args.out.join("boundary.csv");
        write_atomic(&path, csv.as_bytes())?;
        written.push(path);
    }

    let train_acc = accuracy(data.labels(), &model.predict(data.features())?)?;
    println!("{kind}: trained on {} samples, training accuracy {train_acc:.4}", data.n_samples());
    if let Some(history) = model.error_history() {
        if let (Some(last), Some(best)) = (history.last(), history.iter().min()) {
            println!("epochs {}, final errors {last}, best errors {best}", history.len());
        }
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

pub struct ReproduceArgs {
    pub id: Option<String>,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub epochs: Option<usize>,
    pub classifier: Option<String>,
    pub grid: Option<String>,
    pub out: Option<PathBuf>,
}

fn select_experiments(args: &ReproduceArgs) -> Result<Vec<ExperimentConfig>> {
    match (&args.config, &args.id) {
        (Some(path), id) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let configs = parse_configs(&text).with_context(|| format!("invalid config {}", path.display()))?;
            match id {
                Some(id) => {
                    let found = configs.into_iter().find(|c| &c.id == id);
                    Ok(vec![found.ok_or_else(|| anyhow!("experiment '{id}' not found in {}", path.display()))?])
                }
                None => Ok(configs),
            }
        }
        (None, Some(id)) => {
            let preset = ExperimentConfig::preset(id)
                .ok_or_else(|| anyhow!("unknown experiment '{id}' (expected one of {})", PRESET_IDS.join(", ")))?;
            Ok(vec![preset])
        }
        (None, None) => bail!("give an experiment id or --config"),
    }
}

fn apply_overrides(config: &mut ExperimentConfig, args: &ReproduceArgs) -> Result<()> {
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(runs) = args.runs {
        config.n_runs = runs;
    }
    if let Some(epochs) = args.epochs {
        config.override_epochs(epochs);
    }
    if let Some(name) = &args.classifier {
        let kind = parse_kind(name)?;
        let reference = config.reference;
        let mut spec = config
            .classifiers
            .iter()
            .find(|c| c.kind == kind)
            .cloned()
            .unwrap_or_else(|| ClassifierSpec::with_default_grid(kind));
        if let Some(text) = &args.grid {
            spec.grid = grid_from_json(text)?;
            if let Some(epochs) = args.epochs.filter(|_| kind.default_params().contains_key("epochs")) {
                spec.grid.insert("epochs".into(), vec![Value::from(epochs)]);
            }
        }
        config.classifiers.retain(|c| c.kind == reference && c.kind != kind);
        config.classifiers.push(spec);
        config.acceptance.min_p_value.retain(|f| f.versus == kind);
    }
    Ok(())
}

pub fn reproduce(args: &ReproduceArgs) -> Result<ExitCode> {
    let mut all_passed = true;
    for mut config in select_experiments(args)? {
        apply_overrides(&mut config, args)?;
        let out_dir =
            args.out.clone().or_else(|| config.output_dir.clone()).unwrap_or_else(|| PathBuf::from("results"));
        let report = run_experiment(&config).with_context(|| format!("experiment '{}' failed", config.id))?;
        write_atomic(&out_dir.join(format!("{}.json", config.id)), report.to_json()?.as_bytes())?;
        write_atomic(&out_dir.join(format!("{}_scores.csv", config.id)), report.scores_csv().as_bytes())?;
        print!("{}", report.summary_table());
        println!("wrote {}", out_dir.join(format!("{}.json", config.id)).display());
        all_passed &= report.passed;
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn plot(input: &Path, data: Option<&Path>, title: Option<&str>, out: &Path) -> Result<ExitCode> {
    let table = svg::read_table(input)?;
    let document = match table.header.as_slice() {
        [a, b] if a == "epoch" && b == "errors" => {
            ensure!(data.is_none(), "--data only applies to boundary plots");
            svg::line_chart(&table.rows, title.unwrap_or("Convergence"), "Epoch", "Training errors")
        }
        [a, b] if a == "x" && b == "y" => {
            let points = match data {
                Some(path) => {
                    let ds = load_dataset(path, None)?;
                    ensure!(ds.n_features() >= 2, "{} needs two feature columns to scatter", path.display());
                    (0..ds.n_samples()).map(|i| (ds.row(i)[0], ds.row(i)[1], ds.labels()[i])).collect()
                }
                None => Vec::new(),
            };
            svg::boundary_chart(&table.rows, &points, title.unwrap_or("Decision boundary"), "x0", "x1")
        }
        other => bail!("{}: unrecognised header {:?} (expected epoch,errors or x,y)", input.display(), other),
    };
    write_atomic(out, document.as_bytes())?;
    println!("wrote {}", out.display());
    Ok(ExitCode::SUCCESS)
}

pub struct SbsArgs {
    pub data: PathBuf,
    pub label_column: Option<usize>,
    pub classifier: String,
    pub min_features: usize,
    pub grid: Option<String>,
    pub folds: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct SbsReport<'a> {
    classifier: ClassifierKind,
    params: Params,
    min_features: usize,
    folds: usize,
    seed: u64,
    feature_names: Vec<String>,
    best_feature_names: Vec<&'a str>,
    #[serde(flatten)]
    result: &'a movingpoints::eval::SbsResult,
}

pub fn sbs(args: &SbsArgs) -> Result<ExitCode> {
    let kind = parse_kind(&args.classifier)?;
    let data = load_dataset(&args.data, args.label_column)?;
    let grid = match &args.grid {
        Some(text) => grid_from_json(text)?,
        None => Grid::new(),
    };
    let params = choose_params(kind, &grid, &data, args.seed)?;
    let result = sequential_backward_selection(&kind, &params, &data, args.min_features, args.folds, args.seed)?;
    let feature_names: Vec<String> = match data.feature_names() {
        Some(names) => names.to_vec(),
        None => (0..data.n_features()).map(|j| format!("x{j}")).collect(),
    };
    let report = SbsReport {
        classifier: kind,
        params,
        min_features: args.min_features,
        folds: args.folds,
        seed: args.seed,
        best_feature_names: result.best_subset.iter().map(|&j| feature_names[j].as_str()).collect(),
        feature_names: feature_names.clone(),
        result: &result,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    write_atomic(&args.out, text.as_bytes())?;
    println!("all {} features: cv accuracy {:.4}", data.n_features(), result.full_score);
    for step in &result.trajectory {
        println!(
            "drop {:<16} -> {} features, cv accuracy {:.4}",
            feature_names[step.removed],
            step.subset.len(),
            step.score
        );
    }
    println!("best subset {:?} with cv accuracy {:.4}", report.best_feature_names, result.best_score);
    println!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}
