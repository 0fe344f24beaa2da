//! Batch experiment harness behind the `fraccol` binary.
//!
//! Every command is a deterministic function of its arguments and seed set:
//! runs execute in parallel over `--jobs` workers, but records are written
//! only after all runs finish, in `(graph, backend, seed)` order.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bnp::{run_bnp, BnpConfig, BnpRecord};
use crate::colgen::{run_cg, run_cg_with, Backend, CgConfig, CgStatus, Control, RunRecord, Selection};
use crate::error::{Error, Result};
use crate::graph::{families, Graph};
use crate::lp::{Column, RmpState};
use crate::mlmodel::{
    collect_training_data, default_logistic_grid, train_svm, tune_logistic, Model, SvmConfig, TrainingSet,
};

pub const SEED_SALT_VAR: &str = "FRACCOL_SEED_SALT";

#[derive(Debug, Parser)]
#[command(name = "fraccol", version, about = "Column generation and branch-and-price for graph coloring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the LP relaxation by column generation.
    Cg(RunArgs),
    /// Solve the coloring problem exactly by branch-and-price.
    Bnp(RunArgs),
    /// Record labelled pricing problems for training.
    Collect(RunArgs),
    /// Train the SVM scorer from collected data.
    Train(TrainArgs),
    /// Full-enumeration LP value and exact chromatic number of small graphs.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// 60 s per run, 5 s per pricing call.
    Ci,
    /// 1800 s per run, 30 s per pricing call.
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Timing {
    /// Record measured wall-clock times.
    Wall,
    /// Record zero times so outputs are byte-for-byte reproducible.
    Off,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// DIMACS `.col` files (or built-in names such as `myciel4`, `petersen`, `C5`).
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub graphs: Vec<String>,
    /// Inclusive seed range `A..B` or a single seed.
    #[arg(long, default_value = "1..24")]
    pub seeds: String,
    #[arg(long, value_delimiter = ',', default_value = "mlph")]
    pub backend: Vec<Backend>,
    #[arg(long, default_value = "add_partial")]
    pub selection: Selection,
    /// Column limit for `add_partial` (default `n`; root limit for `bnp`).
    #[arg(long)]
    pub theta: Option<usize>,
    /// MLPH sample count (default `50 n`, `10 n` for `bnp`).
    #[arg(long)]
    pub lambda: Option<usize>,
    /// Overall budget per run in seconds (overrides the profile).
    #[arg(long)]
    pub budget_total: Option<f64>,
    /// Budget per pricing call in seconds (overrides the profile).
    #[arg(long)]
    pub budget_pricing: Option<f64>,
    /// Model JSON; defaults to the published coefficients.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value = "ci")]
    pub profile: Profile,
    #[arg(long, value_enum, default_value = "wall")]
    pub timing: Timing,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training CSV written by `collect`.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tune the logistic parameters on these graphs (grid search).
    #[arg(long, value_delimiter = ',')]
    pub graphs: Vec<String>,
    /// Seeds used for tuning.
    #[arg(long, default_value = "1..3")]
    pub seeds: String,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub graphs: Vec<String>,
    /// Give up on the LP when a graph has more maximal independent sets.
    #[arg(long, default_value_t = 200_000)]
    pub max_sets: usize,
    /// Largest graph handed to the exact coloring search.
    #[arg(long, default_value_t = 30)]
    pub max_color_n: usize,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

/// Parses `A..B` (inclusive) or `A`.
pub fn parse_seed_range(text: &str) -> Result<RangeInclusive<u64>> {
    let bad = || Error::Param(format!("bad seed range `{text}` (expected A..B)"));
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let a = text.trim().parse().map_err(|_| bad())?;
            (a, a)
        }
    };
    if b < a {
        return Err(Error::Param(format!("empty seed range `{text}`")));
    }
    Ok(a..=b)
}

/// Seed offset from the environment (default 0).
pub fn seed_salt() -> Result<i64> {
    match std::env::var(SEED_SALT_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Param(format!("{SEED_SALT_VAR} must be an integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}

fn salted_seeds(text: &str) -> Result<Vec<u64>> {
    let salt = seed_salt()?;
    Ok(parse_seed_range(text)?.map(|s| s.wrapping_add_signed(salt)).collect())
}

/// Short name used in records and file names: the file stem.
pub fn graph_name(arg: &str) -> String {
    Path::new(arg).file_stem().map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned())
}

/// Reads a DIMACS file, falling back to a built-in family name.
pub fn load_graph(arg: &str) -> Result<Graph> {
    let path = Path::new(arg);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|source| Error::File { path: arg.to_string(), source })?;
        return Graph::parse_dimacs(&text);
    }
    families::by_name(arg).ok_or_else(|| {
        Error::File { path: arg.to_string(), source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file") }
    })
}

fn budgets(args: &RunArgs) -> (Duration, Duration) {
    let (total, pricing) = match args.profile {
        Profile::Ci => (60.0, 5.0),
        Profile::Paper => (1800.0, 30.0),
    };
    (
        Duration::from_secs_f64(args.budget_total.unwrap_or(total)),
        Duration::from_secs_f64(args.budget_pricing.unwrap_or(pricing)),
    )
}

fn load_model(path: &Option<PathBuf>) -> Result<Model> {
    path.as_deref().map_or_else(|| Ok(Model::default()), Model::load)
}

fn cg_config(args: &RunArgs, backend: Backend, seed: u64, model: &Model) -> CgConfig {
    let (total, pricing) = budgets(args);
    let mut cfg = CgConfig::new(backend, args.selection, seed).with_budgets(total, pricing);
    cfg.theta = args.theta;
    cfg.lambda = args.lambda;
    cfg.model = model.clone();
    cfg
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Param(format!("cannot start {jobs} workers: {e}")))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    fs::write(path, text).map_err(|source| Error::File { path: path.display().to_string(), source })
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|source| Error::File { path: path.display().to_string(), source })
}

#[derive(Debug, Serialize)]
struct ErrorRecord<'a> {
    graph: &'a str,
    error: String,
}

/// Loaded graphs in argument order; unreadable ones become error records.
fn load_all(names: &[String], dir: &Path) -> Result<Vec<(String, Graph)>> {
    let mut out = Vec::new();
    for arg in names {
        let name = graph_name(arg);
        match load_graph(arg) {
            Ok(g) => out.push((name, g)),
            Err(e) => {
                log::error!("{arg}: {e}");
                write_json(&dir.join(format!("{name}-error.json")), &ErrorRecord { graph: arg, error: e.to_string() })?;
            }
        }
    }
    Ok(out)
}

fn geomean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v.ln(), c + 1));
    if count == 0 {
        f64::NAN
    } else {
        (sum / count as f64).exp()
    }
}

/// Times below this are clamped before averaging.
pub const MIN_TIME_S: f64 = 0.01;

#[derive(Debug, Serialize, PartialEq)]
pub struct AggregateRow {
    pub graph: String,
    pub backend: Backend,
    pub solved_count: usize,
    pub geomean_objective: f64,
    pub geomean_time_s: f64,
}

/// One row per `(graph, backend)` in first-seen order.
pub fn aggregate(records: &[RunRecord]) -> Vec<AggregateRow> {
    let mut keys: Vec<(String, Backend)> = Vec::new();
    for r in records {
        let key = (r.graph.clone(), r.backend);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(graph, backend)| {
            let rs: Vec<&RunRecord> = records.iter().filter(|r| r.graph == graph && r.backend == backend).collect();
            AggregateRow {
                solved_count: rs.iter().filter(|r| r.status == CgStatus::Optimal).count(),
                geomean_objective: geomean(rs.iter().map(|r| r.objective)),
                geomean_time_s: geomean(rs.iter().map(|r| r.wall_time_s.max(MIN_TIME_S))),
                graph,
                backend,
            }
        })
        .collect()
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<()> {
    let file = fs::File::create(path).map_err(|source| Error::File { path: path.display().to_string(), source })?;
    let mut w = csv::WriterBuilder::new().has_headers(!rows.is_empty()).from_writer(file);
    if rows.is_empty() {
        w.write_record(header)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn tasks(graphs: &[(String, Graph)], backends: &[Backend], seeds: &[u64]) -> Vec<(usize, Backend, u64)> {
    let mut out = Vec::new();
    for gi in 0..graphs.len() {
        for &b in backends {
            for &s in seeds {
                out.push((gi, b, s));
            }
        }
    }
    out
}

pub fn cmd_cg(args: &RunArgs) -> Result<Vec<RunRecord>> {
    let seeds = salted_seeds(&args.seeds)?;
    let model = load_model(&args.model)?;
    let dir = args.out.join("cg");
    create_dir(&dir)?;
    let graphs = load_all(&args.graphs, &dir)?;
    let work = tasks(&graphs, &args.backend, &seeds);
    let results: Vec<Result<RunRecord>> = pool(args.jobs)?.install(|| {
        work.par_iter()
            .map(|&(gi, backend, seed)| {
                let (name, g) = &graphs[gi];
                let cfg = cg_config(args, backend, seed, &model);
                let (_, stats) = run_cg(g, &cfg)?;
                let mut rec = RunRecord::new(name, &cfg, &stats);
                if args.timing == Timing::Off {
                    rec.wall_time_s = 0.0;
                }
                Ok(rec)
            })
            .collect()
    });
    let mut records = Vec::new();
    for (res, &(gi, backend, seed)) in results.into_iter().zip(&work) {
        let name = &graphs[gi].0;
        match res {
            Ok(rec) => {
                write_json(&dir.join(format!("{name}-{backend}-{seed}.json")), &rec)?;
                records.push(rec);
            }
            Err(e) => {
                log::error!("{name} {backend} seed {seed}: {e}");
                write_json(
                    &dir.join(format!("{name}-{backend}-{seed}-error.json")),
                    &ErrorRecord { graph: name, error: e.to_string() },
                )?;
            }
        }
    }
    let header = ["graph", "backend", "solved_count", "geomean_objective", "geomean_time_s"];
    write_csv(&args.out.join("cg_summary.csv"), &aggregate(&records), &header)?;
    Ok(records)
}

#[derive(Debug, Serialize, PartialEq)]
pub struct GapPoint {
    pub threshold: u32,
    pub runs_within: usize,
}

/// Runs whose gap is at most each threshold `0, 1, ..., 100` (percent).
/// Runs without a solved root are left out.
pub fn gap_curve(records: &[BnpRecord]) -> Vec<GapPoint> {
    (0..=100)
        .map(|t| GapPoint {
            threshold: t,
            runs_within: records.iter().filter_map(|r| r.gap_pct).filter(|&g| g <= t as f64 + 1e-9).count(),
        })
        .collect()
}

pub fn cmd_bnp(args: &RunArgs) -> Result<Vec<BnpRecord>> {
    let seeds = salted_seeds(&args.seeds)?;
    let model = load_model(&args.model)?;
    let dir = args.out.join("bnp");
    create_dir(&dir)?;
    let graphs = load_all(&args.graphs, &dir)?;
    let work = tasks(&graphs, &args.backend, &seeds);
    let results: Vec<Result<BnpRecord>> = pool(args.jobs)?.install(|| {
        work.par_iter()
            .map(|&(gi, backend, seed)| {
                let (name, g) = &graphs[gi];
                let cg = cg_config(args, backend, seed, &model);
                let mut cfg = BnpConfig::new(cg);
                cfg.theta_root = args.theta;
                cfg.theta_child = args.theta;
                cfg.lambda = args.lambda;
                let stats = run_bnp(g, &cfg)?;
                let mut rec = BnpRecord::new(name, seed, &stats);
                if args.timing == Timing::Off {
                    rec.wall_time_s = 0.0;
                }
                Ok(rec)
            })
            .collect()
    });
    let mut records = Vec::new();
    for (res, &(gi, backend, seed)) in results.into_iter().zip(&work) {
        let name = &graphs[gi].0;
        match res {
            Ok(rec) => {
                write_json(&dir.join(format!("{name}-{backend}-{seed}.json")), &rec)?;
                records.push((backend, rec));
            }
            Err(e) => {
                log::error!("{name} {backend} seed {seed}: {e}");
                write_json(
                    &dir.join(format!("{name}-{backend}-{seed}-error.json")),
                    &ErrorRecord { graph: name, error: e.to_string() },
                )?;
            }
        }
    }
    for &backend in &args.backend {
        let mine: Vec<BnpRecord> = records.iter().filter(|(b, _)| *b == backend).map(|(_, r)| r.clone()).collect();
        write_csv(&args.out.join(format!("gap_curve_{backend}.csv")), &gap_curve(&mine), &["threshold", "runs_within"])?;
    }
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

pub fn cmd_collect(args: &RunArgs) -> Result<TrainingSet> {
    let seeds = salted_seeds(&args.seeds)?;
    let model = load_model(&args.model)?;
    create_dir(&args.out)?;
    let graphs = load_all(&args.graphs, &args.out)?;
    let work = tasks(&graphs, &args.backend, &seeds);
    let parts: Vec<Result<TrainingSet>> = pool(args.jobs)?.install(|| {
        work.par_iter()
            .map(|&(gi, backend, seed)| {
                let (name, g) = &graphs[gi];
                collect_training_data(g, name, &cg_config(args, backend, seed, &model), 5, 25)
            })
            .collect()
    });
    let mut data = TrainingSet::default();
    for (part, &(gi, _, seed)) in parts.into_iter().zip(&work) {
        match part {
            Ok(p) => data.extend(p),
            Err(e) => log::error!("{} seed {seed}: {e}", graphs[gi].0),
        }
    }
    let path = args.out.join("training.csv");
    let file = fs::File::create(&path).map_err(|source| Error::File { path: path.display().to_string(), source })?;
    data.write_csv(file)?;
    Ok(data)
}

#[derive(Debug, Serialize)]
struct TrainOutput<'a> {
    report: &'a crate::mlmodel::TrainReport,
    tuning_objective: Option<f64>,
}

pub fn cmd_train(args: &TrainArgs) -> Result<Model> {
    let file = fs::File::open(&args.data).map_err(|source| Error::File { path: args.data.display().to_string(), source })?;
    let data = TrainingSet::read_csv(file)?;
    let cfg = SvmConfig { c: args.c, seed: args.seed, ..SvmConfig::default() };
    let (svm, report) = train_svm(&data, &cfg)?;
    let mut model = Model { svm, ..Model::default() };
    let mut tuning_objective = None;
    if !args.graphs.is_empty() {
        let graphs: Vec<Graph> = args.graphs.iter().map(|s| load_graph(s)).collect::<Result<_>>()?;
        let seeds = salted_seeds(&args.seeds)?;
        let svm = model.svm.clone();
        let (params, value) = tune_logistic(&default_logistic_grid(), |p| {
            let m = Model { svm: svm.clone(), logistic: *p };
            mean_first_best_rc(&graphs, &seeds, &m)
        })?;
        model.logistic = params;
        tuning_objective = Some(value);
    }
    create_dir(&args.out)?;
    model.save(&args.out.join("model.json"))?;
    write_json(&args.out.join("train_report.json"), &TrainOutput { report: &report, tuning_objective })?;
    Ok(model)
}

/// Mean best reduced cost found by MLPH in the first CG iteration.
pub fn mean_first_best_rc(graphs: &[Graph], seeds: &[u64], model: &Model) -> f64 {
    let mut total = 0.0;
    let mut count = 0;
    for g in graphs {
        for &seed in seeds {
            let mut cfg = CgConfig::new(Backend::Mlph, Selection::AddPartial, seed);
            cfg.model = model.clone();
            cfg.stall_window = None;
            let mut first = None;
            let result = run_cg_with(g, &cfg, None, &mut |view| {
                first = Some(view.pricing.best_reduced_cost);
                Control::Stop
            });
            if let (Ok(_), Some(v)) = (result, first) {
                total += v;
                count += 1;
            }
        }
    }
    if count == 0 {
        f64::INFINITY
    } else {
        total / count as f64
    }
}

#[derive(Debug, Serialize, PartialEq)]
pub struct OracleRecord {
    pub graph: String,
    pub n: usize,
    pub edges: usize,
    pub density: f64,
    pub mis_count: Option<usize>,
    pub lp_objective: Option<f64>,
    pub chromatic_number: Option<usize>,
}

/// LP over every maximal independent set, when there are at most `max_sets`.
pub fn full_lp(g: &Graph, max_sets: usize) -> Result<Option<(usize, f64)>> {
    let Some(sets) = g.maximal_independent_sets(max_sets) else { return Ok(None) };
    let count = sets.len();
    let mut rmp = RmpState::build(g, sets.into_iter().map(Column::new).collect())?;
    rmp.solve()?;
    Ok(Some((count, rmp.objective())))
}

/// Exact chromatic number by DSATUR-ordered backtracking.
pub fn chromatic_number(g: &Graph) -> usize {
    fn search(g: &Graph, color: &mut [usize], colored: usize, used: usize, best: &mut usize) {
        if used >= *best {
            return;
        }
        let n = g.n();
        if colored == n {
            *best = used;
            return;
        }
        let sat = |v: usize, color: &[usize]| {
            let mut seen: Vec<usize> = g.neighbors(v).iter().map(|&u| color[u]).filter(|&c| c != usize::MAX).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        };
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by(|&a, &b| sat(a, color).cmp(&sat(b, color)).then(g.degree(a).cmp(&g.degree(b))).then(b.cmp(&a)))
            .unwrap();
        for c in 0..=used {
            if c == used && used + 1 >= *best {
                break;
            }
            if g.neighbors(v).iter().all(|&u| color[u] != c) {
                color[v] = c;
                search(g, color, colored + 1, used.max(c + 1), best);
                color[v] = usize::MAX;
            }
        }
    }
    let mut best = crate::bnp::color_count(&crate::bnp::primal_heuristic(g));
    let mut color = vec![usize::MAX; g.n()];
    search(g, &mut color, 0, 0, &mut best);
    best
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<Vec<OracleRecord>> {
    let dir = args.out.join("oracle");
    create_dir(&dir)?;
    let graphs = load_all(&args.graphs, &dir)?;
    let mut out = Vec::new();
    for (name, g) in graphs {
        let lp = full_lp(&g, args.max_sets)?;
        let rec = OracleRecord {
            graph: name.clone(),
            n: g.n(),
            edges: g.edge_count(),
            density: g.density(),
            mis_count: lp.map(|(c, _)| c),
            lp_objective: lp.map(|(_, z)| z),
            chromatic_number: (g.n() <= args.max_color_n).then(|| chromatic_number(&g)),
        };
        write_json(&dir.join(format!("{name}.json")), &rec)?;
        out.push(rec);
    }
    Ok(out)
}

/// Entry point of the binary.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cg(args) => {
            let records = cmd_cg(&args)?;
            for row in aggregate(&records) {
                println!(
                    "{} {}: solved {} geomean objective {:.4} time {:.2}s",
                    row.graph, row.backend, row.solved_count, row.geomean_objective, row.geomean_time_s
                );
            }
        }
        Command::Bnp(args) => {
            for r in cmd_bnp(&args)? {
                let gap = r.gap_pct.map_or_else(|| "n/a".to_string(), |g| format!("{g:.2}%"));
                println!("{} seed {}: {:?} chi <= {} lb {} gap {}", r.graph, r.seed, r.status, r.chi_upper, r.global_lb, gap);
            }
        }
        Command::Collect(args) => {
            let data = cmd_collect(&args)?;
            println!("{} rows written to {}", data.len(), args.out.join("training.csv").display());
        }
        Command::Train(args) => {
            let model = cmd_train(&args)?;
            println!("weights {:?} intercept {}", model.svm.weights, model.svm.intercept);
        }
        Command::Oracle(args) => {
            for r in cmd_oracle(&args)? {
                println!("{}: lp {:?} chi {:?}", r.graph, r.lp_objective, r.chromatic_number);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnp::BnpStatus;

    #[test]
    fn seed_ranges() {
        assert_eq!(parse_seed_range("1..24").unwrap(), 1..=24);
        assert_eq!(parse_seed_range("7").unwrap(), 7..=7);
        assert!(parse_seed_range("5..4").is_err());
        assert!(parse_seed_range("a..b").is_err());
    }

    #[test]
    fn geomean_clamps_time() {
        let rec = |t: f64, status| RunRecord {
            graph: "g".into(),
            seed: 1,
            backend: Backend::Mlph,
            selection: Selection::AddPartial,
            status,
            objective: 4.0,
            iterations: 1,
            wall_time_s: t,
            nrc_counts: vec![],
            objective_trace: vec![],
        };
        let rows = aggregate(&[rec(0.0, CgStatus::Optimal), rec(1.0, CgStatus::TimeLimit)]);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].solved_count, 1);
        assert!((rows[0].geomean_time_s - 0.1).abs() < 1e-12);
        assert!((rows[0].geomean_objective - 4.0).abs() < 1e-12);
    }

    #[test]
    fn gap_curve_counts() {
        let rec = |gap| BnpRecord {
            graph: "g".into(),
            seed: 1,
            status: BnpStatus::GapReported,
            chi_upper: 4,
            global_lb: 3.0,
            gap_pct: gap,
            nodes: 1,
            wall_time_s: 0.0,
        };
        let curve = gap_curve(&[rec(Some(0.0)), rec(Some(25.0)), rec(None)]);
        assert_eq!(curve[0].runs_within, 1);
        assert_eq!(curve[25].runs_within, 2);
        assert_eq!(curve[100].runs_within, 2);
    }

    #[test]
    fn exact_chromatic_small() {
        assert_eq!(chromatic_number(&families::petersen()), 3);
        assert_eq!(chromatic_number(&families::myciel(3)), 4);
        assert_eq!(chromatic_number(&families::myciel(4)), 5);
        let (count, z) = full_lp(&families::cycle(5), 100).unwrap().unwrap();
        assert_eq!(count, 5);
        assert!((z - 2.5).abs() < 1e-9);
    }
}
