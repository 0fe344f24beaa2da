//! The column generation loop: solve the master, price, select, repeat.
//!
//! Whenever the configured backend finds no improving column the exact
//! solver is called; a proven minimum reduced cost `>= -1e-6` is the only way
//! a run ends with [`CgStatus::Optimal`].

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::lp::{Column, RmpState, ZERO_TOL};
use crate::mlmodel::Model;
use crate::pricing::{
    aco_price, exact_price, greedy_price, mlph_price, stream_rng, AcoConfig, PricingProblem, PricingResult,
    DEFAULT_NRC_THRESHOLD,
};

/// Reduced-cost level at which the master counts as optimal.
pub const OPTIMALITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Mlph,
    Greedy,
    Aco,
    Exact,
}

impl Backend {
    pub const ALL: [Backend; 4] = [Backend::Mlph, Backend::Greedy, Backend::Aco, Backend::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Mlph => "mlph",
            Backend::Greedy => "greedy",
            Backend::Aco => "aco",
            Backend::Exact => "exact",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Param(format!("unknown backend `{s}` (mlph, greedy, aco, exact)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    AddAll,
    AddPartial,
    ReplaceExisting,
}

impl Selection {
    pub const ALL: [Selection; 3] = [Selection::AddAll, Selection::AddPartial, Selection::ReplaceExisting];

    pub fn name(self) -> &'static str {
        match self {
            Selection::AddAll => "add_all",
            Selection::AddPartial => "add_partial",
            Selection::ReplaceExisting => "replace_existing",
        }
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Selection::ALL.into_iter().find(|b| b.name() == s).ok_or_else(|| {
            Error::Param(format!("unknown selection `{s}` (add_all, add_partial, replace_existing)"))
        })
    }
}

#[derive(Clone, Debug)]
pub struct CgConfig {
    pub backend: Backend,
    pub selection: Selection,
    /// Columns added per iteration by `add_partial` (default `n`).
    pub theta: Option<usize>,
    /// Sets sampled per MLPH call (default `50 n`).
    pub lambda: Option<usize>,
    /// Random columns in the starting pool (default `10 n`).
    pub initial_columns: Option<usize>,
    pub cutoff_total: Duration,
    pub cutoff_pricing: Duration,
    pub seed: u64,
    /// Iterations without objective progress before an exact call is forced.
    pub stall_window: Option<usize>,
    pub max_iterations: Option<usize>,
    pub model: Model,
}

impl CgConfig {
    pub fn new(backend: Backend, selection: Selection, seed: u64) -> Self {
        CgConfig {
            backend,
            selection,
            theta: None,
            lambda: None,
            initial_columns: None,
            cutoff_total: Duration::from_secs(1800),
            cutoff_pricing: Duration::from_secs(30),
            seed,
            stall_window: Some(50),
            max_iterations: None,
            model: Model::default(),
        }
    }

    pub fn with_budgets(mut self, total: Duration, pricing: Duration) -> Self {
        self.cutoff_total = total;
        self.cutoff_pricing = pricing;
        self
    }

    pub fn theta_for(&self, n: usize) -> usize {
        self.theta.unwrap_or(n).max(1)
    }

    pub fn lambda_for(&self, n: usize) -> usize {
        self.lambda.unwrap_or(50 * n).max(1)
    }

    pub fn initial_for(&self, n: usize) -> usize {
        self.initial_columns.unwrap_or(10 * n).max(1)
    }

    /// Entry capacity of `replace_existing`: initial pool size over `n`.
    pub fn replace_capacity(&self, n: usize) -> usize {
        self.initial_for(n) / n.max(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CgStatus {
    Optimal,
    TimeLimit,
    Stalled,
    IterationLimit,
    /// Ended by the observer (e.g. a bound made further pricing pointless).
    Stopped,
}

impl CgStatus {
    pub fn name(self) -> &'static str {
        match self {
            CgStatus::Optimal => "optimal",
            CgStatus::TimeLimit => "time_limit",
            CgStatus::Stalled => "stalled",
            CgStatus::IterationLimit => "iteration_limit",
            CgStatus::Stopped => "stopped",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CgStats {
    pub iterations: usize,
    pub objective_trace: Vec<f64>,
    pub nrc_counts: Vec<usize>,
    pub best_rc_trace: Vec<f64>,
    /// Pool size after each master solve.
    pub pool_sizes: Vec<usize>,
    /// Columns with a positive value after each master solve.
    pub support_sizes: Vec<usize>,
    pub exact_calls: usize,
    /// Proven minimum reduced cost of the most recent exact call.
    pub last_proven_min: Option<f64>,
    pub status: CgStatus,
    pub wall_time: Duration,
}

impl CgStats {
    pub fn objective(&self) -> f64 {
        self.objective_trace.last().copied().unwrap_or(f64::INFINITY)
    }
}

/// What the observer sees once per iteration, after pricing.
pub struct IterationView<'a> {
    pub iteration: usize,
    pub graph: &'a Graph,
    pub rmp: &'a RmpState,
    pub pricing: &'a PricingResult,
    /// Set when this iteration's minimum reduced cost is proven.
    pub proven_min: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// `count` uniform random MISs, deduplicated, plus a greedy MIS through every
/// vertex the samples missed.
pub fn initial_columns<R: Rng + ?Sized>(g: &Graph, count: usize, rng: &mut R) -> Vec<Column> {
    let sets = g.sample_uniform_mis(count, rng);
    let mut seen = HashSet::new();
    let mut covered = vec![false; g.n()];
    let mut out = Vec::new();
    for s in sets {
        if seen.insert(s.clone()) {
            s.iter().for_each(|v| covered[v] = true);
            out.push(Column::new(s));
        }
    }
    repair_coverage(g, &mut out, &mut seen, &mut covered);
    out
}

fn repair_coverage(g: &Graph, out: &mut Vec<Column>, seen: &mut HashSet<VertexSet>, covered: &mut [bool]) {
    for v in 0..g.n() {
        if !covered[v] {
            let s = g.extend_greedy(&VertexSet::new(vec![v]));
            s.iter().for_each(|u| covered[u] = true);
            if seen.insert(s.clone()) {
                out.push(Column::new(s));
            }
        }
    }
}

/// Adds greedy MISs for any vertex the given columns leave uncovered.
pub fn with_coverage(g: &Graph, columns: Vec<Column>) -> Vec<Column> {
    let mut seen = HashSet::new();
    let mut covered = vec![false; g.n()];
    let mut out = Vec::new();
    for c in columns {
        if seen.insert(c.set.clone()) {
            c.set.iter().for_each(|v| covered[v] = true);
            out.push(c);
        }
    }
    repair_coverage(g, &mut out, &mut seen, &mut covered);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum PoolUpdate {
    Add(Vec<Column>),
    Replace { keep: Vec<usize>, new: Vec<Column> },
}

impl PoolUpdate {
    pub fn apply(self, rmp: &mut RmpState) -> Result<()> {
        match self {
            PoolUpdate::Add(cols) => {
                rmp.add_columns(cols);
                Ok(())
            }
            PoolUpdate::Replace { keep, new } => rmp.replace_columns(&keep, new),
        }
    }
}

/// Turns a pricing result into a pool update. `found.columns` must be sorted
/// by reduced cost.
pub fn select_columns(
    strategy: Selection,
    current: &RmpState,
    found: &PricingResult,
    theta: usize,
    k: usize,
) -> Result<PoolUpdate> {
    let fresh = found.columns.iter().filter(|c| !current.contains(&c.set)).cloned();
    match strategy {
        Selection::AddAll => Ok(PoolUpdate::Add(fresh.collect())),
        Selection::AddPartial => {
            if theta < 1 {
                return Err(Error::Param("add_partial needs a column limit of at least 1".into()));
            }
            Ok(PoolUpdate::Add(fresh.take(theta).collect()))
        }
        Selection::ReplaceExisting => {
            if k < 1 {
                return Err(Error::Param("replace_existing needs an entry capacity of at least 1".into()));
            }
            Ok(replace_existing(current, fresh.collect(), k))
        }
    }
}

fn replace_existing(current: &RmpState, fresh: Vec<Column>, k: usize) -> PoolUpdate {
    let n = current.n();
    let mut load = vec![0usize; n];
    let mut keep = Vec::new();
    // (reduced cost, source, index): pooled columns before new ones on ties
    let mut scan: Vec<(f64, u8, usize)> = Vec::new();
    for (j, (c, &x)) in current.columns().iter().zip(current.primal()).enumerate() {
        if x > ZERO_TOL {
            keep.push(c.id.expect("pooled"));
            c.set.iter().for_each(|v| load[v] += 1);
        } else {
            scan.push((c.reduced_cost, 0, j));
        }
    }
    scan.extend(fresh.iter().enumerate().map(|(j, c)| (c.reduced_cost, 1, j)));
    scan.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut new = Vec::new();
    for (_, source, j) in scan {
        let set = if source == 0 { &current.columns()[j].set } else { &fresh[j].set };
        if let Some(v) = set.iter().find(|&v| load[v] < k) {
            load[v] += 1;
            if source == 0 {
                keep.push(current.columns()[j].id.expect("pooled"));
            } else {
                new.push(fresh[j].clone());
            }
        }
    }
    keep.sort_unstable();
    PoolUpdate::Replace { keep, new }
}

fn merge(a: PricingResult, b: PricingResult) -> PricingResult {
    let mut seen: BTreeSet<VertexSet> = BTreeSet::new();
    let mut columns: Vec<Column> = a.columns.into_iter().chain(b.columns).filter(|c| seen.insert(c.set.clone())).collect();
    columns.sort_by(|x, y| x.reduced_cost.total_cmp(&y.reduced_cost).then_with(|| x.set.cmp(&y.set)));
    PricingResult {
        columns,
        best_reduced_cost: a.best_reduced_cost.min(b.best_reduced_cost),
        proven_optimal: a.proven_optimal || b.proven_optimal,
        generated_count: a.generated_count + b.generated_count,
        elapsed: a.elapsed + b.elapsed,
    }
}

/// Runs column generation from a fresh random pool.
pub fn run_cg(g: &Graph, cfg: &CgConfig) -> Result<(RmpState, CgStats)> {
    run_cg_with(g, cfg, None, &mut |_| Control::Continue)
}

/// Column generation from `initial` (or a fresh random pool), calling
/// `observer` after every pricing round.
pub fn run_cg_with(
    g: &Graph,
    cfg: &CgConfig,
    initial: Option<Vec<Column>>,
    observer: &mut dyn FnMut(&IterationView) -> Control,
) -> Result<(RmpState, CgStats)> {
    let started = Instant::now();
    let n = g.n();
    let theta = cfg.theta_for(n);
    let lambda = cfg.lambda_for(n);
    let k = cfg.replace_capacity(n);
    if cfg.selection == Selection::ReplaceExisting && k < 1 {
        return Err(Error::Param("replace_existing needs at least n initial columns".into()));
    }
    let columns = match initial {
        Some(cols) => with_coverage(g, cols),
        None => initial_columns(g, cfg.initial_for(n), &mut stream_rng(cfg.seed, 0)),
    };
    let mut rmp = RmpState::build(g, columns)?;
    let mut seeds = stream_rng(cfg.seed, 1);

    let mut stats = CgStats {
        iterations: 0,
        objective_trace: Vec::new(),
        nrc_counts: Vec::new(),
        best_rc_trace: Vec::new(),
        pool_sizes: Vec::new(),
        support_sizes: Vec::new(),
        exact_calls: 0,
        last_proven_min: None,
        status: CgStatus::TimeLimit,
        wall_time: Duration::ZERO,
    };
    let mut flat_run = 0usize;

    loop {
        match rmp.solve() {
            Ok(()) => {}
            Err(Error::SolverStall { iterations, objective }) => {
                log::warn!("master simplex stalled after {iterations} pivots at {objective}");
                stats.status = CgStatus::Stalled;
                break;
            }
            Err(e) => return Err(e),
        }
        let objective = rmp.objective();
        if let Some(&prev) = stats.objective_trace.last() {
            flat_run = if prev - objective < 1e-9 { flat_run + 1 } else { 0 };
        }
        stats.objective_trace.push(objective);
        stats.pool_sizes.push(rmp.len());
        stats.support_sizes.push(rmp.support().len());

        let elapsed = started.elapsed();
        if elapsed >= cfg.cutoff_total {
            stats.status = CgStatus::TimeLimit;
            break;
        }
        if cfg.max_iterations.is_some_and(|m| stats.iterations >= m) {
            stats.status = CgStatus::IterationLimit;
            break;
        }
        let budget = cfg.cutoff_pricing.min(cfg.cutoff_total - elapsed);
        let deadline = Instant::now() + budget;
        let seed: u64 = seeds.gen();
        let problem = PricingProblem { graph: g, duals: rmp.duals(), nrc_threshold: DEFAULT_NRC_THRESHOLD };

        let mut result = match cfg.backend {
            Backend::Mlph => mlph_price(&problem, &cfg.model, lambda, seed, Some(deadline)),
            Backend::Greedy => greedy_price(&problem),
            Backend::Aco => aco_price(&problem, &AcoConfig::for_graph(n, seed), Some(deadline)),
            Backend::Exact => {
                stats.exact_calls += 1;
                exact_price(&problem, Some(budget))
            }
        };
        let forced = cfg.stall_window.is_some_and(|w| flat_run >= w);
        if cfg.backend != Backend::Exact && (result.columns.is_empty() || forced) {
            if forced {
                log::debug!("no progress for {flat_run} iterations, calling the exact solver");
                flat_run = 0;
            }
            let left = cfg.cutoff_total.saturating_sub(started.elapsed()).min(cfg.cutoff_pricing);
            let exact = exact_price(&problem, Some(left));
            stats.exact_calls += 1;
            result = merge(result, exact);
        }
        let proven_min = result.proven_optimal.then_some(result.best_reduced_cost);
        if proven_min.is_some() {
            stats.last_proven_min = proven_min;
        }
        stats.nrc_counts.push(result.columns.len());
        stats.best_rc_trace.push(result.best_reduced_cost);

        let view = IterationView { iteration: stats.iterations, graph: g, rmp: &rmp, pricing: &result, proven_min };
        let control = observer(&view);
        if proven_min.is_some_and(|m| m >= -OPTIMALITY_TOL) {
            stats.status = CgStatus::Optimal;
            break;
        }
        if control == Control::Stop {
            stats.status = CgStatus::Stopped;
            break;
        }
        if result.columns.is_empty() {
            // unproven and nothing to add: the exact call ran out of time
            stats.status = CgStatus::TimeLimit;
            break;
        }
        select_columns(cfg.selection, &rmp, &result, theta, k)?.apply(&mut rmp)?;
        stats.iterations += 1;
    }
    stats.wall_time = started.elapsed();
    Ok((rmp, stats))
}

/// Per-run JSON record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub graph: String,
    pub seed: u64,
    pub backend: Backend,
    pub selection: Selection,
    pub status: CgStatus,
    pub objective: f64,
    pub iterations: usize,
    pub wall_time_s: f64,
    pub nrc_counts: Vec<usize>,
    pub objective_trace: Vec<f64>,
}

impl RunRecord {
    pub fn new(graph: &str, cfg: &CgConfig, stats: &CgStats) -> Self {
        RunRecord {
            graph: graph.to_string(),
            seed: cfg.seed,
            backend: cfg.backend,
            selection: cfg.selection,
            status: stats.status,
            objective: stats.objective(),
            iterations: stats.iterations,
            wall_time_s: stats.wall_time.as_secs_f64(),
            nrc_counts: stats.nrc_counts.clone(),
            objective_trace: stats.objective_trace.clone(),
        }
    }
}
