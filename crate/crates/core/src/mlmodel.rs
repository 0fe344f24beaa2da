//! Vertex features, the linear SVM scorer and its logistic rescaling.
//!
//! Five features describe a vertex for a given dual vector, in this order:
//!
//! | index | name          | raw value                                        |
//! |-------|---------------|--------------------------------------------------|
//! | 0     | `ranking`     | `sum_k s_ik / r_k` over a pool of sampled MISs   |
//! | 1     | `correlation` | Pearson correlation of `s_ik` with `o_k`         |
//! | 2     | `weight`      | `pi_i`                                           |
//! | 3     | `degree`      | `deg(i)`                                         |
//! | 4     | `upper_bound` | `pi_i + sum of pi_j over non-neighbors j != i`   |
//!
//! where `o_k = 1 - sum_{i in s_k} pi_i` and rank 1 is the smallest `o_k`.
//! Each feature is min-max normalized over the vertices of the instance.

use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::lp::DualSolution;

pub const FEATURE_ORDER: [&str; 5] = ["ranking", "correlation", "weight", "degree", "upper_bound"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VertexFeatures {
    pub ranking: f64,
    pub correlation: f64,
    pub weight: f64,
    pub degree: f64,
    pub upper_bound: f64,
}

impl VertexFeatures {
    pub fn to_array(self) -> [f64; 5] {
        [self.ranking, self.correlation, self.weight, self.degree, self.upper_bound]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        VertexFeatures { ranking: a[0], correlation: a[1], weight: a[2], degree: a[3], upper_bound: a[4] }
    }
}

/// `K` sampled maximal independent sets with their objectives and ranks.
#[derive(Clone, Debug)]
pub struct SamplePool {
    n: usize,
    sets: Vec<VertexSet>,
    objectives: Vec<f64>,
    ranks: Vec<usize>,
    vertex_frequency: Vec<f64>,
    mean_objective: f64,
}

impl SamplePool {
    /// Draws `k` uniform MISs of `g` and scores them against `duals`.
    pub fn build<R: Rng + ?Sized>(g: &Graph, duals: &DualSolution, k: usize, rng: &mut R) -> Result<Self> {
        if k < 2 {
            return Err(Error::Param(format!("sample pool needs at least 2 sets, got {k}")));
        }
        Self::from_sets(g.n(), g.sample_uniform_mis(k, rng), duals)
    }

    pub fn from_sets(n: usize, sets: Vec<VertexSet>, duals: &DualSolution) -> Result<Self> {
        let k = sets.len();
        if k < 2 {
            return Err(Error::Param(format!("sample pool needs at least 2 sets, got {k}")));
        }
        let objectives: Vec<f64> = sets.iter().map(|s| 1.0 - s.weight(duals.pi())).collect();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| objectives[a].total_cmp(&objectives[b]).then(a.cmp(&b)));
        let mut ranks = vec![0; k];
        for (pos, &idx) in order.iter().enumerate() {
            ranks[idx] = pos + 1;
        }
        let mut counts = vec![0usize; n];
        for s in &sets {
            for v in s.iter() {
                counts[v] += 1;
            }
        }
        let vertex_frequency = counts.iter().map(|&c| c as f64 / k as f64).collect();
        let mean_objective = objectives.iter().sum::<f64>() / k as f64;
        Ok(SamplePool { n, sets, objectives, ranks, vertex_frequency, mean_objective })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn objectives(&self) -> &[f64] {
        &self.objectives
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn presence(&self, i: usize, k: usize) -> bool {
        self.sets[k].contains(i)
    }

    pub fn vertex_frequency(&self) -> &[f64] {
        &self.vertex_frequency
    }

    pub fn mean_objective(&self) -> f64 {
        self.mean_objective
    }

    /// Ranking and correlation features of every vertex in one pass.
    fn statistical_features(&self) -> (Vec<f64>, Vec<f64>) {
        let k = self.len() as f64;
        let mut ranking = vec![0.0; self.n];
        let mut cov = vec![0.0; self.n];
        for ((s, &o), &r) in self.sets.iter().zip(&self.objectives).zip(&self.ranks) {
            for v in s.iter() {
                ranking[v] += 1.0 / r as f64;
                cov[v] += o - self.mean_objective;
            }
        }
        let var_o: f64 = self.objectives.iter().map(|o| (o - self.mean_objective).powi(2)).sum();
        let corr = cov
            .iter()
            .zip(&self.vertex_frequency)
            .map(|(&c, &f)| {
                // sum_k (s_ik - f)^2 = K f (1 - f); the sum of (o_k - mean) is zero
                let var_s = k * f * (1.0 - f);
                let denom = (var_s * var_o).sqrt();
                if denom <= 1e-12 * k {
                    0.0
                } else {
                    (c / denom).clamp(-1.0, 1.0)
                }
            })
            .collect();
        (ranking, corr)
    }
}

/// Pearson correlation between the presence of `i` and the sample objectives.
/// Zero when either has no variance.
pub fn correlation_feature(pool: &SamplePool, i: usize) -> f64 {
    pool.statistical_features().1[i]
}

/// `sum_k s_ik / r_k`.
pub fn ranking_feature(pool: &SamplePool, i: usize) -> f64 {
    pool.sets.iter().zip(&pool.ranks).filter(|(s, _)| s.contains(i)).map(|(_, &r)| 1.0 / r as f64).sum()
}

/// Raw (unnormalized) features of every vertex.
pub fn raw_features(g: &Graph, duals: &DualSolution, pool: &SamplePool) -> Vec<VertexFeatures> {
    let pi = duals.pi();
    let total: f64 = pi.iter().sum();
    let (ranking, correlation) = pool.statistical_features();
    (0..g.n())
        .map(|i| VertexFeatures {
            ranking: ranking[i],
            correlation: correlation[i],
            weight: pi[i],
            degree: g.degree(i) as f64,
            upper_bound: total - g.neighbors(i).iter().map(|&j| pi[j]).sum::<f64>(),
        })
        .collect()
}

/// Per-feature min-max scaling to `[0, 1]`; constant features become 0.
pub fn normalize(features: &mut [VertexFeatures]) {
    for f in 0..5 {
        let (lo, hi) = features
            .iter()
            .map(|v| v.to_array()[f])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        let span = hi - lo;
        for v in features.iter_mut() {
            let mut a = v.to_array();
            a[f] = if span > 1e-12 * hi.abs().max(1.0) { ((a[f] - lo) / span).clamp(0.0, 1.0) } else { 0.0 };
            *v = VertexFeatures::from_array(a);
        }
    }
}

pub fn extract_features(g: &Graph, duals: &DualSolution, pool: &SamplePool) -> Vec<VertexFeatures> {
    let mut f = raw_features(g, duals, pool);
    normalize(&mut f);
    f
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub weights: [f64; 5],
    pub intercept: f64,
}

impl SvmModel {
    /// Coefficients of the published model.
    pub fn builtin() -> Self {
        SvmModel { weights: [1.6557, -1.0619, -4.6320, -1.5342, 5.4064], intercept: 1.1727 }
    }

    pub fn zero() -> Self {
        SvmModel { weights: [0.0; 5], intercept: 0.0 }
    }

    pub fn score(&self, f: &VertexFeatures) -> f64 {
        svm_score(self, f)
    }
}

pub fn svm_score(model: &SvmModel, f: &VertexFeatures) -> f64 {
    dot(&model.weights, &f.to_array()) + model.intercept
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub beta0: f64,
    pub beta1: f64,
}

impl LogisticParams {
    pub fn builtin() -> Self {
        LogisticParams { beta0: 9.7750, beta1: 12.5564 }
    }

    pub fn eval(&self, d: f64) -> f64 {
        logistic(self, d)
    }

    /// `ln p(d)`, finite for every finite `d`.
    pub fn ln_eval(&self, d: f64) -> f64 {
        -softplus(self.beta0 * d + self.beta1)
    }
}

/// `1 / (1 + exp(beta0 * d + beta1))`.
pub fn logistic(params: &LogisticParams, d: f64) -> f64 {
    let z = params.beta0 * d + params.beta1;
    if z >= 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Learned scorer plus its sampling rescale, as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub svm: SvmModel,
    pub logistic: LogisticParams,
}

impl Default for Model {
    fn default() -> Self {
        Model { svm: SvmModel::builtin(), logistic: LogisticParams::builtin() }
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    feature_order: Vec<String>,
    weights: [f64; 5],
    intercept: f64,
    beta0: f64,
    beta1: f64,
    normalization: String,
}

impl Model {
    pub fn to_json(&self) -> String {
        let file = ModelFile {
            feature_order: FEATURE_ORDER.iter().map(|s| s.to_string()).collect(),
            weights: self.svm.weights,
            intercept: self.svm.intercept,
            beta0: self.logistic.beta0,
            beta1: self.logistic.beta1,
            normalization: "minmax".into(),
        };
        serde_json::to_string_pretty(&file).expect("plain data") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.feature_order != FEATURE_ORDER {
            return Err(Error::Param(format!("unsupported feature order {:?}", file.feature_order)));
        }
        if file.normalization != "minmax" {
            return Err(Error::Param(format!("unsupported normalization `{}`", file.normalization)));
        }
        let all = file.weights.iter().chain([&file.intercept, &file.beta0, &file.beta1]);
        if all.into_iter().any(|x| !x.is_finite()) {
            return Err(Error::Param("model parameters must be finite".into()));
        }
        Ok(Model {
            svm: SvmModel { weights: file.weights, intercept: file.intercept },
            logistic: LogisticParams { beta0: file.beta0, beta1: file.beta1 },
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::File { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| Error::File { path: path.display().to_string(), source })
    }
}

/// One labelled vertex of a recorded pricing problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingRow {
    pub graph: String,
    pub iter: usize,
    pub vertex: usize,
    pub f_rank: f64,
    pub f_corr: f64,
    pub f_w: f64,
    pub f_deg: f64,
    pub f_ub: f64,
    pub label: u8,
}

impl TrainingRow {
    pub fn new(graph: &str, iter: usize, vertex: usize, f: VertexFeatures, label: bool) -> Self {
        TrainingRow {
            graph: graph.to_string(),
            iter,
            vertex,
            f_rank: f.ranking,
            f_corr: f.correlation,
            f_w: f.weight,
            f_deg: f.degree,
            f_ub: f.upper_bound,
            label: label as u8,
        }
    }

    pub fn features(&self) -> VertexFeatures {
        VertexFeatures::from_array([self.f_rank, self.f_corr, self.f_w, self.f_deg, self.f_ub])
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainingSet {
    pub rows: Vec<TrainingRow>,
}

impl TrainingSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn extend(&mut self, other: TrainingSet) {
        self.rows.extend(other.rows);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            w.write_record(["graph", "iter", "vertex", "f_rank", "f_corr", "f_w", "f_deg", "f_ub", "label"])?;
        }
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses the CSV layout written by [`write_csv`](Self::write_csv).
    /// Errors carry the 1-based line of the offending record.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers()?.clone();
        for col in ["f_rank", "f_corr", "f_w", "f_deg", "f_ub", "label"] {
            if !headers.iter().any(|h| h == col) {
                return Err(Error::Parse { line: 1, msg: format!("missing column `{col}`") });
            }
        }
        let mut rows = Vec::new();
        for rec in r.deserialize::<TrainingRow>() {
            let row = rec.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                msg: e.to_string(),
            })?;
            if row.label > 1 {
                return Err(Error::Parse { line: rows.len() + 2, msg: format!("label {} is not 0 or 1", row.label) });
            }
            rows.push(row);
        }
        Ok(TrainingSet { rows })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvmConfig {
    pub c: f64,
    /// Upper limit on passes over the data.
    pub epochs: usize,
    /// Stop when the largest projected-gradient violation drops below this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig { c: 1.0, epochs: 20_000, tol: 1e-10, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrainReport {
    pub accuracy: f64,
    pub hinge_loss_pos: f64,
    pub hinge_loss_neg: f64,
    pub objective: f64,
    pub epochs: usize,
    pub positives: usize,
    pub negatives: usize,
}

/// Regularized hinge objective minimized by the trainer:
/// `0.5 (|w|^2 + b^2) + sum_i c_i max(0, 1 - y_i (w.x_i + b))`.
pub fn svm_objective(model: &SvmModel, x: &[[f64; 5]], y: &[bool], cost: &[f64]) -> f64 {
    let reg = 0.5 * (dot(&model.weights, &model.weights) + model.intercept * model.intercept);
    let loss: f64 = x
        .iter()
        .zip(y)
        .zip(cost)
        .map(|((xi, &yi), &ci)| {
            let s = if yi { 1.0 } else { -1.0 };
            ci * (1.0 - s * (dot(&model.weights, xi) + model.intercept)).max(0.0)
        })
        .sum();
    reg + loss
}

/// Dual coordinate descent for the linear SVM with per-row costs and the
/// bias folded in as a constant feature. Deterministic for a given seed.
pub fn train_svm_weighted(x: &[[f64; 5]], y: &[bool], cost: &[f64], cfg: &SvmConfig) -> (SvmModel, usize) {
    let m = x.len();
    let mut w = [0.0f64; 6];
    let mut alpha = vec![0.0f64; m];
    let aug = |i: usize| -> [f64; 6] {
        let r = &x[i];
        [r[0], r[1], r[2], r[3], r[4], 1.0]
    };
    let sign = |i: usize| if y[i] { 1.0 } else { -1.0 };
    let qii: Vec<f64> = (0..m).map(|i| dot(&aug(i), &aug(i))).collect();
    // one coordinate step; returns the projected gradient before the step
    let step = |i: usize, w: &mut [f64; 6], alpha: &mut [f64]| -> f64 {
        let xi = aug(i);
        let g = sign(i) * dot(w, &xi) - 1.0;
        let pg = if alpha[i] <= 0.0 {
            g.min(0.0)
        } else if alpha[i] >= cost[i] {
            g.max(0.0)
        } else {
            g
        };
        if pg != 0.0 {
            let old = alpha[i];
            alpha[i] = (old - g / qii[i]).clamp(0.0, cost[i]);
            let d = (alpha[i] - old) * sign(i);
            for (wk, xk) in w.iter_mut().zip(&xi) {
                *wk += d * xk;
            }
        }
        pg.abs()
    };
    let mut order: Vec<usize> = (0..m).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut epochs = 0;
    while epochs < cfg.epochs {
        epochs += 1;
        order.shuffle(&mut rng);
        let mut max_violation = 0.0f64;
        for &i in &order {
            max_violation = max_violation.max(step(i, &mut w, &mut alpha));
        }
        if max_violation < cfg.tol {
            break;
        }
        if epochs % 20 == 0 {
            // the slow tail is spent on the few rows near the margin; sweep
            // those alone until they settle
            let mut near: Vec<usize> =
                (0..m).filter(|&i| (sign(i) * dot(&w, &aug(i)) - 1.0).abs() < 1e-2).collect();
            for _ in 0..20_000 {
                near.shuffle(&mut rng);
                let v = near.iter().fold(0.0f64, |v, &i| v.max(step(i, &mut w, &mut alpha)));
                if v < 0.1 * cfg.tol {
                    break;
                }
            }
        }
    }
    (SvmModel { weights: [w[0], w[1], w[2], w[3], w[4]], intercept: w[5] }, epochs)
}

/// Class-weighted linear SVM: positives cost `C * #neg / #pos`, negatives `C`.
pub fn train_svm(data: &TrainingSet, cfg: &SvmConfig) -> Result<(SvmModel, TrainReport)> {
    let x: Vec<[f64; 5]> = data.rows.iter().map(|r| r.features().to_array()).collect();
    let y: Vec<bool> = data.rows.iter().map(|r| r.label == 1).collect();
    let pos = y.iter().filter(|&&v| v).count();
    let neg = y.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::Training(format!("need both classes, got {pos} positive and {neg} negative rows")));
    }
    let c_pos = cfg.c * neg as f64 / pos as f64;
    let cost: Vec<f64> = y.iter().map(|&v| if v { c_pos } else { cfg.c }).collect();
    let (model, epochs) = train_svm_weighted(&x, &y, &cost, cfg);

    let mut correct = 0;
    let (mut hp, mut hn) = (0.0, 0.0);
    for (xi, &yi) in x.iter().zip(&y) {
        let d = dot(&model.weights, xi) + model.intercept;
        if (d > 0.0) == yi {
            correct += 1;
        }
        if yi {
            hp += (1.0 - d).max(0.0);
        } else {
            hn += (1.0 + d).max(0.0);
        }
    }
    let report = TrainReport {
        accuracy: correct as f64 / y.len() as f64,
        hinge_loss_pos: hp / pos as f64,
        hinge_loss_neg: hn / neg as f64,
        objective: svm_objective(&model, &x, &y, &cost),
        epochs,
        positives: pos,
        negatives: neg,
    };
    Ok((model, report))
}

/// 11 x 11 grid: `beta0` log-spaced over `[0.1, 100]`, `beta1` evenly over
/// `[-20, 20]`.
pub fn default_logistic_grid() -> Vec<LogisticParams> {
    let mut grid = Vec::with_capacity(121);
    for a in 0..11 {
        let beta0 = 10f64.powf(-1.0 + 3.0 * a as f64 / 10.0);
        for b in 0..11 {
            grid.push(LogisticParams { beta0, beta1: -20.0 + 4.0 * b as f64 });
        }
    }
    grid
}

/// Grid entry with the smallest objective; ties go to the earliest entry.
pub fn tune_logistic<F>(grid: &[LogisticParams], mut objective: F) -> Result<(LogisticParams, f64)>
where
    F: FnMut(&LogisticParams) -> f64,
{
    let mut best: Option<(LogisticParams, f64)> = None;
    for p in grid {
        let v = objective(p);
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((*p, v));
        }
    }
    best.ok_or_else(|| Error::Param("empty tuning grid".into()))
}

/// Records labelled pricing problems along a column generation run: at
/// iterations `0, every, 2 every, ...` up to `max_iter` the duals are priced
/// exactly and every vertex is labelled by membership in the optimal set.
/// Iterations whose exact solve does not finish within the pricing budget are
/// skipped with a warning.
pub fn collect_training_data(
    g: &Graph,
    name: &str,
    cfg: &crate::colgen::CgConfig,
    every: usize,
    max_iter: usize,
) -> Result<TrainingSet> {
    use crate::colgen::{run_cg_with, Control};
    use crate::pricing::{exact_price, stream_rng, PricingProblem};

    let every = every.max(1);
    let mut rows = Vec::new();
    let mut failure = None;
    let mut observer = |view: &crate::colgen::IterationView| {
        let it = view.iteration;
        if it.is_multiple_of(every) && it <= max_iter {
            let duals = view.rmp.duals();
            // keep the optimum even when it does not improve the master
            let problem = PricingProblem { nrc_threshold: f64::INFINITY, ..PricingProblem::new(g, duals) };
            let exact = exact_price(&problem, Some(cfg.cutoff_pricing));
            if !exact.proven_optimal {
                log::warn!("{name}: exact pricing at iteration {it} ran out of time, skipped");
            } else if g.n() >= 2 {
                let best = &exact.columns[0].set;
                let mut rng = stream_rng(cfg.seed, 2 + it as u64);
                match SamplePool::build(g, duals, g.n(), &mut rng) {
                    Ok(pool) => {
                        for (v, f) in extract_features(g, duals, &pool).into_iter().enumerate() {
                            rows.push(TrainingRow::new(name, it, v, f, best.contains(v)));
                        }
                    }
                    Err(e) => failure = Some(e),
                }
            }
        }
        if it >= max_iter {
            Control::Stop
        } else {
            Control::Continue
        }
    };
    run_cg_with(g, cfg, None, &mut observer)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(TrainingSet { rows })
}
