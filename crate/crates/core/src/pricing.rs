//! Pricing: the maximum weight independent set problem under the master
//! duals. A column improves the master iff `1 - sum_{i in s} pi_i < 0`.
//!
//! Randomized backends draw each constructed set from its own ChaCha stream
//! (`stream = index + 1`, stream 0 being reserved for setup draws), so their
//! output does not depend on how the work is split across threads.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::lp::{Column, DualSolution};
use crate::mlmodel::{extract_features, Model, SamplePool};

pub const DEFAULT_NRC_THRESHOLD: f64 = -1e-6;

#[derive(Clone, Copy, Debug)]
pub struct PricingProblem<'a> {
    pub graph: &'a Graph,
    pub duals: &'a DualSolution,
    pub nrc_threshold: f64,
}

impl<'a> PricingProblem<'a> {
    pub fn new(graph: &'a Graph, duals: &'a DualSolution) -> Self {
        assert_eq!(graph.n(), duals.len(), "one dual per vertex");
        PricingProblem { graph, duals, nrc_threshold: DEFAULT_NRC_THRESHOLD }
    }

    fn pi(&self) -> &[f64] {
        self.duals.pi()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PricingResult {
    /// Distinct columns below the threshold, most negative first.
    pub columns: Vec<Column>,
    /// Smallest reduced cost over everything generated, improving or not.
    pub best_reduced_cost: f64,
    pub proven_optimal: bool,
    pub generated_count: usize,
    pub elapsed: Duration,
}

impl PricingResult {
    fn collect<I>(p: &PricingProblem, sets: I, proven_optimal: bool, started: Instant) -> Self
    where
        I: IntoIterator<Item = VertexSet>,
    {
        let mut seen = HashSet::new();
        let mut columns = Vec::new();
        let mut best = f64::INFINITY;
        let mut generated = 0;
        for s in sets {
            generated += 1;
            let rc = 1.0 - s.weight(p.pi());
            best = best.min(rc);
            if rc < p.nrc_threshold && seen.insert(s.clone()) {
                columns.push(Column::priced(s, p.pi()));
            }
        }
        columns.sort_by(|a, b| a.reduced_cost.total_cmp(&b.reduced_cost).then_with(|| a.set.cmp(&b.set)));
        PricingResult {
            columns,
            best_reduced_cost: best,
            proven_optimal,
            generated_count: generated,
            elapsed: started.elapsed(),
        }
    }

    pub fn nrc_count(&self) -> usize {
        self.columns.len()
    }
}

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Index drawn with probability proportional to `exp(logw[i])`.
fn draw_log_weighted<R: Rng + ?Sized>(logw: &[f64], rng: &mut R) -> usize {
    let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return rng.gen_range(0..logw.len());
    }
    let total: f64 = logw.iter().map(|&l| (l - max).exp()).sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, &l) in logw.iter().enumerate() {
        u -= (l - max).exp();
        if u <= 0.0 {
            return i;
        }
    }
    logw.len() - 1
}

/// Grows a maximal independent set from `first`, drawing every later vertex
/// among the remaining candidates with probability proportional to
/// `exp(logw[v])`.
fn grow_weighted<R: Rng + ?Sized>(g: &Graph, first: usize, logw: &[f64], rng: &mut R) -> VertexSet {
    let mut members = vec![first];
    let mut pool: Vec<usize> = (0..g.n()).filter(|&u| u != first && !g.adjacent(u, first)).collect();
    let mut scratch = Vec::with_capacity(pool.len());
    while !pool.is_empty() {
        scratch.clear();
        scratch.extend(pool.iter().map(|&v| logw[v]));
        let v = pool.swap_remove(draw_log_weighted(&scratch, rng));
        members.push(v);
        pool.retain(|&u| !g.adjacent(u, v));
    }
    VertexSet::new(members)
}

/// Learned sampling heuristic. Vertices are scored by the SVM on features
/// built from a pool of `n` uniform samples, and every one of the `lambda`
/// sets starts at a uniform vertex and then follows the logistic weights.
pub fn mlph_price(p: &PricingProblem, model: &Model, lambda: usize, seed: u64, deadline: Option<Instant>) -> PricingResult {
    let started = Instant::now();
    let g = p.graph;
    let n = g.n();
    let mut setup = stream_rng(seed, 0);
    let logw: Vec<f64> = if n >= 2 {
        let pool = SamplePool::build(g, p.duals, n, &mut setup).expect("n >= 2");
        extract_features(g, p.duals, &pool).iter().map(|f| model.logistic.ln_eval(model.svm.score(f))).collect()
    } else {
        vec![0.0; n]
    };
    let sets: Vec<Option<VertexSet>> = (0..lambda)
        .into_par_iter()
        .map(|k| {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return None;
            }
            let mut rng = stream_rng(seed, k as u64 + 1);
            let first = rng.gen_range(0..n);
            Some(grow_weighted(g, first, &logw, &mut rng))
        })
        .collect();
    PricingResult::collect(p, sets.into_iter().flatten(), false, started)
}

/// Uniform sampling: every set starts at a uniform vertex and adds uniform
/// candidates. Same streams as [`mlph_price`].
pub fn uniform_price(p: &PricingProblem, lambda: usize, seed: u64) -> PricingResult {
    let started = Instant::now();
    let g = p.graph;
    let sets: Vec<VertexSet> = (0..lambda)
        .into_par_iter()
        .map(|k| g.random_mis(&mut stream_rng(seed, k as u64 + 1)))
        .collect();
    PricingResult::collect(p, sets, false, started)
}

/// Deterministic greedy: repeatedly takes the candidate with the largest
/// dual, lowest id first on ties.
pub fn greedy_price(p: &PricingProblem) -> PricingResult {
    let started = Instant::now();
    let g = p.graph;
    let pi = p.pi();
    let mut cand = g.full_set();
    let mut members = Vec::new();
    while !cand.is_empty() {
        let v = cand.iter().fold(None, |best: Option<usize>, v| match best {
            Some(b) if pi[b] >= pi[v] => Some(b),
            _ => Some(v),
        });
        let v = v.expect("nonempty");
        members.push(v);
        cand.remove(v);
        cand.difference_with(g.row(v));
    }
    PricingResult::collect(p, [VertexSet::new(members)], false, started)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcoConfig {
    pub ants: usize,
    pub iterations: usize,
    pub evaporation: f64,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
}

impl AcoConfig {
    /// `n` ants for 50 iterations, `alpha = 1`, `beta = 2`, `rho = 0.1`.
    pub fn for_graph(n: usize, seed: u64) -> Self {
        AcoConfig { ants: n.max(1), iterations: 50, evaporation: 0.1, alpha: 1.0, beta: 2.0, seed }
    }
}

/// Ant colony construction with one pheromone value per vertex.
pub fn aco_price(p: &PricingProblem, cfg: &AcoConfig, deadline: Option<Instant>) -> PricingResult {
    let started = Instant::now();
    let g = p.graph;
    let n = g.n();
    let pi = p.pi();
    let mut tau = vec![1.0f64; n];
    let mut all = Vec::new();
    for it in 0..cfg.iterations {
        if it > 0 && deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let logw: Vec<f64> = (0..n)
            .map(|v| {
                let w = pi[v].max(0.0);
                if w == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    cfg.alpha * tau[v].ln() + cfg.beta * w.ln()
                }
            })
            .collect();
        let ants: Vec<VertexSet> = (0..cfg.ants)
            .into_par_iter()
            .map(|a| {
                let mut rng = stream_rng(cfg.seed, (it * cfg.ants + a) as u64 + 1);
                let first = draw_log_weighted(&logw, &mut rng);
                grow_weighted(g, first, &logw, &mut rng)
            })
            .collect();
        let best = ants
            .iter()
            .map(|s| s.weight(pi))
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, w)| if w > acc.1 { (i, w) } else { acc });
        for t in tau.iter_mut() {
            *t *= 1.0 - cfg.evaporation;
        }
        for v in ants[best.0].iter() {
            tau[v] += best.1.max(0.0);
        }
        for t in tau.iter_mut() {
            *t = t.max(1e-12);
        }
        all.extend(ants);
    }
    PricingResult::collect(p, all, false, started)
}

/// Branch-and-bound maximum weight independent set. Bounds come from a
/// greedy clique cover of the candidates with weight splitting; vertices are
/// branched on in reverse cover order so whole tails are pruned at once.
/// Without a finished search the incumbent is returned unproven.
pub fn exact_price(p: &PricingProblem, budget: Option<Duration>) -> PricingResult {
    let started = Instant::now();
    let g = p.graph;
    let w: Vec<f64> = p.pi().iter().map(|&x| x.max(0.0)).collect();
    let mut search = Mwis::new(g, &w, budget.map(|b| started + b));

    let greedy = greedy_price(p);
    let start = VertexSet::new(
        greedy.columns.first().map_or_else(|| greedy_set(g, &w), |c| c.set.members().to_vec()),
    );
    search.best_weight = start.weight(&w);
    search.best = start.members().to_vec();

    let mut cand = g.empty_set();
    for (v, &wv) in w.iter().enumerate() {
        if wv > 0.0 {
            cand.insert(v);
        }
    }
    let mut current = Vec::new();
    search.expand(&mut current, 0.0, cand);
    let proven = !search.timed_out;
    let set = g.extend_greedy(&VertexSet::new(search.best.clone()));
    PricingResult::collect(p, [set], proven, started)
}

fn greedy_set(g: &Graph, w: &[f64]) -> Vec<usize> {
    let mut cand = g.full_set();
    let mut members = Vec::new();
    while let Some(v) = cand.iter().fold(None, |b: Option<usize>, v| match b {
        Some(b) if w[b] >= w[v] => Some(b),
        _ => Some(v),
    }) {
        members.push(v);
        cand.remove(v);
        cand.difference_with(g.row(v));
    }
    members
}

struct Mwis<'a> {
    g: &'a Graph,
    w: &'a [f64],
    deadline: Option<Instant>,
    best: Vec<usize>,
    best_weight: f64,
    nodes: u64,
    timed_out: bool,
}

impl<'a> Mwis<'a> {
    fn new(g: &'a Graph, w: &'a [f64], deadline: Option<Instant>) -> Self {
        Mwis { g, w, deadline, best: Vec::new(), best_weight: 0.0, nodes: 0, timed_out: false }
    }

    /// Cover order of `cand` with the running bound after each vertex is
    /// exhausted: any independent set inside `order[..=i]` weighs at most
    /// `bounds[i]`.
    fn cover_bounds(&self, cand: &BitSet) -> (Vec<usize>, Vec<f64>) {
        let mut residual: Vec<(usize, f64)> = cand.iter().map(|v| (v, self.w[v])).collect();
        // heavier vertices are exhausted last so they are branched on first
        residual.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        let mut left = cand.clone();
        let mut rem: Vec<f64> = vec![0.0; self.g.n()];
        for &(v, x) in &residual {
            rem[v] = x;
        }
        let mut order = Vec::with_capacity(residual.len());
        let mut bounds = Vec::with_capacity(residual.len());
        let mut total = 0.0;
        let mut idx = 0;
        while idx < residual.len() {
            let start = residual[idx].0;
            if !left.contains(start) {
                idx += 1;
                continue;
            }
            // greedy clique through `start` among the remaining vertices
            let mut clique = vec![start];
            let mut common = left.clone();
            common.intersect_with(self.g.row(start));
            while let Some(u) = common.first() {
                clique.push(u);
                common.intersect_with(self.g.row(u));
            }
            let delta = clique.iter().map(|&u| rem[u]).fold(f64::INFINITY, f64::min);
            total += delta;
            for &u in &clique {
                rem[u] -= delta;
                if rem[u] <= 1e-15 {
                    left.remove(u);
                    order.push(u);
                    bounds.push(total);
                }
            }
        }
        (order, bounds)
    }

    fn expand(&mut self, current: &mut Vec<usize>, weight: f64, cand: BitSet) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(512) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        if self.timed_out {
            return;
        }
        if cand.is_empty() {
            if weight > self.best_weight {
                self.best_weight = weight;
                self.best = current.clone();
            }
            return;
        }
        let (order, bounds) = self.cover_bounds(&cand);
        let mut rest = cand;
        for i in (0..order.len()).rev() {
            if weight + bounds[i] <= self.best_weight + 1e-12 {
                return;
            }
            let v = order[i];
            rest.remove(v);
            let mut next = rest.clone();
            next.difference_with(self.g.row(v));
            current.push(v);
            self.expand(current, weight + self.w[v], next);
            current.pop();
            if self.timed_out {
                return;
            }
        }
    }
}

/// Enumerates every maximal independent set of a graph with at most 20
/// vertices and reports all improving ones.
pub fn brute_force_oracle(p: &PricingProblem) -> Result<PricingResult> {
    let started = Instant::now();
    let g = p.graph;
    let n = g.n();
    if n > 20 {
        return Err(Error::Refused(format!("brute force limited to 20 vertices, graph has {n}")));
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u)).collect();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut independent = vec![false; 1usize << n];
    independent[0] = true;
    let mut sets = Vec::new();
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        independent[mask as usize] = independent[rest as usize] && adj[low] & rest == 0;
        if !independent[mask as usize] {
            continue;
        }
        let maximal = (0..n).all(|v| mask >> v & 1 == 1 || adj[v] & mask != 0);
        if maximal {
            sets.push(VertexSet::new((0..n).filter(|&v| mask >> v & 1 == 1).collect()));
        }
    }
    if n == 0 || sets.is_empty() {
        sets.push(VertexSet::empty());
    }
    Ok(PricingResult::collect(p, sets, true, started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::{complete, cycle, edgeless, path};

    fn duals(v: &[f64]) -> DualSolution {
        DualSolution(v.to_vec())
    }

    fn sets(r: &PricingResult) -> Vec<Vec<usize>> {
        r.columns.iter().map(|c| c.set.members().to_vec()).collect()
    }

    #[test]
    fn mlph_triangle_finds_nothing() {
        let g = complete(3);
        let d = duals(&[0.9, 0.5, 0.1]);
        let r = mlph_price(&PricingProblem::new(&g, &d), &Model::default(), 300, 1, None);
        assert!(r.columns.is_empty());
        assert!((r.best_reduced_cost - 0.1).abs() < 1e-12);
        assert!(!r.proven_optimal);
        assert_eq!(r.generated_count, 300);
    }

    #[test]
    fn mlph_edgeless_unique_column() {
        let g = edgeless(3);
        let d = duals(&[1.0; 3]);
        let r = mlph_price(&PricingProblem::new(&g, &d), &Model::default(), 10, 4, None);
        assert_eq!(sets(&r), vec![vec![0, 1, 2]]);
        assert_eq!(r.columns[0].reduced_cost, -2.0);
    }

    #[test]
    fn mlph_c5_dedups() {
        let g = cycle(5);
        let d = duals(&[0.6; 5]);
        let r = mlph_price(&PricingProblem::new(&g, &d), &Model::default(), 250, 2, None);
        assert!(!r.columns.is_empty() && r.columns.len() <= 5);
        assert!(r.columns.iter().all(|c| (c.reduced_cost + 0.2).abs() < 1e-12));
    }

    #[test]
    fn greedy_cases() {
        let g = edgeless(3);
        let d = duals(&[1.0; 3]);
        let r = greedy_price(&PricingProblem::new(&g, &d));
        assert_eq!(sets(&r), vec![vec![0, 1, 2]]);

        let g = path(3);
        let d = duals(&[0.4, 0.5, 0.4]);
        let r = greedy_price(&PricingProblem::new(&g, &d));
        assert!(r.columns.is_empty());
        assert!((r.best_reduced_cost - 0.5).abs() < 1e-12);

        let g = complete(3);
        let d = duals(&[0.9, 0.5, 0.1]);
        let r = greedy_price(&PricingProblem::new(&g, &d));
        assert!((r.best_reduced_cost - 0.1).abs() < 1e-12);
        assert!(r.columns.is_empty());
    }

    #[test]
    fn aco_cases() {
        let g = edgeless(4);
        let d = duals(&[0.5; 4]);
        let r = aco_price(&PricingProblem::new(&g, &d), &AcoConfig::for_graph(4, 0), None);
        assert_eq!(sets(&r), vec![vec![0, 1, 2, 3]]);

        let g = cycle(5);
        let d = duals(&[0.6; 5]);
        let r = aco_price(&PricingProblem::new(&g, &d), &AcoConfig::for_graph(5, 7), None);
        assert_eq!(r.columns.len(), 5);

        let d = duals(&[0.0; 5]);
        let r = aco_price(&PricingProblem::new(&g, &d), &AcoConfig::for_graph(5, 7), None);
        assert_eq!(r.best_reduced_cost, 1.0);
        assert!(r.columns.is_empty());
    }

    #[test]
    fn exact_small_cases() {
        let g = complete(3);
        let d = duals(&[0.9, 0.5, 0.1]);
        let r = exact_price(&PricingProblem::new(&g, &d), None);
        assert!(r.proven_optimal);
        assert!((r.best_reduced_cost - 0.1).abs() < 1e-12);

        let g = path(3);
        let d = duals(&[0.4, 0.5, 0.4]);
        let r = exact_price(&PricingProblem::new(&g, &d), None);
        assert!((r.best_reduced_cost - 0.2).abs() < 1e-12);
    }

    #[test]
    fn oracle_cases() {
        let g = cycle(5);
        let d = duals(&[0.6; 5]);
        let r = brute_force_oracle(&PricingProblem::new(&g, &d)).unwrap();
        assert_eq!(r.columns.len(), 5);
        assert!((r.best_reduced_cost + 0.2).abs() < 1e-12);

        let g = complete(3);
        let d = duals(&[0.9, 0.5, 0.99]);
        assert!(brute_force_oracle(&PricingProblem::new(&g, &d)).unwrap().columns.is_empty());

        let g = edgeless(4);
        let d = duals(&[1.0, 0.0, 0.0, 0.0]);
        let r = brute_force_oracle(&PricingProblem::new(&g, &d)).unwrap();
        assert!(r.columns.is_empty());
        assert_eq!(r.best_reduced_cost, 0.0);

        let g = edgeless(21);
        let d = duals(&[0.0; 21]);
        assert!(matches!(brute_force_oracle(&PricingProblem::new(&g, &d)), Err(Error::Refused(_))));
    }

    #[test]
    fn exact_honours_budget() {
        let g = edgeless(5);
        let d = duals(&[0.3; 5]);
        let r = exact_price(&PricingProblem::new(&g, &d), Some(Duration::ZERO));
        assert_eq!(r.columns.len(), 1);
    }
}
