//! Restricted master problem of the set-covering coloring LP
//!
//! ```text
//! min  sum_s x_s
//! s.t. sum_{s : i in s} x_s >= 1   for every vertex i
//!      0 <= x_s <= 1
//! ```
//!
//! solved with a revised primal simplex on the surplus form `A x - r = 1`,
//! keeping an explicit dense basis inverse between solves for warm starts.
//!
//! The upper bounds `x_s <= 1` are never binding at an optimum (a column at a
//! value above one can be lowered without losing coverage), so the kernel
//! treats them as implicit. This keeps every optimal basis dual feasible for
//! the covering rows alone, which is what pricing needs: the duals satisfy
//! `1 - sum_{i in s} pi_i >= 0` on every pooled column and `sum pi = objective`.
//!
//! Nonbasic variables normally sit at zero. A cold start places a greedy
//! cover of columns at value one with every surplus basic, which is feasible
//! by the coverage precondition; such "superbasic" columns are driven to zero
//! or into the basis before the solve reports optimality.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Primal feasibility tolerance on the covering rows.
pub const FEAS_TOL: f64 = 1e-7;
/// Reduced-cost optimality tolerance.
pub const OPT_TOL: f64 = 1e-6;
/// Values below this are snapped to zero.
pub const ZERO_TOL: f64 = 1e-9;

const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;
const DRIFT_TOL: f64 = 1e-8;

/// A maximal independent set used as a master-problem variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub set: VertexSet,
    /// Assigned when the column enters a pool.
    pub id: Option<usize>,
    /// `sum_{i in set} pi_i` under the last dual vector it was priced with.
    pub weight: f64,
    /// `1 - weight`.
    pub reduced_cost: f64,
}

impl Column {
    pub fn new(set: VertexSet) -> Self {
        Column { set, id: None, weight: 0.0, reduced_cost: 1.0 }
    }

    pub fn priced(set: VertexSet, duals: &[f64]) -> Self {
        let mut c = Column::new(set);
        c.price(duals);
        c
    }

    pub fn price(&mut self, duals: &[f64]) {
        self.weight = self.set.weight(duals);
        self.reduced_cost = 1.0 - self.weight;
    }
}

/// Duals of the covering rows, one per vertex.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DualSolution(pub Vec<f64>);

impl DualSolution {
    pub fn pi(&self) -> &[f64] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    Col(usize),
    Surplus(usize),
}

#[derive(Clone, Debug)]
struct Basis {
    head: Vec<Var>,
    /// Row-major `m x m` inverse of the basis matrix.
    binv: Vec<f64>,
    since_refactor: usize,
}

/// Counters from the last call to [`RmpState::solve`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub pivots: usize,
    pub refactorizations: usize,
    pub warm: bool,
}

#[derive(Clone, Debug)]
pub struct RmpState {
    n: usize,
    columns: Vec<Column>,
    /// Primal value per column (the basic ones are mirrored from the basis).
    x: Vec<f64>,
    surplus: Vec<f64>,
    duals: DualSolution,
    objective: f64,
    solved: bool,
    basis: Option<Basis>,
    keys: HashSet<VertexSet>,
    next_id: usize,
    last_stats: SolveStats,
    max_iterations: Option<usize>,
}

impl RmpState {
    /// Creates an unsolved master problem. Every column must be a maximal
    /// independent set of `g` and every vertex must be covered.
    pub fn build(g: &Graph, initial: Vec<Column>) -> Result<RmpState> {
        let n = g.n();
        let mut covered = vec![false; n];
        for c in &initial {
            if !c.set.is_valid_for(g) || !g.is_maximal_independent(&c.set) {
                return Err(Error::Contract(format!("column {:?} is not a maximal independent set", c.set)));
            }
            for v in c.set.iter() {
                covered[v] = true;
            }
        }
        if let Some(vertex) = covered.iter().position(|&c| !c) {
            return Err(Error::Uncovered { vertex });
        }
        let mut rmp = RmpState {
            n,
            columns: Vec::new(),
            x: Vec::new(),
            surplus: vec![0.0; n],
            duals: DualSolution(vec![0.0; n]),
            objective: f64::INFINITY,
            solved: false,
            basis: None,
            keys: HashSet::new(),
            next_id: 0,
            last_stats: SolveStats::default(),
            max_iterations: None,
        };
        rmp.push_columns(initial);
        Ok(rmp)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Primal values aligned with [`columns`](Self::columns).
    pub fn primal(&self) -> &[f64] {
        &self.x
    }

    pub fn duals(&self) -> &DualSolution {
        &self.duals
    }

    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn is_solved(&self) -> bool {
        self.solved
    }

    pub fn last_stats(&self) -> &SolveStats {
        &self.last_stats
    }

    /// Caps simplex pivots per solve (default: unlimited up to a generous
    /// internal bound).
    pub fn set_iteration_limit(&mut self, limit: Option<usize>) {
        self.max_iterations = limit;
    }

    pub fn contains(&self, set: &VertexSet) -> bool {
        self.keys.contains(set)
    }

    /// Ids of the columns with a strictly positive primal value.
    pub fn support(&self) -> Vec<usize> {
        self.columns
            .iter()
            .zip(&self.x)
            .filter(|(_, &v)| v > ZERO_TOL)
            .map(|(c, _)| c.id.expect("pooled"))
            .collect()
    }

    fn push_columns(&mut self, new: Vec<Column>) -> usize {
        let before = self.columns.len();
        for mut c in new {
            if !self.keys.insert(c.set.clone()) {
                continue;
            }
            c.id = Some(self.next_id);
            self.next_id += 1;
            c.price(&self.duals.0);
            self.columns.push(c);
            self.x.push(0.0);
        }
        self.columns.len() - before
    }

    /// Appends the columns not already pooled; they enter nonbasic at zero so
    /// the current basis stays valid. Returns how many were added.
    pub fn add_columns(&mut self, new: Vec<Column>) -> usize {
        let added = self.push_columns(new);
        if added > 0 {
            self.solved = false;
        }
        added
    }

    /// Rebuilds the pool as `keep` (column ids) plus `new`. Every column with a
    /// positive primal value must be kept so the current solution stays feasible.
    pub fn replace_columns(&mut self, keep: &[usize], new: Vec<Column>) -> Result<()> {
        let keep: HashSet<usize> = keep.iter().copied().collect();
        for (c, &v) in self.columns.iter().zip(&self.x) {
            let id = c.id.expect("pooled");
            if v > ZERO_TOL && !keep.contains(&id) {
                return Err(Error::Contract(format!("column {id} has primal value {v} but is not kept")));
            }
        }
        let old_pos: Vec<Option<usize>> = {
            let mut next = 0;
            self.columns
                .iter()
                .map(|c| {
                    keep.contains(&c.id.expect("pooled")).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let mut columns = Vec::with_capacity(keep.len() + new.len());
        let mut x = Vec::with_capacity(keep.len() + new.len());
        for ((c, v), pos) in self.columns.drain(..).zip(self.x.drain(..)).zip(&old_pos) {
            if pos.is_some() {
                columns.push(c);
                x.push(v);
            } else {
                self.keys.remove(&c.set);
            }
        }
        self.columns = columns;
        self.x = x;

        if let Some(basis) = &mut self.basis {
            let mut intact = true;
            for var in &mut basis.head {
                if let Var::Col(j) = *var {
                    match old_pos[j] {
                        Some(p) => *var = Var::Col(p),
                        None => intact = false,
                    }
                }
            }
            if !intact {
                self.basis = None;
            }
        }
        let added = self.push_columns(new);
        if added > 0 || self.basis.is_none() {
            self.solved = false;
        }
        Ok(())
    }

    /// Solves the current master problem to optimality, warm-starting from
    /// the previous basis when one is available.
    pub fn solve(&mut self) -> Result<()> {
        let warm = self.basis.is_some();
        if !warm {
            self.crash();
        }
        let mut stats = SolveStats { warm, ..SolveStats::default() };
        let outcome = self.simplex(&mut stats);
        self.last_stats = stats;
        outcome?;
        self.finish_solution();
        Ok(())
    }

    /// All-surplus basis with a greedy cover of columns at value one (or the
    /// current point, when one is feasible).
    fn crash(&mut self) {
        let n = self.n;
        let have_point = self.x.iter().any(|&v| v > ZERO_TOL) && self.coverage_ok(&self.x);
        if !have_point {
            self.x.iter_mut().for_each(|v| *v = 0.0);
            let mut covered = vec![false; n];
            let mut left = n;
            while left > 0 {
                let (best, gain) = self
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(j, c)| (j, c.set.iter().filter(|&v| !covered[v]).count()))
                    .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
                assert!(gain > 0, "coverage checked at build time");
                self.x[best] = 1.0;
                for v in self.columns[best].set.iter() {
                    if !covered[v] {
                        covered[v] = true;
                        left -= 1;
                    }
                }
            }
        }
        let mut binv = vec![0.0; n * n];
        for i in 0..n {
            binv[i * n + i] = -1.0;
        }
        self.basis = Some(Basis { head: (0..n).map(Var::Surplus).collect(), binv, since_refactor: 0 });
        self.recompute_basic_values();
    }

    fn coverage_ok(&self, x: &[f64]) -> bool {
        let mut cover = vec![0.0; self.n];
        for (c, &v) in self.columns.iter().zip(x) {
            for i in c.set.iter() {
                cover[i] += v;
            }
        }
        cover.iter().all(|&c| c >= 1.0 - FEAS_TOL)
    }

    fn is_basic(&self) -> Vec<Option<usize>> {
        let mut col_row = vec![None; self.columns.len()];
        if let Some(b) = &self.basis {
            for (r, var) in b.head.iter().enumerate() {
                if let Var::Col(j) = *var {
                    col_row[j] = Some(r);
                }
            }
        }
        col_row
    }

    /// `x_B = B^{-1} (1 - N x_N)` from the nonbasic column values.
    fn recompute_basic_values(&mut self) {
        let n = self.n;
        let col_row = self.is_basic();
        let mut rhs = vec![1.0; n];
        for (j, c) in self.columns.iter().enumerate() {
            if col_row[j].is_none() && self.x[j] != 0.0 {
                for i in c.set.iter() {
                    rhs[i] -= self.x[j];
                }
            }
        }
        let basis = self.basis.as_ref().expect("basis");
        let mut surplus_basic = vec![false; n];
        for r in 0..n {
            let v: f64 = (0..n).map(|k| basis.binv[r * n + k] * rhs[k]).sum();
            match basis.head[r] {
                Var::Col(j) => self.x[j] = v,
                Var::Surplus(i) => {
                    self.surplus[i] = v;
                    surplus_basic[i] = true;
                }
            }
        }
        for (i, basic) in surplus_basic.into_iter().enumerate() {
            if !basic {
                self.surplus[i] = 0.0;
            }
        }
    }

    fn refactor(&mut self) -> Result<()> {
        let n = self.n;
        let basis = self.basis.as_mut().expect("basis");
        let mut mat = vec![0.0; n * n];
        for (r, var) in basis.head.iter().enumerate() {
            match *var {
                Var::Col(j) => {
                    for i in self.columns[j].set.iter() {
                        mat[i * n + r] = 1.0;
                    }
                }
                Var::Surplus(i) => mat[i * n + r] = -1.0,
            }
        }
        basis.binv = invert(mat, n).ok_or_else(|| Error::Contract("singular basis".into()))?;
        basis.since_refactor = 0;
        self.recompute_basic_values();
        Ok(())
    }

    fn residual(&self) -> f64 {
        let mut row = vec![-1.0; self.n];
        for (c, &v) in self.columns.iter().zip(&self.x) {
            for i in c.set.iter() {
                row[i] += v;
            }
        }
        row.iter().zip(&self.surplus).map(|(a, s)| (a - s).abs()).fold(0.0, f64::max)
    }

    fn compute_duals(&self) -> Vec<f64> {
        let n = self.n;
        let basis = self.basis.as_ref().expect("basis");
        let mut pi = vec![0.0; n];
        for (r, var) in basis.head.iter().enumerate() {
            if matches!(var, Var::Col(_)) {
                for (p, b) in pi.iter_mut().zip(&basis.binv[r * n..(r + 1) * n]) {
                    *p += b;
                }
            }
        }
        pi
    }

    fn simplex(&mut self, stats: &mut SolveStats) -> Result<()> {
        let n = self.n;
        let limit = self.max_iterations.unwrap_or(100_000 + 50 * (n + self.columns.len()));
        let bland_after = 5 * n;
        let mut degenerate_run = 0usize;
        let mut alpha = vec![0.0; n];

        loop {
            let col_row = self.is_basic();
            let pi = self.compute_duals();
            let use_bland = degenerate_run > bland_after;

            // (variable, direction, |d|)
            let mut entering: Option<(Var, f64, f64)> = None;
            let mut consider = |var: Var, dir: f64, score: f64| {
                let better = match entering {
                    None => true,
                    Some((_, _, s)) => !use_bland && score > s,
                };
                if better {
                    entering = Some((var, dir, score));
                }
            };
            let mut superbasic: Option<usize> = None;
            for (j, c) in self.columns.iter().enumerate() {
                if col_row[j].is_some() {
                    continue;
                }
                let d = 1.0 - c.set.weight(&pi);
                if self.x[j] <= ZERO_TOL {
                    if d < -OPT_TOL {
                        consider(Var::Col(j), 1.0, -d);
                    }
                } else if d.abs() > OPT_TOL {
                    consider(Var::Col(j), -d.signum(), d.abs());
                } else if superbasic.is_none() {
                    superbasic = Some(j);
                }
            }
            for (i, &p) in pi.iter().enumerate() {
                let basic = self.basis.as_ref().unwrap().head.contains(&Var::Surplus(i));
                if !basic && p < -OPT_TOL {
                    consider(Var::Surplus(i), 1.0, -p);
                }
            }

            let (var, dir) = match (entering, superbasic) {
                (Some((var, dir, _)), _) => (var, dir),
                // flat direction: push the value back to its bound
                (None, Some(j)) => (Var::Col(j), -1.0),
                (None, None) => {
                    self.duals = DualSolution(pi);
                    return Ok(());
                }
            };

            if stats.pivots >= limit {
                let objective = self.x.iter().sum();
                return Err(Error::SolverStall { iterations: stats.pivots, objective });
            }

            // alpha = B^{-1} a_q
            {
                let basis = self.basis.as_ref().unwrap();
                alpha.iter_mut().for_each(|a| *a = 0.0);
                match var {
                    Var::Col(j) => {
                        for i in self.columns[j].set.iter() {
                            for (r, a) in alpha.iter_mut().enumerate() {
                                *a += basis.binv[r * n + i];
                            }
                        }
                    }
                    Var::Surplus(i) => {
                        for (r, a) in alpha.iter_mut().enumerate() {
                            *a = -basis.binv[r * n + i];
                        }
                    }
                }
            }

            // ratio test: basic values move by -dir * t * alpha
            let mut step = f64::INFINITY;
            let mut leave: Option<usize> = None;
            if dir < 0.0 {
                if let Var::Col(j) = var {
                    step = self.x[j];
                }
            }
            let head = &self.basis.as_ref().unwrap().head;
            for r in 0..n {
                let rate = dir * alpha[r];
                if rate > PIVOT_TOL {
                    let value = match head[r] {
                        Var::Col(j) => self.x[j],
                        Var::Surplus(i) => self.surplus[i],
                    };
                    let ratio = value.max(0.0) / rate;
                    let take = match leave {
                        _ if ratio < step - 1e-12 => true,
                        Some(l) if ratio <= step + 1e-12 => {
                            if use_bland {
                                var_order(head[r]) < var_order(head[l])
                            } else {
                                rate > dir * alpha[l]
                            }
                        }
                        None if ratio <= step + 1e-12 => dir > 0.0,
                        _ => false,
                    };
                    if take {
                        step = ratio.min(step);
                        leave = Some(r);
                    }
                }
            }
            if !step.is_finite() {
                return Err(Error::Contract("covering LP reported unbounded".into()));
            }

            // move
            let delta = dir * step;
            match var {
                Var::Col(j) => self.x[j] += delta,
                Var::Surplus(i) => self.surplus[i] += delta,
            }
            {
                let head = &self.basis.as_ref().unwrap().head;
                for r in 0..n {
                    let change = delta * alpha[r];
                    match head[r] {
                        Var::Col(j) => self.x[j] -= change,
                        Var::Surplus(i) => self.surplus[i] -= change,
                    }
                }
            }
            stats.pivots += 1;
            if step < 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }

            match leave {
                Some(r) => {
                    let basis = self.basis.as_mut().unwrap();
                    match basis.head[r] {
                        Var::Col(j) => self.x[j] = 0.0,
                        Var::Surplus(i) => self.surplus[i] = 0.0,
                    }
                    basis.head[r] = var;
                    let piv = alpha[r];
                    let pivot_row: Vec<f64> = basis.binv[r * n..(r + 1) * n].iter().map(|v| v / piv).collect();
                    for (i, &f) in alpha.iter().enumerate() {
                        if i == r || f == 0.0 {
                            continue;
                        }
                        for (b, p) in basis.binv[i * n..(i + 1) * n].iter_mut().zip(&pivot_row) {
                            *b -= f * p;
                        }
                    }
                    basis.binv[r * n..(r + 1) * n].copy_from_slice(&pivot_row);
                    basis.since_refactor += 1;
                    if basis.since_refactor >= REFACTOR_EVERY
                        || (basis.since_refactor.is_multiple_of(16) && self.residual() > DRIFT_TOL)
                    {
                        self.refactor()?;
                        stats.refactorizations += 1;
                    }
                }
                None => {
                    // entering variable reached its own bound
                    if let Var::Col(j) = var {
                        self.x[j] = 0.0;
                    }
                }
            }
        }
    }

    fn finish_solution(&mut self) {
        for v in self.x.iter_mut().chain(self.surplus.iter_mut()) {
            if v.abs() < ZERO_TOL {
                *v = 0.0;
            }
        }
        for p in self.duals.0.iter_mut() {
            if p.abs() < ZERO_TOL {
                *p = 0.0;
            }
        }
        self.objective = self.x.iter().sum();
        let pi = self.duals.0.clone();
        for c in &mut self.columns {
            c.price(&pi);
        }
        self.solved = true;
    }

    /// CPLEX-LP text of the current master problem.
    pub fn to_lp_format(&self) -> String {
        let mut out = String::from("\\ restricted master problem\nMinimize\n obj:");
        for c in &self.columns {
            write!(out, " + x{}", c.id.unwrap_or(0)).unwrap();
        }
        out.push_str("\nSubject To\n");
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for c in &self.columns {
            for v in c.set.iter() {
                rows[v].push(c.id.unwrap_or(0));
            }
        }
        for (v, ids) in rows.iter().enumerate() {
            write!(out, " cover{}:", v + 1).unwrap();
            for id in ids {
                write!(out, " + x{id}").unwrap();
            }
            out.push_str(" >= 1\n");
        }
        out.push_str("Bounds\n");
        for c in &self.columns {
            writeln!(out, " 0 <= x{} <= 1", c.id.unwrap_or(0)).unwrap();
        }
        out.push_str("End\n");
        out
    }
}

fn var_order(v: Var) -> (usize, usize) {
    match v {
        Var::Col(j) => (0, j),
        Var::Surplus(i) => (1, i),
    }
}

/// Gauss-Jordan inverse with partial pivoting of a row-major `n x n` matrix.
fn invert(mut a: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))?;
        if a[piv * n + col].abs() < 1e-12 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
                inv.swap(piv * n + k, col * n + k);
            }
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..n {
                a[r * n + k] -= f * a[col * n + k];
                inv[r * n + k] -= f * inv[col * n + k];
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::{complete, cycle, edgeless};

    fn cols(sets: &[&[usize]]) -> Vec<Column> {
        sets.iter().map(|s| Column::new(VertexSet::new(s.to_vec()))).collect()
    }

    fn c5_all() -> Vec<Column> {
        cols(&[&[0, 2], &[1, 3], &[2, 4], &[0, 3], &[1, 4]])
    }

    fn check_invariants(r: &RmpState) {
        let mut cover = vec![0.0; r.n()];
        for (c, &v) in r.columns().iter().zip(r.primal()) {
            assert!((-FEAS_TOL..=1.0 + FEAS_TOL).contains(&v), "primal {v}");
            for i in c.set.iter() {
                cover[i] += v;
            }
            assert!(c.reduced_cost >= -OPT_TOL);
            assert_eq!(c.reduced_cost + c.weight, 1.0);
        }
        assert!(cover.iter().all(|&c| c >= 1.0 - FEAS_TOL));
        assert!((r.objective() - r.primal().iter().sum::<f64>()).abs() < 1e-7);
        assert!((r.objective() - r.duals().sum()).abs() < 1e-6);
        assert!(r.duals().pi().iter().all(|&p| p >= -1e-9));
    }

    #[test]
    fn build_checks_coverage() {
        let r = RmpState::build(&edgeless(2), cols(&[&[0, 1]])).unwrap();
        assert_eq!(r.len(), 1);
        let err = RmpState::build(&complete(3), cols(&[&[0], &[1]])).unwrap_err();
        assert!(matches!(err, Error::Uncovered { vertex: 2 }));
        assert_eq!(RmpState::build(&cycle(5), c5_all()).unwrap().len(), 5);
    }

    #[test]
    fn build_rejects_non_maximal() {
        let err = RmpState::build(&cycle(5), cols(&[&[0]])).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn c5_fractional_optimum() {
        let mut r = RmpState::build(&cycle(5), c5_all()).unwrap();
        r.solve().unwrap();
        assert!((r.objective() - 2.5).abs() < 1e-9);
        assert!(r.primal().iter().all(|&x| (x - 0.5).abs() < 1e-9));
        check_invariants(&r);
    }

    #[test]
    fn edgeless_single_column() {
        let mut r = RmpState::build(&edgeless(3), cols(&[&[0, 1, 2]])).unwrap();
        r.solve().unwrap();
        assert_eq!(r.objective(), 1.0);
        assert_eq!(r.primal(), &[1.0]);
    }

    #[test]
    fn add_remaining_columns_reaches_c5_optimum() {
        let all = c5_all();
        let mut r = RmpState::build(&cycle(5), all[..3].to_vec()).unwrap();
        r.solve().unwrap();
        // {0,2},{1,3},{2,4} cover C5 only with all three at one
        assert!((r.objective() - 3.0).abs() < 1e-9);
        let before = r.objective();
        assert_eq!(r.add_columns(all.clone()), 2);
        r.solve().unwrap();
        assert!(r.last_stats().warm);
        assert!(r.objective() <= before + 1e-9);
        assert!((r.objective() - 2.5).abs() < 1e-9);
        check_invariants(&r);
    }

    #[test]
    fn duplicates_skipped() {
        let mut r = RmpState::build(&cycle(5), c5_all()).unwrap();
        assert_eq!(r.add_columns(cols(&[&[0, 2]])), 0);
        assert_eq!(r.len(), 5);
    }

    #[test]
    fn nonnegative_reduced_cost_column_keeps_objective() {
        let g = cycle(5);
        let all = c5_all();
        let mut r = RmpState::build(&g, all[..4].to_vec()).unwrap();
        r.solve().unwrap();
        let before = r.objective();
        let mut extra = all[4].clone();
        extra.price(r.duals().pi());
        if extra.reduced_cost >= 0.0 {
            r.add_columns(vec![extra]);
            r.solve().unwrap();
            assert!((r.objective() - before).abs() < 1e-9);
        }
    }

    #[test]
    fn replace_contract_and_identity() {
        let mut r = RmpState::build(&cycle(5), c5_all()).unwrap();
        r.solve().unwrap();
        let ids: Vec<usize> = r.columns().iter().map(|c| c.id.unwrap()).collect();
        let obj = r.objective();
        r.replace_columns(&ids, vec![]).unwrap();
        assert!(r.is_solved());
        assert_eq!(r.objective(), obj);
        let err = r.replace_columns(&ids[1..], vec![]).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn replace_dropping_zero_columns_keeps_objective() {
        let g = cycle(5);
        let mut sets = c5_all();
        sets.truncate(4);
        let mut r = RmpState::build(&g, sets).unwrap();
        r.solve().unwrap();
        let support = r.support();
        let obj = r.objective();
        r.replace_columns(&support, vec![]).unwrap();
        r.solve().unwrap();
        assert!((r.objective() - obj).abs() < 1e-9);
        check_invariants(&r);
    }

    #[test]
    fn lp_dump_mentions_every_row() {
        let r = RmpState::build(&cycle(5), c5_all()).unwrap();
        let text = r.to_lp_format();
        assert!(text.starts_with("\\ restricted master problem\nMinimize"));
        for v in 1..=5 {
            assert!(text.contains(&format!("cover{v}:")));
        }
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn stall_error_reports_objective() {
        let mut r = RmpState::build(&cycle(5), c5_all()).unwrap();
        r.set_iteration_limit(Some(0));
        match r.solve() {
            Err(Error::SolverStall { objective, .. }) => assert!(objective >= 2.5),
            other => panic!("expected stall, got {other:?}"),
        }
    }
}
