//! Undirected simple graphs, DIMACS `.col` I/O and independent-set helpers.
//!
//! Adjacency is held twice: as bitset rows (one `u64` word per 64 vertices)
//! for constant-time adjacency probes and word-parallel candidate updates,
//! and as sorted neighbor lists for iteration. Vertex ids are 0-based
//! everywhere except in DIMACS text, which is 1-based.

use std::fmt::Write as _;

use rand::Rng;

use crate::bitset::{words_for, BitSet};
use crate::error::{Error, Result};

pub mod families;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Sorted, duplicate-free list of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Sum of `weights` over the members.
    pub fn weight(&self, weights: &[f64]) -> f64 {
        self.0.iter().map(|&v| weights[v]).sum()
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.0.last().is_none_or(|&v| v < g.n())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// What `parse_dimacs_report` had to drop while reading.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub duplicate_edges: usize,
    pub self_loops: usize,
    pub declared_edges: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices. Self-loops and repeated edges are dropped.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Graph
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::edgeless(n);
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            g.add_edge(u, v);
        }
        g.finish();
        g
    }

    pub fn edgeless(n: usize) -> Graph {
        let words = words_for(n);
        Graph { n, words, rows: vec![0; n * words], neighbors: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Inserts `{u, v}`; returns false for self-loops and existing edges.
    fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || self.adjacent(u, v) {
            return false;
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
        self.neighbors[u].push(v);
        self.neighbors[v].push(u);
        self.edge_count += 1;
        true
    }

    fn finish(&mut self) {
        for nb in &mut self.neighbors {
            nb.sort_unstable();
        }
    }

    /// Copy of this graph with the extra edge `{u, v}`.
    pub fn with_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.add_edge(u, v);
        g.finish();
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `2|E| / (n (n - 1))`; zero for graphs with fewer than two vertices.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        2.0 * self.edge_count as f64 / (self.n as f64 * (self.n as f64 - 1.0))
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Bitset row of `u`'s neighbors.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.neighbors[u].len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn empty_set(&self) -> BitSet {
        BitSet::new(self.n)
    }

    pub fn full_set(&self) -> BitSet {
        BitSet::full(self.n)
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        let m = s.members();
        m.iter().enumerate().all(|(i, &u)| m[i + 1..].iter().all(|&v| !self.adjacent(u, v)))
    }

    pub fn is_maximal_independent(&self, s: &VertexSet) -> bool {
        if !self.is_independent(s) {
            return false;
        }
        self.candidates_of(s).is_empty()
    }

    /// Vertices that can still be added to the independent set `s`.
    pub fn candidates_of(&self, s: &VertexSet) -> BitSet {
        let mut cand = self.full_set();
        for v in s.iter() {
            cand.remove(v);
            cand.difference_with(self.row(v));
        }
        cand
    }

    /// Grows the independent set `s` into a maximal one, adding candidates in
    /// uniformly random order.
    pub fn extend_to_maximal<R: Rng + ?Sized>(&self, s: &VertexSet, rng: &mut R) -> Result<VertexSet> {
        if !s.is_valid_for(self) || !self.is_independent(s) {
            return Err(Error::Contract(format!("{s:?} is not an independent set of this graph")));
        }
        let cand = self.candidates_of(s);
        let mut members = s.members().to_vec();
        let mut pool: Vec<usize> = cand.iter().collect();
        self.grow_uniform(&mut members, &mut pool, rng);
        Ok(VertexSet::new(members))
    }

    /// Deterministic extension adding the lowest-id candidate first.
    pub fn extend_greedy(&self, s: &VertexSet) -> VertexSet {
        let mut cand = self.candidates_of(s);
        let mut members = s.members().to_vec();
        while let Some(v) = cand.first() {
            members.push(v);
            cand.remove(v);
            cand.difference_with(self.row(v));
        }
        VertexSet::new(members)
    }

    fn grow_uniform<R: Rng + ?Sized>(&self, members: &mut Vec<usize>, pool: &mut Vec<usize>, rng: &mut R) {
        while !pool.is_empty() {
            let v = pool.swap_remove(rng.gen_range(0..pool.len()));
            members.push(v);
            pool.retain(|&u| !self.adjacent(u, v));
        }
    }

    /// One uniformly grown maximal independent set.
    pub fn random_mis<R: Rng + ?Sized>(&self, rng: &mut R) -> VertexSet {
        let mut members = Vec::new();
        let mut pool: Vec<usize> = (0..self.n).collect();
        self.grow_uniform(&mut members, &mut pool, rng);
        VertexSet::new(members)
    }

    /// `count` maximal independent sets, each built by repeatedly adding a
    /// uniformly random remaining candidate. Duplicates are kept.
    pub fn sample_uniform_mis<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<VertexSet> {
        (0..count).map(|_| self.random_mis(rng)).collect()
    }

    /// Every maximal independent set, in lexicographic order, or `None` once
    /// more than `limit` have been found.
    pub fn maximal_independent_sets(&self, limit: usize) -> Option<Vec<VertexSet>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        if !self.enumerate_mis(&mut current, self.full_set(), self.empty_set(), &mut out, limit) {
            return None;
        }
        out.sort();
        Some(out)
    }

    /// Bron-Kerbosch with pivoting, run on the complement.
    fn enumerate_mis(
        &self,
        current: &mut Vec<usize>,
        cand: BitSet,
        excluded: BitSet,
        out: &mut Vec<VertexSet>,
        limit: usize,
    ) -> bool {
        if cand.is_empty() {
            if excluded.is_empty() {
                if out.len() == limit {
                    return false;
                }
                out.push(VertexSet::new(current.clone()));
            }
            return true;
        }
        // pivot: the vertex of cand or excluded with most neighbors in cand
        let pivot = cand
            .iter()
            .chain(excluded.iter())
            .max_by_key(|&u| {
                let mut c = cand.clone();
                c.intersect_with(self.row(u));
                c.count()
            })
            .expect("nonempty");
        let mut branch = cand.clone();
        branch.intersect_with(self.row(pivot));
        if cand.contains(pivot) {
            branch.insert(pivot);
        }
        let (mut cand, mut excluded) = (cand, excluded);
        for v in branch.iter() {
            let mut c = cand.clone();
            c.remove(v);
            c.difference_with(self.row(v));
            let mut x = excluded.clone();
            x.remove(v);
            x.difference_with(self.row(v));
            current.push(v);
            let ok = self.enumerate_mis(current, c, x, out, limit);
            current.pop();
            if !ok {
                return false;
            }
            cand.remove(v);
            excluded.insert(v);
        }
        true
    }

    pub fn parse_dimacs(text: &str) -> Result<Graph> {
        let (g, report) = Self::parse_dimacs_report(text)?;
        if report.duplicate_edges + report.self_loops > 0 {
            log::warn!(
                "dropped {} duplicate edge(s) and {} self-loop(s)",
                report.duplicate_edges,
                report.self_loops
            );
        }
        Ok(g)
    }

    /// Reads DIMACS `.col` text: `c` comments, one `p edge n m` header and
    /// 1-based `e u v` lines.
    pub fn parse_dimacs_report(text: &str) -> Result<(Graph, ParseReport)> {
        let mut graph: Option<Graph> = None;
        let mut report = ParseReport::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let mut tok = raw.split_whitespace();
            let Some(head) = tok.next() else { continue };
            match head {
                "c" => {}
                "p" => {
                    if graph.is_some() {
                        return Err(Error::Parse { line, msg: "second `p` line".into() });
                    }
                    let format = tok.next();
                    if !matches!(format, Some("edge") | Some("edges") | Some("col")) {
                        return Err(Error::Parse { line, msg: format!("unsupported problem line `{raw}`") });
                    }
                    let n = parse_count(tok.next(), line, "vertex count")?;
                    let m = parse_count(tok.next(), line, "edge count")?;
                    if n == 0 {
                        return Err(Error::Parse { line, msg: "graph must have at least one vertex".into() });
                    }
                    report.declared_edges = m;
                    graph = Some(Graph::edgeless(n));
                }
                "e" => {
                    let g = graph
                        .as_mut()
                        .ok_or_else(|| Error::Parse { line, msg: "edge before `p` line".into() })?;
                    let u = parse_vertex(tok.next(), g.n, line)?;
                    let v = parse_vertex(tok.next(), g.n, line)?;
                    if u == v {
                        report.self_loops += 1;
                    } else if !g.add_edge(u, v) {
                        report.duplicate_edges += 1;
                    }
                }
                _ => return Err(Error::Parse { line, msg: format!("unrecognised line `{raw}`") }),
            }
        }
        let mut g = graph.ok_or(Error::Parse { line: 0, msg: "missing `p edge n m` line".into() })?;
        g.finish();
        Ok((g, report))
    }

    /// DIMACS text with `p edge n m` followed by sorted 1-based `e u v` lines.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p edge {} {}", self.n, self.edge_count).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
        out
    }
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line, msg: format!("malformed header: bad {what}") })
}

fn parse_vertex(tok: Option<&str>, n: usize, line: usize) -> Result<usize> {
    let v: usize = tok
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line, msg: "malformed edge line".into() })?;
    if v == 0 || v > n {
        return Err(Error::Parse { line, msg: format!("vertex {v} out of range 1..={n}") });
    }
    Ok(v - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::{cycle, edgeless};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::new(v.to_vec())
    }

    #[test]
    fn parse_triangle() {
        let g = Graph::parse_dimacs("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.density(), 1.0);
    }

    #[test]
    fn parse_edgeless() {
        let g = Graph::parse_dimacs("p edge 2 0").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.density(), 0.0);
    }

    #[test]
    fn parse_drops_duplicates_and_loops() {
        let text = "c hello\np edge 3 4\ne 1 2\ne 2 1\nc mid\ne 3 3\ne 2 3\n";
        let (g, rep) = Graph::parse_dimacs_report(text).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(rep.duplicate_edges, 1);
        assert_eq!(rep.self_loops, 1);
    }

    #[test]
    fn parse_errors_name_line() {
        let err = Graph::parse_dimacs("p edge 3 1\ne 1 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Graph::parse_dimacs("c only comments\ne 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Graph::parse_dimacs("c nothing\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = Graph::parse_dimacs("p edge x 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn independence_predicates() {
        let tri = families::complete(3);
        assert!(tri.is_independent(&vs(&[0])));
        assert!(!tri.is_independent(&vs(&[0, 1])));
        let c5 = cycle(5);
        assert!(c5.is_independent(&vs(&[0, 2])));
        assert!(c5.is_maximal_independent(&vs(&[0, 2])));
        assert!(!c5.is_maximal_independent(&vs(&[0])));
        assert!(edgeless(4).is_maximal_independent(&vs(&[0, 1, 2, 3])));
    }

    #[test]
    fn extend_c5_from_zero() {
        let c5 = cycle(5);
        let mut seen = BTreeSet::new();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = c5.extend_to_maximal(&vs(&[0]), &mut rng).unwrap();
            seen.insert(s.into_inner());
        }
        let expect: BTreeSet<Vec<usize>> = [vec![0, 2], vec![0, 3]].into_iter().collect();
        assert_eq!(seen, expect);
    }

    #[test]
    fn extend_fixed_point_and_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c5 = cycle(5);
        assert_eq!(c5.extend_to_maximal(&vs(&[1, 3]), &mut rng).unwrap(), vs(&[1, 3]));
        assert_eq!(edgeless(3).extend_to_maximal(&VertexSet::empty(), &mut rng).unwrap(), vs(&[0, 1, 2]));
        assert!(matches!(c5.extend_to_maximal(&vs(&[0, 1]), &mut rng), Err(Error::Contract(_))));
    }

    #[test]
    fn uniform_sampling_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let e3 = edgeless(3);
        assert!(e3.sample_uniform_mis(5, &mut rng).iter().all(|s| *s == vs(&[0, 1, 2])));
        let tri = families::complete(3);
        assert!(tri.sample_uniform_mis(100, &mut rng).iter().all(|s| s.len() == 1));
        let c5 = cycle(5);
        let seen: BTreeSet<_> = c5.sample_uniform_mis(1000, &mut rng).into_iter().collect();
        let all: BTreeSet<_> = (0..5).map(|i| vs(&[i, (i + 2) % 5])).collect();
        assert_eq!(seen, all);
    }

    #[test]
    fn dimacs_writer_is_sorted_one_based() {
        let g = Graph::from_edges(3, [(2, 1), (0, 2)]);
        assert_eq!(g.to_dimacs(), "p edge 3 2\ne 1 3\ne 2 3\n");
    }

    #[test]
    fn enumerates_maximal_independent_sets() {
        let c5 = cycle(5).maximal_independent_sets(100).unwrap();
        assert_eq!(c5.len(), 5);
        assert!(c5.iter().all(|s| s.len() == 2));
        assert_eq!(families::petersen().maximal_independent_sets(1000).unwrap().len(), 15);
        assert_eq!(edgeless(4).maximal_independent_sets(10).unwrap(), vec![vs(&[0, 1, 2, 3])]);
        assert!(cycle(5).maximal_independent_sets(4).is_none());
    }
}
