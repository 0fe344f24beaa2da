//! Brute-force reference solvers shared by the integration tests. Nothing
//! here calls into the library's LP or search code.
#![allow(dead_code)]

use fraccol::graph::families;
use fraccol::{Graph, VertexSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn er(n: usize, p: f64, seed: u64) -> Graph {
    families::erdos_renyi(n, p, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Every maximal independent set, by scanning all vertex subsets.
pub fn all_maximal_sets(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    assert!(n <= 20, "subset scan is exponential");
    let adj: Vec<u32> = (0..n).map(|u| (0..n).filter(|&v| g.adjacent(u, v)).fold(0, |m, v| m | 1 << v)).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let members = (0..n).filter(|&v| mask >> v & 1 == 1);
        if members.clone().any(|v| adj[v] & mask != 0) {
            continue;
        }
        // maximal: every outside vertex has a neighbour inside
        if (0..n).all(|v| mask >> v & 1 == 1 || adj[v] & mask != 0) {
            out.push(VertexSet::new(members.collect()));
        }
    }
    out
}

/// Maximum of `sum_i y_i` subject to `sum_{i in s} y_i <= 1` for every set and
/// `y >= 0`, by a dense tableau with Bland's rule. By LP duality this is the
/// minimum of the covering LP over the same sets. Returns the value and `y`.
pub fn covering_lp_by_dual(n: usize, sets: &[VertexSet]) -> (f64, Vec<f64>) {
    let m = sets.len();
    let cols = n + m;
    // rows: constraints, last row: objective (reduced costs of the max problem)
    let mut t = vec![vec![0.0f64; cols + 1]; m + 1];
    for (r, s) in sets.iter().enumerate() {
        for v in s.iter() {
            t[r][v] = 1.0;
        }
        t[r][n + r] = 1.0;
        t[r][cols] = 1.0;
    }
    t[m][..n].fill(-1.0);
    let mut basis: Vec<usize> = (n..cols).collect();
    while let Some(enter) = (0..cols).find(|&j| t[m][j] < -1e-12) {
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if t[r][enter] > 1e-12 {
                let ratio = t[r][cols] / t[r][enter];
                leave = match leave {
                    None => Some(r),
                    Some(b) => {
                        let best = t[b][cols] / t[b][enter];
                        if ratio < best - 1e-12 || (ratio <= best + 1e-12 && basis[r] < basis[b]) {
                            Some(r)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
        }
        let r = leave.expect("bounded: every vertex lies in some set");
        let piv = t[r][enter];
        for x in t[r].iter_mut() {
            *x /= piv;
        }
        let prow = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            let f = row[enter];
            if i != r && f != 0.0 {
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x -= f * p;
                }
            }
        }
        basis[r] = enter;
    }
    let mut y = vec![0.0; n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            y[b] = t[r][cols];
        }
    }
    (t[m][cols], y)
}

/// Chromatic number by trying `k = 1, 2, ...` colours in vertex order.
pub fn brute_chromatic(g: &Graph) -> usize {
    fn fits(g: &Graph, k: usize, v: usize, color: &mut Vec<usize>) -> bool {
        if v == g.n() {
            return true;
        }
        for c in 0..k {
            if (0..v).all(|u| !g.adjacent(u, v) || color[u] != c) {
                color[v] = c;
                if fits(g, k, v + 1, color) {
                    return true;
                }
            }
        }
        false
    }
    (1..=g.n().max(1)).find(|&k| fits(g, k, 0, &mut vec![0; g.n()])).unwrap()
}

/// Minimum of `1 - sum_{i in s} pi_i` over every maximal independent set.
pub fn brute_min_reduced_cost(g: &Graph, pi: &[f64]) -> f64 {
    all_maximal_sets(g).iter().map(|s| 1.0 - s.iter().map(|v| pi[v]).sum::<f64>()).fold(f64::INFINITY, f64::min)
}

/// Smallest forward-difference slope of `f` at `theta` along `count` random
/// unit directions.
pub fn min_directional_slope(f: impl Fn(&[f64]) -> f64, theta: &[f64], count: usize, seed: u64) -> f64 {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = f(theta);
    let h = 1e-6;
    (0..count)
        .map(|_| {
            let d: Vec<f64> = (0..theta.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            let moved: Vec<f64> = theta.iter().zip(&d).map(|(t, v)| t + h * v / norm).collect();
            (f(&moved) - base) / h
        })
        .fold(f64::INFINITY, f64::min)
}

/// Noisy, overlapping two-class data in the unit cube.
pub fn noisy_classes(m: usize, seed: u64) -> (Vec<[f64; 5]>, Vec<bool>) {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vec::with_capacity(m);
    let mut y = Vec::with_capacity(m);
    for _ in 0..m {
        let mut r = [0.0; 5];
        for v in r.iter_mut() {
            *v = rng.gen_range(0.0..1.0);
        }
        let score = 2.0 * r[0] - 1.5 * r[2] + 0.5 * r[4] - 0.4 + rng.gen_range(-0.5..0.5);
        x.push(r);
        y.push(score > 0.0);
    }
    (x, y)
}
