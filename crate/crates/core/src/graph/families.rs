//! Named graph families used as fixtures and to rebuild the structured
//! coloring benchmarks (Mycielski, queens, insertions and full insertions).
//!
//! The benchmark constructions reproduce the vertex and edge counts of the
//! published `.col` files (`myciel4`: 23/71, `queen8_8`: 64/728,
//! `2-Insertions_3`: 37/72, `1-FullIns_4`: 93/593). Vertex numbering may
//! differ from the distributed files; the graphs are meant up to isomorphism.

use rand::Rng;

use super::Graph;

pub fn edgeless(n: usize) -> Graph {
    Graph::edgeless(n)
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Outer 5-cycle 0..5, inner pentagram 5..10, spokes `i -- i + 5`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    Graph::from_edges(10, outer.chain(inner).chain(spokes))
}

/// G(n, p): every pair independently with probability `p`.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// `r x r` queen graph: squares attack along rows, columns and diagonals.
pub fn queens(r: usize) -> Graph {
    let n = r * r;
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let (ra, ca) = (a / r, a % r);
            let (rb, cb) = (b / r, b % r);
            if ra == rb || ca == cb || ra.abs_diff(rb) == ca.abs_diff(cb) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Copies `g` into layer 0 and adds `layers` shadow layers; a shadow vertex
/// `u` in layer `l` is joined to every layer `l - 1` copy of a neighbor of `u`.
fn layered_edges(g: &Graph, layers: usize) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    for l in 1..=layers {
        for (u, v) in g.edges() {
            edges.push((l * n + u, (l - 1) * n + v));
            edges.push((l * n + v, (l - 1) * n + u));
        }
    }
    edges
}

/// Generalised Mycielski step with `layers` shadow layers and a root joined
/// to the last layer. One layer is the classical Mycielskian.
pub fn mycielskian(g: &Graph, layers: usize) -> Graph {
    let n = g.n();
    let mut edges = layered_edges(g, layers);
    let root = (layers + 1) * n;
    edges.extend((0..n).map(|u| (layers * n + u, root)));
    Graph::from_edges(root + 1, edges)
}

/// Shadow layers as in [`mycielskian`] plus `layers + 1` apexes forming a
/// clique. Apex 0 is the usual root on the last layer; apex `l >= 1` is
/// joined to shadow layer `l`.
pub fn full_insertion_step(g: &Graph, layers: usize) -> Graph {
    let n = g.n();
    let mut edges = layered_edges(g, layers);
    let base = (layers + 1) * n;
    for a in 0..=layers {
        let target = if a == 0 { layers } else { a };
        edges.extend((0..n).map(|u| (target * n + u, base + a)));
        for b in a + 1..=layers {
            edges.push((base + a, base + b));
        }
    }
    Graph::from_edges(base + layers + 1, edges)
}

/// DIMACS `myciel<k>`: `myciel3` is the Grötzsch graph (11 vertices).
pub fn myciel(k: usize) -> Graph {
    assert!(k >= 2);
    (2..=k).fold(complete(2), |g, _| mycielskian(&g, 1))
}

/// DIMACS `<k>-Insertions_<i>`.
pub fn insertions(k: usize, i: usize) -> Graph {
    assert!(k >= 1 && i >= 2);
    (2..=i).fold(complete(2), |g, _| mycielskian(&g, k + 1))
}

/// DIMACS `<k>-FullIns_<i>`.
pub fn full_insertions(k: usize, i: usize) -> Graph {
    assert!(k >= 1 && i >= 2);
    (2..=i).fold(complete(2), |g, _| full_insertion_step(&g, k + 1))
}

/// Resolves a benchmark name such as `myciel4`, `queen8_8`,
/// `2-Insertions_3` or `1-FullIns_4`, plus the fixtures `petersen`, `C<n>`
/// (cycle) and `K<n>` (complete).
pub fn by_name(name: &str) -> Option<Graph> {
    if name == "petersen" {
        return Some(petersen());
    }
    if let Some(k) = name.strip_prefix('C').and_then(|k| k.parse().ok()) {
        return (k >= 3).then(|| cycle(k));
    }
    if let Some(k) = name.strip_prefix('K').and_then(|k| k.parse().ok()) {
        return (k >= 1).then(|| complete(k));
    }
    if let Some(k) = name.strip_prefix("myciel") {
        return k.parse().ok().filter(|&k| (2..=9).contains(&k)).map(myciel);
    }
    if let Some(rest) = name.strip_prefix("queen") {
        let (a, b) = rest.split_once('_')?;
        let (a, b): (usize, usize) = (a.parse().ok()?, b.parse().ok()?);
        return (a == b && a >= 1).then(|| queens(a));
    }
    let (k, rest) = name.split_once('-')?;
    let k: usize = k.parse().ok().filter(|&k| k >= 1)?;
    if let Some(i) = rest.strip_prefix("Insertions_") {
        return i.parse().ok().filter(|&i| (2..=6).contains(&i)).map(|i| insertions(k, i));
    }
    if let Some(i) = rest.strip_prefix("FullIns_") {
        return i.parse().ok().filter(|&i| (2..=5).contains(&i)).map(|i| full_insertions(k, i));
    }
    None
}
