//! The 2R-proximity graph, the pruning pass, and the greedy independent set.

use crate::hypgeo::{dist_unchecked, HPoint};
use crate::error::{Error, Result};

/// Numerical slack on the `d <= 2R` edge rule, so pairs constructed at
/// exactly 2R land on the closed (adjacent) side of the tie.
pub const EDGE_SLACK: f64 = 1e-12;

/// Vertex list plus adjacency under `0 < d(p_i, p_j) <= 2R`.
#[derive(Clone, Debug)]
pub struct GeometricGraph {
    points: Vec<HPoint>,
    adj: Vec<Vec<u32>>,
    radius: f64,
}

impl GeometricGraph {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[HPoint] {
        &self.points
    }

    /// The packing radius R (edges join points within 2R).
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Subgraph induced by `keep` (indices into this graph), re-indexed in
    /// the order given.
    pub fn induced(&self, keep: &[u32]) -> GeometricGraph {
        let mut map = vec![u32::MAX; self.points.len()];
        for (new, &old) in keep.iter().enumerate() {
            map[old as usize] = new as u32;
        }
        let points = keep
            .iter()
            .map(|&old| self.points[old as usize].clone())
            .collect();
        let adj = keep
            .iter()
            .map(|&old| {
                let mut row: Vec<u32> = self.adj[old as usize]
                    .iter()
                    .filter_map(|&nb| {
                        let new = map[nb as usize];
                        (new != u32::MAX).then_some(new)
                    })
                    .collect();
                row.sort_unstable();
                row
            })
            .collect();
        GeometricGraph {
            points,
            adj,
            radius: self.radius,
        }
    }
}

/// Exact all-pairs construction (quadratic; intended for n <= 1e5).
/// Edge rule: `0 < d <= 2R` with [`EDGE_SLACK`] absorbing roundoff at the
/// closed boundary. Adjacency lists come out sorted.
pub fn build_graph(points: Vec<HPoint>, radius: f64) -> Result<GeometricGraph> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("R must be > 0, got {radius}")));
    }
    if let Some(first) = points.first() {
        if points.iter().any(|p| p.dim() != first.dim()) {
            return Err(Error::Dimension("mixed point dimensions".into()));
        }
    }
    let n = points.len();
    let cutoff = 2.0 * radius + EDGE_SLACK;
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = dist_unchecked(&points[i], &points[j]);
            if d > 0.0 && d <= cutoff {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    // i < j insertion order already leaves each list sorted; keep the
    // invariant explicit anyway.
    for row in adj.iter_mut() {
        row.sort_unstable();
    }
    Ok(GeometricGraph {
        points,
        adj,
        radius,
    })
}

/// Result of the pruning pass. The two pruned sets are disjoint: a vertex
/// caught by both conditions is reported under the degree condition.
#[derive(Clone, Debug, Default)]
pub struct PruneOutcome {
    pub survivors: Vec<u32>,
    pub pruned_degree: Vec<u32>,
    pub pruned_codegree: Vec<u32>,
}

/// Single-pass pruning against the original point set.
///
/// A vertex x is removed iff
///  * its closed 2R-ball count (neighbors plus itself) reaches `degree_cap`, or
///  * some other point y (any process point, not only a neighbor) has
///    `|X cap B_2R(x) cap B_2R(y)| >= codegree_cap`.
///
/// Both counts are evaluated against the original set X in one pass, not
/// iterated to a fixed point. Pairs further than 4R apart are skipped: their
/// 2R-balls cannot intersect.
pub fn prune_bad(graph: &GeometricGraph, degree_cap: f64, codegree_cap: f64) -> PruneOutcome {
    let n = graph.n();
    let words = n.div_ceil(64);
    // Closed 2R-ball membership rows over the original set.
    let mut rows = vec![0u64; n * words];
    for i in 0..n {
        let row = &mut rows[i * words..(i + 1) * words];
        row[i / 64] |= 1u64 << (i % 64);
        for &j in graph.neighbors(i) {
            let j = j as usize;
            row[j / 64] |= 1u64 << (j % 64);
        }
    }
    let closed_count = |i: usize| -> u32 {
        rows[i * words..(i + 1) * words]
            .iter()
            .map(|w| w.count_ones())
            .sum()
    };

    let mut bad_degree = vec![false; n];
    for (i, flag) in bad_degree.iter_mut().enumerate() {
        *flag = closed_count(i) as f64 >= degree_cap;
    }

    let mut bad_codegree = vec![false; n];
    let pair_cutoff = 4.0 * graph.radius() + EDGE_SLACK;
    for i in 0..n {
        for j in (i + 1)..n {
            if bad_codegree[i] && bad_codegree[j] {
                continue;
            }
            let d = dist_unchecked(&graph.points()[i], &graph.points()[j]);
            if d > pair_cutoff {
                continue;
            }
            let common: u32 = rows[i * words..(i + 1) * words]
                .iter()
                .zip(&rows[j * words..(j + 1) * words])
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if common as f64 >= codegree_cap {
                bad_codegree[i] = true;
                bad_codegree[j] = true;
            }
        }
    }

    let mut out = PruneOutcome::default();
    for i in 0..n {
        if bad_degree[i] {
            out.pruned_degree.push(i as u32);
        } else if bad_codegree[i] {
            out.pruned_codegree.push(i as u32);
        } else {
            out.survivors.push(i as u32);
        }
    }
    out
}

/// Minimum-degree greedy independent set: repeatedly take the vertex of
/// minimum residual degree (lowest index on ties) and delete its closed
/// neighborhood. The output size is at least `n / (max_degree + 1)`.
pub fn independent_set(graph: &GeometricGraph) -> Vec<u32> {
    let n = graph.n();
    let mut alive = vec![true; n];
    let mut residual: Vec<usize> = (0..n).map(|i| graph.degree(i)).collect();
    let mut remaining = n;
    let mut picked = Vec::new();
    while remaining > 0 {
        let mut best = usize::MAX;
        let mut best_deg = usize::MAX;
        for i in 0..n {
            if alive[i] && residual[i] < best_deg {
                best = i;
                best_deg = residual[i];
            }
        }
        let v = best;
        picked.push(v as u32);
        // Remove the closed neighborhood of v.
        let mut removed = vec![v];
        for &nb in graph.neighbors(v) {
            if alive[nb as usize] {
                removed.push(nb as usize);
            }
        }
        for &w in &removed {
            alive[w] = false;
            remaining -= 1;
        }
        for &w in &removed {
            for &x in graph.neighbors(w) {
                let x = x as usize;
                if alive[x] {
                    residual[x] -= 1;
                }
            }
        }
    }
    picked
}
