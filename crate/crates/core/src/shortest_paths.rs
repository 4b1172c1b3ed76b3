//! Dijkstra with deterministic parent pointers, and all-pairs distances.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{CdpError, Result};
use crate::graph::WeightedGraph;

/// Relative tolerance under which two path lengths count as equal.
pub const DIST_RTOL: f64 = 1e-9;

const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct SsspResult {
    pub source: usize,
    pub dist: Vec<f64>,
    pub parent: Vec<Option<usize>>,
}

#[derive(Copy, Clone, PartialEq)]
struct Frontier {
    dist: f64,
    vertex: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed for a min-heap
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn near_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= DIST_RTOL * a.abs().max(b.abs())
}

/// Runs Dijkstra from `source`, writing into `dist` / `parent`.
fn dijkstra_into(g: &WeightedGraph, source: usize, dist: &mut [f64], parent: &mut [u32]) {
    dist.fill(f64::INFINITY);
    parent.fill(NO_PARENT);
    let mut settled = vec![false; g.n_vertices()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Frontier {
        dist: 0.0,
        vertex: source,
    });

    while let Some(Frontier { dist: d, vertex: u }) = heap.pop() {
        if settled[u] || d > dist[u] {
            continue;
        }
        settled[u] = true;
        for &(v, w) in g.neighbors(u) {
            if settled[v] {
                continue;
            }
            let cand = d + w;
            let current = dist[v];
            if current.is_finite() && near_equal(cand, current) {
                // Tie: the smaller parent id wins, the label keeps the minimum.
                if (u as u32) < parent[v] {
                    parent[v] = u as u32;
                }
                if cand < current {
                    dist[v] = cand;
                    heap.push(Frontier { dist: cand, vertex: v });
                }
            } else if cand < current {
                dist[v] = cand;
                parent[v] = u as u32;
                heap.push(Frontier { dist: cand, vertex: v });
            }
        }
    }
}

pub fn sssp(g: &WeightedGraph, source: usize) -> SsspResult {
    assert!(source < g.n_vertices(), "source {source} out of range");
    let n = g.n_vertices();
    let mut dist = vec![0.0; n];
    let mut parent = vec![NO_PARENT; n];
    dijkstra_into(g, source, &mut dist, &mut parent);
    SsspResult {
        source,
        dist,
        parent: parent.into_iter().map(decode_parent).collect(),
    }
}

fn decode_parent(p: u32) -> Option<usize> {
    (p != NO_PARENT).then_some(p as usize)
}

/// Walks parent pointers from `target` back to the source of the run.
pub fn recover_path(res: &SsspResult, target: usize) -> Result<Vec<usize>> {
    walk_parents(res.source, target, &res.dist, |v| res.parent[v])
}

fn walk_parents(
    source: usize,
    target: usize,
    dist: &[f64],
    parent: impl Fn(usize) -> Option<usize>,
) -> Result<Vec<usize>> {
    if !dist[target].is_finite() {
        return Err(CdpError::Unreachable { from: source, target });
    }
    let mut path = vec![target];
    let mut v = target;
    while v != source {
        v = parent(v).ok_or(CdpError::Unreachable { from: source, target })?;
        path.push(v);
    }
    path.reverse();
    Ok(path)
}

/// All-pairs shortest-path distances plus the per-source parent tables.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<f64>,
    parent: Vec<u32>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn parent(&self, source: usize, v: usize) -> Option<usize> {
        decode_parent(self.parent[source * self.n + v])
    }

    /// Shortest path from `source` to `target` in the source's own tree.
    pub fn path(&self, source: usize, target: usize) -> Result<Vec<usize>> {
        walk_parents(source, target, self.row(source), |v| self.parent(source, v))
    }

    pub fn sssp_result(&self, source: usize) -> SsspResult {
        SsspResult {
            source,
            dist: self.row(source).to_vec(),
            parent: (0..self.n).map(|v| self.parent(source, v)).collect(),
        }
    }
}

/// Dijkstra from every vertex. The graph must be connected.
pub fn apsp(g: &WeightedGraph) -> Result<DistanceMatrix> {
    let n = g.n_vertices();
    if n > NO_PARENT as usize {
        return Err(CdpError::InvalidParameter(format!(
            "graph too large for the parent table ({n} vertices)"
        )));
    }
    let (_, components) = g.component_labels();
    if components > 1 {
        return Err(CdpError::Disconnected { components });
    }
    let mut dist = vec![0.0; n * n];
    let mut parent = vec![NO_PARENT; n * n];
    if n > 0 {
        dist.par_chunks_mut(n)
            .zip(parent.par_chunks_mut(n))
            .enumerate()
            .for_each(|(source, (d, p))| dijkstra_into(g, source, d, p));
    }
    Ok(DistanceMatrix { n, dist, parent })
}
