//! Mutual k-nearest-neighbor graphs and giant-component reduction.

use std::collections::VecDeque;
use std::io::Write;

use rayon::prelude::*;

use crate::datasets::{euclidean, PointCloud};
use crate::error::{CdpError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Undirected weighted graph. Each edge is stored once with `u < v`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    /// Builds a graph from an edge list, normalizing each edge to `u < v`.
    ///
    /// Edges are sorted by `(u, v)`; self-loops, duplicates and non-positive
    /// or non-finite weights are rejected.
    pub fn from_edges(n_vertices: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| {
                if e.u < e.v {
                    e
                } else {
                    Edge {
                        u: e.v,
                        v: e.u,
                        w: e.w,
                    }
                }
            })
            .collect();
        edges.sort_by_key(|e| (e.u, e.v));

        for (idx, e) in edges.iter().enumerate() {
            if e.v >= n_vertices {
                return Err(CdpError::InvalidParameter(format!(
                    "edge ({}, {}) references a vertex outside 0..{n_vertices}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(CdpError::InvalidParameter(format!("self-loop at {}", e.u)));
            }
            if !(e.w.is_finite() && e.w > 0.0) {
                return Err(CdpError::InvalidParameter(format!(
                    "edge ({}, {}) has invalid weight {}",
                    e.u, e.v, e.w
                )));
            }
            if idx > 0 && (edges[idx - 1].u, edges[idx - 1].v) == (e.u, e.v) {
                return Err(CdpError::InvalidParameter(format!(
                    "duplicate edge ({}, {})",
                    e.u, e.v
                )));
            }
        }

        let mut adjacency = vec![Vec::new(); n_vertices];
        for e in &edges {
            adjacency[e.u].push((e.v, e.w));
            adjacency[e.v].push((e.u, e.w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }
        Ok(Self {
            n_vertices,
            edges,
            adjacency,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.weight(u, v).is_some()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let list = self.adjacency.get(u)?;
        list.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|pos| list[pos].1)
    }

    /// Same edge set with every weight replaced by `reweight(edge)`.
    pub fn reweighted(&self, mut reweight: impl FnMut(&Edge) -> f64) -> Result<Self> {
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge { w: reweight(e), ..*e })
            .collect();
        Self::from_edges(self.n_vertices, edges)
    }

    /// Connected-component label per vertex, labels numbered in order of
    /// their smallest vertex.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n_vertices];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n_vertices {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adjacency[u] {
                    if label[v] == usize::MAX {
                        label[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().1 <= 1
    }

    /// Writes the edge list as `u,v,w` CSV.
    pub fn write_edges_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "u,v,w")?;
        for e in &self.edges {
            writeln!(out, "{},{},{}", e.u, e.v, e.w)?;
        }
        Ok(())
    }
}

/// Retained vertices after giant-component reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentMap {
    kept: Vec<usize>,
    old_to_new: Vec<Option<usize>>,
}

impl ComponentMap {
    pub fn identity(n: usize) -> Self {
        Self {
            kept: (0..n).collect(),
            old_to_new: (0..n).map(Some).collect(),
        }
    }

    /// Original ids of the retained vertices, ascending.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn new_index(&self, old: usize) -> Option<usize> {
        self.old_to_new.get(old).copied().flatten()
    }

    pub fn original_index(&self, new: usize) -> usize {
        self.kept[new]
    }

    /// Original ids that were removed, ascending.
    pub fn dropped(&self) -> Vec<usize> {
        self.old_to_new
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_none())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.kept.len() == self.old_to_new.len()
    }
}

/// Mutual k-NN graph: `(i, j)` is an edge iff each point is among the other's
/// `k_nn` nearest neighbors. Ties at rank `k_nn` go to the smaller index.
pub fn mutual_knn(cloud: &PointCloud, k_nn: usize) -> Result<WeightedGraph> {
    let n = cloud.len();
    if k_nn == 0 || k_nn >= n {
        return Err(CdpError::InvalidParameter(format!(
            "k_nn must satisfy 1 <= k_nn < N (k_nn = {k_nn}, N = {n})"
        )));
    }

    let neighbor_lists: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = cloud.point(i);
            let mut row: Vec<(usize, f64)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (j, euclidean(p, cloud.point(j))))
                .collect();
            if let Some(&(j, _)) = row.iter().find(|&&(_, d)| d == 0.0) {
                return Err(CdpError::DuplicatePoints {
                    i: i.min(j),
                    j: i.max(j),
                });
            }
            row.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            row.truncate(k_nn);
            row.sort_by_key(|&(j, _)| j);
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut edges = Vec::new();
    for (i, list) in neighbor_lists.iter().enumerate() {
        for &(j, w) in list {
            if i < j
                && neighbor_lists[j]
                    .binary_search_by_key(&i, |&(m, _)| m)
                    .is_ok()
            {
                edges.push(Edge { u: i, v: j, w });
            }
        }
    }
    WeightedGraph::from_edges(n, edges)
}

/// Largest connected component, renumbered in ascending original order.
/// Equal-sized components resolve to the one holding the smallest vertex id.
pub fn giant_component(g: &WeightedGraph) -> (WeightedGraph, ComponentMap) {
    let (labels, count) = g.component_labels();
    if count <= 1 {
        return (g.clone(), ComponentMap::identity(g.n_vertices()));
    }
    let mut sizes = vec![0usize; count];
    for &l in &labels {
        sizes[l] += 1;
    }
    // Labels follow smallest-vertex order, so the first maximum wins ties.
    let best = (0..count)
        .fold(0, |best, l| if sizes[l] > sizes[best] { l } else { best });

    let mut old_to_new = vec![None; g.n_vertices()];
    let mut kept = Vec::with_capacity(sizes[best]);
    for (v, &l) in labels.iter().enumerate() {
        if l == best {
            old_to_new[v] = Some(kept.len());
            kept.push(v);
        }
    }
    let edges = g.edges().iter().filter_map(|e| {
        Some(Edge {
            u: old_to_new[e.u]?,
            v: old_to_new[e.v]?,
            w: e.w,
        })
    });
    let sub = WeightedGraph::from_edges(kept.len(), edges)
        .expect("subgraph of a valid graph is valid");
    (sub, ComponentMap { kept, old_to_new })
}
