//! Post-projection detour ratios and the per-pair distortion certificate
//! `ψ ≤ r̃/r ≤ 1/φ*`, plus the graph-wide constant `φ_G`.

use std::io::Write;

use rayon::prelude::*;

use crate::cdp::{AdmissibleSet, ProjectionMatrix};
use crate::datasets::{euclidean, PointCloud};
use crate::error::{CdpError, Result};
use crate::graph::WeightedGraph;
use crate::shortest_paths::DistanceMatrix;

/// Slack allowed on both sides of the certificate inequality.
pub const CERT_TOL: f64 = 1e-9;

/// Default cap on the total number of path vertices kept in memory.
pub const DEFAULT_PATH_BUDGET: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateRecord {
    pub i: usize,
    pub j: usize,
    pub r: f64,
    pub r_tilde: f64,
    pub psi: f64,
    pub phi_star: f64,
    /// Projected shortest path from `i` to `j`; `None` once the path budget
    /// is spent (recover it with [`CertificateRecord::path_in`]).
    pub path: Option<Vec<usize>>,
    pub holds: bool,
}

impl CertificateRecord {
    pub fn ratio(&self) -> f64 {
        self.r_tilde / self.r
    }

    pub fn inv_phi_star(&self) -> f64 {
        1.0 / self.phi_star
    }

    pub fn path_in(&self, projected_dm: &DistanceMatrix) -> Result<Vec<usize>> {
        match &self.path {
            Some(p) => Ok(p.clone()),
            None => projected_dm.path(self.i, self.j),
        }
    }
}

/// Whether `psi ≤ ratio ≤ 1/phi_star` holds within [`CERT_TOL`].
pub fn sandwich_holds(psi: f64, ratio: f64, phi_star: f64) -> bool {
    psi - CERT_TOL <= ratio && ratio <= 1.0 / phi_star + CERT_TOL
}

/// `‖Vᵀ(p_j − p_i)‖ / S̃(i, j)` on the projected graph.
pub fn post_ratio(
    i: usize,
    j: usize,
    v: &ProjectionMatrix,
    projected_dm: &DistanceMatrix,
    cloud: &PointCloud,
) -> Result<f64> {
    let sp = projected_dm.get(i, j);
    if sp <= 0.0 {
        return Err(CdpError::CollapsedEdge { u: i, v: j });
    }
    Ok(v.projected_distance(cloud.point(i), cloud.point(j)) / sp)
}

/// `‖Vᵀ u_ij‖` for the unit chord `u_ij`.
pub fn psi(i: usize, j: usize, v: &ProjectionMatrix, cloud: &PointCloud) -> f64 {
    let (a, b) = (cloud.point(i), cloud.point(j));
    v.projected_distance(a, b) / euclidean(a, b)
}

/// Fraction of an edge's original length that survives the projection.
pub fn edge_capture(u: usize, w: usize, v: &ProjectionMatrix, cloud: &PointCloud) -> f64 {
    psi(u, w, v, cloud)
}

/// Minimum edge capture along a vertex path (1 for a single vertex).
pub fn path_capture(path: &[usize], v: &ProjectionMatrix, cloud: &PointCloud) -> f64 {
    path.windows(2)
        .map(|e| edge_capture(e[0], e[1], v, cloud))
        .fold(1.0, f64::min)
}

/// Recovers the projected shortest path `i → j` and its minimum edge capture.
pub fn phi_star(
    i: usize,
    j: usize,
    v: &ProjectionMatrix,
    cloud: &PointCloud,
    projected_dm: &DistanceMatrix,
) -> Result<(f64, Vec<usize>)> {
    let path = projected_dm.path(i, j)?;
    Ok((path_capture(&path, v, cloud), path))
}

/// `min_e ‖Vᵀe‖/‖e‖` over all graph edges, with the minimizing edge.
pub fn phi_graph(
    g: &WeightedGraph,
    v: &ProjectionMatrix,
    cloud: &PointCloud,
) -> Result<(f64, (usize, usize))> {
    g.edges()
        .iter()
        .map(|e| (edge_capture(e.u, e.v, v, cloud), (e.u, e.v)))
        .fold(None, |best: Option<(f64, (usize, usize))>, cur| match best {
            Some(b) if b.0 <= cur.0 => Some(b),
            _ => Some(cur),
        })
        .ok_or_else(|| CdpError::InvalidParameter("graph has no edges".into()))
}

/// Certificate for every admissible pair, in set order.
pub fn certify(
    ds: &AdmissibleSet,
    v: &ProjectionMatrix,
    cloud: &PointCloud,
    projected_dm: &DistanceMatrix,
    path_budget: usize,
) -> Result<Vec<CertificateRecord>> {
    let mut records: Vec<CertificateRecord> = ds
        .pairs
        .par_iter()
        .map(|p| {
            let r_tilde = post_ratio(p.i, p.j, v, projected_dm, cloud)?;
            let psi = psi(p.i, p.j, v, cloud);
            let (phi_star, path) = phi_star(p.i, p.j, v, cloud, projected_dm)?;
            Ok(CertificateRecord {
                i: p.i,
                j: p.j,
                r: p.r,
                r_tilde,
                psi,
                phi_star,
                path: Some(path),
                holds: sandwich_holds(psi, r_tilde / p.r, phi_star),
            })
        })
        .collect::<Result<_>>()?;

    let mut stored = 0usize;
    for rec in &mut records {
        let len = rec.path.as_ref().map_or(0, Vec::len);
        if stored + len > path_budget {
            rec.path = None;
        } else {
            stored += len;
        }
    }
    Ok(records)
}

pub const CERTIFICATE_HEADER: &str = "i,j,psi,phi_star,inv_phi_star,r,r_tilde,ratio,path";

/// Table with one row per certificate; labels come from `cloud`, paths are
/// joined with `>`.
pub fn write_certificates_csv(
    records: &[CertificateRecord],
    cloud: &PointCloud,
    projected_dm: &DistanceMatrix,
    out: &mut impl Write,
) -> Result<()> {
    writeln!(out, "{CERTIFICATE_HEADER}")?;
    for rec in records {
        let path = rec.path_in(projected_dm)?;
        let path: Vec<String> = path.iter().map(|&v| cloud.label(v)).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            cloud.label(rec.i),
            cloud.label(rec.j),
            rec.psi,
            rec.phi_star,
            rec.inv_phi_star(),
            rec.r,
            rec.r_tilde,
            rec.ratio(),
            path.join(">")
        )?;
    }
    Ok(())
}
