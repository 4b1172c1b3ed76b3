//! Verification metrics: detour-index errors, certificate quantiles,
//! spectral capture and the Markov lower-quantile bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cdp::{unit_direction, AdmissibleSet, ProjectionMatrix, Spectrum, StructureMatrix};
use crate::certificates::{post_ratio, CertificateRecord};
use crate::datasets::PointCloud;
use crate::error::{CdpError, Result};
use crate::linalg::KahanSum;
use crate::shortest_paths::DistanceMatrix;

/// Post-projection ratio of one unordered pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostPair {
    pub i: usize,
    pub j: usize,
    pub r_tilde: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reselection {
    pub pairs: Vec<(usize, usize)>,
    /// `None` when no pair passes the threshold.
    pub c_sp_dprime: Option<f64>,
    pub error: Option<f64>,
}

/// One-sided and joint fractions of pairs inside the quantile sandwich.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coverage {
    pub lower: f64,
    pub upper: f64,
    pub joint: f64,
}

fn relative_error(reference: f64, value: f64) -> f64 {
    (reference - value).abs() / reference
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut acc = KahanSum::default();
    let mut n = 0usize;
    for v in values {
        acc.add(v);
        n += 1;
    }
    (n > 0).then(|| acc.value() / n as f64)
}

/// Mean `r̃` over the original admissible pairs and its relative deviation
/// from `c_sp`.
pub fn fixed_pairs_error(c_sp: f64, certs: &[CertificateRecord]) -> Result<(f64, f64)> {
    let c_prime = mean(certs.iter().map(|c| c.r_tilde))
        .ok_or(CdpError::InvalidParameter("no certificates".into()))?;
    Ok((c_prime, relative_error(c_sp, c_prime)))
}

/// `r̃` for every unordered pair on the projected graph, ordered by `(i, j)`.
pub fn all_post_ratios(
    cloud: &PointCloud,
    v: &ProjectionMatrix,
    projected_dm: &DistanceMatrix,
) -> Result<Vec<PostPair>> {
    let n = cloud.len();
    let rows: Vec<Vec<PostPair>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| {
                    Ok(PostPair {
                        i,
                        j,
                        r_tilde: post_ratio(i, j, v, projected_dm, cloud)?,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Re-thresholds all post-projection ratios at `tau`.
pub fn reselected_pairs_error(c_sp: f64, post: &[PostPair], tau: f64) -> Reselection {
    let chosen: Vec<&PostPair> = post.iter().filter(|p| p.r_tilde <= tau).collect();
    let c_sp_dprime = mean(chosen.iter().map(|p| p.r_tilde));
    Reselection {
        pairs: chosen.iter().map(|p| (p.i, p.j)).collect(),
        c_sp_dprime,
        error: c_sp_dprime.map(|c| relative_error(c_sp, c)),
    }
}

/// Nearest-rank quantile `x_(⌈p·n⌉)` of unsorted values.
pub fn nearest_rank(values: &[f64], p: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

/// `(q_0.10(ψ), q_0.90(1/φ*))`.
pub fn certificate_quantiles(certs: &[CertificateRecord]) -> Result<(f64, f64)> {
    let psi: Vec<f64> = certs.iter().map(|c| c.psi).collect();
    let inv: Vec<f64> = certs.iter().map(|c| c.inv_phi_star()).collect();
    match (nearest_rank(&psi, 0.10), nearest_rank(&inv, 0.90)) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(CdpError::InvalidParameter("no certificates".into())),
    }
}

/// How many pairs have `r̃/r` above `q10`, below `q90`, and both.
pub fn certificate_coverage(ratios: &[f64], q10: f64, q90: f64) -> Coverage {
    let n = ratios.len().max(1) as f64;
    let count = |f: &dyn Fn(f64) -> bool| ratios.iter().filter(|&&x| f(x)).count() as f64 / n;
    Coverage {
        lower: count(&|x| x >= q10),
        upper: count(&|x| x <= q90),
        joint: count(&|x| x >= q10 && x <= q90),
    }
}

/// `Σ_{l≤k} λ_l / Σ_l λ_l`.
pub fn spectral_capture(sp: &Spectrum, k: usize) -> Result<f64> {
    if k == 0 || k > sp.dim() {
        return Err(CdpError::InvalidParameter(format!(
            "k must satisfy 1 <= k <= d (k = {k}, d = {})",
            sp.dim()
        )));
    }
    let total: f64 = sp.eigenvalues.iter().sum();
    if total <= 0.0 {
        return Err(CdpError::ZeroSpectrum);
    }
    let top: f64 = sp.eigenvalues[..k].iter().sum();
    Ok(top / total)
}

/// `tr(VᵀSV) / tr(S)`: the capture of an arbitrary orthonormal `V`.
pub fn subspace_capture(s: &StructureMatrix, v: &ProjectionMatrix) -> Result<f64> {
    let total = s.trace();
    if total <= 0.0 {
        return Err(CdpError::ZeroSpectrum);
    }
    let vm = v.matrix();
    let captured = vm.t().dot(s.matrix()).dot(vm).diag().sum();
    Ok(captured / total)
}

/// `Z = ‖Vᵀu‖²` and weight `1 − r` per admissible pair.
fn weighted_energies(ds: &AdmissibleSet, v: &ProjectionMatrix, cloud: &PointCloud) -> Vec<(f64, f64)> {
    ds.pairs
        .iter()
        .map(|p| {
            let u = unit_direction(cloud, p.i, p.j);
            let z = v.projected_norm(u.view()).powi(2);
            (1.0 - p.r, z)
        })
        .collect()
}

/// `E[‖VᵀU‖²]` with `U = u_ij` drawn with probability `∝ 1 − r_ij`,
/// evaluated pair by pair.
pub fn direct_capture(ds: &AdmissibleSet, v: &ProjectionMatrix, cloud: &PointCloud) -> Result<f64> {
    let energies = weighted_energies(ds, v, cloud);
    let mass: KahanSum = energies.iter().map(|(w, _)| *w).collect();
    if mass.value() <= 0.0 {
        return Err(CdpError::ZeroSpectrum);
    }
    let num: KahanSum = energies.iter().map(|(w, z)| w * z).collect();
    Ok(num.value() / mass.value())
}

/// Weighted probability that `Z ≥ 1 − a`, by exhaustive enumeration.
pub fn markov_empirical(
    ds: &AdmissibleSet,
    v: &ProjectionMatrix,
    cloud: &PointCloud,
    a: f64,
) -> f64 {
    let energies = weighted_energies(ds, v, cloud);
    let mass: KahanSum = energies.iter().map(|(w, _)| *w).collect();
    let hit: KahanSum = energies
        .iter()
        .filter(|(_, z)| *z >= 1.0 - a)
        .map(|(w, _)| *w)
        .collect();
    if mass.value() <= 0.0 {
        return 1.0;
    }
    hit.value() / mass.value()
}

/// Lower bound on `P{Z ≥ 1 − a}`, clamped at zero.
pub fn markov_bound(mu_k: f64, a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(CdpError::InvalidParameter(format!(
            "a must lie in (0, 1), got {a}"
        )));
    }
    Ok((1.0 - (1.0 - mu_k) / a).max(0.0))
}

/// `a` for which the Markov bound equals `level` (e.g. 0.9).
pub fn markov_level(mu_k: f64, level: f64) -> f64 {
    (1.0 - mu_k) / (1.0 - level)
}

/// Percentage with two decimals, halves rounded away from zero.
pub fn percent(fraction: f64) -> String {
    let hundredths = (fraction * 10_000.0).round() / 100.0;
    format!("{hundredths:.2}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovEntry {
    pub a: f64,
    pub lower_bound: f64,
    pub sqrt_z_threshold: f64,
    pub empirical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportParameters {
    pub n_input: usize,
    pub n_kept: usize,
    pub dim: usize,
    pub k_nn: usize,
    pub tau: f64,
    pub k: usize,
    pub standardize: bool,
    pub dropped: Vec<usize>,
}

/// Everything the verification protocol reports for one projection.
///
/// Serialized as TOML; field order is the declaration order below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsReport {
    pub method: String,
    pub n_edges: usize,
    pub n_pairs: usize,
    pub n_admissible: usize,
    pub c_sp: f64,
    pub c_sp_prime: f64,
    pub fixed_error: f64,
    pub fixed_error_percent: String,
    pub n_reselected: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c_sp_dprime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reselected_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reselected_error_percent: Option<String>,
    pub q10_psi: f64,
    pub q90_inv_phi_star: f64,
    pub n_certified: usize,
    pub n_holding: usize,
    pub mu_k: f64,
    pub mu_k_direct: f64,
    pub phi_g: f64,
    pub phi_g_edge: [usize; 2],
    pub uniform_bound_holds: bool,
    pub eigenvalues: Vec<f64>,
    pub warnings: Vec<String>,
    pub parameters: ReportParameters,
    pub coverage: Coverage,
    pub markov: Vec<MarkovEntry>,
}

impl MetricsReport {
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("report serializes")
    }

    /// Parses and validates a report document against the schema.
    pub fn from_text(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// The quantile sandwich in its printed form.
    pub fn quantile_line(&self) -> String {
        quantile_line(self.q10_psi, self.q90_inv_phi_star)
    }
}

pub fn quantile_line(q10: f64, q90: f64) -> String {
    format!("q10(psi)={q10:.4} ≤ r̃/r ≤ q90(1/phi*)={q90:.4} for ≥90% of pairs per side")
}
