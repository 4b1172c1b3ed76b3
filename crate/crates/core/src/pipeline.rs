//! End-to-end run: graph, ratios and structure matrix up to the spectrum
//! ([`CdpState`]), then the certificate and metrics for any orthonormal
//! projection ([`CdpState::evaluate`]).

use std::fmt;
use std::str::FromStr;

use crate::cdp::{
    admissible_set, convexity_ratios, nonconvexity_index, project, projected_graph,
    projection_matrix, spectrum, standardize, structure_matrix, AdmissibleSet, PairRecord,
    ProjectionMatrix, Spectrum, StructureMatrix,
};
use crate::certificates::{certify, phi_graph, CertificateRecord, CERT_TOL, DEFAULT_PATH_BUDGET};
use crate::datasets::PointCloud;
use crate::error::{CdpError, Result};
use crate::graph::{giant_component, mutual_knn, ComponentMap, WeightedGraph};
use crate::metrics::{
    all_post_ratios, certificate_coverage, certificate_quantiles, direct_capture,
    fixed_pairs_error, markov_bound, markov_empirical, markov_level, percent,
    reselected_pairs_error, spectral_capture, subspace_capture, MarkovEntry, MetricsReport, PostPair,
    ReportParameters, Reselection,
};
use crate::shortest_paths::{apsp, DistanceMatrix};

/// Values of `a` always listed in the Markov section of a report.
pub const MARKOV_GRID: [f64; 3] = [0.1, 0.25, 0.5];

#[derive(Debug, Clone, PartialEq)]
pub struct CdpConfig {
    pub k_nn: usize,
    pub tau: f64,
    pub k: usize,
    pub standardize: bool,
    pub path_budget: usize,
}

impl Default for CdpConfig {
    fn default() -> Self {
        Self {
            k_nn: 10,
            tau: 0.8,
            k: 2,
            standardize: true,
            path_budget: DEFAULT_PATH_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cdp,
    Pca,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Cdp => "cdp",
            Method::Pca => "pca",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = CdpError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cdp" => Ok(Method::Cdp),
            "pca" => Ok(Method::Pca),
            other => Err(CdpError::InvalidParameter(format!(
                "unknown method `{other}` (expected cdp or pca)"
            ))),
        }
    }
}

/// Everything computed before a projection is chosen.
#[derive(Debug, Clone)]
pub struct CdpState {
    pub config: CdpConfig,
    pub n_input: usize,
    /// Working coordinates: standardized when enabled, restricted to the
    /// giant component.
    pub cloud: PointCloud,
    pub components: ComponentMap,
    pub graph: WeightedGraph,
    pub distances: DistanceMatrix,
    pub pairs: Vec<PairRecord>,
    pub admissible: AdmissibleSet,
    pub c_sp: f64,
    pub structure: StructureMatrix,
    pub spectrum: Spectrum,
    pub warnings: Vec<String>,
}

/// Result of evaluating one projection against a [`CdpState`].
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub method: Method,
    pub v: ProjectionMatrix,
    pub projected: PointCloud,
    pub projected_graph: WeightedGraph,
    pub projected_distances: DistanceMatrix,
    pub certificates: Vec<CertificateRecord>,
    pub post_ratios: Vec<PostPair>,
    pub reselection: Reselection,
    pub report: MetricsReport,
}

impl CdpState {
    /// Standardize, build the mutual k-NN graph, keep its giant component,
    /// compute all-pairs distances, ratios, the admissible set, the
    /// structure matrix and its spectrum.
    pub fn prepare(input: &PointCloud, config: &CdpConfig) -> Result<Self> {
        let d = input.dim();
        if config.k == 0 || config.k > d {
            return Err(CdpError::InvalidParameter(format!(
                "k must satisfy 1 <= k <= d (k = {}, d = {d})",
                config.k
            )));
        }
        let mut warnings = Vec::new();
        let working = if config.standardize {
            standardize(input)?
        } else {
            input.clone()
        };
        let full_graph = mutual_knn(&working, config.k_nn)?;
        let (graph, components) = giant_component(&full_graph);
        let cloud = if components.is_identity() {
            working
        } else {
            let dropped = components.dropped();
            warnings.push(format!(
                "graph disconnected: kept {} of {} points, dropped {:?}",
                components.kept().len(),
                input.len(),
                dropped
            ));
            working.select(components.kept())?
        };
        if cloud.len() < 2 {
            return Err(CdpError::InvalidParameter(
                "giant component has fewer than two points".into(),
            ));
        }

        let distances = apsp(&graph)?;
        let pairs = convexity_ratios(&cloud, &distances)?;
        let admissible = admissible_set(&pairs, config.tau)?;
        let c_sp = nonconvexity_index(&admissible)?;
        let structure = structure_matrix(&admissible, &cloud)?;
        let spectrum = spectrum(&structure)?;
        if spectrum.is_degenerate_at(config.k) {
            warnings.push(format!(
                "degenerate spectrum: lambda_{} = lambda_{}; the projection subspace is not unique",
                config.k,
                config.k + 1
            ));
        }
        Ok(Self {
            config: config.clone(),
            n_input: input.len(),
            cloud,
            components,
            graph,
            distances,
            pairs,
            admissible,
            c_sp,
            structure,
            spectrum,
            warnings,
        })
    }

    /// Top-`k` eigenvectors of the structure matrix.
    pub fn cdp_projection(&self) -> Result<ProjectionMatrix> {
        projection_matrix(&self.spectrum, self.config.k)
    }

    /// Certificates and metrics for `v`, which must be orthonormal of
    /// the working dimension.
    pub fn evaluate(&self, v: &ProjectionMatrix, method: Method) -> Result<Evaluation> {
        self.evaluate_with(v, method, project(&self.cloud, v)?)
    }

    pub(crate) fn evaluate_with(
        &self,
        v: &ProjectionMatrix,
        method: Method,
        projected: PointCloud,
    ) -> Result<Evaluation> {
        let cfg = &self.config;
        let k = v.output_dim();
        let pg = projected_graph(&self.graph, &self.cloud, v)?;
        let pdm = apsp(&pg)?;
        let certificates = certify(&self.admissible, v, &self.cloud, &pdm, cfg.path_budget)?;
        let post_ratios = all_post_ratios(&self.cloud, v, &pdm)?;

        let (c_sp_prime, fixed_error) = fixed_pairs_error(self.c_sp, &certificates)?;
        let reselection = reselected_pairs_error(self.c_sp, &post_ratios, cfg.tau);
        let (q10, q90) = certificate_quantiles(&certificates)?;
        let ratios: Vec<f64> = certificates.iter().map(CertificateRecord::ratio).collect();
        let coverage = certificate_coverage(&ratios, q10, q90);
        let (phi_g, phi_edge) = phi_graph(&self.graph, v, &self.cloud)?;
        let uniform_bound_holds = ratios.iter().all(|&x| x <= 1.0 / phi_g + CERT_TOL);

        // The eigenvalue ratio is only meaningful for the structure matrix's
        // own eigenvectors; other projections use tr(VᵀSV)/tr(S).
        let mu_k = match method {
            Method::Cdp => spectral_capture(&self.spectrum, k)?,
            Method::Pca => subspace_capture(&self.structure, v)?,
        };
        let mu_k_direct = direct_capture(&self.admissible, v, &self.cloud)?;

        let mut a_values: Vec<f64> = MARKOV_GRID.to_vec();
        let a90 = markov_level(mu_k, 0.9);
        if a90 > 0.0 && a90 < 1.0 {
            a_values.push(a90);
        }
        let markov = a_values
            .into_iter()
            .map(|a| {
                Ok(MarkovEntry {
                    a,
                    lower_bound: markov_bound(mu_k, a)?,
                    sqrt_z_threshold: (1.0 - a).sqrt(),
                    empirical: markov_empirical(&self.admissible, v, &self.cloud, a),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut warnings = self.warnings.clone();
        if reselection.c_sp_dprime.is_none() {
            warnings.push(format!(
                "no pair has post-projection ratio <= tau = {}; reselected error undefined",
                cfg.tau
            ));
        }
        let n_holding = certificates.iter().filter(|c| c.holds).count();
        if n_holding < certificates.len() {
            warnings.push(format!(
                "{} certificate(s) violated",
                certificates.len() - n_holding
            ));
        }

        let n = self.cloud.len();
        let report = MetricsReport {
            method: method.name().to_string(),
            n_edges: self.graph.edges().len(),
            n_pairs: n * (n - 1) / 2,
            n_admissible: self.admissible.len(),
            c_sp: self.c_sp,
            c_sp_prime,
            fixed_error,
            fixed_error_percent: percent(fixed_error),
            n_reselected: reselection.pairs.len(),
            c_sp_dprime: reselection.c_sp_dprime,
            reselected_error: reselection.error,
            reselected_error_percent: reselection.error.map(percent),
            q10_psi: q10,
            q90_inv_phi_star: q90,
            n_certified: certificates.len(),
            n_holding,
            mu_k,
            mu_k_direct,
            phi_g,
            phi_g_edge: [phi_edge.0, phi_edge.1],
            uniform_bound_holds,
            eigenvalues: self.spectrum.eigenvalues.clone(),
            warnings,
            parameters: ReportParameters {
                n_input: self.n_input,
                n_kept: n,
                dim: self.cloud.dim(),
                k_nn: cfg.k_nn,
                tau: cfg.tau,
                k,
                standardize: cfg.standardize,
                dropped: self.components.dropped(),
            },
            coverage,
            markov,
        };

        Ok(Evaluation {
            method,
            v: v.clone(),
            projected,
            projected_graph: pg,
            projected_distances: pdm,
            certificates,
            post_ratios,
            reselection,
            report,
        })
    }
}

/// Prepare and evaluate the CDP projection in one call.
pub fn run_cdp(cloud: &PointCloud, config: &CdpConfig) -> Result<(CdpState, Evaluation)> {
    let state = CdpState::prepare(cloud, config)?;
    let v = state.cdp_projection()?;
    let eval = state.evaluate(&v, Method::Cdp)?;
    Ok((state, eval))
}
