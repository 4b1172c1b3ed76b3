//! PCA baseline, evaluated under the same certificate and metrics protocol.

use ndarray::{Array2, Axis};

use crate::cdp::ProjectionMatrix;
use crate::datasets::PointCloud;
use crate::error::{CdpError, Result};
use crate::linalg::symmetric_eigen;
use crate::pipeline::{CdpState, Evaluation, Method};

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineResult {
    pub method: Method,
    pub v: ProjectionMatrix,
    /// `Vᵀ(p − mean)` for every point.
    pub projected: PointCloud,
    /// Covariance eigenvalues, descending.
    pub variances: Vec<f64>,
}

impl BaselineResult {
    /// Share of total variance carried by the retained components.
    pub fn explained_variance_ratio(&self) -> f64 {
        let k = self.v.output_dim();
        let total: f64 = self.variances.iter().sum();
        self.variances[..k].iter().sum::<f64>() / total
    }
}

/// Sample covariance `XᵀX / (N − 1)` of the centered points.
pub fn covariance(cloud: &PointCloud) -> Result<Array2<f64>> {
    let n = cloud.len();
    if n < 2 {
        return Err(CdpError::InvalidParameter(
            "covariance needs at least two points".into(),
        ));
    }
    let mean = cloud.points().mean_axis(Axis(0)).expect("non-empty cloud");
    let centered = cloud.points() - &mean;
    Ok(centered.t().dot(&centered) / (n as f64 - 1.0))
}

pub fn pca_fit(cloud: &PointCloud, k: usize) -> Result<BaselineResult> {
    let d = cloud.dim();
    if k == 0 || k > d {
        return Err(CdpError::InvalidParameter(format!(
            "k must satisfy 1 <= k <= d (k = {k}, d = {d})"
        )));
    }
    let cov = covariance(cloud)?;
    let eig = symmetric_eigen(&cov)?;
    let v = ProjectionMatrix::new(eig.vectors.slice(ndarray::s![.., ..k]).to_owned())?;

    let mean = cloud.points().mean_axis(Axis(0)).expect("non-empty cloud");
    let coords = (cloud.points() - &mean).dot(v.matrix());
    let mut projected = PointCloud::new(coords)?;
    if let Some(c) = cloud.color() {
        projected = projected.with_color(c.to_vec())?;
    }
    if let Some(names) = cloud.names() {
        projected = projected.with_names(names.to_vec())?;
    }
    Ok(BaselineResult {
        method: Method::Pca,
        v,
        projected,
        variances: eig.values,
    })
}

/// Runs the full metrics protocol with the baseline's `V`.
pub fn evaluate_baseline(result: &BaselineResult, state: &CdpState) -> Result<Evaluation> {
    state.evaluate_with(&result.v, result.method, result.projected.clone())
}
