//! Detour ratios, admissible pairs, the non-convexity structure matrix and
//! the projection built from its leading eigenvectors.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use rayon::prelude::*;

use crate::datasets::{euclidean, PointCloud};
use crate::error::{CdpError, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{check_symmetric, symmetric_eigen, KahanSum};
use crate::shortest_paths::DistanceMatrix;

/// Eigenvalues in `[-NEG_EIGEN_CLAMP, 0)` are reported as zero.
pub const NEG_EIGEN_CLAMP: f64 = 1e-10;

/// One unordered pair `i < j` with its chord, graph distance and ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub euclid: f64,
    pub sp: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleSet {
    pub tau: f64,
    pub pairs: Vec<PairRecord>,
}

impl AdmissibleSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        let (i, j) = (i.min(j), i.max(j));
        self.pairs.iter().any(|p| p.i == i && p.j == j)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureMatrix(Array2<f64>);

impl StructureMatrix {
    /// Wraps an arbitrary square matrix after checking its symmetry.
    pub fn from_matrix(m: Array2<f64>) -> Result<Self> {
        check_symmetric(&m)?;
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.diag().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Column `l` pairs with `eigenvalues[l]`.
    pub eigenvectors: Array2<f64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// True when the `k`-th and `k+1`-th eigenvalues coincide, so the top-`k`
    /// subspace is not unique.
    pub fn is_degenerate_at(&self, k: usize) -> bool {
        if k == 0 || k >= self.dim() {
            return false;
        }
        let scale = self.eigenvalues[0].abs().max(f64::MIN_POSITIVE);
        (self.eigenvalues[k - 1] - self.eigenvalues[k]).abs() <= 1e-12 * scale
    }
}

/// `d × k` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix(Array2<f64>);

impl ProjectionMatrix {
    /// Accepts any matrix whose columns are orthonormal within `1e-10`.
    pub fn new(v: Array2<f64>) -> Result<Self> {
        let (d, k) = v.dim();
        if k == 0 || k > d {
            return Err(CdpError::InvalidParameter(format!(
                "projection must be d x k with 1 <= k <= d, got {d}x{k}"
            )));
        }
        let gram = v.t().dot(&v);
        let err = gram
            .indexed_iter()
            .map(|((a, b), x)| (x - if a == b { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max);
        if err > 1e-10 {
            return Err(CdpError::InvalidParameter(format!(
                "projection columns are not orthonormal (max |VᵀV - I| = {err:e})"
            )));
        }
        Ok(Self(v))
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn input_dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn output_dim(&self) -> usize {
        self.0.ncols()
    }

    pub fn apply(&self, x: ArrayView1<'_, f64>) -> Array1<f64> {
        self.0.t().dot(&x)
    }

    /// `‖Vᵀx‖`.
    pub fn projected_norm(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.apply(x).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `‖Vᵀ(b - a)‖`.
    pub fn projected_distance(&self, a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
        let diff = &b - &a;
        self.projected_norm(diff.view())
    }

    /// Copy with column `col` negated.
    pub fn flip_column(&self, col: usize) -> Self {
        let mut v = self.0.clone();
        v.column_mut(col).mapv_inplace(|x| -x);
        Self(v)
    }
}

/// Zero mean and unit population standard deviation per coordinate.
pub fn standardize(cloud: &PointCloud) -> Result<PointCloud> {
    let n = cloud.len();
    if n < 2 {
        return Err(CdpError::InvalidParameter(
            "standardization needs at least two points".into(),
        ));
    }
    let mut out = cloud.points().clone();
    for (c, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
        let mean = col.iter().copied().collect::<KahanSum>().value() / n as f64;
        let var = col
            .iter()
            .map(|x| (x - mean) * (x - mean))
            .collect::<KahanSum>()
            .value()
            / n as f64;
        let sd = var.sqrt();
        if sd <= 1e-12 * mean.abs().max(1.0) {
            return Err(CdpError::ZeroVariance { coordinate: c });
        }
        col.mapv_inplace(|x| (x - mean) / sd);
    }
    cloud.with_points(out)
}

/// One record per unordered pair, ordered by `(i, j)`.
pub fn convexity_ratios(cloud: &PointCloud, dm: &DistanceMatrix) -> Result<Vec<PairRecord>> {
    let n = cloud.len();
    if dm.len() != n {
        return Err(CdpError::InvalidParameter(format!(
            "distance matrix covers {} vertices, cloud has {n}",
            dm.len()
        )));
    }
    let rows: Vec<Vec<PairRecord>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| {
                    let euclid = euclidean(cloud.point(i), cloud.point(j));
                    if euclid == 0.0 {
                        return Err(CdpError::DuplicatePoints { i, j });
                    }
                    let sp = dm.get(i, j);
                    Ok(PairRecord {
                        i,
                        j,
                        euclid,
                        sp,
                        r: euclid / sp,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Keeps pairs with `r <= tau`, preserving order.
pub fn admissible_set(records: &[PairRecord], tau: f64) -> Result<AdmissibleSet> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(CdpError::InvalidParameter(format!(
            "tau must lie in (0, 1), got {tau}"
        )));
    }
    let pairs: Vec<PairRecord> = records.iter().copied().filter(|p| p.r <= tau).collect();
    if pairs.is_empty() {
        return Err(CdpError::NoAdmissiblePairs { tau });
    }
    Ok(AdmissibleSet { tau, pairs })
}

/// Mean detour ratio over the admissible pairs.
pub fn nonconvexity_index(ds: &AdmissibleSet) -> Result<f64> {
    if ds.is_empty() {
        return Err(CdpError::NoAdmissiblePairs { tau: ds.tau });
    }
    let sum: KahanSum = ds.pairs.iter().map(|p| p.r).collect();
    Ok(sum.value() / ds.len() as f64)
}

/// Unit chord direction from `p_i` to `p_j`.
pub fn unit_direction(cloud: &PointCloud, i: usize, j: usize) -> Array1<f64> {
    let diff = &cloud.point(j) - &cloud.point(i);
    let norm = diff.iter().map(|x| x * x).sum::<f64>().sqrt();
    diff / norm
}

/// `(1/|D|) Σ (1 − r) u uᵀ` accumulated entrywise in set order.
pub fn structure_matrix(ds: &AdmissibleSet, cloud: &PointCloud) -> Result<StructureMatrix> {
    if ds.is_empty() {
        return Err(CdpError::NoAdmissiblePairs { tau: ds.tau });
    }
    let d = cloud.dim();
    let mut acc = vec![KahanSum::default(); d * d];
    for pair in &ds.pairs {
        let u = unit_direction(cloud, pair.i, pair.j);
        let weight = 1.0 - pair.r;
        for a in 0..d {
            for b in a..d {
                acc[a * d + b].add(weight * u[a] * u[b]);
            }
        }
    }
    let m = ds.len() as f64;
    let mut s = Array2::zeros((d, d));
    for a in 0..d {
        for b in a..d {
            let v = acc[a * d + b].value() / m;
            s[[a, b]] = v;
            s[[b, a]] = v;
        }
    }
    Ok(StructureMatrix(s))
}

/// Full eigendecomposition, descending, with tiny negative eigenvalues
/// clamped to zero.
pub fn spectrum(s: &StructureMatrix) -> Result<Spectrum> {
    let eig = symmetric_eigen(s.matrix())?;
    let eigenvalues = eig
        .values
        .into_iter()
        .map(|l| if (-NEG_EIGEN_CLAMP..0.0).contains(&l) { 0.0 } else { l })
        .collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: eig.vectors,
    })
}

/// The leading `k` eigenvectors.
pub fn projection_matrix(sp: &Spectrum, k: usize) -> Result<ProjectionMatrix> {
    let d = sp.dim();
    if k == 0 || k > d {
        return Err(CdpError::InvalidParameter(format!(
            "k must satisfy 1 <= k <= d (k = {k}, d = {d})"
        )));
    }
    let v = sp.eigenvectors.slice(ndarray::s![.., ..k]).to_owned();
    Ok(ProjectionMatrix(v))
}

/// `p′ = Vᵀ p` for every point.
pub fn project(cloud: &PointCloud, v: &ProjectionMatrix) -> Result<PointCloud> {
    if v.input_dim() != cloud.dim() {
        return Err(CdpError::InvalidParameter(format!(
            "projection expects dimension {}, cloud has {}",
            v.input_dim(),
            cloud.dim()
        )));
    }
    let projected = cloud.points().dot(v.matrix());
    let mut out = PointCloud::new(projected)?;
    if let Some(c) = cloud.color() {
        out = out.with_color(c.to_vec())?;
    }
    if let Some(n) = cloud.names() {
        out = out.with_names(n.to_vec())?;
    }
    Ok(out)
}

/// Same edge set, weights `‖Vᵀ(p_v − p_u)‖`.
pub fn projected_graph(
    g: &WeightedGraph,
    cloud: &PointCloud,
    v: &ProjectionMatrix,
) -> Result<WeightedGraph> {
    if g.n_vertices() != cloud.len() {
        return Err(CdpError::InvalidParameter(
            "graph and cloud disagree on the number of points".into(),
        ));
    }
    let mut collapsed = None;
    let weights: Vec<f64> = g
        .edges()
        .iter()
        .map(|e| {
            let w = v.projected_distance(cloud.point(e.u), cloud.point(e.v));
            if w <= f64::EPSILON * e.w && collapsed.is_none() {
                collapsed = Some((e.u, e.v));
            }
            w
        })
        .collect();
    if let Some((u, v)) = collapsed {
        return Err(CdpError::CollapsedEdge { u, v });
    }
    let mut it = weights.into_iter();
    g.reweighted(|_| it.next().expect("one weight per edge"))
}
