//! Small dense helpers: cyclic Jacobi eigensolver and Kahan summation.

use ndarray::Array2;

use crate::error::{CdpError, Result};

/// Symmetry tolerance relative to the largest absolute entry (floored at 1).
pub const SYMMETRY_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

/// Kahan-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Largest `|a_ij - a_ji|`.
pub fn asymmetry(m: &Array2<f64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[[i, j]] - m[[j, i]]).abs());
        }
    }
    worst
}

pub fn check_symmetric(m: &Array2<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(CdpError::InvalidParameter(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = m.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    let asym = asymmetry(m);
    if asym > SYMMETRY_TOL * scale || !asym.is_finite() {
        return Err(CdpError::NonSymmetric { asymmetry: asym });
    }
    Ok(())
}

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns. Each column is signed so its largest-magnitude entry is positive
/// (first such entry on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
}

/// Cyclic Jacobi rotations on a symmetric matrix.
pub fn symmetric_eigen(m: &Array2<f64>) -> Result<SymmetricEigen> {
    check_symmetric(m)?;
    let n = m.nrows();
    // symmetrize so the rotations see an exactly symmetric matrix
    let mut a = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (m[[i, j]] + m[[j, i]]));
    let mut v = Array2::<f64>::eye(n);

    let total: f64 = a.iter().map(|x| x * x).sum();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[[i, j]] * a[[i, j]])
            .sum();
        if off <= f64::EPSILON * f64::EPSILON * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[[y, y]].total_cmp(&a[[x, x]]).then(x.cmp(&y)));
    let values = order.iter().map(|&i| a[[i, i]]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        let mut column = v.column(src).to_owned();
        let lead = column
            .iter()
            .enumerate()
            .fold((0, 0.0_f64), |best, (i, x)| {
                if x.abs() > best.1.abs() {
                    (i, *x)
                } else {
                    best
                }
            });
        if lead.1 < 0.0 {
            column.mapv_inplace(|x| -x);
        }
        vectors.column_mut(col).assign(&column);
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Applies the rotation `J(p, q)` as `A <- Jᵀ A J`, `V <- V J`.
fn rotate(a: &mut Array2<f64>, v: &mut Array2<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = a.nrows();
    for k in 0..n {
        let akp = a[[k, p]];
        let akq = a[[k, q]];
        a[[k, p]] = c * akp - s * akq;
        a[[k, q]] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[[p, k]];
        let aqk = a[[q, k]];
        a[[p, k]] = c * apk - s * aqk;
        a[[q, k]] = s * apk + c * aqk;
    }
    a[[p, q]] = 0.0;
    a[[q, p]] = 0.0;
    for k in 0..n {
        let vkp = v[[k, p]];
        let vkq = v[[k, q]];
        v[[k, p]] = c * vkp - s * vkq;
        v[[k, q]] = s * vkp + c * vkq;
    }
}
