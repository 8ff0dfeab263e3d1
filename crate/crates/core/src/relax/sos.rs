//! Numerical positive-semidefiniteness checks of sum-of-squares moment matrices.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;
use crate::rational::{self, Rational};

use super::moments::{subsets_up_to, PseudoMoment};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixDiagnostic {
    /// `"M"` for the moment matrix, `"M^{i,j}"` for an edge matrix.
    pub label: String,
    pub dimension: usize,
    pub min_eigenvalue: f64,
    pub max_abs_entry: f64,
    /// Smallest eigenvalue still accepted: `-tolerance · (1 + max_abs_entry)`.
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SosReport {
    pub passed: bool,
    pub level: usize,
    pub matrices: Vec<MatrixDiagnostic>,
}

impl SosReport {
    pub fn worst(&self) -> Option<&MatrixDiagnostic> {
        self.matrices
            .iter()
            .min_by(|a, b| (a.min_eigenvalue - a.threshold).total_cmp(&(b.min_eigenvalue - b.threshold)))
    }
}

/// Builds `M_t(z) = (z_{I∪J})` over `|I|, |J| ≤ t` and, for every edge `(i, j)`,
/// `M^{ij}_t(z) = (z_{I∪J} - z_{I∪J∪{i}} - z_{I∪J∪{j}})`, then checks each for
/// positive semidefiniteness in floating point. The edge matrices reach
/// subsets of size `2t + 1`, all of which must be present in `z`.
pub fn sos_check(z: &PseudoMoment, t: usize, g: &Graph, tolerance: f64) -> Result<SosReport> {
    let index = subsets_up_to(g.vertex_count(), t);
    let dim = index.len();
    let union_value = |i: usize, j: usize, extra: &[usize]| -> Result<Rational> {
        let mut set = index[i].clone();
        set.extend_from_slice(&index[j]);
        set.extend_from_slice(extra);
        Ok(z.get(&set)?.clone())
    };

    let mut matrices = Vec::new();
    let mut moment = DMatrix::<f64>::zeros(dim, dim);
    for a in 0..dim {
        for b in a..dim {
            let v = rational::to_f64(&union_value(a, b, &[])?);
            moment[(a, b)] = v;
            moment[(b, a)] = v;
        }
    }
    matrices.push(diagnose("M".to_string(), moment, tolerance));

    for &(u, v) in g.edges() {
        let mut slack = DMatrix::<f64>::zeros(dim, dim);
        for a in 0..dim {
            for b in a..dim {
                let value = union_value(a, b, &[])? - union_value(a, b, &[u])? - union_value(a, b, &[v])?;
                let value = rational::to_f64(&value);
                slack[(a, b)] = value;
                slack[(b, a)] = value;
            }
        }
        matrices.push(diagnose(format!("M^{{{u},{v}}}"), slack, tolerance));
    }
    Ok(SosReport {
        passed: matrices.iter().all(|m| m.passed),
        level: t,
        matrices,
    })
}

fn diagnose(label: String, matrix: DMatrix<f64>, tolerance: f64) -> MatrixDiagnostic {
    let dimension = matrix.nrows();
    let max_abs_entry = matrix.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min_eigenvalue = min_eigenvalue(&matrix);
    let threshold = -tolerance * (1.0 + max_abs_entry);
    MatrixDiagnostic {
        label,
        dimension,
        min_eigenvalue,
        max_abs_entry,
        threshold,
        passed: min_eigenvalue >= threshold,
    }
}

/// Smallest eigenvalue of a symmetric matrix. All-zero rows and columns are
/// dropped first (each contributes an exact eigenvalue 0). nalgebra's QR
/// iteration can return non-finite values on matrices with many tiny
/// clustered eigenvalues; those cases are redone with cyclic Jacobi.
fn min_eigenvalue(matrix: &DMatrix<f64>) -> f64 {
    let n = matrix.nrows();
    let keep: Vec<usize> = (0..n).filter(|&a| matrix.row(a).iter().any(|&v| v != 0.0)).collect();
    let zero_floor = if keep.len() < n { 0.0 } else { f64::INFINITY };
    if keep.is_empty() {
        return zero_floor;
    }
    let reduced = DMatrix::from_fn(keep.len(), keep.len(), |a, b| matrix[(keep[a], keep[b])]);
    let eigenvalues = reduced.clone().symmetric_eigenvalues();
    let min = if eigenvalues.iter().all(|v| v.is_finite()) {
        eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        jacobi_eigenvalues(reduced).into_iter().fold(f64::INFINITY, f64::min)
    };
    min.min(zero_floor)
}

fn jacobi_eigenvalues(mut a: DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)] == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}
