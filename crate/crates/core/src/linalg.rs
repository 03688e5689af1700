//! Small dense linear-algebra helpers shared by the editors.
//!
//! Model tensors live in `ndarray`; factorizations (Cholesky, SVD) are
//! delegated to `nalgebra` behind these conversion shims.

use ndarray::{Array1, Array2};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not positive definite (Cholesky failed); {hint}")]
    NotPositiveDefinite { hint: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

fn to_nalgebra(a: &Array2<f64>) -> nalgebra::DMatrix<f64> {
    let (r, c) = a.dim();
    nalgebra::DMatrix::from_fn(r, c, |i, j| a[[i, j]])
}

fn from_nalgebra(a: &nalgebra::DMatrix<f64>) -> Array2<f64> {
    Array2::from_shape_fn((a.nrows(), a.ncols()), |(i, j)| a[(i, j)])
}

/// Solve `A X = B` for symmetric positive-definite `A` via Cholesky.
pub fn solve_spd(a: &Array2<f64>, b: &Array2<f64>) -> Result<Array2<f64>, LinalgError> {
    if a.nrows() != a.ncols() || a.nrows() != b.nrows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "solve_spd: A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let chol = nalgebra::Cholesky::new(to_nalgebra(a)).ok_or_else(|| {
        LinalgError::NotPositiveDefinite {
            hint: "increase the covariance ridge".to_string(),
        }
    })?;
    Ok(from_nalgebra(&chol.solve(&to_nalgebra(b))))
}

/// Solve `A x = b` for SPD `A` with a vector right-hand side.
pub fn solve_spd_vec(a: &Array2<f64>, b: &Array1<f64>) -> Result<Array1<f64>, LinalgError> {
    let b2 = b
        .clone()
        .into_shape_with_order((b.len(), 1))
        .expect("vector reshape");
    let x = solve_spd(a, &b2)?;
    Ok(x.column(0).to_owned())
}

/// Thin SVD: returns `(U, sigma, V^T)` with `U` of shape `rows x min(rows, cols)`.
pub fn thin_svd(a: &Array2<f64>) -> (Array2<f64>, Array1<f64>, Array2<f64>) {
    let svd = to_nalgebra(a).svd(true, true);
    let u = from_nalgebra(&svd.u.expect("svd requested u"));
    let vt = from_nalgebra(&svd.v_t.expect("svd requested v_t"));
    let s = Array1::from_iter(svd.singular_values.iter().copied());
    (u, s, vt)
}

/// Frobenius norm.
pub fn fro_norm(a: &Array2<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Outer product `u v^T`.
pub fn outer(u: &Array1<f64>, v: &Array1<f64>) -> Array2<f64> {
    let mut out = Array2::zeros((u.len(), v.len()));
    for (i, &ui) in u.iter().enumerate() {
        for (j, &vj) in v.iter().enumerate() {
            out[[i, j]] = ui * vj;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn solve_spd_identity() {
        let a = Array2::eye(3) * 2.0;
        let b = Array2::eye(3);
        let x = solve_spd(&a, &b).unwrap();
        assert!((x[[0, 0]] - 0.5).abs() < 1e-12);
        assert!((x[[0, 1]]).abs() < 1e-12);
    }

    #[test]
    fn solve_spd_rejects_indefinite() {
        let a = array![[1.0, 2.0], [2.0, 1.0]]; // eigenvalues 3, -1
        let b = Array2::eye(2);
        assert!(matches!(
            solve_spd(&a, &b),
            Err(LinalgError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn thin_svd_reconstructs() {
        let a = array![[3.0, 1.0], [1.0, 3.0], [0.5, -0.5]];
        let (u, s, vt) = thin_svd(&a);
        let sm = Array2::from_diag(&s);
        let rec = u.dot(&sm).dot(&vt);
        for (x, y) in a.iter().zip(rec.iter()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn outer_matches_manual() {
        let u = array![1.0, 2.0];
        let v = array![3.0, 4.0, 5.0];
        let o = outer(&u, &v);
        assert_eq!(o[[1, 2]], 10.0);
        assert_eq!(o.dim(), (2, 3));
    }
}
