//! Full-spectrum and small dense eigenproblems backed by `nalgebra`.

use nalgebra::DMatrix;

use super::matrix::SymMatrix;

/// All eigenvalues of `a`, descending. Householder tridiagonalization plus
/// implicit QR, `O(n³)`; practical up to a few thousand.
pub fn full_spectrum(a: &SymMatrix) -> Vec<f64> {
    let n = a.n();
    if n == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_row_slice(n, n, a.as_slice());
    let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Eigenpairs of a small symmetric row-major `m × m` matrix, values
/// descending; vectors returned row-major with eigenvector `j` in column `j`.
pub(crate) fn small_symmetric_eigen(t: &[f64], m: usize) -> (Vec<f64>, Vec<f64>) {
    let mat = DMatrix::from_fn(m, m, |i, j| 0.5 * (t[i * m + j] + t[j * m + i]));
    let eig = mat.symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = vec![0.0; m * m];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..m {
            vectors[row * m + col] = eig.eigenvectors[(row, src)];
        }
    }
    (values, vectors)
}
