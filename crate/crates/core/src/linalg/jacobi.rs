//! Cyclic Jacobi eigensolver, kept as the independent dense oracle.

use super::matrix::{Block, SymMatrix};
use crate::error::{Error, Result};

/// Largest dimension accepted by [`dense_eig_oracle`].
pub const ORACLE_MAX_N: usize = 512;

/// Off-diagonal Frobenius mass at which the sweeps stop, relative to `‖A‖_F`.
pub const ORACLE_OFF_DIAGONAL_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Full eigendecomposition with eigenvalues sorted descending and the
/// matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct DenseEigen {
    pub values: Vec<f64>,
    pub vectors: Block,
}

/// Full spectrum of `a` by cyclic Jacobi rotations. Refuses `n > 512`.
pub fn dense_eig_oracle(a: &SymMatrix) -> Result<DenseEigen> {
    if a.n() > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            operation: "dense_eig_oracle",
            n: a.n(),
            limit: ORACLE_MAX_N,
        });
    }
    Ok(jacobi(a))
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[i * n + j] * m[i * n + j];
            }
        }
    }
    s.sqrt()
}

fn jacobi(a: &SymMatrix) -> DenseEigen {
    let n = a.n();
    let mut m = a.as_slice().to_vec();
    // Row-major: v[i * n + j] is component i of eigenvector j.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let target = ORACLE_OFF_DIAGONAL_TOL * a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m, n) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau.is_finite() {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    continue;
                }
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut data = Vec::with_capacity(n * n);
    for &j in &order {
        data.extend((0..n).map(|i| v[i * n + j]));
    }
    DenseEigen {
        values,
        vectors: Block::from_col_major(n, n, data),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ops::{dot, matvec};

    #[test]
    fn diagonal_input_is_sorted() {
        let e = dense_eig_oracle(&SymMatrix::from_diagonal(&[2.0, -1.0, 5.0])).unwrap();
        assert_eq!(e.values, vec![5.0, 2.0, -1.0]);
    }

    #[test]
    fn exchange_matrix() {
        let a = SymMatrix::from_row_major(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = dense_eig_oracle(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        for j in 0..2 {
            let v = e.vectors.column(j);
            let av = matvec(&a, v).unwrap();
            for i in 0..2 {
                assert!((av[i] - e.values[j] * v[i]).abs() < 1e-14);
            }
        }
        assert!(dot(e.vectors.column(0), e.vectors.column(1)).abs() < 1e-14);
    }

    #[test]
    fn refuses_large_input() {
        let a = SymMatrix::zeros(ORACLE_MAX_N + 1);
        assert!(matches!(dense_eig_oracle(&a), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn zero_matrix() {
        let e = dense_eig_oracle(&SymMatrix::zeros(4)).unwrap();
        assert_eq!(e.values, vec![0.0; 4]);
    }
}
