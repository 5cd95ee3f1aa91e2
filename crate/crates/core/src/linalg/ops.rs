//! Dense kernels.
//!
//! All reductions run in a fixed order, so results are bit-stable for a
//! given input regardless of how many threads execute them. Dot products use
//! four interleaved partial sums over consecutive chunks of four, combined as
//! `(s0 + s1) + (s2 + s3)`, followed by the remainder in index order.

use rayon::prelude::*;

use super::matrix::{Block, SymMatrix};
use crate::error::{check_dim, Result};

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = [0.0f64; 4];
    let xc = x.chunks_exact(4);
    let yc = y.chunks_exact(4);
    let (xr, yr) = (xc.remainder(), yc.remainder());
    for (a, b) in xc.zip(yc) {
        acc[0] += a[0] * b[0];
        acc[1] += a[1] * b[1];
        acc[2] += a[2] * b[2];
        acc[3] += a[3] * b[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (a, b) in xr.iter().zip(yr) {
        s += a * b;
    }
    s
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// `y += alpha * x`.
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Exact dense product `A x`; rows are evaluated in parallel.
pub fn matvec(a: &SymMatrix, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(a.n(), x.len())?;
    Ok((0..a.n()).into_par_iter().map(|i| dot(a.row(i), x)).collect())
}

// Thin wrappers over matrixmultiply::dgemm. Strides are in elements.
#[allow(clippy::too_many_arguments)]
fn dgemm(
    m: usize,
    k: usize,
    n: usize,
    a: &[f64],
    rsa: isize,
    csa: isize,
    b: &[f64],
    rsb: isize,
    csb: isize,
    c: &mut [f64],
    rsc: isize,
    csc: isize,
) {
    if m == 0 || n == 0 {
        return;
    }
    // SAFETY: callers pass buffers whose extents match (m, k, n) and the
    // strides, which the public wrappers derive from checked dimensions.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            rsa,
            csa,
            b.as_ptr(),
            rsb,
            csb,
            0.0,
            c.as_mut_ptr(),
            rsc,
            csc,
        );
    }
}

/// Row-major `a · b` for two `n × n` matrices.
pub(crate) fn gemm_square(a: &SymMatrix, b: &SymMatrix) -> Vec<f64> {
    let n = a.n();
    let mut c = vec![0.0; n * n];
    let s = n as isize;
    dgemm(n, n, n, a.as_slice(), s, 1, b.as_slice(), s, 1, &mut c, s, 1);
    c
}

/// `a · block`, column-major result.
pub(crate) fn gemm_block(a: &SymMatrix, block: &Block) -> Block {
    let (n, m) = (a.n(), block.cols());
    let mut c = vec![0.0; n * m];
    let s = n as isize;
    dgemm(n, n, m, a.as_slice(), s, 1, block.as_slice(), 1, s, &mut c, 1, s);
    Block::from_col_major(n, m, c)
}

/// `xᵀ y` for column-major blocks, row-major result.
pub(crate) fn gemm_tn(x: &Block, y: &Block) -> Vec<f64> {
    let (rows, p, q) = (x.rows(), x.cols(), y.cols());
    let mut c = vec![0.0; p * q];
    let r = rows as isize;
    dgemm(
        p,
        rows,
        q,
        x.as_slice(),
        r,
        1,
        y.as_slice(),
        1,
        r,
        &mut c,
        q as isize,
        1,
    );
    c
}

/// Column-major block times a row-major `cols × p` matrix.
pub(crate) fn gemm_nn_small(x: &Block, small: &[f64], p: usize) -> Block {
    let (rows, k) = (x.rows(), x.cols());
    let mut c = vec![0.0; rows * p];
    let r = rows as isize;
    dgemm(
        rows,
        k,
        p,
        x.as_slice(),
        1,
        r,
        small,
        p as isize,
        1,
        &mut c,
        1,
        r,
    );
    Block::from_col_major(rows, p, c)
}
