use crate::error::{check_dim, Error, Result};

/// Dense symmetric `n × n` matrix of `f64`, stored row-major.
///
/// Symmetry is exact: every constructor either mirrors the upper triangle or
/// rejects input with `a[i][j] != a[j][i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.n + i] = d;
        }
        m
    }

    /// Builds the matrix from `f(i, j)` evaluated on the upper triangle
    /// (`i <= j`, row by row) and mirrored.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    /// Takes ownership of a row-major buffer, which must be exactly symmetric.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        check_dim(n * n, data.len())?;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if a != b {
                    return Err(Error::InvalidParameters(format!(
                        "matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Mirrors the upper triangle of a possibly unsymmetric row-major buffer.
    pub(crate) fn from_upper_of(n: usize, data: &[f64]) -> Self {
        Self::from_upper_fn(n, |i, j| data[i * n + j])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Column `j`; identical to row `j` by symmetry.
    pub fn column(&self, j: usize) -> &[f64] {
        self.row(j)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        check_dim(self.n, other.n)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        check_dim(self.n, other.n)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scaled(&self, factor: f64) -> SymMatrix {
        Self {
            n: self.n,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        Self {
            n: self.n,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> SymMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += shift;
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// `P A Pᵀ` for the permutation sending index `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<SymMatrix> {
        check_dim(self.n, perm.len())?;
        let mut inv = vec![0; self.n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        Ok(Self::from_upper_fn(self.n, |i, j| self.get(inv[i], inv[j])))
    }

    /// `self · self`, symmetrized from the upper triangle of the product.
    pub fn square(&self) -> SymMatrix {
        let prod = super::ops::gemm_square(self, self);
        Self::from_upper_of(self.n, &prod)
    }

    /// `self · other` as a row-major buffer (not symmetric in general).
    pub fn mul_dense(&self, other: &SymMatrix) -> Result<Vec<f64>> {
        check_dim(self.n, other.n)?;
        Ok(super::ops::gemm_square(self, other))
    }

    /// `self · block`.
    pub fn mul_block(&self, block: &Block) -> Result<Block> {
        check_dim(self.n, block.rows())?;
        Ok(super::ops::gemm_block(self, block))
    }
}

/// Dense `rows × cols` block of column vectors, stored column-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Block {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            check_dim(rows, c.len())?;
            data.extend_from_slice(c);
        }
        Ok(Self {
            rows,
            cols: columns.len(),
            data,
        })
    }

    pub(crate) fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Column `i` shared and column `j` mutable, for `i < j`.
    pub(crate) fn column_pair_mut(&mut self, i: usize, j: usize) -> (&[f64], &mut [f64]) {
        assert!(i < j && j < self.cols);
        let rows = self.rows;
        let (left, right) = self.data.split_at_mut(j * rows);
        (&left[i * rows..(i + 1) * rows], &mut right[..rows])
    }

    /// First `cols` columns.
    pub fn leading(&self, cols: usize) -> Block {
        let cols = cols.min(self.cols);
        Self {
            rows: self.rows,
            cols,
            data: self.data[..self.rows * cols].to_vec(),
        }
    }

    /// `selfᵀ · other` as a row-major `self.cols × other.cols` buffer.
    pub fn t_mul(&self, other: &Block) -> Result<Vec<f64>> {
        check_dim(self.rows, other.rows)?;
        Ok(super::ops::gemm_tn(self, other))
    }

    /// `selfᵀ x`.
    pub fn t_mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.rows, x.len())?;
        Ok((0..self.cols)
            .map(|j| super::ops::dot(self.column(j), x))
            .collect())
    }

    /// `self · c` for a coefficient vector of length `cols`.
    pub fn mul_vec(&self, c: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.cols, c.len())?;
        let mut out = vec![0.0; self.rows];
        for (j, &cj) in c.iter().enumerate() {
            super::ops::axpy(cj, self.column(j), &mut out);
        }
        Ok(out)
    }

    /// `self · small` where `small` is a row-major `cols × p` matrix.
    pub fn mul_small(&self, small: &[f64], p: usize) -> Result<Block> {
        check_dim(self.cols * p, small.len())?;
        Ok(super::ops::gemm_nn_small(self, small, p))
    }

    /// `self + factor * other`, in place.
    pub fn add_scaled(&mut self, factor: f64, other: &Block) -> Result<()> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        super::ops::axpy(factor, &other.data, &mut self.data);
        Ok(())
    }

    pub fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|v| *v *= factor);
    }
}
