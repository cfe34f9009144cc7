use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::{self, c, HermEigen, Mat, Vector, C64};

/// A square complex matrix, an element of the algebra `M_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix(Mat);

impl CMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    /// Builds from row-major entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Ok(Self(Mat::from_fn(n, n, |i, j| rows[i][j])))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(Mat::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Mat::identity(dim, dim))
    }

    /// Matrix unit `E_ij`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        Self(linalg::unit_matrix(dim, i, j))
    }

    pub fn from_vec(v: &[C64], dim: usize) -> Result<Self> {
        if v.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: v.len(),
            });
        }
        Ok(Self(linalg::devec(v, dim)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    /// Column-stacking vectorization.
    pub fn vectorize(&self) -> Vector {
        linalg::vec_of(&self.0)
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn hs_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn hs_inner(&self, other: &CMatrix) -> C64 {
        linalg::hs_inner(&self.0, &other.0)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.0 - self.0.adjoint()).norm() <= tol
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && HermEigen::new(&self.0).min() >= -tol
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && (&self.0 * &self.0 - &self.0).norm() <= tol
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        HermEigen::new(&self.0).values
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.0[(i, j)]).collect()).collect()
    }
}

impl Deref for CMatrix {
    type Target = Mat;

    fn deref(&self) -> &Mat {
        &self.0
    }
}

impl From<CMatrix> for Mat {
    fn from(m: CMatrix) -> Mat {
        m.0
    }
}

impl TryFrom<Mat> for CMatrix {
    type Error = Error;

    fn try_from(m: Mat) -> Result<Self> {
        CMatrix::new(m)
    }
}

/// The weighted inner product `<a, b>_z = Tr(z a* b)`.
#[derive(Debug, Clone)]
pub struct InnerProduct {
    weight: CMatrix,
}

impl InnerProduct {
    pub fn new(weight: CMatrix) -> Self {
        Self { weight }
    }

    /// Checks positive definiteness of the weight first.
    pub fn positive_definite(weight: CMatrix, rel: f64) -> Result<Self> {
        let e = HermEigen::new(&weight);
        if !(e.min() > rel * e.max()) {
            return Err(Error::WeightNotPositiveDefinite {
                min_eigenvalue: e.min(),
            });
        }
        Ok(Self { weight })
    }

    pub fn weight(&self) -> &CMatrix {
        &self.weight
    }

    pub fn eval(&self, a: &Mat, b: &Mat) -> C64 {
        (self.weight.as_mat() * a.adjoint() * b).trace()
    }

    pub fn norm_sq(&self, a: &Mat) -> f64 {
        self.eval(a, a).re
    }
}
