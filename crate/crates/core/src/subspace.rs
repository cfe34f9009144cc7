use crate::linalg::{self, c, Mat, Vector};
use crate::matrix::CMatrix;

/// Subspace of `M_D` held as Hilbert-Schmidt orthonormal columns of
/// vectorized matrices.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    dim: usize,
    columns: Mat,
}

impl SubspaceBasis {
    /// Orthonormal columns of a `D^2 x r` matrix; orthonormality is assumed.
    pub fn from_columns(dim: usize, columns: Mat) -> Self {
        debug_assert_eq!(columns.nrows(), dim * dim);
        Self { dim, columns }
    }

    /// Span of `matrices`, with numerical rank at `rel * sigma_max`.
    pub fn span(dim: usize, matrices: &[Mat], rel: f64) -> Self {
        Self::span_with_values(dim, matrices, rel).0
    }

    /// As [`SubspaceBasis::span`], also returning all singular values.
    pub fn span_with_values(dim: usize, matrices: &[Mat], rel: f64) -> (Self, Vec<f64>) {
        let mut stacked = Mat::zeros(dim * dim, matrices.len());
        for (k, m) in matrices.iter().enumerate() {
            stacked.set_column(k, &linalg::vec_of(m));
        }
        let (cols, sv) = linalg::column_space(&stacked, rel);
        (Self::from_columns(dim, cols), sv)
    }

    /// `C I`.
    pub fn scalars(dim: usize) -> Self {
        let v = linalg::vec_of(&Mat::identity(dim, dim)) / c((dim as f64).sqrt(), 0.0);
        Self::from_columns(dim, Mat::from_columns(&[v]))
    }

    pub fn full(dim: usize) -> Self {
        Self::from_columns(dim, Mat::identity(dim * dim, dim * dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.columns.ncols()
    }

    pub fn columns(&self) -> &Mat {
        &self.columns
    }

    pub fn basis(&self) -> Vec<CMatrix> {
        self.columns
            .column_iter()
            .map(|col| CMatrix::new(linalg::devec(col.as_slice(), self.dim)).unwrap())
            .collect()
    }

    pub fn gram_defect(&self) -> f64 {
        let r = self.rank();
        (self.columns.adjoint() * &self.columns - Mat::identity(r, r)).norm()
    }

    pub fn project(&self, a: &Mat) -> Mat {
        let v = linalg::vec_of(a);
        let p = &self.columns * (self.columns.adjoint() * v);
        linalg::devec(p.as_slice(), self.dim)
    }

    /// `|a - P(a)| / |a|` (zero for `a = 0`).
    pub fn relative_residual(&self, a: &Mat) -> f64 {
        let n = a.norm();
        if n == 0.0 {
            return 0.0;
        }
        linalg::projection_residual(&self.columns, &linalg::vec_of(a)) / n
    }

    pub fn contains(&self, a: &Mat, tol: f64) -> bool {
        self.relative_residual(a) <= tol
    }

    pub fn contains_vector(&self, v: &Vector, tol: f64) -> bool {
        let n = v.norm();
        n == 0.0 || linalg::projection_residual(&self.columns, v) <= tol * n
    }

    /// Sine of the largest principal angle of `other` relative to `self`;
    /// zero when `other ⊆ self`.
    pub fn containment_sine(&self, other: &SubspaceBasis) -> f64 {
        linalg::max_principal_sine(&self.columns, &other.columns)
    }

    /// Equal rank plus containment within `tol`.
    pub fn same_subspace(&self, other: &SubspaceBasis, tol: f64) -> bool {
        self.rank() == other.rank() && self.containment_sine(other) <= tol
    }

    pub fn is_scalars(&self, tol: f64) -> bool {
        self.rank() == 1 && self.contains(&Mat::identity(self.dim, self.dim), tol)
    }
}
