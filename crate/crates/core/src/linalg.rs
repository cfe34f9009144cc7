//! Dense complex linear algebra helpers shared by the analysis modules.
//!
//! Vectorization is column-stacking throughout: `vec(X)[i + j*D] = X[i, j]`,
//! which is exactly nalgebra's column-major storage, so that
//! `vec(A X B) = (B^T ⊗ A) vec(X)`.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex<f64>;
pub type Mat = DMatrix<C64>;
pub type Vector = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn vec_of(a: &Mat) -> Vector {
    DVector::from_column_slice(a.as_slice())
}

pub fn devec(v: &[C64], dim: usize) -> Mat {
    debug_assert_eq!(v.len(), dim * dim);
    DMatrix::from_column_slice(dim, dim, v)
}

pub fn unit_matrix(dim: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(dim, dim);
    m[(i, j)] = ONE;
    m
}

pub fn hermitian_part(m: &Mat) -> Mat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Hilbert-Schmidt inner product `Tr(a* b)`.
pub fn hs_inner(a: &Mat, b: &Mat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Eigendecomposition of the Hermitian part of `m`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: Mat,
}

impl HermEigen {
    pub fn new(m: &Mat) -> Self {
        let h = hermitian_part(m);
        let n = h.nrows();
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Mat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Self { values, vectors }
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn vector(&self, k: usize) -> Vector {
        self.vectors.column(k).into_owned()
    }

    /// Largest absolute eigenvalue.
    pub fn scale(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }
}

pub fn lambda_min(m: &Mat) -> (f64, Vector) {
    let e = HermEigen::new(m);
    (e.min(), e.vector(0))
}

/// Number of eigenvalues of the Hermitian part above `rel * lambda_max`.
pub fn psd_rank(m: &Mat, rel: f64) -> usize {
    let e = HermEigen::new(m);
    let thr = rel * e.max().max(0.0);
    e.values.iter().filter(|&&v| v > thr).count()
}

/// Orthonormal basis (as columns) of the column space of `m`, keeping
/// singular values above `rel * sigma_max`. Also returns all singular values.
pub fn column_space(m: &Mat, rel: f64) -> (Mat, Vec<f64>) {
    let rows = m.nrows();
    if m.ncols() == 0 {
        return (Mat::zeros(rows, 0), Vec::new());
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sv.first().copied().unwrap_or(0.0);
    let keep = if smax <= 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > rel * smax).count()
    };
    (u.columns(0, keep).into_owned(), sv)
}

/// Unit vector spanning the (numerical) null space of `m`, plus the two
/// smallest singular values (smallest first).
pub fn null_vector(m: &Mat) -> (Vector, f64, f64) {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let sv = &svd.singular_values;
    let last = sv.len() - 1;
    let v = Vector::from_iterator(n, vt.row(last).iter().map(|x| x.conj()));
    let second = if last > 0 { sv[last - 1] } else { f64::INFINITY };
    (v, sv[last], second)
}

/// `|| (I - P_U) x ||` for an orthonormal column basis `u`.
pub fn projection_residual(u: &Mat, x: &Vector) -> f64 {
    if u.ncols() == 0 {
        return x.norm();
    }
    let coeffs = u.adjoint() * x;
    (x - u * coeffs).norm()
}

pub fn spectral_norm(m: &Mat) -> f64 {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values[0]
}

/// Sine of the largest principal angle from span(v) into span(u); both
/// orthonormal column bases. Zero when span(v) is contained in span(u).
pub fn max_principal_sine(u: &Mat, v: &Mat) -> f64 {
    if v.ncols() == 0 {
        return 0.0;
    }
    if u.ncols() == 0 {
        return 1.0;
    }
    let residual = v - u * (u.adjoint() * v);
    spectral_norm(&residual).min(1.0)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat {
    Mat::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vector {
    let v = Vector::from_fn(n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let norm = v.norm();
    v / c(norm, 0.0)
}

/// Orthogonal projection onto the span of `rank` Gaussian columns.
pub fn random_projection<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Mat {
    let g = gaussian_matrix(dim, rank, rng);
    let q = g.qr().q();
    let q = q.columns(0, rank).into_owned();
    &q * q.adjoint()
}

/// `z^{1/2}` and `z^{-1/2}` for Hermitian positive definite `z`.
///
/// Returns `None` when the smallest eigenvalue is not above
/// `floor_rel * lambda_max`.
pub fn sqrt_and_inv_sqrt(z: &Mat, floor_rel: f64) -> Option<(Mat, Mat, f64)> {
    let e = HermEigen::new(z);
    let ratio = if e.max() > 0.0 { e.min() / e.max() } else { f64::NEG_INFINITY };
    if !(ratio > floor_rel) {
        return None;
    }
    let n = z.nrows();
    let mut s = Mat::zeros(n, n);
    let mut si = Mat::zeros(n, n);
    for (k, &lam) in e.values.iter().enumerate() {
        let v = e.vector(k);
        let outer = &v * v.adjoint();
        s += &outer * c(lam.sqrt(), 0.0);
        si += outer * c(1.0 / lam.sqrt(), 0.0);
    }
    Some((s, si, ratio))
}

/// Makes the first coordinate of significant magnitude real and positive.
pub fn fix_phase(v: &mut Vector) {
    let scale = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if let Some(x) = v.iter().copied().find(|x| x.norm() > 1e-8 * scale) {
        let phase = x.conj() / c(x.norm(), 0.0);
        *v *= phase;
    }
}

pub fn matrix_rank_svd(m: &Mat, rel: f64) -> usize {
    column_space(m, rel).0.ncols()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn vec_of_product_matches_kronecker_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = gaussian_matrix(3, 3, &mut rng);
            let x = gaussian_matrix(3, 3, &mut rng);
            let b = gaussian_matrix(3, 3, &mut rng);
            let lhs = vec_of(&(&a * &x * &b));
            let rhs = b.transpose().kronecker(&a) * vec_of(&x);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn devec_inverts_vec() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = gaussian_matrix(4, 4, &mut rng);
        assert_eq!(devec(vec_of(&a).as_slice(), 4), a);
    }

    #[test]
    fn square_roots_multiply_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = gaussian_matrix(3, 3, &mut rng);
        let z = &g * g.adjoint() + Mat::identity(3, 3) * c(0.1, 0.0);
        let (s, si, _) = sqrt_and_inv_sqrt(&z, 1e-12).unwrap();
        assert!((&s * &s - &z).norm() < 1e-10);
        assert!((&s * &si - Mat::identity(3, 3)).norm() < 1e-10);
    }

    #[test]
    fn singular_weight_has_no_inverse_root() {
        let z = Mat::from_diagonal(&Vector::from_vec(vec![ONE, ZERO]));
        assert!(sqrt_and_inv_sqrt(&z, 1e-12).is_none());
    }

    #[test]
    fn principal_sine_detects_containment() {
        let e = Mat::identity(4, 4);
        let u = e.columns(0, 2).into_owned();
        let v = e.columns(0, 1).into_owned();
        let w = e.columns(2, 1).into_owned();
        assert!(max_principal_sine(&u, &v) < 1e-15);
        assert!((max_principal_sine(&u, &w) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_projection_is_projection_of_requested_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random_projection(4, 2, &mut rng);
        assert!((&p * &p - &p).norm() < 1e-12);
        assert!((p.trace().re - 2.0).abs() < 1e-12);
    }
}
