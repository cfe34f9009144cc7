//! Linear maps on `M_D` and their representations.
//!
//! The natural representation `N` acts on column-stacked matrices,
//! `vec(phi(a)) = N vec(a)`; a Kraus map `a -> sum_i A_i a A_i*` has
//! `N = sum_i conj(A_i) ⊗ A_i`. The Choi matrix is
//! `J = sum_ij E_ij ⊗ phi(E_ij)`, which for a Kraus map equals
//! `sum_i vec(A_i) vec(A_i)*`.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, c, HermEigen, Mat, ONE, ZERO};
use crate::matrix::CMatrix;

#[derive(Debug, Clone)]
pub struct SuperOp {
    dim: usize,
    natural: Mat,
    kraus: Option<Vec<CMatrix>>,
    choi: Option<Mat>,
    metadata: String,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    Ok(())
}

fn check_square(m: &Mat, size: usize) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: m.nrows(),
        });
    }
    Ok(())
}

/// `sum_i conj(A_i) ⊗ A_i`.
pub fn kraus_to_natural(kraus: &[CMatrix]) -> Result<Mat> {
    let first = kraus.first().ok_or(Error::EmptyKraus)?;
    let d = first.dim();
    let mut n = Mat::zeros(d * d, d * d);
    for a in kraus {
        if a.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: a.dim(),
            });
        }
        n += a.map(|x| x.conj()).kronecker(a.as_mat());
    }
    Ok(n)
}

/// Reshuffles between the natural representation and the Choi matrix.
///
/// `N[(k + l D), (i + j D)] = phi(E_ij)[k, l] = J[(i D + k), (j D + l)]`;
/// the map is an involution.
fn reshuffle(m: &Mat, d: usize) -> Mat {
    Mat::from_fn(d * d, d * d, |row, col| {
        // treat (row, col) as a Choi index and read the natural entry
        let (i, k) = (row / d, row % d);
        let (j, l) = (col / d, col % d);
        m[(k + l * d, i + j * d)]
    })
}

fn choi_from_natural(natural: &Mat, d: usize) -> Mat {
    reshuffle(natural, d)
}

fn natural_from_choi(choi: &Mat, d: usize) -> Mat {
    Mat::from_fn(d * d, d * d, |row, col| {
        let (k, l) = (row % d, row / d);
        let (i, j) = (col % d, col / d);
        choi[(i * d + k, j * d + l)]
    })
}

/// Kraus operators from a Choi matrix; the count equals its numerical rank.
///
/// Eigenvalues in `[-psd_rel * lambda_max, psd_rel * lambda_max]` are clipped.
pub fn choi_to_kraus(choi: &Mat, dim: usize, psd_rel: f64) -> Result<Vec<CMatrix>> {
    check_square(choi, dim * dim)?;
    let e = HermEigen::new(choi);
    let lmax = e.max().max(0.0);
    if e.min() < -psd_rel * lmax {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: e.min(),
            max_eigenvalue: e.max(),
        });
    }
    let mut kraus = Vec::new();
    for (k, &lam) in e.values.iter().enumerate().rev() {
        if lam <= psd_rel * lmax {
            continue;
        }
        let v = e.vector(k) * c(lam.sqrt(), 0.0);
        kraus.push(CMatrix::new(linalg::devec(v.as_slice(), dim))?);
    }
    if kraus.is_empty() {
        kraus.push(CMatrix::zeros(dim));
    }
    Ok(kraus)
}

/// Output of the Perron-Frobenius similarity normalization.
#[derive(Debug, Clone)]
pub struct Normalized {
    /// `a -> r^{-1} z^{-1/2} phi(z^{1/2} a z^{1/2}) z^{-1/2}`.
    pub map: SuperOp,
    /// Perron-Frobenius eigenvector of the input, trace one.
    pub z: CMatrix,
    pub radius: f64,
}

impl SuperOp {
    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self> {
        let natural = kraus_to_natural(&kraus)?;
        let dim = kraus[0].dim();
        check_dim(dim)?;
        Ok(Self {
            dim,
            natural,
            kraus: Some(kraus),
            choi: None,
            metadata: String::new(),
        })
    }

    pub fn from_natural(dim: usize, natural: Mat) -> Result<Self> {
        check_dim(dim)?;
        check_square(&natural, dim * dim)?;
        Ok(Self {
            dim,
            natural,
            kraus: None,
            choi: None,
            metadata: String::new(),
        })
    }

    pub fn from_choi(dim: usize, choi: Mat) -> Result<Self> {
        check_dim(dim)?;
        check_square(&choi, dim * dim)?;
        Ok(Self {
            dim,
            natural: natural_from_choi(&choi, dim),
            kraus: None,
            choi: Some(choi),
            metadata: String::new(),
        })
    }

    /// Builds a map from a closure by evaluating it on the matrix units.
    pub fn from_fn<F>(dim: usize, f: F) -> Result<Self>
    where
        F: Fn(&Mat) -> Mat,
    {
        check_dim(dim)?;
        let d2 = dim * dim;
        let mut natural = Mat::zeros(d2, d2);
        for j in 0..dim {
            for i in 0..dim {
                let image = f(&linalg::unit_matrix(dim, i, j));
                check_square(&image, dim)?;
                natural.set_column(i + j * dim, &linalg::vec_of(&image));
            }
        }
        Self::from_natural(dim, natural)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_kraus(vec![CMatrix::identity(dim)])
    }

    pub fn with_metadata(mut self, metadata: impl Into<String>) -> Self {
        self.metadata = metadata.into();
        self
    }

    /// Attaches a Kraus list; it must reproduce the natural representation.
    pub fn with_kraus(mut self, kraus: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let n = kraus_to_natural(&kraus)?;
        if kraus[0].dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: kraus[0].dim(),
            });
        }
        let scale = self.natural.norm().max(1.0);
        if (&n - &self.natural).norm() > tol * scale {
            return Err(Error::Parse(
                "Kraus operators disagree with the natural representation".into(),
            ));
        }
        self.kraus = Some(kraus);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn natural(&self) -> &Mat {
        &self.natural
    }

    pub fn kraus(&self) -> Option<&[CMatrix]> {
        self.kraus.as_deref()
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn to_choi(&self) -> Mat {
        match &self.choi {
            Some(j) => j.clone(),
            None => choi_from_natural(&self.natural, self.dim),
        }
    }

    /// Stored Choi matrix, if the map was built from one.
    pub fn stored_choi(&self) -> Option<&Mat> {
        self.choi.as_ref()
    }

    /// `phi(a)` through the natural representation, without size checks.
    pub(crate) fn apply_mat(&self, a: &Mat) -> Mat {
        let v = &self.natural * linalg::vec_of(a);
        linalg::devec(v.as_slice(), self.dim)
    }

    /// `phi*(a)`, the Hilbert-Schmidt adjoint applied to `a`.
    pub(crate) fn apply_adjoint_mat(&self, a: &Mat) -> Mat {
        let v = self.natural.ad_mul(&linalg::vec_of(a));
        linalg::devec(v.as_slice(), self.dim)
    }

    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.dim(),
            });
        }
        CMatrix::new(self.apply_mat(a))
    }

    /// `sum_i A_i a A_i*`, when a Kraus list is present.
    pub fn apply_kraus(&self, a: &CMatrix) -> Option<CMatrix> {
        let kraus = self.kraus.as_ref()?;
        let mut out = Mat::zeros(self.dim, self.dim);
        for k in kraus {
            out += k.as_mat() * a.as_mat() * k.adjoint().as_mat();
        }
        CMatrix::new(out).ok()
    }

    fn same_dim(&self, other: &SuperOp) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// `self ∘ other`, i.e. `a -> self(other(a))`.
    pub fn compose(&self, other: &SuperOp) -> Result<SuperOp> {
        self.same_dim(other)?;
        let kraus = match (&self.kraus, &other.kraus) {
            (Some(a), Some(b)) => Some(
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| CMatrix::new(x.as_mat() * y.as_mat())))
                    .collect::<Result<Vec<_>>>()?,
            ),
            _ => None,
        };
        Ok(SuperOp {
            dim: self.dim,
            natural: &self.natural * &other.natural,
            kraus,
            choi: None,
            metadata: String::new(),
        })
    }

    /// `phi^n` by repeated squaring of the natural representation.
    ///
    /// Kraus lists are not carried past `n = 1`; their length grows as `g^n`.
    pub fn power(&self, n: usize) -> SuperOp {
        match n {
            0 => SuperOp::identity(self.dim).expect("dimension already validated"),
            1 => self.clone(),
            _ => {
                let d2 = self.dim * self.dim;
                let mut result = Mat::identity(d2, d2);
                let mut base = self.natural.clone();
                let mut e = n;
                while e > 0 {
                    if e & 1 == 1 {
                        result = &result * &base;
                    }
                    e >>= 1;
                    if e > 0 {
                        base = &base * &base;
                    }
                }
                SuperOp {
                    dim: self.dim,
                    natural: result,
                    kraus: None,
                    choi: None,
                    metadata: String::new(),
                }
            }
        }
    }

    /// Returns `c * phi`. Kraus operators are rescaled by `sqrt(c)` when `c >= 0`.
    pub fn scaled(&self, factor: f64) -> SuperOp {
        let kraus = if factor >= 0.0 {
            self.kraus.as_ref().map(|ks| {
                ks.iter()
                    .map(|k| CMatrix::new(k.as_mat() * c(factor.sqrt(), 0.0)).unwrap())
                    .collect()
            })
        } else {
            None
        };
        SuperOp {
            dim: self.dim,
            natural: &self.natural * c(factor, 0.0),
            kraus,
            choi: self.choi.as_ref().map(|j| j * c(factor, 0.0)),
            metadata: self.metadata.clone(),
        }
    }

    /// The adjoint for the Hilbert-Schmidt inner product.
    pub fn hs_adjoint(&self) -> SuperOp {
        SuperOp {
            dim: self.dim,
            natural: self.natural.adjoint(),
            kraus: self
                .kraus
                .as_ref()
                .map(|ks| ks.iter().map(CMatrix::adjoint).collect()),
            choi: None,
            metadata: String::new(),
        }
    }

    /// The adjoint for `<a, b>_rho = Tr(rho a* b)`, namely
    /// `a -> phi*(a rho) rho^{-1}`.
    pub fn rho_adjoint(&self, rho: &CMatrix, tol: &Tolerances) -> Result<SuperOp> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        let e = HermEigen::new(rho);
        if !(e.min() > tol.sqrt_floor_rel * e.max()) {
            return Err(Error::WeightNotPositiveDefinite {
                min_eigenvalue: e.min(),
            });
        }
        let inv = rho
            .as_mat()
            .clone()
            .try_inverse()
            .ok_or(Error::WeightNotPositiveDefinite {
                min_eigenvalue: e.min(),
            })?;
        let id = Mat::identity(self.dim, self.dim);
        // vec(a rho) = (rho^T ⊗ I) vec(a); vec(x rho^{-1}) = (rho^{-T} ⊗ I) vec(x)
        let right = rho.transpose().kronecker(&id);
        let left = inv.transpose().kronecker(&id);
        Ok(SuperOp {
            dim: self.dim,
            natural: left * self.natural.adjoint() * right,
            kraus: None,
            choi: None,
            metadata: String::new(),
        })
    }

    /// Conjugates by `s` on both sides and `t` on the outside:
    /// `a -> t phi(s a s) t`, Kraus operators `t A_i s`.
    fn conjugated(&self, outer: &Mat, inner: &Mat, factor: f64) -> SuperOp {
        let natural =
            outer.transpose().kronecker(outer) * &self.natural * inner.transpose().kronecker(inner)
                * c(factor, 0.0);
        let kraus = self.kraus.as_ref().map(|ks| {
            ks.iter()
                .map(|k| CMatrix::new(outer * k.as_mat() * inner * c(factor.sqrt(), 0.0)).unwrap())
                .collect()
        });
        SuperOp {
            dim: self.dim,
            natural,
            kraus,
            choi: None,
            metadata: self.metadata.clone(),
        }
    }

    /// Rescales a primitive map to a unital map with spectral radius one,
    /// `phi_z(a) = r^{-1} z^{-1/2} phi(z^{1/2} a z^{1/2}) z^{-1/2}` with `z`
    /// the Perron-Frobenius eigenvector of `phi` and `r` its spectral radius.
    pub fn similarity_normalize(&self, tol: &Tolerances) -> Result<Normalized> {
        let data = crate::spectral::spectral_data(self, tol)?;
        if data.degenerate_peripheral {
            return Err(Error::NotPrimitive(
                "peripheral spectrum is degenerate".into(),
            ));
        }
        let z = data.pf_right;
        let e = HermEigen::new(&z);
        if !(e.min() > -tol.pf_positive_rel * e.max()) {
            return Err(Error::NotPrimitive(format!(
                "Perron-Frobenius eigenvector has eigenvalue {:e}",
                e.min()
            )));
        }
        let ratio = e.min() / e.max();
        if !(ratio > tol.singular_rel) {
            return Err(Error::SingularEigenvector { ratio });
        }
        let (sqrt, inv_sqrt, _) = linalg::sqrt_and_inv_sqrt(&z, tol.sqrt_floor_rel)
            .ok_or(Error::SingularEigenvector { ratio })?;
        let r = data.radius;
        let map = self.conjugated(&inv_sqrt, &sqrt, 1.0 / r);
        Ok(Normalized { map, z, radius: r })
    }

    pub fn unital_defect(&self) -> f64 {
        let id = Mat::identity(self.dim, self.dim);
        (self.apply_mat(&id) - id).norm()
    }

    pub fn trace_defect(&self) -> f64 {
        let id = Mat::identity(self.dim, self.dim);
        (self.apply_adjoint_mat(&id) - id).norm()
    }

    pub fn is_unital(&self, tol: &Tolerances) -> bool {
        self.unital_defect() <= tol.unital
    }

    pub fn is_trace_preserving(&self, tol: &Tolerances) -> bool {
        self.trace_defect() <= tol.unital
    }

    /// Largest disagreement between the stored representations on the
    /// matrix units, in Hilbert-Schmidt norm.
    pub fn coherence_defect(&self) -> f64 {
        let d = self.dim;
        let choi_natural = self.choi.as_ref().map(|j| natural_from_choi(j, d));
        let mut worst: f64 = 0.0;
        for j in 0..d {
            for i in 0..d {
                let e = CMatrix::unit(d, i, j);
                let via_natural = self.apply_mat(&e);
                if let Some(k) = self.apply_kraus(&e) {
                    worst = worst.max((k.as_mat() - &via_natural).norm());
                }
                if let Some(n) = &choi_natural {
                    let v = n * linalg::vec_of(&e);
                    let img = linalg::devec(v.as_slice(), d);
                    worst = worst.max((img - &via_natural).norm());
                }
            }
        }
        worst
    }
}

/// The transpose map, `a -> a^T`; it is positive but not 2-positive.
pub(crate) fn transpose_natural(d: usize) -> Mat {
    Mat::from_fn(d * d, d * d, |row, col| {
        let (k, l) = (row % d, row / d);
        if col == l + k * d {
            ONE
        } else {
            ZERO
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gaussian_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_kraus(d: usize, g: usize, seed: u64) -> Vec<CMatrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..g)
            .map(|_| CMatrix::new(gaussian_matrix(d, d, &mut rng)).unwrap())
            .collect()
    }

    #[test]
    fn dimension_one_is_rejected() {
        assert!(matches!(
            SuperOp::identity(1),
            Err(Error::DimensionTooSmall(1))
        ));
    }

    #[test]
    fn identity_map_representations() {
        let phi = SuperOp::identity(3).unwrap();
        assert!((phi.natural() - Mat::identity(9, 9)).norm() < 1e-15);
        let v = CMatrix::identity(3).vectorize();
        let expected = &v * v.adjoint();
        assert!((phi.to_choi() - expected).norm() < 1e-15);
        assert_eq!(linalg::psd_rank(&phi.to_choi(), 1e-9), 1);
    }

    #[test]
    fn kraus_and_natural_agree() {
        let phi = SuperOp::from_kraus(random_kraus(3, 2, 1)).unwrap();
        assert!(phi.coherence_defect() < 1e-10);
    }

    #[test]
    fn choi_reshuffle_is_consistent_with_kraus() {
        let ks = random_kraus(3, 3, 2);
        let phi = SuperOp::from_kraus(ks.clone()).unwrap();
        let mut j = Mat::zeros(9, 9);
        for k in &ks {
            let v = k.vectorize();
            j += &v * v.adjoint();
        }
        assert!((phi.to_choi() - &j).norm() < 1e-10);
        let back = SuperOp::from_choi(3, j).unwrap();
        assert!((back.natural() - phi.natural()).norm() < 1e-10);
        assert!(back.coherence_defect() < 1e-10);
    }

    #[test]
    fn choi_round_trip_reproduces_map() {
        let phi = SuperOp::from_kraus(random_kraus(3, 2, 3)).unwrap();
        let ks = choi_to_kraus(&phi.to_choi(), 3, 1e-9).unwrap();
        assert_eq!(ks.len(), 2);
        let back = SuperOp::from_kraus(ks).unwrap();
        assert!((back.natural() - phi.natural()).norm() < 1e-10);
    }

    #[test]
    fn transpose_is_not_completely_positive() {
        let t = SuperOp::from_natural(2, transpose_natural(2)).unwrap();
        let e01 = CMatrix::unit(2, 0, 1);
        assert_eq!(t.apply(&e01).unwrap(), CMatrix::unit(2, 1, 0));
        let spec = HermEigen::new(&t.to_choi());
        assert!((spec.min() + 1.0).abs() < 1e-12);
        assert!((spec.max() - 1.0).abs() < 1e-12);
        assert!(matches!(
            choi_to_kraus(&t.to_choi(), 2, 1e-9),
            Err(Error::NotCompletelyPositive { .. })
        ));
    }

    #[test]
    fn power_zero_is_identity_and_power_matches_products() {
        let phi = SuperOp::from_kraus(random_kraus(2, 2, 4)).unwrap();
        assert!((phi.power(0).natural() - Mat::identity(4, 4)).norm() < 1e-15);
        let p3 = phi.power(3);
        let direct = phi.compose(&phi).unwrap().compose(&phi).unwrap();
        assert!((p3.natural() - direct.natural()).norm() < 1e-9 * direct.natural().norm());
        // composed Kraus words agree with the product of naturals
        assert!(direct.coherence_defect() < 1e-9 * direct.natural().norm());
    }

    #[test]
    fn compose_rejects_dimension_mismatch() {
        let a = SuperOp::identity(2).unwrap();
        let b = SuperOp::identity(3).unwrap();
        assert!(matches!(a.compose(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.apply(&CMatrix::identity(3)).is_err());
    }

    #[test]
    fn adjoint_of_unitary_conjugation() {
        let h = 1.0 / 2f64.sqrt();
        let u = CMatrix::new(Mat::from_row_slice(
            2,
            2,
            &[c(h, 0.0), c(0.0, h), c(0.0, h), c(h, 0.0)],
        ))
        .unwrap();
        let phi = SuperOp::from_kraus(vec![u.clone()]).unwrap();
        let expected = SuperOp::from_kraus(vec![u.adjoint()]).unwrap();
        assert!((phi.hs_adjoint().natural() - expected.natural()).norm() < 1e-14);
    }

    #[test]
    fn hs_adjoint_identity_on_random_pairs() {
        let phi = SuperOp::from_kraus(random_kraus(3, 3, 42)).unwrap();
        let adj = phi.hs_adjoint();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let a = gaussian_matrix(3, 3, &mut rng);
            let b = gaussian_matrix(3, 3, &mut rng);
            let lhs = linalg::hs_inner(&phi.apply_mat(&a), &b);
            let rhs = linalg::hs_inner(&a, &adj.apply_mat(&b));
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
        }
        assert!((adj.hs_adjoint().natural() - phi.natural()).norm() < 1e-15);
    }

    #[test]
    fn rho_adjoint_with_maximally_mixed_weight_is_hs_adjoint() {
        let phi = SuperOp::from_kraus(random_kraus(3, 2, 5)).unwrap();
        let rho = CMatrix::new(Mat::identity(3, 3) * c(1.0 / 3.0, 0.0)).unwrap();
        let ra = phi.rho_adjoint(&rho, &Tolerances::default()).unwrap();
        assert!((ra.natural() - phi.hs_adjoint().natural()).norm() < 1e-10);
    }

    #[test]
    fn rho_adjoint_rejects_singular_weight() {
        let phi = SuperOp::identity(2).unwrap();
        let rho = CMatrix::unit(2, 0, 0);
        assert!(matches!(
            phi.rho_adjoint(&rho, &Tolerances::default()),
            Err(Error::WeightNotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn unitality_of_diagonal_conjugation() {
        let x = CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let phi = SuperOp::from_kraus(vec![x]).unwrap();
        let tol = Tolerances::default();
        assert!(!phi.is_unital(&tol));
        assert!(!phi.is_trace_preserving(&tol));
        let id = SuperOp::identity(2).unwrap();
        assert!(id.is_unital(&tol) && id.is_trace_preserving(&tol));
    }

    #[test]
    fn from_fn_matches_kraus() {
        let ks = random_kraus(2, 2, 6);
        let phi = SuperOp::from_kraus(ks.clone()).unwrap();
        let g = SuperOp::from_fn(2, |a| {
            ks.iter()
                .map(|k| k.as_mat() * a * k.adjoint().as_mat())
                .fold(Mat::zeros(2, 2), |acc, x| acc + x)
        })
        .unwrap();
        assert!((g.natural() - phi.natural()).norm() < 1e-12);
    }
}
