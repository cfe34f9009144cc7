//! Multiplicative domains of powers of a unital Schwarz map.
//!
//! With `rho` the fixed point of the adjoint, the forms
//! `Q_n(a) = <a,a>_rho - <phi^n(a), phi^n(a)>_rho` and the same expression on
//! `a*` are positive semidefinite, and their common kernel is the
//! multiplicative domain of `phi^n`.

use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, c, HermEigen, Mat};
use crate::matrix::{CMatrix, InnerProduct};
use crate::spectral;
use crate::subspace::SubspaceBasis;
use crate::superop::SuperOp;

#[derive(Debug, Clone, Serialize)]
pub struct KernelDiagnostics {
    pub n: usize,
    pub rank: usize,
    /// Smallest eigenvalue of `Q_n + Q'_n` outside the kernel, relative to
    /// the threshold scale; `None` when the kernel is everything.
    pub kernel_eigen_gap: Option<f64>,
    /// Largest eigenvalue accepted into the kernel, relative.
    pub max_kernel_eigenvalue: f64,
    /// Smallest eigenvalue of `Q_n` and of `Q'_n`, relative.
    pub min_form_eigenvalue: [f64; 2],
    /// An eigenvalue fell between the kernel threshold and the guard band.
    pub tolerance_warning: bool,
}

#[derive(Debug, Clone)]
pub struct MultDomain {
    pub basis: SubspaceBasis,
    pub diagnostics: KernelDiagnostics,
}

fn weight_operators(rho: &Mat) -> (Mat, Mat) {
    let d = rho.nrows();
    let id = Mat::identity(d, d);
    (rho.transpose().kronecker(&id), id.kronecker(rho))
}

/// Multiplicative domain of `phi^n` from the rho-weighted forms.
pub fn mult_domain(phi: &SuperOp, n: usize, rho: &CMatrix, tol: &Tolerances) -> Result<MultDomain> {
    let d = phi.dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.dim(),
        });
    }
    InnerProduct::positive_definite(rho.clone(), tol.pf_positive_rel)?;
    let power = phi.power(n.max(1));
    domain_from_natural(power.natural(), d, n, rho.as_mat(), tol)
}

fn domain_from_natural(nat: &Mat, d: usize, n: usize, rho: &Mat, tol: &Tolerances) -> Result<MultDomain> {
    let (w, w2) = weight_operators(rho);
    let q = linalg::hermitian_part(&(&w - nat.adjoint() * &w * nat));
    let q2 = linalg::hermitian_part(&(&w2 - nat.adjoint() * &w2 * nat));
    let eq = HermEigen::new(&q);
    let eq2 = HermEigen::new(&q2);
    let rho_max = HermEigen::new(rho).max();
    let scale = eq.max().max(eq2.max()).max(rho_max);
    let worst = eq.min().min(eq2.min());
    if worst < -tol.form_psd_rel * scale {
        return Err(Error::FormNotPsd {
            n,
            min_eigenvalue: worst,
        });
    }
    let s = HermEigen::new(&(&q + &q2));
    let thr = tol.kernel_rel * s.max().max(rho_max);
    let guard = tol.kernel_guard_rel * s.max().max(rho_max);
    let rank = s.values.iter().take_while(|&&v| v <= thr).count();
    let kernel = s.vectors.columns(0, rank).into_owned();
    let tolerance_warning = s.values.iter().any(|&v| v > thr && v < guard);
    let norm = s.max().max(rho_max);
    let diagnostics = KernelDiagnostics {
        n,
        rank,
        kernel_eigen_gap: s.values.get(rank).map(|v| v / norm),
        max_kernel_eigenvalue: if rank > 0 { s.values[rank - 1] / norm } else { 0.0 },
        min_form_eigenvalue: [eq.min() / norm, eq2.min() / norm],
        tolerance_warning,
    };
    Ok(MultDomain {
        basis: SubspaceBasis::from_columns(d, kernel),
        diagnostics,
    })
}

fn hermitian_basis(d: usize) -> Vec<Mat> {
    let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(linalg::unit_matrix(d, i, i));
        for j in i + 1..d {
            let (eij, eji) = (linalg::unit_matrix(d, i, j), linalg::unit_matrix(d, j, i));
            out.push((&eij + &eji) * s);
            out.push((&eij - &eji) * c(0.0, std::f64::consts::FRAC_1_SQRT_2));
        }
    }
    out
}

/// Multiplicative domain of `phi^n` from the defining equalities, without
/// the fixed point: kernel of the trace of the Schwarz deficiencies on a
/// Hermitian operator basis, followed by a closure check.
pub fn mult_domain_oracle(phi: &SuperOp, n: usize, tol: &Tolerances) -> Result<SubspaceBasis> {
    let d = phi.dim();
    let apply_n = |a: &Mat| (0..n.max(1)).fold(a.clone(), |x, _| phi.apply_mat(&x));
    let h = hermitian_basis(d);
    let images: Vec<Mat> = h.iter().map(&apply_n).collect();
    let m = h.len();
    // T[k][l] = Tr(phi^n(h_k h_l) - phi^n(h_k) phi^n(h_l)); a = sum c_k h_k
    // gives Tr D(a) = c* T c and Tr D'(a) = c^T T conj(c).
    let mut t = Mat::zeros(m, m);
    for k in 0..m {
        for l in 0..m {
            let prod = apply_n(&(&h[k] * &h[l]));
            t[(k, l)] = prod.trace() - (&images[k] * &images[l]).trace();
        }
    }
    let form = linalg::hermitian_part(&(&t + t.transpose()));
    let e = HermEigen::new(&form);
    let thr = tol.kernel_rel * e.max().max(1.0);
    let rank = e.values.iter().take_while(|&&v| v <= thr).count();
    let coeffs = e.vectors.columns(0, rank);
    let mats: Vec<Mat> = coeffs
        .column_iter()
        .map(|col| {
            h.iter()
                .zip(col.iter())
                .fold(Mat::zeros(d, d), |acc, (hk, ck)| acc + hk * *ck)
        })
        .collect();
    let basis = SubspaceBasis::span(d, &mats, tol.rank_rel);
    let residual = closure_residual(&basis);
    if residual > tol.containment {
        return Err(Error::NonAlgebraKernel { residual });
    }
    Ok(basis)
}

/// Largest residual of adjoints and pairwise products of the (unit norm)
/// basis elements, measured absolutely so that vanishing products do not
/// amplify rounding.
fn closure_residual(basis: &SubspaceBasis) -> f64 {
    let b: Vec<Mat> = basis.basis().into_iter().map(Mat::from).collect();
    let cols = basis.columns();
    let res = |m: &Mat| linalg::projection_residual(cols, &linalg::vec_of(m));
    let mut worst: f64 = 0.0;
    for x in &b {
        worst = worst.max(res(&x.adjoint()));
        for y in &b {
            worst = worst.max(res(&(x * y)));
        }
    }
    worst
}

pub fn is_subalgebra(basis: &SubspaceBasis, tol: &Tolerances) -> bool {
    closure_residual(basis) <= tol.containment
}

#[derive(Debug, Clone)]
pub struct KappaResult {
    pub kappa: usize,
    /// `M_{phi^n}` for `n = 1..=kappa + 1`.
    pub chain: Vec<MultDomain>,
    pub bound: usize,
}

impl KappaResult {
    pub fn ranks(&self) -> Vec<usize> {
        self.chain.iter().map(|m| m.basis.rank()).collect()
    }

    pub fn stabilized(&self) -> &SubspaceBasis {
        &self.chain.last().unwrap().basis
    }

    pub fn tolerance_warning(&self) -> bool {
        self.chain.iter().any(|m| m.diagnostics.tolerance_warning)
    }
}

fn require_primitive_unital(phi: &SuperOp, tol: &Tolerances) -> Result<()> {
    if !spectral::is_primitive(phi, tol)?.primitive {
        return Err(Error::NotPrimitive("spectral certificate failed".into()));
    }
    let defect = phi.unital_defect();
    if defect > tol.unital {
        return Err(Error::NotUnital { defect });
    }
    Ok(())
}

/// First `n` with `M_{phi^n} = M_{phi^{n+1}}`.
///
/// The chain is followed up to length `D^2 + 1`, so a violation of
/// `kappa <= 2D - 2` is reported with its full rank profile.
pub fn kappa(phi: &SuperOp, rho: &CMatrix, tol: &Tolerances) -> Result<KappaResult> {
    require_primitive_unital(phi, tol)?;
    InnerProduct::positive_definite(rho.clone(), tol.pf_positive_rel)?;
    let d = phi.dim();
    let bound = 2 * d - 2;
    let limit = d * d + 1;
    let base = phi.natural();
    let mut nat = base.clone();
    let mut chain: Vec<MultDomain> = Vec::new();
    for n in 1..=limit {
        if n > 1 {
            nat = base * &nat;
        }
        let dom = domain_from_natural(&nat, d, n, rho.as_mat(), tol)?;
        if let Some(prev) = chain.last() {
            if prev.basis.rank() == dom.basis.rank()
                && prev.basis.containment_sine(&dom.basis) <= tol.containment
            {
                chain.push(dom);
                let kappa = n - 1;
                let ranks: Vec<usize> = chain.iter().map(|m| m.basis.rank()).collect();
                if kappa > bound {
                    return Err(Error::ChainTooLong { ranks, bound });
                }
                let stable = &chain.last().unwrap().basis;
                if !stable.is_scalars(tol.containment) {
                    return Err(Error::StabilizedNotTrivial {
                        rank: stable.rank(),
                    });
                }
                return Ok(KappaResult { kappa, chain, bound });
            }
        }
        chain.push(dom);
    }
    Err(Error::ChainTooLong {
        ranks: chain.iter().map(|m| m.basis.rank()).collect(),
        bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NestingStep {
    pub n: usize,
    pub rank: usize,
    /// Principal-angle sine of `M_{phi^{n+1}}` against `M_{phi^n}`.
    pub containment_sine: f64,
    pub kernel_eigen_gap: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NestingReport {
    pub steps: Vec<NestingStep>,
    pub ranks_non_increasing: bool,
    pub contained: bool,
    pub passed: bool,
}

/// Checks `M_{phi^{n+1}} ⊆ M_{phi^n}` for `n = 1..=n_max`.
pub fn verify_nesting(phi: &SuperOp, rho: &CMatrix, n_max: usize, tol: &Tolerances) -> Result<NestingReport> {
    require_primitive_unital(phi, tol)?;
    let domains = (1..=n_max + 1)
        .map(|n| mult_domain(phi, n, rho, tol))
        .collect::<Result<Vec<_>>>()?;
    let steps: Vec<NestingStep> = domains
        .windows(2)
        .map(|w| NestingStep {
            n: w[0].diagnostics.n,
            rank: w[0].basis.rank(),
            containment_sine: w[0].basis.containment_sine(&w[1].basis),
            kernel_eigen_gap: w[0].diagnostics.kernel_eigen_gap,
        })
        .collect();
    let ranks_non_increasing = domains.windows(2).all(|w| w[1].basis.rank() <= w[0].basis.rank());
    let contained = steps.iter().all(|s| s.containment_sine <= tol.containment);
    Ok(NestingReport {
        steps,
        ranks_non_increasing,
        contained,
        passed: ranks_non_increasing && contained,
    })
}
