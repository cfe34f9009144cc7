//! Spectrum of the natural representation and Perron-Frobenius data.
//!
//! Primitivity is certified spectrally: the peripheral spectrum must be a
//! single simple eigenvalue and both Perron-Frobenius eigenvectors (of the
//! map and of its adjoint) must be positive definite.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, c, HermEigen, Mat, Vector, C64};
use crate::matrix::CMatrix;
use crate::superop::SuperOp;

#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Sorted by modulus (descending), then by argument.
    pub eigenvalues: Vec<C64>,
    pub radius: f64,
    /// `|lambda_2| / r`.
    pub gap_ratio: f64,
    /// Perron-Frobenius eigenvector of the map, trace one.
    pub pf_right: CMatrix,
    /// Perron-Frobenius eigenvector of the adjoint, trace one.
    pub pf_left: CMatrix,
    pub peripheral_count: usize,
    /// Set when the leading eigenvalue is not simple; the eigenvectors are
    /// then one arbitrary choice.
    pub degenerate_peripheral: bool,
    /// Relative change made by Hermitizing the raw eigenvectors.
    pub hermitization_defect: [f64; 2],
    /// Smallest singular value of `N - lambda I` at the extracted eigenvalue,
    /// and the next one.
    pub null_singular_values: [f64; 2],
}

pub fn eigenvalues(m: &Mat) -> Result<Vec<C64>> {
    let n = m.nrows();
    let schur = m
        .clone()
        .try_schur(1e-14, 10_000)
        .ok_or(Error::Eigensolver(n))?;
    let ev = schur.eigenvalues().ok_or(Error::Eigensolver(n))?;
    let mut ev: Vec<C64> = ev.iter().copied().collect();
    sort_spectrum(&mut ev);
    Ok(ev)
}

fn sort_spectrum(ev: &mut [C64]) {
    ev.sort_by(|a, b| match b.norm().total_cmp(&a.norm()) {
        Ordering::Equal => a.arg().total_cmp(&b.arg()),
        o => o,
    });
}

/// Devectorizes, fixes the phase so the trace is real positive, Hermitizes
/// and normalizes to trace one.
fn normalize_eigenmatrix(v: &Vector, dim: usize) -> (CMatrix, f64) {
    let mut m = linalg::devec(v.as_slice(), dim);
    let tr = m.trace();
    let phase = if tr.norm() > 1e-12 * m.norm() {
        tr.conj() / c(tr.norm(), 0.0)
    } else {
        // traceless eigenvector: fall back to the largest entry
        let big = m.iter().copied().fold(C64::new(0.0, 0.0), |acc, x| {
            if x.norm() > acc.norm() {
                x
            } else {
                acc
            }
        });
        big.conj() / c(big.norm().max(f64::MIN_POSITIVE), 0.0)
    };
    m *= phase;
    let h = linalg::hermitian_part(&m);
    let defect = (&h - &m).norm() / m.norm().max(f64::MIN_POSITIVE);
    let tr = h.trace().re;
    let h = if tr.abs() > 1e-300 { h / c(tr, 0.0) } else { h };
    (CMatrix::new(h).unwrap(), defect)
}

pub fn spectral_data(phi: &SuperOp, tol: &Tolerances) -> Result<SpectralData> {
    let n = phi.natural();
    let d2 = n.nrows();
    let ev = eigenvalues(n)?;
    let radius = ev[0].norm();
    let band = radius * (1.0 - tol.peripheral_band);
    let peripheral: Vec<C64> = ev.iter().copied().filter(|z| z.norm() >= band).collect();
    let peripheral_count = peripheral.len();
    // Perron-Frobenius eigenvalue: the peripheral one closest to +r
    let lead = peripheral
        .iter()
        .copied()
        .min_by(|a, b| (a - radius).norm().total_cmp(&(b - radius).norm()))
        .unwrap();
    let gap_ratio = if d2 > 1 && radius > 0.0 { ev[1].norm() / radius } else { 0.0 };

    let id = Mat::identity(d2, d2);
    let (right, s0, s1) = linalg::null_vector(&(n - &id * lead));
    let (left, _, _) = linalg::null_vector(&(n.adjoint() - &id * lead.conj()));
    let (pf_right, dr) = normalize_eigenmatrix(&right, phi.dim());
    let (pf_left, dl) = normalize_eigenmatrix(&left, phi.dim());

    let scale = n.norm().max(f64::MIN_POSITIVE);
    let degenerate = peripheral_count > 1 || s1 <= tol.peripheral_band * scale;
    Ok(SpectralData {
        eigenvalues: ev,
        radius,
        gap_ratio,
        pf_right,
        pf_left,
        peripheral_count,
        degenerate_peripheral: degenerate,
        hermitization_defect: [dr, dl],
        null_singular_values: [s0, s1],
    })
}

/// The facts a spectral primitivity decision rests on.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralCertificate {
    pub primitive: bool,
    pub peripheral_count: usize,
    pub simple: bool,
    /// `lambda_min / lambda_max` of the Perron-Frobenius eigenvector.
    pub pf_right_ratio: f64,
    /// Same for the adjoint's eigenvector.
    pub pf_left_ratio: f64,
    pub radius: f64,
    pub gap_ratio: f64,
}

fn eigen_ratio(m: &CMatrix) -> f64 {
    let e = HermEigen::new(m);
    if e.max() > 0.0 {
        e.min() / e.max()
    } else {
        f64::NEG_INFINITY
    }
}

pub fn certify(data: &SpectralData, tol: &Tolerances) -> Result<SpectralCertificate> {
    let r = data.radius;
    // eigenvalues just outside the band make the count unreliable
    let inner_edge = r * (1.0 - 100.0 * tol.peripheral_band);
    let band = r * (1.0 - tol.peripheral_band);
    if let Some(z) = data
        .eigenvalues
        .iter()
        .find(|z| z.norm() < band && z.norm() >= inner_edge)
    {
        return Err(Error::InconclusiveSpectrum {
            modulus: z.norm(),
            radius: r,
        });
    }
    let simple = data.peripheral_count == 1 && !data.degenerate_peripheral;
    let pf_right_ratio = eigen_ratio(&data.pf_right);
    let pf_left_ratio = eigen_ratio(&data.pf_left);
    let primitive = simple
        && r > 0.0
        && pf_right_ratio > tol.pf_positive_rel
        && pf_left_ratio > tol.pf_positive_rel;
    Ok(SpectralCertificate {
        primitive,
        peripheral_count: data.peripheral_count,
        simple,
        pf_right_ratio,
        pf_left_ratio,
        radius: r,
        gap_ratio: data.gap_ratio,
    })
}

pub fn is_primitive(phi: &SuperOp, tol: &Tolerances) -> Result<SpectralCertificate> {
    certify(&spectral_data(phi, tol)?, tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct MixingTrial {
    /// `e_n = |phi^n(a) - <rho, a> I|` for `n = 0..=n_max`.
    pub errors: Vec<f64>,
    /// Geometric-mean decay rate over the fitting window.
    pub rate: f64,
    pub window: (usize, usize),
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MixingReport {
    pub gap_ratio: f64,
    pub n_max: usize,
    pub trials: Vec<MixingTrial>,
    pub passed: bool,
}

impl MixingReport {
    /// Rows `(n, e_n)` for each trial, as CSV text.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,n,e_n\n");
        for (t, trial) in self.trials.iter().enumerate() {
            for (n, e) in trial.errors.iter().enumerate() {
                out.push_str(&format!("{t},{n},{e:e}\n"));
            }
        }
        out
    }
}

const MIXING_FLOOR: f64 = 1e-13;
const RATE_SLACK: f64 = 0.05;
const WINDOW_START: usize = 5;

pub fn mixing_horizon(gap_ratio: f64) -> usize {
    if gap_ratio <= 0.0 || !gap_ratio.is_finite() {
        return 1;
    }
    if gap_ratio >= 1.0 {
        return 200;
    }
    let n = (1e-12f64.ln() / gap_ratio.ln()).ceil();
    (n as usize).clamp(1, 200)
}

/// Checks `phi^n(a) -> <rho, a> I` on `trials` random unit-norm inputs, and
/// that the empirical decay rate is within `0.05` of the gap ratio.
pub fn strong_mixing_check(phi: &SuperOp, trials: usize, seed: u64, tol: &Tolerances) -> Result<MixingReport> {
    let defect = phi.unital_defect();
    if defect > tol.unital {
        return Err(Error::NotUnital { defect });
    }
    let data = spectral_data(phi, tol)?;
    let cert = certify(&data, tol)?;
    if !cert.primitive {
        return Err(Error::NotPrimitive("spectral certificate failed".into()));
    }
    let d = phi.dim();
    let n_max = mixing_horizon(data.gap_ratio);
    let rho = data.pf_left.as_mat();
    let id = Mat::identity(d, d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let g = linalg::gaussian_matrix(d, d, &mut rng);
        let a = &g / c(g.norm(), 0.0);
        out.push(mixing_trial(phi, &a, rho, &id, n_max, data.gap_ratio));
    }
    let passed = out.iter().all(|t| t.passed);
    Ok(MixingReport {
        gap_ratio: data.gap_ratio,
        n_max,
        trials: out,
        passed,
    })
}

fn mixing_trial(phi: &SuperOp, a: &Mat, rho: &Mat, id: &Mat, n_max: usize, gap: f64) -> MixingTrial {
    let limit = id * linalg::hs_inner(rho, a);
    let mut x = a.clone();
    let mut errors = Vec::with_capacity(n_max + 1);
    errors.push((&x - &limit).norm());
    for _ in 0..n_max {
        x = phi.apply_mat(&x);
        errors.push((&x - &limit).norm());
    }
    let start = WINDOW_START.min(n_max / 2);
    // stop the fit at floor contact
    let end = (start..=n_max)
        .find(|&n| errors[n] < MIXING_FLOOR)
        .unwrap_or(n_max);
    let rate = if errors[start] < MIXING_FLOOR || end == start {
        0.0
    } else {
        (errors[end] / errors[start]).powf(1.0 / (end - start) as f64)
    };
    let peak = errors.iter().copied().fold(0.0, f64::max);
    let last = errors[n_max];
    let converged = last <= MIXING_FLOOR.max(1e-6 * peak);
    MixingTrial {
        passed: converged && rate <= gap + RATE_SLACK,
        errors,
        rate,
        window: (start, end),
    }
}

/// Numerical form of "a primitive Schwarz map has spectral radius one iff
/// it is unital".
#[derive(Debug, Clone, Serialize)]
pub struct UnitalityRadiusReport {
    pub radius: f64,
    pub unit_defect: f64,
    pub radius_is_one: bool,
    pub unital: bool,
    pub consistent: bool,
}

pub fn unitality_radius_check(phi: &SuperOp, tol: &Tolerances) -> Result<UnitalityRadiusReport> {
    let data = spectral_data(phi, tol)?;
    if !certify(&data, tol)?.primitive {
        return Err(Error::NotPrimitive("spectral certificate failed".into()));
    }
    let unit_defect = phi.unital_defect();
    let radius_is_one = (data.radius - 1.0).abs() <= tol.radius_one;
    let unital = unit_defect <= tol.unit_defect;
    Ok(UnitalityRadiusReport {
        radius: data.radius,
        unit_defect,
        radius_is_one,
        unital,
        consistent: radius_is_one == unital,
    })
}
