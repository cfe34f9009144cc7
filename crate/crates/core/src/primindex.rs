//! Index of primitivity, Wielength, and the inequalities relating them to
//! the multiplicative-domain index.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{SearchBudget, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, HermEigen, Mat};
use crate::matrix::CMatrix;
use crate::multdomain;
use crate::positivity::{self, Status, Verdict};
use crate::spectral;
use crate::subspace::SubspaceBasis;
use crate::superop::SuperOp;

/// `2 (D - 1)^2`.
pub fn default_cap(dim: usize) -> usize {
    2 * (dim - 1) * (dim - 1)
}

/// Cap used when no Schwarz or 2-positivity credential is available.
pub fn fallback_cap(dim: usize) -> usize {
    dim.pow(4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexPath {
    /// Word spans of a Kraus list.
    Kraus,
    /// Minimum eigenvalue of `phi^n(v v*)`.
    General,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimitivityCertificate {
    pub q: usize,
    /// Verdicts for `n = 1..=q`.
    pub per_n: Vec<Verdict>,
    /// Re-verification at `n = q + 1, q + 2`.
    pub post_q: Vec<Verdict>,
    pub cap: usize,
    pub path: IndexPath,
    /// Dimension of the word span for `n = 1..=q + 2` (Kraus path only).
    pub span_profile: Vec<usize>,
    pub bound_2dminus1sq: usize,
    pub satisfied_2dminus1sq: bool,
    /// Steps below `q` whose verdict was undetermined rather than a
    /// witnessed failure.
    pub undetermined: Vec<usize>,
}

impl PrimitivityCertificate {
    /// Fails with witness below `q`, Holds at `q` and after.
    pub fn well_formed(&self) -> bool {
        let q = self.q;
        self.per_n.len() == q
            && self.per_n[..q - 1]
                .iter()
                .all(|v| v.status == Status::Fails && v.witness.is_some())
            && self.per_n[q - 1].holds()
            && self.post_q.iter().all(Verdict::holds)
    }
}

/// First `n <= cap` at which `phi^n` is strictly positive.
pub fn primitivity_index(phi: &SuperOp, cap: usize, budget: &SearchBudget, tol: &Tolerances) -> Result<PrimitivityCertificate> {
    if !spectral::is_primitive(phi, tol)?.primitive {
        return Err(Error::NotPrimitive("spectral certificate failed".into()));
    }
    let d = phi.dim();
    let mut per_n = Vec::new();
    let mut undetermined = Vec::new();
    let mut profile = Vec::new();
    let (path, q, post_q) = match phi.kraus() {
        Some(kraus) => {
            let gens: Vec<Mat> = kraus.iter().map(|k| k.as_mat().clone()).collect();
            let mut span = SubspaceBasis::span(d, &gens, tol.rank_rel);
            let mut found = None;
            for n in 1..=cap {
                if n > 1 {
                    span = extend_span(&gens, &span, tol.rank_rel);
                }
                profile.push(span.rank());
                let v = positivity::strict_positivity_of_span(&span, budget, tol);
                let holds = v.holds();
                if v.status == Status::Undetermined {
                    undetermined.push(n);
                }
                per_n.push(v);
                if holds {
                    found = Some(n);
                    break;
                }
            }
            let q = found.ok_or(Error::CapExceeded { cap })?;
            let mut post = Vec::new();
            for _ in 0..2 {
                span = extend_span(&gens, &span, tol.rank_rel);
                profile.push(span.rank());
                post.push(positivity::strict_positivity_of_span(&span, budget, tol));
            }
            (IndexPath::Kraus, q, post)
        }
        None => {
            let mut power = phi.clone();
            let mut found = None;
            for n in 1..=cap {
                if n > 1 {
                    power = power.compose(phi)?;
                }
                let v = positivity::is_strictly_positive(&power, budget, tol);
                let holds = v.holds();
                if v.status == Status::Undetermined {
                    undetermined.push(n);
                }
                per_n.push(v);
                if holds {
                    found = Some(n);
                    break;
                }
            }
            let q = found.ok_or(Error::CapExceeded { cap })?;
            let mut post = Vec::new();
            for _ in 0..2 {
                power = power.compose(phi)?;
                post.push(positivity::is_strictly_positive(&power, budget, tol));
            }
            (IndexPath::General, q, post)
        }
    };
    let bound = default_cap(d);
    Ok(PrimitivityCertificate {
        q,
        per_n,
        post_q,
        cap,
        path,
        span_profile: profile,
        bound_2dminus1sq: bound,
        satisfied_2dminus1sq: q <= bound,
        undetermined,
    })
}

/// `span(S * B)` for an orthonormal basis `B`.
fn extend_span(gens: &[Mat], current: &SubspaceBasis, rel: f64) -> SubspaceBasis {
    extend_span_with_values(gens, current, rel).0
}

fn extend_span_with_values(gens: &[Mat], current: &SubspaceBasis, rel: f64) -> (SubspaceBasis, Vec<f64>) {
    let d = current.dim();
    let basis: Vec<Mat> = current.basis().into_iter().map(Mat::from).collect();
    let products: Vec<Mat> = gens
        .iter()
        .flat_map(|g| basis.iter().map(move |b| g * b))
        .collect();
    SubspaceBasis::span_with_values(d, &products, rel)
}

#[derive(Debug, Clone, Serialize)]
pub struct WielengthResult {
    pub value: usize,
    /// `dim span S^k` for `k = 1..=value`.
    pub profile: Vec<usize>,
    /// A singular value sat near the rank threshold and the tighter re-run
    /// disagreed.
    pub tolerance_warning: bool,
    /// Profile at the 10x tighter threshold, when it was computed.
    pub tight_profile: Option<Vec<usize>>,
}

fn span_profile(gens: &[Mat], d: usize, cap: usize, rel: f64) -> (Vec<usize>, bool) {
    let near = |sv: &[f64]| {
        let smax = sv.first().copied().unwrap_or(0.0);
        sv.iter().any(|&s| s > 0.1 * rel * smax && s <= 10.0 * rel * smax)
    };
    let (mut span, sv) = SubspaceBasis::span_with_values(d, gens, rel);
    let mut ambiguous = near(&sv);
    let mut profile = vec![span.rank()];
    while span.rank() < d * d && profile.len() < cap {
        let (next, sv) = extend_span_with_values(gens, &span, rel);
        ambiguous |= near(&sv);
        span = next;
        profile.push(span.rank());
    }
    (profile, ambiguous)
}

/// Least `k <= cap` with `span S^k = M_D`.
pub fn wielength(s: &[CMatrix], cap: usize, tol: &Tolerances) -> Result<WielengthResult> {
    let first = s.first().ok_or(Error::EmptySet)?;
    let d = first.dim();
    if let Some(bad) = s.iter().find(|m| m.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim(),
        });
    }
    let gens: Vec<Mat> = s.iter().map(|m| m.as_mat().clone()).collect();
    let full = |p: &[usize]| p.last() == Some(&(d * d));
    let (profile, ambiguous) = span_profile(&gens, d, cap, tol.rank_rel);
    let (tight_profile, warning) = if ambiguous {
        let (tight, _) = span_profile(&gens, d, cap, tol.rank_rel / 10.0);
        let differs = tight != profile;
        (Some(tight), differs)
    } else {
        (None, false)
    };
    if !full(&profile) {
        return Err(Error::WielengthCapExceeded { cap, profile });
    }
    Ok(WielengthResult {
        value: profile.len(),
        profile,
        tolerance_warning: warning,
        tight_profile,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WielengthVsQ {
    /// `None` when the span did not fill by the cap.
    pub wielength: Option<usize>,
    pub profile: Vec<usize>,
    pub q: usize,
    /// `Wiel - q`.
    pub gap: Option<i64>,
    pub holds: bool,
}

pub fn check_wielength_ge_q(s: &[CMatrix], cap: usize, budget: &SearchBudget, tol: &Tolerances) -> Result<WielengthVsQ> {
    let phi = SuperOp::from_kraus(s.to_vec())?;
    let q = primitivity_index(&phi, cap, budget, tol)?.q;
    Ok(match wielength(s, cap, tol) {
        Ok(w) => WielengthVsQ {
            wielength: Some(w.value),
            gap: Some(w.value as i64 - q as i64),
            holds: w.value >= q,
            profile: w.profile,
            q,
        },
        // not filled by the cap while q <= cap: Wiel > cap >= q
        Err(Error::WielengthCapExceeded { profile, .. }) => WielengthVsQ {
            wielength: None,
            gap: None,
            holds: true,
            profile,
            q,
        },
        Err(e) => return Err(e),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QKappaReport {
    pub q: usize,
    pub kappa: usize,
    pub bound: usize,
    pub holds: bool,
}

/// `q <= (D - 1) kappa` for a primitive unital Schwarz map.
pub fn check_q_vs_kappa(phi: &SuperOp, budget: &SearchBudget, tol: &Tolerances) -> Result<QKappaReport> {
    let d = phi.dim();
    let q = primitivity_index(phi, default_cap(d).max(1), budget, tol)?.q;
    let rho = spectral::spectral_data(phi, tol)?.pf_left;
    let kappa = multdomain::kappa(phi, &rho, tol)?.kappa;
    let bound = (d - 1) * kappa;
    Ok(QKappaReport {
        q,
        kappa,
        bound,
        holds: q <= bound,
    })
}

fn image_rank(x: &Mat, rel: f64) -> usize {
    let e = HermEigen::new(x);
    let thr = rel * e.max().max(0.0);
    e.values.iter().filter(|&&v| v > thr).count()
}

#[derive(Debug, Clone, Serialize)]
pub struct RankMonotonicityReport {
    pub kappa: usize,
    pub trials_per_rank: usize,
    /// Smallest observed `rank(phi^kappa(p)) - rank(p)` for each rank of `p`.
    pub min_gain: Vec<usize>,
}

/// `rank(phi^kappa(p)) > rank(p)` on random projections of every rank
/// `1..D`.
pub fn rank_monotonicity_check(phi: &SuperOp, kappa: usize, trials: usize, seed: u64, tol: &Tolerances) -> Result<RankMonotonicityReport> {
    let d = phi.dim();
    let power = phi.power(kappa);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_gain = Vec::with_capacity(d - 1);
    for r in 1..d {
        let mut gain = usize::MAX;
        for _ in 0..trials {
            let p = linalg::random_projection(d, r, &mut rng);
            let k = image_rank(&power.apply_mat(&p), tol.image_rank_rel);
            if k <= r {
                return Err(Error::RankViolation {
                    rank_p: r,
                    rank_image: k,
                    projection: CMatrix::new(p)?,
                });
            }
            gain = gain.min(k - r);
        }
        min_gain.push(if trials == 0 { 0 } else { gain });
    }
    Ok(RankMonotonicityReport {
        kappa,
        trials_per_rank: trials,
        min_gain,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IrreducibilityFinding {
    pub rank: usize,
    /// Random target or the top eigenprojection of the image.
    pub adversarial: bool,
    pub residual: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrreducibilityReport {
    pub kappa: usize,
    pub pairs_tested: usize,
    pub findings: Vec<IrreducibilityFinding>,
}

/// Top-`r` eigenprojection of a Hermitian matrix.
fn top_projection(x: &Mat, r: usize) -> Mat {
    let e = HermEigen::new(x);
    let n = x.nrows();
    let cols = e.vectors.columns(n - r, r).into_owned();
    &cols * cols.adjoint()
}

/// Searches for `p ~ q` with `range(phi^kappa(p)) ⊆ range(q)`.
///
/// Each random `p` is tested against a random `q` of the same rank and
/// against the range projection of the top `rank(p)` eigenvectors of its
/// image, which is the only candidate that can succeed.
pub fn full_irreducibility_probe(phi: &SuperOp, kappa: usize, trials: usize, seed: u64, tol: &Tolerances) -> IrreducibilityReport {
    let d = phi.dim();
    let power = phi.power(kappa);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut findings = Vec::new();
    let mut pairs = 0;
    let id = Mat::identity(d, d);
    for r in 1..d {
        for _ in 0..trials {
            let p = linalg::random_projection(d, r, &mut rng);
            let x = linalg::hermitian_part(&power.apply_mat(&p));
            let xn = x.norm();
            let candidates = [
                (linalg::random_projection(d, r, &mut rng), false),
                (top_projection(&x, r), true),
            ];
            for (q, adversarial) in candidates {
                pairs += 1;
                let residual = if xn > 0.0 { ((&id - &q) * &x).norm() / xn } else { 0.0 };
                if residual <= tol.image_rank_rel {
                    let lambda = HermEigen::new(&(&q * &x * &q)).max();
                    findings.push(IrreducibilityFinding {
                        rank: r,
                        adversarial,
                        residual,
                        lambda,
                    });
                }
            }
        }
    }
    IrreducibilityReport {
        kappa,
        pairs_tested: pairs,
        findings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn depolarizing_index_is_one() {
        let tol = Tolerances::default();
        let phi = generators::depolarizing(3).unwrap();
        let cert = primitivity_index(&phi, default_cap(3), &budget(), &tol).unwrap();
        assert_eq!(cert.q, 1);
        assert!(cert.well_formed());
        let general = SuperOp::from_natural(3, phi.natural().clone()).unwrap();
        let cert = primitivity_index(&general, default_cap(3), &budget(), &tol).unwrap();
        assert_eq!(cert.q, 1);
        assert_eq!(cert.path, IndexPath::General);
    }

    #[test]
    fn wielandt_three_has_index_five() {
        let tol = Tolerances::default();
        let phi = generators::wielandt_digraph(3).unwrap();
        let cert = primitivity_index(&phi, default_cap(3), &budget(), &tol).unwrap();
        assert_eq!(cert.q, 5);
        assert!(cert.well_formed());
        assert!(cert.satisfied_2dminus1sq);
        for v in &cert.per_n[..4] {
            let w = v.witness.as_ref().unwrap();
            assert!(matches!(w, positivity::Witness::Pair { .. }));
        }
    }

    #[test]
    fn cap_exceeded_is_reported() {
        let tol = Tolerances::default();
        let phi = generators::wielandt_digraph(3).unwrap();
        assert!(matches!(
            primitivity_index(&phi, 4, &budget(), &tol),
            Err(Error::CapExceeded { cap: 4 })
        ));
    }

    #[test]
    fn general_path_matches_kraus_path() {
        let tol = Tolerances::default();
        let phi = generators::random_cp(3, 2, 4).unwrap();
        let a = primitivity_index(&phi, 20, &budget(), &tol).unwrap();
        let general = SuperOp::from_natural(3, phi.natural().clone()).unwrap();
        let b = primitivity_index(&general, 20, &budget(), &tol).unwrap();
        assert_eq!(a.q, b.q);
        assert!(b.well_formed());
    }

    #[test]
    fn wielength_of_units_and_scalars() {
        let tol = Tolerances::default();
        let units: Vec<CMatrix> = (0..3)
            .flat_map(|i| (0..3).map(move |j| CMatrix::unit(3, i, j)))
            .collect();
        let w = wielength(&units, 10, &tol).unwrap();
        assert_eq!(w.value, 1);
        assert_eq!(w.profile, vec![9]);
        match wielength(&[CMatrix::identity(2)], 6, &tol) {
            Err(Error::WielengthCapExceeded { profile, .. }) => assert_eq!(profile, vec![1; 6]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(wielength(&[], 3, &tol), Err(Error::EmptySet)));
        let rep = check_wielength_ge_q(&units, 10, &budget(), &tol).unwrap();
        assert_eq!((rep.wielength, rep.q), (Some(1), 1));
    }

    #[test]
    fn wielength_profile_is_non_decreasing() {
        let tol = Tolerances::default();
        let phi = generators::random_cp(4, 2, 2).unwrap();
        let w = wielength(phi.kraus().unwrap(), 30, &tol).unwrap();
        assert!(w.profile.windows(2).all(|p| p[0] <= p[1]));
        assert_eq!(*w.profile.last().unwrap(), 16);
    }

    #[test]
    fn rank_grows_under_depolarizing() {
        let tol = Tolerances::default();
        let phi = generators::depolarizing(3).unwrap();
        let rep = rank_monotonicity_check(&phi, 1, 10, 0, &tol).unwrap();
        assert_eq!(rep.min_gain, vec![2, 1]);
        assert!(full_irreducibility_probe(&phi, 1, 10, 0, &tol).findings.is_empty());
    }

    #[test]
    fn rank_violation_on_identity() {
        let tol = Tolerances::default();
        let phi = SuperOp::identity(2).unwrap();
        assert!(matches!(
            rank_monotonicity_check(&phi, 1, 3, 0, &tol),
            Err(Error::RankViolation { rank_p: 1, rank_image: 1, .. })
        ));
    }

    #[test]
    fn probe_detects_unitary_conjugation() {
        let tol = Tolerances::default();
        let h = 1.0 / 2f64.sqrt();
        let u = CMatrix::from_real_rows(&[vec![h, h], vec![h, -h]]).unwrap();
        let phi = generators::unitary_conj(&u).unwrap();
        let rep = full_irreducibility_probe(&phi, 1, 5, 1, &tol);
        assert!(rep.findings.iter().any(|f| f.adversarial));
        assert!(rep.findings.iter().all(|f| (f.lambda - 1.0).abs() < 1e-9));
    }

    #[test]
    fn q_kappa_on_depolarizing() {
        let tol = Tolerances::default();
        let phi = generators::depolarizing(3).unwrap();
        let r = check_q_vs_kappa(&phi, &budget(), &tol).unwrap();
        assert_eq!((r.q, r.kappa, r.bound), (1, 1, 2));
        assert!(r.holds);
    }
}
