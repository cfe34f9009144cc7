//! Deciders and semi-deciders for the positivity hierarchy.
//!
//! Complete positivity is decided exactly through the Choi spectrum, and
//! strict positivity of a Kraus map through the rank-one search in the
//! orthocomplement of its Kraus span. Positivity, 2-positivity and the
//! Schwarz inequality are quantified over continuous sets; the searches can
//! falsify them but only report a tolerance-qualified `Holds` (positivity)
//! or `Undetermined`, unless a sufficient algebraic condition applies.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::config::{SearchBudget, Tolerances};
use crate::io::{json_matrix, json_vector};
use crate::linalg::{self, c, hermitian_part, lambda_min, HermEigen, Mat, Vector};
use crate::matrix::CMatrix;
use crate::optimize::{self, SearchOutcome};
use crate::subspace::SubspaceBasis;
use crate::superop::SuperOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    Undetermined,
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exact algebraic test (Choi spectrum, full word span).
    Exact,
    /// Implied by a stronger property that was decided exactly.
    Sufficient,
    /// Multistart sphere search.
    Search,
}

#[derive(Debug, Clone)]
pub enum Witness {
    Matrix(CMatrix),
    Vector(Vector),
    Pair { v: Vector, w: Vector },
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        match self {
            Witness::Matrix(m) => {
                map.serialize_entry("kind", "matrix")?;
                map.serialize_entry("matrix", &json_matrix(m))?;
            }
            Witness::Vector(v) => {
                map.serialize_entry("kind", "vector")?;
                map.serialize_entry("vector", &json_vector(v))?;
            }
            Witness::Pair { v, w } => {
                map.serialize_entry("kind", "pair")?;
                map.serialize_entry("v", &json_vector(v))?;
                map.serialize_entry("w", &json_vector(w))?;
            }
        }
        map.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchEffort {
    pub method: Method,
    pub starts: usize,
    pub iterations: usize,
    pub evaluations: usize,
}

impl SearchEffort {
    fn algebraic(method: Method) -> Self {
        Self {
            method,
            starts: 0,
            iterations: 0,
            evaluations: 0,
        }
    }

    fn from_search(out: &SearchOutcome) -> Self {
        Self {
            method: Method::Search,
            starts: out.starts_run,
            iterations: out.iterations,
            evaluations: out.evaluations,
        }
    }
}

/// Thresholds a verdict was judged against: `value >= pass` holds,
/// `value < fail` fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerdictTolerances {
    pub pass: f64,
    pub fail: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub value: f64,
    pub witness: Option<Witness>,
    pub effort: SearchEffort,
    pub tolerances: VerdictTolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }

    fn sufficient(note: &str, value: f64, tolerances: VerdictTolerances) -> Self {
        Verdict {
            status: Status::Holds,
            value,
            witness: None,
            effort: SearchEffort::algebraic(Method::Sufficient),
            tolerances,
            note: Some(note.to_string()),
        }
    }
}

/// Which property a witness is meant to violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    CompletelyPositive,
    Positive,
    TwoPositive,
    Schwarz,
}

fn search_tolerances(tol: &Tolerances) -> VerdictTolerances {
    // Fails needs a violation 10x past the pass threshold; the band between
    // is reported as undetermined.
    VerdictTolerances {
        pass: -tol.search_pass,
        fail: -10.0 * tol.search_pass,
    }
}

fn classify(value: f64, t: VerdictTolerances, allow_holds: bool) -> Status {
    if value < t.fail {
        Status::Fails
    } else if allow_holds && value >= t.pass {
        Status::Holds
    } else {
        Status::Undetermined
    }
}

fn unit_matrices(d: usize) -> impl Iterator<Item = (usize, usize, Mat)> {
    (0..d).flat_map(move |j| (0..d).map(move |i| (i, j, linalg::unit_matrix(d, i, j))))
}

pub fn is_completely_positive(phi: &SuperOp, tol: &Tolerances) -> Verdict {
    let e = HermEigen::new(&phi.to_choi());
    let thr = tol.psd_rel * e.max().max(0.0);
    let tolerances = VerdictTolerances {
        pass: -thr,
        fail: -thr,
    };
    let (status, witness) = if e.min() >= -thr {
        (Status::Holds, None)
    } else {
        let v = e.vector(0);
        let w = CMatrix::new(linalg::devec(v.as_slice(), phi.dim())).unwrap();
        (Status::Fails, Some(Witness::Matrix(w)))
    };
    Verdict {
        status,
        value: e.min(),
        witness,
        effort: SearchEffort::algebraic(Method::Exact),
        tolerances,
        note: None,
    }
}

/// `x -> (lambda_min(H(psi(x x*))), 2 H(psi*(u u*)) x)` for a map `psi`
/// given with its adjoint.
fn lambda_min_objective<'a, A, B>(apply: A, adjoint: B) -> impl Fn(&[Vector]) -> (f64, Vec<Vector>) + 'a
where
    A: Fn(&Mat) -> Mat + 'a,
    B: Fn(&Mat) -> Mat + 'a,
{
    move |x: &[Vector]| {
        let v = &x[0];
        let image = apply(&(v * v.adjoint()));
        let (lam, u) = lambda_min(&image);
        let m = hermitian_part(&adjoint(&(&u * u.adjoint())));
        (lam, vec![&m * v * c(2.0, 0.0)])
    }
}

/// Multistart search for `min_v lambda_min(apply(v v*))`, each endpoint
/// polished by alternating exact minimization over `v` and the output
/// eigenvector.
fn lambda_min_search<A, B>(apply: A, adjoint: B, n: usize, budget: &SearchBudget, starts: usize, stop_below: f64) -> SearchOutcome
where
    A: Fn(&Mat) -> Mat + Copy,
    B: Fn(&Mat) -> Mat + Copy,
{
    let value = move |v: &Vector| lambda_min(&apply(&(v * v.adjoint())));
    let polish = move |x: &mut Vec<Vector>| {
        let (mut current, mut u) = value(&x[0]);
        for _ in 0..200 {
            let (_, v) = lambda_min(&adjoint(&(&u * u.adjoint())));
            let (val, u2) = value(&v);
            if !(val < current) {
                break;
            }
            x[0] = v;
            u = u2;
            current = val;
        }
    };
    optimize::multistart_with(&[n], lambda_min_objective(apply, adjoint), polish, budget, starts, Some(stop_below))
}

pub fn check_positive(phi: &SuperOp, budget: &SearchBudget, tol: &Tolerances) -> Verdict {
    let t = search_tolerances(tol);
    let cp = is_completely_positive(phi, tol);
    if cp.holds() {
        return Verdict::sufficient("completely positive", cp.value, t);
    }
    let d = phi.dim();
    let out = lambda_min_search(
        |a: &Mat| phi.apply_mat(a),
        |a: &Mat| phi.apply_adjoint_mat(a),
        d,
        budget,
        budget.starts_for(d),
        t.fail,
    );
    let status = classify(out.best.value, t, true);
    Verdict {
        status,
        value: out.best.value,
        witness: (status == Status::Fails).then(|| Witness::Vector(out.best.point[0].clone())),
        effort: SearchEffort::from_search(&out),
        tolerances: t,
        note: None,
    }
}

fn blockwise(x: &Mat, d: usize, f: impl Fn(&Mat) -> Mat) -> Mat {
    let mut out = Mat::zeros(2 * d, 2 * d);
    for a in 0..2 {
        for b in 0..2 {
            let block = x.view((a * d, b * d), (d, d)).into_owned();
            out.view_mut((a * d, b * d), (d, d)).copy_from(&f(&block));
        }
    }
    out
}

/// `(phi ⊗ Id_2)(x)` on `M_2(M_D)`, i.e. `phi` applied to each `D x D` block.
pub fn apply_tensor_id2(phi: &SuperOp, x: &Mat) -> Mat {
    blockwise(x, phi.dim(), |b| phi.apply_mat(b))
}

pub fn check_two_positive(phi: &SuperOp, budget: &SearchBudget, tol: &Tolerances) -> Verdict {
    let t = search_tolerances(tol);
    let cp = is_completely_positive(phi, tol);
    if cp.holds() {
        return Verdict::sufficient("completely positive", cp.value, t);
    }
    let d = phi.dim();
    let out = lambda_min_search(
        |x: &Mat| blockwise(x, d, |b| phi.apply_mat(b)),
        |x: &Mat| blockwise(x, d, |b| phi.apply_adjoint_mat(b)),
        2 * d,
        budget,
        budget.starts_for(d),
        t.fail,
    );
    let status = classify(out.best.value, t, false);
    Verdict {
        status,
        value: out.best.value,
        witness: (status == Status::Fails).then(|| Witness::Vector(out.best.point[0].clone())),
        effort: SearchEffort::from_search(&out),
        tolerances: t,
        note: None,
    }
}

/// `phi(a* a) - phi(a)* phi(a)`.
pub fn schwarz_deficiency(phi: &SuperOp, a: &Mat) -> Mat {
    let pa = phi.apply_mat(a);
    phi.apply_mat(&(a.adjoint() * a)) - pa.adjoint() * &pa
}

fn schwarz_objective(phi: &SuperOp) -> impl Fn(&[Vector]) -> (f64, Vec<Vector>) + '_ {
    let d = phi.dim();
    move |x: &[Vector]| {
        let a = linalg::devec(x[0].as_slice(), d);
        let pa = phi.apply_mat(&a);
        let def = phi.apply_mat(&(a.adjoint() * &a)) - pa.adjoint() * &pa;
        let (lam, u) = lambda_min(&def);
        let uu = &u * u.adjoint();
        let n = hermitian_part(&phi.apply_adjoint_mat(&uu));
        let grad = (&a * &n) * c(2.0, 0.0) - phi.apply_adjoint_mat(&(&pa * &uu)) * c(2.0, 0.0);
        (lam, vec![linalg::vec_of(&grad)])
    }
}

pub fn check_schwarz(phi: &SuperOp, budget: &SearchBudget, tol: &Tolerances) -> Verdict {
    let t = search_tolerances(tol);
    if phi.is_unital(tol) {
        let two = check_two_positive(phi, budget, tol);
        if two.holds() {
            return Verdict::sufficient("unital and 2-positive", two.value, t);
        }
    }
    let d = phi.dim();
    let obj = schwarz_objective(phi);
    let out = optimize::multistart(&[d * d], obj, budget, budget.starts_for(d), Some(t.fail));
    let status = classify(out.best.value, t, false);
    let witness = (status == Status::Fails).then(|| {
        Witness::Matrix(CMatrix::new(linalg::devec(out.best.point[0].as_slice(), d)).unwrap())
    });
    Verdict {
        status,
        value: out.best.value,
        witness,
        effort: SearchEffort::from_search(&out),
        tolerances: t,
        note: None,
    }
}

/// `sum_k |w* B_k v|^2` over an orthonormal basis `B_k` of the span, which
/// is `|P_W(w v*)|^2`.
pub fn span_pair_value(basis: &[Mat], v: &Vector, w: &Vector) -> f64 {
    basis.iter().map(|b| w.dotc(&(b * v)).norm_sqr()).sum()
}

fn span_objective(basis: &[Mat]) -> impl Fn(&[Vector]) -> (f64, Vec<Vector>) + '_ {
    move |x: &[Vector]| {
        let (v, w) = (&x[0], &x[1]);
        let n = v.len();
        let mut f = 0.0;
        let mut gv = Vector::zeros(n);
        let mut gw = Vector::zeros(n);
        for b in basis {
            let bv = b * v;
            let ck = w.dotc(&bv);
            f += ck.norm_sqr();
            gv += b.ad_mul(w) * (ck * c(2.0, 0.0));
            gw += bv * (ck.conj() * c(2.0, 0.0));
        }
        (f, vec![gv, gw])
    }
}

/// Exact block minimization: `w` then `v` as bottom eigenvectors.
fn alternate_pair(basis: &[Mat], x: &mut [Vector], sweeps: usize) {
    let n = x[0].len();
    let mut current = span_pair_value(basis, &x[0], &x[1]);
    for _ in 0..sweeps {
        let mut mv = Mat::zeros(n, n);
        for b in basis {
            let bv = b * &x[0];
            mv += &bv * bv.adjoint();
        }
        let (_, w) = lambda_min(&mv);
        let mut mw = Mat::zeros(n, n);
        for b in basis {
            let bw = b.ad_mul(&w);
            mw += &bw * bw.adjoint();
        }
        let (val, v) = lambda_min(&mw);
        if !(val < current) {
            break;
        }
        let improved = current - val;
        x[0] = v;
        x[1] = w;
        current = val;
        if improved <= 1e-3 * current {
            break;
        }
    }
}

/// Strict positivity of a map through its Kraus span `W`: the map is
/// strictly positive iff `W^⊥` holds no rank-one matrix.
pub fn strict_positivity_of_span(span: &SubspaceBasis, budget: &SearchBudget, tol: &Tolerances) -> Verdict {
    let d = span.dim();
    let t = VerdictTolerances {
        pass: tol.search_pass,
        fail: tol.search_zero,
    };
    if span.rank() == d * d {
        return Verdict {
            status: Status::Holds,
            value: 1.0,
            witness: None,
            effort: SearchEffort::algebraic(Method::Exact),
            tolerances: t,
            note: Some("Kraus span is the full matrix algebra".into()),
        };
    }
    let basis: Vec<Mat> = span.basis().into_iter().map(Mat::from).collect();
    let obj = span_objective(&basis);
    let out = optimize::multistart_with(
        &[d, d],
        obj,
        |x| alternate_pair(&basis, x, 200),
        budget,
        budget.starts_for(d),
        Some(t.fail),
    );
    let value = out.best.value;
    let status = if value < t.fail {
        Status::Fails
    } else if value >= t.pass {
        Status::Holds
    } else {
        Status::Undetermined
    };
    let witness = (status == Status::Fails).then(|| Witness::Pair {
        v: out.best.point[0].clone(),
        w: out.best.point[1].clone(),
    });
    Verdict {
        status,
        value,
        witness,
        effort: SearchEffort::from_search(&out),
        tolerances: t,
        note: None,
    }
}

pub fn is_strictly_positive(phi: &SuperOp, budget: &SearchBudget, tol: &Tolerances) -> Verdict {
    let d = phi.dim();
    if let Some(kraus) = phi.kraus() {
        let mats: Vec<Mat> = kraus.iter().map(|k| k.as_mat().clone()).collect();
        let span = SubspaceBasis::span(d, &mats, tol.rank_rel);
        return strict_positivity_of_span(&span, budget, tol);
    }
    let id = Mat::identity(d, d);
    let e = HermEigen::new(&phi.apply_mat(&id));
    let median = e.values[e.values.len() / 2];
    let scale = if median > 0.0 { median } else { e.scale().max(f64::MIN_POSITIVE) };
    let t = VerdictTolerances {
        pass: tol.search_pass * scale,
        fail: tol.search_zero * scale,
    };
    let out = lambda_min_search(
        |a: &Mat| phi.apply_mat(a),
        |a: &Mat| phi.apply_adjoint_mat(a),
        d,
        budget,
        budget.starts_for(d),
        t.fail,
    );
    let value = out.best.value;
    let status = if value < t.fail {
        Status::Fails
    } else if value >= t.pass {
        Status::Holds
    } else {
        Status::Undetermined
    };
    Verdict {
        status,
        value,
        witness: (status == Status::Fails).then(|| Witness::Vector(out.best.point[0].clone())),
        effort: SearchEffort::from_search(&out),
        tolerances: t,
        note: None,
    }
}

/// Re-evaluates a witness from scratch, without the search machinery.
/// Returns the violated quantity (negative when the witness is genuine).
pub fn witness_value(phi: &SuperOp, property: Property, witness: &Witness) -> Option<f64> {
    let d = phi.dim();
    match (property, witness) {
        (Property::CompletelyPositive, Witness::Matrix(m)) => {
            // rebuild the Choi matrix by evaluating phi on matrix units
            let mut choi = Mat::zeros(d * d, d * d);
            for (i, j, e) in unit_matrices(d) {
                let img = phi.apply_mat(&e);
                choi.view_mut((i * d, j * d), (d, d)).copy_from(&img);
            }
            let v = m.vectorize();
            let n = v.norm_squared();
            Some(v.dotc(&(&choi * &v)).re / n)
        }
        (Property::Positive, Witness::Vector(v)) => {
            let img = phi.apply_mat(&(v * v.adjoint()));
            Some(HermEigen::new(&img).min() / v.norm_squared())
        }
        (Property::TwoPositive, Witness::Vector(w)) => {
            let img = apply_tensor_id2(phi, &(w * w.adjoint()));
            Some(HermEigen::new(&img).min() / w.norm_squared())
        }
        (Property::Schwarz, Witness::Matrix(a)) => {
            let n = a.hs_norm().powi(2);
            Some(HermEigen::new(&schwarz_deficiency(phi, a)).min() / n)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gaussian_matrix;
    use crate::superop::transpose_natural;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn transpose2() -> SuperOp {
        SuperOp::from_natural(2, transpose_natural(2)).unwrap()
    }

    fn finite_difference_check<F>(obj: F, x: Vec<Vector>, seed: u64)
    where
        F: Fn(&[Vector]) -> (f64, Vec<Vector>),
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f0, g) = obj(&x);
        for _ in 0..5 {
            let dir: Vec<Vector> = x.iter().map(|b| linalg::random_unit_vector(b.len(), &mut rng)).collect();
            let h = 1e-6;
            let xp: Vec<Vector> = x.iter().zip(&dir).map(|(b, d)| b + d * c(h, 0.0)).collect();
            let xm: Vec<Vector> = x.iter().zip(&dir).map(|(b, d)| b - d * c(h, 0.0)).collect();
            let fd = (obj(&xp).0 - obj(&xm).0) / (2.0 * h);
            let an: f64 = g.iter().zip(&dir).map(|(gb, db)| gb.dotc(db).re).sum();
            assert!((fd - an).abs() < 1e-5 * (1.0 + an.abs()), "fd {fd} vs analytic {an} (f0 {f0})");
        }
    }

    fn random_map(d: usize, seed: u64) -> SuperOp {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = gaussian_matrix(d * d, d * d, &mut rng);
        SuperOp::from_natural(d, n).unwrap()
    }

    #[test]
    fn gradients_match_finite_differences() {
        let phi = random_map(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = linalg::random_unit_vector(3, &mut rng);
        finite_difference_check(
            lambda_min_objective(|a| phi.apply_mat(a), |a| phi.apply_adjoint_mat(a)),
            vec![v],
            3,
        );
        let a = linalg::random_unit_vector(9, &mut rng);
        finite_difference_check(schwarz_objective(&phi), vec![a], 4);
        let basis: Vec<Mat> = (0..3).map(|_| gaussian_matrix(3, 3, &mut rng)).collect();
        let v = linalg::random_unit_vector(3, &mut rng);
        let w = linalg::random_unit_vector(3, &mut rng);
        finite_difference_check(span_objective(&basis), vec![v, w], 5);
    }

    #[test]
    fn identity_is_completely_positive() {
        let id = SuperOp::identity(3).unwrap();
        let tol = Tolerances::default();
        let budget = SearchBudget::default();
        assert!(is_completely_positive(&id, &tol).holds());
        assert!(check_two_positive(&id, &budget, &tol).holds());
        assert!(check_schwarz(&id, &budget, &tol).holds());
    }

    #[test]
    fn transpose_fails_complete_positivity_with_antisymmetric_witness() {
        let t = transpose2();
        let tol = Tolerances::default();
        let v = is_completely_positive(&t, &tol);
        assert!(v.fails());
        assert!((v.value + 1.0).abs() < 1e-12);
        let Some(Witness::Matrix(w)) = &v.witness else { panic!("matrix witness expected") };
        // eigenvector of the swap with eigenvalue -1 is antisymmetric
        assert!((w.as_mat() + w.transpose()).norm() < 1e-10);
        let again = witness_value(&t, Property::CompletelyPositive, v.witness.as_ref().unwrap()).unwrap();
        assert!(again < -10.0 * tol.psd_rel);
    }

    #[test]
    fn transpose_is_positive_but_not_two_positive() {
        let t = transpose2();
        let tol = Tolerances::default();
        let budget = SearchBudget::default();
        assert!(check_positive(&t, &budget, &tol).holds());
        let two = check_two_positive(&t, &budget, &tol);
        assert!(two.fails());
        assert!((two.value + 0.5).abs() < 1e-8, "value {}", two.value);
        let again = witness_value(&t, Property::TwoPositive, two.witness.as_ref().unwrap()).unwrap();
        assert!(again < -10.0 * tol.search_pass);
    }

    #[test]
    fn maximally_entangled_vector_violates_two_positivity_of_transpose() {
        let t = transpose2();
        let h = 1.0 / 2f64.sqrt();
        let omega = Vector::from_vec(vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]);
        let val = witness_value(&t, Property::TwoPositive, &Witness::Vector(omega)).unwrap();
        assert!((val + 0.5).abs() < 1e-14);
    }

    #[test]
    fn transpose_violates_schwarz_at_e01() {
        let t = transpose2();
        let e01 = CMatrix::unit(2, 0, 1);
        let val = witness_value(&t, Property::Schwarz, &Witness::Matrix(e01)).unwrap();
        assert!((val + 1.0).abs() < 1e-14);
        let v = check_schwarz(&t, &SearchBudget::default(), &Tolerances::default());
        assert!(v.fails());
        assert!(witness_value(&t, Property::Schwarz, v.witness.as_ref().unwrap()).unwrap() < -1e-7);
    }

    #[test]
    fn trace_minus_scaled_transpose_is_not_positive() {
        // phi(a) = Tr(a) I / 2 - 0.6 a^T
        let phi = SuperOp::from_fn(2, |a| {
            Mat::identity(2, 2) * (a.trace() * c(0.5, 0.0)) - a.transpose() * c(0.6, 0.0)
        })
        .unwrap();
        // grid oracle over Bloch-sphere pure states
        let mut grid_min = f64::INFINITY;
        for i in 0..=40 {
            for j in 0..80 {
                let th = std::f64::consts::PI * i as f64 / 40.0;
                let ph = 2.0 * std::f64::consts::PI * j as f64 / 80.0;
                let v = Vector::from_vec(vec![
                    c((th / 2.0).cos(), 0.0),
                    c(ph.cos(), ph.sin()) * c((th / 2.0).sin(), 0.0),
                ]);
                let img = phi.apply_mat(&(&v * v.adjoint()));
                grid_min = grid_min.min(HermEigen::new(&img).min());
            }
        }
        assert!(grid_min < 0.0);
        let verdict = check_positive(&phi, &SearchBudget::default(), &Tolerances::default());
        assert!(verdict.fails());
        assert!(verdict.value <= grid_min + 1e-9);
        let again = witness_value(&phi, Property::Positive, verdict.witness.as_ref().unwrap()).unwrap();
        assert!(again < -1e-7);
    }

    #[test]
    fn identity_is_not_strictly_positive() {
        let id = SuperOp::identity(3).unwrap();
        let v = is_strictly_positive(&id, &SearchBudget::default(), &Tolerances::default());
        assert!(v.fails());
        let Some(Witness::Pair { v: x, w }) = &v.witness else { panic!("pair witness expected") };
        assert!(w.dotc(x).norm() < 1e-6);
    }

    #[test]
    fn natural_only_identity_fails_general_path() {
        let id = SuperOp::from_natural(2, Mat::identity(4, 4)).unwrap();
        let v = is_strictly_positive(&id, &SearchBudget::default(), &Tolerances::default());
        assert!(v.fails());
    }

    #[test]
    fn search_never_claims_two_positivity() {
        // a small perturbation of the identity that is not CP: the search
        // may not falsify, but must not return Holds
        let phi = SuperOp::from_fn(2, |a| a + a.transpose() * c(1e-3, 0.0)).unwrap();
        let tol = Tolerances::default();
        let v = check_two_positive(&phi, &SearchBudget::default(), &tol);
        assert!(!is_completely_positive(&phi, &tol).holds());
        assert_ne!(v.status, Status::Holds);
    }
}
