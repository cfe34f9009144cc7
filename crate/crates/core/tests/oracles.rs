//! Closed-form and independently computed reference values.

use wielandt::generators::{self, Adjacency};
use wielandt::linalg::c;
use wielandt::multdomain;
use wielandt::positivity::{self, Witness};
use wielandt::primindex;
use wielandt::spectral;
use wielandt::{CMatrix, Error, SearchBudget, SuperOp, Tolerances};

fn rho_of(phi: &SuperOp, tol: &Tolerances) -> CMatrix {
    spectral::spectral_data(phi, tol).unwrap().pf_left
}

/// `a -> sum_i p_i U_i a U_i*` with `p = (1/2, 1/2)` and Haar unitaries.
fn mixed_unitary(d: usize, seed: u64) -> SuperOp {
    let s = (0.5f64).sqrt();
    let kraus = (0..2)
        .map(|i| CMatrix::new(generators::random_unitary(d, 2 * seed + i).as_mat() * c(s, 0.0)).unwrap())
        .collect();
    SuperOp::from_kraus(kraus).unwrap()
}

#[test]
fn classical_embedding_index_equals_integer_oracle() {
    let tol = Tolerances::default();
    let budget = SearchBudget::default();
    for d in [3, 4, 5] {
        for seed in 0..6 {
            let (adj, _) = generators::random_primitive_adjacency(d, seed).unwrap();
            let expected = generators::classical_index(&adj).unwrap();
            let phi = generators::classical_embedding(&adj).unwrap();
            let cert = primindex::primitivity_index(&phi, primindex::fallback_cap(d), &budget, &tol).unwrap();
            assert_eq!(cert.q, expected, "D={d} seed={seed} adj={adj:?}");
            assert!(cert.well_formed());
        }
    }
}

#[test]
fn wielandt_digraph_index_is_classical_extremal() {
    let tol = Tolerances::default();
    let budget = SearchBudget::default();
    for d in 2..=5 {
        let expected = (d - 1) * (d - 1) + 1;
        assert_eq!(generators::classical_index(&generators::wielandt_adjacency(d)), Some(expected));
        let phi = generators::wielandt_digraph(d).unwrap();
        let cert = primindex::primitivity_index(&phi, primindex::fallback_cap(d), &budget, &tol).unwrap();
        assert_eq!(cert.q, expected, "D={d}");
    }
}

#[test]
fn imprimitive_cycle_has_no_classical_index() {
    let cycle: Adjacency = vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]];
    assert_eq!(generators::classical_index(&cycle), None);
    let phi = generators::classical_embedding(&cycle).unwrap();
    let tol = Tolerances::default();
    assert!(!spectral::is_primitive(&phi, &tol).unwrap().primitive);
}

#[test]
fn depolarizing_has_unit_indices() {
    let tol = Tolerances::default();
    let budget = SearchBudget::default();
    for d in 2..=4 {
        let phi = generators::depolarizing(d).unwrap();
        let q = primindex::primitivity_index(&phi, primindex::default_cap(d), &budget, &tol).unwrap();
        assert_eq!(q.q, 1);
        let k = multdomain::kappa(&phi, &rho_of(&phi, &tol), &tol).unwrap();
        assert_eq!(k.kappa, 1);
        assert_eq!(k.ranks(), vec![1, 1]);
    }
}

#[test]
fn unitary_conjugation_is_not_primitive() {
    let tol = Tolerances::default();
    let u = generators::random_unitary(3, 7);
    let phi = generators::unitary_conj(&u).unwrap();
    assert!(!spectral::is_primitive(&phi, &tol).unwrap().primitive);
    let err = primindex::primitivity_index(&phi, 8, &SearchBudget::default(), &tol).unwrap_err();
    assert!(matches!(err, Error::NotPrimitive(_)), "{err:?}");
    // The whole algebra is multiplicative: the forms vanish identically.
    let dom = multdomain::mult_domain_oracle(&phi, 1, &tol).unwrap();
    assert_eq!(dom.rank(), 9);
}

#[test]
fn q_le_d_minus_one_kappa_on_mixed_unitary_channels() {
    let tol = Tolerances::default();
    let budget = SearchBudget::default();
    let mut checked = 0;
    for d in 2..=4 {
        for seed in 0..8 {
            let phi = mixed_unitary(d, 100 * d as u64 + seed);
            assert!(phi.is_unital(&tol) && phi.is_trace_preserving(&tol));
            if !spectral::is_primitive(&phi, &tol).unwrap().primitive {
                continue;
            }
            let r = primindex::check_q_vs_kappa(&phi, &budget, &tol).unwrap();
            assert!(r.holds, "D={d} seed={seed}: q={} kappa={}", r.q, r.kappa);
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} primitive draws");
}

/// Unital but not trace preserving: `M_phi` is the scalars, yet `phi` is
/// not strictly positive. Checked from the Kraus operators only.
#[test]
fn unital_qubit_pair_with_trivial_domain_and_index_two() {
    let tol = Tolerances::default();
    let budget = SearchBudget::default();
    let draw = generators::random_cp_unital(2, 2, 0).unwrap();
    let phi = draw.map;
    assert!(phi.is_unital(&tol));
    assert!(phi.trace_defect() > 1e-3);
    let k = multdomain::kappa(&phi, &rho_of(&phi, &tol), &tol).unwrap();
    assert_eq!(k.kappa, 1);
    assert_eq!(multdomain::mult_domain_oracle(&phi, 1, &tol).unwrap().rank(), 1);

    let cert = primindex::primitivity_index(&phi, primindex::default_cap(2), &budget, &tol).unwrap();
    assert_eq!(cert.q, 2);
    let Some(Witness::Pair { v, w }) = &cert.per_n[0].witness else {
        panic!("expected a vector pair witness");
    };
    let kraus = phi.kraus().expect("normalized draw keeps Kraus operators");
    let leak: f64 = kraus.iter().map(|k| (w.adjoint() * k.as_mat() * v)[(0, 0)].norm_sqr()).sum();
    assert!(leak < 1e-12, "w* phi(vv*) w = {leak:e}");
}

#[test]
fn transpose_is_positive_and_fails_two_positivity_by_one_half() {
    let tol = Tolerances::default();
    let budget = SearchBudget::default();
    let t = generators::transpose(2).unwrap();
    assert!(positivity::check_positive(&t, &budget, &tol).holds());
    let v = positivity::check_two_positive(&t, &budget, &tol);
    assert!(v.fails());
    assert!((v.value + 0.5).abs() < 1e-9, "{}", v.value);
}

#[test]
fn similarity_normalization_of_wielandt_map_is_unital_with_same_index() {
    let tol = Tolerances::default();
    let budget = SearchBudget::default();
    let phi = generators::wielandt_digraph(3).unwrap();
    let n = phi.similarity_normalize(&tol).unwrap();
    assert!(n.map.unital_defect() < 1e-9);
    let q0 = primindex::primitivity_index(&phi, 16, &budget, &tol).unwrap().q;
    let q1 = primindex::primitivity_index(&n.map, 16, &budget, &tol).unwrap().q;
    assert_eq!(q0, q1);
}

#[test]
fn wielength_of_matrix_units_and_single_projection() {
    // {E_00, E_01, E_10, E_11} spans M_2 at length one.
    let tol = Tolerances::default();
    let units: Vec<CMatrix> = (0..4).map(|k| CMatrix::unit(2, k / 2, k % 2)).collect();
    let r = primindex::wielength(&units, 4, &tol).unwrap();
    assert_eq!(r.value, 1);
    assert_eq!(r.profile, vec![4]);
    // A single diagonal projection never spans.
    let single = vec![CMatrix::unit(2, 0, 0)];
    assert!(matches!(
        primindex::wielength(&single, 5, &tol),
        Err(Error::WielengthCapExceeded { .. })
    ));
}

/// Normalized Wielandt map: for `D = 3`, `M_phi = {diag(s, t, s)}` since
/// vertex 1 has in-neighbours 0 and 2. In general `kappa = D - 1` and
/// `phi^kappa` moves `E_00` along the path `0 -> ... -> D - 1`, so its image
/// stays rank one.
#[test]
fn normalized_wielandt_map_has_kappa_d_minus_one_and_rank_one_orbit() {
    let tol = Tolerances::default();
    let budget = SearchBudget::default();
    for d in 3..=5 {
        let phi = generators::wielandt_digraph(d).unwrap().similarity_normalize(&tol).unwrap().map;
        let k = multdomain::kappa(&phi, &rho_of(&phi, &tol), &tol).unwrap();
        assert_eq!(k.kappa, d - 1, "D={d}");
        assert_eq!(k.ranks(), (1..d).rev().chain([1]).collect::<Vec<_>>());
        if d == 3 {
            let s = CMatrix::from_real_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
            let id = CMatrix::identity(3);
            let dom = &k.chain[0].basis;
            assert!(dom.contains(s.as_mat(), 1e-9) && dom.contains(id.as_mat(), 1e-9));
        }
        let image = phi.power(k.kappa).apply(&CMatrix::unit(d, 0, 0)).unwrap();
        let positive = image.hermitian_eigenvalues().iter().filter(|&&x| x > 1e-9).count();
        assert_eq!(positive, 1, "D={d}");
        let q = primindex::primitivity_index(&phi, 2 * d * d, &budget, &tol).unwrap().q;
        assert_eq!(q, (d - 1) * (d - 1) + 1);
        assert!(q > (d - 1) * k.kappa);
    }
}
