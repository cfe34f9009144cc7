//! Deterministic constructions of test maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, c, Mat};
use crate::matrix::CMatrix;
use crate::spectral;
use crate::superop::{transpose_natural, SuperOp};

/// 0/1 adjacency in the column-action convention: `adj[i][j] = 1` is the
/// edge `j -> i`, realized by the Kraus operator `E_ij`.
pub type Adjacency = Vec<Vec<u8>>;

const REJECTION_LIMIT: usize = 100;

/// First `k` with `A^k` entrywise positive, or `None` if none exists up to
/// the classical bound `(D - 1)^2 + 1`.
///
/// Entries are saturated at 2 so the integer powers cannot overflow.
pub fn classical_index(adj: &Adjacency) -> Option<usize> {
    let d = adj.len();
    if d == 0 || adj.iter().any(|r| r.len() != d) {
        return None;
    }
    let a: Vec<Vec<u8>> = adj.iter().map(|r| r.iter().map(|&x| x.min(2)).collect()).collect();
    let mut p = a.clone();
    let limit = (d - 1) * (d - 1) + 1;
    for k in 1..=limit {
        if p.iter().all(|r| r.iter().all(|&x| x > 0)) {
            return Some(k);
        }
        p = saturating_product(&a, &p);
    }
    None
}

fn saturating_product(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).map(|k| a[i][k] as u32 * b[k][j] as u32).sum::<u32>().min(2) as u8)
                .collect()
        })
        .collect()
}

pub fn classical_embedding(adj: &Adjacency) -> Result<SuperOp> {
    let d = adj.len();
    if let Some(r) = adj.iter().find(|r| r.len() != d) {
        return Err(Error::NotSquare { rows: d, cols: r.len() });
    }
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if let Some(j) = (0..d).find(|&j| (0..d).all(|i| adj[i][j] == 0)) {
        return Err(Error::ZeroColumn(j));
    }
    let kraus = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|&(i, j)| adj[i][j] != 0)
        .map(|(i, j)| CMatrix::unit(d, i, j))
        .collect();
    SuperOp::from_kraus(kraus)
}

/// `D`-cycle `1 -> 2 -> ... -> D -> 1` plus the chord `D -> 2`.
pub fn wielandt_adjacency(d: usize) -> Adjacency {
    let mut a = vec![vec![0u8; d]; d];
    for i in 0..d - 1 {
        a[i + 1][i] = 1;
    }
    a[0][d - 1] = 1;
    a[1][d - 1] = 1;
    a
}

pub fn wielandt_digraph(d: usize) -> Result<SuperOp> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let adj = wielandt_adjacency(d);
    let expected = (d - 1) * (d - 1) + 1;
    let index = classical_index(&adj);
    assert_eq!(index, Some(expected), "Wielandt digraph failed its oracle gate");
    Ok(classical_embedding(&adj)?.with_metadata(
        json!({"family": "wielandt_digraph", "dim": d, "classical_index": expected}).to_string(),
    ))
}

/// `a -> Tr(a) I / D`.
pub fn depolarizing(d: usize) -> Result<SuperOp> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let s = c(1.0 / (d as f64).sqrt(), 0.0);
    let kraus = (0..d)
        .flat_map(|i| (0..d).map(move |j| CMatrix::new(linalg::unit_matrix(d, i, j) * s).unwrap()))
        .collect();
    SuperOp::from_kraus(kraus)
}

/// `a -> a^T`, natural representation only.
pub fn transpose(d: usize) -> Result<SuperOp> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    SuperOp::from_natural(d, transpose_natural(d))
}

pub fn unitary_conj(u: &CMatrix) -> Result<SuperOp> {
    let d = u.dim();
    let defect = (u.adjoint().as_mat() * u.as_mat() - Mat::identity(d, d)).norm();
    if defect > 1e-10 {
        return Err(Error::NotUnitary { defect });
    }
    SuperOp::from_kraus(vec![u.clone()])
}

fn check_kraus_count(g: usize) -> Result<()> {
    if g < 2 {
        return Err(Error::InvalidEnsemble(format!(
            "kraus_count must be at least 2, got {g}"
        )));
    }
    Ok(())
}

fn certified_primitive(phi: &SuperOp, tol: &Tolerances) -> bool {
    matches!(spectral::is_primitive(phi, tol), Ok(cert) if cert.primitive)
}

fn draw_kraus(d: usize, g: usize, rng: &mut ChaCha8Rng) -> Result<SuperOp> {
    let s = c(1.0 / ((g * d) as f64).sqrt(), 0.0);
    let kraus = (0..g)
        .map(|_| CMatrix::new(linalg::gaussian_matrix(d, d, rng) * s))
        .collect::<Result<Vec<_>>>()?;
    SuperOp::from_kraus(kraus)
}

/// Random CP map with `g` Gaussian Kraus operators, plus the number of
/// non-primitive draws rejected before it.
pub fn random_cp_with_rejections(d: usize, g: usize, seed: u64) -> Result<(SuperOp, usize)> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    check_kraus_count(g)?;
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for rejected in 0..REJECTION_LIMIT {
        let phi = draw_kraus(d, g, &mut rng)?;
        if certified_primitive(&phi, &tol) {
            return Ok((phi, rejected));
        }
    }
    Err(Error::RejectionLimit {
        attempts: REJECTION_LIMIT,
    })
}

pub fn random_cp(d: usize, g: usize, seed: u64) -> Result<SuperOp> {
    Ok(random_cp_with_rejections(d, g, seed)?.0)
}

#[derive(Debug, Clone)]
pub struct UnitalDraw {
    /// The normalized unital map.
    pub map: SuperOp,
    /// The draw it was normalized from.
    pub source: SuperOp,
    pub z: CMatrix,
    pub radius: f64,
    pub rejections: usize,
}

pub fn random_cp_unital(d: usize, g: usize, seed: u64) -> Result<UnitalDraw> {
    let tol = Tolerances::default();
    let (source, rejections) = random_cp_with_rejections(d, g, seed)?;
    let n = source.similarity_normalize(&tol)?;
    let defect = n.map.unital_defect();
    assert!(defect <= 1e-8, "normalized map is not unital: {defect:e}");
    Ok(UnitalDraw {
        map: n.map,
        source,
        z: n.z,
        radius: n.radius,
        rejections,
    })
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(d: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qr = linalg::gaussian_matrix(d, d, &mut rng).qr();
    let (q, r) = (qr.q(), qr.r());
    // fix the phases of R's diagonal so the distribution is exactly Haar
    let phases = Mat::from_fn(d, d, |i, j| {
        if i == j {
            let x = r[(i, i)];
            if x.norm() > 0.0 { x / c(x.norm(), 0.0) } else { c(1.0, 0.0) }
        } else {
            c(0.0, 0.0)
        }
    });
    CMatrix::new(q * phases).unwrap()
}

/// Random primitive 0/1 adjacency with edge probability one half.
pub fn random_primitive_adjacency(d: usize, seed: u64) -> Result<(Adjacency, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for rejected in 0..REJECTION_LIMIT {
        let adj: Adjacency = (0..d)
            .map(|_| (0..d).map(|_| rng.random_bool(0.5) as u8).collect())
            .collect();
        if classical_index(&adj).is_some() {
            return Ok((adj, rejected));
        }
    }
    Err(Error::RejectionLimit {
        attempts: REJECTION_LIMIT,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RandomCp,
    RandomCpUnital,
    ClassicalEmbedding,
    Depolarizing,
    Transpose,
    UnitaryConj,
    WielandtDigraph,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::RandomCp,
        Family::RandomCpUnital,
        Family::ClassicalEmbedding,
        Family::Depolarizing,
        Family::Transpose,
        Family::UnitaryConj,
        Family::WielandtDigraph,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::RandomCp => "random_cp",
            Family::RandomCpUnital => "random_cp_unital",
            Family::ClassicalEmbedding => "classical_embedding",
            Family::Depolarizing => "depolarizing",
            Family::Transpose => "transpose",
            Family::UnitaryConj => "unitary_conj",
            Family::WielandtDigraph => "wielandt_digraph",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidEnsemble(format!("unknown family {s:?}")))
    }
}

fn default_kraus_count() -> usize {
    2
}

fn default_count() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub family: Family,
    pub dim: usize,
    #[serde(default = "default_kraus_count")]
    pub kraus_count: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_count")]
    pub count: usize,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidEnsemble("count must be at least 1".into()));
        }
        if self.dim < 2 {
            return Err(Error::DimensionTooSmall(self.dim));
        }
        if matches!(self.family, Family::RandomCp | Family::RandomCpUnital) {
            check_kraus_count(self.kraus_count)?;
        }
        Ok(())
    }

    /// Instance seeds `seed, seed + 1, ..., seed + count - 1`.
    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.count as u64).map(move |i| self.seed.wrapping_add(i))
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub map: SuperOp,
    pub provenance: serde_json::Value,
}

/// One member of a family. `g` is only used by the random CP families.
pub fn generate(family: Family, d: usize, g: usize, seed: u64) -> Result<Generated> {
    let mut prov = json!({
        "family": family.as_str(),
        "dim": d,
        "seed": seed,
    });
    let map = match family {
        Family::RandomCp => {
            let (m, rejections) = random_cp_with_rejections(d, g, seed)?;
            prov["kraus_count"] = json!(g);
            prov["rejections"] = json!(rejections);
            m
        }
        Family::RandomCpUnital => {
            let draw = random_cp_unital(d, g, seed)?;
            prov["kraus_count"] = json!(g);
            prov["rejections"] = json!(draw.rejections);
            prov["source_radius"] = json!(draw.radius);
            draw.map
        }
        Family::ClassicalEmbedding => {
            let (adj, rejections) = random_primitive_adjacency(d, seed)?;
            prov["rejections"] = json!(rejections);
            prov["oracle"] = json!({ "classical_index": classical_index(&adj) });
            prov["adjacency"] = json!(adj);
            classical_embedding(&adj)?
        }
        Family::Depolarizing => depolarizing(d)?,
        Family::Transpose => transpose(d)?,
        Family::UnitaryConj => unitary_conj(&random_unitary(d, seed))?,
        Family::WielandtDigraph => {
            let adj = wielandt_adjacency(d.max(2));
            prov["oracle"] = json!({ "classical_index": classical_index(&adj) });
            prov["adjacency"] = json!(adj);
            wielandt_digraph(d)?
        }
    };
    Ok(Generated {
        map: map.with_metadata(prov.to_string()),
        provenance: prov,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_indices_of_wielandt_digraphs() {
        for d in 2..=8 {
            assert_eq!(classical_index(&wielandt_adjacency(d)), Some((d - 1) * (d - 1) + 1));
        }
        let ones = vec![vec![1u8; 2]; 2];
        assert_eq!(classical_index(&ones), Some(1));
        let id = vec![vec![1u8, 0], vec![0, 1]];
        assert_eq!(classical_index(&id), None);
    }

    #[test]
    fn wielandt_three_edges() {
        let a = wielandt_adjacency(3);
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (i, row) in a.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x == 1 {
                    edges.push((i + 1, j + 1));
                }
            }
        }
        edges.sort();
        assert_eq!(edges, vec![(1, 3), (2, 1), (2, 3), (3, 2)]);
        let d2 = wielandt_adjacency(2);
        assert_eq!(d2, vec![vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn embedding_commutes_with_diagonals() {
        let adj = wielandt_adjacency(4);
        let phi = classical_embedding(&adj).unwrap();
        for k in 0..4 {
            let out = phi.apply_mat(&linalg::unit_matrix(4, k, k));
            for i in 0..4 {
                assert_eq!(out[(i, i)], c(adj[i][k] as f64, 0.0));
            }
        }
        assert!(matches!(
            classical_embedding(&vec![vec![1, 0], vec![1, 0]]),
            Err(Error::ZeroColumn(1))
        ));
    }

    #[test]
    fn random_draws_are_deterministic() {
        let a = random_cp(3, 2, 7).unwrap();
        let b = random_cp(3, 2, 7).unwrap();
        for (x, y) in a.kraus().unwrap().iter().zip(b.kraus().unwrap()) {
            assert!(x.iter().zip(y.iter()).all(|(p, q)| p.re.to_bits() == q.re.to_bits() && p.im.to_bits() == q.im.to_bits()));
        }
        assert_ne!(random_cp(3, 2, 8).unwrap().natural(), a.natural());
    }

    #[test]
    fn unital_draws_are_unital() {
        for seed in 0..5 {
            let u = random_cp_unital(3, 2, seed).unwrap();
            assert!(u.map.unital_defect() < 1e-8);
            assert!(u.map.kraus().is_some());
        }
    }

    #[test]
    fn unitary_check() {
        let u = random_unitary(3, 1);
        assert!(unitary_conj(&u).is_ok());
        let bad = CMatrix::new(u.as_mat() * c(1.1, 0.0)).unwrap();
        assert!(matches!(unitary_conj(&bad), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn ensemble_validation() {
        let spec: EnsembleSpec = serde_json::from_str(r#"{"family":"random_cp_unital","dim":3,"count":0}"#).unwrap();
        assert!(spec.validate().is_err());
        let spec: EnsembleSpec = serde_json::from_str(r#"{"family":"depolarizing","dim":2,"seed":5,"count":3}"#).unwrap();
        spec.validate().unwrap();
        assert_eq!(spec.seeds().collect::<Vec<_>>(), vec![5, 6, 7]);
        assert!("not_a_family".parse::<Family>().is_err());
        assert_eq!("wielandt_digraph".parse::<Family>().unwrap(), Family::WielandtDigraph);
    }
}
