//! JSON map files.
//!
//! ```json
//! {"dim": 2, "repr": "kraus", "matrices": [[[[1,0],[0,0]],[[0,0],[1,0]]]], "metadata": {}}
//! ```
//!
//! Entries are `[re, im]` pairs in row-major order. `matrices` is a list of
//! matrices; for `choi` and `natural` it holds exactly one (a bare matrix is
//! accepted on input).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, Mat, Vector};
use crate::matrix::CMatrix;
use crate::superop::SuperOp;

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn json_matrix(m: &Mat) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn json_vector(v: &Vector) -> Vec<[f64; 2]> {
    v.iter().map(|x| [x.re, x.im]).collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<Mat> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    Ok(Mat::from_fn(n, m, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Repr {
    Kraus,
    Choi,
    Natural,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixList {
    Many(Vec<JsonMatrix>),
    One(JsonMatrix),
}

impl MatrixList {
    fn into_vec(self) -> Vec<JsonMatrix> {
        match self {
            MatrixList::Many(v) => v,
            MatrixList::One(m) => vec![m],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapFile {
    pub dim: usize,
    pub repr: Repr,
    pub matrices: MatrixList,
    #[serde(default = "empty_object")]
    pub metadata: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

impl MapFile {
    /// Kraus form when available, natural representation otherwise.
    pub fn from_superop(phi: &SuperOp) -> Self {
        let (repr, matrices) = match phi.kraus() {
            Some(ks) => (Repr::Kraus, ks.iter().map(|k| json_matrix(k)).collect()),
            None => (Repr::Natural, vec![json_matrix(phi.natural())]),
        };
        let metadata = serde_json::from_str(phi.metadata())
            .ok()
            .filter(serde_json::Value::is_object)
            .unwrap_or_else(|| {
                if phi.metadata().is_empty() {
                    empty_object()
                } else {
                    serde_json::json!({ "description": phi.metadata() })
                }
            });
        MapFile {
            dim: phi.dim(),
            repr,
            matrices: MatrixList::Many(matrices),
            metadata,
            provenance: None,
        }
    }

    pub fn to_superop(&self) -> Result<SuperOp> {
        let mats = self
            .matrices
            .clone()
            .into_vec()
            .iter()
            .map(matrix_from_json)
            .collect::<Result<Vec<_>>>()?;
        let d = self.dim;
        let phi = match self.repr {
            Repr::Kraus => {
                if mats.is_empty() {
                    return Err(Error::Parse("kraus list is empty".into()));
                }
                for m in &mats {
                    if m.nrows() != d || m.ncols() != d {
                        return Err(Error::Parse(format!(
                            "Kraus operator is {}x{}, expected {d}x{d}",
                            m.nrows(),
                            m.ncols()
                        )));
                    }
                }
                let ks = mats.into_iter().map(CMatrix::new).collect::<Result<Vec<_>>>()?;
                SuperOp::from_kraus(ks)?
            }
            Repr::Choi | Repr::Natural => {
                if mats.len() != 1 {
                    return Err(Error::Parse(format!(
                        "expected one matrix for {:?}, found {}",
                        self.repr,
                        mats.len()
                    )));
                }
                let m = mats.into_iter().next().unwrap();
                if m.nrows() != d * d || m.ncols() != d * d {
                    return Err(Error::Parse(format!(
                        "matrix is {}x{}, expected {}x{}",
                        m.nrows(),
                        m.ncols(),
                        d * d,
                        d * d
                    )));
                }
                if self.repr == Repr::Choi {
                    SuperOp::from_choi(d, m)?
                } else {
                    SuperOp::from_natural(d, m)?
                }
            }
        };
        Ok(phi.with_metadata(self.metadata.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn read_map(path: impl AsRef<Path>) -> Result<SuperOp> {
    let text = fs::read_to_string(path)?;
    MapFile::from_json(&text)?.to_superop()
}

pub fn write_map(path: impl AsRef<Path>, file: &MapFile) -> Result<()> {
    fs::write(path, file.to_json()? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let text = r#"{"dim": 2, "repr": "kraus", "matrices": [[[[1,0],[0,0]],[[0,0],[1,0]]]], "metadata": {}}"#;
        let f = MapFile::from_json(text).unwrap();
        let phi = f.to_superop().unwrap();
        assert!(phi.is_unital(&Default::default()));
    }

    #[test]
    fn accepts_bare_natural_matrix() {
        let id: JsonMatrix = (0..4)
            .map(|i| (0..4).map(|j| if i == j { [1.0, 0.0] } else { [0.0, 0.0] }).collect())
            .collect();
        let text = serde_json::json!({"dim": 2, "repr": "natural", "matrices": id}).to_string();
        let phi = MapFile::from_json(&text).unwrap().to_superop().unwrap();
        assert!((phi.natural() - Mat::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn rejects_wrong_sizes() {
        let text = r#"{"dim": 3, "repr": "kraus", "matrices": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        assert!(matches!(
            MapFile::from_json(text).unwrap().to_superop(),
            Err(Error::Parse(_))
        ));
        let text = r#"{"dim": 2, "repr": "choi", "matrices": []}"#;
        assert!(MapFile::from_json(text).unwrap().to_superop().is_err());
        assert!(MapFile::from_json("{not json").is_err());
    }

    #[test]
    fn round_trips_through_text() {
        let phi = SuperOp::from_kraus(vec![
            CMatrix::unit(2, 0, 1),
            CMatrix::new(Mat::identity(2, 2) * c(0.5, 0.25)).unwrap(),
        ])
        .unwrap();
        let text = MapFile::from_superop(&phi).to_json().unwrap();
        let back = MapFile::from_json(&text).unwrap().to_superop().unwrap();
        assert!((back.natural() - phi.natural()).norm() < 1e-15);
    }
}
