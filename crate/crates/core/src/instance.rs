//! JSON instance files: a Dynkin quiver, a representation given either by
//! integer matrices (reduced mod p) or by an iso type, and optional
//! dimension vectors.
//!
//! ```json
//! { "name": "blowup", "vertices": ["1", "2"], "arrows": ["1->2"], "field": 2,
//!   "dims": [3, 2], "matrices": { "1->2": [[1, 0, 0], [0, 1, 0]] }, "e": [1, 2] }
//! ```
//!
//! Matrices have one row per dimension of the arrow's target.

use crate::ar::IndecTable;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::quiver::Quiver;
use crate::rep::Representation;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

/// A parsed instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    #[serde(default)]
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<String>,
    /// Default prime when none is given on the command line.
    #[serde(default = "default_field")]
    pub field: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<BTreeMap<String, Vec<Vec<i64>>>>,
    /// Alternative to dims/matrices, e.g. `"P1:2, S1, S2"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iso: Option<String>,
    /// Dimension vector of the Grassmannian of M.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<usize>>,
    /// Dimension vector on Q̂, labeled (`"[1]=1, [S1]=1"`) or positional.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ehat: Option<String>,
}

fn default_field() -> u32 {
    2
}

fn arrow_key(q: &Quiver, a: usize) -> String {
    let (s, t) = q.arrow(a);
    format!("{}->{}", q.label(s), q.label(t))
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("instance JSON: {e}")))?;
        inst.quiver()?;
        if inst.iso.is_none() && (inst.dims.is_none() || inst.matrices.is_none()) {
            return Err(Error::Malformed("instance needs either \"iso\" or both \"dims\" and \"matrices\"".into()));
        }
        if inst.iso.is_some() && (inst.dims.is_some() || inst.matrices.is_some()) {
            return Err(Error::Malformed("\"iso\" excludes \"dims\"/\"matrices\"".into()));
        }
        Ok(inst)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The Dynkin quiver of the instance.
    pub fn quiver(&self) -> Result<Quiver> {
        let idx = |l: &str| {
            self.vertices.iter().position(|v| v == l.trim()).ok_or_else(|| Error::Malformed(format!("arrow endpoint {l:?} is not a vertex")))
        };
        let mut arrows = Vec::new();
        for a in &self.arrows {
            let (s, t) = a.split_once("->").ok_or_else(|| Error::Malformed(format!("arrow {a:?} is not of the form s->t")))?;
            arrows.push((idx(s)?, idx(t)?));
        }
        Quiver::dynkin(self.vertices.clone(), arrows)
    }

    /// M over F_p; `table` is used (or built) when M is given by an iso type.
    pub fn representation(&self, quiver: &Arc<Quiver>, p: u32) -> Result<Representation> {
        let field = PrimeField::new(p)?;
        if let Some(iso) = &self.iso {
            let t = IndecTable::new(quiver.clone(), field)?;
            return Ok(t.realize(&t.parse_iso(iso)?));
        }
        let dims = self.dims.clone().expect("validated");
        let mats = self.matrices.as_ref().expect("validated");
        if dims.len() != quiver.num_vertices() {
            return Err(Error::Malformed(format!("{} dims for {} vertices", dims.len(), quiver.num_vertices())));
        }
        let keys: Vec<String> = (0..quiver.num_arrows()).map(|a| arrow_key(quiver, a)).collect();
        if let Some(k) = mats.keys().find(|k| !keys.contains(&k.replace(' ', ""))) {
            return Err(Error::Malformed(format!("matrix for unknown arrow {k:?}")));
        }
        let mut maps = Vec::new();
        for (a, key) in keys.iter().enumerate() {
            let (s, t) = quiver.arrow(a);
            let rows = mats.iter().find(|(k, _)| k.replace(' ', "") == *key).map(|(_, m)| m.clone()).unwrap_or_default();
            let m = if rows.is_empty() && (dims[s] == 0 || dims[t] == 0) {
                Matrix::zeros(field, dims[t], dims[s])
            } else {
                if rows.len() != dims[t] || rows.iter().any(|r| r.len() != dims[s]) {
                    return Err(Error::Malformed(format!("matrix {key} must be {}x{}", dims[t], dims[s])));
                }
                Matrix::from_rows(field, &rows)
            };
            maps.push(m);
        }
        Representation::new(quiver.clone(), field, dims, maps)
    }

    /// Serializes a representation as an instance (entries as signed residues).
    pub fn from_representation(name: &str, m: &Representation) -> Self {
        let q = m.quiver();
        let f = m.field();
        let mut mats = BTreeMap::new();
        for a in 0..q.num_arrows() {
            let mm = m.map(a);
            let rows: Vec<Vec<i64>> = (0..mm.rows()).map(|i| (0..mm.cols()).map(|j| f.to_signed(mm.get(i, j))).collect()).collect();
            mats.insert(arrow_key(q, a), rows);
        }
        Instance {
            name: name.into(),
            vertices: q.labels().to_vec(),
            arrows: (0..q.num_arrows()).map(|a| arrow_key(q, a)).collect(),
            field: f.p(),
            dims: Some(m.dims().to_vec()),
            matrices: Some(mats),
            iso: None,
            e: None,
            ehat: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_reduction() {
        let text = r#"{"vertices":["1","2"],"arrows":["1->2"],"dims":[3,2],"matrices":{"1->2":[[1,0,0],[0,-1,0]]},"e":[1,2]}"#;
        let inst = Instance::from_json(text).unwrap();
        let q = Arc::new(inst.quiver().unwrap());
        let m = inst.representation(&q, 3).unwrap();
        assert_eq!(m.map(0).get(1, 1), 2);
        let back = Instance::from_representation("", &m);
        assert_eq!(back.representation(&q, 3).unwrap(), m);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        for bad in [
            r#"{"vertices":["1","2"],"arrows":["1->3"],"iso":"P1"}"#,
            r#"{"vertices":["1","2"],"arrows":["1->2"]}"#,
            r#"{"vertices":["1","2"],"arrows":["1->2"],"dims":[1,1],"matrices":{"1->2":[[1,1]]}}"#,
            r#"{"vertices":["1","2"],"arrows":["1->2"],"iso":"P1","bogus":1}"#,
            r#"{"vertices":["1","2","3"],"arrows":["1->2","2->3","3->1"],"iso":"P1"}"#,
        ] {
            let r = Instance::from_json(bad).and_then(|i| {
                let q = Arc::new(i.quiver()?);
                i.representation(&q, 2)
            });
            assert!(matches!(r, Err(Error::Malformed(_)) | Err(Error::Cycle)), "{bad}: {r:?}");
        }
    }
}
