//! JSON schemas for complexes, groups, and cocycles, plus conversions into
//! the domain types. File access is left to the caller.

use crate::covers::CoverComplex;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupData, Irrep};
use crate::simplicial::OrientedSimplicialComplex;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    pub name: String,
    pub maximal_simplices: Vec<Vec<u32>>,
}

impl ComplexFile {
    pub fn to_complex(&self) -> Result<OrientedSimplicialComplex> {
        OrientedSimplicialComplex::build(&self.maximal_simplices)
    }

    pub fn from_complex(name: &str, k: &OrientedSimplicialComplex) -> Self {
        ComplexFile {
            name: name.to_string(),
            maximal_simplices: k.facets().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IrrepFile {
    pub label: String,
    pub dim: usize,
    /// matrices[g][i][j] = [re, im]
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub irreps: Vec<IrrepFile>,
}

impl GroupFile {
    pub fn to_group(&self) -> Result<GroupData> {
        let group = FiniteGroup::new(self.elements.clone(), self.table.clone())?;
        let irreps = self
            .irreps
            .iter()
            .map(|f| {
                if f.matrices.len() != self.elements.len()
                    || f.matrices
                        .iter()
                        .any(|m| m.len() != f.dim || m.iter().any(|r| r.len() != f.dim))
                {
                    return Err(Error::InvalidGroup(format!(
                        "irrep {} has inconsistent matrix shapes",
                        f.label
                    )));
                }
                Ok(Irrep::MatrixRep {
                    label: f.label.clone(),
                    dim: f.dim,
                    mats: f
                        .matrices
                        .iter()
                        .map(|m| {
                            m.iter()
                                .map(|row| {
                                    row.iter().map(|[re, im]| Complex::new(*re, *im)).collect()
                                })
                                .collect()
                        })
                        .collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GroupData::new(group, irreps)
    }
}

/// A cocycle file is a list of `[v, w, value]` entries; the value is a group
/// element index for finite deck groups, or an integer vector for Z^n.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CocycleValue {
    Index(usize),
    Vector(Vec<i64>),
}

pub type CocycleFile = Vec<(u32, u32, CocycleValue)>;

pub fn cocycle_as_indices(file: &CocycleFile) -> Result<Vec<(u32, u32, usize)>> {
    file.iter()
        .map(|(v, w, val)| match val {
            CocycleValue::Index(g) => Ok((*v, *w, *g)),
            CocycleValue::Vector(_) => Err(Error::ShapeMismatch(
                "expected group-element indices, found integer vectors".into(),
            )),
        })
        .collect()
}

pub fn cocycle_as_vectors(file: &CocycleFile) -> Result<Vec<(u32, u32, Vec<i64>)>> {
    file.iter()
        .map(|(v, w, val)| match val {
            CocycleValue::Vector(m) => Ok((*v, *w, m.clone())),
            CocycleValue::Index(_) => Err(Error::ShapeMismatch(
                "expected integer vectors, found group-element indices".into(),
            )),
        })
        .collect()
}

pub fn build_cover_from_files(
    complex: &ComplexFile,
    group: &GroupFile,
    cocycle: &CocycleFile,
) -> Result<CoverComplex> {
    let base = complex.to_complex()?;
    let data = group.to_group()?;
    let edges = cocycle_as_indices(cocycle)?;
    CoverComplex::build(base, data, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn complex_round_trip() {
        let k = fixtures::minimal_torus();
        let file = ComplexFile::from_complex("torus", &k);
        let json = serde_json::to_string(&file).unwrap();
        let back: ComplexFile = serde_json::from_str(&json).unwrap();
        let k2 = back.to_complex().unwrap();
        assert_eq!(k, k2);
        let json2 = serde_json::to_string(&ComplexFile::from_complex("torus", &k2)).unwrap();
        assert_eq!(json, json2);
    }

    #[test]
    fn cocycle_value_forms() {
        let json = r#"[[0, 1, 2], [1, 2, [3, -1]]]"#;
        let file: CocycleFile = serde_json::from_str(json).unwrap();
        assert!(matches!(file[0].2, CocycleValue::Index(2)));
        assert!(matches!(file[1].2, CocycleValue::Vector(_)));
        assert!(cocycle_as_indices(&file).is_err());
        assert!(cocycle_as_vectors(&file).is_err());
    }
}
