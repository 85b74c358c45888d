//! The JSON input document: a field and a list of generators, each with a
//! faithful matrix and a module matrix. Every scalar is a string.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDoc {
    Named(String),
    Prime { prime: u64 },
}

impl FieldDoc {
    pub fn spec(&self) -> Result<FieldSpec> {
        match self {
            FieldDoc::Named(s) if s == "rational" => Ok(FieldSpec::Rational),
            FieldDoc::Named(s) => Err(Error::Input(format!("unknown field {s:?}"))),
            FieldDoc::Prime { prime } => FieldSpec::prime(*prime),
        }
    }

    pub fn from_spec(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Rational => FieldDoc::Named("rational".into()),
            FieldSpec::Prime(p) => FieldDoc::Prime { prime: p },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faithful: Option<Vec<Vec<String>>>,
    pub module: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub field: FieldDoc,
    pub generators: Vec<GeneratorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

fn matrix_doc(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

fn parse_matrix(field: FieldSpec, rows: &[Vec<String>], what: &str) -> Result<Matrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_rows(field, parsed).map_err(|_| Error::InconsistentDims(format!("{what} has ragged rows")))?;
    if !m.is_square() {
        return Err(Error::InconsistentDims(format!("{what} is {}x{}, not square", m.rows(), m.cols())));
    }
    Ok(m)
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid input document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn field_spec(&self) -> Result<FieldSpec> {
        self.field.spec()
    }

    pub fn from_matrices(field: FieldSpec, names: &[String], faithful: &[Matrix], module: &[Matrix]) -> Self {
        let generators = names
            .iter()
            .zip(faithful.iter().zip(module))
            .map(|(name, (f, m))| GeneratorDoc {
                name: name.clone(),
                faithful: Some(matrix_doc(f)),
                module: matrix_doc(m),
            })
            .collect();
        InputDocument { field: FieldDoc::from_spec(field), generators, metadata: None }
    }

    /// Field, names and module matrices; faithful matrices are not required.
    pub fn parse_modules(&self) -> Result<(FieldSpec, Vec<String>, Vec<Matrix>)> {
        let field = self.field_spec()?;
        let names = self.generators.iter().map(|g| g.name.clone()).collect();
        let module = self
            .generators
            .iter()
            .map(|g| parse_matrix(field, &g.module, &format!("module matrix of {}", g.name)))
            .collect::<Result<Vec<_>>>()?;
        Ok((field, names, module))
    }

    pub fn to_algebra(&self) -> Result<Algebra> {
        let (field, names, module) = self.parse_modules()?;
        let faithful = self
            .generators
            .iter()
            .map(|g| {
                let rows = g
                    .faithful
                    .as_ref()
                    .ok_or_else(|| Error::Input(format!("generator {} has no faithful matrix", g.name)))?;
                parse_matrix(field, rows, &format!("faithful matrix of {}", g.name))
            })
            .collect::<Result<Vec<_>>>()?;
        Algebra::build(field, names, faithful, module)
    }
}
