//! JSON code-spec files.
//!
//! ```json
//! {"type":"pbch","n":7,"m":3,"primitive":"0xb","g1":"0x1","g0":"0xb"}
//! {"type":"plbc","g1_rows":["10"],"g0_rows":["11"]}
//! ```
//!
//! A `plbc` spec may carry `d0` / `d1`; those are taken as user-supplied and
//! skip enumeration.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{BinaryPolynomial, BitMatrix, BitVector};
use crate::error::{Error, Result};

use super::{Distance, PbchSpec, PlbcCode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CodeSpecFile {
    Pbch {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        primitive: Option<String>,
        g1: String,
        g0: String,
    },
    Plbc {
        g1_rows: Vec<String>,
        g0_rows: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d0: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d1: Option<usize>,
    },
}

/// A built code plus its polynomial description when it has one.
#[derive(Clone, Debug)]
pub struct LoadedCode {
    pub code: PlbcCode,
    pub pbch: Option<PbchSpec>,
}

impl CodeSpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn from_pbch(spec: &PbchSpec) -> Self {
        CodeSpecFile::Pbch {
            n: spec.n(),
            m: Some(spec.m()),
            primitive: Some(spec.field().primitive().to_string()),
            g1: spec.g1().to_string(),
            g0: spec.g0().to_string(),
        }
    }

    pub fn from_code(code: &PlbcCode) -> Self {
        let rows = |m: &BitMatrix| m.row_vectors().iter().map(BitVector::to_string).collect();
        CodeSpecFile::Plbc {
            g1_rows: rows(code.g1()),
            g0_rows: rows(code.g0()),
            d0: None,
            d1: None,
        }
    }

    pub fn pbch_spec(&self) -> Result<Option<PbchSpec>> {
        match self {
            CodeSpecFile::Pbch {
                n,
                m,
                primitive,
                g1,
                g0,
            } => {
                let primitive = primitive
                    .as_deref()
                    .map(str::parse::<BinaryPolynomial>)
                    .transpose()?;
                if let (Some(m), Some(p)) = (m, &primitive) {
                    if p.degree() != *m as isize {
                        return Err(Error::InvalidSpec(format!(
                            "primitive polynomial {p} does not have degree m = {m}"
                        )));
                    }
                }
                let spec = PbchSpec::new(*n, primitive, g1.parse()?, g0.parse()?)?;
                if let Some(m) = m {
                    if spec.m() != *m {
                        return Err(Error::InvalidSpec(format!(
                            "n = {n} implies m = {}, file says {m}",
                            spec.m()
                        )));
                    }
                }
                Ok(Some(spec))
            }
            CodeSpecFile::Plbc { .. } => Ok(None),
        }
    }

    pub fn build(&self) -> Result<LoadedCode> {
        match self {
            CodeSpecFile::Pbch { .. } => {
                let spec = self.pbch_spec()?.expect("pbch variant");
                Ok(LoadedCode {
                    code: spec.build()?,
                    pbch: Some(spec),
                })
            }
            CodeSpecFile::Plbc {
                g1_rows,
                g0_rows,
                d0,
                d1,
            } => {
                let parse = |rows: &[String]| -> Result<BitMatrix> {
                    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
                    BitMatrix::parse_rows(&refs)
                };
                let code = PlbcCode::with_distances(
                    parse(g1_rows)?,
                    parse(g0_rows)?,
                    d0.map(Distance::user),
                    d1.map(Distance::user),
                )?;
                Ok(LoadedCode { code, pbch: None })
            }
        }
    }
}
