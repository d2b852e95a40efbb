//! The public JSON complex format.
//!
//! ```json
//! {"cells": [{"id": "v", "dim": 0, "stratum": 0}, {"id": "e", "dim": 1, "stratum": 0}],
//!  "boundary": {"1": [["e", "v", "0"]]},
//!  "endo": {"0": [["v", "v", "1"]], "1": [["e", "e", "1"]]}}
//! ```
//!
//! A triplet `[source, target, coef]` under key `k` says that `coef · target`
//! occurs in the boundary (or image) of the `k`-cell `source`. Coefficients
//! are decimal strings; plain JSON integers are also accepted on input.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Cell, ComplexBuilder, ExtensionResolution, FilteredComplex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub cells: Vec<Cell>,
    #[serde(default)]
    pub boundary: BTreeMap<String, Vec<Triplet>>,
    #[serde(default)]
    pub endo: BTreeMap<String, Vec<Triplet>>,
    /// Resolutions for extension problems in the final degrees.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extensions: Vec<ExtensionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionEntry {
    pub degree: usize,
    pub resolution: ExtensionResolution,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Triplet(pub String, pub String, pub Coef);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coef(pub BigInt);

impl Serialize for Coef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Coef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => {
                s.trim().parse().map(Coef).map_err(|_| serde::de::Error::custom(format!("bad integer `{s}`")))
            }
            serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => {
                n.to_string().parse().map(Coef).map_err(serde::de::Error::custom)
            }
            v => Err(serde::de::Error::custom(format!("coefficient must be an integer or decimal string, got {v}"))),
        }
    }
}

impl ComplexFile {
    pub fn to_complex(&self) -> Result<FilteredComplex> {
        let mut b = ComplexBuilder::new();
        for c in &self.cells {
            b.cell(c.id.clone(), c.dim, c.stratum);
        }
        let dims: BTreeMap<&str, usize> = self.cells.iter().map(|c| (c.id.as_str(), c.dim)).collect();
        let key = |k: &String, what: &str| -> Result<usize> {
            k.parse().map_err(|_| Error::InvalidComplex(format!("{what} key `{k}` is not a dimension")))
        };
        let check = |t: &Triplet, k: usize, what: &str| -> Result<()> {
            match dims.get(t.0.as_str()) {
                Some(&d) if d == k => Ok(()),
                Some(&d) => Err(Error::InvalidComplex(format!(
                    "{what} entry for `{}` listed under dimension {k} but the cell has dimension {d}",
                    t.0
                ))),
                None => Err(Error::InvalidComplex(format!("unknown cell id `{}`", t.0))),
            }
        };
        for (k, ts) in &self.boundary {
            let k = key(k, "boundary")?;
            for t in ts {
                check(t, k, "boundary")?;
                b.boundary_big(&t.0, &t.1, t.2 .0.clone());
            }
        }
        for (k, ts) in &self.endo {
            let k = key(k, "endo")?;
            for t in ts {
                check(t, k, "endo")?;
                b.endo_big(&t.0, &t.1, t.2 .0.clone());
            }
        }
        b.build()
    }

    pub fn from_complex(cx: &FilteredComplex, name: Option<&str>) -> Self {
        let mut boundary = BTreeMap::new();
        let mut endo = BTreeMap::new();
        for k in 0..cx.cell_counts().len() {
            let cells = cx.cells(k);
            let e = cx.endo(k);
            let mut ts = Vec::new();
            for (j, c) in cells.iter().enumerate() {
                for (i, t) in cells.iter().enumerate() {
                    let v = e.get(i, j);
                    if !v.is_zero() {
                        ts.push(Triplet(c.id.clone(), t.id.clone(), Coef(v.clone())));
                    }
                }
            }
            if !ts.is_empty() {
                endo.insert(k.to_string(), ts);
            }
            if k > 0 {
                let bd = cx.boundary(k);
                let faces = cx.cells(k - 1);
                let mut ts = Vec::new();
                for (j, c) in cells.iter().enumerate() {
                    for (i, f) in faces.iter().enumerate() {
                        let v = bd.get(i, j);
                        if !v.is_zero() {
                            ts.push(Triplet(c.id.clone(), f.id.clone(), Coef(v.clone())));
                        }
                    }
                }
                if !ts.is_empty() {
                    boundary.insert(k.to_string(), ts);
                }
            }
        }
        ComplexFile {
            name: name.map(str::to_string),
            cells: cx.all_cells().cloned().collect(),
            boundary,
            endo,
            extensions: vec![],
        }
    }
}

pub fn parse_file(text: &str) -> Result<ComplexFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() })
}

pub fn from_json(text: &str) -> Result<FilteredComplex> {
    parse_file(text)?.to_complex()
}

pub fn to_json(cx: &FilteredComplex, name: Option<&str>) -> String {
    serde_json::to_string_pretty(&ComplexFile::from_complex(cx, name)).expect("complex serializes")
}
