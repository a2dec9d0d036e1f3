//! JSON system files.
//!
//! ```json
//! {
//!   "name": "acampo",
//!   "variables": ["x1", "x2"],
//!   "polynomials": [[{"x1": 3}, {"x2": 2}], [{"x1": 2}, {"x2": 3}]],
//!   "deformed": [1, 2],
//!   "aux_placement": [],
//!   "mirror_partition": null
//! }
//! ```
//!
//! Monomials are maps from variable name to exponent; `{}` is the constant 1.
//! `deformed` and `aux_placement` are 1-based (polynomial indices and term
//! indices of the phase function); `deformed` defaults to every polynomial.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cayley::{AuxPlacement, LaurentSystem, Polynomial};
use crate::error::{Error, IoError};
use crate::mirror::MirrorInput;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub variables: Vec<String>,
    pub polynomials: Vec<Vec<BTreeMap<String, i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deformed: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_placement: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror_partition: Option<Vec<Vec<String>>>,
}

fn schema(location: impl Into<String>, msg: impl Into<String>) -> IoError {
    IoError::Schema { location: location.into(), msg: msg.into() }
}

pub fn parse_str(text: &str) -> Result<SystemSpec, IoError> {
    let spec: SystemSpec = serde_json::from_str(text)
        .map_err(|e| IoError::Json { line: e.line(), column: e.column(), msg: e.to_string() })?;
    spec.validate()?;
    Ok(spec)
}

pub fn parse_system(path: &Path) -> Result<SystemSpec, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.display().to_string(), source })?;
    parse_str(&text)
}

/// Canonical pretty form; `parse_str(&emit(s)) == s`.
pub fn emit(spec: &SystemSpec) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("plain data serializes");
    s.push('\n');
    s
}

impl SystemSpec {
    pub fn validate(&self) -> Result<(), IoError> {
        let mut seen = BTreeSet::new();
        for (i, v) in self.variables.iter().enumerate() {
            if v.is_empty() {
                return Err(schema(format!("variables[{i}]"), "empty variable name"));
            }
            if !seen.insert(v) {
                return Err(schema(format!("variables[{i}]"), format!("duplicate variable `{v}`")));
            }
        }
        if self.polynomials.is_empty() {
            return Err(schema("polynomials", "at least one polynomial is required"));
        }
        for (p, poly) in self.polynomials.iter().enumerate() {
            if poly.is_empty() {
                return Err(schema(format!("polynomials[{p}]"), "empty polynomial"));
            }
            let mut mons = BTreeSet::new();
            for (m, mono) in poly.iter().enumerate() {
                for name in mono.keys() {
                    if !seen.contains(name) {
                        return Err(schema(format!("polynomials[{p}][{m}].{name}"), format!("undeclared variable `{name}`")));
                    }
                }
                let canon: BTreeMap<&String, i64> = mono.iter().filter(|(_, &e)| e != 0).map(|(k, &e)| (k, e)).collect();
                if !mons.insert(canon) {
                    return Err(schema(format!("polynomials[{p}][{m}]"), "repeated monomial"));
                }
            }
        }
        if let Some(d) = &self.deformed {
            let mut ds = BTreeSet::new();
            for (i, &q) in d.iter().enumerate() {
                if q == 0 || q > self.polynomials.len() || !ds.insert(q) {
                    return Err(schema(format!("deformed[{i}]"), format!("polynomial index {q} invalid or repeated (1-based)")));
                }
            }
        }
        if let Some(a) = &self.aux_placement {
            let terms = self.term_count();
            for (i, &t) in a.iter().enumerate() {
                if t == 0 || t > terms {
                    return Err(schema(format!("aux_placement[{i}]"), format!("term index {t} outside 1..={terms}")));
                }
            }
        }
        if let Some(part) = &self.mirror_partition {
            for (q, blk) in part.iter().enumerate() {
                for (i, v) in blk.iter().enumerate() {
                    if !seen.contains(v) {
                        return Err(schema(format!("mirror_partition[{q}][{i}]"), format!("undeclared variable `{v}`")));
                    }
                }
            }
        }
        Ok(())
    }

    fn is_deformed(&self, q: usize) -> bool {
        self.deformed.as_ref().is_none_or(|d| d.contains(&(q + 1)))
    }

    fn term_count(&self) -> usize {
        self.polynomials.iter().enumerate().map(|(q, p)| p.len() + usize::from(self.is_deformed(q))).sum()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn to_system(&self) -> Result<LaurentSystem, Error> {
        let n = self.variables.len();
        let polys = self
            .polynomials
            .iter()
            .enumerate()
            .map(|(q, p)| Polynomial {
                monomials: p
                    .iter()
                    .map(|m| {
                        let mut e = vec![0; n];
                        for (name, &v) in m {
                            e[self.var_index(name).expect("validated")] = v;
                        }
                        e
                    })
                    .collect(),
                deformed: self.is_deformed(q),
            })
            .collect();
        Ok(LaurentSystem::new(self.variables.clone(), polys)?)
    }

    /// Explicit placement (0-based), if the file carries one.
    pub fn placement(&self) -> Option<AuxPlacement> {
        self.aux_placement.as_ref().map(|a| AuxPlacement::new(a.iter().map(|t| t - 1).collect()))
    }

    pub fn mirror_input(&self) -> Option<Result<MirrorInput, Error>> {
        let part = self.mirror_partition.as_ref()?;
        let idx: Vec<Vec<usize>> =
            part.iter().map(|b| b.iter().map(|v| self.var_index(v).expect("validated")).collect()).collect();
        Some(self.to_system().and_then(|sys| Ok(MirrorInput::from_system(&sys, &idx)?)))
    }

    /// Spec for an in-memory system (every field explicit).
    pub fn from_system(sys: &LaurentSystem, placement: Option<&AuxPlacement>) -> SystemSpec {
        let polynomials = sys
            .polys
            .iter()
            .map(|p| {
                p.monomials
                    .iter()
                    .map(|e| e.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (sys.names[i].clone(), v)).collect())
                    .collect()
            })
            .collect();
        let deformed = sys.polys.iter().enumerate().filter(|(_, p)| p.deformed).map(|(q, _)| q + 1).collect();
        SystemSpec {
            name: None,
            variables: sys.names.clone(),
            polynomials,
            deformed: Some(deformed),
            aux_placement: placement.map(|p| p.assignments.iter().map(|t| t + 1).collect()),
            mirror_partition: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_error_has_position() {
        let err = parse_str("{\n  \"variables\": [\"x\"],\n  \"polynomials\": [[{\"x\": 1}]\n").unwrap_err();
        assert!(matches!(err, IoError::Json { line: 4, .. }), "{err:?}");
    }

    #[test]
    fn undeclared_name_located() {
        let err = parse_str(r#"{"variables":["x"],"polynomials":[[{"y":1}]]}"#).unwrap_err();
        match err {
            IoError::Schema { location, .. } => assert_eq!(location, "polynomials[0][0].y"),
            e => panic!("{e:?}"),
        }
    }
}
