//! JSON object descriptors.
//!
//! ```json
//! {"kind":"group","name":"S3","presentation":{"permutations":[[1,0,2],[1,2,0]],"degree":3}}
//! {"kind":"group","name":"C4","cayley":[[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]}
//! {"kind":"pointed_set","name":"P3","size":3}
//! ```
//!
//! A file holds one descriptor or an array of them. Unknown fields are
//! rejected.

use serde::Deserialize;

use crate::error::{CatError, Result};
use crate::object::{BackendKind, FiniteObject, Obj};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Presentation {
    pub permutations: Vec<Vec<usize>>,
    pub degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescriptorKind {
    Group,
    PointedSet,
}

/// One descriptor as written. Which optional fields are required depends
/// on `kind`; [`Descriptor::build`] checks the combination.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub kind: DescriptorKind,
    pub name: String,
    #[serde(default)]
    pub presentation: Option<Presentation>,
    #[serde(default)]
    pub cayley: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub size: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(Descriptor),
    Many(Vec<Descriptor>),
}

impl Descriptor {
    /// Builds the object in a backend of the given kind. Permutation
    /// presentations stop generating once `size_bound` is exceeded.
    pub fn build(&self, kind: BackendKind, size_bound: usize) -> Result<Obj> {
        let name = &self.name;
        match self.kind {
            DescriptorKind::Group => {
                if !kind.is_group() {
                    return Err(CatError::InvalidObject(format!(
                        "`{name}` is a group but the backend is {kind}"
                    )));
                }
                match (&self.presentation, &self.cayley, self.size) {
                    (Some(p), None, None) => {
                        FiniteObject::from_permutations(name.clone(), kind, p.degree, &p.permutations, size_bound)
                    }
                    (None, Some(rows), None) => FiniteObject::from_cayley(name.clone(), kind, rows),
                    _ => Err(CatError::InvalidObject(format!(
                        "`{name}`: a group takes exactly one of `presentation` and `cayley`"
                    ))),
                }
            }
            DescriptorKind::PointedSet => {
                if kind != BackendKind::PointedSet {
                    return Err(CatError::InvalidObject(format!(
                        "`{name}` is a pointed set but the backend is {kind}"
                    )));
                }
                match (&self.presentation, &self.cayley, self.size) {
                    (None, None, Some(size)) => FiniteObject::pointed_set(name.clone(), size),
                    _ => Err(CatError::InvalidObject(format!(
                        "`{name}`: a pointed set takes only `size`"
                    ))),
                }
            }
        }
    }
}

/// Parses a descriptor document. Syntax and schema errors carry the
/// 1-based line and column reported by the JSON parser.
pub fn parse_descriptors(text: &str) -> Result<Vec<Descriptor>> {
    let parsed: OneOrMany = serde_json::from_str(text).map_err(|e| {
        // untagged enums lose the inner message, so retry for a better one
        let detail = match serde_json::from_str::<serde_json::Value>(text) {
            Err(syntax) => syntax,
            Ok(v) if v.is_array() => serde_json::from_str::<Vec<Descriptor>>(text).err().unwrap_or(e),
            Ok(_) => serde_json::from_str::<Descriptor>(text).err().unwrap_or(e),
        };
        // the Display form ends with its own position, which the error re-adds
        let text = detail.to_string();
        let suffix = format!(" at line {} column {}", detail.line(), detail.column());
        CatError::Parse {
            line: detail.line(),
            column: detail.column(),
            message: text.strip_suffix(&suffix).unwrap_or(&text).to_string(),
        }
    })?;
    Ok(match parsed {
        OneOrMany::One(d) => vec![d],
        OneOrMany::Many(ds) => ds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_presentation() {
        let ds = parse_descriptors(
            r#"{"kind":"group","name":"S3","presentation":{"permutations":[[1,0,2],[1,2,0]],"degree":3}}"#,
        )
        .unwrap();
        let s3 = ds[0].build(BackendKind::Group, 60).unwrap();
        assert_eq!(s3.size(), 6);
        assert!(!s3.is_commutative());
        assert!(ds[0].build(BackendKind::AbelianGroup, 60).is_err());
    }

    #[test]
    fn cayley_and_pointed_sets() {
        let ds = parse_descriptors(
            r#"[{"kind":"group","name":"C4","cayley":[[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]},
                {"kind":"pointed_set","name":"P3","size":3}]"#,
        )
        .unwrap();
        assert_eq!(ds.len(), 2);
        let c4 = ds[0].build(BackendKind::AbelianGroup, 64).unwrap();
        assert_eq!(c4.name(), "C4");
        assert_eq!(ds[1].build(BackendKind::PointedSet, 16).unwrap().size(), 3);
        assert!(ds[1].build(BackendKind::Group, 60).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected_with_a_position() {
        let err = parse_descriptors("{\"kind\":\"pointed_set\",\n\"name\":\"P\",\"size\":2,\"colour\":1}").unwrap_err();
        match err {
            CatError::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("colour"), "{message}");
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn syntax_errors_report_line_and_column() {
        match parse_descriptors("[\n  {\"kind\": \"group\",, }\n]").unwrap_err() {
            CatError::Parse { line, column, .. } => assert_eq!((line, column), (2, 20)),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn invalid_tables_and_bounds() {
        let ds = parse_descriptors(r#"{"kind":"group","name":"X","cayley":[[0,1],[1,1]]}"#).unwrap();
        assert!(matches!(ds[0].build(BackendKind::Group, 60), Err(CatError::InvalidObject(_))));
        let s5 = parse_descriptors(
            r#"{"kind":"group","name":"S5","presentation":{"permutations":[[1,0,2,3,4],[1,2,3,4,0]],"degree":5}}"#,
        )
        .unwrap();
        assert!(matches!(s5[0].build(BackendKind::Group, 60), Err(CatError::BoundExceeded { .. })));
        let both = parse_descriptors(
            r#"{"kind":"group","name":"Y","cayley":[[0]],"presentation":{"permutations":[],"degree":1}}"#,
        )
        .unwrap();
        assert!(both[0].build(BackendKind::Group, 60).is_err());
    }
}
