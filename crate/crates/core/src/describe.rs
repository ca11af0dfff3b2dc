//! JSON group-description documents.
//!
//! ```json
//! {"type": "permutation", "degree": 3, "generators": [[2, 3, 1], [2, 1, 3]]}
//! {"type": "mod-matrix", "modulus": 3, "dim": 2, "generators": [[1, 1, 0, 1]]}
//! {"type": "named", "name": "alternating", "params": {"n": 5}}
//! {"type": "semidirect-ref", "representation": "builtin:q8", "s": 2}
//! ```
//!
//! Permutation images are 1-based. A `semidirect-ref` representation is an
//! inline representation document, `"builtin:q8"`, or a path relative to the
//! describing document.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::corpus::{named, NamedParams};
use crate::error::{Error, Result};
use crate::group::{Caps, FiniteGroup};
use crate::lattice::{construct, Construction, Representation, RepresentationDoc};

pub const BUILTIN_Q8: &str = "builtin:q8";

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum RepresentationRef {
    Inline(RepresentationDoc),
    Reference(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum GroupDoc {
    Permutation {
        degree: usize,
        generators: Vec<Vec<usize>>,
        #[serde(default)]
        name: Option<String>,
    },
    ModMatrix {
        modulus: u32,
        dim: usize,
        generators: Vec<Vec<i64>>,
        #[serde(default)]
        name: Option<String>,
    },
    Named {
        name: String,
        #[serde(default)]
        params: NamedParams,
    },
    SemidirectRef {
        representation: RepresentationRef,
        s: u32,
    },
}

/// A described group: either given directly or built by the lattice pipeline.
#[derive(Clone, Debug)]
pub enum Described {
    Group(FiniteGroup),
    Semidirect(Box<Construction>),
}

impl Described {
    pub fn group(&self) -> &FiniteGroup {
        match self {
            Described::Group(g) => g,
            Described::Semidirect(c) => c.group.group(),
        }
    }

    pub fn construction(&self) -> Option<&Construction> {
        match self {
            Described::Group(_) => None,
            Described::Semidirect(c) => Some(c),
        }
    }
}

/// Wraps a `serde_json` error with the offending line of `text`.
pub fn json_error(what: &str, text: &str, e: &serde_json::Error) -> Error {
    let line = e.line();
    let context = text
        .lines()
        .nth(line.saturating_sub(1))
        .map(|l| format!(" near `{}`", l.trim()))
        .unwrap_or_default();
    Error::Parse(format!(
        "{what}, line {line} column {}{context}: {e}",
        e.column()
    ))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

/// Resolves `"builtin:q8"` or a path to a representation document.
pub fn load_representation(reference: &str, base: Option<&Path>) -> Result<Representation> {
    if reference == BUILTIN_Q8 {
        return Ok(Representation::builtin_q8());
    }
    let path: PathBuf = match base {
        Some(dir) if Path::new(reference).is_relative() => dir.join(reference),
        _ => PathBuf::from(reference),
    };
    let text = read(&path)?;
    let doc: RepresentationDoc = serde_json::from_str(&text).map_err(|e| {
        json_error(
            &format!("representation document {}", path.display()),
            &text,
            &e,
        )
    })?;
    Representation::from_doc(&doc)
}

/// Parses a group-description document; relative paths resolve against `base`.
pub fn parse_group_document(text: &str, base: Option<&Path>, caps: Caps) -> Result<Described> {
    let doc: GroupDoc =
        serde_json::from_str(text).map_err(|e| json_error("group document", text, &e))?;
    match doc {
        GroupDoc::Permutation {
            degree,
            generators,
            name,
        } => {
            let zero_based = generators
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|&x| {
                            x.checked_sub(1).ok_or_else(|| {
                                Error::Parse("permutation images are 1-based; found 0".into())
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let name = name.unwrap_or_else(|| format!("perm({degree})"));
            Ok(Described::Group(
                FiniteGroup::permutation(name, degree, &zero_based)?.with_caps(caps),
            ))
        }
        GroupDoc::ModMatrix {
            modulus,
            dim,
            generators,
            name,
        } => {
            let name = name.unwrap_or_else(|| format!("GL({dim}, Z/{modulus})"));
            Ok(Described::Group(
                FiniteGroup::mod_matrix(name, modulus, dim, &generators)?.with_caps(caps),
            ))
        }
        GroupDoc::Named { name, params } => {
            Ok(Described::Group(named(&name, &params)?.with_caps(caps)))
        }
        GroupDoc::SemidirectRef { representation, s } => {
            let rep = match representation {
                RepresentationRef::Inline(doc) => Representation::from_doc(&doc)?,
                RepresentationRef::Reference(r) => load_representation(&r, base)?,
            };
            Ok(Described::Semidirect(Box::new(construct(&rep, s, caps)?)))
        }
    }
}

/// Reads and parses a group-description file.
pub fn load_group_document(path: &Path, caps: Caps) -> Result<Described> {
    let text = read(path)?;
    parse_group_document(&text, path.parent(), caps)
}
