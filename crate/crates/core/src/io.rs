//! Interpretation files (JSON) and TBox files (one axiom per line).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::concept::TBox;
use crate::error::{Error, Result};
use crate::interpretation::Interpretation;
use crate::syntax::parse_axiom;

/// On-disk form of an interpretation.
///
/// ```json
/// {"domain": ["a", "b"], "concepts": {"A": ["a"]}, "roles": {"r": [["a", "b"]]}}
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpretationFile {
    pub domain: Vec<String>,
    #[serde(default)]
    pub concepts: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub roles: BTreeMap<String, Vec<(String, String)>>,
}

impl InterpretationFile {
    pub fn to_interpretation(&self) -> Result<Interpretation> {
        Interpretation::new(
            self.domain.iter().map(String::as_str),
            self.concepts
                .iter()
                .map(|(n, ext)| (n.as_str(), ext.iter().map(String::as_str).collect())),
            self.roles.iter().map(|(n, pairs)| {
                (n.as_str(), pairs.iter().map(|(s, t)| (s.as_str(), t.as_str())).collect())
            }),
        )
    }

    pub fn from_interpretation(i: &Interpretation) -> Self {
        let sig = i.active_signature();
        let name = |e| i.element_name(e).to_string();
        InterpretationFile {
            domain: i.element_names().to_vec(),
            concepts: sig
                .concept_names
                .iter()
                .map(|a| (a.to_string(), i.concept_ext(a).into_iter().map(name).collect()))
                .collect(),
            roles: sig
                .role_names
                .iter()
                .map(|r| {
                    let pairs = i.role_ext(r).into_iter().map(|(s, t)| (name(s), name(t))).collect();
                    (r.to_string(), pairs)
                })
                .collect(),
        }
    }
}

fn json_error(path: &str, e: serde_json::Error) -> Error {
    Error::Json {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses interpretation JSON; `origin` names the source in errors.
pub fn parse_interpretation(text: &str, origin: &str) -> Result<Interpretation> {
    let file: InterpretationFile = serde_json::from_str(text).map_err(|e| json_error(origin, e))?;
    file.to_interpretation()
}

pub fn load_interpretation(path: impl AsRef<Path>) -> Result<Interpretation> {
    let path = path.as_ref();
    parse_interpretation(&read(path)?, &path.display().to_string())
}

pub fn interpretation_to_json(i: &Interpretation) -> String {
    serde_json::to_string_pretty(&InterpretationFile::from_interpretation(i)).expect("plain data serializes")
}

pub fn save_interpretation(i: &Interpretation, path: impl AsRef<Path>) -> Result<()> {
    let mut text = interpretation_to_json(i);
    text.push('\n');
    write(path.as_ref(), &text)
}

/// Parses a TBox file. Blank lines and lines starting with `#` are skipped.
pub fn parse_tbox(text: &str, origin: &str) -> Result<TBox> {
    let mut t = TBox::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let axiom = parse_axiom(line).map_err(|e| Error::FileSyntax {
            path: origin.to_string(),
            line: k + 1,
            message: e.to_string(),
        })?;
        t.insert(axiom);
    }
    Ok(t)
}

pub fn load_tbox(path: impl AsRef<Path>) -> Result<TBox> {
    let path = path.as_ref();
    parse_tbox(&read(path)?, &path.display().to_string())
}

/// Renders a TBox with `# ` header lines and the axioms sorted by their
/// text.
pub fn render_tbox(t: &TBox, header: &[String]) -> String {
    let mut lines: Vec<String> = t.axioms().iter().map(|a| a.to_string()).collect();
    lines.sort();
    let mut out = String::new();
    for h in header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

pub fn save_tbox(t: &TBox, header: &[String], path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &render_tbox(t, header))
}
