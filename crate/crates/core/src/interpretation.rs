//! Finite interpretations.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::concept::{Name, Signature};
use crate::error::{Error, Result};

/// Index of a domain element.
pub type Element = usize;

/// A finite interpretation with string-identified domain elements.
///
/// Elements are addressed by their position in the domain list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    elements: Vec<String>,
    index: HashMap<String, Element>,
    concepts: BTreeMap<Name, BTreeSet<Element>>,
    roles: BTreeMap<Name, BTreeSet<(Element, Element)>>,
}

impl Interpretation {
    /// Builds and validates an interpretation from element identifiers.
    pub fn new<D, S>(
        domain: D,
        concepts: impl IntoIterator<Item = (S, Vec<S>)>,
        roles: impl IntoIterator<Item = (S, Vec<(S, S)>)>,
    ) -> Result<Self>
    where
        D: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        for e in domain {
            let e = e.as_ref().to_string();
            if index.contains_key(&e) {
                return Err(Error::Validation(format!("duplicate element {e:?}")));
            }
            index.insert(e.clone(), elements.len());
            elements.push(e);
        }
        if elements.is_empty() {
            return Err(Error::Validation("the domain must be non-empty".into()));
        }
        let lookup = |id: &str, ctx: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::Validation(format!("{ctx} refers to unknown element {id:?}")))
        };
        let mut cmap: BTreeMap<Name, BTreeSet<Element>> = BTreeMap::new();
        for (name, ext) in concepts {
            let name = name.as_ref();
            let entry = cmap.entry(Name::from(name)).or_default();
            for e in ext {
                entry.insert(lookup(e.as_ref(), &format!("concept {name:?}"))?);
            }
        }
        let mut rmap: BTreeMap<Name, BTreeSet<(Element, Element)>> = BTreeMap::new();
        for (name, pairs) in roles {
            let name = name.as_ref();
            if cmap.contains_key(name) {
                return Err(Error::Validation(format!(
                    "{name:?} is used both as a concept name and as a role name"
                )));
            }
            let entry = rmap.entry(Name::from(name)).or_default();
            for (s, t) in pairs {
                let ctx = format!("role {name:?}");
                entry.insert((lookup(s.as_ref(), &ctx)?, lookup(t.as_ref(), &ctx)?));
            }
        }
        Ok(Interpretation {
            elements,
            index,
            concepts: cmap,
            roles: rmap,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.elements.len()
    }

    pub fn element_name(&self, e: Element) -> &str {
        &self.elements[e]
    }

    pub fn element_names(&self) -> &[String] {
        &self.elements
    }

    pub fn element(&self, id: &str) -> Result<Element> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Resolves a list of element identifiers.
    pub fn element_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<BTreeSet<Element>> {
        ids.iter().map(|s| self.element(s.as_ref())).collect()
    }

    /// Extension of a concept name (empty for unknown names).
    pub fn concept_ext(&self, name: &str) -> BTreeSet<Element> {
        self.concepts.get(name).cloned().unwrap_or_default()
    }

    /// Extension of a role name (empty for unknown names).
    pub fn role_ext(&self, name: &str) -> BTreeSet<(Element, Element)> {
        self.roles.get(name).cloned().unwrap_or_default()
    }

    pub fn concepts(&self) -> &BTreeMap<Name, BTreeSet<Element>> {
        &self.concepts
    }

    pub fn roles(&self) -> &BTreeMap<Name, BTreeSet<(Element, Element)>> {
        &self.roles
    }

    /// Names with a non-empty extension.
    pub fn active_signature(&self) -> Signature {
        Signature {
            concept_names: self
                .concepts
                .iter()
                .filter(|(_, ext)| !ext.is_empty())
                .map(|(n, _)| n.clone())
                .collect(),
            role_names: self
                .roles
                .iter()
                .filter(|(_, ext)| !ext.is_empty())
                .map(|(n, _)| n.clone())
                .collect(),
        }
    }

    /// Renders an element set as `{a, b}`.
    pub fn format_set<'s>(&self, set: impl IntoIterator<Item = &'s Element>) -> String {
        let names: Vec<&str> = set.into_iter().map(|&e| self.element_name(e)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

pub fn active_signature(i: &Interpretation) -> Signature {
    i.active_signature()
}
