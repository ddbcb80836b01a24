//! Taxonomy documents: attributes, their characteristics and sub-types.
//!
//! A [`Taxonomy`] is the morphological box itself. Attribute order is
//! normative: it fixes compact-code symbol positions and render row order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

mod builtin;

pub use builtin::builtin_taxonomy;

/// Ordering semantics of an attribute's characteristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharacteristicOrdering {
    /// Characteristics are plain categories.
    Unordered,
    /// Each characteristic contains the information of its predecessors.
    Cumulative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Taxonomy {
    pub id: String,
    pub name: String,
    pub version: String,
    /// Normative order.
    pub attributes: Vec<AttributeDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeDef {
    pub id: String,
    pub name: String,
    /// The question the attribute answers, e.g. "Which technology is the asset based on?".
    pub question: String,
    pub ordering: CharacteristicOrdering,
    pub multi_select_allowed: bool,
    pub characteristics: Vec<CharacteristicDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacteristicDef {
    pub id: String,
    pub label: String,
    /// Symbol used by the compact code when this characteristic is selected
    /// without a sub-type.
    pub code_letter: char,
    pub description: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subtypes: Vec<SubtypeDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubtypeDef {
    pub id: String,
    pub label: String,
    /// Compact-code symbol for the parent characteristic resolved to this sub-type.
    pub code_letter: char,
}

impl Taxonomy {
    pub fn attribute(&self, id: &str) -> Option<&AttributeDef> {
        self.attributes.iter().find(|a| a.id == id)
    }

    pub fn attribute_index(&self, id: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.id == id)
    }

    pub fn attribute_ids(&self) -> impl Iterator<Item = &str> {
        self.attributes.iter().map(|a| a.id.as_str())
    }

    /// Total number of characteristic cells in the morphological box.
    pub fn cell_count(&self) -> usize {
        self.attributes.iter().map(|a| a.characteristics.len()).sum()
    }
}

impl AttributeDef {
    pub fn characteristic(&self, id: &str) -> Option<&CharacteristicDef> {
        self.characteristics.iter().find(|c| c.id == id)
    }

    pub fn characteristic_index(&self, id: &str) -> Option<usize> {
        self.characteristics.iter().position(|c| c.id == id)
    }

    pub fn is_cumulative(&self) -> bool {
        self.ordering == CharacteristicOrdering::Cumulative
    }
}

impl CharacteristicDef {
    pub fn subtype(&self, id: &str) -> Option<&SubtypeDef> {
        self.subtypes.iter().find(|s| s.id == id)
    }
}

/// One broken structural rule of a taxonomy definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaViolation {
    /// Dotted location, e.g. `attributes[2].characteristics[0]`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TaxonomyError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid taxonomy: {}", join_violations(.0))]
    Invalid(Vec<SchemaViolation>),
}

fn join_violations(v: &[SchemaViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Parses a taxonomy document and checks it with [`validate_taxonomy`].
pub fn parse_taxonomy(document: &str) -> Result<Taxonomy, TaxonomyError> {
    let taxonomy: Taxonomy = serde_json::from_str(document).map_err(|e| TaxonomyError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let violations = validate_taxonomy(&taxonomy);
    if violations.is_empty() {
        Ok(taxonomy)
    } else {
        Err(TaxonomyError::Invalid(violations))
    }
}

fn is_token(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Returns every structural violation in `t`; an empty vector means valid.
pub fn validate_taxonomy(t: &Taxonomy) -> Vec<SchemaViolation> {
    let mut out = Vec::new();
    let mut push = |path: String, message: String| out.push(SchemaViolation { path, message });

    if t.id.trim().is_empty() {
        push("id".into(), "taxonomy id must not be empty".into());
    }
    if t.attributes.is_empty() {
        push(
            "attributes".into(),
            "taxonomy requires at least one attribute".into(),
        );
    }

    let mut seen_attr: HashMap<&str, usize> = HashMap::new();
    for (i, attr) in t.attributes.iter().enumerate() {
        let at = format!("attributes[{i}]");
        if !is_token(&attr.id) {
            push(
                format!("{at}.id"),
                format!("attribute id {:?} is not a snake-case token", attr.id),
            );
        }
        if let Some(first) = seen_attr.insert(&attr.id, i) {
            push(
                at.clone(),
                format!(
                    "duplicate attribute id {:?} at positions {first} and {i}",
                    attr.id
                ),
            );
        }
        if attr.characteristics.len() < 2 {
            push(
                format!("{at}.characteristics"),
                format!(
                    "attribute {:?} requires ≥2 characteristics, found {}",
                    attr.id,
                    attr.characteristics.len()
                ),
            );
        }

        let mut seen_char: HashMap<&str, usize> = HashMap::new();
        // every symbol that can appear at this attribute's code position
        let mut seen_letter: HashMap<char, String> = HashMap::new();
        for (j, ch) in attr.characteristics.iter().enumerate() {
            let cp = format!("{at}.characteristics[{j}]");
            if !is_token(&ch.id) {
                push(
                    format!("{cp}.id"),
                    format!("characteristic id {:?} is not a snake-case token", ch.id),
                );
            }
            if let Some(first) = seen_char.insert(&ch.id, j) {
                push(
                    cp.clone(),
                    format!(
                        "duplicate characteristic id {:?} in attribute {:?} at positions {first} and {j}",
                        ch.id, attr.id
                    ),
                );
            }
            let mut letters = vec![(ch.code_letter, format!("{cp}.code_letter"), ch.id.clone())];
            let mut seen_sub: BTreeSet<&str> = BTreeSet::new();
            for (k, sub) in ch.subtypes.iter().enumerate() {
                let sp = format!("{cp}.subtypes[{k}]");
                if !is_token(&sub.id) {
                    push(
                        format!("{sp}.id"),
                        format!("subtype id {:?} is not a snake-case token", sub.id),
                    );
                }
                if !seen_sub.insert(&sub.id) {
                    push(
                        sp.clone(),
                        format!("duplicate subtype id {:?} under {:?}", sub.id, ch.id),
                    );
                }
                letters.push((
                    sub.code_letter,
                    format!("{sp}.code_letter"),
                    format!("{}/{}", ch.id, sub.id),
                ));
            }
            for (letter, path, owner) in letters {
                if !letter.is_ascii_uppercase() {
                    push(
                        path,
                        format!("code_letter {letter:?} is not an uppercase ASCII letter"),
                    );
                } else if let Some(prev) = seen_letter.insert(letter, owner.clone()) {
                    push(
                        path,
                        format!(
                            "duplicate code_letter {letter:?} in attribute {:?} ({prev} and {owner})",
                            attr.id
                        ),
                    );
                }
            }
        }
    }
    out
}
