//! Compact classification codes and canonical document serialization.
//!
//! A compact code has one symbol per taxonomy attribute, in taxonomy order.
//! Each symbol is the `code_letter` of the selected characteristic (or of
//! its selected sub-type), `-` for an unset attribute, or `*` for a
//! multi-select. `*` is lossy: decoding it yields an unset attribute.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classification::{AssetClassification, ClassificationBuilder, Selection};
use crate::taxonomy::{AttributeDef, Taxonomy};

pub const UNSET: char = '-';
pub const MULTI: char = '*';

/// Note attached to attributes decoded from `*`.
pub const MULTI_NOTE: &str = "multi-valued in source code";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompactCode(String);

impl CompactCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for CompactCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("code has {found} symbols, taxonomy requires {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("illegal symbol at position {position}: {symbol:?} not in {{{}}}", format_alphabet(.alphabet))]
    IllegalSymbol {
        /// 1-based.
        position: usize,
        symbol: char,
        alphabet: Vec<char>,
    },
}

fn format_alphabet(a: &[char]) -> String {
    a.iter().map(char::to_string).collect::<Vec<_>>().join(",")
}

enum Symbol<'a> {
    Characteristic(&'a str),
    Subtype(&'a str, &'a str),
}

fn symbol_table(attr: &AttributeDef) -> Vec<(char, Symbol<'_>)> {
    let mut table = Vec::new();
    for ch in &attr.characteristics {
        table.push((ch.code_letter, Symbol::Characteristic(&ch.id)));
        for sub in &ch.subtypes {
            table.push((sub.code_letter, Symbol::Subtype(&ch.id, &sub.id)));
        }
    }
    table
}

/// Legal symbols at one code position: declared letters in declaration
/// order, then `-` and `*`.
pub fn position_alphabet(attr: &AttributeDef) -> Vec<char> {
    let mut alphabet: Vec<char> = Vec::new();
    for ch in &attr.characteristics {
        if ch.subtypes.is_empty() {
            alphabet.push(ch.code_letter);
        } else {
            alphabet.extend(ch.subtypes.iter().map(|s| s.code_letter));
            alphabet.push(ch.code_letter);
        }
    }
    alphabet.extend([UNSET, MULTI]);
    alphabet
}

fn encode_selection(attr: &AttributeDef, sel: &Selection) -> char {
    if sel.is_multi() {
        return MULTI;
    }
    let Some(ch) = sel
        .characteristic_ids()
        .first()
        .and_then(|id| attr.characteristic(id))
    else {
        // precondition violated: unknown characteristic
        return UNSET;
    };
    sel.subtype_id()
        .and_then(|s| ch.subtype(s))
        .map_or(ch.code_letter, |s| s.code_letter)
}

/// Encodes `c`, which must be valid in partial mode against `t`.
pub fn encode(t: &Taxonomy, c: &AssetClassification) -> CompactCode {
    let text = t
        .attributes
        .iter()
        .map(|attr| match c.selection(&attr.id) {
            None => UNSET,
            Some(sel) => encode_selection(attr, sel),
        })
        .collect();
    CompactCode(text)
}

/// Decodes a compact code into a partial classification named after the code.
pub fn decode(t: &Taxonomy, code: &str) -> Result<AssetClassification, CodecError> {
    let symbols: Vec<char> = code.chars().collect();
    if symbols.len() != t.attributes.len() {
        return Err(CodecError::WrongLength {
            expected: t.attributes.len(),
            found: symbols.len(),
        });
    }
    let mut b = ClassificationBuilder::new(code, &t.id, &t.version);
    for (i, (attr, &symbol)) in t.attributes.iter().zip(&symbols).enumerate() {
        match symbol {
            UNSET => {}
            MULTI => b = b.note(&attr.id, MULTI_NOTE),
            _ => {
                let found = symbol_table(attr).into_iter().find(|(l, _)| *l == symbol);
                let sel = match found {
                    Some((_, Symbol::Characteristic(ch))) => Selection::single(ch),
                    Some((_, Symbol::Subtype(ch, sub))) => Selection::with_subtype(ch, sub),
                    None => {
                        return Err(CodecError::IllegalSymbol {
                            position: i + 1,
                            symbol,
                            alphabet: position_alphabet(attr),
                        })
                    }
                };
                b = b.select(&attr.id, sel);
            }
        }
    }
    Ok(b.build())
}

/// Parse failure of a JSON document, with its location.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("document error at line {line}, column {column}: {message}")]
pub struct DocumentError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        Self {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SelectionDoc {
    characteristics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subtype: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassificationDoc {
    asset_name: String,
    taxonomy_id: String,
    taxonomy_version: String,
    selections: BTreeMap<String, SelectionDoc>,
    /// Notes on attributes that are left unset.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    notes: BTreeMap<String, String>,
}

fn canonical<T: Serialize>(value: &T) -> String {
    // serde_json::Value keeps object keys sorted; arrays keep their order
    let value = serde_json::to_value(value).expect("document types always serialize");
    let mut text = serde_json::to_string_pretty(&value).expect("value always serializes");
    text.push('\n');
    text
}

/// Canonical taxonomy document: sorted keys, 2-space indent, trailing newline.
pub fn serialize_taxonomy(t: &Taxonomy) -> String {
    canonical(t)
}

/// Canonical classification document. Unset attributes are omitted from
/// `selections`; their notes move to the top-level `notes` object.
pub fn serialize_classification(c: &AssetClassification) -> String {
    canonical(&to_doc(c))
}

fn to_doc(c: &AssetClassification) -> ClassificationDoc {
    let selections = c
        .selections()
        .iter()
        .map(|(attr, sel)| {
            let doc = SelectionDoc {
                characteristics: sel.characteristic_ids().iter().cloned().collect(),
                subtype: sel.subtype_id().map(str::to_string),
                note: c.note(attr).map(str::to_string),
            };
            (attr.clone(), doc)
        })
        .collect();
    let notes = c
        .notes()
        .iter()
        .filter(|(attr, _)| !c.is_set(attr))
        .map(|(a, n)| (a.clone(), n.clone()))
        .collect();
    ClassificationDoc {
        asset_name: c.asset_name().to_string(),
        taxonomy_id: c.taxonomy_id().to_string(),
        taxonomy_version: c.taxonomy_version().to_string(),
        selections,
        notes,
    }
}

/// Serializes to a JSON value (same shape as the document).
pub fn classification_to_value(c: &AssetClassification) -> serde_json::Value {
    serde_json::to_value(to_doc(c)).expect("document types always serialize")
}

pub fn parse_classification(document: &str) -> Result<AssetClassification, DocumentError> {
    let doc: ClassificationDoc = serde_json::from_str(document)?;
    from_doc(doc)
}

pub fn classification_from_value(value: serde_json::Value) -> Result<AssetClassification, DocumentError> {
    let doc: ClassificationDoc = serde_json::from_value(value)?;
    from_doc(doc)
}

fn from_doc(doc: ClassificationDoc) -> Result<AssetClassification, DocumentError> {
    let mut b = ClassificationBuilder::new(doc.asset_name, doc.taxonomy_id, doc.taxonomy_version);
    for (attr, note) in doc.notes {
        if doc.selections.contains_key(&attr) {
            return Err(DocumentError {
                line: 0,
                column: 0,
                message: format!("note for {attr:?} belongs in its selection"),
            });
        }
        b = b.note(attr, note);
    }
    for (attr, sel) in doc.selections {
        let count = sel.characteristics.len();
        let ids: BTreeSet<String> = sel.characteristics.into_iter().collect();
        if ids.len() != count {
            return Err(DocumentError {
                line: 0,
                column: 0,
                message: format!("duplicate characteristic id in selection for {attr:?}"),
            });
        }
        if let Some(note) = sel.note {
            b = b.note(&attr, note);
        }
        b = b.select(attr, Selection::from_parts(ids, sel.subtype));
    }
    Ok(b.build())
}
