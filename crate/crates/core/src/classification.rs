//! Asset classifications against a taxonomy and their structural validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::lint::{LintFinding, Linter};
use crate::registry::AssetId;
use crate::taxonomy::Taxonomy;

mod fixtures;

pub use fixtures::{paper_fixture, paper_fixtures, FIXTURE_NAMES};

/// The characteristics chosen for one attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selection {
    characteristic_ids: BTreeSet<String>,
    subtype_id: Option<String>,
}

impl Selection {
    pub fn single(characteristic: impl Into<String>) -> Self {
        Self {
            characteristic_ids: BTreeSet::from([characteristic.into()]),
            subtype_id: None,
        }
    }

    pub fn with_subtype(characteristic: impl Into<String>, subtype: impl Into<String>) -> Self {
        Self {
            characteristic_ids: BTreeSet::from([characteristic.into()]),
            subtype_id: Some(subtype.into()),
        }
    }

    pub fn many<I, S>(characteristics: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            characteristic_ids: characteristics.into_iter().map(Into::into).collect(),
            subtype_id: None,
        }
    }

    /// Builds a selection from its raw parts; used by document parsing.
    pub fn from_parts(characteristic_ids: BTreeSet<String>, subtype_id: Option<String>) -> Self {
        Self {
            characteristic_ids,
            subtype_id,
        }
    }

    pub fn characteristic_ids(&self) -> &BTreeSet<String> {
        &self.characteristic_ids
    }

    pub fn subtype_id(&self) -> Option<&str> {
        self.subtype_id.as_deref()
    }

    pub fn contains(&self, characteristic: &str) -> bool {
        self.characteristic_ids.contains(characteristic)
    }

    pub fn is_multi(&self) -> bool {
        self.characteristic_ids.len() > 1
    }

    /// `true` when exactly `characteristic` is selected (any sub-type).
    pub fn is_only(&self, characteristic: &str) -> bool {
        self.characteristic_ids.len() == 1 && self.contains(characteristic)
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<&str> = self.characteristic_ids.iter().map(String::as_str).collect();
        if ids.len() == 1 {
            f.write_str(ids[0])?;
        } else {
            write!(f, "{{{}}}", ids.join(", "))?;
        }
        if let Some(sub) = &self.subtype_id {
            write!(f, "/{sub}")?;
        }
        Ok(())
    }
}

impl Serialize for Selection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One asset's assignment of characteristics to attributes. Absent
/// attributes are unset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssetClassification {
    asset_id: Option<AssetId>,
    asset_name: String,
    taxonomy_id: String,
    taxonomy_version: String,
    selections: BTreeMap<String, Selection>,
    notes: BTreeMap<String, String>,
}

impl AssetClassification {
    pub fn builder(asset_name: impl Into<String>, taxonomy: &Taxonomy) -> ClassificationBuilder {
        ClassificationBuilder::new(asset_name, &taxonomy.id, &taxonomy.version)
    }

    pub fn asset_id(&self) -> Option<&AssetId> {
        self.asset_id.as_ref()
    }

    pub fn asset_name(&self) -> &str {
        &self.asset_name
    }

    pub fn taxonomy_id(&self) -> &str {
        &self.taxonomy_id
    }

    pub fn taxonomy_version(&self) -> &str {
        &self.taxonomy_version
    }

    pub fn selections(&self) -> &BTreeMap<String, Selection> {
        &self.selections
    }

    pub fn selection(&self, attribute: &str) -> Option<&Selection> {
        self.selections.get(attribute)
    }

    pub fn notes(&self) -> &BTreeMap<String, String> {
        &self.notes
    }

    pub fn note(&self, attribute: &str) -> Option<&str> {
        self.notes.get(attribute).map(String::as_str)
    }

    pub fn is_set(&self, attribute: &str) -> bool {
        self.selections.contains_key(attribute)
    }

    /// Attribute ids of `t` that this classification leaves unset, in taxonomy order.
    pub fn unset_attributes<'t>(&self, t: &'t Taxonomy) -> Vec<&'t str> {
        t.attribute_ids().filter(|a| !self.is_set(a)).collect()
    }

    pub fn matches_taxonomy(&self, t: &Taxonomy) -> bool {
        self.taxonomy_id == t.id && self.taxonomy_version == t.version
    }

    /// Same classification, tagged with a registry identifier.
    pub fn with_asset_id(mut self, id: Option<AssetId>) -> Self {
        self.asset_id = id;
        self
    }

    /// Same classification with notes dropped, for note-insensitive comparison.
    pub fn without_notes(mut self) -> Self {
        self.notes.clear();
        self
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationBuilder {
    inner: AssetClassification,
}

impl ClassificationBuilder {
    pub fn new(
        asset_name: impl Into<String>,
        taxonomy_id: impl Into<String>,
        taxonomy_version: impl Into<String>,
    ) -> Self {
        Self {
            inner: AssetClassification {
                asset_id: None,
                asset_name: asset_name.into(),
                taxonomy_id: taxonomy_id.into(),
                taxonomy_version: taxonomy_version.into(),
                selections: BTreeMap::new(),
                notes: BTreeMap::new(),
            },
        }
    }

    pub fn select(mut self, attribute: impl Into<String>, selection: Selection) -> Self {
        self.inner.selections.insert(attribute.into(), selection);
        self
    }

    pub fn set(self, attribute: impl Into<String>, characteristic: impl Into<String>) -> Self {
        self.select(attribute, Selection::single(characteristic))
    }

    pub fn note(mut self, attribute: impl Into<String>, text: impl Into<String>) -> Self {
        self.inner.notes.insert(attribute.into(), text.into());
        self
    }

    pub fn build(self) -> AssetClassification {
        self.inner
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// Every attribute must be set.
    Strict,
    /// Unset attributes are accepted.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationError {
    pub attribute: String,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.attribute, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub errors: Vec<ValidationError>,
    pub lint_findings: Vec<LintFinding>,
    pub is_valid: bool,
}

impl ValidationReport {
    pub fn error_attributes(&self) -> BTreeSet<&str> {
        self.errors.iter().map(|e| e.attribute.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("classification references taxonomy {found} but {expected} was supplied")]
pub struct TaxonomyMismatch {
    pub expected: String,
    pub found: String,
}

impl TaxonomyMismatch {
    pub(crate) fn check(t: &Taxonomy, c: &AssetClassification) -> Result<(), Self> {
        if c.matches_taxonomy(t) {
            Ok(())
        } else {
            Err(Self {
                expected: format!("{}@{}", t.id, t.version),
                found: format!("{}@{}", c.taxonomy_id, c.taxonomy_version),
            })
        }
    }
}

/// Structural errors only, no lints.
pub fn structural_errors(
    t: &Taxonomy,
    c: &AssetClassification,
    mode: ValidationMode,
) -> Vec<ValidationError> {
    let mut errors = Vec::new();
    let mut err = |attribute: &str, message: String| {
        errors.push(ValidationError {
            attribute: attribute.to_string(),
            message,
        })
    };

    for attr_id in c.selections.keys() {
        if t.attribute(attr_id).is_none() {
            err(attr_id, format!("unknown attribute for taxonomy {}", t.id));
        }
    }

    for attr in &t.attributes {
        let Some(sel) = c.selections.get(&attr.id) else {
            if mode == ValidationMode::Strict {
                err(&attr.id, "attribute is unset".into());
            }
            continue;
        };
        if sel.characteristic_ids.is_empty() {
            err(&attr.id, "selection is empty".into());
            continue;
        }
        for id in &sel.characteristic_ids {
            if attr.characteristic(id).is_none() {
                err(&attr.id, format!("unknown characteristic for attribute: {id:?}"));
            }
        }
        if sel.is_multi() && !attr.multi_select_allowed {
            err(
                &attr.id,
                "attribute does not allow multiple characteristics".into(),
            );
        }
        if let Some(sub) = &sel.subtype_id {
            if sel.is_multi() {
                err(
                    &attr.id,
                    format!("subtype {sub:?} requires exactly one selected characteristic"),
                );
            } else if let Some(ch) = sel
                .characteristic_ids
                .first()
                .and_then(|id| attr.characteristic(id))
            {
                if ch.subtype(sub).is_none() {
                    err(
                        &attr.id,
                        format!("characteristic {:?} declares no subtype {sub:?}", ch.id),
                    );
                }
            }
        }
    }
    errors
}

/// Validates `c` against `t` and runs the default lint rules.
pub fn validate_classification(
    t: &Taxonomy,
    c: &AssetClassification,
    mode: ValidationMode,
) -> Result<ValidationReport, TaxonomyMismatch> {
    validate_with(t, c, mode, Linter::default_rules())
}

pub fn validate_with(
    t: &Taxonomy,
    c: &AssetClassification,
    mode: ValidationMode,
    linter: &Linter,
) -> Result<ValidationReport, TaxonomyMismatch> {
    TaxonomyMismatch::check(t, c)?;
    let errors = structural_errors(t, c, mode);
    let lint_findings = linter.run(t, c);
    Ok(ValidationReport {
        mode,
        is_valid: errors.is_empty(),
        errors,
        lint_findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::builtin_taxonomy;

    fn builder() -> ClassificationBuilder {
        AssetClassification::builder("test", builtin_taxonomy())
    }

    #[test]
    fn unknown_characteristic() {
        let c = builder().set("technology", "share").build();
        let r = validate_classification(builtin_taxonomy(), &c, ValidationMode::Partial).unwrap();
        assert!(!r.is_valid);
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].attribute, "technology");
        assert!(r.errors[0]
            .message
            .contains("unknown characteristic for attribute"));
    }

    #[test]
    fn unknown_attribute() {
        let c = builder().set("colour", "red").build();
        let r = validate_classification(builtin_taxonomy(), &c, ValidationMode::Partial).unwrap();
        assert_eq!(r.error_attributes(), BTreeSet::from(["colour"]));
    }

    #[test]
    fn strict_reports_every_unset_attribute() {
        let c = builder().set("fungibility", "fungible").build();
        let strict = validate_classification(builtin_taxonomy(), &c, ValidationMode::Strict).unwrap();
        assert_eq!(strict.errors.len(), 13);
        let partial = validate_classification(builtin_taxonomy(), &c, ValidationMode::Partial).unwrap();
        assert!(partial.is_valid);
    }

    #[test]
    fn subtype_rules() {
        let t = builtin_taxonomy();
        let ok = builder()
            .select("technology", Selection::with_subtype("dlt", "native"))
            .build();
        assert!(
            validate_classification(t, &ok, ValidationMode::Partial)
                .unwrap()
                .is_valid
        );

        let wrong_parent = builder()
            .select("technology", Selection::with_subtype("digital", "native"))
            .build();
        assert!(
            !validate_classification(t, &wrong_parent, ValidationMode::Partial)
                .unwrap()
                .is_valid
        );

        let unknown = builder()
            .select("technology", Selection::with_subtype("dlt", "sidechain"))
            .build();
        assert!(
            !validate_classification(t, &unknown, ValidationMode::Partial)
                .unwrap()
                .is_valid
        );

        let multi = builder()
            .select(
                "technology",
                Selection::from_parts(
                    BTreeSet::from(["dlt".to_string(), "digital".to_string()]),
                    Some("native".into()),
                ),
            )
            .build();
        let r = validate_classification(t, &multi, ValidationMode::Partial).unwrap();
        assert!(r.errors[0].message.contains("exactly one"));
    }

    #[test]
    fn multi_select_needs_permission() {
        let mut t = builtin_taxonomy().clone();
        let c = AssetClassification::builder("x", &t)
            .select("technology", Selection::many(["physical", "digital"]))
            .build();
        assert!(
            validate_classification(&t, &c, ValidationMode::Partial)
                .unwrap()
                .is_valid
        );
        t.attributes[1].multi_select_allowed = false;
        let r = validate_classification(&t, &c, ValidationMode::Partial).unwrap();
        assert!(!r.is_valid);
    }

    #[test]
    fn empty_selection_is_an_error() {
        let c = builder()
            .select("technology", Selection::many(Vec::<String>::new()))
            .build();
        let r = validate_classification(builtin_taxonomy(), &c, ValidationMode::Partial).unwrap();
        assert!(!r.is_valid);
    }

    #[test]
    fn taxonomy_mismatch() {
        let c = ClassificationBuilder::new("x", "other", "9").build();
        let e = validate_classification(builtin_taxonomy(), &c, ValidationMode::Partial).unwrap_err();
        assert_eq!(e.found, "other@9");
    }

    #[test]
    fn cash_partial_accepts_unset_claim_structure() {
        let cash = paper_fixture("cash").unwrap();
        assert!(!cash.is_set("claim_structure"));
        let r = validate_classification(builtin_taxonomy(), &cash, ValidationMode::Partial).unwrap();
        assert!(r.is_valid);
        let strict = validate_classification(builtin_taxonomy(), &cash, ValidationMode::Strict).unwrap();
        assert_eq!(strict.error_attributes(), BTreeSet::from(["claim_structure"]));
    }
}
