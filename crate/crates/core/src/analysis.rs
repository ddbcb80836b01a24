//! Comparing classifications and mapping them onto prior frameworks.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::classification::{AssetClassification, Selection, TaxonomyMismatch};
use crate::taxonomy::{AttributeDef, Taxonomy};

mod coverage;

pub use coverage::{
    coverage_counts, framework_coverage, CoverageCounts, CoverageError, CoverageMatrix, Framework,
    FrameworkCoverage, FRAMEWORKS,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttributeDifference {
    pub attribute: String,
    pub left: Selection,
    pub right: Selection,
}

/// Partition of a taxonomy's attributes for two classifications. Each list
/// is in taxonomy order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub shared: Vec<String>,
    pub differing: Vec<String>,
    pub undetermined: Vec<String>,
    pub per_attribute: Vec<AttributeDifference>,
}

impl DiffReport {
    pub fn shared_set(&self) -> BTreeSet<&str> {
        self.shared.iter().map(String::as_str).collect()
    }

    pub fn differing_set(&self) -> BTreeSet<&str> {
        self.differing.iter().map(String::as_str).collect()
    }

    pub fn undetermined_set(&self) -> BTreeSet<&str> {
        self.undetermined.iter().map(String::as_str).collect()
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, title: &str, items: &[String]) -> fmt::Result {
    writeln!(
        f,
        "{:<18}{}",
        format!("{title} ({})", items.len()),
        items.join(", ")
    )
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, "shared", &self.shared)?;
        write_list(f, "differing", &self.differing)?;
        let name_w = self
            .per_attribute
            .iter()
            .map(|d| d.attribute.len())
            .max()
            .unwrap_or(0);
        let left: Vec<String> = self.per_attribute.iter().map(|d| d.left.to_string()).collect();
        let left_w = left.iter().map(String::len).max().unwrap_or(0);
        for (d, l) in self.per_attribute.iter().zip(&left) {
            writeln!(f, "  {:<name_w$}  {:<left_w$}  {}", d.attribute, l, d.right)?;
        }
        write_list(f, "undetermined", &self.undetermined)
    }
}

/// Selected characteristic indices; compares cumulative attributes by position.
fn index_set(attr: &AttributeDef, sel: &Selection) -> BTreeSet<Option<usize>> {
    sel.characteristic_ids()
        .iter()
        .map(|id| attr.characteristic_index(id))
        .collect()
}

fn selections_equal(attr: &AttributeDef, a: &Selection, b: &Selection) -> bool {
    if a.subtype_id() != b.subtype_id() {
        return false;
    }
    if attr.is_cumulative() {
        index_set(attr, a) == index_set(attr, b)
    } else {
        a.characteristic_ids() == b.characteristic_ids()
    }
}

pub fn diff(
    t: &Taxonomy,
    a: &AssetClassification,
    b: &AssetClassification,
) -> Result<DiffReport, TaxonomyMismatch> {
    TaxonomyMismatch::check(t, a)?;
    TaxonomyMismatch::check(t, b)?;
    let mut report = DiffReport {
        shared: Vec::new(),
        differing: Vec::new(),
        undetermined: Vec::new(),
        per_attribute: Vec::new(),
    };
    for attr in &t.attributes {
        match (a.selection(&attr.id), b.selection(&attr.id)) {
            (Some(x), Some(y)) if selections_equal(attr, x, y) => report.shared.push(attr.id.clone()),
            (Some(x), Some(y)) => {
                report.differing.push(attr.id.clone());
                report.per_attribute.push(AttributeDifference {
                    attribute: attr.id.clone(),
                    left: x.clone(),
                    right: y.clone(),
                });
            }
            _ => report.undetermined.push(attr.id.clone()),
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimilarityBasis {
    /// shared / (shared + differing)
    DeterminedOnly,
    /// shared / all attributes
    AllAttributes,
}

impl fmt::Display for SimilarityBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::DeterminedOnly => "determined-only",
            Self::AllAttributes => "all-attributes",
        })
    }
}

/// An unreduced fraction; absent when the denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimilarityScore {
    pub basis: SimilarityBasis,
    pub numerator: usize,
    pub denominator: usize,
}

impl SimilarityScore {
    pub fn value(&self) -> Option<f64> {
        (self.denominator != 0).then(|| self.numerator as f64 / self.denominator as f64)
    }

    /// Exact rational comparison with `num/den`.
    pub fn equals_ratio(&self, num: usize, den: usize) -> bool {
        self.denominator != 0 && den != 0 && self.numerator * den == num * self.denominator
    }
}

impl fmt::Display for SimilarityScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(
                f,
                "{}/{} = {v:.4} ({})",
                self.numerator, self.denominator, self.basis
            ),
            None => write!(f, "undefined ({})", self.basis),
        }
    }
}

pub fn similarity_of(t: &Taxonomy, report: &DiffReport, basis: SimilarityBasis) -> SimilarityScore {
    let shared = report.shared.len();
    let denominator = match basis {
        SimilarityBasis::DeterminedOnly => shared + report.differing.len(),
        SimilarityBasis::AllAttributes => t.attributes.len(),
    };
    SimilarityScore {
        basis,
        numerator: shared,
        denominator,
    }
}

pub fn similarity(
    t: &Taxonomy,
    a: &AssetClassification,
    b: &AssetClassification,
    basis: SimilarityBasis,
) -> Result<SimilarityScore, TaxonomyMismatch> {
    Ok(similarity_of(t, &diff(t, a, b)?, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::paper_fixture;
    use crate::taxonomy::builtin_taxonomy;

    #[test]
    fn cash_vs_bitcoin() {
        let t = builtin_taxonomy();
        let cash = paper_fixture("cash").unwrap();
        let btc = paper_fixture("bitcoin").unwrap();
        let d = diff(t, &cash, &btc).unwrap();
        assert_eq!(
            d.shared,
            [
                "underlying",
                "information_interface",
                "transferability",
                "fungibility"
            ]
        );
        assert_eq!(d.undetermined, ["claim_structure", "legal_status"]);
        assert_eq!(d.differing.len(), 8);
        let s = similarity(t, &cash, &btc, SimilarityBasis::DeterminedOnly).unwrap();
        assert_eq!((s.numerator, s.denominator), (4, 12));
        assert!(s.equals_ratio(1, 3));
    }

    #[test]
    fn subtype_sensitive() {
        let t = builtin_taxonomy();
        let ether = paper_fixture("ether").unwrap();
        let kitty = paper_fixture("cryptokitties").unwrap();
        let d = diff(t, &ether, &kitty).unwrap();
        assert!(d.differing.contains(&"technology".to_string()));
    }

    #[test]
    fn reflexive() {
        let t = builtin_taxonomy();
        for f in crate::classification::paper_fixtures() {
            let d = diff(t, &f, &f).unwrap();
            assert!(d.differing.is_empty());
            let s = similarity(t, &f, &f, SimilarityBasis::DeterminedOnly).unwrap();
            assert_eq!(s.value(), Some(1.0));
        }
        let share = paper_fixture("traditional_share").unwrap();
        assert_eq!(
            similarity(t, &share, &share, SimilarityBasis::AllAttributes)
                .unwrap()
                .value(),
            Some(1.0)
        );
    }

    #[test]
    fn empty_pair_is_undefined() {
        let t = builtin_taxonomy();
        let e = AssetClassification::builder("e", t).build();
        let s = similarity(t, &e, &e, SimilarityBasis::DeterminedOnly).unwrap();
        assert_eq!(s.value(), None);
        assert_eq!(
            similarity(t, &e, &e, SimilarityBasis::AllAttributes)
                .unwrap()
                .value(),
            Some(0.0)
        );
    }

    #[test]
    fn text_report_is_aligned() {
        let t = builtin_taxonomy();
        let d = diff(
            t,
            &paper_fixture("cash").unwrap(),
            &paper_fixture("bitcoin").unwrap(),
        )
        .unwrap();
        let text = d.to_string();
        let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("  ")).collect();
        assert_eq!(rows.len(), 8);
        let col = rows[0].find("dlt/native").unwrap();
        for (row, diff) in rows.iter().zip(&d.per_attribute) {
            assert_eq!(&row[col..], diff.right.to_string());
        }
        let lists: Vec<usize> = text
            .lines()
            .filter(|l| !l.starts_with("  "))
            .map(|l| {
                l.find("underlying")
                    .or(l.find("technology"))
                    .or(l.find("claim_structure"))
                    .unwrap()
            })
            .collect();
        assert_eq!(lists, vec![18, 18, 18]);
    }
}
