//! Which prior classification frameworks address which attributes.
//!
//! The matrix content lives in `data/coverage.json` as
//! `{framework_id: [attribute_id, ...]}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::LazyLock;

use serde::Serialize;

use crate::classification::AssetClassification;
use crate::taxonomy::{builtin_taxonomy, Taxonomy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Framework {
    pub id: &'static str,
    pub label: &'static str,
}

/// Framework descriptors in column order.
pub const FRAMEWORKS: [Framework; 8] = [
    Framework {
        id: "iso10962",
        label: "ISO 10962 (CFI)",
    },
    Framework {
        id: "actus",
        label: "ACTUS (Brammertz & Mendelowitz)",
    },
    Framework {
        id: "finma",
        label: "FINMA ICO guidelines",
    },
    Framework {
        id: "oliveira",
        label: "Oliveira et al.",
    },
    Framework {
        id: "ballandies",
        label: "Ballandies et al.",
    },
    Framework {
        id: "mme",
        label: "MME",
    },
    Framework {
        id: "itsa",
        label: "ITSA International Token Classification",
    },
    Framework {
        id: "eea-tti",
        label: "EEA Token Taxonomy Initiative",
    },
];

const MATRIX_JSON: &str = include_str!("../../data/coverage.json");

static BUILTIN: LazyLock<CoverageMatrix> = LazyLock::new(|| {
    CoverageMatrix::from_json(MATRIX_JSON, builtin_taxonomy()).expect("shipped coverage matrix is consistent")
});

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverageError {
    #[error("unknown framework {0:?}")]
    UnknownFramework(String),
    #[error("coverage matrix: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageMatrix {
    frameworks: Vec<Framework>,
    attributes: Vec<String>,
    covered: BTreeMap<&'static str, BTreeSet<String>>,
}

impl CoverageMatrix {
    /// The matrix for the built-in taxonomy, loaded once.
    pub fn builtin() -> &'static CoverageMatrix {
        &BUILTIN
    }

    /// Loads a matrix file. Keys must be exactly the [`FRAMEWORKS`] ids and
    /// every attribute must belong to `t`.
    pub fn from_json(text: &str, t: &Taxonomy) -> Result<Self, CoverageError> {
        let raw: BTreeMap<String, Vec<String>> =
            serde_json::from_str(text).map_err(|e| CoverageError::Malformed(e.to_string()))?;
        let expected: BTreeSet<&str> = FRAMEWORKS.iter().map(|f| f.id).collect();
        let found: BTreeSet<&str> = raw.keys().map(String::as_str).collect();
        if expected != found {
            return Err(CoverageError::Malformed(format!(
                "framework ids {found:?} do not match {expected:?}"
            )));
        }
        let mut covered = BTreeMap::new();
        for fw in FRAMEWORKS {
            let mut set = BTreeSet::new();
            for attr in &raw[fw.id] {
                if t.attribute(attr).is_none() {
                    return Err(CoverageError::Malformed(format!(
                        "{}: unknown attribute {attr:?}",
                        fw.id
                    )));
                }
                if !set.insert(attr.clone()) {
                    return Err(CoverageError::Malformed(format!(
                        "{}: duplicate attribute {attr:?}",
                        fw.id
                    )));
                }
            }
            covered.insert(fw.id, set);
        }
        Ok(Self {
            frameworks: FRAMEWORKS.to_vec(),
            attributes: t.attribute_ids().map(str::to_string).collect(),
            covered,
        })
    }

    pub fn frameworks(&self) -> &[Framework] {
        &self.frameworks
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn framework(&self, id: &str) -> Result<&Framework, CoverageError> {
        self.frameworks
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| CoverageError::UnknownFramework(id.to_string()))
    }

    pub fn is_covered(&self, framework: &str, attribute: &str) -> bool {
        self.covered.get(framework).is_some_and(|s| s.contains(attribute))
    }

    pub fn covered_by(&self, framework: &str) -> Result<&BTreeSet<String>, CoverageError> {
        self.covered
            .get(framework)
            .ok_or_else(|| CoverageError::UnknownFramework(framework.to_string()))
    }
}

impl fmt::Display for CoverageMatrix {
    /// Attribute rows, one `x` column per framework.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.attributes.iter().map(String::len).max().unwrap_or(0);
        write!(f, "{:<w$}", "")?;
        for fw in &self.frameworks {
            write!(f, " {:^10}", fw.id)?;
        }
        writeln!(f)?;
        for attr in &self.attributes {
            write!(f, "{attr:<w$}")?;
            for fw in &self.frameworks {
                write!(f, " {:^10}", if self.is_covered(fw.id, attr) { "x" } else { "" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameworkCoverage {
    pub framework: String,
    pub covered: BTreeSet<String>,
    pub dropped: BTreeSet<String>,
}

/// Splits the set attributes of `c` into those `framework` addresses and
/// those it would lose.
pub fn framework_coverage(
    m: &CoverageMatrix,
    framework: &str,
    c: &AssetClassification,
) -> Result<FrameworkCoverage, CoverageError> {
    let covered_attrs = m.covered_by(framework)?;
    let (covered, dropped) = c
        .selections()
        .keys()
        .cloned()
        .partition(|a| covered_attrs.contains(a));
    Ok(FrameworkCoverage {
        framework: framework.to_string(),
        covered,
        dropped,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageCounts {
    /// Attributes covered per framework, in framework order.
    pub per_framework: Vec<(String, usize)>,
    /// Frameworks covering each attribute, in taxonomy order.
    pub per_attribute: Vec<(String, usize)>,
}

impl CoverageCounts {
    pub fn framework(&self, id: &str) -> Option<usize> {
        self.per_framework.iter().find(|(f, _)| f == id).map(|(_, n)| *n)
    }

    pub fn attribute(&self, id: &str) -> Option<usize> {
        self.per_attribute.iter().find(|(a, _)| a == id).map(|(_, n)| *n)
    }
}

impl fmt::Display for CoverageCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "frameworks:")?;
        for (id, n) in &self.per_framework {
            writeln!(f, "  {id}: {n}")?;
        }
        writeln!(f, "attributes:")?;
        for (id, n) in &self.per_attribute {
            writeln!(f, "  {id}: {n}")?;
        }
        Ok(())
    }
}

pub fn coverage_counts(m: &CoverageMatrix) -> CoverageCounts {
    let per_framework = m
        .frameworks
        .iter()
        .map(|fw| (fw.id.to_string(), m.covered[fw.id].len()))
        .collect();
    let per_attribute = m
        .attributes
        .iter()
        .map(|a| {
            let n = m.frameworks.iter().filter(|fw| m.is_covered(fw.id, a)).count();
            (a.clone(), n)
        })
        .collect();
    CoverageCounts {
        per_framework,
        per_attribute,
    }
}
