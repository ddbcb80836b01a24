//! Soft cross-attribute consistency rules.
//!
//! Findings are warnings and never invalidate a classification. A rule only
//! fires when every attribute it inspects is set.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::LazyLock;

use serde::Serialize;

use crate::classification::{AssetClassification, Selection};
use crate::taxonomy::Taxonomy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LintFinding {
    pub rule_id: String,
    pub severity: Severity,
    pub attributes_involved: BTreeSet<String>,
    pub message: String,
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "warning[{}]: {}", self.rule_id, self.message)
    }
}

pub trait LintRule: Send + Sync {
    fn id(&self) -> &str;

    /// Attributes the rule reads. The rule is skipped unless all are set.
    fn attributes(&self) -> &[&str];

    /// Called with the selections for [`LintRule::attributes`], in the same order.
    fn check(&self, selections: &[&Selection]) -> Option<String>;
}

/// A rule built from a predicate over the involved selections.
pub struct PredicateRule {
    id: &'static str,
    attributes: &'static [&'static str],
    message: &'static str,
    predicate: fn(&[&Selection]) -> bool,
}

impl LintRule for PredicateRule {
    fn id(&self) -> &str {
        self.id
    }

    fn attributes(&self) -> &[&str] {
        self.attributes
    }

    fn check(&self, selections: &[&Selection]) -> Option<String> {
        (self.predicate)(selections).then(|| self.message.to_string())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("lint rule {0:?} is already registered")]
pub struct DuplicateRule(pub String);

/// An ordered set of lint rules keyed by rule id.
#[derive(Default)]
pub struct Linter {
    rules: Vec<Box<dyn LintRule>>,
}

static DEFAULT: LazyLock<Linter> = LazyLock::new(|| {
    let mut linter = Linter::empty();
    for rule in builtin_rules() {
        linter
            .register(Box::new(rule))
            .expect("builtin rule ids are unique");
    }
    linter
});

impl Linter {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The shared linter holding the built-in rules `L1`..`L4`.
    pub fn default_rules() -> &'static Linter {
        &DEFAULT
    }

    /// A fresh linter preloaded with the built-in rules, open for registration.
    pub fn with_builtin_rules() -> Self {
        let mut linter = Self::empty();
        for rule in builtin_rules() {
            linter.rules.push(Box::new(rule));
        }
        linter
    }

    pub fn register(&mut self, rule: Box<dyn LintRule>) -> Result<(), DuplicateRule> {
        if self.rules.iter().any(|r| r.id() == rule.id()) {
            return Err(DuplicateRule(rule.id().to_string()));
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn rule_ids(&self) -> impl Iterator<Item = &str> {
        self.rules.iter().map(|r| r.id())
    }

    pub fn run(&self, t: &Taxonomy, c: &AssetClassification) -> Vec<LintFinding> {
        let mut out = Vec::new();
        for rule in &self.rules {
            let involved: Option<Vec<&Selection>> = rule
                .attributes()
                .iter()
                .map(|a| t.attribute(a).and(c.selection(a)))
                .collect();
            let Some(selections) = involved else { continue };
            if let Some(message) = rule.check(&selections) {
                out.push(LintFinding {
                    rule_id: rule.id().to_string(),
                    severity: Severity::Warning,
                    attributes_involved: rule.attributes().iter().map(|a| a.to_string()).collect(),
                    message,
                });
            }
        }
        out
    }
}

/// Runs the built-in rule set.
pub fn lint(t: &Taxonomy, c: &AssetClassification) -> Vec<LintFinding> {
    Linter::default_rules().run(t, c)
}

fn builtin_rules() -> [PredicateRule; 4] {
    [
        PredicateRule {
            id: "L1",
            attributes: &["technology", "consensus"],
            message: "physical asset with probabilistic finality",
            predicate: |s| s[0].contains("physical") && s[1].contains("probabilistic_finality"),
        },
        PredicateRule {
            id: "L2",
            attributes: &["issuance", "total_supply"],
            message: "one-off issuance but total supply is not fixed",
            predicate: |s| s[0].contains("once") && !s[1].is_only("fixed"),
        },
        PredicateRule {
            id: "L3",
            attributes: &["technology", "consensus"],
            message: "DLT-based asset with instant finality",
            predicate: |s| s[0].contains("dlt") && s[1].contains("instant_finality"),
        },
        PredicateRule {
            id: "L4",
            attributes: &["redemption", "total_supply", "issuance"],
            message: "flexible total supply cannot change with one-off issuance and no redemption",
            predicate: |s| s[0].contains("none") && s[1].contains("flexible") && s[2].contains("once"),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::paper_fixture;
    use crate::taxonomy::builtin_taxonomy;

    fn rules_fired(pairs: &[(&str, &str)]) -> Vec<String> {
        let mut b = AssetClassification::builder("x", builtin_taxonomy());
        for (a, c) in pairs {
            b = b.set(*a, *c);
        }
        lint(builtin_taxonomy(), &b.build())
            .into_iter()
            .map(|f| f.rule_id)
            .collect()
    }

    #[test]
    fn l1() {
        assert_eq!(
            rules_fired(&[
                ("technology", "physical"),
                ("consensus", "probabilistic_finality")
            ]),
            ["L1"]
        );
    }

    #[test]
    fn l2() {
        assert_eq!(
            rules_fired(&[("issuance", "once"), ("total_supply", "flexible")]),
            ["L2"]
        );
        assert!(rules_fired(&[("issuance", "once"), ("total_supply", "fixed")]).is_empty());
    }

    #[test]
    fn l3() {
        assert_eq!(
            rules_fired(&[("technology", "dlt"), ("consensus", "instant_finality")]),
            ["L3"]
        );
    }

    #[test]
    fn l4_also_trips_l2() {
        assert_eq!(
            rules_fired(&[
                ("redemption", "none"),
                ("total_supply", "flexible"),
                ("issuance", "once")
            ]),
            ["L2", "L4"]
        );
    }

    #[test]
    fn silent_when_an_attribute_is_unset() {
        assert!(rules_fired(&[("technology", "physical")]).is_empty());
        assert!(rules_fired(&[("issuance", "once")]).is_empty());
    }

    #[test]
    fn bitcoin_is_clean() {
        assert!(lint(builtin_taxonomy(), &paper_fixture("bitcoin").unwrap()).is_empty());
    }

    struct NoFungibleNft;

    impl LintRule for NoFungibleNft {
        fn id(&self) -> &str {
            "custom"
        }
        fn attributes(&self) -> &[&str] {
            &["fungibility"]
        }
        fn check(&self, s: &[&Selection]) -> Option<String> {
            s[0].is_multi().then(|| "both fungible and non-fungible".into())
        }
    }

    #[test]
    fn custom_registration() {
        let mut linter = Linter::with_builtin_rules();
        linter.register(Box::new(NoFungibleNft)).unwrap();
        assert!(linter.register(Box::new(NoFungibleNft)).is_err());
        assert_eq!(
            linter.rule_ids().collect::<Vec<_>>(),
            ["L1", "L2", "L3", "L4", "custom"]
        );
        let c = AssetClassification::builder("x", builtin_taxonomy())
            .select("fungibility", Selection::many(["fungible", "non_fungible"]))
            .build();
        assert_eq!(linter.run(builtin_taxonomy(), &c)[0].rule_id, "custom");
    }
}
