use std::sync::LazyLock;

use super::{AttributeDef, CharacteristicDef, CharacteristicOrdering, SubtypeDef, Taxonomy};

pub const BUILTIN_ID: &str = "asset_taxonomy";
pub const BUILTIN_VERSION: &str = "1.0";

static BUILTIN: LazyLock<Taxonomy> = LazyLock::new(build);

/// The 14-attribute asset taxonomy covering traditional, digital and
/// DLT-based assets.
pub fn builtin_taxonomy() -> &'static Taxonomy {
    &BUILTIN
}

fn ch(id: &str, label: &str, code_letter: char, description: &str) -> CharacteristicDef {
    CharacteristicDef {
        id: id.into(),
        label: label.into(),
        code_letter,
        description: description.into(),
        subtypes: Vec::new(),
    }
}

fn attr(id: &str, name: &str, question: &str, characteristics: Vec<CharacteristicDef>) -> AttributeDef {
    AttributeDef {
        id: id.into(),
        name: name.into(),
        question: question.into(),
        ordering: CharacteristicOrdering::Unordered,
        multi_select_allowed: true,
        characteristics,
    }
}

fn build() -> Taxonomy {
    let mut dlt = ch(
        "dlt",
        "Distributed ledger technology",
        'L',
        "Based on a distributed ledger, as a native or a protocol token",
    );
    dlt.subtypes = vec![
        SubtypeDef {
            id: "native".into(),
            label: "Native token".into(),
            code_letter: 'T',
        },
        SubtypeDef {
            id: "protocol".into(),
            label: "Protocol token".into(),
            code_letter: 'R',
        },
    ];

    let mut information_complexity = attr(
        "information_complexity",
        "Information complexity",
        "What type of information complexity is associated with the asset?",
        vec![
            ch("value", "Value", 'V', "Represents a specific value"),
            ch(
                "contract",
                "Contract",
                'C',
                "Carries conditional information on top of its value",
            ),
            ch(
                "turing_complete",
                "Turing-complete",
                'T',
                "Runs on a universally programmable computational model",
            ),
        ],
    );
    information_complexity.ordering = CharacteristicOrdering::Cumulative;

    Taxonomy {
        id: BUILTIN_ID.into(),
        name: "Universal (crypto) asset taxonomy".into(),
        version: BUILTIN_VERSION.into(),
        attributes: vec![
            attr(
                "claim_structure",
                "Claim structure",
                "Does the asset represent a claim?",
                vec![
                    ch("no_claim", "No claim", 'N', "Represents no claim of any kind"),
                    ch(
                        "flexible_claim",
                        "Flexible claim",
                        'F',
                        "Claims whose exercise depends on conditions",
                    ),
                    ch(
                        "fixed_claim",
                        "Fixed claim",
                        'X',
                        "Claims that cannot be restricted under any condition",
                    ),
                ],
            ),
            attr(
                "technology",
                "Technology",
                "Which technology is the asset based on?",
                vec![
                    ch("physical", "Physical", 'P', "Exists in physical form"),
                    ch(
                        "digital",
                        "Digital",
                        'D',
                        "Exists in digital form without a distributed ledger",
                    ),
                    dlt,
                ],
            ),
            attr(
                "underlying",
                "Underlying",
                "Which underlying or collateral is the asset's value based on?",
                vec![
                    ch(
                        "none",
                        "No underlying",
                        'N',
                        "Value is not derived from an underlying asset",
                    ),
                    ch("company", "Company", 'C', "Value represents a stake in a company"),
                    ch(
                        "bankable_asset",
                        "Bankable asset",
                        'B',
                        "Value represents a depositable or custodiable asset",
                    ),
                    ch(
                        "cryptographic_asset",
                        "Cryptographic asset",
                        'Y',
                        "Value represents a DLT-based asset",
                    ),
                    ch(
                        "tangible_asset",
                        "Tangible asset",
                        'T',
                        "Value represents a physical asset",
                    ),
                    ch("contract", "Contract", 'K', "Value represents a contract"),
                ],
            ),
            attr(
                "consensus",
                "Consensus/validation mechanism",
                "How is agreement on the finality of the asset reached?",
                vec![
                    ch("instant_finality", "Instant finality", 'I', "Consensus is final"),
                    ch(
                        "probabilistic_finality",
                        "Probabilistic finality",
                        'P',
                        "Consensus is reached with a level of confidence",
                    ),
                ],
            ),
            attr(
                "legal_status",
                "Legal status",
                "What is the regulatory framework governing the asset?",
                vec![
                    ch(
                        "regulated",
                        "Regulated",
                        'R',
                        "Issuance, redemption and governance are regulated",
                    ),
                    ch(
                        "unregulated",
                        "Unregulated",
                        'U',
                        "No specific regulatory framework applies",
                    ),
                ],
            ),
            attr(
                "governance",
                "Governance",
                "In which way is the asset governed?",
                vec![
                    ch(
                        "centralised",
                        "Centralised",
                        'C',
                        "Governed by an authoritative party or consortium",
                    ),
                    ch(
                        "decentralised",
                        "Decentralised",
                        'D',
                        "Governed without centralised control",
                    ),
                ],
            ),
            information_complexity,
            attr(
                "legal_structure",
                "Legal structure",
                "What is the legal form of the asset?",
                vec![
                    ch(
                        "none",
                        "No legal structure",
                        'N',
                        "No legal structure governs the asset",
                    ),
                    ch(
                        "foundation",
                        "Foundation",
                        'F',
                        "Governed by a foundation or trust",
                    ),
                    ch("note_bond", "Note/bond", 'B', "Structured as a note or bond"),
                    ch("share", "Share", 'S', "Structured as a share"),
                    ch("other", "Other", 'O', "Any other legal structure"),
                ],
            ),
            attr(
                "information_interface",
                "Information interface",
                "How does the asset receive and/or send relevant information?",
                vec![
                    ch("none", "No interface", 'N', "No information interface"),
                    ch(
                        "qualitative",
                        "Qualitative",
                        'Q',
                        "Information flows through an authorised instance",
                    ),
                    ch(
                        "quantitative",
                        "Quantitative",
                        'A',
                        "Information arrives automatically from authorised sources",
                    ),
                ],
            ),
            attr(
                "total_supply",
                "Total supply",
                "To which limit can the asset be generated?",
                vec![
                    ch("fixed", "Fixed", 'F', "Total supply is fixed"),
                    ch(
                        "conditional",
                        "Conditional",
                        'C',
                        "Total supply depends on predefined conditions",
                    ),
                    ch(
                        "flexible",
                        "Flexible",
                        'X',
                        "Total supply is managed by authorised parties",
                    ),
                ],
            ),
            attr(
                "issuance",
                "Issuance",
                "How is the asset generated?",
                vec![
                    ch(
                        "once",
                        "Once",
                        'O',
                        "No units are issued after the initial issuance",
                    ),
                    ch(
                        "conditional",
                        "Conditional",
                        'C',
                        "Units are issued when predefined conditions are met",
                    ),
                    ch(
                        "flexible",
                        "Flexible",
                        'F',
                        "Units are issued by authorised parties at will",
                    ),
                ],
            ),
            attr(
                "redemption",
                "Redemption",
                "How is the number of outstanding assets reduced?",
                vec![
                    ch(
                        "none",
                        "No redemption",
                        'N',
                        "Outstanding units cannot be reduced",
                    ),
                    ch("fixed", "Fixed", 'F', "Reduction follows a predefined protocol"),
                    ch(
                        "conditional",
                        "Conditional",
                        'C',
                        "Reduction starts when predefined conditions are met",
                    ),
                    ch(
                        "flexible",
                        "Flexible",
                        'X',
                        "Reduction is carried out by authorised parties at will",
                    ),
                ],
            ),
            attr(
                "transferability",
                "Transferability",
                "Can the asset's ownership be transferred to another party?",
                vec![
                    ch(
                        "transferable",
                        "Transferable",
                        'T',
                        "Ownership can be transferred",
                    ),
                    ch(
                        "non_transferable",
                        "Non-transferable",
                        'N',
                        "Ownership cannot be transferred",
                    ),
                ],
            ),
            attr(
                "fungibility",
                "Fungibility",
                "Can the asset be interchanged with another asset of the same type?",
                vec![
                    ch(
                        "fungible",
                        "Fungible",
                        'F',
                        "Substitutable with another unit of the same type",
                    ),
                    ch(
                        "non_fungible",
                        "Non-fungible",
                        'N',
                        "Not substitutable with another unit of the same type",
                    ),
                ],
            ),
        ],
    }
}
