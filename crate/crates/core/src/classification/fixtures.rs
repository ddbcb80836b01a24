//! The six reference assets. Only cells backed by a prose statement are
//! set; everything else stays unset.

use super::{AssetClassification, ClassificationBuilder, Selection};
use crate::taxonomy::builtin_taxonomy;

pub const FIXTURE_NAMES: [&str; 6] = [
    "cash",
    "bitcoin",
    "ether",
    "crowdlitoken",
    "cryptokitties",
    "traditional_share",
];

fn start(name: &str) -> ClassificationBuilder {
    AssetClassification::builder(name, builtin_taxonomy())
}

trait Cell: Sized {
    fn cell(self, attribute: &str, characteristic: &str, note: &str) -> Self;
    fn cell_sel(self, attribute: &str, selection: Selection, note: &str) -> Self;
}

impl Cell for ClassificationBuilder {
    fn cell(self, attribute: &str, characteristic: &str, note: &str) -> Self {
        self.cell_sel(attribute, Selection::single(characteristic), note)
    }

    fn cell_sel(self, attribute: &str, selection: Selection, note: &str) -> Self {
        self.select(attribute, selection).note(attribute, note)
    }
}

fn cash() -> AssetClassification {
    start("cash")
        .note("claim_structure", "unset: not stated in prose")
        .cell("technology", "physical", "cash is of physical form")
        .cell("underlying", "none", "fiat money has no direct underlying asset")
        .cell(
            "consensus",
            "instant_finality",
            "consensus given deterministically by the owner",
        )
        .cell(
            "legal_status",
            "regulated",
            "regulated as legal tender under national law",
        )
        .cell("governance", "centralised", "governed centrally by central banks")
        .cell(
            "information_complexity",
            "value",
            "represents a value depending on the denomination",
        )
        .cell(
            "legal_structure",
            "other",
            "central bank money falls under the other legal structure",
        )
        .cell("information_interface", "none", "no oracle interface")
        .cell("total_supply", "flexible", "no maximum supply restriction")
        .cell(
            "issuance",
            "flexible",
            "issuance handled flexibly by central banks",
        )
        .cell(
            "redemption",
            "flexible",
            "redemption handled flexibly by central banks",
        )
        .cell(
            "transferability",
            "transferable",
            "units transferable between parties",
        )
        .cell("fungibility", "fungible", "individual units are interchangeable")
        .build()
}

fn bitcoin() -> AssetClassification {
    start("bitcoin")
        .cell("claim_structure", "no_claim", "not subject to any legal claim")
        .cell_sel(
            "technology",
            Selection::with_subtype("dlt", "native"),
            "native token of the Bitcoin blockchain",
        )
        .cell("underlying", "none", "no direct underlying asset")
        .cell(
            "consensus",
            "probabilistic_finality",
            "proof-of-work gives only probabilistic finality",
        )
        .note(
            "legal_status",
            "unset: only contrasted with cash being legal tender",
        )
        .cell("governance", "decentralised", "decentralised governance")
        .cell(
            "information_complexity",
            "contract",
            "contractual type via non-Turing-complete Bitcoin script",
        )
        .cell("legal_structure", "none", "has no legal structure")
        .cell("information_interface", "none", "no oracle interface")
        .cell(
            "total_supply",
            "fixed",
            "maximum supply fixed at 21 million units",
        )
        .cell(
            "issuance",
            "conditional",
            "issuance conditional on mining new blocks",
        )
        .cell("redemption", "none", "outstanding units cannot be reduced")
        .cell(
            "transferability",
            "transferable",
            "units transferable between parties",
        )
        .cell("fungibility", "fungible", "individual units are interchangeable")
        .build()
}

fn ether() -> AssetClassification {
    start("ether")
        .cell("claim_structure", "no_claim", "no legal claims associated")
        .cell_sel(
            "technology",
            Selection::with_subtype("dlt", "native"),
            "native token of the Ethereum platform",
        )
        .cell("underlying", "none", "no underlyings associated")
        .cell(
            "consensus",
            "probabilistic_finality",
            "proof-of-work consensus is probabilistic",
        )
        .cell("legal_status", "unregulated", "the token itself is unregulated")
        .cell("governance", "decentralised", "token governance is decentralised")
        .cell(
            "information_complexity",
            "turing_complete",
            "Ethereum is Turing-complete",
        )
        .cell(
            "legal_structure",
            "foundation",
            "platform governed by the Ethereum Foundation",
        )
        .cell(
            "information_interface",
            "quantitative",
            "decentralised systems act as quantitative oracles",
        )
        .note(
            "total_supply",
            "unset: supply is unlimited, which does not pick one characteristic",
        )
        .cell("issuance", "conditional", "issuance conditional on new blocks")
        .cell("redemption", "none", "existing units cannot be destroyed")
        .cell("transferability", "transferable", "transferable between parties")
        .cell("fungibility", "fungible", "fungible")
        .build()
}

fn crowdlitoken() -> AssetClassification {
    start("crowdlitoken")
        .cell(
            "claim_structure",
            "fixed_claim",
            "fixed claims such as voting and interest payment",
        )
        .cell_sel(
            "technology",
            Selection::with_subtype("dlt", "protocol"),
            "ERC-20 token on Ethereum",
        )
        .cell("underlying", "company", "value derived from the issuing company")
        .cell(
            "consensus",
            "probabilistic_finality",
            "DLT consensus only probabilistic",
        )
        .cell("legal_status", "regulated", "regulated under existing law")
        .cell("governance", "centralised", "governed in a centralised manner")
        .cell(
            "information_complexity",
            "contract",
            "represents a contract including fixed claims",
        )
        .cell("legal_structure", "note_bond", "structured as notes/bonds")
        .cell(
            "information_interface",
            "qualitative",
            "holders vote on management proposals",
        )
        .cell("total_supply", "flexible", "flexible token supply")
        .cell("issuance", "flexible", "issued flexibly by the company")
        .cell("redemption", "flexible", "burnt flexibly, e.g. through buybacks")
        .cell("transferability", "transferable", "transferable")
        .cell("fungibility", "fungible", "fungible")
        .build()
}

fn cryptokitties() -> AssetClassification {
    start("cryptokitties")
        .cell("claim_structure", "no_claim", "no claims against a counterparty")
        .cell_sel(
            "technology",
            Selection::with_subtype("dlt", "protocol"),
            "ERC-721 tokens",
        )
        .cell("underlying", "none", "no specific underlying")
        .cell(
            "consensus",
            "probabilistic_finality",
            "Ethereum proof-of-work finality is probabilistic",
        )
        .cell("legal_status", "unregulated", "no regulatory governance")
        .cell(
            "governance",
            "decentralised",
            "token ownership governance is decentralised",
        )
        .note("information_complexity", "unset: not stated in prose")
        .cell("legal_structure", "none", "no legal governance")
        .cell("information_interface", "none", "no oracle interface")
        .cell(
            "total_supply",
            "fixed",
            "contract caps breeding at around four billion cats",
        )
        .cell("issuance", "conditional", "new units created by breeding")
        .cell("redemption", "none", "destroying a unit is not possible")
        .cell("transferability", "transferable", "transferable tokens")
        .cell("fungibility", "non_fungible", "every cat is unique")
        .build()
}

fn traditional_share() -> AssetClassification {
    start("traditional_share")
        .cell(
            "claim_structure",
            "fixed_claim",
            "fixed claims such as voting and profit participation",
        )
        .cell_sel(
            "technology",
            Selection::many(["physical", "digital"]),
            "either physical or digital",
        )
        .cell(
            "underlying",
            "company",
            "fundamental value of the company is the underlying",
        )
        .cell(
            "consensus",
            "instant_finality",
            "state given deterministically by the share registry",
        )
        .cell("legal_status", "regulated", "subject to existing corporate law")
        .cell("governance", "centralised", "governed in a centralised manner")
        .cell(
            "information_complexity",
            "contract",
            "represents a contract including fixed claims",
        )
        .cell("legal_structure", "share", "legal form is a share")
        .cell(
            "information_interface",
            "qualitative",
            "general assembly acts as qualitative oracle",
        )
        .cell("total_supply", "flexible", "total supply is flexible")
        .cell(
            "issuance",
            "flexible",
            "new shares created by the general assembly",
        )
        .cell(
            "redemption",
            "flexible",
            "share capital reduced by the general assembly",
        )
        .cell("transferability", "transferable", "typically transferable")
        .cell(
            "fungibility",
            "fungible",
            "substitutable with shares of the same company",
        )
        .build()
}

/// The six reference classifications, in [`FIXTURE_NAMES`] order.
pub fn paper_fixtures() -> Vec<AssetClassification> {
    vec![
        cash(),
        bitcoin(),
        ether(),
        crowdlitoken(),
        cryptokitties(),
        traditional_share(),
    ]
}

pub fn paper_fixture(name: &str) -> Option<AssetClassification> {
    paper_fixtures().into_iter().find(|c| c.asset_name() == name)
}
