#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use taxo_core::classification::{AssetClassification, ClassificationBuilder, Selection};
use taxo_core::taxonomy::{AttributeDef, CharacteristicDef, CharacteristicOrdering, SubtypeDef, Taxonomy};

/// A structurally valid taxonomy with `n` attributes, 2..=5 characteristics
/// each, and occasionally a characteristic with sub-types.
pub fn random_taxonomy<R: Rng>(rng: &mut R, n: usize) -> Taxonomy {
    let attributes = (0..n)
        .map(|i| {
            let mut letters: Vec<char> = ('A'..='Z').collect();
            letters.shuffle(rng);
            let mut letters = letters.into_iter();
            let count = rng.gen_range(2..=5);
            let characteristics = (0..count)
                .map(|j| {
                    let subtypes = if rng.gen_bool(0.2) {
                        (0..rng.gen_range(1..=2))
                            .map(|k| SubtypeDef {
                                id: format!("s{k}"),
                                label: format!("Sub {k}"),
                                code_letter: letters.next().unwrap(),
                            })
                            .collect()
                    } else {
                        Vec::new()
                    };
                    CharacteristicDef {
                        id: format!("c{j}"),
                        label: format!("Characteristic {i}.{j}"),
                        code_letter: letters.next().unwrap(),
                        description: String::new(),
                        subtypes,
                    }
                })
                .collect();
            AttributeDef {
                id: format!("attr_{i}"),
                name: format!("Attribute {i}"),
                question: format!("Question {i}?"),
                ordering: if rng.gen_bool(0.2) {
                    CharacteristicOrdering::Cumulative
                } else {
                    CharacteristicOrdering::Unordered
                },
                multi_select_allowed: rng.gen_bool(0.7),
                characteristics,
            }
        })
        .collect();
    Taxonomy {
        id: "random".into(),
        name: "Random".into(),
        version: "0".into(),
        attributes,
    }
}

/// Single-select, sub-type-resolved where sub-types exist; attributes are
/// unset with probability 1/4.
pub fn random_single_select<R: Rng>(rng: &mut R, t: &Taxonomy) -> AssetClassification {
    let mut b = ClassificationBuilder::new("random", &t.id, &t.version);
    for attr in &t.attributes {
        if rng.gen_bool(0.25) {
            continue;
        }
        let ch = attr.characteristics.choose(rng).unwrap();
        let sel = match ch.subtypes.choose(rng) {
            Some(sub) => Selection::with_subtype(&ch.id, &sub.id),
            None => Selection::single(&ch.id),
        };
        b = b.select(&attr.id, sel);
    }
    b.build()
}

/// Any partial-valid classification, including multi-selects and notes.
pub fn random_partial<R: Rng>(rng: &mut R, t: &Taxonomy) -> AssetClassification {
    let mut b = ClassificationBuilder::new("random", &t.id, &t.version);
    for attr in &t.attributes {
        match rng.gen_range(0..4) {
            0 => {
                if rng.gen_bool(0.3) {
                    b = b.note(&attr.id, "left open");
                }
            }
            1 if attr.multi_select_allowed => {
                let mut ids: Vec<&str> = attr.characteristics.iter().map(|c| c.id.as_str()).collect();
                ids.shuffle(rng);
                let k = rng.gen_range(1..=ids.len());
                b = b.select(&attr.id, Selection::many(ids[..k].iter().copied()));
            }
            _ => {
                let ch = attr.characteristics.choose(rng).unwrap();
                let sel = match ch.subtypes.choose(rng) {
                    Some(sub) if rng.gen_bool(0.7) => Selection::with_subtype(&ch.id, &sub.id),
                    _ => Selection::single(&ch.id),
                };
                b = b.select(&attr.id, sel);
                if rng.gen_bool(0.5) {
                    b = b.note(&attr.id, format!("note for {}", attr.id));
                }
            }
        }
    }
    b.build()
}
