//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use taxo_core::analysis::{coverage_counts, CoverageMatrix};
use taxo_core::classification::{ClassificationBuilder, Selection, FIXTURE_NAMES};
use taxo_core::registry::FailPoint;
use taxo_core::taxonomy::{AttributeDef, CharacteristicDef, CharacteristicOrdering, Taxonomy};
use taxo_core::{
    builtin_taxonomy, decode, diff, encode, paper_fixture, paper_fixtures, render, validate_classification,
    validate_taxonomy, AssetClassification, AssetId, Query, RegistryStore, RenderFormat, RenderSpec,
    ValidationMode,
};

use common::{random_single_select, random_taxonomy};

const CHILD_ENV: &str = "TAXO_ACCEPTANCE_CHILD";
const DURABILITY_ENTRIES: usize = 1_000;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn builtin_conformance() -> Outcome {
    let start = Instant::now();
    let t = builtin_taxonomy();
    let violations = validate_taxonomy(t);
    let elapsed = start.elapsed();
    let order = [
        "claim_structure",
        "technology",
        "underlying",
        "consensus",
        "legal_status",
        "governance",
        "information_complexity",
        "legal_structure",
        "information_interface",
        "total_supply",
        "issuance",
        "redemption",
        "transferability",
        "fungibility",
    ];
    let ids: Vec<&str> = t.attribute_ids().collect();
    ensure(ids == order, || format!("attribute order {ids:?}"))?;
    ensure(t.cell_count() == 43, || {
        format!("{} characteristics", t.cell_count())
    })?;
    for a in &t.attributes {
        ensure(a.characteristics.len() >= 2, || {
            format!("{} has {} characteristics", a.id, a.characteristics.len())
        })?;
    }
    ensure(violations.is_empty(), || format!("violations: {violations:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("14 attributes, 43 characteristics, valid in {elapsed:?}"))
}

fn fixture_corpus() -> Outcome {
    let t = builtin_taxonomy();
    let expected_unset: BTreeMap<&str, BTreeSet<String>> = [
        ("cash", set(&["claim_structure"])),
        ("bitcoin", set(&[])),
        ("ether", set(&["total_supply"])),
        ("crowdlitoken", set(&[])),
        ("cryptokitties", set(&["information_complexity"])),
        ("traditional_share", set(&[])),
    ]
    .into();
    let mut problems = Vec::new();
    for name in FIXTURE_NAMES {
        let c = paper_fixture(name).unwrap();
        let partial = validate_classification(t, &c, ValidationMode::Partial).unwrap();
        if !partial.errors.is_empty() || !partial.lint_findings.is_empty() {
            problems.push(format!(
                "{name}: {} errors, {} lint findings in partial mode",
                partial.errors.len(),
                partial.lint_findings.len()
            ));
        }
        let strict = validate_classification(t, &c, ValidationMode::Strict).unwrap();
        let unset: BTreeSet<String> = strict.error_attributes().into_iter().map(String::from).collect();
        if unset != expected_unset[name] {
            problems.push(format!(
                "{name}: strict unset {unset:?}, expected {:?}",
                expected_unset[name]
            ));
        }
    }
    ensure(problems.is_empty(), || problems.join("; "))?;
    Ok("six fixtures clean in partial mode, strict unset sets match".into())
}

fn table_reproduction() -> Outcome {
    let counts = coverage_counts(CoverageMatrix::builtin());
    let expected_fw = [("iso10962", 4), ("oliveira", 10), ("ballandies", 10)];
    let expected_attr = [
        ("underlying", 8),
        ("information_interface", 2),
        ("fungibility", 2),
    ];
    for (fw, n) in expected_fw {
        ensure(counts.framework(fw) == Some(n), || {
            format!("{fw}: {:?}, expected {n}", counts.framework(fw))
        })?;
    }
    for (attr, n) in expected_attr {
        ensure(counts.attribute(attr) == Some(n), || {
            format!("{attr}: {:?}, expected {n}", counts.attribute(attr))
        })?;
    }
    Ok("iso10962=4 oliveira=10 ballandies=10 underlying=8 information_interface=2 fungibility=2".into())
}

fn cash_bitcoin() -> Outcome {
    let t = builtin_taxonomy();
    let report = diff(
        t,
        &paper_fixture("cash").unwrap(),
        &paper_fixture("bitcoin").unwrap(),
    )
    .unwrap();
    let shared = set(&[
        "underlying",
        "information_interface",
        "transferability",
        "fungibility",
    ]);
    let differing = set(&[
        "technology",
        "consensus",
        "governance",
        "information_complexity",
        "legal_structure",
        "total_supply",
        "issuance",
        "redemption",
    ]);
    let undetermined = set(&["claim_structure", "legal_status"]);
    let got = |v: &Vec<String>| v.iter().cloned().collect::<BTreeSet<_>>();
    ensure(got(&report.shared) == shared, || {
        format!("shared {:?}", report.shared)
    })?;
    ensure(got(&report.differing) == differing, || {
        format!("differing {:?}", report.differing)
    })?;
    ensure(got(&report.undetermined) == undetermined, || {
        format!("undetermined {:?}", report.undetermined)
    })?;
    Ok("4 shared, 8 differing, 2 undetermined".into())
}

fn codec_properties() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x7A_C0DE);
    let random = random_taxonomy(&mut rng, 5);
    let mut failures = 0usize;
    for t in [builtin_taxonomy(), &random] {
        for _ in 0..10_000 {
            let c = random_single_select(&mut rng, t);
            let code = encode(t, &c);
            match decode(t, code.as_str()) {
                Ok(back) if back.selections() == c.selections() => {}
                _ => failures += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(failures == 0, || format!("{failures} round-trip failures"))?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("20000 round trips in {elapsed:?}"))
}

fn toy_taxonomy() -> Taxonomy {
    let attribute = |i: usize| AttributeDef {
        id: format!("t{i}"),
        name: format!("T{i}"),
        question: String::new(),
        ordering: CharacteristicOrdering::Unordered,
        multi_select_allowed: true,
        characteristics: ["a", "b"]
            .iter()
            .map(|id| CharacteristicDef {
                id: id.to_string(),
                label: id.to_uppercase(),
                code_letter: id.to_ascii_uppercase().chars().next().unwrap(),
                description: String::new(),
                subtypes: Vec::new(),
            })
            .collect(),
    };
    Taxonomy {
        id: "toy".into(),
        name: "Toy".into(),
        version: "1".into(),
        attributes: (0..3).map(attribute).collect(),
    }
}

fn diff_oracle() -> Outcome {
    let t = toy_taxonomy();
    // per attribute: 0 = unset, else bit 0 = a, bit 1 = b
    let states: Vec<[u8; 3]> = (0..64u8).map(|n| [n & 3, (n >> 2) & 3, (n >> 4) & 3]).collect();
    let build = |s: &[u8; 3]| -> AssetClassification {
        let mut b = ClassificationBuilder::new("toy", "toy", "1");
        for (i, bits) in s.iter().enumerate() {
            let chars: Vec<&str> = [(1, "a"), (2, "b")]
                .iter()
                .filter(|(m, _)| bits & m != 0)
                .map(|(_, c)| *c)
                .collect();
            if !chars.is_empty() {
                b = b.select(format!("t{i}"), Selection::many(chars));
            }
        }
        b.build()
    };
    let classes: Vec<AssetClassification> = states.iter().map(build).collect();
    let mut pairs = 0usize;
    let mut mismatches = 0usize;
    for (sa, ca) in states.iter().zip(&classes) {
        for (sb, cb) in states.iter().zip(&classes) {
            pairs += 1;
            let report = diff(&t, ca, cb).unwrap();
            let (mut shared, mut differing, mut undetermined) = (vec![], vec![], vec![]);
            for i in 0..3 {
                let cells_a = [sa[i] & 1 != 0, sa[i] & 2 != 0];
                let cells_b = [sb[i] & 1 != 0, sb[i] & 2 != 0];
                let id = format!("t{i}");
                if cells_a == [false, false] || cells_b == [false, false] {
                    undetermined.push(id);
                } else if cells_a == cells_b {
                    shared.push(id);
                } else {
                    differing.push(id);
                }
            }
            if report.shared != shared || report.differing != differing || report.undetermined != undetermined
            {
                mismatches += 1;
            }
        }
    }
    ensure(mismatches == 0, || {
        format!("{mismatches} of {pairs} pairs disagree")
    })?;
    Ok(format!("{pairs} pairs agree with the cell oracle"))
}

fn durability_child(dir: &Path) {
    let t = builtin_taxonomy();
    let fixtures = paper_fixtures();
    let mut store = RegistryStore::open(dir, t).unwrap().with_seed(1000);
    for i in 0..DURABILITY_ENTRIES {
        if i == DURABILITY_ENTRIES - 1 {
            store.set_failpoint(Some(FailPoint::AfterJournalAppend));
        }
        store.add(&fixtures[i % fixtures.len()]).unwrap();
    }
    // unreachable when the failpoint fires
    std::process::exit(0);
}

fn journal_ids(dir: &Path) -> Result<BTreeSet<AssetId>, String> {
    let text = fs::read_to_string(dir.join("journal.jsonl")).map_err(|e| e.to_string())?;
    text.lines()
        .map(|line| {
            let v: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
            AssetId::parse(v["id"].as_str().unwrap_or_default()).map_err(|e| e.to_string())
        })
        .collect()
}

fn registry_durability(scratch: &Path) -> Outcome {
    let t = builtin_taxonomy();
    let dir = scratch.join("durability");
    let status = Command::new(std::env::current_exe().map_err(|e| e.to_string())?)
        .env(CHILD_ENV, &dir)
        .status()
        .map_err(|e| e.to_string())?;
    ensure(!status.success(), || {
        "child exited normally; failpoint did not fire".into()
    })?;

    let committed = journal_ids(&dir)?;
    ensure(committed.len() == DURABILITY_ENTRIES, || {
        format!("{} journal lines", committed.len())
    })?;
    let store = RegistryStore::open(&dir, t).map_err(|e| e.to_string())?;
    ensure(store.index_was_stale(), || {
        "index was not stale after the crash".into()
    })?;
    ensure(store.len() == DURABILITY_ENTRIES, || {
        format!("{} entries after reopen", store.len())
    })?;
    for id in &committed {
        store.get(id).map_err(|e| e.to_string())?;
    }

    let seeded = scratch.join("seeded");
    let mut store = RegistryStore::open(&seeded, t).map_err(|e| e.to_string())?;
    for f in paper_fixtures() {
        store.add(&f).map_err(|e| e.to_string())?;
    }
    let hits = store
        .query(&Query::new().and("fungibility", "non_fungible"))
        .map_err(|e| e.to_string())?;
    let names: Vec<&str> = hits.iter().map(|(_, name)| name.as_str()).collect();
    ensure(names == ["cryptokitties"], || format!("query returned {names:?}"))?;
    Ok(format!(
        "{DURABILITY_ENTRIES} entries readable after abort; non_fungible -> cryptokitties"
    ))
}

fn render_goldens() -> Outcome {
    let t = builtin_taxonomy();
    let cash = paper_fixture("cash").unwrap();
    let btc = paper_fixture("bitcoin").unwrap();
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (format, ext) in [(RenderFormat::Text, "txt"), (RenderFormat::Svg, "svg")] {
        for (stem, spec) in [
            ("taxonomy", RenderSpec::new(t, format)),
            (
                "cash_bitcoin",
                RenderSpec::new(t, format).overlay(&cash).overlay(&btc),
            ),
        ] {
            let out = render(&spec).map_err(|e| e.to_string())?;
            let path = golden.join(format!("{stem}.{ext}"));
            let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            ensure(out == expected, || format!("{stem}.{ext} differs"))?;
            if format == RenderFormat::Svg {
                let rects = out.matches("<rect").count();
                ensure(rects == 43, || format!("{stem}.svg has {rects} rects"))?;
            }
        }
    }
    Ok("4 goldens byte-identical, 43 cell rects".into())
}

fn main() -> ExitCode {
    if let Some(dir) = std::env::var_os(CHILD_ENV) {
        durability_child(Path::new(&dir));
        return ExitCode::SUCCESS;
    }
    let scratch = tempfile::tempdir().expect("scratch dir");
    let criteria: Vec<Criterion> = vec![
        ("builtin taxonomy conformance", Box::new(builtin_conformance)),
        ("fixture corpus", Box::new(fixture_corpus)),
        ("coverage table reproduction", Box::new(table_reproduction)),
        ("cash/bitcoin comparison", Box::new(cash_bitcoin)),
        ("codec round-trip properties", Box::new(codec_properties)),
        ("diff oracle equivalence", Box::new(diff_oracle)),
        (
            "registry durability",
            Box::new(|| registry_durability(scratch.path())),
        ),
        ("render golden files", Box::new(render_goldens)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name} ({why})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
