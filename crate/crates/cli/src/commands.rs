use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use serde_json::{json, Value};

use taxo_core::analysis::{framework_coverage, similarity_of};
use taxo_core::classification::{paper_fixtures, TaxonomyMismatch};
use taxo_core::codec::classification_to_value;
use taxo_core::registry::{FailPoint, Query, RegistryError};
use taxo_core::render::RenderError;
use taxo_core::{
    builtin_taxonomy, coverage_counts, decode, diff, encode, parse_classification, parse_taxonomy, render,
    serialize_classification, serialize_taxonomy, validate_classification, AssetClassification, AssetId,
    CoverageMatrix, RegistryStore, RenderFormat, RenderSpec, SimilarityBasis, Taxonomy, ValidationMode,
};

use crate::output::{Failure, Output, EXIT_INVALID, EXIT_OK};
use crate::{
    Basis, Cli, CmdResult, Command, CoverageArgs, FixturesCommand, Format, RegistryArgs, RegistryCommand,
};

const FAILPOINT_ENV: &str = "TAXO_FAILPOINT";

pub fn run(cli: &Cli, out: &Output) -> CmdResult {
    let loaded;
    let t: &Taxonomy = match &cli.taxonomy {
        Some(path) => {
            loaded = parse_taxonomy(&read(path)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            &loaded
        }
        None => builtin_taxonomy(),
    };
    match &cli.command {
        Command::Validate { file, strict } => validate(t, out, file, *strict),
        Command::Encode { file } => {
            let c = load(file)?;
            check(t, &c)?;
            let code = encode(t, &c);
            out.emit(|| format!("{code}\n"), || json!({ "code": code.as_str() }));
            ok()
        }
        Command::Decode { code } => {
            let c = decode(t, code).map_err(Failure::usage)?;
            out.emit(|| serialize_classification(&c), || classification_to_value(&c));
            ok()
        }
        Command::Diff { a, b, similarity } => diff_cmd(t, out, a, b, *similarity),
        Command::Render {
            format,
            out: dest,
            overlays,
        } => render_cmd(t, out, *format, dest.as_deref(), overlays),
        Command::Coverage(args) => coverage(t, out, args),
        Command::Registry(args) => registry(t, out, args),
        Command::Fixtures {
            command: FixturesCommand::Export { dir },
        } => export(out, dir),
        Command::Taxonomy => {
            out.emit(
                || serialize_taxonomy(t),
                || serde_json::to_value(t).expect("taxonomy serializes"),
            );
            ok()
        }
    }
}

fn ok() -> CmdResult {
    Ok(ExitCode::from(EXIT_OK))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<AssetClassification, Failure> {
    parse_classification(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn check(t: &Taxonomy, c: &AssetClassification) -> Result<(), Failure> {
    if c.matches_taxonomy(t) {
        Ok(())
    } else {
        Err(mismatch(TaxonomyMismatch {
            expected: format!("{}@{}", t.id, t.version),
            found: format!("{}@{}", c.taxonomy_id(), c.taxonomy_version()),
        }))
    }
}

fn mismatch(e: TaxonomyMismatch) -> Failure {
    Failure::invalid(e)
}

fn validate(t: &Taxonomy, out: &Output, file: &Path, strict: bool) -> CmdResult {
    let c = load(file)?;
    let mode = if strict {
        ValidationMode::Strict
    } else {
        ValidationMode::Partial
    };
    let report = validate_classification(t, &c, mode).map_err(mismatch)?;
    out.emit(
        || {
            let mut s = String::new();
            let verdict = if report.is_valid {
                out.green("valid")
            } else {
                out.red("invalid")
            };
            let mode = if strict { "strict" } else { "partial" };
            let _ = writeln!(s, "{}: {verdict} ({mode})", c.asset_name());
            for e in &report.errors {
                let _ = writeln!(s, "  {} {e}", out.red("error:"));
            }
            for f in &report.lint_findings {
                let _ = writeln!(s, "  {}", out.yellow(&f.to_string()));
            }
            s
        },
        || serde_json::to_value(&report).expect("report serializes"),
    );
    if report.errors.is_empty() {
        return ok();
    }
    eprintln!(
        "taxo: {}: {} validation error(s)",
        file.display(),
        report.errors.len()
    );
    Ok(ExitCode::from(EXIT_INVALID))
}

fn diff_cmd(t: &Taxonomy, out: &Output, a: &Path, b: &Path, basis: Basis) -> CmdResult {
    let (left, right) = (load(a)?, load(b)?);
    let report = diff(t, &left, &right).map_err(mismatch)?;
    let basis = match basis {
        Basis::Determined => SimilarityBasis::DeterminedOnly,
        Basis::All => SimilarityBasis::AllAttributes,
    };
    let score = similarity_of(t, &report, basis);
    out.emit(
        || {
            format!(
                "{} vs {}\n{report}similarity: {score}\n",
                left.asset_name(),
                right.asset_name()
            )
        },
        || {
            json!({
                "left": left.asset_name(),
                "right": right.asset_name(),
                "diff": report,
                "similarity": { "basis": basis, "numerator": score.numerator,
                                "denominator": score.denominator, "value": score.value() },
            })
        },
    );
    ok()
}

fn render_cmd(
    t: &Taxonomy,
    out: &Output,
    format: Format,
    dest: Option<&Path>,
    overlays: &[std::path::PathBuf],
) -> CmdResult {
    let format = match format {
        Format::Text => RenderFormat::Text,
        Format::Svg => RenderFormat::Svg,
    };
    let loaded = overlays.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
    let spec = loaded
        .iter()
        .fold(RenderSpec::new(t, format), |spec, c| spec.overlay(c));
    let drawing = render(&spec).map_err(|e| match e {
        RenderError::TooManyOverlays(_) => Failure::usage(e),
        RenderError::InvalidOverlay { .. } => Failure::invalid(e),
    })?;
    match dest {
        Some(path) => {
            fs::write(path, &drawing).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            out.emit(String::new, || json!({ "written": path.display().to_string() }));
        }
        None => out.emit(
            || drawing.clone(),
            || json!({ "format": format_name(format), "output": drawing }),
        ),
    }
    ok()
}

fn format_name(f: RenderFormat) -> &'static str {
    match f {
        RenderFormat::Text => "text",
        RenderFormat::Svg => "svg",
    }
}

fn coverage(t: &Taxonomy, out: &Output, args: &CoverageArgs) -> CmdResult {
    let matrix = CoverageMatrix::builtin();
    if args.counts {
        let counts = coverage_counts(matrix);
        out.emit(
            || counts.to_string(),
            || serde_json::to_value(&counts).expect("counts serialize"),
        );
        return ok();
    }
    let (Some(framework), Some(file)) = (&args.framework, &args.file) else {
        return Err(Failure::usage(
            "coverage needs --counts or --framework <id> <file>",
        ));
    };
    let c = load(file)?;
    check(t, &c)?;
    let cov = framework_coverage(matrix, framework, &c).map_err(Failure::usage)?;
    out.emit(
        || {
            let join =
                |s: &std::collections::BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(", ");
            format!(
                "{framework}\n  covered: {}\n  dropped: {}\n",
                join(&cov.covered),
                join(&cov.dropped)
            )
        },
        || serde_json::to_value(&cov).expect("coverage serializes"),
    );
    ok()
}

fn registry_failure(e: RegistryError) -> Failure {
    match e {
        RegistryError::NotFound(_) | RegistryError::Validation(_) => Failure::invalid(e),
        _ => Failure::usage(e),
    }
}

fn asset_id(text: &str) -> Result<AssetId, Failure> {
    AssetId::parse(text).map_err(|e| Failure::usage(format!("{text}: {e}")))
}

fn registry(t: &Taxonomy, out: &Output, args: &RegistryArgs) -> CmdResult {
    let dir = &args.store;
    match &args.command {
        RegistryCommand::Get { id } => {
            let store = RegistryStore::open_read_only(dir, t).map_err(registry_failure)?;
            let id = asset_id(id)?;
            let entry = store.entry(&id).map_err(registry_failure)?;
            out.emit(
                || serialize_classification(&entry.classification),
                || {
                    json!({
                        "id": id.as_str(),
                        "created_at": entry.created_at.to_rfc3339(),
                        "updated_at": entry.updated_at.to_rfc3339(),
                        "classification": classification_to_value(&entry.classification),
                    })
                },
            );
        }
        RegistryCommand::Query { predicates } => {
            let store = RegistryStore::open_read_only(dir, t).map_err(registry_failure)?;
            let query = predicates
                .iter()
                .try_fold(Query::new(), |q, p| q.and_parsed(p))
                .map_err(registry_failure)?;
            let hits = store.query(&query).map_err(registry_failure)?;
            out.emit(
                || hits.iter().map(|(id, name)| format!("{id}  {name}\n")).collect(),
                || {
                    Value::Array(
                        hits.iter()
                            .map(|(id, name)| json!({ "id": id.as_str(), "asset_name": name }))
                            .collect(),
                    )
                },
            );
        }
        write_cmd => {
            let mut store = RegistryStore::open(dir, t).map_err(registry_failure)?;
            if let Ok(name) = std::env::var(FAILPOINT_ENV) {
                let fp = FailPoint::parse(&name)
                    .ok_or_else(|| Failure::usage(format!("unknown {FAILPOINT_ENV} {name}")))?;
                store.set_failpoint(Some(fp));
            }
            match write_cmd {
                RegistryCommand::Add { file } => {
                    let id = store.add(&load(file)?).map_err(registry_failure)?;
                    out.emit(|| format!("{id}\n"), || json!({ "id": id.as_str() }));
                }
                RegistryCommand::Update { id, file } => {
                    let id = asset_id(id)?;
                    store.update(&id, &load(file)?).map_err(registry_failure)?;
                    out.emit(|| format!("updated {id}\n"), || json!({ "updated": id.as_str() }));
                }
                RegistryCommand::Remove { id } => {
                    let id = asset_id(id)?;
                    store.remove(&id).map_err(registry_failure)?;
                    out.emit(|| format!("removed {id}\n"), || json!({ "removed": id.as_str() }));
                }
                RegistryCommand::Get { .. } | RegistryCommand::Query { .. } => {
                    unreachable!("handled read-only")
                }
            }
        }
    }
    ok()
}

fn export(out: &Output, dir: &Path) -> CmdResult {
    fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for c in paper_fixtures() {
        let path = dir.join(format!("{}.json", c.asset_name()));
        fs::write(&path, serialize_classification(&c))
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    out.emit(
        || written.iter().map(|p| format!("{p}\n")).collect(),
        || json!({ "written": written }),
    );
    ok()
}
