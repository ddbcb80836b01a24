//! File-backed store of classified assets.
//!
//! Layout of a store directory:
//!
//! - `journal.jsonl`: append-only log, one `{op, id, ts, doc?}` object per
//!   line. It is the source of truth.
//! - `index.json`: summary of the current entries, rebuilt from the journal
//!   whenever it is missing or stale.
//! - `.lock`: advisory lock held by the single writer.
//!
//! Readers opened with [`RegistryStore::open_read_only`] take no lock and
//! work on the journal as it was when they opened it.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions, TryLockError};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, Instant};

use chrono::{DateTime, SecondsFormat, Utc};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::classification::{structural_errors, AssetClassification, ValidationError, ValidationMode};
use crate::codec::{classification_from_value, classification_to_value, encode};
use crate::taxonomy::Taxonomy;

mod asset_id;

pub use asset_id::{check_char, AssetId, AssetIdError};

pub const JOURNAL_FILE: &str = "journal.jsonl";
pub const INDEX_FILE: &str = "index.json";
pub const LOCK_FILE: &str = ".lock";

pub const DEFAULT_LOCK_TIMEOUT: Duration = Duration::from_secs(5);

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("asset {0} not found")]
    NotFound(AssetId),
    #[error("classification failed validation: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Validation(Vec<ValidationError>),
    #[error("timed out after {waited:?} waiting for lock {}", .path.display())]
    LockTimeout { path: PathBuf, waited: Duration },
    #[error("malformed store file {}, line {line}: {message}", .path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("cannot resolve query predicate {0}")]
    UnresolvedPredicate(String),
    #[error("store is opened read-only")]
    ReadOnly,
    #[error("could not draw an unused asset id")]
    EntropyExhausted,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Crash points for fault-injection tests. Reaching one aborts the process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailPoint {
    /// After the journal line is durable, before the index is rewritten.
    AfterJournalAppend,
}

impl FailPoint {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "after-journal-append" => Some(Self::AfterJournalAppend),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub classification: AssetClassification,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Op {
    Add,
    Update,
    Remove,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JournalRecord {
    op: Op,
    id: AssetId,
    ts: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    doc: Option<serde_json::Value>,
}

#[derive(Debug, Serialize)]
struct IndexEntry<'a> {
    id: &'a AssetId,
    asset_name: &'a str,
    code: String,
    created_at: String,
    updated_at: String,
}

#[derive(Debug, Serialize)]
struct Index<'a> {
    journal_lines: usize,
    entries: Vec<IndexEntry<'a>>,
}

/// Conjunction of `(attribute, characteristic)` predicates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Query {
    predicates: Vec<(String, String)>,
}

impl Query {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn and(mut self, attribute: impl Into<String>, characteristic: impl Into<String>) -> Self {
        self.predicates.push((attribute.into(), characteristic.into()));
        self
    }

    /// Parses `attr=characteristic`.
    pub fn and_parsed(self, predicate: &str) -> Result<Self, RegistryError> {
        match predicate.split_once('=') {
            Some((a, c)) if !a.is_empty() && !c.is_empty() => Ok(self.and(a.trim(), c.trim())),
            _ => Err(RegistryError::UnresolvedPredicate(format!(
                "{predicate:?} (expected attr=characteristic)"
            ))),
        }
    }

    pub fn predicates(&self) -> &[(String, String)] {
        &self.predicates
    }

    pub fn matches(&self, c: &AssetClassification) -> bool {
        self.predicates
            .iter()
            .all(|(a, ch)| c.selection(a).is_some_and(|s| s.contains(ch)))
    }

    fn resolve(&self, t: &Taxonomy) -> Result<(), RegistryError> {
        for (a, ch) in &self.predicates {
            let resolved = t.attribute(a).and_then(|attr| attr.characteristic(ch));
            if resolved.is_none() {
                return Err(RegistryError::UnresolvedPredicate(format!("{a}={ch}")));
            }
        }
        Ok(())
    }
}

pub struct RegistryStore {
    dir: PathBuf,
    taxonomy: Taxonomy,
    entries: BTreeMap<AssetId, Entry>,
    journal_lines: usize,
    writer: Option<Writer>,
    index_was_stale: bool,
}

struct Writer {
    journal: File,
    // held for the lifetime of the store; the OS releases it if the process dies
    _lock: File,
    rng: StdRng,
    failpoint: Option<FailPoint>,
}

fn timestamp(ts: &DateTime<Utc>) -> String {
    ts.to_rfc3339_opts(SecondsFormat::Micros, true)
}

fn acquire_lock(path: &Path, timeout: Duration) -> Result<File, RegistryError> {
    let file = OpenOptions::new()
        .create(true)
        .truncate(false)
        .write(true)
        .open(path)?;
    let start = Instant::now();
    loop {
        match file.try_lock() {
            Ok(()) => return Ok(file),
            Err(TryLockError::WouldBlock) if start.elapsed() < timeout => {
                thread::sleep(Duration::from_millis(10))
            }
            Err(TryLockError::WouldBlock) => {
                return Err(RegistryError::LockTimeout {
                    path: path.to_path_buf(),
                    waited: start.elapsed(),
                })
            }
            Err(TryLockError::Error(e)) => return Err(e.into()),
        }
    }
}

impl RegistryStore {
    /// Opens (creating if needed) a store for writing.
    pub fn open(dir: impl AsRef<Path>, taxonomy: &Taxonomy) -> Result<Self, RegistryError> {
        Self::open_with_timeout(dir, taxonomy, DEFAULT_LOCK_TIMEOUT)
    }

    pub fn open_with_timeout(
        dir: impl AsRef<Path>,
        taxonomy: &Taxonomy,
        lock_timeout: Duration,
    ) -> Result<Self, RegistryError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let lock = acquire_lock(&dir.join(LOCK_FILE), lock_timeout)?;
        let journal_path = dir.join(JOURNAL_FILE);
        let mut store = Self::replay(dir, taxonomy, true)?;
        let journal = OpenOptions::new().create(true).append(true).open(&journal_path)?;
        store.writer = Some(Writer {
            journal,
            _lock: lock,
            rng: StdRng::from_entropy(),
            failpoint: None,
        });
        store.index_was_stale = !store.index_is_current()?;
        if store.index_was_stale {
            store.write_index()?;
        }
        Ok(store)
    }

    /// Opens a snapshot of the journal without taking the writer lock.
    pub fn open_read_only(dir: impl AsRef<Path>, taxonomy: &Taxonomy) -> Result<Self, RegistryError> {
        let mut store = Self::replay(dir.as_ref().to_path_buf(), taxonomy, false)?;
        store.index_was_stale = !store.index_is_current()?;
        Ok(store)
    }

    /// Seeds the id generator, for reproducible ids.
    pub fn with_seed(mut self, seed: u64) -> Self {
        if let Some(w) = &mut self.writer {
            w.rng = StdRng::seed_from_u64(seed);
        }
        self
    }

    pub fn set_failpoint(&mut self, failpoint: Option<FailPoint>) {
        if let Some(w) = &mut self.writer {
            w.failpoint = failpoint;
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether the index on disk disagreed with the journal when the store was opened.
    pub fn index_was_stale(&self) -> bool {
        self.index_was_stale
    }

    pub fn ids(&self) -> impl Iterator<Item = &AssetId> {
        self.entries.keys()
    }

    fn replay(dir: PathBuf, taxonomy: &Taxonomy, repair_tail: bool) -> Result<Self, RegistryError> {
        let path = dir.join(JOURNAL_FILE);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        let mut store = Self {
            dir,
            taxonomy: taxonomy.clone(),
            entries: BTreeMap::new(),
            journal_lines: 0,
            writer: None,
            index_was_stale: false,
        };

        // a trailing fragment without newline is an interrupted append: not committed
        let committed = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
        if repair_tail && committed < bytes.len() {
            let f = OpenOptions::new().write(true).open(&path)?;
            f.set_len(committed as u64)?;
            f.sync_all()?;
        }

        for (i, raw) in bytes[..committed].split_inclusive(|&b| b == b'\n').enumerate() {
            let raw = &raw[..raw.len() - 1];
            let line = i + 1;
            let malformed = |message: String| RegistryError::Malformed {
                path: path.clone(),
                line,
                message,
            };
            let text = std::str::from_utf8(raw).map_err(|e| malformed(e.to_string()))?;
            let rec: JournalRecord = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
            store.apply(rec).map_err(malformed)?;
            store.journal_lines += 1;
        }
        Ok(store)
    }

    fn apply(&mut self, rec: JournalRecord) -> Result<(), String> {
        let doc = match (rec.op, rec.doc) {
            (Op::Remove, None) => None,
            (Op::Remove, Some(_)) => return Err("remove record carries a document".into()),
            (_, None) => return Err("record is missing its document".into()),
            (_, Some(v)) => Some(
                classification_from_value(v)
                    .map_err(|e| e.message)?
                    .with_asset_id(Some(rec.id.clone())),
            ),
        };
        match (rec.op, doc) {
            (Op::Add, Some(c)) => {
                if self.entries.contains_key(&rec.id) {
                    return Err(format!("duplicate add of {}", rec.id));
                }
                self.entries.insert(
                    rec.id,
                    Entry {
                        classification: c,
                        created_at: rec.ts,
                        updated_at: rec.ts,
                    },
                );
            }
            (Op::Update, Some(c)) => {
                let e = self
                    .entries
                    .get_mut(&rec.id)
                    .ok_or_else(|| format!("update of unknown {}", rec.id))?;
                e.classification = c;
                e.updated_at = rec.ts;
            }
            (Op::Remove, _) => {
                self.entries
                    .remove(&rec.id)
                    .ok_or_else(|| format!("remove of unknown {}", rec.id))?;
            }
            _ => unreachable!("document presence checked above"),
        }
        Ok(())
    }

    fn render_index(&self) -> String {
        let index = Index {
            journal_lines: self.journal_lines,
            entries: self
                .entries
                .iter()
                .map(|(id, e)| IndexEntry {
                    id,
                    asset_name: e.classification.asset_name(),
                    code: encode(&self.taxonomy, &e.classification).to_string(),
                    created_at: timestamp(&e.created_at),
                    updated_at: timestamp(&e.updated_at),
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&index).expect("index always serializes");
        text.push('\n');
        text
    }

    fn index_is_current(&self) -> Result<bool, RegistryError> {
        match fs::read_to_string(self.dir.join(INDEX_FILE)) {
            Ok(text) => Ok(text == self.render_index()),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(false),
            Err(e) => Err(e.into()),
        }
    }

    fn write_index(&self) -> Result<(), RegistryError> {
        let tmp = self.dir.join(format!("{INDEX_FILE}.tmp"));
        {
            let mut f = File::create(&tmp)?;
            f.write_all(self.render_index().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(tmp, self.dir.join(INDEX_FILE))?;
        Ok(())
    }

    fn check(&self, c: &AssetClassification) -> Result<(), RegistryError> {
        if !c.matches_taxonomy(&self.taxonomy) {
            return Err(RegistryError::Validation(vec![ValidationError {
                attribute: String::new(),
                message: format!(
                    "classification references taxonomy {}@{}, store uses {}@{}",
                    c.taxonomy_id(),
                    c.taxonomy_version(),
                    self.taxonomy.id,
                    self.taxonomy.version
                ),
            }]));
        }
        let errors = structural_errors(&self.taxonomy, c, ValidationMode::Partial);
        if errors.is_empty() {
            Ok(())
        } else {
            Err(RegistryError::Validation(errors))
        }
    }

    fn commit(
        &mut self,
        op: Op,
        id: &AssetId,
        c: Option<&AssetClassification>,
    ) -> Result<DateTime<Utc>, RegistryError> {
        let ts = Utc::now();
        let rec = JournalRecord {
            op,
            id: id.clone(),
            ts,
            doc: c.map(|c| classification_to_value(&c.clone().with_asset_id(None))),
        };
        let mut line = serde_json::to_string(&serde_json::to_value(&rec).expect("record serializes"))
            .expect("record serializes");
        line.push('\n');
        let writer = self.writer.as_mut().ok_or(RegistryError::ReadOnly)?;
        writer.journal.write_all(line.as_bytes())?;
        writer.journal.sync_data()?;
        if writer.failpoint == Some(FailPoint::AfterJournalAppend) {
            std::process::abort();
        }
        self.apply(rec).expect("record was checked before commit");
        self.journal_lines += 1;
        self.write_index()?;
        Ok(ts)
    }

    pub fn add(&mut self, c: &AssetClassification) -> Result<AssetId, RegistryError> {
        self.check(c)?;
        let writer = self.writer.as_mut().ok_or(RegistryError::ReadOnly)?;
        let entries = &self.entries;
        let id = AssetId::mint(&mut writer.rng, |id| entries.contains_key(id))
            .ok_or(RegistryError::EntropyExhausted)?;
        self.commit(Op::Add, &id, Some(c))?;
        Ok(id)
    }

    pub fn get(&self, id: &AssetId) -> Result<&AssetClassification, RegistryError> {
        self.entry(id).map(|e| &e.classification)
    }

    pub fn entry(&self, id: &AssetId) -> Result<&Entry, RegistryError> {
        self.entries
            .get(id)
            .ok_or_else(|| RegistryError::NotFound(id.clone()))
    }

    pub fn update(&mut self, id: &AssetId, c: &AssetClassification) -> Result<(), RegistryError> {
        if self.writer.is_none() {
            return Err(RegistryError::ReadOnly);
        }
        self.entry(id)?;
        self.check(c)?;
        self.commit(Op::Update, id, Some(c)).map(drop)
    }

    pub fn remove(&mut self, id: &AssetId) -> Result<(), RegistryError> {
        if self.writer.is_none() {
            return Err(RegistryError::ReadOnly);
        }
        self.entry(id)?;
        self.commit(Op::Remove, id, None).map(drop)
    }

    /// Matching entries as `(id, asset_name)`, ordered by creation time then id.
    pub fn query(&self, q: &Query) -> Result<Vec<(AssetId, String)>, RegistryError> {
        q.resolve(&self.taxonomy)?;
        let mut hits: Vec<(&AssetId, &Entry)> = self
            .entries
            .iter()
            .filter(|(_, e)| q.matches(&e.classification))
            .collect();
        hits.sort_by(|a, b| (a.1.created_at, a.0).cmp(&(b.1.created_at, b.0)));
        Ok(hits
            .into_iter()
            .map(|(id, e)| (id.clone(), e.classification.asset_name().to_string()))
            .collect())
    }
}
