//! Append-only JSONL store of search results.
//!
//! Every write rewrites the whole file through a temporary file in the same
//! directory followed by a rename, so a crash never leaves a torn line.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use hgsp_core::search::NodeStats;
use hgsp_core::{PairClassification, SearchOutcome, TOOL_VERSION};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub pair_id: String,
    pub classification: PairClassification,
    pub witness: Option<String>,
    pub searched_depth: usize,
    pub nodes: u64,
    pub nodes_per_depth: Vec<u64>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub tool_version: String,
}

impl ResultRecord {
    pub fn new(pair_id: &str, classification: PairClassification, outcome: &SearchOutcome) -> Self {
        let (witness, searched_depth) = match outcome {
            SearchOutcome::Found { witness, .. } => {
                (Some(witness.word.to_string()), witness.word.len())
            }
            SearchOutcome::NotFound { max_depth, .. } => (None, *max_depth),
            SearchOutcome::BudgetExhausted {
                completed_depth, ..
            } => (None, *completed_depth),
            SearchOutcome::Obstructed { .. } => (None, 0),
        };
        let stats = outcome.nodes().cloned().unwrap_or_else(NodeStats::default);
        ResultRecord {
            pair_id: pair_id.to_string(),
            classification,
            witness,
            searched_depth,
            nodes: stats.total(),
            nodes_per_depth: stats.per_depth,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    /// Whether this record settles a search to depth `k`.
    pub fn answers(&self, k: usize) -> bool {
        match &self.classification {
            PairClassification::WitnessArithmetic { length, .. } => *length <= k,
            PairClassification::Obstructed { .. } | PairClassification::SvArithmetic => true,
            PairClassification::Unknown { searched_depth } => *searched_depth >= k,
        }
    }
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Cache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn err(&self, source: std::io::Error) -> CliError {
        CliError::Cache {
            path: self.path.display().to_string(),
            source,
        }
    }

    pub fn load(&self) -> Result<Vec<ResultRecord>, CliError> {
        let file = match fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(self.err(e)),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| self.err(e))?;
            if line.trim().is_empty() {
                continue;
            }
            let record = serde_json::from_str(&line)
                .map_err(|e| CliError::Input(format!("{}:{}: {e}", self.path.display(), i + 1)))?;
            out.push(record);
        }
        Ok(out)
    }

    /// Most recent record for `pair_id` that settles depth `k`.
    pub fn lookup(&self, pair_id: &str, k: usize) -> Result<Option<ResultRecord>, CliError> {
        Ok(self
            .load()?
            .into_iter()
            .rev()
            .find(|r| r.pair_id == pair_id && r.answers(k)))
    }

    pub fn append(&self, record: &ResultRecord) -> Result<(), CliError> {
        let mut records = self.load()?;
        records.push(record.clone());
        let dir = match self.path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir).map_err(|e| self.err(e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| self.err(e))?;
        for r in &records {
            serde_json::to_writer(&mut tmp, r)?;
            tmp.write_all(b"\n").map_err(|e| self.err(e))?;
        }
        tmp.as_file().sync_all().map_err(|e| self.err(e))?;
        tmp.persist(&self.path).map_err(|e| self.err(e.error))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(class: PairClassification) -> ResultRecord {
        ResultRecord {
            pair_id: "1^6|3^2,6".into(),
            classification: class,
            witness: None,
            searched_depth: 0,
            nodes: 0,
            nodes_per_depth: vec![],
            timestamp: 0,
            tool_version: TOOL_VERSION.into(),
        }
    }

    #[test]
    fn reuse_rules() {
        let found = record(PairClassification::WitnessArithmetic {
            word: "B^2A".into(),
            length: 3,
        });
        assert!(found.answers(3) && found.answers(10) && !found.answers(2));
        let unknown = record(PairClassification::Unknown { searched_depth: 8 });
        assert!(unknown.answers(8) && !unknown.answers(9));
    }

    #[test]
    fn append_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("nested/cache.jsonl"));
        assert!(cache.load().unwrap().is_empty());
        let r = record(PairClassification::Unknown { searched_depth: 4 });
        cache.append(&r).unwrap();
        cache.append(&r).unwrap();
        assert_eq!(cache.load().unwrap(), vec![r.clone(), r]);
        assert!(cache.lookup("1^6|3^2,6", 4).unwrap().is_some());
        assert!(cache.lookup("1^6|3^2,6", 5).unwrap().is_none());
    }
}
