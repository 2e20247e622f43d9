//! Resumable per-work-unit scratch file.
//!
//! One header line naming the pattern, then one line per finished unit:
//!
//! ```text
//! unit <F|S> <PX|PY|PZ> <h> <k> <part> <types> <hex monomials>
//! ```
//!
//! The header also names the strategy, since naive and DP runs partition
//! the work differently.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use thiserror::Error;

use super::generate::{Strategy, UnitKey, UnitResult};
use super::types::{Direction, Kind};
use crate::pattern::Pattern;
use crate::poly::Gf2Poly;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("checkpoint {path} was written for `{found}`, this run is `{expected}`")]
    WrongPattern { path: PathBuf, found: String, expected: String },
    #[error("checkpoint {path} was opened for a different strategy than this run")]
    WrongStrategy { path: PathBuf },
    #[error("checkpoint {path}, line {line}: malformed record")]
    Malformed { path: PathBuf, line: usize },
}

pub struct Checkpoint {
    path: PathBuf,
    strategy: Strategy,
    done: HashMap<UnitKey, UnitResult>,
    out: Mutex<File>,
}

fn header(p: &Pattern, strategy: Strategy) -> String {
    let units = match strategy {
        Strategy::Naive => "naive",
        Strategy::Fast => "fast",
    };
    format!("# apwen checkpoint v1 pattern={} units={units}", p.sign_word())
}

impl Checkpoint {
    /// Opens `path` for appending, loading any records already there.
    pub fn open(path: &Path, p: &Pattern, strategy: Strategy) -> Result<Checkpoint, CheckpointError> {
        let io_err = |source| CheckpointError::Io { path: path.to_path_buf(), source };
        let expected = header(p, strategy);
        let mut done = HashMap::new();
        let mut fresh = true;
        if path.exists() {
            let lines: Vec<String> = BufReader::new(File::open(path).map_err(io_err)?)
                .lines()
                .collect::<Result<_, _>>()
                .map_err(io_err)?;
            let raw = std::fs::read(path).map_err(io_err)?;
            let complete_last = raw.last() == Some(&b'\n');
            if let Some(first) = lines.first() {
                fresh = false;
                if *first != expected {
                    return Err(CheckpointError::WrongPattern {
                        path: path.to_path_buf(),
                        found: first.trim_start_matches("# apwen checkpoint v1 ").to_string(),
                        expected: expected.trim_start_matches("# apwen checkpoint v1 ").to_string(),
                    });
                }
            }
            for (i, line) in lines.iter().enumerate().skip(1) {
                match parse_record(line) {
                    Some((k, r)) => {
                        done.insert(k, r);
                    }
                    // a write interrupted mid-line
                    None if i + 1 == lines.len() && !complete_last => {}
                    None => {
                        return Err(CheckpointError::Malformed { path: path.to_path_buf(), line: i + 1 })
                    }
                }
            }
            if !complete_last && !lines.is_empty() {
                // drop the torn tail so appends start on a fresh line
                let keep = raw.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
                std::fs::write(path, &raw[..keep]).map_err(io_err)?;
                fresh = keep == 0;
            }
        }
        let mut out = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
        if fresh {
            writeln!(out, "{expected}").map_err(io_err)?;
        }
        Ok(Checkpoint { path: path.to_path_buf(), strategy, done, out: Mutex::new(out) })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.done.len()
    }

    pub fn is_empty(&self) -> bool {
        self.done.is_empty()
    }

    pub fn get(&self, key: &UnitKey) -> Option<&UnitResult> {
        self.done.get(key)
    }

    pub fn record(&self, key: &UnitKey, r: &UnitResult) -> Result<(), CheckpointError> {
        let line = format!(
            "unit {} {} {} {} {} {} {}\n",
            key.dir.code(),
            key.kind,
            key.h,
            key.k,
            key.part,
            r.types,
            r.poly.to_hex()
        );
        let mut f = self.out.lock().expect("checkpoint writer poisoned");
        f.write_all(line.as_bytes())
            .and_then(|_| f.flush())
            .map_err(|source| CheckpointError::Io { path: self.path.clone(), source })
    }
}

fn parse_record(line: &str) -> Option<(UnitKey, UnitResult)> {
    let f: Vec<&str> = line.split(' ').collect();
    if f.len() != 8 || f[0] != "unit" {
        return None;
    }
    let mut dc = f[1].chars();
    let dir = Direction::from_code(dc.next()?)?;
    if dc.next().is_some() {
        return None;
    }
    let kind = match f[2] {
        "PX" => Kind::Px,
        "PY" => Kind::Py,
        "PZ" => Kind::Pz,
        _ => return None,
    };
    let key = UnitKey { dir, kind, h: f[3].parse().ok()?, k: f[4].parse().ok()?, part: f[5].parse().ok()? };
    let r = UnitResult { types: f[6].parse().ok()?, poly: Gf2Poly::from_hex(f[7]).ok()? };
    Some((key, r))
}
