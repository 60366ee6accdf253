//! On-disk cache of class polynomial tables.
//!
//! The file starts with a one-line JSON header; every following line is one
//! JSON record. Records are only ever appended. A file whose header does not
//! match the current job is ignored as a whole.

use std::fs::{File, OpenOptions};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use adlv_core::error::{Error, Result};
use adlv_core::hecke::{ClassPolyTable, ClassPolynomials};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;
const KIND: &str = "adlv-class-polynomials";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format_version: u32,
    pub kind: String,
    #[serde(rename = "type")]
    pub type_label: String,
    pub delta: String,
    pub library_version: String,
}

impl Header {
    pub fn new(type_label: &str, delta: &str) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            kind: KIND.into(),
            type_label: type_label.into(),
            delta: delta.into(),
            library_version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub element: String,
    pub table: ClassPolyTable,
}

#[derive(Debug)]
pub struct CacheFile {
    path: PathBuf,
    header: Header,
    /// Set when the file exists with a different header.
    foreign: bool,
    known: usize,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub records: usize,
    /// A partially written final line was skipped.
    pub truncated_tail: bool,
    pub ignored: bool,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Config(format!("cache {}: {e}", path.display()))
}

impl CacheFile {
    pub fn new(path: impl Into<PathBuf>, header: Header) -> Self {
        Self {
            path: path.into(),
            header,
            foreign: false,
            known: 0,
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Reads every record into `cp`. A missing file is an empty cache; a
    /// malformed record before the last line, or a table failing the
    /// structural checks, is an integrity failure.
    pub fn load(&mut self, cp: &ClassPolynomials) -> Result<LoadStats> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(LoadStats::default()),
            Err(e) => return Err(io_err(&self.path, e)),
        };
        let text = std::io::read_to_string(BufReader::new(file)).map_err(|e| io_err(&self.path, e))?;
        let complete = text.ends_with('\n');
        let mut lines = text.lines();
        let header = lines.next().and_then(|l| serde_json::from_str::<Header>(l).ok());
        if header.as_ref() != Some(&self.header) {
            self.foreign = !text.is_empty();
            return Ok(LoadStats {
                ignored: self.foreign,
                ..LoadStats::default()
            });
        }
        let lines: Vec<&str> = lines.collect();
        let mut stats = LoadStats::default();
        let g = cp.twisted_group().group().clone();
        for (k, line) in lines.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let last = k + 1 == lines.len();
            let rec = match serde_json::from_str::<Record>(line) {
                Ok(r) => r,
                Err(_) if last && !complete => {
                    stats.truncated_tail = true;
                    break;
                }
                Err(e) => {
                    return Err(Error::Integrity(format!(
                        "cache {} record {}: {e}",
                        self.path.display(),
                        k + 2
                    )))
                }
            };
            let x = g.parse_literal(&rec.element, false)?;
            if rec.table.source != rec.element {
                return Err(Error::Integrity(format!("cache record for {} names {}", rec.element, rec.table.source)));
            }
            let problems = cp.check_table(&x, &rec.table)?;
            if !problems.is_empty() {
                return Err(Error::Integrity(format!(
                    "cache record for {}: {}",
                    rec.element,
                    problems.join("; ")
                )));
            }
            cp.insert(&x, rec.table)?;
            stats.records += 1;
        }
        self.known = cp.memoized().len();
        Ok(stats)
    }

    /// Appends the tables computed since `load`. Writes are serialized by an
    /// exclusive lock on the file; a truncated tail left by an interrupted
    /// writer is cut off first so records stay line-aligned.
    pub fn append_new(&mut self, cp: &ClassPolynomials) -> Result<usize> {
        if self.foreign {
            return Ok(0);
        }
        let all = cp.memoized();
        if all.len() == self.known {
            return Ok(0);
        }
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| io_err(&self.path, e))?;
        file.lock().map_err(|e| io_err(&self.path, e))?;
        let existing = std::io::read_to_string(BufReader::new(&file)).map_err(|e| io_err(&self.path, e))?;
        let mut seen = std::collections::HashSet::new();
        let mut buf = String::new();
        if existing.is_empty() {
            buf.push_str(&serde_json::to_string(&self.header).expect("header serializes"));
            buf.push('\n');
        } else {
            let mut lines = existing.lines();
            let header = lines.next().and_then(|l| serde_json::from_str::<Header>(l).ok());
            if header.as_ref() != Some(&self.header) {
                self.foreign = true;
                return Ok(0);
            }
            for l in lines {
                if let Ok(r) = serde_json::from_str::<Record>(l) {
                    seen.insert(r.element);
                }
            }
            if !existing.ends_with('\n') {
                let keep = existing.rfind('\n').map_or(0, |i| i + 1);
                file.set_len(keep as u64).map_err(|e| io_err(&self.path, e))?;
            }
        }
        let mut written = 0;
        for (_, table) in all {
            if !seen.insert(table.source.clone()) {
                continue;
            }
            let rec = Record {
                element: table.source.clone(),
                table: (*table).clone(),
            };
            buf.push_str(&serde_json::to_string(&rec).expect("record serializes"));
            buf.push('\n');
            written += 1;
        }
        file.write_all(buf.as_bytes()).map_err(|e| io_err(&self.path, e))?;
        file.flush().map_err(|e| io_err(&self.path, e))?;
        self.known = cp.memoized().len();
        Ok(written)
    }
}
