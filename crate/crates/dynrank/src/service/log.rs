//! Append-only NDJSON event log, one file per session.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    Created {
        rule: String,
        h: Option<usize>,
        candidates: Vec<String>,
    },
    CandidateSubmitted {
        name: String,
    },
    /// Only a digest of the bearer token is persisted.
    VoterJoined {
        voter: usize,
        token_sha256: String,
    },
    Vote {
        voter: usize,
        candidate: String,
        approve: bool,
    },
    Implemented {
        candidate: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub seq: u64,
    pub event: Event,
}

#[derive(Debug)]
pub struct EventLog {
    path: PathBuf,
    file: File,
    seq: u64,
}

impl EventLog {
    /// Fails if the file already exists.
    pub fn create(path: &Path) -> io::Result<Self> {
        let file = OpenOptions::new().append(true).create_new(true).open(path)?;
        Ok(EventLog { path: path.to_path_buf(), file, seq: 0 })
    }

    /// Opens an existing log for appending and returns its records. A torn
    /// final line (from a crash mid-write) is dropped and truncated away.
    pub fn open(path: &Path) -> io::Result<(Self, Vec<Record>)> {
        let mut records = Vec::new();
        let mut valid_len = 0u64;
        let mut reader = BufReader::new(File::open(path)?);
        let mut line = String::new();
        loop {
            line.clear();
            let read = reader.read_line(&mut line)?;
            if read == 0 {
                break;
            }
            if !line.ends_with('\n') {
                break;
            }
            let record: Record = serde_json::from_str(&line).map_err(|e| {
                io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("{}: record {}: {e}", path.display(), records.len() + 1),
                )
            })?;
            if record.seq != records.len() as u64 + 1 {
                return Err(io::Error::new(io::ErrorKind::InvalidData, format!("{}: sequence gap", path.display())));
            }
            records.push(record);
            valid_len += read as u64;
        }
        let file = OpenOptions::new().append(true).open(path)?;
        if file.metadata()?.len() != valid_len {
            file.set_len(valid_len)?;
        }
        let seq = records.len() as u64;
        Ok((EventLog { path: path.to_path_buf(), file, seq }, records))
    }

    /// Writes and syncs one record.
    pub fn append(&mut self, event: Event) -> io::Result<Record> {
        let record = Record { seq: self.seq + 1, event };
        let mut line = serde_json::to_string(&record)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.sync_data()?;
        self.seq += 1;
        Ok(record)
    }

    pub fn seq(&self) -> u64 {
        self.seq
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}
