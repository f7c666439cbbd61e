//! Golden-file regression runs over a directory of job files.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use similar::TextDiff;

use crate::error::{Error, Result};
use crate::job::parse_job;
use crate::report::{run_job, RunOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Mismatch {
        diff: String,
    },
    /// No golden yet; the report was written next to the job.
    Candidate {
        path: PathBuf,
    },
    Failed {
        message: String,
    },
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default)]
pub struct CorpusSummary {
    pub entries: Vec<CorpusEntry>,
}

impl CorpusSummary {
    fn count(&self, f: impl Fn(&Outcome) -> bool) -> usize {
        self.entries.iter().filter(|e| f(&e.outcome)).count()
    }

    pub fn passed(&self) -> usize {
        self.count(|o| matches!(o, Outcome::Pass))
    }

    pub fn mismatched(&self) -> usize {
        self.count(|o| matches!(o, Outcome::Mismatch { .. }))
    }

    pub fn candidates(&self) -> usize {
        self.count(|o| matches!(o, Outcome::Candidate { .. }))
    }

    pub fn failed(&self) -> usize {
        self.count(|o| matches!(o, Outcome::Failed { .. }))
    }

    /// 0 when every golden matched, 2 on any mismatch, 1 on unreadable jobs.
    pub fn exit_code(&self) -> i32 {
        if self.mismatched() > 0 {
            2
        } else if self.failed() > 0 {
            1
        } else {
            0
        }
    }
}

impl fmt::Display for CorpusSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            match &e.outcome {
                Outcome::Pass => writeln!(f, "pass      {}", e.name)?,
                Outcome::Mismatch { diff } => {
                    writeln!(f, "MISMATCH  {}", e.name)?;
                    write!(f, "{diff}")?;
                }
                Outcome::Candidate { path } => writeln!(f, "candidate {} -> {}", e.name, path.display())?,
                Outcome::Failed { message } => writeln!(f, "ERROR     {}: {message}", e.name)?,
            }
        }
        let n = self.entries.len();
        if n == 0 {
            return writeln!(f, "0 jobs");
        }
        writeln!(
            f,
            "{n} jobs: {} passed, {} mismatched, {} missing golden, {} errors",
            self.passed(),
            self.mismatched(),
            self.candidates(),
            self.failed()
        )
    }
}

pub fn golden_path(job: &Path) -> PathBuf {
    job.with_extension("expected.json")
}

pub fn candidate_path(job: &Path) -> PathBuf {
    job.with_extension("candidate.json")
}

fn run_one(path: &Path) -> Outcome {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::Failed { message: e.to_string() },
    };
    let spec = match parse_job(&text) {
        Ok(s) => s,
        Err(e) => return Outcome::Failed { message: e.to_string() },
    };
    let actual = run_job(&spec, &RunOptions::default()).to_json();
    let golden = golden_path(path);
    let expected = match fs::read_to_string(&golden) {
        Ok(t) => t,
        Err(_) => {
            let out = candidate_path(path);
            return match fs::write(&out, &actual) {
                Ok(()) => Outcome::Candidate { path: out },
                Err(e) => Outcome::Failed { message: e.to_string() },
            };
        }
    };
    let same = match (serde_json::from_str::<Value>(&expected), serde_json::from_str::<Value>(&actual)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    if same {
        Outcome::Pass
    } else {
        let diff = TextDiff::from_lines(&expected, &actual)
            .unified_diff()
            .context_radius(2)
            .header(&golden.display().to_string(), "actual")
            .to_string();
        Outcome::Mismatch { diff }
    }
}

/// Every `*.toml` in `dir`, sorted by file name.
pub fn job_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let read = fs::read_dir(dir).map_err(|e| Error::InvalidInput(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = read
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn run_corpus(dir: &Path) -> Result<CorpusSummary> {
    let files = job_files(dir)?;
    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|p| s.spawn(move || run_one(p))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Outcome::Failed { message: "job panicked".into() }))
            .collect()
    });
    let entries = files
        .iter()
        .zip(outcomes)
        .map(|(p, outcome)| CorpusEntry {
            name: p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            outcome,
        })
        .collect();
    Ok(CorpusSummary { entries })
}
