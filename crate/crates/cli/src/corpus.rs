//! Batch run over `<dir>/<expected>/<name>.go`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use coflow_core::gofront::analyze;
use rayon::prelude::*;

pub const EXPECTATIONS: [&str; 3] = ["no-deadlock", "deadlock", "unsupported"];

#[derive(Debug, Clone)]
pub struct Entry {
    pub path: PathBuf,
    pub expected: String,
    pub actual: String,
    pub elapsed_ms: f64,
}

impl Entry {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

/// Entries sorted by path. `None` if `dir` is not a directory.
pub fn collect(dir: &Path) -> Option<Vec<(PathBuf, String)>> {
    if !dir.is_dir() {
        return None;
    }
    let mut files = Vec::new();
    for expected in EXPECTATIONS {
        let Ok(entries) = fs::read_dir(dir.join(expected)) else {
            continue;
        };
        for e in entries.flatten() {
            let path = e.path();
            if path.extension().is_some_and(|x| x == "go") {
                files.push((path, expected.to_string()));
            }
        }
    }
    files.sort();
    Some(files)
}

pub fn run(files: &[(PathBuf, String)], max_steps: usize) -> Vec<Entry> {
    files
        .par_iter()
        .map(|(path, expected)| {
            let started = Instant::now();
            let actual = match fs::read_to_string(path)
                .map_err(|e| e.to_string())
                .and_then(|src| analyze(&src, max_steps).map_err(|e| e.to_string()))
            {
                Ok(a) => a.overall().name().to_string(),
                Err(e) => format!("error: {e}"),
            };
            Entry {
                path: path.clone(),
                expected: expected.clone(),
                actual,
                elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
            }
        })
        .collect()
}
