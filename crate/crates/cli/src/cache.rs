//! Append-only factorization cache.
//!
//! One entry per line, `n=p^e*p^e...` (`1=` for one). Entries are loaded at
//! startup and every hit is revalidated by multiplying the factors back out;
//! a stale or corrupt entry is ignored and recomputed.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::sync::{Mutex, RwLock};

use midylab::{factor, Factorization, MidyError, Natural};

pub struct FactorCache {
    entries: RwLock<HashMap<Natural, Factorization>>,
    sink: Option<Mutex<File>>,
}

/// Parses one cache line. Exponents default to 1 when `^e` is omitted.
pub fn parse_line(line: &str) -> Option<(Natural, Vec<(Natural, u32)>)> {
    let (n, rhs) = line.trim().split_once('=')?;
    let n: Natural = n.trim().parse().ok()?;
    let mut pairs = Vec::new();
    for term in rhs.split('*').map(str::trim).filter(|t| !t.is_empty()) {
        let (p, e) = match term.split_once('^') {
            Some((p, e)) => (p.parse().ok()?, e.parse().ok()?),
            None => (term.parse().ok()?, 1),
        };
        pairs.push((p, e));
    }
    Some((n, pairs))
}

pub fn format_line(n: Natural, f: &Factorization) -> String {
    format!("{n}={f}")
}

impl FactorCache {
    /// A cache that only lives in memory.
    pub fn in_memory() -> Self {
        FactorCache {
            entries: RwLock::new(HashMap::new()),
            sink: None,
        }
    }

    /// Loads `path` (if it exists) and appends new entries to it.
    pub fn open(path: &Path) -> io::Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if let Some((n, pairs)) = parse_line(&line) {
                    if let Ok(f) = Factorization::from_pairs(pairs) {
                        entries.insert(n, f);
                    }
                }
            }
        }
        let sink = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(FactorCache {
            entries: RwLock::new(entries),
            sink: Some(Mutex::new(sink)),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn factor(&self, n: Natural) -> Result<Factorization, MidyError> {
        if let Some(f) = self.entries.read().unwrap().get(&n) {
            if f.value() == n {
                return Ok(f.clone());
            }
        }
        let f = factor(n)?;
        self.entries.write().unwrap().insert(n, f.clone());
        if let Some(sink) = &self.sink {
            let line = format_line(n, &f) + "\n";
            // A failed append only costs a recomputation next time.
            let _ = sink.lock().unwrap().write_all(line.as_bytes());
        }
        Ok(f)
    }
}
