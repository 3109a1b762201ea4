//! `scan`: one Midy set per `N` in a range.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use midylab::midy::midy_set_factored;
use midylab::{gcd, Certificate, MidySet, Natural};

use crate::cache::FactorCache;
use crate::{CliResult, Failure, Format};

/// One scanned modulus. Rows come out in strictly ascending `n`.
#[derive(Debug, Serialize)]
pub struct ScanRow {
    pub n: Natural,
    pub base: Natural,
    pub order: Natural,
    pub midy_set: Vec<Natural>,
    pub excluded: Vec<Excluded>,
}

#[derive(Debug, Serialize)]
pub struct Excluded {
    pub d: Natural,
    pub certificate: Certificate,
}

impl From<MidySet> for ScanRow {
    fn from(s: MidySet) -> Self {
        ScanRow {
            n: s.modulus,
            base: s.base,
            order: s.order,
            midy_set: s.members,
            excluded: s
                .excluded
                .into_iter()
                .map(|(d, certificate)| Excluded { d, certificate })
                .collect(),
        }
    }
}

pub const CSV_HEADER: &str = "n,base,order,midy_set";

impl ScanRow {
    pub fn csv(&self) -> String {
        let set: Vec<String> = self.midy_set.iter().map(Natural::to_string).collect();
        format!("{},{},{},{}", self.n, self.base, self.order, set.join(";"))
    }
}

pub(crate) fn run_scan(
    out: &mut dyn Write,
    cache: &FactorCache,
    base: Natural,
    from: Natural,
    to: Natural,
    jobs: usize,
    format: Format,
) -> CliResult {
    let from = from.max(1);
    let moduli: Vec<Natural> = (from..=to).filter(|&n| gcd(n, base) == 1).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {jobs} workers: {e}")))?;
    // Indexed parallel collect keeps the input order.
    let rows: Vec<ScanRow> = pool.install(|| {
        moduli
            .par_iter()
            .map(|&n| Ok(ScanRow::from(midy_set_factored(base, &cache.factor(n)?)?)))
            .collect::<Result<_, Failure>>()
    })?;
    let mut buf = Vec::with_capacity(rows.len() * 24);
    match format {
        Format::Json => {
            for row in &rows {
                serde_json::to_writer(&mut buf, row).map_err(std::io::Error::other)?;
                buf.push(b'\n');
            }
        }
        _ => {
            writeln!(buf, "{CSV_HEADER}")?;
            for row in &rows {
                writeln!(buf, "{}", row.csv())?;
            }
        }
    }
    out.write_all(&buf)?;
    Ok(())
}
