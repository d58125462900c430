//! Table output and the cache-backed search oracle used by `bounds`.

use std::io::Write;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use vdwt_core::bounds::{BoundRecord, NumberOracle};
use vdwt_core::solver::{find_n, FindN, SearchConfig};
use vdwt_core::{Error, FamilyParams, Result};

use crate::cache::ResultCache;
use crate::error::{CliError, CliResult};

/// One CSV line. Lists are joined with `;`; an unknown upper bound is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub a: u32,
    pub b: u32,
    pub lower: String,
    pub upper: String,
    pub lower_provenance: String,
    pub upper_provenance: String,
    pub flags: String,
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

impl From<&BoundRecord> for CsvRow {
    fn from(rec: &BoundRecord) -> Self {
        CsvRow {
            a: rec.a,
            b: rec.b,
            lower: rec.lower.to_string(),
            upper: rec.upper.map(|u| u.to_string()).unwrap_or_default(),
            lower_provenance: join(&rec.lower_provenance),
            upper_provenance: join(&rec.upper_provenance),
            flags: join(&rec.flags),
        }
    }
}

pub fn write_csv(records: &[BoundRecord], out: &mut dyn Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    // An empty table still gets its header line.
    if records.is_empty() {
        w.write_record([
            "a",
            "b",
            "lower",
            "upper",
            "lower_provenance",
            "upper_provenance",
            "flags",
        ])
        .map_err(csv_err)?;
    }
    for rec in records {
        w.serialize(CsvRow::from(rec)).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Io {
        path: "<stdout>".into(),
        source: e,
    })
}

pub fn write_json(records: &[BoundRecord], out: &mut dyn Write) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, records).map_err(|e| CliError::Io {
        path: "<stdout>".into(),
        source: e.into(),
    })?;
    writeln!(out).map_err(|e| CliError::Io {
        path: "<stdout>".into(),
        source: e,
    })
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source: std::io::Error::other(e),
    }
}

/// Answers from the result cache when it holds an exact value, otherwise searches
/// and stores the outcome.
pub struct CachedSearch {
    pub config: SearchConfig,
    pub cache: Mutex<ResultCache>,
}

impl NumberOracle for CachedSearch {
    fn find_n(&self, params: FamilyParams, r: u32) -> Result<FindN> {
        let cached = {
            let cache = self.cache.lock().expect("cache lock");
            cache
                .exact(params.a(), params.b(), r)
                .map_err(cache_error)?
        };
        if let Some((n, cert)) = cached {
            return Ok(FindN::Exact {
                n,
                witness: cert.coloring().clone(),
                nodes: 0,
            });
        }
        let found = find_n(params, r, &self.config)?;
        self.cache
            .lock()
            .expect("cache lock")
            .record(params, r, &found)
            .map_err(cache_error)?;
        Ok(found)
    }
}

fn cache_error(e: CliError) -> Error {
    match e {
        CliError::Inconsistent(msg) => Error::Inconsistent(msg),
        other => Error::Oracle(other.to_string()),
    }
}
