//! Persistent record of computed `n(a,b;r)` values.
//!
//! One file, `results.txt`, holds a line per `(a, b, r)`:
//!
//! ```text
//! a=2 b=2 r=3 kind=exact n=88 cert=a2-b2-r3-n87.cert time=1760000000 version=0.1.0
//! ```
//!
//! `kind=exact n=N` records that `[1, N]` was proven uncolorable and that the named
//! certificate colors `[1, N - 1]`. `kind=lower n=N` records only `n(a,b;r) > N`.
//! Certificates live next to the file under `certs/`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use vdwt_core::solver::FindN;
use vdwt_core::{FamilyParams, Verdict};

use crate::cert::Certificate;
use crate::error::{CliError, CliResult};

pub const CACHE_ENV: &str = "VDWT_CACHE_DIR";

const RESULTS: &str = "results.txt";
const CERTS: &str = "certs";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CachedValue {
    Exact(u32),
    Lower(u32),
}

impl fmt::Display for CachedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CachedValue::Exact(n) => write!(f, "n = {n}"),
            CachedValue::Lower(n) => write!(f, "n > {n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub a: u32,
    pub b: u32,
    pub r: u32,
    pub value: CachedValue,
    /// File name under `certs/`.
    pub cert: String,
    pub time: u64,
    pub version: String,
}

impl CacheRecord {
    fn render(&self) -> String {
        let (kind, n) = match self.value {
            CachedValue::Exact(n) => ("exact", n),
            CachedValue::Lower(n) => ("lower", n),
        };
        format!(
            "a={} b={} r={} kind={kind} n={n} cert={} time={} version={}",
            self.a, self.b, self.r, self.cert, self.time, self.version
        )
    }

    fn parse(line: &str, lineno: usize) -> CliResult<Self> {
        let bad = |msg: String| CliError::Cache(format!("{RESULTS} line {lineno}: {msg}"));
        let fields: BTreeMap<&str, &str> = line
            .split_whitespace()
            .map(|kv| {
                kv.split_once('=')
                    .ok_or_else(|| bad(format!("bad field `{kv}`")))
            })
            .collect::<CliResult<_>>()?;
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| bad(format!("missing `{k}`")))
        };
        let num = |k: &str| -> CliResult<u64> {
            let v = get(k)?;
            v.parse().map_err(|_| bad(format!("bad `{k}={v}`")))
        };
        let small = |k: &str| -> CliResult<u32> {
            u32::try_from(num(k)?).map_err(|_| bad(format!("`{k}` out of range")))
        };
        let n = small("n")?;
        let value = match get("kind")? {
            "exact" => CachedValue::Exact(n),
            "lower" => CachedValue::Lower(n),
            other => return Err(bad(format!("unknown kind `{other}`"))),
        };
        Ok(CacheRecord {
            a: small("a")?,
            b: small("b")?,
            r: small("r")?,
            value,
            cert: get("cert")?.to_string(),
            time: num("time")?,
            version: get("version")?.to_string(),
        })
    }
}

pub struct ResultCache {
    dir: PathBuf,
    records: BTreeMap<(u32, u32, u32), CacheRecord>,
}

impl ResultCache {
    /// `$VDWT_CACHE_DIR`, else `$HOME/.cache/vdwt`, else `.vdwt-cache`.
    pub fn default_dir() -> PathBuf {
        if let Some(dir) = std::env::var_os(CACHE_ENV) {
            return dir.into();
        }
        match std::env::var_os("HOME") {
            Some(home) => Path::new(&home).join(".cache").join("vdwt"),
            None => PathBuf::from(".vdwt-cache"),
        }
    }

    pub fn open(dir: impl Into<PathBuf>) -> CliResult<Self> {
        let dir = dir.into();
        let path = dir.join(RESULTS);
        let mut records = BTreeMap::new();
        match fs::read_to_string(&path) {
            Ok(text) => {
                for (i, line) in text.lines().enumerate() {
                    if line.trim().is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let rec = CacheRecord::parse(line, i + 1)?;
                    records.insert((rec.a, rec.b, rec.r), rec);
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(CliError::io(&path, e)),
        }
        Ok(ResultCache { dir, records })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn get(&self, a: u32, b: u32, r: u32) -> Option<&CacheRecord> {
        self.records.get(&(a, b, r))
    }

    pub fn records(&self) -> impl Iterator<Item = &CacheRecord> {
        self.records.values()
    }

    pub fn cert_path(&self, rec: &CacheRecord) -> PathBuf {
        self.dir.join(CERTS).join(&rec.cert)
    }

    /// The stored certificate of `rec`, checked against the record.
    pub fn load_certificate(&self, rec: &CacheRecord) -> CliResult<Certificate> {
        let path = self.cert_path(rec);
        let text = fs::read_to_string(&path).map_err(|e| {
            CliError::Inconsistent(format!("cached certificate {}: {e}", path.display()))
        })?;
        let cert = Certificate::parse(&text).map_err(|e| {
            CliError::Inconsistent(format!("cached certificate {}: {e}", path.display()))
        })?;
        let expected_n = match rec.value {
            CachedValue::Exact(n) => n - 1,
            CachedValue::Lower(n) => n,
        };
        let header_ok = (cert.params().a(), cert.params().b(), cert.r()) == (rec.a, rec.b, rec.r)
            && cert.n() as u64 == u64::from(expected_n);
        if !header_ok {
            return Err(CliError::Inconsistent(format!(
                "cached certificate {} does not match its record",
                path.display()
            )));
        }
        if let Verdict::Violation(t) = cert.verify() {
            return Err(CliError::Inconsistent(format!(
                "cached certificate {} has the monochromatic triple ({}, {}, {})",
                path.display(),
                t.x,
                t.y,
                t.z
            )));
        }
        Ok(cert)
    }

    /// A cached exact value together with its verified certificate.
    pub fn exact(&self, a: u32, b: u32, r: u32) -> CliResult<Option<(u32, Certificate)>> {
        match self.get(a, b, r) {
            Some(rec) => match rec.value {
                CachedValue::Exact(n) => Ok(Some((n, self.load_certificate(rec)?))),
                CachedValue::Lower(_) => Ok(None),
            },
            None => Ok(None),
        }
    }

    /// Stores a fresh result. A result that contradicts the stored one is an error
    /// and leaves the cache untouched. Returns the certificate path when written.
    pub fn record(
        &mut self,
        params: FamilyParams,
        r: u32,
        found: &FindN,
    ) -> CliResult<Option<PathBuf>> {
        let (a, b) = (params.a(), params.b());
        let fresh = match found {
            FindN::Exact { n, .. } => CachedValue::Exact(*n),
            FindN::LowerBoundOnly { lower, .. } => CachedValue::Lower(*lower),
        };
        if let Some(old) = self.get(a, b, r) {
            let conflict = match (old.value, fresh) {
                (CachedValue::Exact(m), CachedValue::Exact(n)) => m != n,
                (CachedValue::Exact(m), CachedValue::Lower(l)) => l >= m,
                (CachedValue::Lower(l), CachedValue::Exact(n)) => n <= l,
                (CachedValue::Lower(_), CachedValue::Lower(_)) => false,
            };
            if conflict {
                return Err(CliError::Inconsistent(format!(
                    "n({a},{b};{r}): cache has {} but the search found {fresh}",
                    old.value
                )));
            }
            let improves = match (old.value, fresh) {
                (CachedValue::Lower(l), CachedValue::Lower(m)) => m > l,
                (CachedValue::Lower(_), CachedValue::Exact(_)) => true,
                _ => false,
            };
            if !improves {
                return Ok(None);
            }
        }

        let cert = Certificate::new(params, r, found.witness())?;
        let name = format!("a{a}-b{b}-r{r}-n{}.cert", cert.n());
        let certs = self.dir.join(CERTS);
        fs::create_dir_all(&certs).map_err(|e| CliError::io(&certs, e))?;
        let cert_path = certs.join(&name);
        write_atomic(&cert_path, cert.render().as_bytes())?;

        let time = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.records.insert(
            (a, b, r),
            CacheRecord {
                a,
                b,
                r,
                value: fresh,
                cert: name,
                time,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
        );
        self.save()?;
        Ok(Some(cert_path))
    }

    fn save(&self) -> CliResult<()> {
        let mut text =
            String::from("# n(a,b;r) results; kind=exact n=N means [1,N] has no valid coloring\n");
        for rec in self.records.values() {
            text.push_str(&rec.render());
            text.push('\n');
        }
        write_atomic(&self.dir.join(RESULTS), text.as_bytes())
    }
}

/// Writes to a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
