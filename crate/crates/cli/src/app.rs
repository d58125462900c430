//! Argument parsing and the five subcommands.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vdwt_core::bounds::{
    generate_table, AxiomSet, LiveSearch, NumberOracle, ReferenceTable, SearchPlan, TableOptions,
};
use vdwt_core::colorings::{gamma_prefix, GammaParams};
use vdwt_core::rado::{regularity_necessary, triple_equation};
use vdwt_core::solver::{find_n, FindN, SearchConfig};
use vdwt_core::{verify_coloring, FamilyParams, Verdict};

use crate::cache::{write_atomic, ResultCache};
use crate::cert::{render_colors, Certificate};
use crate::error::{code, CliError, CliResult};
use crate::table::{write_csv, write_json, CachedSearch};

#[derive(Parser, Debug)]
#[command(
    name = "vdwt",
    version,
    about = "Generalized van der Waerden triples (x, ax+d, bx+2d)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute n(a,b;r) and write a certificate for [1, n-1].
    Solve(SolveArgs),
    /// Check a certificate file for monochromatic triples.
    Verify(VerifyArgs),
    /// Emit a prefix of the block coloring gamma_c.
    Gamma(GammaArgs),
    /// Print the equation satisfied by every triple and the Rado verdict.
    Rado(FamilyArgs),
    /// Tabulate bounds on the degree of regularity.
    Bounds(BoundsArgs),
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    a: u32,
    #[arg(long)]
    b: u32,
}

#[derive(Args, Debug)]
struct CacheArgs {
    /// Cache directory; defaults to $VDWT_CACHE_DIR, then ~/.cache/vdwt.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the result cache.
    #[arg(long)]
    no_cache: bool,
}

impl CacheArgs {
    fn open(&self) -> CliResult<Option<ResultCache>> {
        if self.no_cache {
            return Ok(None);
        }
        let dir = self
            .cache_dir
            .clone()
            .unwrap_or_else(ResultCache::default_dir);
        ResultCache::open(dir).map(Some)
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = 2000)]
    max_n: u32,
    /// Decision-node cap per tested n.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Also write the certificate here.
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Search even when the cache holds an exact value, and check it agrees.
    #[arg(long)]
    recompute: bool,
    #[command(flatten)]
    cache: CacheArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    cert: PathBuf,
}

#[derive(Args, Debug)]
struct GammaArgs {
    #[arg(long)]
    c: u32,
    #[arg(long)]
    n: u64,
    #[arg(long, requires = "b")]
    a: Option<u32>,
    #[arg(long, requires = "a")]
    b: Option<u32>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    a_max: u32,
    #[arg(long)]
    b_max: u32,
    /// Axiom file; without it only derived bounds are used.
    #[arg(long, conflicts_with = "shipped_axioms")]
    axioms: Option<PathBuf>,
    /// Use the axiom file bundled with the binary.
    #[arg(long)]
    shipped_axioms: bool,
    /// Reference table to compare against.
    #[arg(long, conflicts_with = "shipped_reference")]
    reference: Option<PathBuf>,
    /// Compare against the reference table bundled with the binary.
    #[arg(long)]
    shipped_reference: bool,
    /// Raise lower bounds by computing n(a,b;r).
    #[arg(long)]
    search_lower: bool,
    #[arg(long, default_value_t = 3)]
    search_max_r: u32,
    #[arg(long, default_value_t = 600)]
    search_max_n: u32,
    /// Decision-node cap per tested n during the lower-bound search.
    #[arg(long, default_value_t = 10_000_000)]
    search_budget: u64,
    /// Check each block-coloring bound on [1, N]; 0 disables the check.
    #[arg(long, default_value_t = 100_000)]
    audit_n: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    cache: CacheArgs,
}

/// Runs the command line `args` and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    code::OK
                }
                _ => code::PARSE_OR_IO,
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve(args, out, err),
        Command::Verify(args) => verify(args, out),
        Command::Gamma(args) => gamma(args, out, err),
        Command::Rado(args) => rado(args, out),
        Command::Bounds(args) => bounds(args, out, err),
    };
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_out(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn solve(args: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let params = FamilyParams::new(args.family.a, args.family.b)?;
    let r = args.r;
    let mut cache = args.cache.open()?;

    if !args.recompute {
        if let Some((n, cert)) = match &cache {
            Some(c) => c.exact(params.a(), params.b(), r)?,
            None => None,
        } {
            let _ = writeln!(err, "cached: n({},{};{r}) = {n}", params.a(), params.b());
            if let Some(path) = &args.cert {
                write_atomic(path, cert.render().as_bytes())?;
            }
            writeln!(out, "{n}").map_err(io_out)?;
            return Ok(code::OK);
        }
    }

    let cfg = SearchConfig {
        max_n: args.max_n,
        node_budget: args.budget,
        parallel_width: args.workers,
        ..SearchConfig::default()
    };
    let found = find_n(params, r, &cfg)?;
    let _ = writeln!(err, "nodes: {}", found.nodes());
    if let Some(cache) = cache.as_mut() {
        if let Some(path) = cache.record(params, r, &found)? {
            let _ = writeln!(err, "certificate: {}", path.display());
        }
    }
    if let Some(path) = &args.cert {
        let cert = Certificate::new(params, r, found.witness())?;
        write_atomic(path, cert.render().as_bytes())?;
        let _ = writeln!(err, "certificate: {}", path.display());
    }
    match found {
        FindN::Exact { n, .. } => {
            writeln!(out, "{n}").map_err(io_out)?;
            Ok(code::OK)
        }
        FindN::LowerBoundOnly { lower, cutoff, .. } => {
            writeln!(out, "n > {lower}").map_err(io_out)?;
            let why = if cutoff {
                "node budget exhausted"
            } else {
                "max-n reached"
            };
            let _ = writeln!(err, "lower bound only: {why}");
            Ok(code::CUTOFF)
        }
    }
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let text = fs::read_to_string(&args.cert).map_err(|e| CliError::io(&args.cert, e))?;
    let cert = Certificate::parse(&text)?;
    match cert.verify() {
        Verdict::Valid => {
            writeln!(out, "valid").map_err(io_out)?;
            Ok(code::OK)
        }
        Verdict::Violation(t) => {
            writeln!(out, "violation {} {} {}", t.x, t.y, t.z).map_err(io_out)?;
            Ok(code::VIOLATION)
        }
    }
}

fn gamma(args: GammaArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let gp = GammaParams::new(args.c)?;
    let coloring = gamma_prefix(gp, args.n)?;
    let (text, status) = match (args.a, args.b) {
        (Some(a), Some(b)) => {
            let params = FamilyParams::new(a, b)?;
            match verify_coloring(params, &coloring) {
                Verdict::Valid => {
                    let _ = writeln!(err, "valid");
                    (
                        Certificate::new(params, args.c, &coloring)?.render(),
                        code::OK,
                    )
                }
                Verdict::Violation(t) => {
                    writeln!(out, "violation {} {} {}", t.x, t.y, t.z).map_err(io_out)?;
                    return Ok(code::VIOLATION);
                }
            }
        }
        _ => {
            let mut text = String::new();
            render_colors(&mut text, coloring.colors());
            (text, code::OK)
        }
    };
    match &args.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => out.write_all(text.as_bytes()).map_err(io_out)?,
    }
    Ok(status)
}

fn rado(args: FamilyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let params = FamilyParams::new(args.a, args.b)?;
    let eq = triple_equation(params);
    let terms: Vec<String> = eq
        .coefficients()
        .iter()
        .zip(["x", "y", "z"])
        .map(|(c, v)| match c {
            1 => v.to_string(),
            -1 => format!("-{v}"),
            _ => format!("{c}{v}"),
        })
        .collect();
    writeln!(
        out,
        "equation: {} = 0",
        terms.join(" + ").replace("+ -", "- ")
    )
    .map_err(io_out)?;
    writeln!(out, "rado: {}", regularity_necessary(params)).map_err(io_out)?;
    Ok(code::OK)
}

fn read_text(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn bounds(args: BoundsArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let axioms = if args.shipped_axioms {
        AxiomSet::shipped()
    } else if let Some(path) = &args.axioms {
        match fs::read_to_string(path) {
            Ok(text) => text.parse()?,
            Err(e) => {
                let _ = writeln!(
                    err,
                    "warning: axiom file {}: {e}; continuing without axioms",
                    path.display()
                );
                AxiomSet::empty()
            }
        }
    } else {
        AxiomSet::empty()
    };
    let reference: Option<ReferenceTable> = if args.shipped_reference {
        Some(ReferenceTable::shipped())
    } else {
        args.reference
            .as_ref()
            .map(read_text)
            .transpose()?
            .map(|t| t.parse())
            .transpose()?
    };

    let config = SearchConfig {
        max_n: args.search_max_n,
        node_budget: Some(args.search_budget),
        ..SearchConfig::default()
    };
    let oracle: Box<dyn NumberOracle> = match args.cache.open()? {
        Some(cache) if args.search_lower => Box::new(CachedSearch {
            config,
            cache: Mutex::new(cache),
        }),
        _ => Box::new(LiveSearch { config }),
    };
    let opts = TableOptions {
        search: args.search_lower.then(|| SearchPlan {
            max_r: args.search_max_r,
            oracle: oracle.as_ref(),
        }),
        reference: reference.as_ref(),
        audit_n: (args.audit_n > 0).then_some(args.audit_n),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let table = pool.install(|| generate_table(args.a_max, args.b_max, &axioms, &opts))?;

    match args.format {
        Format::Csv => write_csv(&table.records, out)?,
        Format::Json => write_json(&table.records, out)?,
    }
    for m in &table.mismatches {
        let engine = m
            .engine
            .map(|d| d.to_string())
            .unwrap_or_else(|| "unknown".into());
        let _ = writeln!(
            err,
            "mismatch ({},{}) {:?}: engine {engine}, reference {}{}",
            m.a,
            m.b,
            m.side,
            m.reference,
            if m.known { " (known)" } else { "" }
        );
    }
    if table.unacknowledged().next().is_some() {
        return Ok(code::VIOLATION);
    }
    Ok(code::OK)
}
