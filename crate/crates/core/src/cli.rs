//! Command-line front end backing the `boa` binary.
//!
//! ```text
//! boa enumerate --n 9 --M 96 --tau 4 --set W --out w.json
//! boa run --n 9 --M 96 --tau 4 --report table.csv --json run.json --cache .boa-cache
//! boa verify-oa --file array.txt --tau 4 --cache .boa-cache
//! ```
//!
//! Exit status is 0 on success, 1 for usage errors (including invalid
//! parameter triples) and 2 for data errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::distributions::{enumerate_initial, DistributionSet, ParameterTriple, SetKind};
use crate::error::{Error, Result};
use crate::oracle::BinaryArray;
use crate::orchestrator::{
    build_workbook, Schedule, SieveOptions, Visibility, DEFAULT_MIN_STRENGTH,
};

/// Tag written into cache manifests; entries from other versions are ignored.
pub const CACHE_VERSION: &str = concat!("boa-sieve-", env!("CARGO_PKG_VERSION"), "/1");

#[derive(Debug, Parser)]
#[command(name = "boa", version, about = "Feasible distance distributions of binary orthogonal arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the initial P, Q or W set of one triple.
    Enumerate(EnumerateArgs),
    /// Build the workbook for a target and sieve it to a fixed point.
    Run(RunArgs),
    /// Check the strength of an array file and its distributions.
    VerifyOa(VerifyArgs),
}

#[derive(Debug, Args)]
struct TripleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "M")]
    m: u64,
    #[arg(long)]
    tau: usize,
}

impl TripleArgs {
    fn triple(&self) -> Result<ParameterTriple> {
        ParameterTriple::new(self.n, self.m, self.tau)
    }
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    triple: TripleArgs,
    #[arg(long = "set", default_value = "W")]
    set: SetKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    triple: TripleArgs,
    #[arg(long, default_value_t = DEFAULT_MIN_STRENGTH)]
    min_strength: usize,
    /// Count table (CSV).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Full run report (JSON).
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Visit cells in a seeded random order with per-cell commits.
    #[arg(long)]
    schedule_seed: Option<u64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    tau: usize,
    #[arg(long)]
    cache: Option<PathBuf>,
}

/// Settings of one `run` invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub target: ParameterTriple,
    pub min_strength: usize,
    pub cache_dir: Option<PathBuf>,
    pub report_csv: Option<PathBuf>,
    pub report_json: Option<PathBuf>,
    pub threads: Option<usize>,
    pub schedule_seed: Option<u64>,
}

impl RunConfig {
    pub fn options(&self) -> SieveOptions {
        match self.schedule_seed {
            Some(seed) => SieveOptions {
                schedule: Schedule::Shuffled(seed),
                visibility: Visibility::Immediate,
                ..SieveOptions::default()
            },
            None => SieveOptions::default(),
        }
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Manifest {
    version: String,
    /// File name to SHA-256 of its contents.
    files: BTreeMap<String, String>,
}

/// On-disk store of sets, one JSON file per `(triple, kind)` plus a manifest
/// of content hashes.
#[derive(Debug)]
pub struct SetCache {
    dir: PathBuf,
    manifest: Manifest,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl SetCache {
    /// Opens (or starts) a cache in `dir`. Unreadable or stale manifests
    /// start an empty cache; the warning goes to `warn`.
    pub fn open(dir: &Path, warn: &mut dyn Write) -> Result<Self> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let path = dir.join("manifest.json");
        let manifest = match fs::read_to_string(&path) {
            Ok(text) => match serde_json::from_str::<Manifest>(&text) {
                Ok(m) if m.version == CACHE_VERSION => m,
                Ok(_) => Manifest::default(),
                Err(_) => {
                    let _ = writeln!(warn, "warning: cache manifest unreadable; rebuilding");
                    Manifest::default()
                }
            },
            Err(_) => Manifest::default(),
        };
        Ok(Self {
            dir: dir.to_owned(),
            manifest: Manifest {
                version: CACHE_VERSION.to_owned(),
                ..manifest
            },
        })
    }

    pub fn file_name(triple: ParameterTriple, kind: SetKind) -> String {
        format!("n{}_M{}_t{}_{kind}.json", triple.n, triple.m, triple.tau)
    }

    /// A cached set, if present and intact.
    pub fn load(
        &self,
        triple: ParameterTriple,
        kind: SetKind,
        warn: &mut dyn Write,
    ) -> Option<DistributionSet> {
        let name = Self::file_name(triple, kind);
        let expected = self.manifest.files.get(&name)?;
        let bytes = fs::read(self.dir.join(&name)).ok();
        let set = bytes
            .filter(|b| sha256_hex(b) == *expected)
            .and_then(|b| String::from_utf8(b).ok())
            .and_then(|s| DistributionSet::from_json(&s).ok())
            .filter(|s| s.triple == triple && s.kind == kind);
        if set.is_none() {
            let _ = writeln!(warn, "warning: cache entry {name} is corrupt; rebuilding");
        }
        set
    }

    pub fn store(&mut self, set: &DistributionSet) -> Result<()> {
        let name = Self::file_name(set.triple, set.kind);
        let json = set.to_json()?;
        let path = self.dir.join(&name);
        fs::write(&path, &json).map_err(io_err(&path))?;
        self.manifest.files.insert(name, sha256_hex(json.as_bytes()));
        Ok(())
    }

    pub fn flush(&self) -> Result<()> {
        let path = self.dir.join("manifest.json");
        let json = serde_json::to_string_pretty(&self.manifest)?;
        fs::write(&path, json).map_err(io_err(&path))
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Enumerate(a) => cmd_enumerate(a, out),
        Command::Run(a) => cmd_run(a, out, err),
        Command::VerifyOa(a) => cmd_verify_oa(a, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidTriple { .. } | Error::OutOfRange(_) => 1,
                _ => 2,
            }
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(io_err(path))
}

fn cmd_enumerate(args: EnumerateArgs, out: &mut dyn Write) -> Result<()> {
    let set = enumerate_initial(args.triple.triple()?, args.set)?;
    if let Some(path) = &args.out {
        write_file(path, &set.to_json()?)?;
    }
    let _ = writeln!(out, "{}", set.len());
    Ok(())
}

fn cmd_run(args: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let config = RunConfig {
        target: args.triple.triple()?,
        min_strength: args.min_strength,
        cache_dir: args.cache,
        report_csv: args.report,
        report_json: args.json,
        threads: args.threads,
        schedule_seed: args.schedule_seed,
    };
    match config.threads {
        Some(0) => Err(Error::OutOfRange("--threads must be positive".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::OutOfRange(e.to_string()))?;
            let (result, o, e) = pool.install(|| {
                let (mut o, mut e) = (Vec::new(), Vec::new());
                (execute_run(&config, &mut o, &mut e), o, e)
            });
            let _ = out.write_all(&o);
            let _ = err.write_all(&e);
            result
        }
        None => execute_run(&config, out, err),
    }
}

/// Builds, optionally warms from the cache, sieves and reports one workbook.
pub fn execute_run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mut workbook = build_workbook(config.target, config.min_strength)?;
    let mut cache = match &config.cache_dir {
        Some(dir) => Some(SetCache::open(dir, err)?),
        None => None,
    };
    if let Some(cache) = &cache {
        let triples: Vec<ParameterTriple> = workbook.rows().iter().flatten().copied().collect();
        for t in triples {
            if let Some(set) = cache.load(t, SetKind::W, err) {
                workbook.restore(t, &set)?;
            }
        }
    }

    let options = config.options();
    let report = workbook.run_fixed_point(&options)?;

    if let Some(cache) = &mut cache {
        for t in workbook.rows().iter().flatten().copied().collect::<Vec<_>>() {
            for kind in SetKind::ALL {
                cache.store(&workbook.set(t, kind)?)?;
            }
        }
        cache.flush()?;
    }
    if let Some(path) = &config.report_csv {
        write_file(path, &report.to_csv())?;
    }
    if let Some(path) = &config.report_json {
        write_file(path, &report.to_json()?)?;
    }
    if !report.partial_emptiness.is_empty() {
        let cells: Vec<String> = report.partial_emptiness.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(
            err,
            "note: only one of P, Q ended empty at {}",
            cells.join(" ")
        );
    }
    let _ = writeln!(out, "{}", workbook.verdict(config.target)?);
    Ok(())
}

fn cmd_verify_oa(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let text = fs::read_to_string(&args.file).map_err(io_err(&args.file))?;
    let array: BinaryArray = text.parse()?;
    match array.strength_violation(args.tau) {
        None => {
            let _ = writeln!(out, "strength OK");
        }
        Some(cols) => {
            let cols: Vec<String> = cols.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "strength FAIL at columns {{{}}}", cols.join(", "));
            return Ok(());
        }
    }

    let Some(dir) = &args.cache else { return Ok(()) };
    let Ok(triple) = ParameterTriple::new(array.n(), array.len() as u64, args.tau) else {
        return Ok(());
    };
    let cache = SetCache::open(dir, err)?;
    let Some(set) = cache.load(triple, SetKind::W, err) else {
        let _ = writeln!(out, "no cached set for {triple}");
        return Ok(());
    };
    let mut census: Vec<_> = array.distribution_census().into_iter().collect();
    census.sort();
    let mut missing = 0;
    for (w, points) in &census {
        let member = set.contains(w);
        if !member {
            missing += 1;
        }
        let _ = writeln!(
            out,
            "{w} {} ({points} points)",
            if member { "member" } else { "NOT member" }
        );
    }
    let _ = writeln!(
        out,
        "{} of {} distributions are members of W{triple}",
        census.len() - missing,
        census.len()
    );
    Ok(())
}
