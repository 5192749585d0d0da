//! `braid-growth`: enumerate growth tables, fit and verify generating functions.
//!
//! Standard output carries only results. Exit status: 0 success, 1 mismatch or
//! no fit, 2 resource, overflow or storage failure, 3 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use braid_growth::engine::{EngineConfig, Enumerator, GrowthTable, TemplateCount};
use braid_growth::oracle::bfs_enumerate;
use braid_growth::series::{guess, verify, RationalFn, Series};
use braid_growth::store::Mode;
use braid_growth::words::{Alphabet, Kind};
use braid_growth::{golden, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

const MISMATCH: u8 = 1;
const RESOURCE: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "braid-growth", version, about = "Spherical and geodesic growth of braid groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute s(ℓ) and g(ℓ) for ℓ = 0..=max-len.
    Enumerate(EnumerateArgs),
    /// Guess a rational generating function for a series file.
    Fit(FitArgs),
    /// Compare a series file with the expansion of a rational function.
    Verify(VerifyArgs),
    /// Run the oracle, combi and red-combi and require identical results.
    Check(GroupArgs),
    /// Enumerate and compare with the published values for this group.
    Golden(GoldenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Gens {
    Artin,
    Dual,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RunMode {
    RedCombi,
    Combi,
    Oracle,
}

#[derive(Args, Clone)]
struct GroupArgs {
    #[arg(long)]
    strands: usize,
    #[arg(long, value_enum)]
    gens: Gens,
    #[arg(long)]
    max_len: usize,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, value_enum, default_value = "red-combi")]
    mode: RunMode,
    /// Store directory; a temporary one is used when omitted.
    #[arg(long)]
    store: Option<PathBuf>,
    /// Per-task memory estimate limit, in bytes.
    #[arg(long)]
    mem_cap: Option<u64>,
    /// Continue the run already in the store.
    #[arg(long)]
    resume: bool,
    #[arg(long, default_value_t = 2)]
    shard_depth: usize,
    /// Oracle only: limit on distinct braids held.
    #[arg(long)]
    node_cap: Option<usize>,
    /// Also write the s column, one value per line.
    #[arg(long)]
    s_out: Option<PathBuf>,
    /// Also write the g column, one value per line.
    #[arg(long)]
    g_out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    series: PathBuf,
    /// Largest numerator plus denominator degree tried.
    #[arg(long, default_value_t = 12)]
    max_degree: usize,
    /// Terms that must be reproduced beyond those the fit consumes.
    #[arg(long, default_value_t = 3)]
    surplus: usize,
}

#[derive(Args)]
struct VerifyArgs {
    series: PathBuf,
    /// Rational function in t, e.g. "(t+1)/((1-t)(1-2t))".
    #[arg(long)]
    function: String,
}

#[derive(Args)]
struct GoldenArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    store: Option<PathBuf>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }
    fn mismatch(message: impl Into<String>) -> Self {
        Failure { code: MISMATCH, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::StrandCount(_)
            | Error::LetterOutOfRange { .. }
            | Error::AlphabetMismatch(_)
            | Error::MapKind { .. }
            | Error::Series(_) => USAGE,
            _ => RESOURCE,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Enumerate(args) => enumerate(args),
        Command::Fit(args) => fit(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Check(args) => check(args),
        Command::Golden(args) => golden_cmd(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("braid-growth: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn alphabet(g: &GroupArgs) -> Result<Alphabet, Failure> {
    if g.workers == 0 {
        return Err(Failure::usage("--workers must be at least 1"));
    }
    let kind = match g.gens {
        Gens::Artin => Kind::Artin,
        Gens::Dual => Kind::Dual,
    };
    Ok(Alphabet::new(g.strands, kind)?)
}

fn config(g: &GroupArgs, mem_cap: Option<u64>, shard_depth: usize) -> EngineConfig {
    EngineConfig { workers: g.workers, mem_cap, shard_depth, interrupt_after: None }
}

/// A caller-supplied directory, or a fresh temporary one kept alive by the guard.
fn store_dir(store: Option<&Path>) -> Result<(PathBuf, Option<tempfile::TempDir>), Failure> {
    match store {
        Some(p) => Ok((p.to_path_buf(), None)),
        None => {
            let dir = tempfile::tempdir()
                .map_err(|e| Failure { code: RESOURCE, message: format!("temporary store: {e}") })?;
            Ok((dir.path().to_path_buf(), Some(dir)))
        }
    }
}

fn write_column(path: &Path, label: &str, values: &[u64]) -> Outcome {
    let text = Series::from_u64(label, values).to_text();
    fs::write(path, text).map_err(|e| Failure {
        code: RESOURCE,
        message: format!("{}: {e}", path.display()),
    })
}

fn run_engine(
    group: &GroupArgs,
    mode: Mode,
    store: Option<&Path>,
    resume: bool,
    mem_cap: Option<u64>,
    shard_depth: usize,
    with_templates: bool,
) -> Result<(GrowthTable, Vec<Vec<TemplateCount>>), Failure> {
    let a = alphabet(group)?;
    let (root, _guard) = store_dir(store)?;
    let cfg = config(group, mem_cap, shard_depth);
    let mut e = if resume {
        Enumerator::resume(&root, a, mode, cfg)?
    } else {
        if root.join(braid_growth::store::MANIFEST_NAME).exists() {
            return Err(Failure::usage(format!(
                "{} already holds a run; pass --resume or choose another directory",
                root.display()
            )));
        }
        Enumerator::create(&root, a, mode, cfg)?
    };
    let table = e.run(group.max_len)?;
    let levels = if with_templates { 0..=group.max_len } else { 1..=0 };
    let per_template = levels.map(|l| e.template_counts(l)).collect::<Result<Vec<_>, _>>()?;
    Ok((table, per_template))
}

fn enumerate(args: EnumerateArgs) -> Outcome {
    let table = match args.mode {
        RunMode::Oracle => {
            bfs_enumerate(alphabet(&args.group)?, args.group.max_len, args.node_cap)?.table
        }
        RunMode::Combi | RunMode::RedCombi => {
            let mode = if args.mode == RunMode::Combi { Mode::Combi } else { Mode::RedCombi };
            if args.store.is_none() && args.resume {
                return Err(Failure::usage("--resume needs --store"));
            }
            let store = args.store.as_deref();
            run_engine(&args.group, mode, store, args.resume, args.mem_cap, args.shard_depth, false)?.0
        }
    };
    print!("{table}");
    if let Some(p) = &args.s_out {
        write_column(p, "s", &table.s())?;
    }
    if let Some(p) = &args.g_out {
        write_column(p, "g", &table.g())?;
    }
    Ok(())
}

fn read_series(path: &Path) -> Result<Series, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure { code: RESOURCE, message: format!("{}: {e}", path.display()) })?;
    Ok(Series::parse(path.display().to_string(), &text)?)
}

fn fit(args: FitArgs) -> Outcome {
    let series = read_series(&args.series)?;
    match guess(&series.coeffs, args.max_degree, args.surplus)? {
        Some(r) => {
            println!("{r}");
            println!("num\t{}", join(r.num()));
            println!("den\t{}", join(r.den()));
            Ok(())
        }
        None => {
            println!("no rational fit");
            Err(Failure::mismatch(format!(
                "no fit of total degree ≤ {} reproduces {} terms",
                args.max_degree,
                series.len()
            )))
        }
    }
}

fn join<T: std::fmt::Display>(p: &[T]) -> String {
    p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn verify_cmd(args: VerifyArgs) -> Outcome {
    let series = read_series(&args.series)?;
    let r = RationalFn::parse(&args.function)?;
    let report = verify(&series, &r)?;
    println!("{report}");
    if report.is_match() {
        Ok(())
    } else {
        Err(Failure::mismatch("series disagrees with the function"))
    }
}

fn first_divergence(name: &str, reference: &GrowthTable, other: &GrowthTable) -> Option<String> {
    for (r, o) in reference.levels.iter().zip(&other.levels) {
        if r.s != o.s {
            return Some(format!("{name}: s({}) = {}, oracle {}", r.level, o.s, r.s));
        }
        if r.g != o.g {
            return Some(format!("{name}: g({}) = {}, oracle {}", r.level, o.g, r.g));
        }
    }
    None
}

fn check(args: GroupArgs) -> Outcome {
    if args.max_len > 7 {
        return Err(Failure::usage("check is limited to --max-len 7"));
    }
    let a = alphabet(&args)?;
    let oracle = bfs_enumerate(a, args.max_len, None)?;
    let mut problems = Vec::new();
    for (name, mode) in [("combi", Mode::Combi), ("red-combi", Mode::RedCombi)] {
        let (table, per_template) = run_engine(&args, mode, None, false, None, 2, true)?;
        problems.extend(first_divergence(name, &oracle.table, &table));
        for (level, (o, e)) in oracle.per_template.iter().zip(&per_template).enumerate() {
            if o != e {
                problems.push(format!("{name}: per-template counts differ at length {level}"));
                break;
            }
        }
    }
    print!("{}", oracle.table);
    if problems.is_empty() {
        log::info!("{a}: oracle, combi and red-combi agree through length {}", args.max_len);
        Ok(())
    } else {
        Err(Failure::mismatch(problems.join("; ")))
    }
}

fn golden_cmd(args: GoldenArgs) -> Outcome {
    let a = alphabet(&args.group)?;
    let len = args.group.max_len + 1;
    let (s_ref, g_ref) = golden::reference(a, len);
    if s_ref.is_none() && g_ref.is_none() {
        return Err(Failure::usage(format!("no published values for {a} up to length {}", len - 1)));
    }
    let (table, _) = run_engine(&args.group, Mode::RedCombi, args.store.as_deref(), false, None, 2, false)?;
    print!("{table}");
    let mut problems = Vec::new();
    for (col, computed, reference) in [("s", table.s(), s_ref), ("g", table.g(), g_ref)] {
        let Some(reference) = reference else { continue };
        if let Some(l) = (0..len).find(|&l| computed[l] != reference[l]) {
            problems.push(format!("{col}({l}) = {}, published {}", computed[l], reference[l]));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::mismatch(problems.join("; ")))
    }
}
