use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ginv_core::decomp::{core_ep, hs_decompose, matrix_index};
use ginv_core::inverses::{self, InverseKind, Route};
use ginv_core::io::{self, Format};
use ginv_core::numkit::{mat_pow, rank_with_scale, spectral_norm};
use ginv_core::verify::{self, Candidate, InstanceSpec, Selection};
use ginv_core::{ComplexMatrix, Error, Tolerance};

/// Generalized inverses of square complex matrices.
#[derive(Parser)]
#[command(name = "ginv", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Relative singular value cutoff for rank decisions.
    #[arg(long, global = true, env = "GINV_RANK_TOL")]
    rank_tol: Option<f64>,
    /// Absolute part of the matrix equality threshold.
    #[arg(long, global = true, env = "GINV_EQ_ABS")]
    eq_abs: Option<f64>,
    /// Relative part of the matrix equality threshold.
    #[arg(long, global = true, env = "GINV_EQ_REL")]
    eq_rel: Option<f64>,
    /// File format, overriding the file extension.
    #[arg(long, global = true, value_enum)]
    format: Option<FileFormat>,
    /// Only print errors.
    #[arg(long, short, global = true, conflicts_with = "debug")]
    quiet: bool,
    /// Print extra diagnostics, including failing check witnesses.
    #[arg(long, global = true)]
    debug: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FileFormat {
    Csv,
    Json,
}

impl From<FileFormat> for Format {
    fn from(f: FileFormat) -> Self {
        match f {
            FileFormat::Csv => Format::Csv,
            FileFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verbosity {
    Quiet,
    Normal,
    Debug,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a generalized inverse.
    Compute {
        input: PathBuf,
        #[arg(long, value_parser = ["mp", "group", "drazin", "core", "core-ep", "dmp", "wg", "mwg", "wc", "mwc"])]
        kind: String,
        /// Order for mwg and mwc.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_parser = ["def", "canonical", "hs"])]
        route: Option<String>,
        /// Output file; the matrix goes to standard output when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print the index of a square matrix.
    Index { input: PathBuf },
    /// Write the blocks of a decomposition to a directory.
    Decompose {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "core-ep")]
        which: Which,
        #[arg(long)]
        outdir: PathBuf,
    },
    /// Run the identity and equivalence checks.
    Verify {
        input: PathBuf,
        /// Orders to check; defaults to 1 through index + 2.
        #[arg(long, value_delimiter = ',')]
        m: Vec<usize>,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
    /// Generate a random matrix with prescribed index and rank(A^k).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Upper bound on the condition number of the nonsingular block.
        #[arg(long, default_value_t = 100.0)]
        cap: f64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    CoreEp,
    Hs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    All,
    Props,
    Equalities,
    Special,
    Maximal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    Dmp,
    Perturb,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

fn classify(e: Error) -> Failure {
    let code = match &e {
        Error::Parse { .. } | Error::InvalidArgument(_) => EXIT_USAGE,
        e if e.is_precondition() => EXIT_PRECONDITION,
        _ => EXIT_NUMERIC,
    };
    Failure::new(code, e.to_string())
}

struct Ctx {
    tol: Tolerance,
    format: Option<Format>,
    verbosity: Verbosity,
}

impl Ctx {
    fn from_global(g: &Global) -> Result<Self, Failure> {
        let d = Tolerance::default();
        let tol = Tolerance::new(
            g.rank_tol.unwrap_or(d.rank_rel),
            g.eq_abs.unwrap_or(d.eq_abs),
            g.eq_rel.unwrap_or(d.eq_rel),
        )
        .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
        let verbosity = if g.quiet {
            Verbosity::Quiet
        } else if g.debug {
            Verbosity::Debug
        } else {
            Verbosity::Normal
        };
        Ok(Ctx {
            tol,
            format: g.format.map(Format::from),
            verbosity,
        })
    }

    fn read(&self, path: &Path) -> Result<ComplexMatrix, Failure> {
        io::read_file(path, self.format).map_err(|e| match e {
            Error::Io(msg) => Failure::new(EXIT_USAGE, format!("cannot read input: {msg}")),
            Error::Parse { .. } => Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())),
            other => classify(other),
        })
    }

    fn write(&self, path: Option<&Path>, m: &ComplexMatrix) -> Result<(), Failure> {
        let out = |e: Error| match e {
            Error::InvalidArgument(_) => Failure::new(EXIT_USAGE, e.to_string()),
            other => Failure::new(EXIT_NUMERIC, format!("cannot write output: {other}")),
        };
        match path {
            Some(p) => io::write_file(p, m, self.format).map_err(out),
            None => {
                let text = io::write(m, self.format.unwrap_or(Format::Csv)).map_err(out)?;
                print!("{text}");
                if !text.ends_with('\n') {
                    println!();
                }
                Ok(())
            }
        }
    }

    fn info(&self, msg: impl fmt::Display) {
        if self.verbosity != Verbosity::Quiet {
            eprintln!("{msg}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let ctx = Ctx::from_global(&cli.global)?;
    match cli.command {
        Command::Compute {
            input,
            kind,
            m,
            route,
            out,
        } => compute(&ctx, &input, &kind, m, route.as_deref(), out.as_deref()),
        Command::Index { input } => {
            let a = ctx.read(&input)?;
            let k = matrix_index(&a, &ctx.tol).map_err(classify)?;
            println!("{k}");
            Ok(0)
        }
        Command::Decompose { input, which, outdir } => decompose(&ctx, &input, which, &outdir),
        Command::Verify {
            input,
            m,
            suite,
            inject_fault,
        } => run_verify(&ctx, &input, m, suite, inject_fault),
        Command::Random {
            n,
            t,
            index,
            seed,
            cap,
            out,
        } => random(&ctx, n, t, index, seed, cap, out.as_deref()),
    }
}

fn compute(
    ctx: &Ctx,
    input: &Path,
    kind: &str,
    m: Option<usize>,
    route: Option<&str>,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let kind = InverseKind::parse(kind, m).map_err(classify)?;
    kind.validate().map_err(classify)?;
    let route = route.map(Route::parse).transpose().map_err(classify)?.unwrap_or(Route::CoreEpCanonical);
    let a = ctx.read(input)?;
    let result = inverses::compute_with_diagnostics(&a, kind, route, &ctx.tol).map_err(classify)?;
    for w in &result.warnings {
        ctx.info(format!("warning: {w}"));
    }
    ctx.write(out, &result.matrix)?;
    Ok(0)
}

fn decompose(ctx: &Ctx, input: &Path, which: Which, outdir: &Path) -> Result<u8, Failure> {
    let a = ctx.read(input)?;
    let format = ctx.format.unwrap_or(Format::Csv);
    let (blocks, manifest) = match which {
        Which::CoreEp => {
            let d = core_ep(&a, &ctx.tol).map_err(classify)?;
            let manifest = serde_json::json!({ "t": d.t_size, "index": d.index });
            (
                vec![("U", d.u), ("T", d.t_block), ("S", d.s_block), ("N", d.n_block)],
                manifest,
            )
        }
        Which::Hs => {
            let h = hs_decompose(&a, &ctx.tol).map_err(classify)?;
            let manifest = serde_json::json!({ "r": h.r_size });
            (
                vec![("U", h.u), ("Sigma", h.sigma), ("K", h.k_block), ("L", h.l_block)],
                manifest,
            )
        }
    };
    let io_fail = |e: std::io::Error| Failure::new(EXIT_NUMERIC, format!("cannot write to {}: {e}", outdir.display()));
    std::fs::create_dir_all(outdir).map_err(io_fail)?;
    for (name, block) in &blocks {
        if block.rows() == 0 || block.cols() == 0 {
            continue;
        }
        let path = outdir.join(format!("{name}.{}", format.extension()));
        io::write_file(&path, block, Some(format)).map_err(|e| Failure::new(EXIT_NUMERIC, e.to_string()))?;
    }
    std::fs::write(outdir.join("manifest.json"), format!("{manifest}\n")).map_err(io_fail)?;
    ctx.info(format!("wrote {} to {}", manifest, outdir.display()));
    Ok(0)
}

fn run_verify(ctx: &Ctx, input: &Path, m: Vec<usize>, suite: Suite, fault: Option<Fault>) -> Result<u8, Failure> {
    let a = ctx.read(input)?;
    if !a.is_square() {
        return Err(classify(Error::NotSquare {
            op: "verify",
            rows: a.rows(),
            cols: a.cols(),
        }));
    }
    if m.contains(&0) {
        return Err(Failure::new(EXIT_USAGE, "m must be at least 1"));
    }
    let m_values = if m.is_empty() {
        let k = matrix_index(&a, &ctx.tol).map_err(classify)?;
        (1..=k + 2).collect()
    } else {
        m
    };
    let selection = match suite {
        Suite::All => Selection::All,
        Suite::Props => Selection::Props,
        Suite::Equalities => Selection::Equalities,
        Suite::Special => Selection::Special,
        Suite::Maximal => Selection::Maximal,
    };
    let candidate = match fault {
        None => Candidate::MWeakCore,
        Some(Fault::Dmp) => Candidate::Dmp,
        Some(Fault::Perturb) => Candidate::Perturbed(1e-3),
    };
    let reports = verify::run_suite_with(&a, &m_values, &ctx.tol, selection, candidate);
    let mut failed = 0;
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{}\t{status}\t{:e}", r.name, r.residual);
        if !r.passed {
            failed += 1;
            if ctx.verbosity == Verbosity::Debug {
                eprintln!("  {} (threshold {:e})", r.detail, r.threshold);
                if let Some(w) = &r.witness {
                    eprintln!("  witness: {w:?}");
                }
            }
        }
    }
    ctx.info(format!("{} checks, {failed} failed", reports.len()));
    Ok(if failed == 0 { 0 } else { EXIT_VERIFY })
}

fn random(ctx: &Ctx, n: usize, t: usize, index: usize, seed: u64, cap: f64, out: Option<&Path>) -> Result<u8, Failure> {
    let spec = InstanceSpec {
        n,
        t,
        index,
        seed,
        condition_cap: cap,
    };
    let a = verify::generate(&spec).map_err(classify)?;
    let k = matrix_index(&a, &ctx.tol).map_err(classify)?;
    let scale = spectral_norm(&a, &ctx.tol).map_err(classify)?;
    let ak = mat_pow(&a, k).map_err(classify)?;
    let r = rank_with_scale(&ak, &ctx.tol, scale.powi(k as i32)).map_err(classify)?;
    ctx.write(out, &a)?;
    if out.is_some() {
        println!("index {k}");
        println!("rank {r}");
    } else {
        ctx.info(format!("index {k}"));
        ctx.info(format!("rank {r}"));
    }
    Ok(0)
}
