//! Command-line surface for the birkhoff library: reads potentials and
//! block alphabets as JSON, emits analysis results as single-line JSON on
//! stdout (curves as CSV files), and keeps every run reproducible — fixed
//! field order, floats always printed with 17 significant digits, no
//! environment-dependent behavior.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use birkhoff::constructions::{
    derevealize, example23, example_indicator, lemma45, lemma53, remark55_biased,
    remark55_majority, theorem41, theorem52_table, StaircaseParams,
};
use birkhoff::debruijn::{endpoints, Side};
use birkhoff::dimension::{eggleston_dimension, moran_dimension, BlockAlphabet};
use birkhoff::oracle::{
    counting_lambda, enumerate_cycle_means, lemma53_cover_check, sample_trajectory, uniform_n0,
};
use birkhoff::shift::{PccFunction, SymbolFunction};
use birkhoff::thermo::{endpoint_dimension, norm_continuity_check, one_sided_slopes, spectrum_curve};

/// Reference-grid resolution used by `check norm-continuity`.
const CONTINUITY_GRID: usize = 33;

#[derive(Parser)]
#[command(
    name = "birkhoff",
    version,
    about = "Birkhoff spectra of locally constant potentials on the binary full shift",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Support endpoints of the averages with periodic witnesses
    Endpoints {
        /// Potential as JSON {"depth": k, "values": [2^k floats]}
        #[arg(long)]
        input: PathBuf,
    },
    /// Spectrum curve sampled on a uniform grid, written as CSV
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        /// Number of grid points (at least 3)
        #[arg(long)]
        grid: usize,
        /// Output CSV path ("alpha,s" per line)
        #[arg(long)]
        out: PathBuf,
    },
    /// Hausdorff dimension of the level set at one support endpoint
    EndpointDim {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
    },
    /// One-sided chord slopes of the curve at a support endpoint
    Derivative {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Strictly decreasing offsets, comma-separated
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<f64>,
    },
    /// Generators for the explicit potentials and perturbations
    Construct {
        #[command(subcommand)]
        what: ConstructCmd,
    },
    /// Brute-force ground-truth computations
    Oracle {
        #[command(subcommand)]
        what: OracleCmd,
    },
    /// Dimension formulas for self-similar sets
    Dim {
        #[command(subcommand)]
        what: DimCmd,
    },
    /// Property checks on pairs of potentials
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Frequency-of-ones potential: depth 1, table [0, 1]
    #[command(name = "example-indicator")]
    ExampleIndicator,
    /// Antisymmetric depth-3 potential with endpoints (-2, 2)
    #[command(name = "example23")]
    Example23,
    /// Majority-of-(2k+1)-symbols potential
    #[command(name = "majority")]
    Majority {
        #[arg(long)]
        k: usize,
    },
    /// Depth-k potential rewarding everything but the all-zeros word
    #[command(name = "biased")]
    Biased {
        #[arg(long)]
        k: usize,
    },
    /// Two-valued potential raised on the all-ones cylinder of length L
    #[command(name = "lemma53")]
    Lemma53 {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long = "L")]
        l: usize,
    },
    /// Staircase potential with prescribed run lengths per level
    #[command(name = "thm52")]
    Thm52 {
        /// Number of levels; must match the length of --L
        #[arg(long)]
        levels: usize,
        /// Strictly increasing run lengths, comma-separated
        #[arg(long = "L", value_delimiter = ',', required = true)]
        l: Vec<u64>,
    },
    /// Two-block bump construction; prints the block metadata as JSON
    #[command(name = "thm41")]
    Thm41 {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        eps: f64,
        /// Override for the repetition count (must stay admissible)
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Orbit-distance perturbation collapsing the top endpoint dimension
    #[command(name = "lemma45")]
    Lemma45 {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        eps: f64,
        /// Truncation depth for the orbit-distance profile
        #[arg(long)]
        depth: usize,
    },
    /// Single-cylinder bump separating the endpoint from the maximum
    #[command(name = "derevealize")]
    Derevealize {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Every periodic mean up to a period cap
    Cycles {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "max-period")]
        max_period: usize,
    },
    /// Window-counting spectrum estimate at one average
    Count {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long = "N")]
        n: usize,
    },
    /// Combinatorial cover bound for the raised-cylinder family
    Cover {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        beta: f64,
        #[arg(long = "N")]
        n: usize,
    },
    /// Uniformity threshold for finite averages
    N0 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
    },
    /// Running Birkhoff averages along a seeded random configuration
    Sample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long = "N")]
        n: usize,
    },
}

#[derive(Subcommand)]
enum DimCmd {
    /// Dimension of the free-concatenation set over binary blocks
    Moran {
        /// Alphabet as JSON {"blocks": [[0,1,...], ...]}
        #[arg(long)]
        blocks: PathBuf,
    },
    /// Binary-entropy dimension of a digit frequency
    Eggleston {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Sup-norm stability of the spectrum between two potentials
    NormContinuity {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        /// Window radius; requires the sup distance to stay below it
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Min,
    Max,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Min => Side::Min,
            SideArg::Max => Side::Max,
        }
    }
}

impl SideArg {
    fn name(self) -> &'static str {
        match self {
            SideArg::Min => "min",
            SideArg::Max => "max",
        }
    }
}

// ---------------------------------------------------------------------------
// JSON input / output plumbing

#[derive(Serialize, Deserialize)]
struct PccJson {
    depth: usize,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct BlocksJson {
    blocks: Vec<Vec<u8>>,
}

fn read_pcc(path: &Path) -> Result<PccFunction> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let parsed: PccJson = serde_json::from_str(&text)
        .with_context(|| format!("{} is not valid potential JSON", path.display()))?;
    Ok(PccFunction::new(parsed.depth, parsed.values)?)
}

fn read_blocks(path: &Path) -> Result<BlockAlphabet> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let parsed: BlocksJson = serde_json::from_str(&text)
        .with_context(|| format!("{} is not valid block-alphabet JSON", path.display()))?;
    Ok(BlockAlphabet::new(parsed.blocks)?)
}

/// serde_json formatter pinning every float to 17 significant digits so
/// identical inputs always produce byte-identical outputs. Non-finite
/// values (possible for degenerate counting estimates) print as null.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        value: f64,
    ) -> std::io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    std::io::stdout().write_all(&buf)?;
    Ok(())
}

fn print_pcc(f: &PccFunction) -> Result<()> {
    print_json(&PccJson { depth: f.depth(), values: f.table().to_vec() })
}

#[derive(Serialize)]
struct EndpointsOut {
    alpha_star_min: f64,
    alpha_star_max: f64,
    witness_min: Vec<u8>,
    witness_max: Vec<u8>,
}

#[derive(Serialize)]
struct EndpointDimOut {
    side: &'static str,
    dimension: f64,
}

#[derive(Serialize)]
struct DerivativeOut {
    side: &'static str,
    deltas: Vec<f64>,
    slopes: Vec<f64>,
}

#[derive(Serialize)]
struct Thm41Out {
    eps: f64,
    k_a: usize,
    ell: usize,
    m: usize,
    a_word: Vec<u8>,
    b_word: Vec<u8>,
    x_word: Vec<u8>,
    y_word: Vec<u8>,
    b_star: f64,
    alpha_star_max_base: f64,
}

#[derive(Serialize)]
struct CycleOut {
    word: Vec<u8>,
    mean: f64,
}

#[derive(Serialize)]
struct CyclesOut {
    max_period: usize,
    cycles: Vec<CycleOut>,
}

#[derive(Serialize)]
struct CountOut {
    alpha: f64,
    delta: f64,
    n: usize,
    lambda: f64,
}

#[derive(Serialize)]
struct CoverOut {
    l: usize,
    beta: f64,
    n: usize,
    bound: f64,
    exact_count: u64,
    pass: bool,
}

#[derive(Serialize)]
struct N0Out {
    eps: f64,
    n0: usize,
}

#[derive(Serialize)]
struct SampleOut {
    seed: u64,
    n: usize,
    averages: Vec<f64>,
}

#[derive(Serialize)]
struct MoranOut {
    dimension: f64,
}

#[derive(Serialize)]
struct EgglestonOut {
    alpha: f64,
    dimension: f64,
}

#[derive(Serialize)]
struct ContinuityOut {
    pass: bool,
    worst_gap: f64,
}

// ---------------------------------------------------------------------------
// Subcommand bodies

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Endpoints { input } => {
            let f = read_pcc(&input)?;
            let ep = endpoints(&f)?;
            print_json(&EndpointsOut {
                alpha_star_min: ep.alpha_star_min,
                alpha_star_max: ep.alpha_star_max,
                witness_min: ep.witness_min.period_word().to_vec(),
                witness_max: ep.witness_max.period_word().to_vec(),
            })
        }
        Cmd::Spectrum { input, grid, out } => {
            let f = read_pcc(&input)?;
            let curve = spectrum_curve(&f, grid)?;
            let mut csv = String::from("alpha,s\n");
            for (alpha, s) in &curve.samples {
                csv.push_str(&format!("{alpha:.16e},{s:.16e}\n"));
            }
            std::fs::write(&out, csv)
                .with_context(|| format!("cannot write {}", out.display()))?;
            Ok(())
        }
        Cmd::EndpointDim { input, side } => {
            let f = read_pcc(&input)?;
            let dimension = endpoint_dimension(&f, side.into())?;
            print_json(&EndpointDimOut { side: side.name(), dimension })
        }
        Cmd::Derivative { input, side, deltas } => {
            let f = read_pcc(&input)?;
            let curve = spectrum_curve(&f, 3)?;
            let slopes = one_sided_slopes(&curve, side.into(), &deltas)?;
            print_json(&DerivativeOut { side: side.name(), deltas, slopes })
        }
        Cmd::Construct { what } => run_construct(what),
        Cmd::Oracle { what } => run_oracle(what),
        Cmd::Dim { what } => match what {
            DimCmd::Moran { blocks } => {
                let alphabet = read_blocks(&blocks)?;
                print_json(&MoranOut { dimension: moran_dimension(&alphabet)? })
            }
            DimCmd::Eggleston { alpha } => {
                print_json(&EgglestonOut { alpha, dimension: eggleston_dimension(alpha)? })
            }
        },
        Cmd::Check { what } => match what {
            CheckCmd::NormContinuity { f, g, eps } => {
                let pf = read_pcc(&f)?;
                let pg = read_pcc(&g)?;
                let report = norm_continuity_check(&pf, &pg, eps, CONTINUITY_GRID)?;
                print_json(&ContinuityOut { pass: report.pass, worst_gap: report.worst_gap })
            }
        },
    }
}

fn run_construct(what: ConstructCmd) -> Result<()> {
    match what {
        ConstructCmd::ExampleIndicator => print_pcc(&example_indicator()),
        ConstructCmd::Example23 => print_pcc(&example23()),
        ConstructCmd::Majority { k } => print_pcc(&remark55_majority(k)?),
        ConstructCmd::Biased { k } => print_pcc(&remark55_biased(k)?),
        ConstructCmd::Lemma53 { a, b, l } => print_pcc(&lemma53(a, b, l)?),
        ConstructCmd::Thm52 { levels, l } => {
            if l.len() != levels {
                bail!("--levels says {levels} but --L lists {} run lengths", l.len());
            }
            let params = StaircaseParams::new(l, None)?;
            print_pcc(&theorem52_table(&params)?)
        }
        ConstructCmd::Thm41 { base, eps, ell } => {
            let f = read_pcc(&base)?;
            let c = theorem41(&f, eps, ell)?;
            print_json(&Thm41Out {
                eps: c.eps,
                k_a: c.a_word.len(),
                ell: c.ell,
                m: c.m,
                a_word: c.a_word.clone(),
                b_word: c.b_word.clone(),
                x_word: c.x_word.clone(),
                y_word: c.y_word.clone(),
                b_star: c.b_star,
                alpha_star_max_base: c.alpha_star_max_base,
            })
        }
        ConstructCmd::Lemma45 { base, eps, depth } => {
            let f = read_pcc(&base)?;
            print_pcc(&lemma45(&f, eps, depth)?)
        }
        ConstructCmd::Derevealize { base, eps } => {
            let f = read_pcc(&base)?;
            print_pcc(&derevealize(&f, eps)?)
        }
    }
}

fn run_oracle(what: OracleCmd) -> Result<()> {
    match what {
        OracleCmd::Cycles { input, max_period } => {
            let f = read_pcc(&input)?;
            let cycles = enumerate_cycle_means(&f, max_period)?
                .into_iter()
                .map(|(p, mean)| CycleOut { word: p.period_word().to_vec(), mean })
                .collect();
            print_json(&CyclesOut { max_period, cycles })
        }
        OracleCmd::Count { input, alpha, delta, n } => {
            let f = read_pcc(&input)?;
            let lambda = counting_lambda(&f, alpha, delta, n)?;
            print_json(&CountOut { alpha, delta, n, lambda })
        }
        OracleCmd::Cover { a, b, l, beta, n } => {
            let report = lemma53_cover_check(a, b, l, beta, n)?;
            print_json(&CoverOut {
                l,
                beta,
                n,
                bound: report.bound,
                exact_count: report.exact_count,
                pass: report.pass,
            })
        }
        OracleCmd::N0 { input, eps } => {
            let f = read_pcc(&input)?;
            print_json(&N0Out { eps, n0: uniform_n0(&f, eps)? })
        }
        OracleCmd::Sample { input, seed, n } => {
            let f = SymbolFunction::from(read_pcc(&input)?);
            let averages = sample_trajectory(&f, seed, n)?;
            print_json(&SampleOut { seed, n, averages })
        }
    }
}

/// Collapses a possibly multi-line error into the single-line
/// `error: …` form every failure path must emit.
fn error_line(msg: &str) -> String {
    let flat = msg
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("; ");
    match flat.strip_prefix("error: ") {
        Some(rest) => format!("error: {rest}"),
        None => format!("error: {flat}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            // keep only the message line; clap's usage block is multi-line
            let first = e.to_string().lines().next().unwrap_or("bad arguments").to_string();
            eprintln!("{}", error_line(&first));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // chain the anyhow contexts into one line
            let chained = e.chain().map(|c| c.to_string()).collect::<Vec<_>>().join(": ");
            eprintln!("{}", error_line(&chained));
            ExitCode::FAILURE
        }
    }
}
