//! Command-line front end for the flange library: convert free
//! resolutions to flat-injective presentation files, answer rank and
//! Hilbert-function queries from any presentation kind, validate inputs,
//! and dualize presentations.
//!
//! Exit codes: 0 success, 1 input or structure error, 2 query error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use flange::cech::{flange_presentation, Strategy};
use flange::oracle::{
    default_box, expand_free, hilbert_csv, random_box_sum, rank_fip, rank_free, rank_injective,
    GradeBox, RankQuery,
};
use flange::scc_io::{
    parse_fip, parse_fip_matrix, parse_scc2020, validate_resolution, write_fip,
    FlatInjectivePresentation,
};
use flange::{Fp, FreeResolution, GradedMatrix};

#[derive(Parser)]
#[command(name = "flange", version, about = "Flat-injective presentations and rank invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a flat-injective presentation from an scc2020 resolution.
    Convert {
        /// Input scc2020 file.
        #[arg(short = 'i', value_name = "PATH")]
        input: PathBuf,
        /// Output fip file.
        #[arg(short = 'o', value_name = "PATH")]
        output: PathBuf,
        /// Field characteristic (default: FLANGE_FIELD, then 2).
        #[arg(long, value_name = "P")]
        field: Option<u32>,
        /// Evaluation strategy.
        #[arg(long, value_enum, default_value_t = StrategyArg::Contraction)]
        strategy: StrategyArg,
        /// Treat generator indices in the input as one-based.
        #[arg(long)]
        one_based: bool,
    },
    /// Print one rank-invariant value from a presentation file.
    Rank {
        /// Presentation file: scc2020 for `free`, fip container otherwise.
        #[arg(short = 'p', value_name = "PATH")]
        presentation: PathBuf,
        /// How to read the file.
        #[arg(long, value_enum)]
        kind: Kind,
        /// Source grade, comma-separated integers.
        #[arg(long, value_name = "CSV")]
        from: String,
        /// Target grade, comma-separated integers.
        #[arg(long, value_name = "CSV")]
        to: String,
    },
    /// Validate an scc2020 resolution and print its structure report.
    Check {
        /// Input scc2020 file.
        #[arg(short = 'i', value_name = "PATH")]
        input: PathBuf,
    },
    /// Print the Hilbert function over a grade box as CSV.
    Hilbert {
        /// Input scc2020 file.
        #[arg(short = 'i', value_name = "PATH")]
        input: PathBuf,
        /// Box corners as `lo1,..,lon:hi1,..,hin`.
        #[arg(long = "box", value_name = "CSV:CSV")]
        bounds: String,
    },
    /// Write the presentation of the Matlis dual: the graded transpose.
    Dualize {
        /// Input fip file.
        #[arg(short = 'i', value_name = "PATH")]
        input: PathBuf,
        /// Output fip file.
        #[arg(short = 'o', value_name = "PATH")]
        output: PathBuf,
    },
    /// Run the built-in regression and random cross-checks.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Contraction,
    Preimage,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Contraction => Strategy::Contraction,
            StrategyArg::Preimage => Strategy::Preimage,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Free presentation: the first differential of an scc2020 file.
    Free,
    /// Flat-injective presentation matrix (anti-valid).
    Fip,
    /// Injective copresentation matrix (valid); the module is its kernel.
    Inj,
}

/// An error carrying its process exit code; 1 for input and structure
/// problems, 2 for malformed or unsatisfiable queries.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn query(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<flange::SccError> for Failure {
    fn from(e: flange::SccError) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<flange::cech::PipelineError> for Failure {
    fn from(e: flange::cech::PipelineError) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<flange::oracle::QueryError> for Failure {
    fn from(e: flange::oracle::QueryError) -> Failure {
        Failure::query(e.to_string())
    }
}

impl From<flange::FieldError> for Failure {
    fn from(e: flange::FieldError) -> Failure {
        Failure::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Convert {
            input,
            output,
            field,
            strategy,
            one_based,
        } => cmd_convert(&input, &output, field, strategy.into(), one_based),
        Command::Rank {
            presentation,
            kind,
            from,
            to,
        } => cmd_rank(&presentation, kind, &from, &to),
        Command::Check { input } => cmd_check(&input),
        Command::Hilbert { input, bounds } => cmd_hilbert(&input, &bounds),
        Command::Dualize { input, output } => cmd_dualize(&input, &output),
        Command::Selftest => cmd_selftest(),
    }
}

/// `--field`, then `FLANGE_FIELD`, then 2.
fn resolve_field(flag: Option<u32>) -> Result<Fp, Failure> {
    let p = match flag {
        Some(p) => p,
        None => match std::env::var("FLANGE_FIELD") {
            Ok(s) => s.parse().map_err(|_| {
                Failure::input(format!("field error: FLANGE_FIELD is not an integer: {s:?}"))
            })?,
            Err(_) => 2,
        },
    };
    Ok(Fp::new(p)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("file error: {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::input(format!("file error: {}: {e}", path.display())))
}

fn read_resolution(path: &Path, field: Fp, one_based: bool) -> Result<FreeResolution, Failure> {
    Ok(parse_scc2020(&read(path)?, field, one_based)?)
}

/// Comma-separated integers.
fn parse_coords(text: &str) -> Result<Vec<i64>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Failure::query(format!("query error: bad coordinate {t:?}")))
        })
        .collect()
}

/// The first differential, or the empty relation matrix of a free module.
fn first_differential(res: &FreeResolution) -> GradedMatrix {
    if res.length() >= 1 {
        res.differential(1).clone()
    } else {
        GradedMatrix::zero(res.field(), res.params(), res.grades(0).to_vec(), vec![])
    }
}

fn cmd_convert(
    input: &Path,
    output: &Path,
    field: Option<u32>,
    strategy: Strategy,
    one_based: bool,
) -> Result<String, Failure> {
    let field = resolve_field(field)?;
    let res = read_resolution(input, field, one_based)?;
    let phi = flange_presentation(&res, strategy)?;
    write(output, &write_fip(&phi))?;
    let m = phi.matrix();
    Ok(format!(
        "rows: {}\ncols: {}\nzero rows: {}\nzero cols: {}\n",
        m.nrows(),
        m.ncols(),
        m.zero_row_indices().len(),
        m.zero_col_indices().len()
    ))
}

fn cmd_rank(path: &Path, kind: Kind, from: &str, to: &str) -> Result<String, Failure> {
    let z = parse_coords(from)?;
    let zp = parse_coords(to)?;
    if z.len() != zp.len() {
        return Err(Failure::query(format!(
            "query error: grades have {} and {} coordinates",
            z.len(),
            zp.len()
        )));
    }
    let check_params = |n: usize| -> Result<(), Failure> {
        if z.len() != n {
            return Err(Failure::query(format!(
                "query error: query has {} coordinates, the presentation has {n}",
                z.len()
            )));
        }
        Ok(())
    };
    let value = match kind {
        Kind::Free => {
            let res = read_resolution(path, resolve_field(None)?, false)?;
            check_params(res.params())?;
            let q = RankQuery::from_coords(&z, &zp)?;
            rank_free(&first_differential(&res), &q)
        }
        Kind::Fip => {
            let phi = parse_fip(&read(path)?)?;
            check_params(phi.params())?;
            let q = RankQuery::from_coords(&z, &zp)?;
            rank_fip(phi.matrix(), &q)
        }
        Kind::Inj => {
            let w = parse_fip_matrix(&read(path)?)?;
            if !w.is_valid() {
                return Err(Failure::input(
                    "validity error: an injective copresentation matrix must be valid",
                ));
            }
            check_params(w.params())?;
            let q = RankQuery::from_coords(&z, &zp)?;
            rank_injective(&w, &q)
        }
    };
    Ok(format!("{value}\n"))
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_check(input: &Path) -> Result<String, Failure> {
    let res = read_resolution(input, resolve_field(None)?, false)?;
    let report = validate_resolution(&res);
    let mut out = String::new();
    out.push_str(&format!("parameters: {}\n", report.parameters));
    out.push_str(&format!("field: {}\n", report.characteristic));
    let sizes: Vec<String> = report.block_sizes.iter().map(|s| s.to_string()).collect();
    out.push_str(&format!("blocks: {}\n", sizes.join(" ")));
    for m in &report.matrices {
        out.push_str(&format!(
            "d{}: {}x{}, valid: {}, minimal: {}",
            m.degree,
            m.rows,
            m.cols,
            yn(m.valid),
            yn(m.minimal)
        ));
        if let Some(c) = m.composes_to_zero {
            out.push_str(&format!(", d{}*d{}=0: {}", m.degree, m.degree + 1, yn(c)));
        }
        out.push('\n');
    }
    let ok = report.all_valid && report.all_minimal && report.all_compositions_zero;
    out.push_str(&format!(
        "valid: {}, minimal: {}, d∘d=0: {}\n",
        yn(report.all_valid),
        yn(report.all_minimal),
        yn(report.all_compositions_zero)
    ));
    if !ok {
        print!("{out}");
        return Err(Failure::input(
            "structure error: the resolution fails a structural invariant",
        ));
    }
    Ok(out)
}

fn cmd_hilbert(input: &Path, bounds: &str) -> Result<String, Failure> {
    let res = read_resolution(input, resolve_field(None)?, false)?;
    let Some((lo, hi)) = bounds.split_once(':') else {
        return Err(Failure::query(format!(
            "query error: box {bounds:?} is not of the form lo1,..:hi1,.."
        )));
    };
    let (lo, hi) = (parse_coords(lo)?, parse_coords(hi)?);
    let n = res.params();
    if lo.len() != n || hi.len() != n {
        return Err(Failure::query(format!(
            "query error: box corners need {n} coordinates"
        )));
    }
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Err(Failure::query("query error: box corners out of order"));
    }
    let pm = expand_free(&first_differential(&res), &GradeBox::new(lo, hi));
    Ok(hilbert_csv(&pm))
}

fn cmd_dualize(input: &Path, output: &Path) -> Result<String, Failure> {
    let phi = parse_fip(&read(input)?)?;
    let dual = FlatInjectivePresentation::new(phi.matrix().graded_transpose())
        .expect("the graded transpose of an anti-valid matrix is anti-valid");
    write(output, &write_fip(&dual))?;
    Ok(String::new())
}

/// A field-deployable sanity check: the pinned worked example plus the
/// master property (free = flat-injective = pointwise = closed form) on
/// twenty seeded box sums over both standard characteristics.
fn cmd_selftest() -> Result<String, Failure> {
    let f = Fp::new(32003).expect("32003 is prime");
    let res = flange::corpus::staircase_resolution(f);
    let phi = flange_presentation(&res, Strategy::Contraction)?;
    if phi.matrix() != &flange::corpus::staircase_presentation(f) {
        return Err(Failure::input(
            "selftest error: the worked example no longer reproduces",
        ));
    }
    for p in [2, 32003] {
        let field = Fp::new(p).expect("standard characteristics are prime");
        for seed in 0..20u64 {
            let sum = random_box_sum(seed, 1 + (seed as usize) % 8, 0..=6, field);
            let d1 = sum.resolution.differential(1);
            let phi = flange_presentation(&sum.resolution, Strategy::Contraction)?;
            let bounds = default_box(sum.resolution.all_grades(), 2);
            let pm = expand_free(d1, &bounds);
            for (z, zp) in bounds.comparable_pairs() {
                let q = RankQuery::from_coords(&z, &zp)?;
                let want = sum.closed_rank(&q);
                let free = rank_free(d1, &q);
                let fip = rank_fip(phi.matrix(), &q);
                let oracle = pm.rank(&q)?;
                if free != want || fip != want || oracle != want {
                    return Err(Failure::input(format!(
                        "selftest error: p={p}, seed {seed}, {q:?}: \
                         closed {want}, free {free}, fip {fip}, oracle {oracle}"
                    )));
                }
            }
        }
    }
    Ok("selftest: ok\n".into())
}
