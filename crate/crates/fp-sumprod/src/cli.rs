//! Command-line surface. Exit codes: 0 success, 1 usage error, 2 a check or
//! witness search failed (a predicate expected to hold came back false).

use crate::counting::mult_energy_j;
use crate::error::Result;
use crate::field_sets::{parse_set_text, FpSet, PrimeField};
use crate::harness::{self, ExperimentConfig, FamilySpec, OutputFormat};
use crate::lemma_engine::{
    check_plunnecke, check_ruzsa_triangle, find_big_witness, find_gk_witness, find_xi_witness,
    XiMode,
};
use crate::proof_trace::run_trace;
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "fp-sumprod", version, about = "Exact set arithmetic and sum-product verification in F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a set from a family and emit it in set text format.
    Gen {
        #[arg(long)]
        p: u64,
        /// random | interval | arithmetic-progression | geometric-progression | multiplicative-subgroup
        #[arg(long)]
        family: String,
        #[arg(long)]
        size: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        start: u64,
        #[arg(long, default_value_t = 1)]
        step: u64,
        #[arg(long, default_value_t = 0)]
        generator: u64,
        #[arg(long)]
        order: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Sumset of two set files.
    Sumset {
        #[arg(long = "set", num_args = 1, required = true)]
        sets: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Product set of two set files.
    Product {
        #[arg(long = "set", num_args = 1, required = true)]
        sets: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Difference set of two set files.
    Difference {
        #[arg(long = "set", num_args = 1, required = true)]
        sets: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Multiplicative energy J of a set, as JSON.
    Energy {
        #[arg(long = "set")]
        set: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Verify one of the five lemma predicates; emits a report as JSON.
    /// Lemma 1/2 take A1 [ambient]; lemma 3 takes X Y Z; lemma 4 takes X
    /// B1..Bk; lemma 5 takes X Y G.
    Lemma {
        number: u8,
        #[arg(long = "set", num_args = 1, required = true)]
        sets: Vec<PathBuf>,
        /// Slope search mode for lemma 5.
        #[arg(long, default_value = "direct")]
        mode: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the full executable inequality chain on a set; emits JSON.
    Trace {
        #[arg(long = "set")]
        set: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run an experiment sweep from a JSON config; emits CSV or JSON rows.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output format.
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
}

fn load_set(path: &PathBuf) -> Result<FpSet> {
    parse_set_text(&fs::read_to_string(path)?)
}

fn emit(out: &OutArg, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn usage_err(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    1
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // help/version are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => usage_err(&e.to_string()),
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Gen { p, family, size, seed, start, step, generator, order, out } => {
            let field = PrimeField::new(p)?;
            let spec = match family.as_str() {
                "random" => FamilySpec::Random { size: size.unwrap_or(0), seed },
                "interval" => FamilySpec::Interval { start, size: size.unwrap_or(0) },
                "arithmetic-progression" => {
                    FamilySpec::ArithmeticProgression { start, step, size: size.unwrap_or(0) }
                }
                "geometric-progression" => {
                    FamilySpec::GeometricProgression { start, generator, size: size.unwrap_or(0) }
                }
                "multiplicative-subgroup" => FamilySpec::MultiplicativeSubgroup {
                    order: order.or(size).unwrap_or(0),
                },
                other => {
                    return Ok(usage_err(&format!("unknown family `{other}`")));
                }
            };
            let set = harness::gen_family(field, &spec)?;
            emit(&out, &set.to_string())?;
            Ok(0)
        }
        Command::Sumset { sets, out } => binary_op(&sets, &out, |a, b| a.sumset(b)),
        Command::Product { sets, out } => binary_op(&sets, &out, |a, b| a.productset(b)),
        Command::Difference { sets, out } => binary_op(&sets, &out, |a, b| a.difference(b)),
        Command::Energy { set, out } => {
            let a = load_set(&set)?;
            let rep = mult_energy_j(&a)?;
            let (lhs, rhs) = rep.bound_sides.as_ref().unwrap();
            let doc = serde_json::json!({
                "value": rep.value.to_string(),
                "method": "direct",
                "bound": {
                    "lhs": crate::rats::RatParts::from(lhs),
                    "rhs": crate::rats::RatParts::from(rhs),
                },
            });
            emit(&out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))?;
            Ok(0)
        }
        Command::Lemma { number, sets, mode, out } => run_lemma(number, &sets, &mode, &out),
        Command::Trace { set, out } => {
            let a = load_set(&set)?;
            let trace = run_trace(&a)?;
            emit(&out, &format!("{}\n", serde_json::to_string_pretty(&trace).unwrap()))?;
            Ok(if trace.all_pass() { 0 } else { 2 })
        }
        Command::Sweep { config, format, out } => {
            let mut cfg: ExperimentConfig = serde_json::from_str(&fs::read_to_string(&config)?)
                .map_err(|e| crate::error::Error::Parse(e.to_string()))?;
            match format.as_deref() {
                Some("csv") => cfg.output_format = OutputFormat::Csv,
                Some("json") => cfg.output_format = OutputFormat::Json,
                Some(other) => return Ok(usage_err(&format!("unknown format `{other}`"))),
                None => {}
            }
            let rows = harness::run_sweep(&cfg)?;
            let text = match cfg.output_format {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    harness::write_csv(&rows, &mut buf)?;
                    String::from_utf8(buf).unwrap()
                }
                OutputFormat::Json => format!("{}\n", harness::rows_to_json(&rows)),
            };
            emit(&out, &text)?;
            let failed = rows
                .iter()
                .any(|r| r.branch == "error" || r.trace_pass == Some(false));
            Ok(if failed { 2 } else { 0 })
        }
    }
}

fn binary_op(
    sets: &[PathBuf],
    out: &OutArg,
    op: impl Fn(&FpSet, &FpSet) -> Result<FpSet>,
) -> Result<i32> {
    if sets.len() != 2 {
        return Ok(usage_err("expected exactly two --set files"));
    }
    let a = load_set(&sets[0])?;
    let b = load_set(&sets[1])?;
    emit(out, &op(&a, &b)?.to_string())?;
    Ok(0)
}

fn run_lemma(number: u8, sets: &[PathBuf], mode: &str, out: &OutArg) -> Result<i32> {
    let loaded: Vec<FpSet> = sets.iter().map(load_set).collect::<Result<_>>()?;
    match (number, loaded.as_slice()) {
        (1, [a1]) => witness_json(find_gk_witness(a1, a1), out),
        (1, [a1, ambient]) => witness_json(find_gk_witness(a1, ambient), out),
        (2, [a1]) => witness_json(find_big_witness(a1, a1), out),
        (2, [a1, ambient]) => witness_json(find_big_witness(a1, ambient), out),
        (3, [x, y, z]) => inequality_json(check_ruzsa_triangle(x, y, z)?, out),
        (4, [x, rest @ ..]) if !rest.is_empty() => {
            inequality_json(check_plunnecke(x, rest)?, out)
        }
        (5, [x, y, g]) => {
            let mode = match mode {
                "direct" => XiMode::Direct,
                "proof-following" => XiMode::ProofFollowing,
                other => return Ok(usage_err(&format!("unknown mode `{other}`"))),
            };
            witness_json(find_xi_witness(x, y, g, mode), out)
        }
        (1..=5, _) => Ok(usage_err("wrong number of --set files for this lemma")),
        _ => Ok(usage_err("lemma number must be 1..=5")),
    }
}

fn witness_json(res: Result<crate::lemma_engine::WitnessReport>, out: &OutArg) -> Result<i32> {
    match res {
        Ok(w) => {
            emit(out, &format!("{}\n", serde_json::to_string_pretty(&w).unwrap()))?;
            Ok(0)
        }
        Err(crate::error::Error::WitnessNotFound { samples }) => {
            eprintln!("no witness found after {samples} samples");
            Ok(2)
        }
        Err(e) => Err(e),
    }
}

fn inequality_json(rep: crate::lemma_engine::InequalityReport, out: &OutArg) -> Result<i32> {
    emit(out, &format!("{}\n", serde_json::to_string_pretty(&rep).unwrap()))?;
    Ok(if rep.holds { 0 } else { 2 })
}
