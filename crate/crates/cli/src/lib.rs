//! Command-line front end: expression parsing, identity generation,
//! verification, evaluation, coactions and cache management.

pub mod expr;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use mzv_core::identities::{self, Identity, IdentityError};
use mzv_core::motivic::{self, MotivicError};
use mzv_core::numerics::{self, cache, Ball, ConstantCache, NumericsError, Precision};

use crate::expr::{parse, Expr, ParseError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mzv",
    version,
    about = "Alternating multiple zeta values: identities, verification and coactions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression to a guaranteed ball.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long)]
        json: bool,
    },
    /// List or print identity generators.
    #[command(subcommand)]
    Identity(IdentityCommand),
    /// Verify an identity numerically; exit 0 iff it passes.
    Verify {
        name: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long)]
        json: bool,
    },
    /// Apply the derivation D_r to the motivic lift of an expression.
    Coaction {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        r: usize,
        /// Reduce weight-one left factors to multiples of log 2 (r = 1 only).
        #[arg(long)]
        reduce: bool,
        /// Print every cut term without merging.
        #[arg(long, conflicts_with = "reduce")]
        raw: bool,
    },
    /// Inspect or clear the on-disk constant cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Debug, Subcommand)]
pub enum IdentityCommand {
    List,
    Show {
        name: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheCommand {
    Stats {
        #[arg(long, env = "MZV_CACHE_DIR", default_value = "./mzv-cache")]
        dir: PathBuf,
    },
    Clear {
        #[arg(long, env = "MZV_CACHE_DIR", default_value = "./mzv-cache")]
        dir: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub l: i64,
    /// Argument of the depth-one family.
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    pub n: i64,
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    #[arg(long, env = "MZV_DIGITS", default_value_t = 40)]
    pub digits: u32,
    #[arg(
        long = "cache-dir",
        env = "MZV_CACHE_DIR",
        default_value = "./mzv-cache"
    )]
    pub cache_dir: PathBuf,
    /// Keep evaluated constants in memory only.
    #[arg(long)]
    pub no_cache: bool,
}

impl NumericArgs {
    fn precision(&self) -> Result<Precision, CliError> {
        Precision::new(self.digits).map_err(|e| CliError::Usage(e.to_string()))
    }

    fn cache(&self) -> Result<ConstantCache, CliError> {
        if self.no_cache {
            Ok(ConstantCache::in_memory())
        } else {
            Ok(ConstantCache::open(&self.cache_dir)?)
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Motivic(#[from] MotivicError),
    #[error("{0} is divergent; write it with zr(…) to regularize")]
    Divergent(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => EXIT_USAGE,
            CliError::Identity(IdentityError::Parameter { .. } | IdentityError::UnknownName(_)) => {
                EXIT_USAGE
            }
            _ => EXIT_FAIL,
        }
    }
}

/// JSON form of a ball: midpoint to `digits + 5` places and a radius bound.
pub fn ball_json(ball: &Ball, digits: u32) -> Value {
    json!({
        "mid": ball.mid_decimal(digits as usize + 5),
        "rad": format!("{:.3e}", ball.rad_f64()),
        "rad_log2": ball.rad_log2(),
        "prec_bits": ball.prec(),
    })
}

fn ball_text(ball: &Ball, digits: u32) -> String {
    format!("{:.*}", digits as usize + 5, ball)
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_PASS,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Eval {
            expr,
            numeric,
            json,
        } => eval(&expr, &numeric, json, out),
        Command::Identity(IdentityCommand::List) => {
            for name in identities::NAMES {
                writeln!(out, "{name}")?;
            }
            Ok(EXIT_PASS)
        }
        Command::Identity(IdentityCommand::Show { name, params, json }) => {
            let id = identities::by_name(&name, params.k, params.l, params.n)?;
            if json {
                out.write_all(id.to_json_string().as_bytes())?;
            } else {
                writeln!(out, "{}", identity_text(&id))?;
            }
            Ok(EXIT_PASS)
        }
        Command::Verify {
            name,
            params,
            numeric,
            json,
        } => {
            let id = identities::by_name(&name, params.k, params.l, params.n)?;
            let precision = numeric.precision()?;
            let report = numerics::eval_identity_cached(&id, &precision, &numeric.cache()?)?;
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("json")
                )?;
            } else {
                writeln!(
                    out,
                    "{}{}: {} (residual {})",
                    id.name,
                    params_text(&id),
                    if report.pass { "PASS" } else { "FAIL" },
                    ball_text(&report.residual, report.digits)
                )?;
            }
            Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Coaction {
            expr,
            r,
            reduce,
            raw,
        } => coaction(&expr, r, reduce, raw, out),
        Command::Cache(CacheCommand::Stats { dir }) => {
            let path = dir.join(cache::CACHE_FILE);
            let records = if path.exists() {
                cache::read_records(&path)?
            } else {
                Vec::new()
            };
            let mut keys: Vec<&str> = records.iter().map(|r| r.key.as_str()).collect();
            keys.sort_unstable();
            keys.dedup();
            let max_bits = records.iter().map(|r| r.prec_bits).max().unwrap_or(0);
            writeln!(out, "file: {}", path.display())?;
            writeln!(out, "records: {}", records.len())?;
            writeln!(out, "keys: {}", keys.len())?;
            writeln!(out, "max_prec_bits: {max_bits}")?;
            Ok(EXIT_PASS)
        }
        Command::Cache(CacheCommand::Clear { dir }) => {
            if cache::clear(&dir)? {
                writeln!(out, "removed {}", dir.join(cache::CACHE_FILE).display())?;
            } else {
                writeln!(out, "nothing to remove")?;
            }
            Ok(EXIT_PASS)
        }
    }
}

fn params_text(id: &Identity) -> String {
    if id.params.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = id.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("({})", parts.join(", "))
}

fn identity_text(id: &Identity) -> String {
    format!(
        "{}{}: {} = 0",
        id.name,
        params_text(id),
        Expr::from_comb(&id.combination)
    )
}

fn eval(
    src: &str,
    numeric: &NumericArgs,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let e = parse(src)?;
    if let Some(d) = e.first_divergent() {
        return Err(CliError::Divergent(d));
    }
    let precision = numeric.precision()?;
    let comb = e.to_comb();
    let value = numerics::eval_comb(&comb, &precision, &numeric.cache()?)?;
    let canonical = Expr::from_comb(&comb).to_string();
    if json {
        let mut v = ball_json(&value, precision.digits());
        v["expr"] = json!(canonical);
        v["digits"] = json!(precision.digits());
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
    } else {
        writeln!(out, "{}", ball_text(&value, precision.digits()))?;
    }
    Ok(EXIT_PASS)
}

fn coaction(
    src: &str,
    r: usize,
    reduce: bool,
    raw: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let e = parse(src)?;
    if reduce && r != 1 {
        return Err(CliError::Usage("--reduce applies to --r 1 only".into()));
    }
    if r == 0 {
        return Err(CliError::Usage("--r must be at least 1".into()));
    }
    let id = Identity::from_combination("expr", e.to_comb());
    if raw {
        for (mono, c) in id.combination.iter() {
            let (sign, words) = motivic::lift_monomial(mono);
            for w in &words {
                let Some(word) = w.as_word() else { continue };
                for t in motivic::coaction_dr_raw(&word, r)? {
                    writeln!(
                        out,
                        "[{}] {} * {} ⊗ {}",
                        t.position,
                        c * mzv_core::Rational::from_integer(sign.into()),
                        t.left,
                        t.right
                    )?;
                }
            }
        }
        return Ok(EXIT_PASS);
    }
    if reduce {
        let reduced = motivic::reduce_d1_identity(&id)?;
        if reduced.is_zero() {
            writeln!(out, "0")?;
        }
        for (right, c) in reduced.iter() {
            writeln!(out, "{c} * log2 ⊗ {right}")?;
        }
    } else {
        let tensor = motivic::coaction_dr_identity(&id, r)?;
        if tensor.is_zero() {
            writeln!(out, "0")?;
        }
        for ((left, right), c) in tensor.iter() {
            writeln!(out, "{c} * {left} ⊗ {right}")?;
        }
    }
    Ok(EXIT_PASS)
}
