//! Command-line front end. [`run`] parses arguments, dispatches to the
//! engines and returns the process exit code:
//! 0 success, 1 verification failure, 2 input error, 3 resource cap.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use domrat_core::blockdsl::{self, DslError};
use domrat_core::checks::{self, CheckConfig, Expectations, Outcome};
use domrat_core::circulant::{self, CirculantError};
use domrat_core::generators::{GeneratorError, GeneratorSet};
use domrat_core::periodic::{PeriodicError, PeriodicSet};
use domrat_core::rational::Rational;
use domrat_core::stategraph::{self, RatioCertificate, State, StateGraphError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "domrat",
    version,
    about = "Exact domination ratios of integer distance digraphs"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Largest c = max(S∪{0}) − min(S∪{0}) the state graph accepts
    #[arg(long, global = true, env = "DOMRAT_C_MAX", default_value_t = stategraph::DEFAULT_C_MAX,
          value_parser = clap::value_parser!(u64).range(1..=stategraph::ABSOLUTE_C_MAX))]
    pub c_max: u64,
    /// Largest circulant order the exact solver accepts
    #[arg(long, global = true, default_value_t = circulant::DEFAULT_N_MAX,
          value_parser = clap::value_parser!(u64).range(1..=circulant::ABSOLUTE_N_MAX))]
    pub n_max: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also print a 6-digit decimal approximation of each ratio
    #[arg(long, global = true)]
    pub decimal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Domination ratio of Γ(ℤ,S) with a periodic witness
    Ratio {
        /// Generator sets such as "{1,-3}"
        #[arg(required = true, allow_hyphen_values = true)]
        sets: Vec<String>,
    },
    /// Domination number of the circulant Γ(ℤ_n, S mod n)
    Domnum {
        n: u64,
        #[arg(allow_hyphen_values = true)]
        set: String,
    },
    /// Whether Γ(ℤ,S) has an efficient dominating set
    Eds {
        #[arg(required = true, allow_hyphen_values = true)]
        sets: Vec<String>,
    },
    /// Block notation utilities
    Blocks {
        #[command(subcommand)]
        action: BlocksAction,
    },
    /// Least γ(ℤ_n, S_n)/n over n up to a limit
    Oracle {
        #[arg(allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        n_limit: u64,
    },
    /// Recompute the table of known results and report PASS/FAIL per row
    VerifyPaper,
}

#[derive(Debug, Subcommand)]
pub enum BlocksAction {
    /// Print the flattened block sizes
    Parse { dsl: String },
    /// Print the density of the set the blocks describe
    Density { dsl: String },
    /// Check whether the set the blocks describe dominates Γ(ℤ,S)
    Verify {
        dsl: String,
        #[arg(allow_hyphen_values = true)]
        set: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
    #[error("output failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Io(_) => EXIT_VERIFY,
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DslError> for CliError {
    fn from(e: DslError) -> Self {
        match e {
            DslError::SizeCap { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<StateGraphError> for CliError {
    fn from(e: StateGraphError) -> Self {
        match e {
            StateGraphError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            StateGraphError::EmptyGenerators => CliError::Input(e.to_string()),
        }
    }
}

impl From<CirculantError> for CliError {
    fn from(e: CirculantError) -> Self {
        match e {
            CirculantError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PeriodicError> for CliError {
    fn from(e: PeriodicError) -> Self {
        match e {
            PeriodicError::PeriodTooLarge { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl From<Rational> for Fraction {
    fn from(q: Rational) -> Self {
        Fraction {
            num: q.numer(),
            den: q.denom(),
        }
    }
}

fn decimal(q: Rational) -> String {
    format!("{:.6}", q.to_f64())
}

fn parse_set(text: &str) -> Result<GeneratorSet, CliError> {
    Ok(text.parse::<GeneratorSet>()?)
}

fn state_lists(cycle: &[State]) -> Vec<Vec<u64>> {
    cycle.iter().map(|t| t.positions()).collect()
}

fn state_text(t: &[u64]) -> String {
    let items: Vec<String> = t.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

/// Block notation of a witness and the position of its first element.
fn witness_blocks(w: &PeriodicSet) -> Result<(String, u64), CliError> {
    let start = *w.residues().first().ok_or(PeriodicError::NoElements)?;
    Ok((blockdsl::render(&w.to_blocks()?), start))
}

#[derive(Debug, Serialize)]
struct RatioRecord {
    set: Vec<i64>,
    a: u64,
    b: u64,
    c: u64,
    ratio: Fraction,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_decimal: Option<String>,
    period: u64,
    minimal_period: u64,
    period_bound: u128,
    period_bound_holds: bool,
    witness_blocks: String,
    witness_start: u64,
    cycle_states: Vec<Vec<u64>>,
    eds: bool,
}

#[derive(Debug, Serialize)]
struct RatioCsvRow {
    set: String,
    a: u64,
    b: u64,
    c: u64,
    ratio_num: i64,
    ratio_den: i64,
    period: u64,
    eds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_decimal: Option<String>,
}

fn ratio_record(
    gens: &GeneratorSet,
    cert: &RatioCertificate,
    eds: bool,
    cfg: &RunConfig,
) -> Result<RatioRecord, CliError> {
    let (blocks, start) = witness_blocks(&cert.witness)?;
    let (a, b, c) = gens.bounds();
    Ok(RatioRecord {
        set: gens.elements().to_vec(),
        a,
        b,
        c,
        ratio: cert.ratio.into(),
        ratio_decimal: cfg.decimal.then(|| decimal(cert.ratio)),
        period: cert.period,
        minimal_period: cert.minimal_period,
        period_bound: cert.period_bound(),
        period_bound_holds: cert.period as u128 <= cert.period_bound(),
        witness_blocks: blocks,
        witness_start: start,
        cycle_states: state_lists(&cert.cycle),
        eds,
    })
}

fn cmd_ratio(sets: &[String], cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let mut records = Vec::new();
    for text in sets {
        let gens = parse_set(text)?;
        let cert = stategraph::domination_ratio(&gens, cfg.c_max)?;
        let eds = stategraph::eds_exists(&gens, cfg.c_max)?.exists;
        records.push((gens.clone(), ratio_record(&gens, &cert, eds, cfg)?));
    }
    match cfg.format {
        Format::Json => {
            for (_, r) in &records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for (gens, r) in &records {
                w.serialize(RatioCsvRow {
                    set: gens.to_string(),
                    a: r.a,
                    b: r.b,
                    c: r.c,
                    ratio_num: r.ratio.num,
                    ratio_den: r.ratio.den,
                    period: r.period,
                    eds: r.eds,
                    ratio_decimal: r.ratio_decimal.clone(),
                })?;
            }
            w.flush()?;
        }
        Format::Text => {
            for (i, (gens, r)) in records.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "set: {gens}")?;
                writeln!(out, "bounds: a={} b={} c={}", r.a, r.b, r.c)?;
                writeln!(out, "ratio: {}/{}", r.ratio.num, r.ratio.den)?;
                if let Some(d) = &r.ratio_decimal {
                    writeln!(out, "ratio (decimal, approximate): {d}")?;
                }
                writeln!(out, "period: {} (minimal {})", r.period, r.minimal_period)?;
                let holds = if r.period_bound_holds {
                    "holds"
                } else {
                    "VIOLATED"
                };
                writeln!(out, "period bound c*2^c = {}: {holds}", r.period_bound)?;
                writeln!(
                    out,
                    "witness blocks: {} (first element at {})",
                    r.witness_blocks, r.witness_start
                )?;
                let states: Vec<String> = r.cycle_states.iter().map(|t| state_text(t)).collect();
                writeln!(out, "cycle states: {}", states.join(" "))?;
                writeln!(out, "efficient dominating set: {}", r.eds)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct DomnumRecord {
    n: u64,
    set: Vec<i64>,
    connection: Vec<u64>,
    gamma: u64,
    witness: Vec<u64>,
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_domnum(n: u64, text: &str, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let gens = parse_set(text)?;
    let inst = circulant::residues(&gens, n)?;
    let d = circulant::domination_number(&inst, cfg.n_max)?;
    let r = DomnumRecord {
        n,
        set: gens.elements().to_vec(),
        connection: inst.connection().iter().copied().collect(),
        gamma: d.gamma,
        witness: d.witness,
    };
    match cfg.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&r)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "set", "connection", "gamma", "witness"])?;
            w.write_record([
                n.to_string(),
                gens.to_string(),
                join(&r.connection),
                r.gamma.to_string(),
                join(&r.witness),
            ])?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "n: {n}")?;
            writeln!(out, "set: {gens}")?;
            writeln!(out, "connection: {}", join(&r.connection))?;
            writeln!(out, "gamma: {}", r.gamma)?;
            writeln!(out, "witness: {}", join(&r.witness))?;
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct EdsRecord {
    set: Vec<i64>,
    exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_blocks: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_start: Option<u64>,
    cycle_states: Vec<Vec<u64>>,
}

fn cmd_eds(sets: &[String], cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let mut records = Vec::new();
    for text in sets {
        let gens = parse_set(text)?;
        let res = stategraph::eds_exists(&gens, cfg.c_max)?;
        let blocks = res.witness.as_ref().map(witness_blocks).transpose()?;
        records.push((
            gens.clone(),
            EdsRecord {
                set: gens.elements().to_vec(),
                exists: res.exists,
                period: res.witness.as_ref().map(PeriodicSet::period),
                witness_start: blocks.as_ref().map(|b| b.1),
                witness_blocks: blocks.map(|b| b.0),
                cycle_states: state_lists(&res.cycle),
            },
        ));
    }
    match cfg.format {
        Format::Json => {
            for (_, r) in &records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["set", "eds", "period", "witness_blocks"])?;
            for (gens, r) in &records {
                w.write_record([
                    gens.to_string(),
                    r.exists.to_string(),
                    r.period.map_or(String::new(), |p| p.to_string()),
                    r.witness_blocks.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for (gens, r) in &records {
                match (&r.witness_blocks, r.period) {
                    (Some(b), Some(p)) => {
                        writeln!(out, "{gens}: true (period {p}, witness blocks {b})")?
                    }
                    _ => writeln!(out, "{gens}: false")?,
                }
            }
        }
    }
    Ok(())
}

fn cmd_blocks(action: &BlocksAction, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    match action {
        BlocksAction::Parse { dsl } => {
            let bs = blockdsl::parse_blocks(dsl)?;
            match cfg.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "sizes": bs.sizes(),
                        "count": bs.len(),
                        "period": bs.period(),
                    });
                    writeln!(out, "{v}")?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["count", "period", "sizes"])?;
                    w.write_record([
                        bs.len().to_string(),
                        bs.period().to_string(),
                        join(bs.sizes()),
                    ])?;
                    w.flush()?;
                }
                Format::Text => {
                    writeln!(out, "sizes: {}", join(bs.sizes()))?;
                    writeln!(out, "count: {}", bs.len())?;
                    writeln!(out, "period: {}", bs.period())?;
                }
            }
        }
        BlocksAction::Density { dsl } => {
            let bs = blockdsl::parse_blocks(dsl)?;
            let q = bs.density();
            let dec = cfg.decimal.then(|| decimal(q));
            match cfg.format {
                Format::Json => {
                    let mut v = serde_json::json!({ "density": Fraction::from(q) });
                    if let Some(d) = dec {
                        v["density_decimal"] = d.into();
                    }
                    writeln!(out, "{v}")?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    let mut header = vec!["density_num", "density_den"];
                    let mut row = vec![q.numer().to_string(), q.denom().to_string()];
                    if let Some(d) = dec {
                        header.push("density_decimal");
                        row.push(d);
                    }
                    w.write_record(header)?;
                    w.write_record(row)?;
                    w.flush()?;
                }
                Format::Text => {
                    writeln!(out, "{q}")?;
                    if let Some(d) = dec {
                        writeln!(out, "decimal (approximate): {d}")?;
                    }
                }
            }
        }
        BlocksAction::Verify { dsl, set } => {
            let bs = blockdsl::parse_blocks(dsl)?;
            let gens = parse_set(set)?;
            let ok = bs.to_periodic().verify_dominating(&gens)?;
            match cfg.format {
                Format::Json => writeln!(out, "{}", serde_json::json!({ "dominating": ok }))?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["dominating"])?;
                    w.write_record([ok.to_string()])?;
                    w.flush()?;
                }
                Format::Text => writeln!(out, "{ok}")?,
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct OracleRecord {
    set: Vec<i64>,
    n_limit: u64,
    ratio: Fraction,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_decimal: Option<String>,
    attained_at: u64,
    /// `None` when the state graph is beyond `c_max`.
    certified: Option<bool>,
    scanned: Vec<(u64, u64)>,
}

fn cmd_oracle(
    text: &str,
    n_limit: u64,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let gens = parse_set(text)?;
    let scan = circulant::ratio_oracle(&gens, n_limit, cfg.n_max)?;
    let certified = match stategraph::domination_ratio(&gens, cfg.c_max) {
        Ok(cert) => Some(scan.covers_period(cert.minimal_period)),
        Err(StateGraphError::CapExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let r = OracleRecord {
        set: gens.elements().to_vec(),
        n_limit,
        ratio: scan.ratio.into(),
        ratio_decimal: cfg.decimal.then(|| decimal(scan.ratio)),
        attained_at: scan.attained_at,
        certified,
        scanned: scan.scanned,
    };
    let cert_text = match r.certified {
        Some(true) => "certified",
        Some(false) => "upper bound only",
        None => "unknown",
    };
    match cfg.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&r)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec![
                "set",
                "n_limit",
                "ratio_num",
                "ratio_den",
                "attained_at",
                "certified",
            ];
            let mut row = vec![
                gens.to_string(),
                n_limit.to_string(),
                r.ratio.num.to_string(),
                r.ratio.den.to_string(),
                r.attained_at.to_string(),
                r.certified.map_or(String::new(), |c| c.to_string()),
            ];
            if let Some(d) = &r.ratio_decimal {
                header.push("ratio_decimal");
                row.push(d.clone());
            }
            w.write_record(header)?;
            w.write_record(row)?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "set: {gens}")?;
            writeln!(out, "ratio: {}/{} ({cert_text})", r.ratio.num, r.ratio.den)?;
            if let Some(d) = &r.ratio_decimal {
                writeln!(out, "ratio (decimal, approximate): {d}")?;
            }
            writeln!(out, "attained at n = {}", r.attained_at)?;
            let scanned: Vec<String> = r.scanned.iter().map(|(n, g)| format!("{n}:{g}")).collect();
            writeln!(out, "scanned n:gamma: {}", scanned.join(" "))?;
        }
    }
    Ok(())
}

fn cmd_verify_paper(
    cfg: &RunConfig,
    exp: &Expectations,
    out: &mut dyn Write,
) -> Result<bool, CliError> {
    let report = checks::run(
        &CheckConfig {
            c_max: cfg.c_max,
            n_max: cfg.n_max,
        },
        exp,
    );
    let detail = |o: &Outcome| match o {
        Outcome::Pass => ("PASS", String::new()),
        Outcome::Fail(d) => ("FAIL", d.clone()),
        Outcome::Skipped(d) => ("SKIPPED", d.clone()),
    };
    match cfg.format {
        Format::Json => {
            let rows: Vec<_> = report
                .rows
                .iter()
                .map(|r| {
                    let (status, why) = detail(&r.outcome);
                    serde_json::json!({ "status": status, "group": r.group, "label": r.label, "detail": why })
                })
                .collect();
            let v = serde_json::json!({
                "rows": rows,
                "passed": report.passed(),
                "failed": report.failed(),
                "skipped": report.skipped(),
            });
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["status", "group", "label", "detail"])?;
            for r in &report.rows {
                let (status, why) = detail(&r.outcome);
                w.write_record([status, r.group, &r.label, &why])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &report.rows {
                writeln!(out, "{r}")?;
            }
            writeln!(
                out,
                "{} passed, {} failed, {} skipped",
                report.passed(),
                report.failed(),
                report.skipped()
            )?;
        }
    }
    Ok(report.all_passed())
}

/// Runs a parsed command, comparing `verify-paper` against `exp`.
pub fn execute(cli: &Cli, exp: &Expectations, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Ratio { sets } => cmd_ratio(sets, cfg, out)?,
        Command::Domnum { n, set } => cmd_domnum(*n, set, cfg, out)?,
        Command::Eds { sets } => cmd_eds(sets, cfg, out)?,
        Command::Blocks { action } => cmd_blocks(action, cfg, out)?,
        Command::Oracle { set, n_limit } => cmd_oracle(set, *n_limit, cfg, out)?,
        Command::VerifyPaper => {
            if !cmd_verify_paper(cfg, exp, out)? {
                return Ok(EXIT_VERIFY);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, &Expectations::default(), out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
