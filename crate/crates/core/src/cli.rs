//! Command-line front end.
//!
//! Exit codes: 0 success or accept, 1 reject, 2 usage or parameter error,
//! 3 guardrail exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::attack::{
    best_substitution_strategy_with, default_forgery, run_impersonation_traced, run_substitution_traced, trace_csv,
    AttackOutcome, SubstitutionStrategy,
};
use crate::auth::{decode_message, encode_message, generate_tag, read_key_file, sample_key, verify, write_key_file, AuthConfig, Message};
use crate::bits::BitVector;
use crate::deception::{
    p_deception_from_definitions_with, p_substitution_bruteforce_with, p_substitution_closed_form, render_table,
    to_dec4, DeceptionReport, Limits, RECORD_HEADER,
};
use crate::error::Error;
use crate::rm_code::{RmCode, SubcodeParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARDRAIL: i32 = 3;

/// Widely reproduced `P_S` values for `r=1, M=4, l=3`, `m = 4..=8`.
const PUBLISHED_TABLE: [(u32, &str); 5] = [
    (4, "0.4000"),
    (5, "0.3817"),
    (6, "0.3810"),
    (7, "0.3780"),
    (8, "0.3765"),
];

#[derive(Debug, Parser)]
#[command(
    name = "rmacode",
    version,
    about = "Reed-Muller projective authentication codes: keys, tags and deception probabilities"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Blocklength exponent, n = 2^m
    #[arg(long = "m", global = true)]
    pub m: Option<u32>,

    /// Reed-Muller order
    #[arg(long = "r", global = true)]
    pub r: Option<u32>,

    /// Source length in bits
    #[arg(long = "M", global = true)]
    pub source_len: Option<usize>,

    /// Tag length in bits
    #[arg(long = "l", global = true)]
    pub tag_len: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Brute,
    Definition,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttackArg {
    Impersonation,
    Substitution,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute P_I and P_S
    Analyze {
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Range of m to sweep, e.g. `m=4..8` (inclusive)
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Sample a key and write a key file
    Keygen {
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tag a source and print the message as hex
    Tag {
        #[arg(long)]
        key: PathBuf,
        /// Source bits, MSB-first hex
        #[arg(long)]
        source: String,
    },
    /// Check a message; exits 0 on accept, 1 on reject
    Verify {
        #[arg(long)]
        key: PathBuf,
        /// Message (source then tag bits), MSB-first hex
        #[arg(long)]
        message: String,
    },
    /// Monte-Carlo run of an attack game
    Simulate {
        #[arg(long, value_enum)]
        attack: AttackArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Source offset for the substitution attack, MSB-first hex
        #[arg(long = "delta-s")]
        delta_s: Option<String>,
        /// Tag offset for the substitution attack, MSB-first hex
        #[arg(long = "delta-t")]
        delta_t: Option<String>,
        /// Write a per-trial CSV trace to this file
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Print the full authentication matrix as CSV
    Authmatrix,
}

/// Command failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Guardrail { .. } => EXIT_GUARDRAIL,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let g = &cli.global;
    let limits = Limits::from_env()?;
    match &cli.command {
        Command::Analyze { method, sweep } => cmd_analyze(g, *method, sweep.as_deref(), &limits, out),
        Command::Keygen { out: path } => cmd_keygen(g, path.as_ref(), out),
        Command::Tag { key, source } => cmd_tag(g, key, source, out),
        Command::Verify { key, message } => cmd_verify(g, key, message, out),
        Command::Simulate {
            attack,
            trials,
            delta_s,
            delta_t,
            trace,
        } => cmd_simulate(
            g,
            *attack,
            *trials,
            delta_s.as_deref(),
            delta_t.as_deref(),
            trace.as_ref(),
            &limits,
            out,
        ),
        Command::Authmatrix => cmd_authmatrix(g, &limits, out),
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::usage(format!("missing required flag --{flag}")))
}

fn config_from(g: &GlobalOpts, m: Option<u32>) -> CliResult<AuthConfig> {
    let m = require(m.or(g.m), "m")?;
    let r = require(g.r, "r")?;
    let source_len = require(g.source_len, "M")?;
    let tag_len = require(g.tag_len, "l")?;
    Ok(AuthConfig::rm(m, r, source_len, tag_len)?)
}

/// Parses MSB-first hex for a `len`-bit value. Short strings are
/// left-padded with `0` digits up to whole bytes.
pub fn parse_hex_bits(hex: &str, len: usize) -> CliResult<BitVector> {
    let digits = hex.trim();
    let digits = digits.strip_prefix("0x").unwrap_or(digits);
    let want = 2 * len.div_ceil(8);
    if digits.len() > want {
        return Err(CliError::usage(format!(
            "hex value {hex:?} is longer than the {want} digits needed for {len} bits"
        )));
    }
    let padded = format!("{}{digits}", "0".repeat(want - digits.len()));
    Ok(BitVector::from_hex(&padded, len)?)
}

fn parse_sweep(spec: &str) -> CliResult<(u32, u32)> {
    let bad = || CliError::usage(format!("--sweep expects m=<a>..<b>, got {spec:?}"));
    let range = spec.strip_prefix("m=").ok_or_else(bad)?;
    let (a, b) = range.split_once("..").ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

struct AnalyzeRow {
    reports: Vec<DeceptionReport>,
    notes: Vec<String>,
}

fn analyze_one(config: &AuthConfig, method: MethodArg, limits: &Limits) -> CliResult<AnalyzeRow> {
    let (code, params) = (config.code(), config.params());
    let mut reports = Vec::new();
    let mut notes = Vec::new();
    let all = method == MethodArg::All;
    let mut attempt = |result: crate::error::Result<DeceptionReport>, name: &str| -> CliResult<()> {
        match result {
            Ok(rep) => reports.push(rep),
            Err(e) if all => notes.push(format!("m={} {name}: skipped ({e})", code.m())),
            Err(e) => return Err(e.into()),
        }
        Ok(())
    };
    if matches!(method, MethodArg::Closed | MethodArg::All) {
        attempt(p_substitution_closed_form(code, params), "closed_form")?;
    }
    if matches!(method, MethodArg::Brute | MethodArg::All) {
        attempt(p_substitution_bruteforce_with(code, params, limits), "bruteforce_simplified")?;
    }
    if matches!(method, MethodArg::Definition | MethodArg::All) {
        attempt(p_deception_from_definitions_with(code, params, limits), "bruteforce_definition")?;
    }
    Ok(AnalyzeRow { reports, notes })
}

/// Footnote for a report whose `P_S` disagrees with the published table row.
fn table_discrepancy(rep: &DeceptionReport) -> Option<String> {
    if (rep.r, rep.source_len, rep.tag_len) != (1, 4, 3) {
        return None;
    }
    let (_, printed) = PUBLISHED_TABLE.iter().find(|(m, _)| *m == rep.m)?;
    let computed = to_dec4(&rep.p_s);
    (computed != *printed).then(|| {
        format!(
            "m={}: exact P_S = {} = {computed}; the commonly reproduced table value {printed} \
             looks like a digit transposition",
            rep.m,
            crate::deception::to_exact(&rep.p_s)
        )
    })
}

fn cmd_analyze(
    g: &GlobalOpts,
    method: MethodArg,
    sweep: Option<&str>,
    limits: &Limits,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let ms: Vec<Option<u32>> = match sweep {
        Some(spec) => {
            let (a, b) = parse_sweep(spec)?;
            (a..=b).map(Some).collect()
        }
        None => vec![None],
    };
    let mut reports = Vec::new();
    let mut notes = Vec::new();
    for m in ms {
        let config = config_from(g, m)?;
        let row = analyze_one(&config, method, limits)?;
        reports.extend(row.reports);
        notes.extend(row.notes);
    }
    let mut flags = Vec::new();
    for rep in &reports {
        if let Some(note) = table_discrepancy(rep) {
            if !flags.contains(&note) {
                flags.push(note);
            }
        }
    }

    match g.output {
        Output::Text => {
            let table = render_table(&reports);
            for (i, line) in table.lines().enumerate() {
                let flagged = i > 0 && table_discrepancy(&reports[i - 1]).is_some();
                writeln!(out, "{line}{}", if flagged { " *" } else { "" })?;
            }
            for f in &flags {
                writeln!(out, "* {f}")?;
            }
            for n in &notes {
                writeln!(out, "note: {n}")?;
            }
        }
        Output::Json => {
            let records: Vec<_> = reports
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r.record()).expect("records serialize");
                    v["flag"] = json!(table_discrepancy(r));
                    v
                })
                .collect();
            let doc = json!({ "reports": records, "notes": notes });
            writeln!(out, "{}", serde_json::to_string(&doc).expect("json serializes"))?;
        }
        Output::Csv => {
            writeln!(out, "{},flag", RECORD_HEADER.replace(' ', ","))?;
            for r in &reports {
                let flag = if table_discrepancy(r).is_some() { "*" } else { "" };
                writeln!(out, "{},{flag}", r.record_line().replace(' ', ","))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_keygen(g: &GlobalOpts, path: Option<&PathBuf>, out: &mut dyn Write) -> CliResult<i32> {
    let config = config_from(g, None)?;
    let key = sample_key(&config, g.seed);
    let text = write_key_file(&config, &key);
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn load_key(g: &GlobalOpts, path: &PathBuf) -> CliResult<(AuthConfig, crate::auth::AuthKey)> {
    let text = fs::read_to_string(path)?;
    let (header, key) = read_key_file(&text)?;
    let checks = [
        ("m", g.m.map(|v| v as usize), header.m as usize),
        ("r", g.r.map(|v| v as usize), header.r as usize),
        ("M", g.source_len, header.source_len),
        ("l", g.tag_len, header.tag_len),
    ];
    for (flag, given, stored) in checks {
        if let Some(v) = given {
            if v != stored {
                return Err(CliError::usage(format!(
                    "--{flag} {v} disagrees with the key file ({flag}={stored})"
                )));
            }
        }
    }
    let config = AuthConfig::rm(header.m, header.r, header.source_len, header.tag_len)?;
    if key.k1().iter().any(|&i| i >= config.n()) {
        return Err(CliError::usage("key file k1 does not match the blocklength"));
    }
    Ok((config, key))
}

fn cmd_tag(g: &GlobalOpts, key_path: &PathBuf, source: &str, out: &mut dyn Write) -> CliResult<i32> {
    let (config, key) = load_key(g, key_path)?;
    let s = parse_hex_bits(source, config.source_len())?;
    let t = generate_tag(&config, &s, &key)?;
    let bytes = encode_message(&Message::new(s, t));
    writeln!(out, "{}", bytes.iter().map(|b| format!("{b:02x}")).collect::<String>())?;
    Ok(EXIT_OK)
}

fn cmd_verify(g: &GlobalOpts, key_path: &PathBuf, message: &str, out: &mut dyn Write) -> CliResult<i32> {
    let (config, key) = load_key(g, key_path)?;
    let bits = parse_hex_bits(message, config.source_len() + config.tag_len())?;
    let msg = decode_message(&bits.to_bytes(), &config)?;
    if verify(&config, &msg, &key)? {
        writeln!(out, "accept")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "reject")?;
        Ok(EXIT_REJECT)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    g: &GlobalOpts,
    attack: AttackArg,
    trials: u64,
    delta_s: Option<&str>,
    delta_t: Option<&str>,
    trace_path: Option<&PathBuf>,
    limits: &Limits,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let config = config_from(g, None)?;
    let (outcome, trace): (AttackOutcome, Vec<bool>) = match attack {
        AttackArg::Impersonation => {
            if delta_s.is_some() || delta_t.is_some() {
                return Err(CliError::usage("--delta-s/--delta-t apply only to --attack substitution"));
            }
            run_impersonation_traced(&config, &default_forgery(&config), trials, g.seed)?
        }
        AttackArg::Substitution => {
            let strategy = match (delta_s, delta_t) {
                (None, None) => best_substitution_strategy_with(&config, limits)?.0,
                (Some(ds), dt) => {
                    let ds = parse_hex_bits(ds, config.source_len())?;
                    let dt = match dt {
                        Some(dt) => parse_hex_bits(dt, config.tag_len())?,
                        None => BitVector::zeros(config.tag_len()),
                    };
                    SubstitutionStrategy::new(ds, dt)?
                }
                (None, Some(_)) => return Err(CliError::usage("--delta-t requires --delta-s")),
            };
            run_substitution_traced(&config, &strategy, trials, g.seed)?
        }
    };
    if let Some(p) = trace_path {
        fs::write(p, trace_csv(&trace))?;
    }
    match g.output {
        Output::Text => writeln!(out, "{}", outcome.record_line())?,
        Output::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&outcome.record()).expect("json serializes")
        )?,
        Output::Csv => {
            let rec = outcome.record();
            writeln!(out, "attack,m,r,M,l,trials,seed,successes,rate,reference,z")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{:.4}",
                outcome.attack,
                rec.m,
                rec.r,
                rec.source_len,
                rec.l,
                rec.trials,
                rec.seed,
                rec.successes,
                rec.rate_dec4,
                rec.reference,
                rec.z
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_authmatrix(g: &GlobalOpts, limits: &Limits, out: &mut dyn Write) -> CliResult<i32> {
    let config = config_from(g, None)?;
    let code: &RmCode = config.code();
    let params: &SubcodeParams = config.params();
    let matrix = crate::deception::authentication_matrix_with(code, params, limits)?;
    out.write_all(matrix.to_csv().as_bytes())?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["rmacode"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn analyze_closed_form_table_two_column() {
        let (code, out, _) = run_str(&["analyze", "--m", "4", "--r", "1", "--M", "4", "--l", "3", "--method", "closed"]);
        assert_eq!(code, 0);
        assert!(out.contains("0.1250"));
        assert!(out.contains("0.4000"));
    }

    #[test]
    fn sweep_flags_the_m5_row() {
        let (code, out, _) = run_str(&[
            "analyze", "--sweep", "m=4..8", "--r", "1", "--M", "4", "--l", "3", "--method", "closed",
        ]);
        assert_eq!(code, 0);
        let rows: Vec<&str> = out.lines().filter(|l| l.contains("closed_form")).collect();
        assert_eq!(rows.len(), 5);
        assert!(rows[1].contains("0.3871") && rows[1].ends_with('*'));
        assert!(!rows[0].ends_with('*'));
        assert!(out.contains("0.3817"));
    }

    #[test]
    fn hex_parsing() {
        assert_eq!(parse_hex_bits("40", 2).unwrap().to_string(), "01");
        assert_eq!(parse_hex_bits("0", 2).unwrap().to_string(), "00");
        assert!(parse_hex_bits("400", 2).is_err());
        assert!(parse_hex_bits("41", 2).is_err());
    }

    #[test]
    fn sweep_parsing() {
        assert_eq!(parse_sweep("m=4..8").unwrap(), (4, 8));
        assert!(parse_sweep("4..8").is_err());
        assert!(parse_sweep("m=8..4").is_err());
    }

    #[test]
    fn missing_flags_is_usage_error() {
        let (code, _, err) = run_str(&["analyze", "--m", "4"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--r"));
    }

    #[test]
    fn guardrail_exit_code() {
        let (code, _, _) = run_str(&["analyze", "--m", "8", "--r", "1", "--M", "4", "--l", "3", "--method", "definition"]);
        assert_eq!(code, EXIT_GUARDRAIL);
    }

    #[test]
    fn zero_offset_is_usage_error() {
        let (code, _, err) = run_str(&[
            "simulate", "--attack", "substitution", "--m", "2", "--r", "1", "--M", "2", "--l", "1", "--delta-s", "0",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("nonzero"));
    }
}
