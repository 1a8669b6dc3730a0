//! Command-line front end for the relay caching simulator.
//!
//! `parse_config` turns arguments (and an optional TOML file) into a validated
//! [`ExperimentConfig`]; `execute` runs it and reports an exit status.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use relaycache::harness::{
    auto_file_bytes, comparison_ratios, required_divisor, rows_to_csv, sweep, to_f64,
    verify_all_demands, Params, Prepared, VerificationReport, VerifyMode, EXHAUSTIVE_CAP,
};
use relaycache::topology::{affine_plane, combination_network};
use relaycache::{DemandVector, FileLibrary, Network, Rational, SchemeId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "relaycache",
    version,
    about = "Coded caching over resolvable relay networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Build, validate and print a network.
    Topology,
    /// Run one demand vector and dump the transmission log and report.
    Run,
    /// Check decoding over all (or sampled) demand vectors.
    Verify,
    /// Formula and measured rates over a storage grid, as CSV.
    Sweep,
    /// Proposed versus CM-CNC rate and subpacketization ratios.
    Compare,
}

#[derive(Debug, Default, Clone, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
struct Flags {
    /// `comb:h,r`, `affine:q`, or a topology JSON file.
    #[arg(long, global = true)]
    topology: Option<String>,
    /// Number of files.
    #[arg(long = "N", global = true)]
    #[serde(rename = "N")]
    n: Option<usize>,
    /// File size in bits, or `auto`.
    #[arg(long = "F", global = true)]
    #[serde(rename = "F")]
    f: Option<String>,
    /// Comma-separated storage values (`0,2/3,1.5`) or `grid`.
    #[arg(long = "M", global = true)]
    #[serde(rename = "M")]
    m: Option<String>,
    /// Comma-separated scheme names or `all`.
    #[arg(long, global = true)]
    schemes: Option<String>,
    /// distinct | all-same | seeded-random | exhaustive
    #[arg(long, global = true)]
    demands: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Demand vectors drawn in seeded-random verification.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long, global = true)]
    format: Option<String>,
    /// TOML file with any of the flags above; flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

impl Flags {
    fn overlay(self, base: Flags) -> Flags {
        Flags {
            topology: self.topology.or(base.topology),
            n: self.n.or(base.n),
            f: self.f.or(base.f),
            m: self.m.or(base.m),
            schemes: self.schemes.or(base.schemes),
            demands: self.demands.or(base.demands),
            seed: self.seed.or(base.seed),
            samples: self.samples.or(base.samples),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            config: self.config,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DemandMode {
    Distinct,
    AllSame,
    SeededRandom,
    Exhaustive,
}

impl DemandMode {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "distinct" => Self::Distinct,
            "all-same" => Self::AllSame,
            "seeded-random" => Self::SeededRandom,
            "exhaustive" => Self::Exhaustive,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: Command,
    pub network: Network,
    pub n_files: usize,
    pub file_bits: u64,
    pub memories: Vec<Rational>,
    pub schemes: Vec<SchemeId>,
    pub demands: DemandMode,
    pub seed: u64,
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// A rejected configuration, naming the first field at fault.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

fn bad(field: &str, message: impl fmt::Display) -> ConfigError {
    ConfigError {
        field: field.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExecError {
    #[error(transparent)]
    Core(#[from] relaycache::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Parses arguments (program name first) into a validated config.
pub fn parse_config<I, T>(args: I) -> Result<ExperimentConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| bad("arguments", e.to_string().trim_end()))?;
    build_config(cli)
}

fn build_config(cli: Cli) -> Result<ExperimentConfig, ConfigError> {
    let flags = match &cli.flags.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| bad("config", format!("{}: {e}", path.display())))?;
            let file: Flags = toml::from_str(&text).map_err(|e| bad("config", e.message()))?;
            cli.flags.clone().overlay(file)
        }
        None => cli.flags.clone(),
    };
    let command = cli.command;

    let topology = flags
        .topology
        .as_deref()
        .ok_or_else(|| bad("topology", "required"))?;
    let network = parse_topology(topology)?;

    let simulate = matches!(command, Command::Run | Command::Verify | Command::Sweep);
    let n_files = match (flags.n, command) {
        (Some(0), _) => return Err(bad("N", "must be positive")),
        (Some(n), _) => n,
        (None, Command::Topology) => 1,
        (None, _) => return Err(bad("N", "required")),
    };

    let memories = match (flags.m.as_deref(), command) {
        (Some(m), _) => parse_memories(m, n_files, network.k_tilde())?,
        (None, Command::Topology) => Vec::new(),
        (None, _) => return Err(bad("M", "required")),
    };

    let schemes = parse_schemes(flags.schemes.as_deref().unwrap_or("all"))?;

    if simulate {
        for &m in &memories {
            for &s in &schemes {
                required_divisor(&network, n_files, m, s)
                    .map_err(|e| bad("M", format!("{s} at M = {m}: {e}")))?;
            }
        }
    }

    let demands = match flags.demands.as_deref() {
        Some(s) => DemandMode::parse(s).ok_or_else(|| {
            bad(
                "demands",
                format!(
                    "unknown mode {s:?}, expected distinct, all-same, seeded-random or exhaustive"
                ),
            )
        })?,
        None if command == Command::Verify => {
            let exhaustive = (n_files as u64)
                .checked_pow(network.k() as u32)
                .is_some_and(|t| t <= EXHAUSTIVE_CAP);
            if exhaustive {
                DemandMode::Exhaustive
            } else {
                DemandMode::SeededRandom
            }
        }
        None if n_files >= network.k() => DemandMode::Distinct,
        None => DemandMode::SeededRandom,
    };
    match demands {
        DemandMode::Exhaustive if matches!(command, Command::Run | Command::Sweep) => {
            return Err(bad("demands", "exhaustive applies only to verify"));
        }
        DemandMode::Distinct if simulate && n_files < network.k() => {
            return Err(bad(
                "demands",
                format!("distinct needs N >= K = {}", network.k()),
            ));
        }
        _ => {}
    }

    let file_bits = match flags.f.as_deref().unwrap_or("auto") {
        "auto" if simulate => {
            8 * auto_file_bytes(&network, n_files, &memories, &schemes).map_err(|e| bad("F", e))?
                as u64
        }
        "auto" => 0,
        s => {
            let bits: u64 = s
                .parse()
                .map_err(|_| bad("F", format!("expected bits or auto, got {s:?}")))?;
            if simulate {
                if bits == 0 || !bits.is_multiple_of(8) {
                    return Err(bad("F", "must be a positive multiple of 8 bits"));
                }
                let need = 8 * auto_file_bytes(&network, n_files, &memories, &schemes)
                    .map_err(|e| bad("F", e))? as u64;
                if !bits.is_multiple_of(need) {
                    return Err(bad("F", format!("{bits} bits is not a multiple of {need}")));
                }
            }
            bits
        }
    };

    let format = match flags.format.as_deref() {
        None | Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(s) => return Err(bad("format", format!("expected csv or json, got {s:?}"))),
    };

    let samples = flags.samples.unwrap_or(100);
    if samples == 0 {
        return Err(bad("samples", "must be positive"));
    }

    Ok(ExperimentConfig {
        command,
        network,
        n_files,
        file_bits,
        memories,
        schemes,
        demands,
        seed: flags.seed.unwrap_or(0),
        samples,
        out: flags.out,
        format,
    })
}

fn parse_topology(arg: &str) -> Result<Network, ConfigError> {
    let ints = |params: &str| -> Result<Vec<usize>, ConfigError> {
        params
            .split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| bad("topology", format!("bad parameter {p:?} in {arg:?}")))
            })
            .collect()
    };
    let built = if let Some(params) = arg.strip_prefix("comb:") {
        match ints(params)?[..] {
            [h, r] => combination_network(h, r),
            _ => return Err(bad("topology", "comb takes h,r")),
        }
    } else if let Some(params) = arg.strip_prefix("affine:") {
        match ints(params)?[..] {
            [q] => affine_plane(q),
            _ => return Err(bad("topology", "affine takes q")),
        }
    } else {
        let text = fs::read_to_string(arg).map_err(|e| bad("topology", format!("{arg}: {e}")))?;
        Network::from_json(&text)
    };
    built.map_err(|e| bad("topology", e))
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().ok()?;
        let d: i128 = d.trim().parse().ok()?;
        return (d != 0).then(|| Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return None;
        }
        let scale = 10i128.pow(frac.len() as u32);
        let whole: i128 = if int.is_empty() { 0 } else { int.parse().ok()? };
        return Some(Rational::new(
            whole * scale + frac.parse::<i128>().ok()?,
            scale,
        ));
    }
    s.parse().ok().map(Rational::from_integer)
}

fn parse_memories(arg: &str, n_files: usize, k_tilde: usize) -> Result<Vec<Rational>, ConfigError> {
    if arg.trim() == "grid" {
        return Ok((0..=k_tilde)
            .map(|j| Rational::new((j * n_files) as i128, k_tilde as i128))
            .collect());
    }
    let n = Rational::from_integer(n_files as i128);
    arg.split(',')
        .map(|item| {
            let m =
                parse_rational(item).ok_or_else(|| bad("M", format!("not a number: {item:?}")))?;
            if m < Rational::from_integer(0) || m > n {
                return Err(bad("M", format!("{m} outside [0, {n_files}]")));
            }
            Ok(m)
        })
        .collect()
}

fn parse_schemes(arg: &str) -> Result<Vec<SchemeId>, ConfigError> {
    if arg.trim() == "all" {
        return Ok(SchemeId::ALL.to_vec());
    }
    let mut out = Vec::new();
    for name in arg.split(',') {
        let id: SchemeId = name
            .trim()
            .parse()
            .map_err(|_| bad("schemes", format!("unknown scheme {:?}", name.trim())))?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    if out.is_empty() {
        return Err(bad("schemes", "empty list"));
    }
    Ok(out)
}

impl ExperimentConfig {
    fn library(&self) -> Result<FileLibrary, ExecError> {
        Ok(FileLibrary::random(
            self.n_files,
            self.file_bits,
            self.seed,
        )?)
    }

    fn single_demand(&self) -> Result<DemandVector, ExecError> {
        let (k, n) = (self.network.k(), self.n_files);
        Ok(match self.demands {
            DemandMode::Distinct => DemandVector::distinct(k, n)?,
            DemandMode::AllSame => DemandVector::all_same(k, 1, n)?,
            DemandMode::SeededRandom | DemandMode::Exhaustive => {
                DemandVector::seeded(k, n, self.seed)?
            }
        })
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExecError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| ExecError::Io {
            path: dir.into(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| ExecError::Io {
        path: path.into(),
        source,
    })
}

fn io_err(source: std::io::Error) -> ExecError {
    ExecError::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn file_tag(m: Rational) -> String {
    m.to_string().replace('/', "_")
}

/// Runs the subcommand, writing human output to `stdout`; returns the exit code.
pub fn execute(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<i32, ExecError> {
    match config.command {
        Command::Topology => topology(config, stdout),
        Command::Run => run(config, stdout),
        Command::Verify => verify(config, stdout),
        Command::Sweep => run_sweep(config, stdout),
        Command::Compare => compare(config, stdout),
    }
}

fn topology(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<i32, ExecError> {
    let net = &config.network;
    net.verify()?;
    let json = net.to_json();
    match &config.out {
        Some(dir) => write_file(&dir.join("topology.json"), &json)?,
        None => stdout.write_all(json.as_bytes()).map_err(io_err)?,
    }
    writeln!(
        stdout,
        "h={} r={} K={} Ktilde={} resolvable",
        net.h(),
        net.r(),
        net.k(),
        net.k_tilde()
    )
    .map_err(io_err)?;
    Ok(EXIT_OK)
}

fn run(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<i32, ExecError> {
    let lib = config.library()?;
    let demand = config.single_demand()?;
    let mut ok = true;
    for &scheme in &config.schemes {
        for &m in &config.memories {
            let prepared = Prepared::new(&config.network, &lib, m, scheme)?;
            let (report, log) = prepared.run(&demand)?;
            let passed = report.decode_ok && report.matches_formula();
            ok &= passed;
            writeln!(
                stdout,
                "{scheme} M={m} R1={} R2={} signals={} decode={} digest={}",
                report.measured.r1,
                report.measured.r2,
                log.server_edges.values().map(Vec::len).sum::<usize>(),
                if passed { "ok" } else { "FAILED" },
                report.log_digest
            )
            .map_err(io_err)?;
            if let Some(dir) = &config.out {
                let stem = format!("{}_M{}", scheme.name(), file_tag(m));
                write_file(
                    &dir.join(format!("{stem}.log.jsonl")),
                    &log.to_jsonl(&config.network),
                )?;
                let json = serde_json::to_string_pretty(&report).expect("report serializes");
                write_file(&dir.join(format!("{stem}.report.json")), &(json + "\n"))?;
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn verify(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<i32, ExecError> {
    let lib = config.library()?;
    let mut reports: Vec<VerificationReport> = Vec::new();
    for &scheme in &config.schemes {
        for &m in &config.memories {
            let report = match config.demands {
                DemandMode::Exhaustive => {
                    verify_all_demands(&config.network, &lib, m, scheme, VerifyMode::Exhaustive)?
                }
                DemandMode::SeededRandom => verify_all_demands(
                    &config.network,
                    &lib,
                    m,
                    scheme,
                    VerifyMode::Sampled {
                        seed: config.seed,
                        count: config.samples,
                    },
                )?,
                DemandMode::Distinct | DemandMode::AllSame => {
                    single_run_report(config, &lib, m, scheme)?
                }
            };
            if config.format == Format::Csv {
                writeln!(
                    stdout,
                    "{scheme} M={m} {} formula={}",
                    report.summary(),
                    if report.formula_agrees {
                        "ok"
                    } else {
                        "MISMATCH"
                    }
                )
                .map_err(io_err)?;
            }
            reports.push(report);
        }
    }
    let json = serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n";
    if config.format == Format::Json {
        stdout.write_all(json.as_bytes()).map_err(io_err)?;
    }
    if let Some(dir) = &config.out {
        write_file(&dir.join("verify.json"), &json)?;
    }
    let ok = reports.iter().all(|r| r.ok() && r.formula_agrees);
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn single_run_report(
    config: &ExperimentConfig,
    lib: &FileLibrary,
    memory: Rational,
    scheme: SchemeId,
) -> Result<VerificationReport, ExecError> {
    let demand = config.single_demand()?;
    let (report, log) = Prepared::new(&config.network, lib, memory, scheme)?.run(&demand)?;
    Ok(VerificationReport {
        scheme,
        memory,
        mode: VerifyMode::Sampled {
            seed: config.seed,
            count: 1,
        },
        runs: 1,
        passed: usize::from(report.decode_ok),
        failures: if report.decode_ok {
            Vec::new()
        } else {
            vec![demand]
        },
        max_server_edge_bits: log.max_server_edge_bits(),
        max_relay_edge_bits: log.max_relay_edge_bits(),
        rates_demand_independent: true,
        formula_agrees: report.matches_formula(),
    })
}

#[derive(Serialize)]
struct JsonRow<'a> {
    scheme: &'a str,
    h: usize,
    r: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "Ktilde")]
    k_tilde: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: String,
    r1_formula: String,
    r1_measured: String,
    r2_formula: String,
    r2_measured: String,
    subpacketization: Option<u64>,
    decode_ok: bool,
}

fn run_sweep(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<i32, ExecError> {
    let lib = config.library()?;
    let demand = config.single_demand()?;
    let rows = sweep(
        &config.network,
        &lib,
        &config.memories,
        &config.schemes,
        &demand,
    )?;
    let (text, name) = match config.format {
        Format::Csv => (rows_to_csv(&rows), "sweep.csv"),
        Format::Json => {
            let json: Vec<JsonRow> = rows
                .iter()
                .map(|r| JsonRow {
                    scheme: r.scheme.name(),
                    h: r.h,
                    r: r.r,
                    k: r.k,
                    k_tilde: r.k_tilde,
                    n: r.n,
                    m: r.memory.to_string(),
                    r1_formula: r.r1_formula.to_string(),
                    r1_measured: r.r1_measured.to_string(),
                    r2_formula: r.r2_formula.to_string(),
                    r2_measured: r.r2_measured.to_string(),
                    subpacketization: r.subpacketization,
                    decode_ok: r.decode_ok,
                })
                .collect();
            (
                serde_json::to_string_pretty(&json).expect("rows serialize") + "\n",
                "sweep.json",
            )
        }
    };
    match &config.out {
        Some(dir) => write_file(&dir.join(name), &text)?,
        None => stdout.write_all(text.as_bytes()).map_err(io_err)?,
    }
    let ok = rows
        .iter()
        .all(|r| r.decode_ok && r.r1_formula == r.r1_measured && r.r2_formula == r.r2_measured);
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn compare(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<i32, ExecError> {
    let net = &config.network;
    let params = Params::new(net.k(), net.h(), net.r(), config.n_files)?;
    let n = Rational::from_integer(config.n_files as i128);
    let mut rows = Vec::new();
    for &m in &config.memories {
        let c = comparison_ratios(&params, m)?;
        rows.push(serde_json::json!({
            "M": m.to_string(),
            "m": (m / n).to_string(),
            "r1_ratio": c.r1_ratio.to_string(),
            "r2_ratio": c.r2_ratio.to_string(),
            "subpack_ratio_exact": c.subpack_ratio_exact.map(|x| x.to_string()),
            "subpack_ratio_approx": c.subpack_ratio_approx,
        }));
        if config.format == Format::Csv {
            if rows.len() == 1 {
                writeln!(
                    stdout,
                    "M,m,r1_ratio,r2_ratio,subpack_ratio_exact,subpack_ratio_approx"
                )
                .map_err(io_err)?;
            }
            writeln!(
                stdout,
                "{m},{},{:?},{:?},{},{:e}",
                m / n,
                to_f64(c.r1_ratio),
                to_f64(c.r2_ratio),
                c.subpack_ratio_exact
                    .map_or_else(String::new, |x| x.to_string()),
                c.subpack_ratio_approx
            )
            .map_err(io_err)?;
        }
    }
    let json = serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n";
    if config.format == Format::Json {
        stdout.write_all(json.as_bytes()).map_err(io_err)?;
    }
    if let Some(dir) = &config.out {
        write_file(&dir.join("compare.json"), &json)?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    field: Option<&'a str>,
    message: String,
}

/// Full command-line entry point; errors go to `stderr` as one JSON record.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let record = ErrorRecord {
                error: "config",
                field: Some("arguments"),
                message: e.to_string().trim_end().into(),
            };
            let _ = writeln!(
                stderr,
                "{}",
                serde_json::to_string(&record).expect("record serializes")
            );
            return EXIT_CONFIG;
        }
    };
    let config = match build_config(cli) {
        Ok(c) => c,
        Err(e) => {
            let record = ErrorRecord {
                error: "config",
                field: Some(&e.field),
                message: e.message.clone(),
            };
            let _ = writeln!(
                stderr,
                "{}",
                serde_json::to_string(&record).expect("record serializes")
            );
            return EXIT_CONFIG;
        }
    };
    match execute(&config, stdout) {
        Ok(code) => code,
        Err(e) => {
            let record = ErrorRecord {
                error: "execution",
                field: None,
                message: e.to_string(),
            };
            let _ = writeln!(
                stderr,
                "{}",
                serde_json::to_string(&record).expect("record serializes")
            );
            EXIT_CHECK_FAILED
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(line: &str) -> Vec<&str> {
        std::iter::once("relaycache")
            .chain(line.split_whitespace())
            .collect()
    }

    #[test]
    fn grid_for_fifteen_users() {
        let c = parse_config(args(
            "sweep --topology comb:6,2 --N 50 --M grid --schemes all",
        ))
        .unwrap();
        let want: Vec<Rational> = (0..=5).map(|j| Rational::from_integer(10 * j)).collect();
        assert_eq!(c.memories, want);
        assert_eq!(c.schemes, SchemeId::ALL.to_vec());
        assert_eq!(c.file_bits, 8 * 20020);
        assert_eq!(c.demands, DemandMode::Distinct);
    }

    #[test]
    fn triangle_is_rejected() {
        let e = parse_config(args("topology --topology comb:3,2")).unwrap_err();
        assert_eq!(e.field, "topology");
        assert!(e.message.contains("not resolvable"), "{}", e.message);
    }

    #[test]
    fn affine_with_zero_storage() {
        let c = parse_config(args("run --topology affine:3 --N 4 --M 0")).unwrap();
        assert_eq!(c.network.k(), 12);
        assert!(c.file_bits > 0 && c.file_bits % 8 == 0);
        assert_eq!(c.demands, DemandMode::SeededRandom);
    }

    #[test]
    fn first_bad_field_is_named() {
        let e =
            parse_config(args("run --topology comb:4,2 --N 2 --M 1 --schemes bogus")).unwrap_err();
        assert_eq!(e.field, "schemes");
        let e = parse_config(args(
            "run --topology comb:4,2 --N 2 --M 1 --schemes proposed",
        ))
        .unwrap_err();
        assert_eq!(e.field, "M");
        let e = parse_config(args("verify --topology comb:4,2 --N 2 --M 2 --F 12")).unwrap_err();
        assert_eq!(e.field, "F");
        let e = parse_config(args(
            "sweep --topology comb:4,2 --N 6 --M grid --demands exhaustive",
        ))
        .unwrap_err();
        assert_eq!(e.field, "demands");
        let e = parse_config(args("compare --topology comb:4,2 --N 6 --M 7")).unwrap_err();
        assert_eq!(e.field, "M");
    }

    #[test]
    fn off_grid_storage_is_fine_without_simulation() {
        let c = parse_config(args("compare --topology comb:6,2 --N 50 --M 15")).unwrap();
        assert_eq!(c.memories, vec![Rational::from_integer(15)]);
    }

    #[test]
    fn storage_list_syntax() {
        assert_eq!(parse_rational("2/3"), Some(Rational::new(2, 3)));
        assert_eq!(parse_rational("1.25"), Some(Rational::new(5, 4)));
        assert_eq!(parse_rational(".5"), Some(Rational::new(1, 2)));
        assert_eq!(parse_rational("4"), Some(Rational::from_integer(4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn verify_defaults_to_exhaustive_when_small() {
        let c = parse_config(args(
            "verify --topology comb:4,2 --N 2 --M 2 --schemes proposed",
        ))
        .unwrap();
        assert_eq!(c.demands, DemandMode::Exhaustive);
        let c = parse_config(args("verify --topology comb:6,2 --N 50 --M 10")).unwrap();
        assert_eq!(c.demands, DemandMode::SeededRandom);
    }
}
