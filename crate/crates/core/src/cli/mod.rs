//! The `tunnelinfo` command line.
//!
//! ```text
//! tunnelinfo spectrum --mass 1 --grid 1000 --output spectrum.csv
//! tunnelinfo simulate --mass 10 --runs 100 --seed 1
//! tunnelinfo ledger   --mass 2 --energies 1,0.5,0.5
//! tunnelinfo verify   all
//! ```
//!
//! Files without an explicit path go to `$TUNNELINFO_OUTPUT_DIR` (or the
//! current directory); `-` means standard output.

mod format;
mod manifest;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::ledger::build_ledger;
use crate::montecarlo::{
    ensemble_stats, run_ensemble_with, EmissionSampler, InverseTransform, SimulationConfig,
    CONSERVATION_TOLERANCE,
};
use crate::spectrum::SpectrumModel;
use crate::tunneling::{delta_s, BlackHoleState, Energy};
use crate::verify::{run_suite, Suite};

pub use format::{exact, readable};
pub use manifest::{RunManifest, Summary, SCHEMA_VERSION};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "TUNNELINFO_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DOMAIN: i32 = 65;

pub const SPECTRUM_HEADER: &str = "energy,delta_s,log_density,cdf";
pub const SIMULATION_HEADER: &str =
    "run_id,emission_index,energy,remaining_mass_after,conditional_self_info";

#[derive(Debug, Parser)]
#[command(
    name = "tunnelinfo",
    version,
    about = "Entropy accounting for black-hole evaporation by tunneling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the emission spectrum at a fixed mass as CSV.
    Spectrum(SpectrumArgs),
    /// Run seeded evaporations; write per-emission CSV and a JSON manifest.
    Simulate(SimulateArgs),
    /// Print the chain-rule entropy ledger of a given emission sequence.
    Ledger(LedgerArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub mass: f64,
    /// Number of grid points on [0, mass], endpoints included.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, required_unless_present = "from_manifest")]
    pub mass: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Absolute remaining mass at which a run emits the rest in one quantum
    /// [default: 1e-6 * mass].
    #[arg(long)]
    pub cutoff: Option<f64>,
    #[arg(long)]
    pub max_emissions: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Take every simulation parameter from an earlier manifest.
    #[arg(long, conflicts_with_all = ["mass", "runs", "seed", "cutoff", "max_emissions"])]
    pub from_manifest: Option<PathBuf>,
    /// Record start and finish times in the manifest (which then differs
    /// between invocations).
    #[arg(long)]
    pub timestamps: bool,
}

#[derive(Debug, Args)]
pub struct LedgerArgs {
    #[arg(long)]
    pub mass: f64,
    /// Comma-separated emission energies, in order.
    #[arg(long, allow_hyphen_values = true)]
    pub energies: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// identities, spectrum, sampling or all.
    #[arg(value_name = "SUITE", conflicts_with = "suite")]
    pub selector: Option<Suite>,
    #[arg(long)]
    pub suite: Option<Suite>,
}

/// Failure of a command, carrying its exit code.
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

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Io(_) => EXIT_IO,
            _ => EXIT_DOMAIN,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

type CliResult<T = i32> = std::result::Result<T, CliError>;

/// Parses `args` (program name first) and runs the command against the
/// process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(
        args,
        &InverseTransform,
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// [`run`] with an explicit emission sampler and output streams.
pub fn run_with<I, T>(
    args: I,
    sampler: &dyn EmissionSampler,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&a, out, err),
        Command::Simulate(a) => cmd_simulate(&a, sampler, out, err),
        Command::Ledger(a) => cmd_ledger(&a, out),
        Command::Verify(a) => cmd_verify(&a, sampler, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "tunnelinfo: {}", e.message);
            e.code
        }
    }
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::usage(format!(
            "--{name} must be a positive finite number, got {v}"
        )))
    }
}

fn default_path(explicit: &Option<PathBuf>, file_name: &str) -> PathBuf {
    if let Some(p) = explicit {
        return p.clone();
    }
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(file_name),
        _ => PathBuf::from(file_name),
    }
}

fn write_output(
    path: &Path,
    out: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> CliResult<()> {
    if path == Path::new("-") {
        return body(out).map_err(|e| CliError::io(path, e));
    }
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

pub fn cmd_spectrum(args: &SpectrumArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let mass = positive("mass", args.mass)?;
    if args.grid < 2 {
        return Err(CliError::usage(format!(
            "--grid must be at least 2, got {}",
            args.grid
        )));
    }
    let state = BlackHoleState::new(mass)?;
    let model = SpectrumModel::new(mass)?;
    let last = args.grid - 1;
    let mut rows = Vec::with_capacity(args.grid);
    for i in 0..args.grid {
        let e = if i == last {
            mass
        } else {
            mass * i as f64 / last as f64
        };
        let e = Energy::new(e)?;
        rows.push([
            e.value(),
            delta_s(&state, e)?.ln(),
            model.log_density(e)?,
            model.cdf(e)?,
        ]);
    }
    let path = default_path(&args.output, "spectrum.csv");
    write_output(&path, out, |w| {
        writeln!(w, "{SPECTRUM_HEADER}")?;
        for row in &rows {
            let cells: Vec<String> = row.iter().map(|&v| exact(v)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    })?;
    if path != Path::new("-") {
        let _ = writeln!(err, "wrote {} rows to {}", rows.len(), path.display());
    }
    Ok(EXIT_OK)
}

fn simulation_config(args: &SimulateArgs) -> CliResult<SimulationConfig> {
    if let Some(path) = &args.from_manifest {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let manifest: RunManifest = serde_json::from_str(&text).map_err(|e| CliError {
            code: EXIT_DOMAIN,
            message: format!("{}: not a run manifest: {e}", path.display()),
        })?;
        if manifest.schema_version != SCHEMA_VERSION {
            return Err(CliError {
                code: EXIT_DOMAIN,
                message: format!(
                    "{}: manifest schema {} is not supported (expected {SCHEMA_VERSION})",
                    path.display(),
                    manifest.schema_version
                ),
            });
        }
        return Ok(manifest.parameters);
    }
    let mass = positive("mass", args.mass.expect("clap requires --mass"))?;
    let mut config = SimulationConfig::new(mass, args.runs, args.seed);
    if let Some(cutoff) = args.cutoff {
        config = config.with_cutoff(positive("cutoff", cutoff)?);
    }
    if let Some(max) = args.max_emissions {
        config = config.with_max_emissions(max);
    }
    config
        .validate()
        .map_err(|e| CliError::usage(e.to_string()))?;
    Ok(config)
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn cmd_simulate(
    args: &SimulateArgs,
    sampler: &dyn EmissionSampler,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let config = simulation_config(args)?;
    config.validate()?;
    let started_at = args.timestamps.then(timestamp);
    let results = run_ensemble_with(&config, sampler)?;
    let stats = ensemble_stats(&results)?;
    let finished_at = args.timestamps.then(timestamp);

    let failures: Vec<u64> = results
        .iter()
        .filter(|r| r.final_exhaustive_flag && !r.conserves())
        .map(|r| r.run_id)
        .collect();
    let exhaustive_totals: Vec<f64> = results
        .iter()
        .filter(|r| r.final_exhaustive_flag)
        .map(|r| r.ledger.total())
        .collect();
    let target = BlackHoleState::new(config.initial_mass)?.bh_entropy();
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION.into(),
        command: "simulate".into(),
        parameters: config,
        seed: config.seed,
        code_version: env!("CARGO_PKG_VERSION").into(),
        started_at,
        finished_at,
        summary: Summary::new(
            &stats,
            &exhaustive_totals,
            results.iter().map(|r| r.emission_count).collect(),
            target,
            failures.is_empty(),
        ),
    };

    let csv_path = default_path(&args.output, "simulation.csv");
    write_output(&csv_path, out, |w| {
        writeln!(w, "{SIMULATION_HEADER}")?;
        for r in &results {
            for entry in r.ledger.entries() {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.run_id,
                    entry.index,
                    exact(entry.energy.value()),
                    exact(entry.remaining_mass_after()),
                    exact(entry.conditional_self_info)
                )?;
            }
        }
        Ok(())
    })?;
    let manifest_path = default_path(&args.manifest, "manifest.json");
    write_output(&manifest_path, out, |w| {
        serde_json::to_writer_pretty(&mut *w, &manifest)?;
        writeln!(w)
    })?;

    let residual = stats
        .max_relative_residual
        .map_or_else(|| "n/a".to_string(), readable);
    let _ = writeln!(
        err,
        "{} runs ({} exhaustive), mean emissions {}, max relative residual {residual}",
        stats.runs,
        stats.exhaustive_runs,
        readable(stats.count_mean)
    );
    if failures.is_empty() {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(
            err,
            "tunnelinfo: conservation failed (tolerance {CONSERVATION_TOLERANCE:e}) for runs {failures:?}"
        );
        Ok(EXIT_VERIFICATION)
    }
}

fn parse_energies(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>().map_err(|_| {
                CliError::usage(format!("--energies: cannot parse '{part}' as a number"))
            })
        })
        .collect()
}

pub fn cmd_ledger(args: &LedgerArgs, out: &mut dyn Write) -> CliResult {
    let mass = positive("mass", args.mass)?;
    let values = parse_energies(&args.energies)?;
    let energies = Energy::list(&values)?;
    let ledger = build_ledger(mass, &energies)?;

    let mut table = String::new();
    table.push_str(&format!(
        "{:>6}  {:>16}  {:>16}  {:>16}  {:>16}\n",
        "index", "energy", "mass_before", "self_info (nats)", "self_info (bits)"
    ));
    for e in ledger.entries() {
        table.push_str(&format!(
            "{:>6}  {:>16}  {:>16}  {:>16}  {:>16}\n",
            e.index,
            readable(e.energy.value()),
            readable(e.remaining_mass_before),
            readable(e.conditional_self_info),
            readable(e.conditional_self_info_bits())
        ));
    }
    table.push_str(&format!(
        "total             {} nats  {} (bits)\n",
        readable(ledger.total()),
        readable(ledger.total_bits())
    ));
    table.push_str(&format!(
        "target 4πM²       {} nats\n",
        readable(ledger.target())
    ));
    match ledger.residual() {
        Some(r) => table.push_str(&format!("residual          {}\n", readable(r))),
        None => table.push_str(&format!(
            "residual          n/a (emissions leave {} of the mass)\n",
            readable(
                mass - ledger
                    .entries()
                    .iter()
                    .map(|e| e.energy.value())
                    .sum::<f64>()
            )
        )),
    }
    out.write_all(table.as_bytes())
        .map_err(|e| CliError::io(Path::new("-"), e))?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(
    args: &VerifyArgs,
    sampler: &dyn EmissionSampler,
    out: &mut dyn Write,
) -> CliResult {
    let suite = args.selector.or(args.suite).unwrap_or(Suite::All);
    let report = run_suite(suite, sampler)?;
    let mut text = String::new();
    for check in &report.checks {
        text.push_str(&format!("{check}\n"));
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    text.push_str(&format!("{passed}/{} checks passed\n", report.checks.len()));
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io(Path::new("-"), e))?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    })
}
