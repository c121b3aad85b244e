use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use polariton_core::observables::solve_branches;
use polariton_core::spectra::{bandwidth_sign_self_test, BANDWIDTH_SIGN};

use polariton_sweep::config::{Format, RunConfig, Toggle};
use polariton_sweep::figures::Figure;
use polariton_sweep::output::{self, write_outputs};
use polariton_sweep::system::{Params, SystemSource, PARAMETERS};
use polariton_sweep::validate::{self, ValidateOptions};
use polariton_sweep::{run_sweep, validate_points};

#[derive(Parser, Debug)]
#[command(name = "polsweep", version, about = "Multimode microcavity polariton spectra: sweeps, figure datasets, validation")]
struct Cli {
    /// Output directory (overrides the config file)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Drop the 1/N corrections in the effective two-level parameters
    #[arg(long, global = true, value_enum)]
    thermodynamic_limit: Option<Toggle>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

impl FormatArg {
    fn formats(self) -> Vec<Format> {
        match self {
            FormatArg::Csv => vec![Format::Csv],
            FormatArg::Json => vec![Format::Json],
            FormatArg::Both => vec![Format::Csv, Format::Json],
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one system and print its branch table
    Spectrum {
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Parameter override, e.g. --param omega0=0.2 (repeatable)
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Run the grid described by a config file
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Regenerate a figure dataset (fig2a, fig2b, fig3, fig3-a, fig3-b-caption, fig3-b-text, fig4)
    Figure { name: String },
    /// Run the invariant suite and write validation.json
    Validate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = validate::SOLVER_EQUIVALENCE_SPECS)]
        random_specs: usize,
        /// Mutation test: hand the flipped bandwidth sign to the conversion under test
        #[arg(long, hide = true)]
        inject_sign_flip: bool,
    },
}

enum Status {
    Ok,
    ValidationFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = bandwidth_sign_self_test(BANDWIDTH_SIGN) {
        eprintln!("error: bandwidth sign self-test failed: {e}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ValidationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn apply_flags(cli: &Cli, cfg: &mut RunConfig) {
    if let Some(dir) = &cli.out {
        cfg.outputs.dir = dir.clone();
    }
    if let Some(f) = cli.format {
        cfg.outputs.formats = f.formats();
    }
    if let Some(t) = cli.thermodynamic_limit {
        cfg.thermodynamic_limit = t;
    }
}

fn run(cli: Cli) -> Result<Status> {
    match &cli.command {
        Command::Spectrum { preset, config, params } => spectrum(&cli, preset.as_deref(), config.as_deref(), params),
        Command::Sweep { config } => {
            let mut cfg = RunConfig::load(config)?;
            apply_flags(&cli, &mut cfg);
            let stem = config.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep").to_string();
            execute(&cli, &cfg, &stem, &format!("sweep --config {}", config.display()), Vec::new())
        }
        Command::Figure { name } => {
            let fig: Figure = name.parse()?;
            let mut cfg = fig.config();
            apply_flags(&cli, &mut cfg);
            execute(&cli, &cfg, fig.name(), &format!("figure {}", fig.name()), fig.notes())
        }
        Command::Validate { seed, random_specs, inject_sign_flip } => {
            let opts = ValidateOptions {
                seed: *seed,
                bandwidth_sign: if *inject_sign_flip { -BANDWIDTH_SIGN } else { BANDWIDTH_SIGN },
                random_specs: *random_specs,
            };
            let report = validate::run(&opts);
            for c in &report.checks {
                println!("{} {:<24} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
            let path = dir.join("validation.json");
            let mut bytes = serde_json::to_vec_pretty(&report)?;
            bytes.push(b'\n');
            fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            eprintln!("{} of {} checks passed; report in {}", report.checks.len() - failed, report.checks.len(), path.display());
            Ok(if report.passed { Status::Ok } else { Status::ValidationFailed })
        }
    }
}

fn execute(cli: &Cli, cfg: &RunConfig, stem: &str, command: &str, mut notes: Vec<String>) -> Result<Status> {
    cfg.validate()?;
    let records = run_sweep(cfg, cli.threads)?;
    let mut status = Status::Ok;
    if cfg.validation.is_on() {
        let v = validate_points(cfg, cli.threads)?;
        notes.push(format!(
            "point validation {}: worst solver gap {:.3e}, worst trace gap {:.3e}",
            if v.passed { "passed" } else { "FAILED" },
            v.worst_solver_gap,
            v.worst_trace_gap
        ));
        if !v.passed {
            status = Status::ValidationFailed;
        }
    }
    let manifest = write_outputs(cfg, stem, command, &records, notes)?;
    eprintln!("{} rows; manifest {}", records.len(), manifest.display());
    Ok(status)
}

fn parse_param(s: &str) -> Result<(&'static str, f64)> {
    let (name, value) = s.split_once('=').ok_or_else(|| anyhow!("--param expects NAME=VALUE, got '{s}'"))?;
    let name = PARAMETERS
        .into_iter()
        .find(|p| *p == name.trim())
        .ok_or_else(|| anyhow!("unknown parameter '{name}'; expected one of {PARAMETERS:?}"))?;
    let value: f64 = value.trim().parse().with_context(|| format!("bad value for {name}"))?;
    Ok((name, value))
}

fn spectrum(cli: &Cli, preset: Option<&str>, config: Option<&Path>, raw: &[String]) -> Result<Status> {
    let source = match (preset, config) {
        (Some(name), None) => SystemSource::preset(name.parse()?),
        (None, Some(path)) => RunConfig::load(path)?.system,
        _ => bail!("spectrum needs --preset or --config"),
    };
    let mut point = Params::default();
    for s in raw {
        let (name, value) = parse_param(s)?;
        point.set(name, value);
    }
    let (spec, resolved) = source.build(&point)?;
    let (branches, route) = solve_branches(&spec)?;
    let wants_json = matches!(cli.format, Some(FormatArg::Json) | Some(FormatArg::Both));
    if wants_json {
        let doc = serde_json::json!({
            "tool": output::TOOL,
            "version": output::VERSION,
            "system": source.name(),
            "parameters": resolved,
            "route": route,
            "branches": branches,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(Status::Ok);
    }
    println!("system {}  route {:?}  quasi-static {}", source.name(), route, spec.is_quasi_static());
    println!("{:<12} {:>14} {:>14} {:>10}  photon fractions", "label", "E (eV)", "Gamma (eV)", "exciton");
    for b in &branches {
        let label = b.label.map_or_else(|| "-".to_string(), |l| l.to_string());
        let photons: Vec<String> = b.photon_fractions().iter().map(|(q, w)| format!("{q:+}:{w:.4}")).collect();
        println!(
            "{label:<12} {:>14.8} {:>14.8} {:>10.6}  {}",
            b.energy_abs,
            b.bandwidth_abs,
            b.exciton_fraction(),
            photons.join(" ")
        );
    }
    Ok(Status::Ok)
}
