//! Command-line drivers.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sdc_core::dynamics::{compare_analytic_numeric, mirror_time_grid, with_detuning_ratio};
use sdc_core::elements::Message;
use sdc_core::protocol::{
    confusion_matrix, discrimination_sweep, prepare_hyperentangled_pair, prepare_hypersuperposition, reference_pair,
    run_sdc,
};
use sdc_core::qstate::{make_state, phase_invariant_fidelity, Label};
use sdc_core::C64;

use crate::config::{resolve_config, ConfigError, DecoderName, Format, PhaseModeName, PolicyName, RunConfig, Verbosity};
use crate::report::{
    emit_report, ConfusionReport, Echo, ErrorReport, PrepareReport, RunReport, Snapshot, SweepReport, UnsupportedFormat,
    VerifyReport, VerifyRow, SCHEMA_VERSION,
};

#[derive(Debug, Parser)]
#[command(name = "sdc-bench", version, about = "Superdense coding with Bragg-diffracted hyperentangled atoms")]
pub struct Cli {
    /// Config file; defaults to $SDC_CONFIG, then the bundled Rb-85 config.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, value_enum)]
    pub verbosity: Option<Verbosity>,
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

/// Protocol settings that override the config file.
#[derive(Debug, Args, Default)]
pub struct Overrides {
    #[arg(long, global = true, value_enum)]
    pub decoder: Option<DecoderName>,
    #[arg(long, global = true, value_enum)]
    pub phase_mode: Option<PhaseModeName>,
    #[arg(long, global = true, value_enum)]
    pub policy: Option<PolicyName>,
    #[arg(long, global = true)]
    pub encode_phase: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One pass of the pipeline for a two-bit message.
    Run {
        #[arg(long)]
        message: String,
    },
    /// 4×4 decode probabilities, sent × decoded.
    Confusion,
    /// Oracle decode success against the phase-gate angle.
    SweepAlpha {
        /// `start:end:points`, radians, both ends included.
        #[arg(long, default_value = "0:6.283185307179586:33")]
        grid: String,
        /// Also write the two-column CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Closed-form Bragg populations against the full Hamiltonian.
    Verify {
        /// Comma-separated values of Δ/(μ√n).
        #[arg(long, value_delimiter = ',', default_value = "100")]
        detuning_ratios: Vec<f64>,
    },
    /// Dump a prepared state.
    Prepare {
        #[arg(long, value_enum)]
        stage: Stage,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    Hypersup,
    Bell,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] sdc_core::Error),
    #[error(transparent)]
    Format(#[from] UnsupportedFormat),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write `{path}`: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Short machine-readable kind.
    pub fn kind(&self) -> String {
        match self {
            CliError::Config(_) => "config".into(),
            CliError::Core(e) => {
                let debug = format!("{e:?}");
                let end = debug.find(|c: char| !c.is_alphanumeric()).unwrap_or(debug.len());
                format!("core.{}", &debug[..end])
            }
            CliError::Format(_) => "format".into(),
            CliError::Usage(_) => "usage".into(),
            CliError::Io { .. } => "io".into(),
        }
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport::new(self.kind(), self.to_string())
    }
}

/// Rendered output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    /// Extra files to write, e.g. a sweep CSV.
    pub files: Vec<(PathBuf, String)>,
}

/// Parses `start:end:points`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("grid `{spec}` is not start:end:points"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn apply_overrides(cli: &Cli, mut cfg: RunConfig) -> Result<RunConfig, CliError> {
    let o = &cli.overrides;
    if let Some(d) = o.decoder {
        cfg.protocol.decoder = d;
    }
    if let Some(m) = o.phase_mode {
        cfg.protocol.phase_mode = m;
    }
    if let Some(p) = o.policy {
        cfg.protocol.postselect_policy = p;
    }
    if let Some(a) = o.encode_phase {
        cfg.protocol.encode_phase = a;
    }
    if let Some(s) = o.seed {
        cfg.protocol.seed = s;
    }
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    if let Some(v) = cli.verbosity {
        cfg.output.verbosity = v;
    }
    if let Some(p) = &cli.out {
        cfg.output.path = Some(p.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn echo(cfg: &RunConfig) -> Result<Option<Echo>, CliError> {
    Ok(match cfg.output.verbosity {
        Verbosity::Quiet => None,
        _ => Some(Echo { config: cfg.clone(), derived: cfg.derived()? }),
    })
}

/// Runs a parsed command and renders its report.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let cfg = apply_overrides(cli, resolve_config(cli.config.as_deref())?)?;
    let sdc = cfg.sdc_config()?;
    let verbose = cfg.output.verbosity == Verbosity::Verbose;
    let format = cfg.output.format;
    let mut files = Vec::new();
    let body = match &cli.command {
        Command::Run { message } => {
            let m = Message::parse(message)?;
            emit_report(&RunReport::new(&run_sdc(m, &sdc)?, echo(&cfg)?, verbose), format)?
        }
        Command::Confusion => emit_report(&ConfusionReport::new(&confusion_matrix(&sdc)?, &sdc, echo(&cfg)?), format)?,
        Command::SweepAlpha { grid, csv } => {
            let points = discrimination_sweep(&sdc, &parse_grid(grid)?)?;
            let report = SweepReport::new(&points, &sdc, echo(&cfg)?);
            if let Some(path) = csv {
                files.push((path.clone(), report.to_csv()));
            }
            emit_report(&report, format)?
        }
        Command::Verify { detuning_ratios } => {
            if detuning_ratios.is_empty() {
                return Err(CliError::Usage("give at least one detuning ratio".into()));
            }
            let tol = &cfg.numerics.tolerances;
            let mut rows = Vec::with_capacity(detuning_ratios.len());
            for &ratio in detuning_ratios {
                if !(ratio.is_finite() && ratio > 0.0) {
                    return Err(CliError::Usage(format!("detuning ratio {ratio} must be positive")));
                }
                let p = with_detuning_ratio(&sdc.params, ratio);
                let grid = mirror_time_grid(&p, cfg.numerics.time_points)?;
                let r = compare_analytic_numeric(&p, &sdc.bragg, &grid)?;
                rows.push(VerifyRow::new(&r, tol.max_population_deviation, tol.max_leakage));
            }
            emit_report(
                &VerifyReport {
                    schema_version: SCHEMA_VERSION,
                    kind: "verify",
                    time_points: cfg.numerics.time_points,
                    max_population_deviation_tolerance: tol.max_population_deviation,
                    max_leakage_tolerance: tol.max_leakage,
                    rows,
                    echo: echo(&cfg)?,
                },
                format,
            )?
        }
        Command::Prepare { stage } => {
            let report = match stage {
                Stage::Hypersup => {
                    let s = prepare_hypersuperposition(&sdc)?;
                    let one = C64::new(1.0, 0.0);
                    let target = make_state(
                        s.subsystems().to_vec(),
                        &[(&[Label::G, Label::Momentum(0)], one), (&[Label::E, Label::Momentum(-2)], C64::new(0.0, -1.0))],
                    )?;
                    PrepareReport {
                        schema_version: SCHEMA_VERSION,
                        kind: "prepare",
                        stage: "hypersup",
                        phase_mode: crate::report::phase_mode_name(sdc.phase_mode),
                        reference_fidelity: crate::report::sig12(phase_invariant_fidelity(&s, &target)?),
                        aux_probability: None,
                        state: (&s).into(),
                        snapshots: None,
                        echo: echo(&cfg)?,
                    }
                }
                Stage::Bell => {
                    let p = prepare_hyperentangled_pair(&sdc)?;
                    PrepareReport {
                        schema_version: SCHEMA_VERSION,
                        kind: "prepare",
                        stage: "bell",
                        phase_mode: crate::report::phase_mode_name(sdc.phase_mode),
                        reference_fidelity: crate::report::sig12(phase_invariant_fidelity(&p.state, &reference_pair())?),
                        aux_probability: Some(crate::report::sig12(p.aux_probability)),
                        state: (&p.state).into(),
                        snapshots: verbose.then(|| {
                            p.stages.iter().map(|(n, s)| Snapshot { stage: n.clone(), state: s.into() }).collect()
                        }),
                        echo: echo(&cfg)?,
                    }
                }
            };
            emit_report(&report, format)?
        }
    };
    Ok(Output { body, files })
}

/// Parses `argv`, runs it and writes the artifacts. Returns the exit code:
/// 0 on success, 1 on a failed stage (with error JSON on stdout), 2 on a
/// usage error.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|out| write_output(&cli, out)) {
        Ok(()) => 0,
        Err(e) => {
            print!("{}", crate::report::to_json(&e.report()));
            eprintln!("error: {e}");
            1
        }
    }
}

fn write_output(cli: &Cli, out: Output) -> Result<(), CliError> {
    let write = |path: &PathBuf, text: &str| std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source });
    for (path, text) in &out.files {
        write(path, text)?;
    }
    // --out wins over the config's output.path
    let target = match &cli.out {
        Some(p) => Some(p.clone()),
        None => resolve_config(cli.config.as_deref()).ok().and_then(|c| c.output.path),
    };
    match target {
        Some(p) => write(&p, &out.body),
        None => {
            print!("{}", out.body);
            Ok(())
        }
    }
}
