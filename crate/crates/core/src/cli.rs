//! Command-line front end: sequence files, JSON reports and the `run`,
//! `noise` and `emit` subcommands.
//!
//! Reports go to stdout (or `--out`), diagnostics to stderr. Floats are
//! written in shortest round-trip form, so every `f64` reads back bit-exact.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{
    fidelity_estimate, monte_carlo, NoiseConfig, DEFAULT_PER_PULSE_FIDELITY, QUOTED_SIDEBAND_COUNT,
};
use crate::protocol::{chain_sequence, cluster6_sequence, run, PulseSequence, Step};
use crate::pulse::{Pulse, PulseKind};
use crate::register::{IonLevel, IonPrep, RegisterState, DEFAULT_N_MAX};
use crate::verify::{verify_run, VerificationReport};

/// Version tag every sequence file must carry.
pub const SEQUENCE_FORMAT_VERSION: u32 = 1;

/// Amplitudes at or below this magnitude are omitted unless `--full`.
pub const AMPLITUDE_CUTOFF: f64 = 1e-14;

// ---------------------------------------------------------------------------
// Sequence files

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrepTerm {
    pub level: IonLevel,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    pub kind: PulseKind,
    pub ion: usize,
    pub phi: f64,
    pub theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// On-disk form of a [`PulseSequence`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub version: u32,
    pub ions: Vec<Vec<PrepTerm>>,
    pub steps: Vec<StepRecord>,
}

impl SequenceFile {
    pub fn from_sequence(seq: &PulseSequence) -> Self {
        let ions = seq
            .preps
            .iter()
            .map(|p| {
                p.terms()
                    .into_iter()
                    .map(|(level, c)| PrepTerm {
                        level,
                        re: c.re,
                        im: c.im,
                    })
                    .collect()
            })
            .collect();
        let steps = seq
            .steps
            .iter()
            .map(|s| StepRecord {
                kind: s.pulse.kind,
                ion: s.pulse.ion,
                phi: s.pulse.phi,
                theta: s.pulse.theta,
                label: s.label.clone(),
            })
            .collect();
        SequenceFile {
            version: SEQUENCE_FORMAT_VERSION,
            ions,
            steps,
        }
    }

    pub fn to_sequence(&self) -> Result<PulseSequence> {
        if self.version != SEQUENCE_FORMAT_VERSION {
            return Err(Error::validation(format!(
                "unsupported sequence format version {} (expected {SEQUENCE_FORMAT_VERSION})",
                self.version
            )));
        }
        let preps = self
            .ions
            .iter()
            .enumerate()
            .map(|(i, terms)| {
                let terms: Vec<_> = terms
                    .iter()
                    .map(|t| (t.level, Complex64::new(t.re, t.im)))
                    .collect();
                IonPrep::new(&terms).map_err(|e| match e {
                    Error::Validation(msg) => Error::Validation(format!("ion {}: {msg}", i + 1)),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let steps = self
            .steps
            .iter()
            .map(|s| Step {
                pulse: Pulse {
                    kind: s.kind,
                    ion: s.ion,
                    phi: s.phi,
                    theta: s.theta,
                },
                label: s.label.clone(),
            })
            .collect();
        PulseSequence::new(preps, steps)
    }

    pub fn parse(text: &str) -> Result<PulseSequence> {
        let file: SequenceFile = serde_json::from_str(text)?;
        file.to_sequence()
    }

    pub fn render(seq: &PulseSequence) -> String {
        to_json(&SequenceFile::from_sequence(seq))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Protocol selection

/// A built-in schedule named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinProtocol {
    Cluster6,
    Chain(usize),
}

impl FromStr for BuiltinProtocol {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "cluster6" {
            return Ok(BuiltinProtocol::Cluster6);
        }
        if let Some(n) = s.strip_prefix("chain:") {
            return n
                .parse()
                .map(BuiltinProtocol::Chain)
                .map_err(|_| format!("invalid chain length `{n}`"));
        }
        Err(format!(
            "unknown protocol `{s}` (expected cluster6 or chain:N)"
        ))
    }
}

impl std::fmt::Display for BuiltinProtocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BuiltinProtocol::Cluster6 => f.write_str("cluster6"),
            BuiltinProtocol::Chain(n) => write!(f, "chain:{n}"),
        }
    }
}

impl BuiltinProtocol {
    pub fn sequence(self) -> Result<PulseSequence> {
        match self {
            BuiltinProtocol::Cluster6 => Ok(cluster6_sequence()),
            BuiltinProtocol::Chain(n) => chain_sequence(n),
        }
    }
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Built-in schedule: `cluster6` or `chain:N`.
    #[arg(long)]
    pub protocol: Option<BuiltinProtocol>,
    /// Sequence file to load instead of a built-in schedule.
    #[arg(long)]
    pub sequence: Option<PathBuf>,
}

impl SourceArgs {
    fn load(&self) -> Result<(String, PulseSequence)> {
        match (&self.protocol, &self.sequence) {
            (Some(p), _) => Ok((p.to_string(), p.sequence()?)),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)?;
                Ok((
                    format!("sequence:{}", path.display()),
                    SequenceFile::parse(&text)?,
                ))
            }
            (None, None) => Err(Error::validation(
                "either --protocol or --sequence is required",
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Command line

#[derive(Debug, Parser)]
#[command(
    name = "ion-cluster",
    version,
    about = "Trapped-ion cluster-state protocol simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a schedule and verify the final state against the cluster reference.
    Run(RunArgs),
    /// Monte Carlo pulse-area jitter plus the per-pulse fidelity estimate.
    Noise(NoiseArgs),
    /// Write a built-in schedule as a sequence file.
    Emit(EmitArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub n_max: usize,
    /// Include the state after every step.
    #[arg(long)]
    pub snapshots: bool,
    /// List every amplitude, including zeros.
    #[arg(long)]
    pub full: bool,
    #[arg(long, default_value_t = DEFAULT_PER_PULSE_FIDELITY)]
    pub per_pulse_fidelity: f64,
    /// Output path; stdout when absent or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Fock cutoff; defaults to the number of ions, enough for any
    /// perturbed run of the built-in schedules.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PER_PULSE_FIDELITY)]
    pub per_pulse_fidelity: f64,
    #[arg(long, default_value_t = 0.0)]
    pub jitter_sigma: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    #[arg(long)]
    pub protocol: BuiltinProtocol,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexRecord {
    fn from(c: Complex64) -> Self {
        ComplexRecord { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub label: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub fidelity: f64,
    pub stabilizer_expectations: Vec<f64>,
    pub leakage_eprime: f64,
    pub leakage_mode: f64,
    pub global_phase: ComplexRecord,
}

impl From<&VerificationReport> for VerificationRecord {
    fn from(r: &VerificationReport) -> Self {
        VerificationRecord {
            fidelity: r.fidelity,
            stabilizer_expectations: r.stabilizer_expectations.clone(),
            leakage_eprime: r.leakage_eprime,
            leakage_mode: r.leakage_mode,
            global_phase: r.global_phase.into(),
        }
    }
}

/// `F^k` for the quoted and the counted number of sideband pulses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub per_pulse_fidelity: f64,
    pub quoted_sideband_count: usize,
    pub counted_sideband_count: usize,
    pub k8: f64,
    pub k_counted: f64,
}

impl EstimateRecord {
    pub fn new(seq: &PulseSequence, per_pulse_fidelity: f64) -> Result<Self> {
        Ok(EstimateRecord {
            per_pulse_fidelity,
            quoted_sideband_count: QUOTED_SIDEBAND_COUNT,
            counted_sideband_count: seq.sideband_count(),
            k8: fidelity_estimate(seq, per_pulse_fidelity, Some(QUOTED_SIDEBAND_COUNT))?,
            k_counted: fidelity_estimate(seq, per_pulse_fidelity, None)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseRecord {
    pub kind: PulseKind,
    pub ion: usize,
    pub phi: f64,
    pub theta: f64,
}

impl From<&Pulse> for PulseRecord {
    fn from(p: &Pulse) -> Self {
        PulseRecord {
            kind: p.kind,
            ion: p.ion,
            phi: p.phi,
            theta: p.theta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub step_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub pulse: PulseRecord,
    pub amplitudes: Vec<AmplitudeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfigRecord {
    pub source: String,
    pub n_max: usize,
    pub full: bool,
    pub snapshots: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfigRecord,
    pub n_ions: usize,
    pub amplitudes: Vec<AmplitudeRecord>,
    pub verification: VerificationRecord,
    pub fidelity_estimate: EstimateRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<SnapshotRecord>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfigRecord {
    pub source: String,
    pub n_max: usize,
    pub per_pulse_fidelity: f64,
    pub jitter_sigma: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloRecord {
    pub mean_fidelity: f64,
    pub std_error: f64,
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseReport {
    pub config: NoiseConfigRecord,
    pub n_ions: usize,
    pub monte_carlo: MonteCarloRecord,
    pub fidelity_estimate: EstimateRecord,
}

/// Amplitudes in index order, skipping negligible ones unless `full`.
pub fn amplitude_records(state: &RegisterState, full: bool) -> Vec<AmplitudeRecord> {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| full || a.norm() > AMPLITUDE_CUTOFF)
        .map(|(i, a)| AmplitudeRecord {
            label: state.label_of(i).expect("index in range").to_string(),
            re: a.re,
            im: a.im,
        })
        .collect()
}

pub fn run_report(
    source: String,
    seq: &PulseSequence,
    n_max: usize,
    snapshots: bool,
    full: bool,
    per_pulse_fidelity: f64,
) -> Result<RunReport> {
    let estimate = EstimateRecord::new(seq, per_pulse_fidelity)?;
    let out = run(seq, n_max, snapshots)?;
    let verification = verify_run(&out.final_state, seq.n_ions())?;
    let snapshots = snapshots.then(|| {
        out.snapshots
            .iter()
            .map(|s| SnapshotRecord {
                step_index: s.step_index,
                label: s.label.clone(),
                pulse: (&s.pulse).into(),
                amplitudes: amplitude_records(&s.state, full),
            })
            .collect()
    });
    Ok(RunReport {
        config: RunConfigRecord {
            source,
            n_max,
            full,
            snapshots: snapshots.is_some(),
        },
        n_ions: seq.n_ions(),
        amplitudes: amplitude_records(&out.final_state, full),
        verification: (&verification).into(),
        fidelity_estimate: estimate,
        snapshots,
    })
}

pub fn noise_report(
    source: String,
    seq: &PulseSequence,
    cfg: &NoiseConfig,
    n_max: usize,
) -> Result<NoiseReport> {
    cfg.validate()?;
    let estimate = EstimateRecord::new(seq, cfg.per_pulse_fidelity)?;
    let mc = monte_carlo(seq, cfg, n_max)?;
    Ok(NoiseReport {
        config: NoiseConfigRecord {
            source,
            n_max,
            per_pulse_fidelity: cfg.per_pulse_fidelity,
            jitter_sigma: cfg.jitter_sigma,
            trials: cfg.trials,
            seed: cfg.seed,
        },
        n_ions: seq.n_ions(),
        monte_carlo: MonteCarloRecord {
            mean_fidelity: mc.mean_fidelity,
            std_error: mc.std_error,
            samples: mc.samples,
        },
        fidelity_estimate: estimate,
    })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) if path != Path::new("-") => Ok(fs::write(path, text)?),
        _ => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// Renders the document a command would write.
pub fn render(command: &Command) -> Result<String> {
    match command {
        Command::Run(args) => {
            let (source, seq) = args.source.load()?;
            let report = run_report(
                source,
                &seq,
                args.n_max,
                args.snapshots,
                args.full,
                args.per_pulse_fidelity,
            )?;
            Ok(to_json(&report))
        }
        Command::Noise(args) => {
            let (source, seq) = args.source.load()?;
            let cfg = NoiseConfig {
                per_pulse_fidelity: args.per_pulse_fidelity,
                jitter_sigma: args.jitter_sigma,
                trials: args.trials,
                seed: args.seed,
            };
            let n_max = args.n_max.unwrap_or(seq.n_ions().max(1));
            Ok(to_json(&noise_report(source, &seq, &cfg, n_max)?))
        }
        Command::Emit(args) => Ok(SequenceFile::render(&args.protocol.sequence()?)),
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let text = render(&cli.command)?;
    let out = match &cli.command {
        Command::Run(a) => a.out.as_deref(),
        Command::Noise(a) => a.out.as_deref(),
        Command::Emit(a) => a.out.as_deref(),
    };
    write_output(out, &text)
}
