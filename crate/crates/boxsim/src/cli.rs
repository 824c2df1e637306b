use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime};

use boxsim_core::boxworld::feasibility_search;
use boxsim_core::harness::{self, InputSource};
use boxsim_core::protocol::{
    choose_n, decode, detect_memory, encode_run, input_bias_realization, sample_g, signaling_trials,
    superluminal_margin, MemoryCandidate,
};
use boxsim_core::{
    Behavior, BiasConfig, MemoryKernel, Partition, PrRelabeling, SignalingConfig, Strategy, SuperluminalParams,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::formats;
use crate::manifest::RunManifest;
use crate::models;
use crate::verify::{self, Fault};

#[derive(Debug, Parser)]
#[command(
    name = "boxsim",
    version,
    about = "Simulate hidden-signaling box models and the memory signalling protocol"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Simulate rounds and write a JSONL transcript
    Run(RunArgs),
    /// Estimate the 64-cell G table from a transcript or a fresh simulation
    Sample(SampleArgs),
    /// Look for memory effects in a G table
    Detect(DetectArgs),
    /// Send one bit through the memory channel and decode it
    Signal(SignalArgs),
    /// Bit error rate over many random messages
    Ber(BerArgs),
    /// Compare protocol duration with light travel time
    Margin(MarginArgs),
    /// Search for a deterministic strategy reproducing a target behavior
    Feasibility(FeasibilityArgs),
    /// Binomial curves of the two hypotheses and the decision threshold
    #[command(name = "fig4")]
    Curves(CurvesArgs),
    /// Run the exact self-checks
    Verify(VerifyArgs),
    /// Write a memory kernel file
    Kernel(KernelArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Run(_) => "run",
            Command::Sample(_) => "sample",
            Command::Detect(_) => "detect",
            Command::Signal(_) => "signal",
            Command::Ber(_) => "ber",
            Command::Margin(_) => "margin",
            Command::Feasibility(_) => "feasibility",
            Command::Curves(_) => "fig4",
            Command::Verify(_) => "verify",
            Command::Kernel(_) => "kernel",
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Run(a) => Some(a.seed),
            Command::Sample(a) if a.transcript.is_none() => Some(a.seed),
            Command::Signal(a) => Some(a.seed),
            Command::Ber(a) => Some(a.seed),
            _ => None,
        }
    }

    fn out(&self) -> Option<&Path> {
        match self {
            Command::Run(a) => a.out.as_deref(),
            Command::Sample(a) => a.out.as_deref(),
            Command::Detect(a) => a.out.as_deref(),
            Command::Signal(a) => a.out.as_deref(),
            Command::Ber(a) => a.out.as_deref(),
            Command::Margin(a) => a.out.as_deref(),
            Command::Feasibility(a) => a.out.as_deref(),
            Command::Curves(a) => a.out.as_deref(),
            Command::Verify(_) => None,
            Command::Kernel(a) => a.out.as_deref(),
        }
    }
}

/// Which strategy (and optionally kernel) to simulate.
#[derive(Debug, Args, Serialize)]
pub struct SourceArgs {
    /// Named model: input-signaling, output-signaling, xor-signaling, near-vertex
    #[arg(long, conflicts_with = "strategy")]
    pub model: Option<String>,
    /// Strategy JSON file
    #[arg(long)]
    pub strategy: Option<PathBuf>,
    /// Memory kernel JSON file
    #[arg(long)]
    pub kernel: Option<PathBuf>,
}

impl SourceArgs {
    fn is_set(&self) -> bool {
        self.model.is_some() || self.strategy.is_some() || self.kernel.is_some()
    }

    fn label(&self) -> String {
        match (&self.model, &self.strategy) {
            (Some(m), _) => m.clone(),
            (None, Some(p)) => p.display().to_string(),
            (None, None) => "input-signaling".into(),
        }
    }

    fn strategy(&self) -> CliResult<Strategy> {
        match (&self.model, &self.strategy) {
            (_, Some(path)) => formats::strategy_from_json(&formats::read_text(path)?, path),
            (Some(name), None) => models::model(name),
            (None, None) => models::model("input-signaling"),
        }
    }

    fn kernel(&self) -> CliResult<Option<MemoryKernel>> {
        self.kernel
            .as_deref()
            .map(|path| formats::kernel_from_json(&formats::read_text(path)?, path))
            .transpose()
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RunArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub rounds: usize,
    #[arg(long, env = "BOXSIM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// random, alt:ODD,EVEN or script:BITS
    #[arg(long, default_value = "random")]
    pub alice: String,
    #[arg(long, default_value = "random")]
    pub bob: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    /// Read rounds from a transcript instead of simulating
    #[arg(long, conflicts_with_all = ["model", "strategy", "kernel", "rounds"])]
    pub transcript: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[arg(long, required_unless_present = "transcript")]
    pub rounds: Option<usize>,
    #[arg(long, env = "BOXSIM_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DetectArgs {
    /// G table CSV written by `sample`
    #[arg(long = "g", conflicts_with = "transcript", required_unless_present = "transcript")]
    pub g_table: Option<PathBuf>,
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Joint confidence over all 64 cells
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ProtocolArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 3.0)]
    pub k: f64,
    /// Block length; chosen from alpha, beta and k when omitted
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub x_odd: u8,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub x_even: u8,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub y_odd: u8,
}

impl ProtocolArgs {
    fn config(&self) -> CliResult<SignalingConfig> {
        let n = match self.n {
            Some(n) => n,
            None => choose_n(self.alpha, self.beta, self.k)?,
        };
        Ok(SignalingConfig::new(
            self.x_odd,
            self.x_even,
            self.y_odd,
            self.alpha,
            self.beta,
            self.k,
            n,
        )?)
    }

    /// Strategy and kernel from files or a named model, or else the
    /// input-partition realization of `(alpha, beta)`.
    fn channel(&self, source: &SourceArgs, memoryless: bool) -> CliResult<(Strategy, MemoryKernel)> {
        let (strategy, kernel) = if source.is_set() {
            let s = source.strategy()?;
            let k = match source.kernel()? {
                Some(k) => k,
                None => MemoryKernel::memoryless(&s),
            };
            (s, k)
        } else {
            input_bias_realization(self.x_odd, self.x_even, self.y_odd, self.alpha, self.beta)?
        };
        if memoryless {
            let k = MemoryKernel::memoryless(&strategy);
            return Ok((strategy, k));
        }
        Ok((strategy, kernel))
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SignalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub message: u8,
    #[arg(long, env = "BOXSIM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Also write the signalling rounds as a transcript
    #[arg(long)]
    pub transcript_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BerArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Replace the kernel by the strategy's memoryless one
    #[arg(long)]
    pub memoryless: bool,
    #[arg(long, env = "BOXSIM_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MarginArgs {
    /// Meters
    #[arg(long)]
    pub distance: f64,
    /// Seconds per round
    #[arg(long)]
    pub tau: f64,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct FeasibilityArgs {
    /// Four-digit label string, e.g. 0001
    #[arg(long)]
    pub partition: String,
    #[arg(long)]
    pub lambda: usize,
    /// `pr` or a behavior JSON file
    #[arg(long, default_value = "pr")]
    pub target: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CurvesArgs {
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 3.0)]
    pub k: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum FaultArg {
    AliceTable,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub json: bool,
    #[arg(long, hide = true, value_enum)]
    pub inject_fault: Option<FaultArg>,
}

#[derive(Debug, Args, Serialize)]
pub struct KernelArgs {
    #[arg(long, default_value = "input-signaling", conflicts_with = "strategy")]
    pub model: String,
    #[arg(long)]
    pub strategy: Option<PathBuf>,
    /// Bias size; omit for a memoryless kernel
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub x_current: u8,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub x_previous: u8,
    /// Signal label of the current round
    #[arg(long, default_value_t = 0)]
    pub signal: u8,
    /// Coarse label of the previous signal that gets the lower probability
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub alpha_class: u8,
    /// Two-class grouping of previous signals; defaults to the strategy's partition
    #[arg(long)]
    pub coarse: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_input(spec: &str) -> CliResult<InputSource> {
    let bit = |c: &str| match c.trim() {
        "0" => Ok(0u8),
        "1" => Ok(1u8),
        other => Err(CliError::Usage(format!("input bit expected, got {other:?}"))),
    };
    if spec == "random" {
        return Ok(InputSource::Random);
    }
    if let Some(rest) = spec.strip_prefix("alt:") {
        let (odd, even) = rest
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("expected alt:ODD,EVEN, got {spec:?}")))?;
        return Ok(InputSource::AlternatingPair {
            odd: bit(odd)?,
            even: bit(even)?,
        });
    }
    if let Some(bits) = spec.strip_prefix("script:") {
        let seq = bits
            .chars()
            .map(|c| bit(c.encode_utf8(&mut [0; 4])))
            .collect::<CliResult<Vec<u8>>>()?;
        return Ok(InputSource::Scripted(seq));
    }
    Err(CliError::Usage(format!(
        "input source must be random, alt:ODD,EVEN or script:BITS, got {spec:?}"
    )))
}

fn parse_partition(text: &str) -> CliResult<Partition> {
    text.parse()
        .map_err(|e| CliError::Usage(format!("partition {text:?}: {e}")))
}

fn json_bytes(value: &impl Serialize) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data");
    text.push('\n');
    text.into_bytes()
}

/// Writes the primary output to `out`, or to stdout without one.
fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => formats::write_bytes(path, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn simulate(
    source: &SourceArgs,
    alice: &InputSource,
    bob: &InputSource,
    rounds: usize,
    seed: u64,
) -> CliResult<boxsim_core::Transcript> {
    let strategy = source.strategy()?;
    let kernel = source.kernel()?;
    let t = harness::run(&strategy, kernel.as_ref(), alice, bob, rounds, seed)?;
    Ok(t.with_model(&source.label()))
}

#[derive(Serialize)]
struct CandidateReport {
    x_current: u8,
    x_previous: u8,
    y_current: u8,
    b_current: u8,
    alpha_hat: f64,
    beta_hat: f64,
    alpha_count: u64,
    beta_count: u64,
}

impl From<&MemoryCandidate> for CandidateReport {
    fn from(c: &MemoryCandidate) -> Self {
        CandidateReport {
            x_current: c.x_current,
            x_previous: c.x_previous,
            y_current: c.y_current,
            b_current: c.b_current,
            alpha_hat: c.alpha_hat,
            beta_hat: c.beta_hat,
            alpha_count: c.alpha_count,
            beta_count: c.beta_count,
        }
    }
}

#[derive(Serialize)]
struct DetectReport {
    memory_detected: bool,
    confidence: f64,
    pairs: u64,
    populated_cells: usize,
    coarse: Option<String>,
    candidates: Vec<CandidateReport>,
}

#[derive(Serialize)]
struct DecodeReport {
    bit: u8,
    zeros: u64,
    threshold: f64,
    confidence: f64,
    normal_confidence: f64,
    message: u8,
    n: u64,
    alpha: f64,
    beta: f64,
}

#[derive(Serialize)]
struct BerReport {
    trials: u64,
    errors: u64,
    error_rate: f64,
    n: u64,
    threshold: f64,
    alpha: f64,
    beta: f64,
    memoryless: bool,
}

#[derive(Serialize)]
struct MarginReport {
    distance: f64,
    tau: f64,
    n: u64,
    light_time: f64,
    protocol_time: f64,
    superluminal: bool,
}

#[derive(Serialize)]
struct FeasibilityReport {
    feasible: bool,
    partition: String,
    lambda_card: usize,
    strategy: Option<serde_json::Value>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    passed: bool,
    checks: &'a [verify::Check],
}

/// Runs one subcommand; the returned list names extra files it wrote.
fn execute(command: &Command) -> CliResult<Vec<PathBuf>> {
    let mut extra = Vec::new();
    let out = command.out();
    match command {
        Command::Run(a) => {
            let t = simulate(
                &a.source,
                &parse_input(&a.alice)?,
                &parse_input(&a.bob)?,
                a.rounds,
                a.seed,
            )?;
            emit(out, &formats::transcript_to_bytes(&t))?;
        }
        Command::Sample(a) => {
            let t = match &a.transcript {
                Some(path) => formats::read_transcript(path)?,
                None => {
                    let rounds = a.rounds.ok_or_else(|| CliError::Usage("--rounds is required".into()))?;
                    simulate(&a.source, &InputSource::Random, &InputSource::Random, rounds, a.seed)?
                }
            };
            emit(out, &formats::g_table_to_csv(&sample_g(&t)))?;
        }
        Command::Detect(a) => {
            let g = match (&a.g_table, &a.transcript) {
                (Some(path), _) => formats::g_table_from_csv(&formats::read_text(path)?, path)?,
                (None, Some(path)) => sample_g(&formats::read_transcript(path)?),
                (None, None) => return Err(CliError::Usage("one of --g or --transcript is required".into())),
            };
            let detection = detect_memory(&g, a.confidence)?;
            let report = DetectReport {
                memory_detected: detection.is_some(),
                confidence: a.confidence,
                pairs: g.total(),
                populated_cells: g.populated(),
                coarse: detection.as_ref().map(|d| d.coarse.to_string()),
                candidates: detection
                    .iter()
                    .flat_map(|d| d.candidates.iter().map(CandidateReport::from))
                    .collect(),
            };
            emit(out, &json_bytes(&report))?;
        }
        Command::Signal(a) => {
            let cfg = a.protocol.config()?;
            let (strategy, kernel) = a.protocol.channel(&a.source, false)?;
            let t = encode_run(&strategy, &kernel, &cfg, a.message, a.seed)?.with_model(&a.source.label());
            let d = decode(&t, &cfg);
            if let Some(path) = &a.transcript_out {
                formats::write_bytes(path, &formats::transcript_to_bytes(&t))?;
                extra.push(path.clone());
            }
            let report = DecodeReport {
                bit: d.bit,
                zeros: d.zeros,
                threshold: d.threshold,
                confidence: d.confidence,
                normal_confidence: d.normal_confidence,
                message: a.message,
                n: cfg.n,
                alpha: cfg.alpha,
                beta: cfg.beta,
            };
            emit(out, &json_bytes(&report))?;
        }
        Command::Ber(a) => {
            let cfg = a.protocol.config()?;
            let (strategy, kernel) = a.protocol.channel(&a.source, a.memoryless)?;
            let summary = signaling_trials(&strategy, &kernel, &cfg, a.trials, a.seed)?;
            let report = BerReport {
                trials: summary.trials,
                errors: summary.errors,
                error_rate: summary.error_rate(),
                n: cfg.n,
                threshold: cfg.threshold,
                alpha: cfg.alpha,
                beta: cfg.beta,
                memoryless: a.memoryless,
            };
            emit(out, &json_bytes(&report))?;
        }
        Command::Margin(a) => {
            let params = SuperluminalParams::new(a.distance, a.tau)?;
            let report = MarginReport {
                distance: a.distance,
                tau: a.tau,
                n: a.n,
                light_time: params.light_time(),
                protocol_time: params.protocol_time(a.n),
                superluminal: superluminal_margin(&params, a.n),
            };
            emit(out, &json_bytes(&report))?;
        }
        Command::Feasibility(a) => {
            let partition = parse_partition(&a.partition)?;
            let target = if a.target == "pr" {
                Behavior::pr_box(PrRelabeling::CANONICAL)
            } else {
                let path = Path::new(&a.target);
                formats::behavior_from_json(&formats::read_text(path)?, path)?
            };
            let found = feasibility_search(&target, &partition, a.lambda)?;
            let report = FeasibilityReport {
                feasible: found.is_some(),
                partition: partition.to_string(),
                lambda_card: a.lambda,
                strategy: found.map(|s| serde_json::from_str(&formats::strategy_to_json(&s)).expect("own output")),
            };
            emit(out, &json_bytes(&report))?;
        }
        Command::Curves(a) => {
            let n = choose_n(a.alpha, a.beta, a.k)?;
            let cfg = SignalingConfig::new(0, 1, 0, a.alpha, a.beta, a.k, n)?;
            emit(out, &formats::binomial_curves_csv(a.alpha, a.beta, n, cfg.threshold))?;
        }
        Command::Verify(a) => {
            let fault = a.inject_fault.map(|FaultArg::AliceTable| Fault::AliceTable);
            let checks = verify::run_checks(fault);
            let failed = checks.iter().filter(|c| !c.passed).count();
            if a.json {
                emit(
                    None,
                    &json_bytes(&VerifyReport {
                        passed: failed == 0,
                        checks: &checks,
                    }),
                )?;
            } else {
                let mut text = String::new();
                for c in &checks {
                    text.push_str(&format!(
                        "{:<4} {:<24} {}\n",
                        if c.passed { "ok" } else { "FAIL" },
                        c.name,
                        c.detail
                    ));
                }
                emit(None, text.as_bytes())?;
            }
            if failed > 0 {
                return Err(CliError::VerifyFailed { failed });
            }
        }
        Command::Kernel(a) => {
            let strategy = match &a.strategy {
                Some(path) => formats::strategy_from_json(&formats::read_text(path)?, path)?,
                None => models::model(&a.model)?,
            };
            let kernel = match a.delta {
                None => MemoryKernel::memoryless(&strategy),
                Some(delta) => {
                    let coarse = match &a.coarse {
                        Some(text) => parse_partition(text)?,
                        None => strategy.partition(),
                    };
                    let config = BiasConfig {
                        x_current: a.x_current,
                        x_previous: a.x_previous,
                        signal_current: a.signal,
                        alpha_class: a.alpha_class,
                    };
                    MemoryKernel::biased(&strategy, config, &coarse, delta)?
                }
            };
            emit(out, formats::kernel_to_json(&kernel).as_bytes())?;
        }
    }
    Ok(extra)
}

/// Parses arguments, runs the subcommand and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let started = SystemTime::now();
    let clock = Instant::now();
    match execute(&cli.command) {
        Ok(extra) => {
            if let Some(out) = cli.command.out() {
                let flags = serde_json::to_value(&cli.command).expect("plain data");
                let mut manifest =
                    RunManifest::new(cli.command.name(), flags, cli.command.seed(), started, clock.elapsed());
                manifest.outputs.push(out.to_path_buf());
                manifest.outputs.extend(extra);
                if let Err(e) = manifest.write(&RunManifest::path_for(out)) {
                    eprintln!("error: {e}");
                    return e.exit_code();
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
