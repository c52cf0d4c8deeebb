//! `plbc` command-line interface.
//!
//! Exit codes: 0 on success, 1 when encoding or decoding leaves a defect
//! unmasked or a word undecodable, 2 on usage or specification errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::algebra::{BinaryPolynomial, BitVector};
use crate::analysis::{
    binomial_mixture_bound, checked_code_distribution, format_probability,
    masking_failure_estimate, masking_failure_piecewise, masking_failure_upper_bound,
    parse_probability, ratio_to_f64, weight_distribution_approx, BoundReport, WeightDistribution,
};
use crate::code::{CodeSpecFile, LoadedCode, PbchSpec, ENUMERATION_LIMIT};
use crate::codec::{
    decode_pcc, decode_plbc, encode_one_step, encode_optimal, encode_two_step, DefectVector,
    EncodeResult,
};
use crate::error::{Error, Result};
use crate::sim::{
    run_decoding_comparison, run_masking_trials, DefectMode, FamilyMember, Scheme, SimConfig,
    SimReport,
};

/// Designed distance used when only `--n` names a code.
pub const DEFAULT_DELTA: usize = 5;

#[derive(Parser, Debug)]
#[command(
    name = "plbc",
    version,
    about = "Partitioned linear block codes for stuck-at defect masking"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a code and print its parameters.
    Construct(ConstructArgs),
    /// Encode a message over a defect pattern.
    Encode(EncodeArgs),
    /// Decode a received word.
    Decode(DecodeArgs),
    /// Monte Carlo failure rates as CSV.
    Simulate(SimulateArgs),
    /// Analytical masking-failure values as CSV.
    Bound(BoundArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct CodeArgs {
    /// JSON code-spec file.
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    /// Describe the code by generator polynomials (`--n`, `--g1`, `--g0`).
    #[arg(long)]
    pub pbch: bool,
    /// Block length `2^m - 1`.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<u32>,
    /// Primitive polynomial, hex.
    #[arg(long)]
    pub primitive: Option<String>,
    #[arg(long)]
    pub g1: Option<String>,
    #[arg(long)]
    pub g0: Option<String>,
    /// Designed distance of the `r = 0` family member at length `--n`.
    #[arg(long)]
    pub delta: Option<usize>,
}

impl CodeArgs {
    fn spec_file(&self) -> Result<CodeSpecFile> {
        if let Some(path) = &self.spec {
            return CodeSpecFile::read(path);
        }
        let n = self
            .n
            .ok_or_else(|| Error::InvalidSpec("give --spec FILE or --n N".into()))?;
        match (&self.g1, &self.g0) {
            (Some(g1), Some(g0)) => Ok(CodeSpecFile::Pbch {
                n,
                m: self.m,
                primitive: self.primitive.clone(),
                g1: g1.clone(),
                g0: g0.clone(),
            }),
            (None, None) if !self.pbch || self.delta.is_some() => {
                let primitive = self
                    .primitive
                    .as_deref()
                    .map(str::parse::<BinaryPolynomial>)
                    .transpose()?;
                let spec =
                    PbchSpec::family_member(n, self.delta.unwrap_or(DEFAULT_DELTA), primitive)?;
                Ok(CodeSpecFile::from_pbch(&spec))
            }
            _ => Err(Error::InvalidSpec(
                "--pbch needs both --g1 and --g0, or --delta".into(),
            )),
        }
    }

    fn load(&self) -> Result<LoadedCode> {
        self.spec_file()?.build()
    }
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Also write the code as a JSON spec file.
    #[arg(long, value_name = "FILE")]
    pub write_spec: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EncoderChoice {
    Optimal,
    OneStep,
    TwoStep,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, value_enum, default_value = "two-step")]
    pub scheme: EncoderChoice,
    /// Message bits, first bit is `w_0`.
    #[arg(long)]
    pub w: String,
    /// Defects as `index:value` pairs, e.g. "0:1 5:0".
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub defects: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecoderChoice {
    /// Syndrome table and `G1` inverse.
    Syndrome,
    /// Polynomial division; PBCH codes only.
    Polynomial,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Received word, first bit is `y_0`.
    #[arg(long)]
    pub y: String,
    #[arg(long, value_enum, default_value = "syndrome")]
    pub method: DecoderChoice,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    /// Fixed defect count `u` from `--from` to `--to`.
    U,
    /// Defect probability over `--values`.
    Epsilon,
    /// Family members of increasing designed distance `--deltas`.
    Rate,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, value_enum)]
    pub sweep: SweepAxis,
    #[arg(long)]
    pub from: Option<usize>,
    #[arg(long)]
    pub to: Option<usize>,
    /// Epsilon values, e.g. "0.01,40/1023".
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<String>,
    /// Designed distances for a rate sweep.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Vec<usize>,
    /// Defect probability at each rate-sweep point.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Fixed defect count at each rate-sweep point.
    #[arg(long)]
    pub u: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "one-step,two-step")]
    pub schemes: Vec<String>,
    /// Random-error probability on non-defective cells.
    #[arg(long, default_value = "0")]
    pub p: String,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundChoice {
    /// Zero, estimate or upper bound depending on `u`.
    Piecewise,
    Upper,
    Estimate,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Single defect count.
    #[arg(long)]
    pub u: Option<usize>,
    #[arg(long)]
    pub from: Option<usize>,
    #[arg(long)]
    pub to: Option<usize>,
    #[arg(long, value_enum, default_value = "piecewise")]
    pub kind: BoundChoice,
    /// Use the binomial approximation of the weight distribution.
    #[arg(long)]
    pub approx: bool,
    /// Read the weight distribution from a JSON file.
    #[arg(long, value_name = "FILE")]
    pub wd: Option<PathBuf>,
    /// Write the weight distribution used to a JSON file.
    #[arg(long, value_name = "FILE")]
    pub wd_out: Option<PathBuf>,
    /// Average over a binomial defect count with this probability.
    #[arg(long, value_name = "EPSILON")]
    pub mixture: Option<String>,
    /// Accepted for uniformity with `simulate`; bounds are deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Result of a command: text for the output sink and the exit status.
pub struct Outcome {
    pub output: String,
    pub status: u8,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, status: 0 }
    }
}

fn common(command: &Command) -> &CommonArgs {
    match command {
        Command::Construct(a) => &a.common,
        Command::Encode(a) => &a.common,
        Command::Decode(a) => &a.common,
        Command::Simulate(a) => &a.common,
        Command::Bound(a) => &a.common,
    }
}

/// Runs a parsed command on a thread pool of the requested size.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let threads = common(&cli.command).threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bound(a) => cmd_bound(a),
    })
}

pub fn cmd_construct(args: &ConstructArgs) -> Result<Outcome> {
    let file = args.code.spec_file()?;
    let loaded = file.build()?;
    if let Some(path) = &args.write_spec {
        let text = match &loaded.pbch {
            Some(spec) => CodeSpecFile::from_pbch(spec).to_json(),
            None => file.to_json(),
        };
        fs::write(path, text + "\n")?;
    }
    Ok(Outcome::ok(loaded.code.summary() + "\n"))
}

fn parse_bits(text: &str, what: &str) -> Result<BitVector> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what} {text:?} is not a string of 0s and 1s")))
}

pub fn cmd_encode(args: &EncodeArgs) -> Result<Outcome> {
    let code = args.code.load()?.code;
    let w = parse_bits(&args.w, "message")?;
    let s = DefectVector::parse(code.n(), &args.defects)?;
    let result: EncodeResult = match args.scheme {
        EncoderChoice::Optimal => encode_optimal(&code, &w, &s)?,
        EncoderChoice::OneStep => encode_one_step(&code, &w, &s)?,
        EncoderChoice::TwoStep => encode_two_step(&code, &w, &s)?,
    };
    Ok(Outcome {
        output: format!("{}\n{}\n", EncodeResult::CSV_HEADER, result.csv_row()),
        status: u8::from(result.unmasked > 0),
    })
}

pub fn cmd_decode(args: &DecodeArgs) -> Result<Outcome> {
    let loaded = args.code.load()?;
    let y = parse_bits(&args.y, "received word")?;
    let decoded = match args.method {
        DecoderChoice::Syndrome => decode_plbc(&loaded.code, &y).map(|(w, z)| (w, Some(z))),
        DecoderChoice::Polynomial => {
            let spec = loaded.pbch.as_ref().ok_or_else(|| {
                Error::InvalidSpec("polynomial decoding needs a pbch code spec".into())
            })?;
            decode_pcc(spec, &loaded.code, &y).map(|w| (w, None))
        }
    };
    match decoded {
        Ok((w, z)) => {
            let z = z.map(|z| z.to_string()).unwrap_or_default();
            Ok(Outcome::ok(format!("w_hat,z_hat\n{w},{z}\n")))
        }
        Err(Error::DecodeFailure(msg)) => Ok(Outcome {
            output: format!("w_hat,z_hat\n,\n# {msg}\n"),
            status: 1,
        }),
        Err(e) => Err(e),
    }
}

fn probability_f64(text: &str) -> Result<(BigRational, f64)> {
    let exact = parse_probability(text)?;
    let approx = ratio_to_f64(&exact);
    Ok((exact, approx))
}

fn simulate_point(
    member: &FamilyMember,
    schemes: &[Scheme],
    mode: DefectMode,
    p: f64,
    args: &SimulateArgs,
) -> Result<Vec<SimReport>> {
    let mut config = SimConfig::new(args.trials, args.seed, mode, schemes[0]);
    config.p = p;
    if p == 0.0 && schemes.iter().all(|s| s.is_encoder()) {
        return schemes
            .iter()
            .map(|&scheme| {
                config.scheme = scheme;
                run_masking_trials(&member.code, &config)
            })
            .collect();
    }
    run_decoding_comparison(member, &config, schemes)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Outcome> {
    let schemes = args
        .schemes
        .iter()
        .map(|s| s.trim().parse())
        .collect::<Result<Vec<Scheme>>>()?;
    if schemes.is_empty() {
        return Err(Error::InvalidSpec("--schemes is empty".into()));
    }
    let p = probability_f64(&args.p)?.1;
    let mut out = String::from(SimReport::CSV_HEADER);
    out.push('\n');
    let mut emit = |reports: Vec<SimReport>| {
        for r in reports {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
    };
    match args.sweep {
        SweepAxis::U => {
            let member = FamilyMember::from_code(args.code.load()?.code);
            let from = args.from.unwrap_or(0);
            let to = args.to.unwrap_or(member.code.n());
            if from > to {
                return Err(Error::InvalidSpec(format!(
                    "--from {from} exceeds --to {to}"
                )));
            }
            for u in from..=to {
                emit(simulate_point(
                    &member,
                    &schemes,
                    DefectMode::FixedCount(u),
                    p,
                    args,
                )?);
            }
        }
        SweepAxis::Epsilon => {
            if args.values.is_empty() {
                return Err(Error::InvalidSpec("--sweep epsilon needs --values".into()));
            }
            let member = FamilyMember::from_code(args.code.load()?.code);
            for v in &args.values {
                let eps = probability_f64(v)?.1;
                emit(simulate_point(
                    &member,
                    &schemes,
                    DefectMode::Binomial(eps),
                    p,
                    args,
                )?);
            }
        }
        SweepAxis::Rate => {
            let n = args
                .code
                .n
                .ok_or_else(|| Error::InvalidSpec("--sweep rate needs --n".into()))?;
            if args.deltas.is_empty() {
                return Err(Error::InvalidSpec("--sweep rate needs --deltas".into()));
            }
            let mode = match (&args.epsilon, args.u) {
                (Some(e), None) => DefectMode::Binomial(probability_f64(e)?.1),
                (None, Some(u)) => DefectMode::FixedCount(u),
                _ => {
                    return Err(Error::InvalidSpec(
                        "--sweep rate needs exactly one of --epsilon and --u".into(),
                    ))
                }
            };
            for &delta in &args.deltas {
                let member = FamilyMember::new(n, delta)?;
                emit(simulate_point(&member, &schemes, mode, p, args)?);
            }
        }
    }
    Ok(Outcome::ok(out))
}

fn weight_distribution(args: &BoundArgs, loaded: &LoadedCode) -> Result<WeightDistribution> {
    let code = &loaded.code;
    if let Some(path) = &args.wd {
        return WeightDistribution::from_json(&fs::read_to_string(path)?);
    }
    if args.approx {
        return weight_distribution_approx(code.n(), code.n() - code.l(), code.d0());
    }
    checked_code_distribution(code.g0()).map_err(|e| match e {
        Error::Unsupported { what, limit } => Error::Unsupported {
            what: format!(
                "{what}; neither the code nor its dual has dimension <= {ENUMERATION_LIMIT}, \
                 pass --approx for the binomial approximation"
            ),
            limit,
        },
        other => other,
    })
}

pub fn cmd_bound(args: &BoundArgs) -> Result<Outcome> {
    let loaded = args.code.load()?;
    let code = &loaded.code;
    let wd = weight_distribution(args, &loaded)?;
    if wd.n != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "weight distribution has n = {}, code has n = {}",
            wd.n,
            code.n()
        )));
    }
    if let Some(path) = &args.wd_out {
        fs::write(path, wd.to_json() + "\n")?;
    }
    let d0 = code.d0();
    if let Some(eps) = &args.mixture {
        let (eps_exact, _) = probability_f64(eps)?;
        let value = binomial_mixture_bound(&wd, &eps_exact, d0)?;
        return Ok(Outcome::ok(format!(
            "epsilon,value,value_float\n{},{},{}\n",
            eps_exact,
            value,
            format_probability(ratio_to_f64(&value))
        )));
    }
    let (from, to) = match (args.u, args.from, args.to) {
        (Some(u), None, None) => (u, u),
        (None, from, to) => (from.unwrap_or(0), to.unwrap_or(code.n())),
        _ => {
            return Err(Error::InvalidSpec(
                "give either --u or a --from/--to range".into(),
            ))
        }
    };
    let mut out = String::from(BoundReport::CSV_HEADER);
    out.push('\n');
    for u in from..=to {
        let report = match args.kind {
            BoundChoice::Piecewise => masking_failure_piecewise(&wd, u, d0)?,
            BoundChoice::Upper => masking_failure_upper_bound(&wd, u)?,
            BoundChoice::Estimate => masking_failure_estimate(&wd, u, d0)?,
        };
        out.push_str(&report.csv_row());
        out.push('\n');
    }
    Ok(Outcome::ok(out))
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    match &common(&cli.command).out {
        Some(path) => fs::write(path, &outcome.output)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(outcome.output.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|outcome| emit(&cli, &outcome).map(|_| outcome.status)) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
