//! Monte Carlo estimation over the stuck-at channel.
//!
//! Trial `t` draws from its own ChaCha stream `(seed, t)`, so a report
//! depends only on the code and the configuration, never on scheduling.
//! Inside a trial the draws are made in a fixed order (defects, noise,
//! message, random data) so that different schemes see the same channel.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::BitVector;
use crate::analysis::{binomial, RankDistribution};
use crate::code::{PbchSpec, PlbcCode};
use crate::codec::{
    apply_defects, decode_plbc, encode_one_step, encode_optimal, encode_two_step, rank_deficiency,
    DefectVector,
};
use crate::error::{Error, Result};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.5758293035489004;

/// Above this many subsets the rank distribution is sampled.
pub const EXACT_RANK_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub epsilon: f64,
    pub p: f64,
}

impl ChannelParams {
    pub fn new(epsilon: f64, p: f64) -> Result<Self> {
        check_probability("epsilon", epsilon)?;
        check_probability("p", p)?;
        Ok(ChannelParams { epsilon, p })
    }
}

fn check_probability(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("{name} = {x} is outside [0, 1]")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DefectMode {
    /// Exactly `u` defects at uniformly random positions.
    FixedCount(usize),
    /// Each cell defective independently with this probability.
    Binomial(f64),
}

impl fmt::Display for DefectMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefectMode::FixedCount(u) => write!(f, "{u}"),
            DefectMode::Binomial(eps) => write!(f, "{eps}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Optimal,
    OneStep,
    TwoStep,
    NormalBch,
    ErasureBch,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::Optimal,
        Scheme::OneStep,
        Scheme::TwoStep,
        Scheme::NormalBch,
        Scheme::ErasureBch,
    ];

    pub fn is_encoder(self) -> bool {
        matches!(self, Scheme::Optimal | Scheme::OneStep | Scheme::TwoStep)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Optimal => "optimal",
            Scheme::OneStep => "one-step",
            Scheme::TwoStep => "two-step",
            Scheme::NormalBch => "normal-bch",
            Scheme::ErasureBch => "erasure-bch",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.as_str() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown scheme {s:?}; expected one of optimal, one-step, two-step, normal-bch, erasure-bch"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub defect_mode: DefectMode,
    pub scheme: Scheme,
    /// Random-error probability on non-defective cells.
    pub p: f64,
    /// Record `u − rank(G0^Ψ)` per trial.
    pub track_rank: bool,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64, defect_mode: DefectMode, scheme: Scheme) -> Self {
        SimConfig {
            trials,
            seed,
            defect_mode,
            scheme,
            p: 0.0,
            track_rank: false,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidSpec("trials must be at least 1".into()));
        }
        check_probability("p", self.p)?;
        match self.defect_mode {
            DefectMode::FixedCount(u) if u > n => {
                Err(Error::InvalidSpec(format!("u = {u} exceeds n = {n}")))
            }
            DefectMode::Binomial(eps) => check_probability("epsilon", eps),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub scheme: Scheme,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub defect_mode: DefectMode,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    /// Trials per rank deficiency; empty unless tracking was requested.
    pub deficiency_counts: BTreeMap<usize, u64>,
}

impl SimReport {
    pub const CSV_HEADER: &'static str =
        "scheme,n,k,l,u_or_eps,trials,failures,rate,ci_low,ci_high,seed";

    fn new(code: &PlbcCode, config: &SimConfig, scheme: Scheme, tally: Tally) -> Self {
        let (ci_low, ci_high) = wilson_interval(tally.failures, config.trials, Z_99);
        SimReport {
            scheme,
            n: code.n(),
            k: code.k(),
            l: code.l(),
            defect_mode: config.defect_mode,
            trials: config.trials,
            failures: tally.failures,
            rate: tally.failures as f64 / config.trials as f64,
            ci_low,
            ci_high,
            seed: config.seed,
            deficiency_counts: tally.deficiency,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.scheme,
            self.n,
            self.k,
            self.l,
            self.defect_mode,
            self.trials,
            self.failures,
            self.rate,
            self.ci_low,
            self.ci_high,
            self.seed
        )
    }

    /// Binomial standard error of the rate, `sqrt(p(1−p)/N)`.
    pub fn std_error(&self) -> f64 {
        (self.rate * (1.0 - self.rate) / self.trials as f64).sqrt()
    }

    /// Empirical rank-deficiency distribution, when tracked.
    pub fn rank_distribution(&self) -> Option<RankDistribution> {
        match self.defect_mode {
            DefectMode::FixedCount(u) if !self.deficiency_counts.is_empty() => Some(
                RankDistribution::from_counts(u, &self.deficiency_counts, false),
            ),
            _ => None,
        }
    }
}

/// Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

/// The random stream of trial `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn sample_defects<R: Rng + ?Sized>(n: usize, mode: DefectMode, rng: &mut R) -> DefectVector {
    let mut s = DefectVector::none(n);
    match mode {
        DefectMode::FixedCount(u) => {
            let mut cells: Vec<usize> = (0..n).collect();
            let (chosen, _) = cells.partial_shuffle(rng, u.min(n));
            for &i in chosen.iter() {
                s.set(i, Some(rng.gen()));
            }
        }
        DefectMode::Binomial(eps) => {
            for i in 0..n {
                if rng.gen_bool(eps) {
                    s.set(i, Some(rng.gen()));
                }
            }
        }
    }
    s
}

pub fn sample_noise<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> BitVector {
    let mut z = BitVector::zeros(n);
    if p > 0.0 {
        for i in 0..n {
            if rng.gen_bool(p) {
                z.set(i, true);
            }
        }
    }
    z
}

fn sample_bits<R: Rng + ?Sized>(len: usize, rng: &mut R) -> BitVector {
    let bits: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
    BitVector::from_bools(&bits)
}

/// One trial's channel realization.
struct Draw {
    s: DefectVector,
    /// Noise restricted to non-defective cells.
    z: BitVector,
    w: BitVector,
    /// Stand-in codeword of the baseline BCH code.
    data: BitVector,
}

fn draw(code: &PlbcCode, config: &SimConfig, trial: u64) -> Draw {
    let n = code.n();
    let mut rng = trial_rng(config.seed, trial);
    let s = sample_defects(n, config.defect_mode, &mut rng);
    let mut z = sample_noise(n, config.p, &mut rng);
    for i in s.positions() {
        z.set(i, false);
    }
    let w = sample_bits(code.k(), &mut rng);
    let data = sample_bits(n, &mut rng);
    Draw { s, z, w, data }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    failures: u64,
    deficiency: BTreeMap<usize, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.failures += other.failures;
        for (j, c) in other.deficiency {
            *self.deficiency.entry(j).or_insert(0) += c;
        }
        self
    }
}

fn encode(code: &PlbcCode, scheme: Scheme, w: &BitVector, s: &DefectVector) -> Result<BitVector> {
    let result = match scheme {
        Scheme::Optimal => encode_optimal(code, w, s)?,
        Scheme::OneStep => encode_one_step(code, w, s)?,
        Scheme::TwoStep => encode_two_step(code, w, s)?,
        other => {
            return Err(Error::InvalidSpec(format!(
                "{other} is not an encoding scheme"
            )));
        }
    };
    Ok(result.codeword)
}

/// Masking failure rate: a trial fails when any defect is left unmasked.
pub fn run_masking_trials(code: &PlbcCode, config: &SimConfig) -> Result<SimReport> {
    config.validate(code.n())?;
    if !config.scheme.is_encoder() {
        return Err(Error::InvalidSpec(format!(
            "{} is not an encoding scheme",
            config.scheme
        )));
    }
    let tally = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let dr = draw(code, config, t);
            let c = encode(code, config.scheme, &dr.w, &dr.s)?;
            let mut tally = Tally::default();
            if crate::codec::unmasked_count(&c, &dr.s)? > 0 {
                tally.failures = 1;
            }
            if config.track_rank {
                tally
                    .deficiency
                    .insert(rank_deficiency(code, &dr.s.positions()), 1);
            }
            Ok::<_, Error>(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(SimReport::new(code, config, config.scheme, tally))
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let w = combo.len();
    for j in (0..w).rev() {
        if combo[j] < n - w + j {
            combo[j] += 1;
            for i in j + 1..w {
                combo[i] = combo[i - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Distribution of `u − rank(G0^Ψ)` over uniformly drawn `u`-subsets Ψ;
/// every subset is visited when there are at most [`EXACT_RANK_LIMIT`].
pub fn rank_distribution(
    code: &PlbcCode,
    u: usize,
    trials: u64,
    seed: u64,
) -> Result<RankDistribution> {
    let n = code.n();
    if u > n {
        return Err(Error::Domain(format!("u = {u} exceeds n = {n}")));
    }
    let subsets = binomial(n, u);
    let mut counts = BTreeMap::new();
    if subsets <= EXACT_RANK_LIMIT.into() {
        let mut combo: Vec<usize> = (0..u).collect();
        loop {
            *counts.entry(rank_deficiency(code, &combo)).or_insert(0u64) += 1;
            if !next_combination(&mut combo, n) {
                break;
            }
        }
        return Ok(RankDistribution::from_counts(u, &counts, true));
    }
    if trials == 0 {
        return Err(Error::InvalidSpec("trials must be at least 1".into()));
    }
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = sample_defects(n, DefectMode::FixedCount(u), &mut trial_rng(seed, t));
            let mut deficiency = BTreeMap::new();
            deficiency.insert(rank_deficiency(code, &s.positions()), 1);
            Tally {
                failures: 0,
                deficiency,
            }
        })
        .reduce(Tally::default, Tally::merge);
    Ok(RankDistribution::from_counts(u, &tally.deficiency, false))
}

/// A code together with the minimum distance `d` of the BCH code it is
/// compared against.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub code: PlbcCode,
    pub d: usize,
}

impl FamilyMember {
    /// `r = 0` member of designed distance `delta`; the baselines use the
    /// same redundancy, so `d = d0`.
    pub fn new(n: usize, delta: usize) -> Result<Self> {
        let code = PbchSpec::family_member(n, delta, None)?.build()?;
        Ok(FamilyMember::from_code(code))
    }

    pub fn from_code(code: PlbcCode) -> Self {
        let d = code.d0();
        FamilyMember { code, d }
    }
}

fn scheme_fails(member: &FamilyMember, scheme: Scheme, dr: &Draw) -> Result<bool> {
    let code = &member.code;
    let u = dr.s.count();
    let noise = dr.z.weight();
    match scheme {
        Scheme::NormalBch => {
            let wrong = dr
                .data
                .xor(dr.s.stuck_mask())
                .and(dr.s.defect_mask())
                .weight();
            Ok(wrong + noise > (member.d.saturating_sub(1)) / 2)
        }
        Scheme::ErasureBch => Ok(2 * noise + u >= member.d),
        _ => {
            let c = encode(code, scheme, &dr.w, &dr.s)?;
            let y = apply_defects(&c, &dr.s, &dr.z)?;
            if code.r() == 0 {
                Ok(y != c)
            } else {
                let (w_hat, _) = decode_plbc(code, &y)?;
                Ok(w_hat != dr.w)
            }
        }
    }
}

/// Decoding failure of every scheme in `schemes` over the same channel
/// draws; `config.scheme` is ignored.
pub fn run_decoding_comparison(
    member: &FamilyMember,
    config: &SimConfig,
    schemes: &[Scheme],
) -> Result<Vec<SimReport>> {
    let code = &member.code;
    config.validate(code.n())?;
    let zero = || vec![0u64; schemes.len()];
    let failures = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let dr = draw(code, config, t);
            schemes
                .iter()
                .map(|&scheme| scheme_fails(member, scheme, &dr).map(u64::from))
                .collect::<Result<Vec<u64>>>()
        })
        .try_reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            Ok(a)
        })?;
    Ok(schemes
        .iter()
        .zip(failures)
        .map(|(&scheme, failures)| {
            let tally = Tally {
                failures,
                deficiency: BTreeMap::new(),
            };
            SimReport::new(code, config, scheme, tally)
        })
        .collect())
}
