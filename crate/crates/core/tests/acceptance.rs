//! Acceptance checks. Each prints one PASS/FAIL line; the process exits
//! non-zero if any check fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plbc::analysis::{
    checked_code_distribution, lemma2_failure_from_rank, macwilliams_transform,
    masking_failure_estimate, masking_failure_upper_bound, ratio_to_f64,
    weight_distribution_approx, weight_distribution_exhaustive, RankDistribution,
    WeightDistribution,
};
use plbc::codec::{encode_one_step, encode_optimal, encode_two_step, EncodeStep};
use plbc::sim::{
    rank_distribution, run_decoding_comparison, run_masking_trials, DefectMode, FamilyMember,
    Scheme, SimConfig, SimReport,
};
use plbc::{BinaryPolynomial, BitMatrix, BitVector, DefectVector, PbchSpec, PlbcCode};

type Check = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Check);

fn q(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn seven_three_four() -> PlbcCode {
    PbchSpec::new(7, None, BinaryPolynomial::one(), "0xb".parse().unwrap())
        .unwrap()
        .build()
        .unwrap()
}

fn n31(delta: usize) -> PlbcCode {
    PbchSpec::family_member(31, delta, None)
        .unwrap()
        .build()
        .unwrap()
}

fn masking(code: &PlbcCode, scheme: Scheme, u: usize, trials: u64, seed: u64) -> SimReport {
    let config = SimConfig::new(trials, seed, DefectMode::FixedCount(u), scheme);
    run_masking_trials(code, &config).unwrap()
}

fn sigma(rate: f64, trials: u64) -> f64 {
    (rate * (1.0 - rate) / trials as f64).sqrt()
}

/// Masking never fails below d0.
fn masking_below_d0() -> Check {
    let trials = 100_000;
    let mut runs = 0;
    for code in [seven_three_four(), n31(7)] {
        for u in 0..code.d0() {
            for scheme in [Scheme::OneStep, Scheme::TwoStep] {
                let r = masking(&code, scheme, u, trials, 1000 + u as u64);
                if r.failures != 0 {
                    return Err(format!(
                        "n={} u={u} {scheme}: {} failures",
                        code.n(),
                        r.failures
                    ));
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs of {trials} trials, zero failures"))
}

/// All `u`-subsets of `0..n`.
fn subsets(n: usize, u: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == u)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// Fraction of `u`-subsets whose G0 columns are dependent, by direct rank.
fn dependent_fraction(code: &PlbcCode, u: usize) -> BigRational {
    let all = subsets(code.n(), u);
    let bad = all
        .iter()
        .filter(|p| code.g0().select_columns(p).rank() < u)
        .count();
    q(bad as u64, all.len() as u64)
}

/// Simulated masking failure matches the estimate.
fn estimate_match() -> Check {
    let code = seven_three_four();
    let wd = checked_code_distribution(code.g0()).unwrap();
    let mut notes = Vec::new();
    for (u, expected) in [(4, q(1, 10)), (5, q(1, 2))] {
        let est = masking_failure_estimate(&wd, u, code.d0()).unwrap().value;
        let from_subsets = dependent_fraction(&code, u) / BigRational::from_integer(2.into());
        if est != expected || from_subsets != expected {
            return Err(format!(
                "u={u}: estimate {est}, subsets {from_subsets}, expected {expected}"
            ));
        }
        let r = masking(&code, Scheme::TwoStep, u, 1_000_000, 20 + u as u64);
        let e = ratio_to_f64(&expected);
        if !(r.ci_low <= e && e <= r.ci_high) {
            return Err(format!(
                "n=7 u={u}: rate {} CI [{}, {}] misses {e}",
                r.rate, r.ci_low, r.ci_high
            ));
        }
        notes.push(format!("n=7 u={u} rate={:.5}", r.rate));
    }

    let code = n31(7);
    let dual = weight_distribution_exhaustive(code.g0()).unwrap();
    let wd = macwilliams_transform(&dual).unwrap();
    let (d0, t0) = (code.d0(), code.t0());
    let trials = 1_000_000;
    for u in d0..=d0 + t0 {
        let est = ratio_to_f64(&masking_failure_estimate(&wd, u, d0).unwrap().value);
        let r = masking(&code, Scheme::TwoStep, u, trials, 40 + u as u64);
        let s = sigma(est, trials);
        if (r.rate - est).abs() > 3.0 * s {
            return Err(format!(
                "n=31 u={u}: rate {} vs estimate {est} (3 sigma {})",
                r.rate,
                3.0 * s
            ));
        }
        notes.push(format!("n=31 u={u} rate={:.5} est={est:.5}", r.rate));
    }
    Ok(notes.join("; "))
}

/// Simulated masking failure never exceeds the upper bound by 3 sigma.
fn upper_bound_dominance() -> Check {
    let trials = 100_000;
    let mut cases = vec![(seven_three_four(), 7usize)];
    for delta in [5, 7] {
        cases.push((n31(delta), 12));
    }
    let mut worst = f64::NEG_INFINITY;
    for (code, max_u) in &cases {
        let wd = checked_code_distribution(code.g0()).unwrap();
        for u in 1..=*max_u {
            let bound = ratio_to_f64(&masking_failure_upper_bound(&wd, u).unwrap().value);
            let r = masking(code, Scheme::TwoStep, u, trials, 300 + u as u64);
            let slack = r.rate - bound - 3.0 * sigma(r.rate, trials);
            worst = worst.max(r.rate - bound);
            if slack > 0.0 {
                return Err(format!(
                    "n={} l={} u={u}: rate {} above bound {bound}",
                    code.n(),
                    code.l(),
                    r.rate
                ));
            }
        }
    }
    Ok(format!(
        "{} codes, max(rate - bound) = {worst:.5}",
        cases.len()
    ))
}

/// Solvability of the full system by an explicit rank comparison of
/// `G0^Ψ` with and without the right-hand side appended.
fn rank_condition(code: &PlbcCode, w: &BitVector, s: &DefectVector) -> bool {
    let psi = s.positions();
    let a = code.g0().select_columns(&psi);
    let c1 = code.g1().left_mul(w).unwrap();
    let b = BitVector::from_bools(
        &psi.iter()
            .map(|&i| c1.get(i) ^ s.stuck_at(i).unwrap())
            .collect::<Vec<_>>(),
    );
    let augmented = a
        .stack(&BitMatrix::from_rows(psi.len(), vec![b]).unwrap())
        .unwrap();
    a.rank() == augmented.rank()
}

fn oracle_case(code: &PlbcCode, w: &BitVector, s: &DefectVector) -> Result<(), String> {
    let two = encode_two_step(code, w, s).unwrap();
    let one = encode_one_step(code, w, s).unwrap();
    let opt = encode_optimal(code, w, s).unwrap();
    let step1 = two.step != EncodeStep::Step2;
    let rank_ok = rank_condition(code, w, s);
    let residual_zero = opt.unmasked == 0;
    if step1 != rank_ok || rank_ok != residual_zero {
        return Err(format!(
            "w={w} s=[{s}]: step1 {step1}, rank {rank_ok}, optimal residual {}",
            opt.unmasked
        ));
    }
    if two.unmasked > one.unmasked || (!step1 && two.unmasked != one.unmasked) {
        return Err(format!(
            "w={w} s=[{s}]: two-step {} vs one-step {}",
            two.unmasked, one.unmasked
        ));
    }
    Ok(())
}

fn random_code(rng: &mut ChaCha8Rng) -> PlbcCode {
    loop {
        let n = rng.gen_range(3..=12);
        let k = rng.gen_range(1..n);
        let l = rng.gen_range(1..=n - k);
        let mut random = |rows: usize| {
            let rows = (0..rows)
                .map(|_| BitVector::from_u64(n, rng.gen::<u64>() & ((1 << n) - 1)))
                .collect();
            BitMatrix::from_rows(n, rows).unwrap()
        };
        let (g1, g0) = (random(k), random(l));
        if let Ok(code) = PlbcCode::from_generators(g1, g0) {
            return code;
        }
    }
}

/// Step-1 solvability, the rank condition and a zero optimal residual agree.
fn oracle_equivalence() -> Check {
    let code = seven_three_four();
    let mut cases = 0u64;
    for u in 0..=5 {
        for psi in subsets(7, u) {
            for stuck in 0u32..1 << u {
                let pairs: Vec<(usize, bool)> = psi
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| (i, stuck >> j & 1 == 1))
                    .collect();
                let s = DefectVector::from_pairs(7, &pairs).unwrap();
                for w in 0..8 {
                    oracle_case(&code, &BitVector::from_u64(3, w), &s)?;
                    cases += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut code = random_code(&mut rng);
    for i in 0..10_000u64 {
        if i % 50 == 0 {
            code = random_code(&mut rng);
        }
        let n = code.n();
        let w = BitVector::from_u64(code.k(), rng.gen::<u64>() & ((1 << code.k()) - 1));
        let mut s = DefectVector::none(n);
        for cell in 0..n {
            if rng.gen_bool(0.4) {
                s.set(cell, Some(rng.gen()));
            }
        }
        oracle_case(&code, &w, &s)?;
    }
    Ok(format!(
        "{cases} exhaustive cases on n=7, 10000 random cases on n<=12"
    ))
}

/// Exact average failure over all (w, s) equals the rank-distribution formula.
fn rank_consistency() -> Check {
    let code = seven_three_four();
    let mut notes = Vec::new();
    for (u, expected) in [(4, q(1, 10)), (5, q(1, 2))] {
        let mut failures = 0u64;
        let mut total = 0u64;
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        for psi in subsets(7, u) {
            *counts
                .entry(u - code.g0().select_columns(&psi).rank())
                .or_insert(0) += 1;
            for stuck in 0u32..1 << u {
                let pairs: Vec<(usize, bool)> = psi
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| (i, stuck >> j & 1 == 1))
                    .collect();
                let s = DefectVector::from_pairs(7, &pairs).unwrap();
                for w in 0..8 {
                    total += 1;
                    if encode_optimal(&code, &BitVector::from_u64(3, w), &s)
                        .unwrap()
                        .unmasked
                        > 0
                    {
                        failures += 1;
                    }
                }
            }
        }
        let exact = q(failures, total);
        let rd = RankDistribution::from_counts(u, &counts, true);
        let predicted = lemma2_failure_from_rank(&rd).unwrap();
        let library =
            lemma2_failure_from_rank(&rank_distribution(&code, u, 0, 0).unwrap()).unwrap();
        if exact != expected || predicted != expected || library != expected {
            return Err(format!(
                "u={u}: exact {exact}, formula {predicted}, library {library}"
            ));
        }
        notes.push(format!("u={u}: {exact}"));
    }
    Ok(notes.join("; "))
}

fn counts(wd: &WeightDistribution) -> Vec<String> {
    wd.counts.iter().map(|c| c.to_string()).collect()
}

/// MacWilliams transform agrees with direct enumeration.
fn macwilliams_round_trip() -> Check {
    let simplex = BitMatrix::parse_rows(&["1011100", "0101110", "0010111"]).unwrap();
    let hamming = BitMatrix::parse_rows(&["1101000", "0110100", "0011010", "0001101"]).unwrap();
    let s = weight_distribution_exhaustive(&simplex).unwrap();
    let h = weight_distribution_exhaustive(&hamming).unwrap();
    if counts(&macwilliams_transform(&s).unwrap()) != counts(&h) {
        return Err("simplex transform differs from Hamming enumeration".into());
    }
    let code = n31(7);
    let dual = weight_distribution_exhaustive(code.g0()).unwrap();
    let via_transform = macwilliams_transform(&dual).unwrap();
    let direct = checked_code_distribution(code.g0()).unwrap();
    for wd in [&s, &h, &dual, &via_transform] {
        let back = macwilliams_transform(&macwilliams_transform(wd).unwrap()).unwrap();
        if back.counts != wd.counts {
            return Err(format!("transform twice changed {wd}"));
        }
    }
    if via_transform.counts != direct.counts {
        return Err("n=31 MacWilliams distribution differs from direct enumeration".into());
    }
    let d0 = code.d0();
    for u in 0..=31 {
        let a = masking_failure_upper_bound(&via_transform, u)
            .unwrap()
            .value;
        let b = masking_failure_upper_bound(&direct, u).unwrap().value;
        if a != b {
            return Err(format!("upper bound differs at u={u}"));
        }
        if let (Ok(a), Ok(b)) = (
            masking_failure_estimate(&via_transform, u, d0),
            masking_failure_estimate(&direct, u, d0),
        ) {
            if a != b {
                return Err(format!("estimate differs at u={u}"));
            }
        }
    }
    Ok(format!("n=31 l={} checked code: {direct}", code.l()))
}

/// Decoding-failure ordering of the four schemes at n = 1023.
fn scheme_ordering() -> Check {
    let eps = 40.0 / 1023.0;
    let trials = 10_000;
    let schemes = [
        Scheme::NormalBch,
        Scheme::ErasureBch,
        Scheme::OneStep,
        Scheme::TwoStep,
    ];
    let mut notes = Vec::new();
    let mut failed = Vec::new();
    for delta in (41..=65).step_by(4) {
        let member = FamilyMember::new(1023, delta).unwrap();
        let config = SimConfig::new(trials, 7, DefectMode::Binomial(eps), Scheme::TwoStep);
        let r = run_decoding_comparison(&member, &config, &schemes).unwrap();
        let (normal, erasure, one, two) = (r[0].rate, r[1].rate, r[2].rate, r[3].rate);
        let combined = 3.0 * (sigma(erasure, trials).powi(2) + sigma(one, trials).powi(2)).sqrt();
        notes.push(format!(
            "d0={} normal={normal} erasure={erasure} one={one} two={two}",
            member.d
        ));
        if normal < erasure {
            failed.push(format!(
                "d0={}: normal {normal} < erasure {erasure}",
                member.d
            ));
        }
        if (erasure - one).abs() > combined {
            failed.push(format!(
                "d0={}: |erasure - one-step| = {:.5} > {combined:.5}",
                member.d,
                (erasure - one).abs()
            ));
        }
        if one >= 1e-2 && two >= one {
            failed.push(format!(
                "d0={}: two-step {two} not below one-step {one}",
                member.d
            ));
        }
    }
    let detail = notes.join("; ");
    if failed.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; points: {detail}", failed.join("; ")))
    }
}

/// Approximate-distribution estimate at u = 40, n = 1023 is below 1e-20.
fn approx_regime() -> Check {
    let n = 1023;
    let u = 40;
    let limit = BigRational::new(BigInt::one(), BigInt::from(10).pow(20));
    let mut members = Vec::new();
    let mut last_l = None;
    for delta in 3..=u {
        let spec = PbchSpec::family_member(n, delta, None).unwrap();
        if last_l == Some(spec.l()) {
            continue;
        }
        last_l = Some(spec.l());
        let code = spec.build().unwrap();
        let (d0, t0) = (code.d0(), code.t0());
        if !(d0 <= u && u <= d0 + t0) {
            continue;
        }
        let wd = weight_distribution_approx(n, n - code.l(), d0).unwrap();
        let value = masking_failure_estimate(&wd, u, d0).unwrap().value;
        if value.is_zero() || value >= limit {
            return Err(format!(
                "d0={d0}: estimate {} not in (0, 1e-20)",
                ratio_to_f64(&value)
            ));
        }
        members.push(format!("d0={d0}:{:.2e}", ratio_to_f64(&value)));
    }
    if members.is_empty() {
        return Err("no family member has d0 <= 40 <= d0 + t0".into());
    }
    Ok(members.join(" "))
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_plbc"))
        .args(args)
        .output()
        .expect("plbc runs");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

/// Same seed, different thread counts, identical bytes.
fn determinism() -> Check {
    let runs: [&[&str]; 3] = [
        &[
            "simulate",
            "--n",
            "31",
            "--delta",
            "7",
            "--sweep",
            "u",
            "--from",
            "5",
            "--to",
            "10",
            "--schemes",
            "one-step,two-step,normal-bch,erasure-bch",
            "--trials",
            "20000",
            "--seed",
            "9",
        ],
        &[
            "simulate",
            "--sweep",
            "rate",
            "--n",
            "1023",
            "--deltas",
            "51,61",
            "--epsilon",
            "40/1023",
            "--schemes",
            "one-step,two-step",
            "--trials",
            "2000",
            "--seed",
            "3",
        ],
        &["bound", "--n", "31", "--delta", "7", "--mixture", "4/31"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for threads in ["1", "2", "5"] {
            let mut a = args.to_vec();
            a.extend_from_slice(&["--threads", threads]);
            outputs.push(cli(&a));
        }
        if outputs.iter().any(|o| o != &outputs[0]) {
            return Err(format!(
                "{} differs across thread counts",
                args[..3].join(" ")
            ));
        }
    }
    Ok("simulate and bound outputs identical for 1, 2 and 5 threads".into())
}

fn main() -> ExitCode {
    let checks: [Criterion; 9] = [
        (1, "masking below d0", masking_below_d0),
        (2, "estimate match", estimate_match),
        (3, "upper-bound dominance", upper_bound_dominance),
        (4, "encoder oracle equivalence", oracle_equivalence),
        (5, "rank-deficiency consistency", rank_consistency),
        (6, "MacWilliams round trip", macwilliams_round_trip),
        (7, "scheme ordering at n=1023", scheme_ordering),
        (8, "approximate-distribution regime", approx_regime),
        (9, "determinism across threads", determinism),
    ];
    let mut failures = 0;
    for (id, name, check) in checks {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id} ({name}): PASS [{secs:.1}s] {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {id} ({name}): FAIL [{secs:.1}s] {detail}");
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
