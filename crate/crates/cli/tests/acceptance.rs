//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `--nocapture`; the test name carries the same information).
//!
//! Criteria are serialized through a mutex so the stated runtime budgets are
//! measured without contention from sibling criteria.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use signed_engel::gof::chi_square_test;
use signed_engel::markov::{
    simulate, transition_pmf, transition_row_sum, ChainSource, StateValue,
};
use signed_engel::stats::{run_suite, Verdict, VerificationReport};
use signed_engel::{
    basic_interval, closed_form_length, enumerate, expand_rational, rational_to_f64, reconstruct,
    Rational, SymbolSequence, Variant,
};
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

static SERIAL: Mutex<()> = Mutex::new(());

const MASTER_SEED: u64 = 42;

fn conclude(id: u32, name: &str, pass: bool, detail: String) {
    println!("acceptance {id:02} {name}: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id:02} ({name}) failed: {detail}");
}

fn within_budget(id: u32, name: &str, elapsed: Duration, budget: Duration) {
    conclude(
        id,
        &format!("{name} runtime"),
        elapsed <= budget,
        format!("took {elapsed:?}, budget {budget:?}"),
    );
}

fn suite(name: &str) -> Vec<VerificationReport> {
    run_suite(name, MASTER_SEED, None).expect("suite runs")
}

fn assert_check(id: u32, report: &VerificationReport, check: &str) {
    let line = report
        .check_named(check)
        .unwrap_or_else(|| panic!("criterion {id:02}: missing check {check} in {report:?}"));
    conclude(
        id,
        &format!("{}::{}", report.suite, check),
        line.pass,
        format!("value {} violates gate {:?}", line.value, line.gate),
    );
}

/// Criterion 1: for every p/q with 0 < p < q <= 500, expand -> reconstruct is
/// bit-exact and the digit/sign word is admissible. Budget 10 s.
#[test]
fn criterion_01_exact_round_trip() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let failures: usize = (2i64..=500)
        .into_par_iter()
        .map(|q| {
            let mut bad = 0;
            for p in 1..q {
                let x = Rational::new(BigInt::from(p), BigInt::from(q));
                let e = expand_rational(&x, 64).expect("domain ok");
                if !e.terminated() || reconstruct(&e, e.len()).expect("length ok") != x {
                    bad += 1;
                    continue;
                }
                let word = SymbolSequence::from_expansion(&e, e.len()).expect("well-formed");
                if !word.check_admissible(Variant::Standard).is_valid() {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    let elapsed = start.elapsed();
    conclude(1, "exact round-trip q<=500", failures == 0, format!("{failures} fractions failed"));
    within_budget(1, "exact round-trip", elapsed, Duration::from_secs(10));
}

/// Criterion 2: cylinder endpoint differences equal the closed form exactly
/// for n <= 3, final digit <= 20; order-n cylinders pairwise disjoint; the
/// order-1 total length telescopes to 1 - 1/(B+1). Budget 5 s.
#[test]
fn criterion_02_interval_identities() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut all_lengths_match = true;
    let mut all_disjoint = true;
    for n in 1..=3usize {
        let mut intervals: Vec<_> =
            enumerate(n, 20).iter().map(|s| basic_interval(s).expect("admissible")).collect();
        for i in &intervals {
            if i.length != closed_form_length(&i.symbols) || i.length != &i.upper - &i.lower {
                all_lengths_match = false;
            }
        }
        intervals.sort_by(|a, b| a.lower.cmp(&b.lower));
        for w in intervals.windows(2) {
            if w[0].upper > w[1].lower {
                all_disjoint = false;
            }
        }
        if n == 1 {
            let total: Rational =
                intervals.iter().fold(Rational::zero(), |acc, i| acc + i.length.clone());
            let expected =
                Rational::new(BigInt::from(1), BigInt::from(1)) - Rational::new(BigInt::from(1), BigInt::from(21));
            conclude(2, "order-1 total length", total == expected, format!("{total}"));
        }
    }
    conclude(2, "endpoint difference = closed form", all_lengths_match, String::new());
    conclude(2, "cylinders pairwise disjoint", all_disjoint, String::new());
    within_budget(2, "interval identities", start.elapsed(), Duration::from_secs(5));
}

/// Criterion 3: for k <= 1000, term-by-term rational row sums up to
/// L = k + 10^4 equal 1 - (2k-1)(2k+1)/(2k(2L+1)) exactly. Budget 30 s.
#[test]
fn criterion_03_kernel_identities() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let failures: usize = (1u64..=1000)
        .into_par_iter()
        .map(|k| {
            let l_max = k + 10_000;
            let mut sum = Rational::zero();
            for l in k..=l_max {
                sum += transition_pmf(k, l);
            }
            usize::from(sum != transition_row_sum(k, l_max))
        })
        .sum();
    let elapsed = start.elapsed();
    conclude(3, "row-sum identity k<=1000, L=k+10^4", failures == 0, format!("{failures} rows failed"));
    within_budget(3, "kernel identities", elapsed, Duration::from_secs(30));
}

/// Criterion 4: surrogate-chain transition frequencies from states 2 and 4
/// match the exact kernel (chi-square p > 0.01) at count = 10^5, pinned seed.
/// Budget 30 s.
#[test]
fn criterion_04_law_equivalence() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let batch = simulate(ChainSource::Surrogate, 2, 100_000, MASTER_SEED);
    for first in [2u64, 4] {
        let k = first / 2;
        let rows: Vec<u64> = batch
            .trajectories
            .iter()
            .filter(|t| t.states[0] == StateValue::Exact(first))
            .map(|t| t.states[1].exact().expect("small states stay exact"))
            .collect();
        let l_hi = k + 14;
        let mut observed = vec![0u64; (l_hi - k + 2) as usize];
        for d in &rows {
            let l = d / 2;
            let idx = if l <= l_hi { (l - k) as usize } else { observed.len() - 1 };
            observed[idx] += 1;
        }
        let mut expected: Vec<f64> = (k..=l_hi)
            .map(|l| rational_to_f64(&transition_pmf(k, l)) * rows.len() as f64)
            .collect();
        expected.push((1.0 - rational_to_f64(&transition_row_sum(k, l_hi))) * rows.len() as f64);
        let chi = chi_square_test(&observed, &expected);
        conclude(
            4,
            &format!("surrogate kernel from state {first}"),
            chi.p_value > 0.01,
            format!("chi-square p = {} (statistic {})", chi.p_value, chi.statistic),
        );
    }
    within_budget(4, "law equivalence", start.elapsed(), Duration::from_secs(30));
}

/// Criterion 5: empirical first-digit law over 10^5 uniform decimal inputs:
/// chi-square p > 0.01 against the exact pmf and frequency of digit 2 within
/// 2/3 +/- 0.01.
#[test]
fn criterion_05_initial_law() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let reports = suite("pmf");
    assert_check(5, &reports[0], "pmf_chi_square");
    assert_check(5, &reports[0], "first_cell_frequency");
}

/// Criterion 6: LLN at n = 10^4, count = 200 for both chains: at least 95%
/// of trajectories within 0.05 of 1, for the digit and the gap statistic.
/// Budget 60 s.
#[test]
fn criterion_06_lln() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    for report in suite("lln") {
        assert_check(6, &report, "digit_lln");
        assert_check(6, &report, "gap_lln");
    }
    within_budget(6, "lln", start.elapsed(), Duration::from_secs(60));
}

/// Criterion 7: CLT at n = 10^4, count = 10^4 for both chains: KS distance
/// to the standard normal below 0.05 for the digit and gap statistics.
/// Budget 5 min.
#[test]
fn criterion_07_clt() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    for report in suite("clt") {
        assert_check(7, &report, "digit_clt");
        assert_check(7, &report, "gap_clt");
    }
    within_budget(7, "clt", start.elapsed(), Duration::from_secs(300));
}

/// Criterion 8: Borel-Bernstein dichotomy for phi(n) = n (divergent) and
/// phi(n) = n (ln n)^3 (convergent), for the ratio sequence and its running
/// max.
#[test]
fn criterion_08_borel_bernstein() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let reports = suite("bb");
    let divergent = &reports[0];
    assert_check(8, divergent, "ratio_hit_fraction");
    assert_check(8, divergent, "ratio_median_growth");
    assert_check(8, divergent, "max_hit_fraction");
    assert_check(8, divergent, "max_median_growth");
    let convergent = &reports[1];
    assert_check(8, convergent, "ratio_zero_fraction");
    assert_check(8, convergent, "max_zero_fraction");
}

/// Criterion 9: residual laws from certified expansions: bracket tails
/// 1/(2k-1) for k <= 5 within 3 sigma, unit-bracket frequency 2/3 +/- 0.02,
/// joint tail 1/9 within 3 sigma, and residual marginals uniform (KS < 0.03).
#[test]
fn criterion_09_residual_laws() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let reports = suite("yn");
    let r = &reports[0];
    for k in 1..=5u32 {
        assert_check(9, r, &format!("bracket_tail_{}", 2 * k - 1));
    }
    assert_check(9, r, "unit_bracket_frequency");
    assert_check(9, r, "joint_bracket_tail_3_3");
    for level in 1..=5u32 {
        assert_check(9, r, &format!("residual_{level}_uniform_ks"));
    }
}

/// Criterion 10: smoke gates (explicitly non-quantitative): iterated-log
/// statistic extremes inside (0,3)/(-3,0), running-max growth exponent in
/// (0.6, 1.4) for at least 90% of trajectories, and repeat frequency at
/// step 50 below 0.02.
#[test]
fn criterion_10_smoke() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let lil = suite("lil");
    assert_check(10, &lil[0], "running_sup_in_band");
    assert_check(10, &lil[0], "running_inf_in_band");
    let ratio = suite("ratio");
    assert_check(10, &ratio[0], "max_growth_exponent");
    assert_check(10, &ratio[0], "repeat_rarity");
    conclude(
        10,
        "all smoke suites Pass",
        lil[0].verdict == Verdict::Pass && ratio[0].verdict == Verdict::Pass,
        format!("lil {:?}, ratio {:?}", lil[0].verdict, ratio[0].verdict),
    );
}

/// Criterion 11: `verify --suite all --seed 42` is byte-identical across
/// repeated runs and across worker counts 1, 4 and 8, and exits 0.
#[test]
fn criterion_11_determinism() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let run = |threads: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_signed-engel"));
        cmd.args(["verify", "--suite", "all", "--seed", "42"]);
        if let Some(t) = threads {
            cmd.env("SIGNED_ENGEL_THREADS", t);
        }
        let out = cmd.output().expect("binary runs");
        assert_eq!(
            out.status.code(),
            Some(0),
            "verify all failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let baseline = run(None);
    let rerun = run(None);
    conclude(11, "run-to-run bytes", baseline == rerun, "reports differ between runs".into());
    for threads in ["1", "4", "8"] {
        let with_threads = run(Some(threads));
        conclude(
            11,
            &format!("{threads}-worker bytes"),
            with_threads == baseline,
            format!("report differs with SIGNED_ENGEL_THREADS={threads}"),
        );
    }
}
