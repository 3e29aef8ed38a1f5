//! Gate behavior of the verification suites: synthetic wrong-law inputs must
//! fail, degenerate growth functions behave as predicted, and preconditions
//! yield Inconclusive.

use signed_engel::gof::{ks_statistic, standard_normal_cdf};
use signed_engel::markov::{ChainSim, ChainSource};
use signed_engel::rng::CounterRng;
use signed_engel::stats::{
    borel_bernstein_check, empirical_pmf_check, lil_smoke, ratio_limsup_check,
    yn_uniformity_check, PhiFunction, PmfConfig, ResidualConfig, SimConfig, Verdict,
    CLT_KS_GATE, LLN_SIGMA_FACTOR,
};

#[test]
fn constant_trajectory_fails_the_lln_gate() {
    // All states 2: the statistic is ln(2)/n, nowhere near 1.
    let n = 10_000f64;
    let stat = 2f64.ln() / n;
    let tol = LLN_SIGMA_FACTOR / n.sqrt();
    assert!((stat - 1.0).abs() >= tol, "constant trajectory must violate the gate");
}

#[test]
fn wrong_law_fails_the_clt_gate() {
    // Samples from uniform(-1, 1) instead of a standard normal.
    let rng = CounterRng::new(17, "wrong-law");
    let mut samples: Vec<f64> = (0..10_000).map(|i| 2.0 * rng.uniform_half_open(i, 0) - 1.0).collect();
    let ks = ks_statistic(&mut samples, standard_normal_cdf);
    assert!(ks >= CLT_KS_GATE, "uniform samples must fail: KS = {ks}");
}

#[test]
fn wrong_normalization_drifts_out_of_the_lil_band() {
    // (log D_n - n)/sqrt(n) is the CLT scaling; its running sup over a long
    // trajectory wanders well past the iterated-log band while the correct
    // normalization stays inside.
    let sim = ChainSim::new(ChainSource::Surrogate, 1009);
    let n = 100_000usize;
    let mut worst_wrong = f64::NEG_INFINITY;
    let mut worst_right = f64::NEG_INFINITY;
    for traj in 0..10u64 {
        for (i, state) in sim.states(traj).take(n).enumerate() {
            let step = (i + 1) as f64;
            if i + 1 < 10 {
                continue;
            }
            let centered = state.log() - step;
            worst_wrong = worst_wrong.max(centered / step.sqrt() * step.ln().ln().sqrt());
            worst_right = worst_right.max(centered / (2.0 * step * step.ln().ln()).sqrt());
        }
    }
    assert!(worst_right < 3.0, "correct normalization stayed bounded: {worst_right}");
    assert!(worst_wrong > 3.0, "wrong normalization should drift: {worst_wrong}");
}

#[test]
fn constant_phi_makes_every_step_an_exceedance() {
    // R_n >= 1 always (digits never decrease), so phi = 1 counts every n.
    let cfg = SimConfig { source: ChainSource::Surrogate, n: 10_000, count: 20, seed: 77 };
    let phi = PhiFunction::Constant { value: 1.0 };
    let report = borel_bernstein_check(&cfg, &phi).unwrap();
    assert_eq!(report.metrics["median_ratio_count"].as_f64().unwrap(), 10_000.0);
    assert_eq!(report.metrics["median_max_count"].as_f64().unwrap(), 10_000.0);
    assert_eq!(report.verdict, Verdict::Pass);
}

#[test]
fn preconditions_yield_inconclusive() {
    let small = SimConfig { source: ChainSource::Surrogate, n: 1000, count: 1, seed: 1 };
    assert_eq!(lil_smoke(&small).unwrap().verdict, Verdict::Inconclusive);
    assert_eq!(ratio_limsup_check(&small).unwrap().verdict, Verdict::Inconclusive);
    let tiny_bb = SimConfig { source: ChainSource::Surrogate, n: 100, count: 5, seed: 1 };
    let phi = PhiFunction::Power { exponent: 1.0 };
    assert_eq!(borel_bernstein_check(&tiny_bb, &phi).unwrap().verdict, Verdict::Inconclusive);
    let r = yn_uniformity_check(&ResidualConfig { samples: 10, decimal_digits: 12, depth: 3, seed: 1 });
    assert_eq!(r.unwrap().verdict, Verdict::Inconclusive);
    let r = empirical_pmf_check(&PmfConfig { count: 100, k_max: 5, seed: 1 });
    assert_eq!(r.unwrap().verdict, Verdict::Inconclusive);
}

#[test]
fn suite_reports_match_standalone_runs() {
    // The same sub-seed derivation applies whether a suite runs alone or
    // inside `all`, so reports coincide.
    let alone = signed_engel::stats::run_suite("pmf", 4242, None).unwrap();
    let again = signed_engel::stats::run_suite("pmf", 4242, None).unwrap();
    assert_eq!(serde_json::to_string(&alone).unwrap(), serde_json::to_string(&again).unwrap());
}
