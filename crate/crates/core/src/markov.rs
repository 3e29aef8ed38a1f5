//! The digit chain's exact law, the surrogate chain driven by exponential
//! variates and even rounding, and seeded trajectory simulation.
//!
//! States grow like `exp(n)`, so a fixed-width integer overflows after a few
//! dozen steps. States are exact even `u64` values below [`STATE_CAP`]; once
//! a step would cross the cap the trajectory switches to carrying its natural
//! logarithm in double precision. At that scale the even-rounding correction
//! (at most `1/D`) and the `log(1 - 1/D^2)` drift are far below the
//! resolution of an `f64` stored next to `log D > 42`, so the log recursion
//! degenerates to adding the exponential increment.

use crate::numerics::Rational;
use crate::rng::CounterRng;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MarkovError {
    #[error("even rounding needs t >= 1, got {0}")]
    OutOfDomain(String),
}

/// States at or above this value are carried as logarithms.
pub const STATE_CAP: u64 = 1 << 62;

// ---------------------------------------------------------------------------
// Exact law
// ---------------------------------------------------------------------------

/// Probability that the first digit equals `2k`: `2/((2k-1)(2k+1))`.
pub fn initial_pmf(k: u64) -> Rational {
    assert!(k >= 1);
    let k = BigInt::from(k);
    Rational::new(BigInt::from(2), (2 * &k - 1) * (2 * &k + 1))
}

/// Cumulative initial law up to `2K`: `1 - 1/(2K+1)`, telescoped exactly.
pub fn initial_cdf(k: u64) -> Rational {
    assert!(k >= 1);
    let k = BigInt::from(k);
    Rational::one() - Rational::new(BigInt::one(), 2 * k + 1)
}

/// One-step transition probability from state `2k` to `2l`.
pub fn transition_pmf(k: u64, l: u64) -> Rational {
    assert!(k >= 1);
    if l < k {
        return Rational::zero();
    }
    if l == k {
        return Rational::new(BigInt::one(), BigInt::from(2 * k));
    }
    let (k, l) = (BigInt::from(k), BigInt::from(l));
    Rational::new(
        (2 * &k - 1) * (2 * &k + 1),
        &k * (2 * &l - 1) * (2 * &l + 1),
    )
}

/// Closed form of the partial row sum `sum_{l=k..l_max} transition_pmf(k, l)`:
/// `1 - (2k-1)(2k+1) / (2k (2 l_max + 1))`.
pub fn transition_row_sum(k: u64, l_max: u64) -> Rational {
    assert!(l_max >= k && k >= 1);
    let (k, l) = (BigInt::from(k), BigInt::from(l_max));
    Rational::one() - Rational::new((2 * &k - 1) * (2 * &k + 1), 2 * &k * (2 * &l + 1))
}

// ---------------------------------------------------------------------------
// Even rounding
// ---------------------------------------------------------------------------

/// The unique even integer `2k` with `2k - 1 <= t < 2k + 1`.
pub fn even_round_f64(t: f64) -> Result<u64, MarkovError> {
    if t < 1.0 || t.is_nan() {
        return Err(MarkovError::OutOfDomain(t.to_string()));
    }
    Ok(2 * ((t + 1.0) * 0.5).floor() as u64)
}

/// Exact-arithmetic version of [`even_round_f64`].
pub fn even_round_rational(t: &Rational) -> Result<BigUint, MarkovError> {
    if t < &Rational::one() {
        return Err(MarkovError::OutOfDomain(t.to_string()));
    }
    let k = ((t + Rational::one()) / Rational::from_integer(BigInt::from(2))).floor();
    Ok(k.numer().magnitude() * 2u32)
}

// ---------------------------------------------------------------------------
// States and single steps
// ---------------------------------------------------------------------------

/// A chain state: an exact even integer, or its logarithm once past the cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateValue {
    Exact(u64),
    Log(f64),
}

impl StateValue {
    /// Natural logarithm of the state.
    pub fn log(&self) -> f64 {
        match self {
            StateValue::Exact(d) => (*d as f64).ln(),
            StateValue::Log(l) => *l,
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match self {
            StateValue::Exact(d) => Some(*d),
            StateValue::Log(_) => None,
        }
    }

    pub fn is_saturated(&self) -> bool {
        matches!(self, StateValue::Log(_))
    }
}

/// One surrogate-chain step: even-round `((D-1)(D+1)/D) exp(x)`.
///
/// Saturates to log form at the cap. In the zone where the product is no
/// longer exactly representable, rounding could dip one even step below the
/// previous state; the true chain is non-decreasing, so the result is clamped
/// from below.
pub fn surrogate_step(d_prev: u64, x_exp: f64) -> StateValue {
    debug_assert!(d_prev >= 2 && d_prev.is_multiple_of(2) && d_prev < STATE_CAP);
    debug_assert!(x_exp >= 0.0);
    let base = d_prev as f64 - 1.0 / (d_prev as f64);
    let v = base * x_exp.exp();
    if v >= (STATE_CAP - 1) as f64 {
        StateValue::Log(base.ln() + x_exp)
    } else {
        let next = even_round_f64(v).expect("v >= base >= 1.5");
        StateValue::Exact(next.max(d_prev))
    }
}

/// First surrogate state: even-round `exp(x)`.
pub fn surrogate_initial(x_exp: f64) -> StateValue {
    debug_assert!(x_exp >= 0.0);
    // x comes from -ln(u) with u >= 2^-53, so exp(x) <= 2^53 and never caps.
    StateValue::Exact(even_round_f64(x_exp.exp()).expect("exp(x) >= 1"))
}

const UNIT: u64 = 1 << 53;

/// Exact-chain first state by inverse CDF over `u = m / 2^53`:
/// the smallest `K` with `2K/(2K+1) > u`.
pub fn exact_initial(m: u64) -> StateValue {
    debug_assert!(m < UNIT);
    // u < 2K/(2K+1) iff 2K > Q = m/(2^53 - m); the smallest even integer
    // strictly above Q is c + 1 rounded up to even, c = floor(Q).
    let c = m / (UNIT - m);
    let k = (c + 2) >> 1;
    StateValue::Exact(2 * k)
}

/// Exact-chain transition from state `2k` by inverse CDF over `u = m / 2^53`.
///
/// Below `2^37` the inversion is carried out in exact integer arithmetic, so
/// cell boundaries are decided with no rounding at all. Above that the state
/// is already in the floating-point regime and the step uses the same
/// multiplicative form as the surrogate with `-ln(1-u)` as increment (the
/// inverse CDF is exactly that quantile coupling).
pub fn exact_step(state: u64, m: u64) -> StateValue {
    debug_assert!(state >= 2 && state.is_multiple_of(2) && state < STATE_CAP);
    debug_assert!(m < UNIT);
    let k = state / 2;
    // Repeat cell: u < 1/(2k), decided exactly.
    if (m as u128) * (state as u128) < UNIT as u128 {
        return StateValue::Exact(state);
    }
    if state < (1 << 37) {
        // (2l+1) must strictly exceed Q = 2^53 A / ((2^53 - m) 2k), with
        // A = (2k-1)(2k+1).
        let a = (state as u128) * (state as u128) - 1;
        let n = (UNIT as u128) * a;
        let dq = ((UNIT - m) as u128) * (state as u128);
        let c = n / dq;
        let l = ((c + 1) >> 1).max(k as u128 + 1);
        if 2 * l >= STATE_CAP as u128 {
            let base = state as f64 - 1.0 / (state as f64);
            let e = -(((UNIT - m) as f64) * (1.0 / UNIT as f64)).ln();
            return StateValue::Log(base.ln() + e);
        }
        StateValue::Exact(2 * l as u64)
    } else {
        let base = state as f64 - 1.0 / (state as f64);
        let e = -(((UNIT - m) as f64) * (1.0 / UNIT as f64)).ln();
        let v = base * e.exp();
        if v >= (STATE_CAP - 1) as f64 {
            StateValue::Log(base.ln() + e)
        } else {
            let next = even_round_f64(v).expect("v >= 1");
            StateValue::Exact(next.max(state))
        }
    }
}

// ---------------------------------------------------------------------------
// Seeded simulation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainSource {
    /// Inverse-CDF sampling of the exact digit-chain law.
    Exact,
    /// The even-rounded multiplicative construction from iid exponentials.
    Surrogate,
}

impl std::str::FromStr for ChainSource {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(ChainSource::Exact),
            "surrogate" => Ok(ChainSource::Surrogate),
            other => Err(format!("unknown chain source {other:?} (use exact|surrogate)")),
        }
    }
}

/// Deterministic chain simulator: every trajectory is a pure function of
/// `(master_seed, trajectory_id)`.
#[derive(Debug, Clone, Copy)]
pub struct ChainSim {
    source: ChainSource,
    rng: CounterRng,
}

impl ChainSim {
    pub fn new(source: ChainSource, master_seed: u64) -> ChainSim {
        let stream = match source {
            ChainSource::Exact => "chain.exact",
            ChainSource::Surrogate => "chain.surrogate",
        };
        ChainSim { source, rng: CounterRng::new(master_seed, stream) }
    }

    pub fn source(&self) -> ChainSource {
        self.source
    }

    fn initial(&self, traj: u64) -> StateValue {
        match self.source {
            ChainSource::Exact => exact_initial(self.rng.uniform_numerator(traj, 0)),
            ChainSource::Surrogate => {
                surrogate_initial(self.rng.exponential(traj, 0))
            }
        }
    }

    fn step(&self, traj: u64, step_index: u64, prev: StateValue) -> StateValue {
        match prev {
            StateValue::Log(l) => {
                // Past the cap both chains add an exponential increment; the
                // 1/D^2 drift and rounding terms are below f64 resolution.
                let e = match self.source {
                    ChainSource::Exact => {
                        let m = self.rng.uniform_numerator(traj, step_index);
                        -(((UNIT - m) as f64) * (1.0 / UNIT as f64)).ln()
                    }
                    ChainSource::Surrogate => self.rng.exponential(traj, step_index),
                };
                StateValue::Log(l + e)
            }
            StateValue::Exact(d) => match self.source {
                ChainSource::Exact => exact_step(d, self.rng.uniform_numerator(traj, step_index)),
                ChainSource::Surrogate => surrogate_step(d, self.rng.exponential(traj, step_index)),
            },
        }
    }

    /// Infinite iterator over `D_1, D_2, ...` for one trajectory.
    pub fn states(&self, traj: u64) -> StateIter {
        StateIter { sim: *self, traj, step: 0, current: None }
    }
}

pub struct StateIter {
    sim: ChainSim,
    traj: u64,
    step: u64,
    current: Option<StateValue>,
}

impl Iterator for StateIter {
    type Item = StateValue;

    fn next(&mut self) -> Option<StateValue> {
        let value = match self.current {
            None => self.sim.initial(self.traj),
            Some(prev) => self.sim.step(self.traj, self.step, prev),
        };
        self.step += 1;
        self.current = Some(value);
        Some(value)
    }
}

/// A materialized trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub id: u64,
    pub states: Vec<StateValue>,
}

impl Trajectory {
    /// Step index (0-based) of the first log-carried state, if any.
    pub fn saturation_index(&self) -> Option<usize> {
        self.states.iter().position(StateValue::is_saturated)
    }
}

/// Seeded Monte Carlo output of [`simulate`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryBatch {
    pub source: ChainSource,
    pub n: usize,
    pub count: u64,
    pub master_seed: u64,
    pub trajectories: Vec<Trajectory>,
}

/// Simulates `count` trajectories of length `n`. Deterministic in
/// `(master_seed, trajectory index)` and independent of worker count.
pub fn simulate(source: ChainSource, n: usize, count: u64, master_seed: u64) -> TrajectoryBatch {
    assert!(n >= 1 && count >= 1);
    let sim = ChainSim::new(source, master_seed);
    let trajectories: Vec<Trajectory> = (0..count)
        .into_par_iter()
        .map(|id| Trajectory { id, states: sim.states(id).take(n).collect() })
        .collect();
    TrajectoryBatch { source, n, count, master_seed, trajectories }
}

impl TrajectoryBatch {
    /// Trajectories that crossed the state cap somewhere.
    pub fn saturated_count(&self) -> usize {
        self.trajectories.iter().filter(|t| t.saturation_index().is_some()).count()
    }

    /// Long-format CSV: `trajectory_id,n,state_or_logstate,saturated`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "trajectory_id,n,state_or_logstate,saturated")?;
        for t in &self.trajectories {
            for (i, s) in t.states.iter().enumerate() {
                match s {
                    StateValue::Exact(d) => writeln!(out, "{},{},{},false", t.id, i + 1, d)?,
                    StateValue::Log(l) => writeln!(out, "{},{},{},true", t.id, i + 1, l)?,
                }
            }
        }
        Ok(())
    }

    /// `{"count": ..., "n": ..., "seed": ..., "source": ...}`.
    pub fn metadata_json(&self) -> serde_json::Value {
        serde_json::json!({
            "seed": self.master_seed,
            "source": self.source,
            "n": self.n,
            "count": self.count,
        })
    }
}
