//! The signed Engel interval map, digit/sign extraction, exact expansion of
//! rationals, certified expansion of balls, reconstruction, and derived
//! sequences, plus the classical Engel and Pierce reference extractors.
//!
//! The map splits `(0, 1)` into half-open cells. On `[1/2k, 1/(2k-1))` the
//! digit is `ceil(1/x)` with step sign `+1` and the map is `x -> dx - 1`; on
//! `[1/(2k+1), 1/2k)` the digit is `floor(1/x)` with step sign `-1` and the
//! map is `x -> 1 - dx`. Reciprocal points `1/m` map to zero, which is how
//! rational expansions terminate; an odd digit can only appear there, as the
//! final digit.

use crate::numerics::{Ball, Rational};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpansionError {
    #[error("value {0} lies outside the domain of the map")]
    OutOfDomain(String),
    #[error("index {n} out of range for an expansion of length {len}")]
    IndexOutOfRange { n: usize, len: usize },
    #[error("expansion has no digits")]
    EmptyExpansion,
    #[error("trajectory has {got} entries but the expansion needs {need}")]
    TrajectoryTooShort { need: usize, got: usize },
}

fn domain_err(x: &Rational) -> ExpansionError {
    ExpansionError::OutOfDomain(x.to_string())
}

/// Digit and step sign of `x` in `(0, 1)`.
///
/// The digit is even except exactly at reciprocals of odd integers, where the
/// expansion terminates one step later.
pub fn digit_sign(x: &Rational) -> Result<(BigUint, i8), ExpansionError> {
    if x <= &Rational::zero() || x >= &Rational::one() {
        return Err(domain_err(x));
    }
    let p = x.numer().magnitude();
    let q = x.denom().magnitude();
    if p.is_one() {
        // x = 1/q sits on the left boundary of its half-open cell.
        let sign = if (q % 2u32).is_zero() { 1 } else { -1 };
        return Ok((q.clone(), sign));
    }
    let floor = q / p;
    if (&floor % 2u32).is_one() {
        // x in (1/(f+1), 1/f) with f odd: the ceiling branch applies.
        Ok((floor + 1u32, 1))
    } else {
        Ok((floor, -1))
    }
}

/// One application of the signed Engel interval map on `[0, 1)`.
pub fn interval_map(x: &Rational) -> Result<Rational, ExpansionError> {
    if x.is_zero() {
        return Ok(Rational::zero());
    }
    if x.is_negative() || x >= &Rational::one() {
        return Err(domain_err(x));
    }
    if x.numer().magnitude().is_one() {
        return Ok(Rational::zero());
    }
    let (d, s) = digit_sign(x)?;
    Ok(map_with(x, &d, s))
}

/// `T x` given the already-known digit and sign of `x`.
fn map_with(x: &Rational, d: &BigUint, s: i8) -> Rational {
    let dx = x * Rational::from_integer(BigInt::from(d.clone()));
    if s > 0 {
        dx - Rational::one()
    } else {
        Rational::one() - dx
    }
}

/// A (prefix of a) signed Engel expansion.
///
/// `digits` holds `d_1..d_n`; `step_signs` holds `s_1..s_{n-1}` (each `+1` or
/// `-1`); `cum_signs` holds the cumulative signs `e_1..e_n` with `e_1 = 1` and
/// `e_{k+1} = e_k * s_k`. The final step sign is never consumed by any
/// downstream formula and is not recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedEngelExpansion {
    #[serde(with = "digit_serde")]
    pub(crate) digits: Vec<BigUint>,
    pub(crate) step_signs: Vec<i8>,
    pub(crate) cum_signs: Vec<i8>,
    pub(crate) terminated: bool,
    pub(crate) certified_prefix_len: usize,
}

impl SignedEngelExpansion {
    /// Assembles an expansion record from digits and cumulative signs, as the
    /// CLI `reconstruct` verb does. Step signs are derived from the
    /// cumulative ones.
    pub fn from_parts(digits: Vec<BigUint>, cum_signs: Vec<i8>, terminated: bool) -> Result<Self, ExpansionError> {
        if digits.is_empty() {
            return Err(ExpansionError::EmptyExpansion);
        }
        if digits.len() != cum_signs.len()
            || cum_signs[0] != 1
            || cum_signs.iter().any(|s| *s != 1 && *s != -1)
            || digits.iter().any(|d| d.is_zero())
        {
            return Err(ExpansionError::OutOfDomain("inconsistent expansion parts".into()));
        }
        let step_signs = cum_signs.windows(2).map(|w| w[0] * w[1]).collect();
        let certified_prefix_len = digits.len();
        Ok(SignedEngelExpansion { digits, step_signs, cum_signs, terminated, certified_prefix_len })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[BigUint] {
        &self.digits
    }

    pub fn step_signs(&self) -> &[i8] {
        &self.step_signs
    }

    pub fn cum_signs(&self) -> &[i8] {
        &self.cum_signs
    }

    pub fn terminated(&self) -> bool {
        self.terminated
    }

    /// How many leading digits are certified correct. Equals `len()` for
    /// exact (rational) inputs.
    pub fn certified_prefix_len(&self) -> usize {
        self.certified_prefix_len
    }

    /// Digits as `u64`, if they all fit.
    pub fn digits_u64(&self) -> Option<Vec<u64>> {
        self.digits.iter().map(|d| d.to_u64()).collect()
    }
}

struct Builder {
    digits: Vec<BigUint>,
    observed_signs: Vec<i8>,
    cum_signs: Vec<i8>,
}

impl Builder {
    fn new() -> Builder {
        Builder { digits: Vec::new(), observed_signs: Vec::new(), cum_signs: Vec::new() }
    }

    fn push(&mut self, d: BigUint, s: i8) {
        let eps = match self.cum_signs.last() {
            None => 1,
            Some(prev) => prev * self.observed_signs.last().expect("sign recorded with digit"),
        };
        self.cum_signs.push(eps);
        self.digits.push(d);
        self.observed_signs.push(s);
    }

    fn finish(mut self, terminated: bool) -> SignedEngelExpansion {
        // The sign observed with the final digit feeds no cumulative sign.
        self.observed_signs.pop();
        let certified_prefix_len = self.digits.len();
        SignedEngelExpansion {
            digits: self.digits,
            step_signs: self.observed_signs,
            cum_signs: self.cum_signs,
            terminated,
            certified_prefix_len,
        }
    }
}

/// Expands a rational in `(0, 1)` exactly.
///
/// Every rational terminates: each step strictly decreases the numerator, so
/// `max_digits = 64` is ample for any denominator below `10^9`.
pub fn expand_rational(x: &Rational, max_digits: usize) -> Result<SignedEngelExpansion, ExpansionError> {
    Ok(expand_rational_with_trajectory(x, max_digits)?.0)
}

/// As [`expand_rational`], also returning the iterates `x, Tx, ..., T^{n-1}x`
/// (one per emitted digit; the final zero of a terminated expansion is not
/// included).
pub fn expand_rational_with_trajectory(
    x: &Rational,
    max_digits: usize,
) -> Result<(SignedEngelExpansion, Vec<Rational>), ExpansionError> {
    if x <= &Rational::zero() || x >= &Rational::one() {
        return Err(domain_err(x));
    }
    let mut builder = Builder::new();
    let mut trajectory = Vec::new();
    let mut cur = x.clone();
    while !cur.is_zero() && builder.digits.len() < max_digits {
        let (d, s) = digit_sign(&cur)?;
        trajectory.push(cur.clone());
        let next = map_with(&cur, &d, s);
        builder.push(d, s);
        cur = next;
    }
    let terminated = cur.is_zero();
    Ok((builder.finish(terminated), trajectory))
}

/// Why a certified expansion stopped emitting digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The input was exact and the map reached zero.
    Terminated,
    /// The requested number of digits was produced.
    MaxDigits,
    /// The ball straddles a cell boundary: no further digit is certain for
    /// every point of the input. Precision is exhausted.
    Straddle,
}

/// Output of [`expand_certified`]: the certified digit prefix, why the
/// iteration stopped, and the ball iterates `b, Tb, ..., T^n b`.
#[derive(Debug, Clone)]
pub struct CertifiedExpansion {
    pub expansion: SignedEngelExpansion,
    pub stop: StopReason,
    pub trajectory: Vec<Ball>,
}

impl CertifiedExpansion {
    /// True when the expansion stopped early for lack of input precision.
    pub fn precision_exhausted(&self) -> bool {
        self.stop == StopReason::Straddle
    }

    /// Exact rational centers of the ball iterates.
    pub fn center_trajectory(&self) -> Vec<Rational> {
        self.trajectory.iter().map(|b| b.center().clone()).collect()
    }
}

/// Expands a ball, emitting a digit only while every point of the current
/// iterate lies in a single digit/sign cell. All emitted digits are correct
/// for every real contained in the input ball.
pub fn expand_certified(ball: &Ball, max_digits: usize) -> Result<CertifiedExpansion, ExpansionError> {
    if ball.center() <= &Rational::zero() || ball.center() >= &Rational::one() {
        return Err(domain_err(ball.center()));
    }
    if ball.radius().is_zero() {
        // Zero radius degenerates to the exact case.
        let (expansion, traj) = expand_rational_with_trajectory(ball.center(), max_digits)?;
        let stop = if expansion.terminated { StopReason::Terminated } else { StopReason::MaxDigits };
        let mut trajectory: Vec<Ball> = traj.into_iter().map(Ball::exact).collect();
        if expansion.terminated {
            trajectory.push(Ball::exact(Rational::zero()));
        }
        return Ok(CertifiedExpansion { expansion, stop, trajectory });
    }

    let mut builder = Builder::new();
    let mut cur = ball.clone();
    let mut trajectory = vec![cur.clone()];
    let stop = loop {
        if builder.digits.len() == max_digits {
            break StopReason::MaxDigits;
        }
        let lo = cur.lower();
        let hi = cur.upper();
        if lo <= Rational::zero() || hi >= Rational::one() {
            break StopReason::Straddle;
        }
        let (d, s) = digit_sign(&lo)?;
        if (&d % 2u32).is_one() {
            // lo sits exactly on a reciprocal of an odd integer; the cell with
            // this digit is a single point, so a positive-radius ball cannot
            // be contained in it.
            break StopReason::Straddle;
        }
        // Right boundary of the region where (digit, sign) are constant:
        // [1/d, 1/(d-1)) for s = +1, (1/(d+1), 1/d) for s = -1. In the latter
        // case lo > 1/(d+1) is already implied by digit_sign returning an
        // even digit.
        let right = if s > 0 {
            Rational::new(BigInt::one(), BigInt::from(&d - 1u32))
        } else {
            Rational::new(BigInt::one(), BigInt::from(d.clone()))
        };
        if hi >= right {
            break StopReason::Straddle;
        }
        let scale = Rational::from_integer(BigInt::from(d.clone()));
        cur = if s > 0 {
            cur.affine(&scale, &-Rational::one())
        } else {
            cur.affine(&-scale, &Rational::one())
        };
        builder.push(d, s);
        trajectory.push(cur.clone());
    };
    let expansion = builder.finish(false);
    Ok(CertifiedExpansion { expansion, stop, trajectory })
}

/// Exact partial sum of the first `n` terms,
/// `sum_{k<=n} e_k / (d_1 ... d_k)`.
pub fn reconstruct(e: &SignedEngelExpansion, n: usize) -> Result<Rational, ExpansionError> {
    if n == 0 || n > e.len() {
        return Err(ExpansionError::IndexOutOfRange { n, len: e.len() });
    }
    let mut product = BigInt::one();
    let mut sum = Rational::zero();
    for k in 0..n {
        product *= BigInt::from(e.digits[k].clone());
        let term = Rational::new(BigInt::from(e.cum_signs[k]), product.clone());
        sum += term;
    }
    Ok(sum)
}

/// Gap, ratio and running-maximum sequences of an expansion, together with
/// the uniform residuals and their odd integer brackets.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedSequences {
    /// First digit, then successive digit differences.
    pub gaps: Vec<BigUint>,
    /// First digit, then successive digit ratios.
    pub ratios: Vec<Rational>,
    /// Running maximum of `ratios`.
    pub running_max: Vec<Rational>,
    /// The residuals `y_k`: uniformly distributed on `(0, 1)` under the
    /// Lebesgue law of the input. Present only when the map trajectory is
    /// available.
    pub uniforms: Option<Vec<Rational>>,
    /// The odd integers bracketing the sign-adjusted digit ratios.
    pub odd_brackets: Vec<BigUint>,
    /// Running maximum of `odd_brackets`.
    pub bracket_max: Vec<BigUint>,
}

fn greatest_odd_leq(m: BigUint) -> BigUint {
    if (&m % 2u32).is_zero() {
        m - 1u32
    } else {
        m
    }
}

/// Computes [`DerivedSequences`] for an expansion. `trajectory` must hold the
/// iterates `x, Tx, ..., T^{n-1}x` (exact values, or ball centers for
/// certified expansions) when the residuals are wanted.
pub fn derive_sequences(
    e: &SignedEngelExpansion,
    trajectory: Option<&[Rational]>,
) -> Result<DerivedSequences, ExpansionError> {
    let n = e.len();
    if n == 0 {
        return Err(ExpansionError::EmptyExpansion);
    }
    if let Some(traj) = trajectory {
        if traj.len() < n {
            return Err(ExpansionError::TrajectoryTooShort { need: n, got: traj.len() });
        }
    }

    let mut gaps = Vec::with_capacity(n);
    let mut ratios = Vec::with_capacity(n);
    let mut running_max = Vec::with_capacity(n);
    let mut odd_brackets = Vec::with_capacity(n);
    let mut bracket_max = Vec::with_capacity(n);

    for k in 0..n {
        let d = &e.digits[k];
        if k == 0 {
            gaps.push(d.clone());
            ratios.push(Rational::from_integer(BigInt::from(d.clone())));
            odd_brackets.push(greatest_odd_leq(d.clone()));
        } else {
            let prev = &e.digits[k - 1];
            gaps.push(d - prev);
            ratios.push(Rational::new(BigInt::from(d.clone()), BigInt::from(prev.clone())));
            // Denominator d_{k-1} - s_{k-1}: minus one on a repeated sign,
            // plus one across a sign flip.
            let denom = if e.step_signs[k - 1] > 0 { prev - 1u32 } else { prev + 1u32 };
            odd_brackets.push(greatest_odd_leq(d / denom));
        }
        let max_r = running_max.last().map_or(ratios[k].clone(), |m: &Rational| ratios[k].clone().max(m.clone()));
        running_max.push(max_r);
        let max_y = bracket_max.last().map_or(odd_brackets[k].clone(), |m: &BigUint| odd_brackets[k].clone().max(m.clone()));
        bracket_max.push(max_y);
    }

    let uniforms = trajectory.map(|traj| {
        (0..n)
            .map(|k| {
                if k == 0 {
                    traj[0].clone()
                } else {
                    let prev = &e.digits[k - 1];
                    let factor = if e.step_signs[k - 1] > 0 { prev - 1u32 } else { prev + 1u32 };
                    &traj[k] * Rational::from_integer(BigInt::from(factor))
                }
            })
            .collect()
    });

    Ok(DerivedSequences { gaps, ratios, running_max, uniforms, odd_brackets, bracket_max })
}

/// Classical Engel digits of a rational: `d_k = ceil(1/x_k)`,
/// `x_{k+1} = d_k x_k - 1`. Non-decreasing, all at least 2.
pub fn engel_digits(x: &Rational, max_digits: usize) -> Result<Vec<BigUint>, ExpansionError> {
    if x <= &Rational::zero() || x >= &Rational::one() {
        return Err(domain_err(x));
    }
    let mut digits = Vec::new();
    let mut cur = x.clone();
    while !cur.is_zero() && digits.len() < max_digits {
        let p = cur.numer().magnitude();
        let q = cur.denom().magnitude();
        let d = (q + p - 1u32) / p;
        cur = cur * Rational::from_integer(BigInt::from(d.clone())) - Rational::one();
        digits.push(d);
    }
    Ok(digits)
}

/// Classical Pierce digits of a rational: `d_k = floor(1/x_k)`,
/// `x_{k+1} = 1 - d_k x_k`. Strictly increasing, all at least 1.
pub fn pierce_digits(x: &Rational, max_digits: usize) -> Result<Vec<BigUint>, ExpansionError> {
    if x <= &Rational::zero() || x >= &Rational::one() {
        return Err(domain_err(x));
    }
    let mut digits = Vec::new();
    let mut cur = x.clone();
    while !cur.is_zero() && digits.len() < max_digits {
        let p = cur.numer().magnitude();
        let q = cur.denom().magnitude();
        let d = q / p;
        cur = Rational::one() - cur * Rational::from_integer(BigInt::from(d.clone()));
        digits.push(d);
    }
    Ok(digits)
}

/// Serializes big digits as plain JSON numbers of unbounded size.
mod digit_serde {
    use num_bigint::BigUint;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(digits: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let numbers: Vec<serde_json::Number> = digits
            .iter()
            .map(|d| serde_json::Number::from_string_unchecked(d.to_string()))
            .collect();
        numbers.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        let numbers = Vec::<serde_json::Number>::deserialize(d)?;
        numbers
            .iter()
            .map(|n| BigUint::from_str(&n.to_string()).map_err(D::Error::custom))
            .collect()
    }
}
