//! Exact rational arithmetic and certified "ball" arithmetic.
//!
//! Every quantity that the rest of the crate treats as ground truth is a
//! [`Rational`]: an arbitrary-precision fraction with positive denominator,
//! reduced to lowest terms. A [`Ball`] is a closed interval
//! `[center - radius, center + radius]` with exact rational endpoints; it is
//! the vehicle for expanding inputs that are only known to finite precision
//! (decimal strings) with provable digit correctness.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

/// Arbitrary-precision fraction, always normalized (positive denominator,
/// gcd-reduced).
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericsError {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a fraction \"p/q\" or a plain decimal")]
    Parse(String),
    #[error("value {0} lies outside (0, 1)")]
    OutOfDomain(String),
}

/// Builds the normalized fraction `num/den`.
pub fn make_rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational, NumericsError> {
    let den = den.into();
    if den.is_zero() {
        return Err(NumericsError::ZeroDenominator);
    }
    Ok(Rational::new(num.into(), den))
}

/// Convenience constructor for machine-word fractions.
pub fn rat(num: i64, den: i64) -> Rational {
    make_rational(num, den).expect("nonzero denominator")
}

/// Parses `"p/q"` or a plain integer string into a rational.
pub fn parse_rational(text: &str) -> Result<Rational, NumericsError> {
    let bad = || NumericsError::Parse(text.to_string());
    match text.split_once('/') {
        Some((n, d)) => {
            let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            make_rational(num, den)
        }
        None => {
            let num = BigInt::from_str(text.trim()).map_err(|_| bad())?;
            Ok(Rational::from_integer(num))
        }
    }
}

/// Parses a plain decimal such as `"0.70710678"` (no sign, no exponent).
///
/// Returns the exact value together with half an ulp of the last printed
/// digit, i.e. `10^-d / 2` for `d` fractional digits.
pub fn parse_decimal(text: &str) -> Result<(Rational, Rational), NumericsError> {
    let bad = || NumericsError::Parse(text.to_string());
    let (int_part, frac_part) = text.split_once('.').ok_or_else(bad)?;
    let int_part = if int_part.is_empty() { "0" } else { int_part };
    if frac_part.is_empty()
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let scale = BigUint::from(10u32).pow(frac_part.len() as u32);
    let digits = BigUint::from_str(frac_part).map_err(|_| bad())?;
    let units = BigUint::from_str(int_part).map_err(|_| bad())?;
    let numer = units * &scale + digits;
    let value = Rational::new(numer.into(), BigInt::from(scale.clone()));
    let half_ulp = Rational::new(BigInt::one(), BigInt::from(scale) * 2);
    Ok((value, half_ulp))
}

/// Formats a non-negative rational in `[0, 1)` with exactly `digits`
/// fractional digits (truncated toward zero).
pub fn to_decimal_string(x: &Rational, digits: usize) -> String {
    assert!(!x.is_negative(), "decimal formatting expects a non-negative value");
    let scale = BigUint::from(10u32).pow(digits as u32);
    let scaled = (x * Rational::from_integer(scale.into())).trunc();
    let whole = (&scaled / Rational::from_integer(BigInt::from(10u32).pow(digits as u32)))
        .trunc()
        .numer()
        .clone();
    let frac = scaled.numer() - &whole * BigInt::from(10u32).pow(digits as u32);
    format!("{whole}.{:0>width$}", frac.magnitude().to_string(), width = digits)
}

/// Rounds a rational to the nearest `f64` (up to ~1 ulp of double rounding).
pub fn rational_to_f64(x: &Rational) -> f64 {
    if x.numer().is_zero() {
        return 0.0;
    }
    let neg = x.numer().is_negative();
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    // Shift the quotient into the 2^63..2^64 range so the integer division
    // captures a full mantissa, then scale back by the matching power of two.
    let shift = 64i64 - (num.bits() as i64 - den.bits() as i64);
    let quotient = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let magnitude = quotient.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-shift as i32);
    if neg {
        -magnitude
    } else {
        magnitude
    }
}

/// Position of a ball relative to a point, under the crate-wide half-open
/// convention (cells are closed on the left, open on the right).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// Every point of the ball is strictly below `q`.
    Below,
    /// Every point of the ball is at or above `q` (so the ball lies in the
    /// half-open cell whose left endpoint is `q`).
    Above,
    /// The ball contains points on both sides of `q`.
    Straddles,
}

/// A certified real: the closed interval `[center - radius, center + radius]`.
///
/// All operations produce balls that contain the exact image of every
/// contained point. Since centers and radii are exact rationals, the affine
/// operations used by the expansion introduce no slack at all.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Rational,
    radius: Rational,
}

impl Ball {
    pub fn new(center: Rational, radius: Rational) -> Ball {
        assert!(!radius.is_negative(), "ball radius must be non-negative");
        Ball { center, radius }
    }

    /// Zero-radius ball: an exactly known rational.
    pub fn exact(center: Rational) -> Ball {
        Ball { center, radius: Rational::zero() }
    }

    /// Builds a ball from a decimal string or an exact fraction `"p/q"`.
    ///
    /// Decimal inputs get half an ulp of the last printed digit as radius;
    /// fraction inputs get radius zero. `extra_radius_log2` widens the radius
    /// by `2^-extra_radius_log2` and exists only for stress tests; `0` means
    /// no extra slack.
    pub fn from_decimal(text: &str, extra_radius_log2: u32) -> Result<Ball, NumericsError> {
        let (center, mut radius) = if text.contains('.') {
            parse_decimal(text)?
        } else {
            (parse_rational(text)?, Rational::zero())
        };
        if center <= Rational::zero() || center >= Rational::one() {
            return Err(NumericsError::OutOfDomain(center.to_string()));
        }
        if extra_radius_log2 > 0 {
            radius += Rational::new(BigInt::one(), BigInt::one() << extra_radius_log2);
        }
        Ok(Ball::new(center, radius))
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    /// Left endpoint `center - radius`.
    pub fn lower(&self) -> Rational {
        &self.center - &self.radius
    }

    /// Right endpoint `center + radius`.
    pub fn upper(&self) -> Rational {
        &self.center + &self.radius
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    /// Decides on which side of `q` the ball lies.
    pub fn position(&self, q: &Rational) -> Position {
        if self.upper() < *q {
            Position::Below
        } else if self.lower() >= *q {
            Position::Above
        } else {
            Position::Straddles
        }
    }

    /// Exact image under `x -> scale * x + offset`.
    pub fn affine(&self, scale: &Rational, offset: &Rational) -> Ball {
        Ball {
            center: &self.center * scale + offset,
            radius: &self.radius * scale.abs(),
        }
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {}]", self.center, self.radius)
    }
}

impl Add for &Ball {
    type Output = Ball;
    fn add(self, rhs: &Ball) -> Ball {
        Ball {
            center: &self.center + &rhs.center,
            radius: &self.radius + &rhs.radius,
        }
    }
}

impl Sub for &Ball {
    type Output = Ball;
    fn sub(self, rhs: &Ball) -> Ball {
        Ball {
            center: &self.center - &rhs.center,
            radius: &self.radius + &rhs.radius,
        }
    }
}

impl Mul for &Ball {
    type Output = Ball;
    fn mul(self, rhs: &Ball) -> Ball {
        // |c1 c2 - (c1 + r1)(c2 + r2)| <= |c1| r2 + |c2| r1 + r1 r2, and the
        // bound is exact rational arithmetic, so the enclosure is tight.
        Ball {
            center: &self.center * &rhs.center,
            radius: self.center.abs() * &rhs.radius
                + rhs.center.abs() * &self.radius
                + &self.radius * &rhs.radius,
        }
    }
}
