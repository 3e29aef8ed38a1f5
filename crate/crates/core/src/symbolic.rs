//! Membership and enumeration for the admissible symbol spaces of the
//! expansion.
//!
//! A symbol sequence interleaves digits and cumulative signs,
//! `(s1, e2, s2, ..., en, sn)` with the first sign implicitly `+1`. Validity
//! is a checked property, not a construction invariant: any well-formed
//! sequence can be built and then tested against the standard space (digits
//! non-decreasing, all but the last even, a sign flip forces a jump of at
//! least 2) or the strict variant that also requires an even final digit.

use crate::expansion::SignedEngelExpansion;
use num_bigint::BigUint;
use num_traits::Zero;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("malformed symbol sequence: {0}")]
    Malformed(String),
}

/// Which admissibility space to check against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Digits non-decreasing from 2, even except possibly the last.
    Standard,
    /// As [`Variant::Standard`], with the final digit even as well. Cylinder
    /// intervals are built over this space.
    EvenFinal,
}

/// Outcome of an admissibility check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admissibility {
    Valid,
    Invalid(String),
}

impl Admissibility {
    pub fn is_valid(&self) -> bool {
        matches!(self, Admissibility::Valid)
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Admissibility::Valid => None,
            Admissibility::Invalid(r) => Some(r),
        }
    }
}

/// An interleaved digit/sign word. Signs are the cumulative signs, matching
/// expansion output directly; step signs are recoverable as consecutive
/// products.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolSequence {
    digits: Vec<BigUint>,
    cum_signs: Vec<i8>,
}

impl SymbolSequence {
    /// Builds a sequence from digits and cumulative signs. The first sign
    /// must be `+1` and every sign `+1` or `-1`.
    pub fn new(digits: Vec<BigUint>, cum_signs: Vec<i8>) -> Result<SymbolSequence, SymbolicError> {
        if digits.is_empty() {
            return Err(SymbolicError::Malformed("empty sequence".into()));
        }
        if digits.len() != cum_signs.len() {
            return Err(SymbolicError::Malformed(format!(
                "{} digits but {} signs",
                digits.len(),
                cum_signs.len()
            )));
        }
        if cum_signs[0] != 1 {
            return Err(SymbolicError::Malformed("first sign must be +1".into()));
        }
        if cum_signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(SymbolicError::Malformed("signs must be +1 or -1".into()));
        }
        if digits.iter().any(|d| d.is_zero()) {
            return Err(SymbolicError::Malformed("digits must be positive".into()));
        }
        Ok(SymbolSequence { digits, cum_signs })
    }

    /// The length-`n` prefix of an expansion as a symbol word.
    pub fn from_expansion(e: &SignedEngelExpansion, n: usize) -> Result<SymbolSequence, SymbolicError> {
        if n == 0 || n > e.len() {
            return Err(SymbolicError::Malformed(format!(
                "prefix length {n} out of range for expansion of length {}",
                e.len()
            )));
        }
        SymbolSequence::new(e.digits()[..n].to_vec(), e.cum_signs()[..n].to_vec())
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

    pub fn cum_signs(&self) -> &[i8] {
        &self.cum_signs
    }

    /// Step signs `s_k = e_k * e_{k+1}`.
    pub fn step_signs(&self) -> Vec<i8> {
        self.cum_signs.windows(2).map(|w| w[0] * w[1]).collect()
    }

    /// Checks membership in the requested space.
    pub fn check_admissible(&self, variant: Variant) -> Admissibility {
        let n = self.len();
        let two = BigUint::from(2u32);
        if self.digits[0] < two {
            return Admissibility::Invalid(format!("first digit {} is below 2", self.digits[0]));
        }
        for i in 0..n {
            let last = i == n - 1;
            let d = &self.digits[i];
            let must_be_even = !last || variant == Variant::EvenFinal;
            if must_be_even && !(d % 2u32).is_zero() {
                return Admissibility::Invalid(format!("digit {} at position {} must be even", d, i + 1));
            }
            if !last {
                let next = &self.digits[i + 1];
                if next < d {
                    return Admissibility::Invalid(format!(
                        "digits decrease from {} to {} at position {}",
                        d,
                        next,
                        i + 2
                    ));
                }
                if self.cum_signs[i + 1] != self.cum_signs[i] && next < &(d + 2u32) {
                    return Admissibility::Invalid(format!(
                        "sign flip at position {} needs a digit jump of at least 2 (got {} after {})",
                        i + 2,
                        next,
                        d
                    ));
                }
            }
        }
        Admissibility::Valid
    }
}

/// Text format: digits and signs interleaved, e.g. `"2 +1 2 -1 6"`.
impl fmt::Display for SymbolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                let s = if self.cum_signs[i] > 0 { "+1" } else { "-1" };
                write!(f, " {s} ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for SymbolSequence {
    type Err = SymbolicError;

    fn from_str(text: &str) -> Result<SymbolSequence, SymbolicError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() || tokens.len().is_multiple_of(2) {
            return Err(SymbolicError::Malformed(format!(
                "expected an odd number of interleaved tokens, got {}",
                tokens.len()
            )));
        }
        let mut digits = Vec::new();
        let mut cum_signs = vec![1i8];
        for (i, tok) in tokens.iter().enumerate() {
            if i % 2 == 0 {
                let d = BigUint::from_str(tok)
                    .map_err(|_| SymbolicError::Malformed(format!("bad digit {tok:?}")))?;
                digits.push(d);
            } else {
                match *tok {
                    "+1" | "+" | "1" => cum_signs.push(1),
                    "-1" | "-" => cum_signs.push(-1),
                    other => return Err(SymbolicError::Malformed(format!("bad sign {other:?}"))),
                }
            }
        }
        SymbolSequence::new(digits, cum_signs)
    }
}

/// All strict-variant words of length `n` with final digit at most `bound`,
/// in lexicographic order (digits ascending, `+1` before `-1`).
pub fn enumerate(n: usize, bound: u64) -> Vec<SymbolSequence> {
    assert!(n >= 1, "enumeration needs n >= 1");
    assert!(bound >= 2 && bound.is_multiple_of(2), "bound must be an even integer >= 2");
    let mut out = Vec::new();
    let mut digits: Vec<u64> = Vec::with_capacity(n);
    let mut signs: Vec<i8> = Vec::with_capacity(n);

    fn rec(n: usize, bound: u64, digits: &mut Vec<u64>, signs: &mut Vec<i8>, out: &mut Vec<SymbolSequence>) {
        if digits.len() == n {
            out.push(
                SymbolSequence::new(
                    digits.iter().map(|d| BigUint::from(*d)).collect(),
                    signs.clone(),
                )
                .expect("enumeration builds well-formed words"),
            );
            return;
        }
        if digits.is_empty() {
            let mut d = 2;
            while d <= bound {
                digits.push(d);
                signs.push(1);
                rec(n, bound, digits, signs, out);
                digits.pop();
                signs.pop();
                d += 2;
            }
        } else {
            let prev = *digits.last().unwrap();
            let prev_sign = *signs.last().unwrap();
            // Fixed +1-before--1 order keeps the output lexicographic.
            for sign in [1i8, -1] {
                let start = if sign == prev_sign { prev } else { prev + 2 };
                let mut d = start;
                while d <= bound {
                    digits.push(d);
                    signs.push(sign);
                    rec(n, bound, digits, signs, out);
                    digits.pop();
                    signs.pop();
                    d += 2;
                }
            }
        }
    }

    rec(n, bound, &mut digits, &mut signs, &mut out);
    out
}
