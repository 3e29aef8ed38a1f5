//! Basic intervals (cylinder sets) of the expansion: the set of points
//! sharing a given digit/sign prefix is an open interval with exact rational
//! endpoints whenever the final digit is even, and a single point otherwise.

use crate::expansion::{self, ExpansionError};
use crate::numerics::Rational;
use crate::symbolic::{SymbolSequence, Variant};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntervalError {
    #[error("sequence is not admissible: {0}")]
    NotAdmissible(String),
    #[error("final digit is odd: the cylinder degenerates to a single point")]
    OddFinalDigit,
    #[error("expansion of the point has only {got} digits, need {need}")]
    ExpansionTooShort { need: usize, got: usize },
    #[error("digit at position {0} is odd; no positive-length cylinder at this order")]
    OddDigitAtN(usize),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
}

/// An order-`n` cylinder: the open interval of points whose expansion starts
/// with `symbols`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicInterval {
    pub symbols: SymbolSequence,
    pub lower: Rational,
    pub upper: Rational,
    /// Exact length `upper - lower`.
    pub length: Rational,
}

impl BasicInterval {
    /// Strict membership in the open interval.
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower < x && x < &self.upper
    }

    /// True when `other` is contained in `self` (as open intervals).
    pub fn contains_interval(&self, other: &BasicInterval) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

/// JSON shape: `{"symbols": "...", "lower": "p/q", "upper": "r/s", "length": "a/b"}`.
impl Serialize for BasicInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BasicInterval", 4)?;
        st.serialize_field("symbols", &self.symbols.to_string())?;
        st.serialize_field("lower", &self.lower.to_string())?;
        st.serialize_field("upper", &self.upper.to_string())?;
        st.serialize_field("length", &self.length.to_string())?;
        st.end()
    }
}

/// The closed-form cylinder length
/// `2 / (s1 ... s_{n-1} (s_n - 1) (s_n + 1))`, kept separate from the
/// endpoint difference so the two routes can be checked against each other.
pub fn closed_form_length(s: &SymbolSequence) -> Rational {
    let n = s.len();
    let mut denom = BigInt::one();
    for d in &s.digits()[..n - 1] {
        denom *= BigInt::from(d.clone());
    }
    let last = BigInt::from(s.digits()[n - 1].clone());
    denom *= (&last - 1) * (&last + 1);
    Rational::new(BigInt::from(2), denom)
}

/// Builds the cylinder of a strict-variant admissible word.
pub fn basic_interval(s: &SymbolSequence) -> Result<BasicInterval, IntervalError> {
    match s.check_admissible(Variant::Standard) {
        crate::symbolic::Admissibility::Invalid(reason) => {
            return Err(IntervalError::NotAdmissible(reason));
        }
        crate::symbolic::Admissibility::Valid => {}
    }
    let n = s.len();
    let last = &s.digits()[n - 1];
    if (last % 2u32).is_one() {
        return Err(IntervalError::OddFinalDigit);
    }

    // Partial sum over the first n-1 symbols, then the final term with the
    // last digit displaced by -1 and by +1.
    let mut product = BigInt::one();
    let mut head = Rational::zero();
    for k in 0..n - 1 {
        product *= BigInt::from(s.digits()[k].clone());
        head += Rational::new(BigInt::from(s.cum_signs()[k]), product.clone());
    }
    let last_sign = BigInt::from(s.cum_signs()[n - 1]);
    let last = BigInt::from(last.clone());
    let minus_end = &head + Rational::new(last_sign.clone(), &product * (&last - 1));
    let plus_end = head + Rational::new(last_sign, &product * (&last + 1));

    // The -1 displacement gives the left endpoint when the final cumulative
    // sign is -1, the right endpoint when it is +1.
    let (lower, upper) = if s.cum_signs()[n - 1] < 0 {
        (minus_end, plus_end)
    } else {
        (plus_end, minus_end)
    };
    let length = &upper - &lower;
    debug_assert!(length > Rational::zero());
    Ok(BasicInterval { symbols: s.clone(), lower, upper, length })
}

/// The order-`n` cylinder containing `x`, obtained by expanding `x` exactly.
pub fn locate(x: &Rational, n: usize) -> Result<BasicInterval, IntervalError> {
    let e = expansion::expand_rational(x, n)?;
    if e.len() < n {
        return Err(IntervalError::ExpansionTooShort { need: n, got: e.len() });
    }
    if (&e.digits()[n - 1] % 2u32).is_one() {
        return Err(IntervalError::OddDigitAtN(n));
    }
    let s = SymbolSequence::from_expansion(&e, n)
        .map_err(|err| IntervalError::NotAdmissible(err.to_string()))?;
    let interval = basic_interval(&s)?;
    debug_assert!(interval.contains(x), "{x} not inside its own cylinder {interval:?}");
    Ok(interval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use crate::symbolic::enumerate;

    fn seq(text: &str) -> SymbolSequence {
        text.parse().unwrap()
    }

    #[test]
    fn order_one_cylinder() {
        let i = basic_interval(&seq("2")).unwrap();
        assert_eq!(i.lower, rat(1, 3));
        assert_eq!(i.upper, rat(1, 1));
        assert_eq!(i.length, rat(2, 3));
        assert_eq!(closed_form_length(&seq("2")), rat(2, 3));
    }

    #[test]
    fn order_two_cylinders() {
        // Final sign +1: the (last-1) displacement is the right endpoint.
        let i = basic_interval(&seq("2 +1 4")).unwrap();
        assert_eq!(i.lower, rat(3, 5));
        assert_eq!(i.upper, rat(2, 3));
        assert_eq!(i.length, rat(1, 15));

        let i = basic_interval(&seq("2 -1 4")).unwrap();
        assert_eq!(i.lower, rat(1, 3));
        assert_eq!(i.upper, rat(2, 5));
        assert_eq!(i.length, rat(1, 15));

        assert_eq!(closed_form_length(&seq("2 -1 4")), rat(1, 15));
    }

    #[test]
    fn cylinder_membership_oracle() {
        // Every rational sampled inside the cylinder expands to the prefix.
        for (text, lo, hi) in [("2 +1 4", rat(3, 5), rat(2, 3)), ("2 -1 4", rat(1, 3), rat(2, 5))] {
            let s = seq(text);
            let width = &hi - &lo;
            for j in 1..100i64 {
                let x = &lo + &width * rat(j, 100);
                let e = crate::expansion::expand_rational(&x, 8).unwrap();
                if e.len() < 2 {
                    continue; // x happened to be a one-digit rational; not in the open cylinder
                }
                let prefix = SymbolSequence::from_expansion(&e, 2).unwrap();
                assert_eq!(prefix, s, "x = {x}");
            }
        }
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        assert!(matches!(basic_interval(&seq("2 +1 3")), Err(IntervalError::OddFinalDigit)));
        assert!(matches!(basic_interval(&seq("2 -1 2")), Err(IntervalError::NotAdmissible(_))));
    }

    #[test]
    fn locate_examples() {
        // Digit 5 at position 2 is odd: no positive-length order-2 cylinder.
        assert!(matches!(locate(&rat(2, 5), 2), Err(IntervalError::OddDigitAtN(2))));

        let i = locate(&rat(3, 8), 2).unwrap();
        assert_eq!(i.lower, rat(1, 3));
        assert_eq!(i.upper, rat(2, 5));
        assert!(i.contains(&rat(3, 8)));

        // Any point with first digit 2 locates to (1/3, 1) at order 1.
        let i = locate(&rat(7, 11), 1).unwrap();
        assert_eq!(i.lower, rat(1, 3));
        assert_eq!(i.upper, rat(1, 1));

        assert!(matches!(locate(&rat(1, 2), 2), Err(IntervalError::ExpansionTooShort { .. })));
    }

    #[test]
    fn endpoint_difference_matches_closed_form() {
        for n in 1..=3usize {
            for s in enumerate(n, 12) {
                let i = basic_interval(&s).unwrap();
                assert_eq!(i.length, closed_form_length(&s), "{s}");
                assert_eq!(i.length, &i.upper - &i.lower, "{s}");
            }
        }
    }

    #[test]
    fn json_shape() {
        let i = basic_interval(&seq("2")).unwrap();
        let json = serde_json::to_string(&i).unwrap();
        assert_eq!(
            json,
            r#"{"symbols":"2","lower":"1/3","upper":"1","length":"2/3"}"#
        );
    }
}
