//! Exact round-trip and structural invariants of the expansion over a dense
//! sweep of small rationals, plus the classical reference expansions.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;
use signed_engel::{
    engel_digits, expand_rational, pierce_digits, reconstruct, Rational, SymbolSequence, Variant,
};

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn check_structure(e: &signed_engel::SignedEngelExpansion, x: &Rational) {
    let digits = e.digits();
    assert!(digits[0] >= BigUint::from(2u32), "d_1 >= 2 for {x}");
    for k in 1..digits.len() {
        assert!(digits[k] >= digits[k - 1], "digits non-decreasing for {x}");
        // Sign flip forces a jump of at least 2.
        if e.cum_signs()[k] != e.cum_signs()[k - 1] {
            assert!(digits[k] >= &digits[k - 1] + 2u32, "flip gap violated for {x}");
        }
    }
    // An odd digit can only be final, and only with termination.
    for (k, d) in digits.iter().enumerate() {
        if (d % 2u32).is_one() {
            assert_eq!(k, digits.len() - 1, "odd digit not final for {x}");
            assert!(e.terminated(), "odd digit without termination for {x}");
        }
    }
}

#[test]
fn dense_roundtrip_small_denominators() {
    for q in 2..=200i64 {
        for p in 1..q {
            let x = rat(p, q);
            let e = expand_rational(&x, 64).unwrap();
            assert!(e.terminated(), "rational must terminate: {p}/{q}");
            assert_eq!(reconstruct(&e, e.len()).unwrap(), x, "round trip failed for {p}/{q}");
            check_structure(&e, &x);
            let word = SymbolSequence::from_expansion(&e, e.len()).unwrap();
            assert!(word.check_admissible(Variant::Standard).is_valid(), "{p}/{q}");
        }
    }
}

#[test]
fn engel_and_pierce_roundtrip() {
    for q in 2..=200i64 {
        for p in 1..q {
            let x = rat(p, q);

            let digits = engel_digits(&x, 256).unwrap();
            let mut prod = BigInt::one();
            let mut sum = Rational::zero();
            for (k, d) in digits.iter().enumerate() {
                if k > 0 {
                    assert!(d >= &digits[k - 1], "Engel digits non-decreasing for {p}/{q}");
                }
                assert!(*d >= BigUint::from(2u32));
                prod *= BigInt::from(d.clone());
                sum += Rational::new(BigInt::one(), prod.clone());
            }
            assert_eq!(sum, x, "Engel round trip failed for {p}/{q}");

            let digits = pierce_digits(&x, 256).unwrap();
            let mut prod = BigInt::one();
            let mut sum = Rational::zero();
            for (k, d) in digits.iter().enumerate() {
                if k > 0 {
                    assert!(d > &digits[k - 1], "Pierce digits strictly increasing for {p}/{q}");
                }
                assert!(!d.is_zero());
                prod *= BigInt::from(d.clone());
                let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                sum += Rational::new(sign, prod.clone());
            }
            assert_eq!(sum, x, "Pierce round trip failed for {p}/{q}");
        }
    }
}

proptest! {
    /// Exact rational arithmetic: (x + y) - y = x bit-exactly.
    #[test]
    fn rational_arithmetic_exact(p in -1_000_000i64..1_000_000, q in 1i64..1_000_000,
                                 r in -1_000_000i64..1_000_000, s in 1i64..1_000_000) {
        let x = rat(p, q);
        let y = rat(r, s);
        prop_assert_eq!(&(&x + &y) - &y, x);
    }

    /// Round trip on random rationals with larger denominators.
    #[test]
    fn random_roundtrip(p in 1u64..10_000, q in 2u64..10_000) {
        prop_assume!(p < q);
        let x = Rational::new(BigInt::from(p), BigInt::from(q));
        let e = expand_rational(&x, 128).unwrap();
        prop_assert!(e.terminated());
        prop_assert_eq!(reconstruct(&e, e.len()).unwrap(), x);
    }

    /// The map trajectory satisfies the digit sandwich
    /// 1/(d_n + 1) < T^{n-1} x < 1/(d_n - 1) strictly inside the expansion
    /// (with equality at 1/d_n exactly on the terminating step).
    #[test]
    fn trajectory_sandwich(p in 1u64..5_000, q in 2u64..5_000) {
        prop_assume!(p < q);
        let x = Rational::new(BigInt::from(p), BigInt::from(q));
        let (e, traj) = signed_engel::expand_rational_with_trajectory(&x, 128).unwrap();
        for (k, t) in traj.iter().enumerate() {
            let d = BigInt::from(e.digits()[k].clone());
            let lo = Rational::new(BigInt::one(), &d + 1);
            let hi = Rational::new(BigInt::one(), &d - 1); // d >= 2 always
            prop_assert!(t > &lo, "T^{k} x = {t} <= 1/(d+1) for {p}/{q}");
            prop_assert!(t < &hi, "T^{k} x = {t} >= 1/(d-1) for {p}/{q}");
        }
    }
}
