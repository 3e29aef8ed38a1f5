//! Signed Engel expansions.
//!
//! Every `x` in `(0, 1)` expands as an alternating-capable series
//! `x = e_1/d_1 + e_2/(d_1 d_2) + ...` with `e_1 = 1`, signs in `{1, -1}`
//! and a non-decreasing digit sequence that jumps by at least 2 across a
//! sign flip. This crate provides:
//!
//! - exact expansion and reconstruction over arbitrary-precision rationals,
//!   and certified expansion of decimal inputs via exact ball arithmetic
//!   ([`expansion`], [`numerics`]);
//! - admissibility checking and enumeration of digit/sign words
//!   ([`symbolic`]) and the cylinder intervals they define ([`intervals`]);
//! - the digit Markov chain's exact law, a surrogate chain built from
//!   exponential variates with even rounding, and reproducible seeded
//!   simulation ([`markov`], [`rng`]);
//! - statistical verification suites for the growth laws of the digit
//!   sequence ([`stats`], [`gof`]).

pub mod expansion;
pub mod gof;
pub mod intervals;
pub mod markov;
pub mod numerics;
pub mod rng;
pub mod stats;
pub mod symbolic;

pub use expansion::{
    derive_sequences, digit_sign, engel_digits, expand_certified, expand_rational,
    expand_rational_with_trajectory, interval_map, pierce_digits, reconstruct,
    CertifiedExpansion, DerivedSequences, ExpansionError, SignedEngelExpansion, StopReason,
};
pub use intervals::{basic_interval, closed_form_length, locate, BasicInterval, IntervalError};
pub use numerics::{
    make_rational, parse_decimal, parse_rational, rational_to_f64, to_decimal_string, Ball,
    NumericsError, Position, Rational,
};
pub use symbolic::{enumerate, Admissibility, SymbolSequence, SymbolicError, Variant};
