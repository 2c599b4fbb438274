//! Exact rational helpers: decimal parsing and rendering, lengths extended
//! with infinities, and powers of dyadic bases `1 + 2^-t`.
//!
//! Grid exponents can reach several hundred thousand, so `q^k` is never
//! materialised on the hot paths. Logarithms are estimated in `f64` and every
//! estimate that lands close to an integer is settled with exact big-integer
//! arithmetic; the returned exponents are always the exact ones.

use std::cmp::Ordering;
use std::f64::consts::LN_2;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A rational length extended with `-inf` and `+inf`.
///
/// Variant order gives the intended total order, `-inf < finite < +inf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    NegInfinity,
    Finite(BigRational),
    Infinity,
}

impl Extended {
    pub fn zero() -> Self {
        Extended::Finite(BigRational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Extended::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// `self + x` for a finite `x`; infinities absorb.
    pub fn plus(&self, x: &BigRational) -> Extended {
        match self {
            Extended::Finite(v) => Extended::Finite(v + x),
            other => other.clone(),
        }
    }

    /// `self <= x` for a finite `x`.
    pub fn le_finite(&self, x: &BigRational) -> bool {
        match self {
            Extended::NegInfinity => true,
            Extended::Finite(v) => v <= x,
            Extended::Infinity => false,
        }
    }
}

impl From<BigRational> for Extended {
    fn from(x: BigRational) -> Self {
        Extended::Finite(x)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInfinity => f.write_str("-inf"),
            Extended::Infinity => f.write_str("inf"),
            Extended::Finite(x) => match to_exact_decimal(x) {
                Some(s) => f.write_str(&s),
                None => write!(f, "{x}"),
            },
        }
    }
}

pub fn rational_from_int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Parses a finite decimal literal such as `12`, `-0.75` or `3.`.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidDecimal(text.to_string());
    let s = text.trim();
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    let digits_ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    if negative {
        numer = -numer;
    }
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    Ok(BigRational::new(numer, denom))
}

/// Renders `x` as a terminating decimal, or `None` when its reduced
/// denominator has a prime factor other than 2 and 5.
pub fn to_exact_decimal(x: &BigRational) -> Option<String> {
    let x = x.reduced();
    let mut d = x.denom().magnitude().clone();
    let two = BigUint::from(2u32);
    let five = BigUint::from(5u32);
    let (mut twos, mut fives) = (0u32, 0u32);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    let scaled = x.numer() * num_traits::pow(BigInt::from(10u32), digits as usize) / x.denom();
    let mut s = insert_point(&scaled, digits);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    Some(s)
}

/// Renders an exact decimal or fails with [`Error::NonTerminatingDecimal`].
pub fn decimal_string(x: &BigRational) -> Result<String> {
    to_exact_decimal(x).ok_or_else(|| Error::NonTerminatingDecimal(x.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
    Nearest,
}

/// Renders `numer / denom` with a fixed number of fractional digits. The
/// fraction does not need to be reduced.
pub fn render_fixed(numer: &BigInt, denom: &BigInt, frac_digits: u32, mode: Rounding) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), frac_digits as usize);
    let (mut n, mut d) = (numer * scale, denom.clone());
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    let scaled = match mode {
        Rounding::Floor => n.div_floor(&d),
        Rounding::Ceil => -((-n).div_floor(&d)),
        Rounding::Nearest => (n * 2u32 + &d).div_floor(&(&d * 2u32)),
    };
    insert_point(&scaled, frac_digits)
}

fn insert_point(scaled: &BigInt, digits: u32) -> String {
    let negative = scaled.sign() == Sign::Minus;
    let mut body = scaled.magnitude().to_str_radix(10);
    let digits = digits as usize;
    if digits > 0 {
        if body.len() <= digits {
            body = format!("{}{}", "0".repeat(digits + 1 - body.len()), body);
        }
        body.insert(body.len() - digits, '.');
    }
    if negative {
        body.insert(0, '-');
    }
    body
}

/// Natural logarithm of a positive big integer, accurate to `f64` precision.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().map_or(f64::NEG_INFINITY, |v| (v as f64).ln());
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).ln() + shift as f64 * LN_2
}

/// A base of the form `1 + 2^-shift`.
///
/// Multiplying by such a base is a shift and an add, and every integer
/// power is an exact dyadic rational `(2^t + 1)^k / 2^(t k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicBase {
    shift: u32,
}

impl DyadicBase {
    pub fn new(shift: u32) -> Self {
        assert!(shift >= 1, "dyadic base needs shift >= 1");
        DyadicBase { shift }
    }

    /// The coarsest base `1 + 2^-t` (smallest `t >= 1`) with
    /// `base^exponent <= bound`. Requires `bound > 1`.
    pub fn coarsest_within(bound: &BigRational, exponent: u32) -> Self {
        assert!(bound > &BigRational::one(), "bound must exceed 1");
        let mut shift = 1;
        loop {
            let base = DyadicBase::new(shift);
            if num_traits::pow(base.value(), exponent as usize) <= *bound {
                return base;
            }
            shift += 1;
        }
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// `2^t + 1`, the numerator of the base.
    fn odd(&self) -> BigUint {
        (BigUint::one() << self.shift) + 1u32
    }

    pub fn value(&self) -> BigRational {
        self.pow(1)
    }

    pub fn ln(&self) -> f64 {
        (-(self.shift as f64) * LN_2).exp().ln_1p()
    }

    /// Exact `base^k`, already in lowest terms.
    pub fn pow(&self, k: i64) -> BigRational {
        let odd = BigInt::from(num_traits::pow(self.odd(), k.unsigned_abs() as usize));
        let two = BigInt::one() << (self.shift as u64 * k.unsigned_abs());
        if k >= 0 {
            BigRational::new_raw(odd, two)
        } else {
            BigRational::new_raw(two, odd)
        }
    }

    /// Exact comparison of `base^k` with a rational `x`.
    pub fn cmp_pow(&self, k: i64, x: &BigRational) -> Ordering {
        let x = if x.denom().is_negative() {
            BigRational::new_raw(-x.numer(), -x.denom())
        } else {
            x.clone()
        };
        if !x.numer().is_positive() {
            return Ordering::Greater;
        }
        let odd = BigInt::from(num_traits::pow(self.odd(), k.unsigned_abs() as usize));
        let two = BigInt::one() << (self.shift as u64 * k.unsigned_abs());
        // base^k = odd/two (k >= 0) or two/odd (k < 0)
        let (pn, pd) = if k >= 0 { (odd, two) } else { (two, odd) };
        (pn * x.denom()).cmp(&(x.numer() * pd))
    }

    fn tolerance(&self, magnitude: f64) -> f64 {
        1e-6 + 1e-12 * (1.0 + magnitude) / self.ln()
    }

    /// Smallest integer `e` with `base^e >= x`, for `x > 0`.
    pub fn ceil_log(&self, x: &BigRational) -> i64 {
        assert!(x.is_positive(), "logarithm of a non-positive value");
        let ln_n = ln_big(x.numer().magnitude());
        let ln_d = ln_big(x.denom().magnitude());
        let estimate = (ln_n - ln_d) / self.ln();
        let tol = self.tolerance(ln_n.abs() + ln_d.abs());
        settle_smallest(estimate, tol, |e| self.cmp_pow(e, x) != Ordering::Less)
    }

    /// Largest integer `e` with `base^e <= x`, for `x > 0`.
    pub fn floor_log(&self, x: &BigRational) -> i64 {
        assert!(x.is_positive(), "logarithm of a non-positive value");
        let ln_n = ln_big(x.numer().magnitude());
        let ln_d = ln_big(x.denom().magnitude());
        let estimate = (ln_n - ln_d) / self.ln();
        let tol = self.tolerance(ln_n.abs() + ln_d.abs());
        // smallest e with base^e > x, minus one
        settle_smallest(estimate, tol, |e| self.cmp_pow(e, x) == Ordering::Greater) - 1
    }

    /// [`DyadicBase::ceil_log`] of a big integer, clamped to 0 for `x <= 1`.
    pub fn ceil_log_int(&self, x: &BigUint) -> i64 {
        if x <= &BigUint::one() {
            return 0;
        }
        self.ceil_log(&BigRational::from_integer(BigInt::from(x.clone())))
    }

    /// `ceil(log_base(sum_i base^levels[i]))`, i.e. the smallest `e` with
    /// `base^e >= A`. Equivalently the largest `j` with `base^(j-1) < A`.
    /// `levels` must be non-empty.
    pub fn ceil_log_sum(&self, levels: &[usize]) -> usize {
        let top = *levels.iter().max().expect("non-empty level multiset");
        if levels.len() == 1 {
            return top;
        }
        let ln_q = self.ln();
        let sum: f64 = levels
            .iter()
            .map(|&k| ((k as f64 - top as f64) * ln_q).exp())
            .sum();
        let estimate = top as f64 + sum.ln() / ln_q;
        let tol = self.tolerance(sum.ln().abs());
        let e = settle_smallest(estimate, tol, |e| {
            e >= top as i64 && self.pow_ge_level_sum(e as usize, levels)
        });
        e as usize
    }

    /// Exact test `base^e >= sum_i base^levels[i]` for `e >= max(levels)`.
    fn pow_ge_level_sum(&self, e: usize, levels: &[usize]) -> bool {
        let odd = self.odd();
        let t = self.shift as usize;
        // multiply both sides by 2^(t e)
        let lhs = num_traits::pow(odd.clone(), e);
        let rhs: BigUint = levels
            .iter()
            .map(|&k| num_traits::pow(odd.clone(), k) << (t * (e - k)))
            .sum();
        lhs >= rhs
    }
}

impl fmt::Display for DyadicBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1+2^-{}", self.shift)
    }
}

/// Smallest integer `e` satisfying a monotone predicate, given a floating
/// estimate of the real threshold. The predicate is only consulted when the
/// estimate is within `tol` of an integer.
fn settle_smallest(estimate: f64, tol: f64, holds: impl Fn(i64) -> bool) -> i64 {
    let nearest = estimate.round();
    if (estimate - nearest).abs() > tol {
        return estimate.ceil() as i64;
    }
    let mut e = nearest as i64;
    while !holds(e) {
        e += 1;
    }
    while holds(e - 1) {
        e -= 1;
    }
    e
}
