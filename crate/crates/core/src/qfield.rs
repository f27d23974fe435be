//! Exact arithmetic in the real quadratic field Q(√2).
//!
//! Every value is a pair of arbitrary-precision rationals `(p, q)` standing
//! for `p + q√2`, kept in lowest terms with positive denominators so that
//! equality is structural. Signs, comparisons and floors are computed with
//! integer arithmetic only; [`QuadRat::to_decimal`] is the single boundary
//! to inexact output.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Floor of √n for a nonnegative big integer.
pub fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Sign of `a + b√2` for big integers `a`, `b`, as -1 / 0 / +1.
///
/// When the terms disagree in sign the comparison reduces to `a²` versus
/// `2b²`; equality there would force `√2 = |a/b|`, so it never happens for
/// nonzero inputs.
fn int_sign(a: &BigInt, b: &BigInt) -> i32 {
    match (a.sign(), b.sign()) {
        (Sign::NoSign, Sign::NoSign) => 0,
        (sa, Sign::NoSign) => sign_to_i32(sa),
        (Sign::NoSign, sb) => sign_to_i32(sb),
        (Sign::Plus, Sign::Plus) => 1,
        (Sign::Minus, Sign::Minus) => -1,
        (sa, _) => {
            let a2 = a * a;
            let b2_twice = 2 * b * b;
            debug_assert_ne!(a2, b2_twice, "a^2 = 2b^2 is impossible for nonzero integers");
            let dominant_is_rational = a2 > b2_twice;
            match (sa, dominant_is_rational) {
                (Sign::Plus, true) | (Sign::Minus, false) => 1,
                _ => -1,
            }
        }
    }
}

fn sign_to_i32(s: Sign) -> i32 {
    match s {
        Sign::Plus => 1,
        Sign::NoSign => 0,
        Sign::Minus => -1,
    }
}

/// An element `p + q√2` of Q(√2) with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    /// Coefficient of 1.
    pub p: BigRational,
    /// Coefficient of √2.
    pub q: BigRational,
}

impl QuadRat {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        // BigRational reduces on construction, so the pair is already
        // canonical; nothing further to normalize.
        QuadRat { p, q }
    }

    pub fn zero() -> Self {
        QuadRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        QuadRat::new(BigRational::one(), BigRational::zero())
    }

    pub fn sqrt2() -> Self {
        QuadRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        QuadRat::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QuadRat::new(BigRational::from_integer(n), BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        QuadRat::new(r, BigRational::zero())
    }

    /// `a + b√2` from integer coefficients.
    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadRat::new(
            BigRational::from_integer(BigInt::from(a)),
            BigRational::from_integer(BigInt::from(b)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// True when the value lies in Q, i.e. the √2 part vanishes.
    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// True when the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.q.is_zero() && self.p.is_integer()
    }

    /// The integer value, if [`QuadRat::is_integer`] holds.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.p.to_integer())
        } else {
            None
        }
    }

    /// Galois conjugate `p - q√2`.
    pub fn conjugate(&self) -> Self {
        QuadRat::new(self.p.clone(), -self.q.clone())
    }

    /// Field norm `x · conj(x) = p² - 2q²`, a rational.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - BigRational::from_integer(BigInt::from(2)) * &self.q * &self.q
    }

    /// Exact sign of the real number `p + q√2`, as -1 / 0 / +1.
    pub fn sign(&self) -> i32 {
        // Clear denominators: sign(p + q√2) = sign(A + B√2) with
        // A = p_num·q_den, B = q_num·p_den (denominators are positive).
        let a = self.p.numer() * self.q.denom();
        let b = self.q.numer() * self.p.denom();
        int_sign(&a, &b)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        debug_assert!(!n.is_zero(), "nonzero element with zero norm");
        let conj = self.conjugate();
        Ok(QuadRat::new(conj.p / &n, conj.q / &n))
    }

    /// Exact quotient; errors when `rhs` is zero.
    pub fn checked_div(&self, rhs: &QuadRat) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    /// `self^k` by repeated squaring; negative exponents invert first.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut result = QuadRat::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// The unique integer `n` with `n ≤ x < n+1`, computed exactly.
    ///
    /// Rational values floor componentwise; negative irrational values go
    /// through `-floor(-x) - 1`; positive irrational values reduce to one
    /// integer square root plus a single exact sign test.
    pub fn floor(&self) -> BigInt {
        if self.q.is_zero() {
            return self.p.floor().to_integer();
        }
        if self.sign() < 0 {
            return -(-self).floor() - 1;
        }
        // x = (A + B√2)/Q with Q > 0.
        let q_total: BigInt = self.p.denom() * self.q.denom();
        let a = self.p.numer() * self.q.denom();
        let b = self.q.numer() * self.p.denom();
        let s = floor_sqrt2_multiple(&b);
        // A + s ≤ A + B√2 < A + s + 1 pins the floor to n0 or n0 + 1.
        let n0 = (&a + &s).div_floor(&q_total);
        let n1 = &n0 + 1;
        let threshold = &a - &n1 * &q_total;
        if int_sign(&threshold, &b) >= 0 {
            n1
        } else {
            n0
        }
    }

    /// `⌈x⌉ = -⌊-x⌋`.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Correctly rounded decimal rendering with `digits` fractional digits
    /// (ties round away from zero; ties only arise for rational values).
    pub fn to_decimal(&self, digits: usize) -> String {
        assert!(digits >= 1, "to_decimal requires at least one digit");
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self * &QuadRat::from_bigint(scale);
        let negative = scaled.sign() < 0;
        let magnitude = scaled.abs();
        let half = QuadRat::new(BigRational::new(BigInt::one(), BigInt::from(2)), BigRational::zero());
        let n = (&magnitude + &half).floor();
        let mut digits_str = n.to_string();
        if digits_str.len() <= digits {
            digits_str = format!("{}{}", "0".repeat(digits + 1 - digits_str.len()), digits_str);
        }
        let split = digits_str.len() - digits;
        let (int_part, frac_part) = digits_str.split_at(split);
        let sign = if negative { "-" } else { "" };
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// `⌊b√2⌋` for a big integer `b` via integer square roots.
fn floor_sqrt2_multiple(b: &BigInt) -> BigInt {
    match b.sign() {
        Sign::NoSign => BigInt::zero(),
        Sign::Plus => {
            let b_u = b.magnitude();
            BigInt::from(isqrt(&(2u32 * b_u * b_u)))
        }
        Sign::Minus => {
            // b√2 is irrational for b ≠ 0, so ⌊-y⌋ = -⌊y⌋ - 1.
            let b_u = b.magnitude();
            -BigInt::from(isqrt(&(2u32 * b_u * b_u))) - 1
        }
    }
}

impl fmt::Debug for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadRat({self})")
    }
}

fn rational_str(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadRat {
    /// Canonical literal form: `p`, `q*sqrt2`, or `p+q*sqrt2` / `p-q*sqrt2`.
    /// Round-trips exactly through [`QuadRat::from_str`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", rational_str(&self.p));
        }
        if self.p.is_zero() {
            return write!(f, "{}*sqrt2", rational_str(&self.q));
        }
        if self.q.is_negative() {
            write!(f, "{}-{}*sqrt2", rational_str(&self.p), rational_str(&-self.q.clone()))
        } else {
            write!(f, "{}+{}*sqrt2", rational_str(&self.p), rational_str(&self.q))
        }
    }
}

impl PartialOrd for QuadRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for QuadRat {
            type Output = QuadRat;
            fn $method(self, rhs: QuadRat) -> QuadRat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadRat> for QuadRat {
            type Output = QuadRat;
            fn $method(self, rhs: &QuadRat) -> QuadRat {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadRat> for &QuadRat {
            type Output = QuadRat;
            fn $method(self, rhs: QuadRat) -> QuadRat {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&QuadRat> for &QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &QuadRat) -> QuadRat {
        QuadRat::new(&self.p + &rhs.p, &self.q + &rhs.q)
    }
}
forward_binop!(Add, add);

impl Sub<&QuadRat> for &QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &QuadRat) -> QuadRat {
        QuadRat::new(&self.p - &rhs.p, &self.q - &rhs.q)
    }
}
forward_binop!(Sub, sub);

impl Mul<&QuadRat> for &QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: &QuadRat) -> QuadRat {
        // (p₁+q₁√2)(p₂+q₂√2) = (p₁p₂ + 2q₁q₂) + (p₁q₂ + p₂q₁)√2
        let two = BigRational::from_integer(BigInt::from(2));
        QuadRat::new(
            &self.p * &rhs.p + two * &self.q * &rhs.q,
            &self.p * &rhs.q + &rhs.p * &self.q,
        )
    }
}
forward_binop!(Mul, mul);

impl Div<&QuadRat> for &QuadRat {
    type Output = QuadRat;
    /// Panics on division by zero; use [`QuadRat::checked_div`] to get an error.
    fn div(self, rhs: &QuadRat) -> QuadRat {
        self.checked_div(rhs).expect("division by zero")
    }
}
forward_binop!(Div, div);

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat::new(-self.p.clone(), -self.q.clone())
    }
}

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        -&self
    }
}

// --- literal parsing -------------------------------------------------------

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn expect_keyword(&mut self, kw: &str) -> bool {
        if self.bytes[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn parse_uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a digit");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(BigInt::from_str(text).expect("digit run parses as integer"))
    }

    /// `digits [ '/' digits ]` as a rational; the sign is handled by the caller.
    fn parse_rational(&mut self) -> Result<BigRational> {
        let numer = self.parse_uint()?;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let denom_pos = self.pos;
            let denom = self.parse_uint()?;
            if denom.is_zero() {
                return Err(Error::Parse { pos: denom_pos, msg: "zero denominator".into() });
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }
}

impl FromStr for QuadRat {
    type Err = Error;

    /// Parses the literal form `p/q+r/s*sqrt2`: signs allowed, either part
    /// optional, `sqrt2` accepted with or without an explicit coefficient.
    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let mut rational_part: Option<BigRational> = None;
        let mut sqrt2_part: Option<BigRational> = None;
        cur.skip_ws();
        if cur.peek().is_none() {
            return cur.err("empty literal");
        }
        let mut first = true;
        loop {
            cur.skip_ws();
            let mut negate = false;
            match cur.peek() {
                Some(b'+') => {
                    cur.pos += 1;
                }
                Some(b'-') => {
                    negate = true;
                    cur.pos += 1;
                }
                Some(_) if first => {}
                Some(_) => return cur.err("expected '+' or '-' between terms"),
                None => break,
            }
            cur.skip_ws();
            let term_pos = cur.pos;
            let (mut coeff, is_sqrt2) = if cur.expect_keyword("sqrt2") {
                (BigRational::one(), true)
            } else {
                let r = cur.parse_rational()?;
                cur.skip_ws();
                if cur.peek() == Some(b'*') {
                    cur.pos += 1;
                    cur.skip_ws();
                    if !cur.expect_keyword("sqrt2") {
                        return cur.err("expected 'sqrt2' after '*'");
                    }
                    (r, true)
                } else {
                    (r, false)
                }
            };
            if negate {
                coeff = -coeff;
            }
            let slot = if is_sqrt2 { &mut sqrt2_part } else { &mut rational_part };
            if slot.is_some() {
                let kind = if is_sqrt2 { "sqrt2" } else { "rational" };
                return Err(Error::Parse {
                    pos: term_pos,
                    msg: format!("duplicate {kind} term"),
                });
            }
            *slot = Some(coeff);
            first = false;
            cur.skip_ws();
            if cur.peek().is_none() {
                break;
            }
        }
        Ok(QuadRat::new(
            rational_part.unwrap_or_else(BigRational::zero),
            sqrt2_part.unwrap_or_else(BigRational::zero),
        ))
    }
}
