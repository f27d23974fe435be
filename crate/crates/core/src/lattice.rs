//! The rank-2 Picard lattice of the threefold: divisor classes in the
//! `(H₁, H₂)` basis, the intersection trilinear form, the `c₂` pairing, the
//! Euler characteristic, eigenbasis coordinates `(Δ₊, Δ₋)`, cone membership
//! and exact rounding of ℝ-divisors.
//!
//! The intersection numbers are `H₁³ = H₂³ = 2`, `H₁²H₂ = H₁H₂² = 6`, and
//! `c₂ = H₁² + 6H₁H₂ + H₂²`, so `c₂·(a₁H₁ + a₂H₂) = 44(a₁ + a₂)`.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::qfield::QuadRat;
use crate::{Error, Result};

/// A divisor class `h1·H₁ + h2·H₂` with coordinates in Q(√2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub h1: QuadRat,
    pub h2: QuadRat,
}

fn rat(n: i64, d: i64) -> QuadRat {
    QuadRat::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

impl DivisorClass {
    pub fn new(h1: QuadRat, h2: QuadRat) -> Self {
        DivisorClass { h1, h2 }
    }

    pub fn from_ints(h1: i64, h2: i64) -> Self {
        DivisorClass::new(QuadRat::from_int(h1), QuadRat::from_int(h2))
    }

    pub fn from_bigints(h1: BigInt, h2: BigInt) -> Self {
        DivisorClass::new(QuadRat::from_bigint(h1), QuadRat::from_bigint(h2))
    }

    pub fn zero() -> Self {
        DivisorClass::from_ints(0, 0)
    }

    pub fn hyperplane1() -> Self {
        DivisorClass::from_ints(1, 0)
    }

    pub fn hyperplane2() -> Self {
        DivisorClass::from_ints(0, 1)
    }

    /// The expanding eigenclass `Δ₊ = (1-√2)H₁ + (1+√2)H₂`.
    pub fn delta_plus() -> Self {
        DivisorClass::new(QuadRat::from_ints(1, -1), QuadRat::from_ints(1, 1))
    }

    /// The contracting eigenclass `Δ₋ = (1+√2)H₁ + (1-√2)H₂`.
    pub fn delta_minus() -> Self {
        DivisorClass::new(QuadRat::from_ints(1, 1), QuadRat::from_ints(1, -1))
    }

    pub fn is_zero(&self) -> bool {
        self.h1.is_zero() && self.h2.is_zero()
    }

    /// Integral classes have integer coordinates in the `(H₁, H₂)` basis.
    pub fn is_integral(&self) -> bool {
        self.h1.is_integer() && self.h2.is_integer()
    }

    /// Integer coordinates, if the class is integral.
    pub fn integral_coords(&self) -> Option<(BigInt, BigInt)> {
        Some((self.h1.to_integer()?, self.h2.to_integer()?))
    }

    pub fn scale(&self, t: &QuadRat) -> Self {
        DivisorClass::new(&self.h1 * t, &self.h2 * t)
    }

    /// Eigenbasis coordinates `(d₊, d₋)` with `D = d₊Δ₊ + d₋Δ₋`.
    pub fn to_delta(&self) -> (QuadRat, QuadRat) {
        // Inverse of the column matrix [Δ₊ | Δ₋]; its determinant is -4√2.
        let det = QuadRat::from_ints(0, -4);
        let one_minus = QuadRat::from_ints(1, -1);
        let one_plus = QuadRat::from_ints(1, 1);
        let dplus = (&(&one_minus * &self.h1) - &(&one_plus * &self.h2)) / &det;
        let dminus = (&(&one_minus * &self.h2) - &(&one_plus * &self.h1)) / &det;
        (dplus, dminus)
    }

    /// Inverse change of basis: `d₊Δ₊ + d₋Δ₋` back to `(H₁, H₂)` coordinates.
    pub fn from_delta(dplus: &QuadRat, dminus: &QuadRat) -> Self {
        &DivisorClass::delta_plus().scale(dplus) + &DivisorClass::delta_minus().scale(dminus)
    }

    /// `L₁(D) = d₊·d₋`, the φ-invariant coordinate.
    pub fn l1(&self) -> QuadRat {
        let (dp, dm) = self.to_delta();
        &dp * &dm
    }

    /// `L₂(D) = d₊/d₋`; defined only for big classes.
    pub fn l2(&self) -> Result<QuadRat> {
        let (dp, dm) = self.to_delta();
        if dp.sign() <= 0 || dm.sign() <= 0 {
            return Err(Error::NotBig);
        }
        Ok(&dp / &dm)
    }

    /// Componentwise floor; always integral.
    pub fn floor_divisor(&self) -> Self {
        DivisorClass::from_bigints(self.h1.floor(), self.h2.floor())
    }

    /// Membership flags with respect to the nef cone, the pseudoeffective
    /// cone, the big cone and the half-open subcone `cone`.
    pub fn classify(&self, cone: &ConeSpec) -> ClassFlags {
        let nef = self.h1.sign() >= 0 && self.h2.sign() >= 0;
        let (dp, dm) = self.to_delta();
        let pseudoeffective = dp.sign() >= 0 && dm.sign() >= 0;
        let big = dp.sign() > 0 && dm.sign() > 0;
        let (in_cone_c, on_cone_boundary) = if big {
            let l2 = &dp / &dm;
            (
                l2 >= cone.l2_lo && l2 < cone.l2_hi,
                l2 == cone.l2_lo || l2 == cone.l2_hi,
            )
        } else {
            (false, false)
        };
        ClassFlags { nef, big, pseudoeffective, in_cone_c, on_cone_boundary }
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DivisorClass({self})")
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.h1, self.h2)
    }
}

impl Add<&DivisorClass> for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass::new(&self.h1 + &rhs.h1, &self.h2 + &rhs.h2)
    }
}

impl Sub<&DivisorClass> for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass::new(&self.h1 - &rhs.h1, &self.h2 - &rhs.h2)
    }
}

impl Mul<&DivisorClass> for &QuadRat {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    /// Divisor literal: `a1,a2` with each component a Q(√2) literal, or one
    /// of the named classes `H1`, `H2`, `Dplus`, `Dminus`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "H1" => return Ok(DivisorClass::hyperplane1()),
            "H2" => return Ok(DivisorClass::hyperplane2()),
            "Dplus" => return Ok(DivisorClass::delta_plus()),
            "Dminus" => return Ok(DivisorClass::delta_minus()),
            _ => {}
        }
        let comma = s.find(',').ok_or_else(|| Error::Parse {
            pos: s.len(),
            msg: "expected 'a1,a2' or one of H1, H2, Dplus, Dminus".into(),
        })?;
        if s[comma + 1..].contains(',') {
            return Err(Error::Parse {
                pos: comma + 1 + s[comma + 1..].find(',').unwrap(),
                msg: "expected exactly one comma".into(),
            });
        }
        let h1 = s[..comma].parse::<QuadRat>()?;
        let h2 = s[comma + 1..].parse::<QuadRat>().map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + comma + 1, msg },
            other => other,
        })?;
        Ok(DivisorClass::new(h1, h2))
    }
}

/// Cone membership flags; `on_cone_boundary` reports exact hits of either
/// `L₂` endpoint so half-open boundary decisions stay auditable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassFlags {
    pub nef: bool,
    pub big: bool,
    pub pseudoeffective: bool,
    pub in_cone_c: bool,
    pub on_cone_boundary: bool,
}

/// A subcone of the big cone of the form `{D big : l2_lo ≤ L₂(D) < l2_hi}`.
///
/// The interval is half-open so that the normalization exponent of
/// `dynamics::Geometry::normalize_to_c` is unique; for the built-in cone the
/// endpoint ratio is exactly λ².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub l2_lo: QuadRat,
    pub l2_hi: QuadRat,
}

impl ConeSpec {
    pub fn new(l2_lo: QuadRat, l2_hi: QuadRat) -> Result<Self> {
        if l2_lo.sign() <= 0 || l2_hi <= l2_lo {
            return Err(Error::Domain("cone requires 0 < l2_lo < l2_hi".into()));
        }
        Ok(ConeSpec { l2_lo, l2_hi })
    }
}

/// Symmetric trilinear intersection form evaluated on three classes.
pub fn triple_product(d1: &DivisorClass, d2: &DivisorClass, d3: &DivisorClass) -> QuadRat {
    let two = QuadRat::from_int(2);
    let six = QuadRat::from_int(6);
    let (a1, a2) = (&d1.h1, &d1.h2);
    let (b1, b2) = (&d2.h1, &d2.h2);
    let (c1, c2) = (&d3.h1, &d3.h2);
    let h1h1h1 = a1 * b1 * c1;
    let h1h1h2 = a1 * b1 * c2 + a1 * b2 * c1 + a2 * b1 * c1;
    let h1h2h2 = a1 * b2 * c2 + a2 * b1 * c2 + a2 * b2 * c1;
    let h2h2h2 = a2 * b2 * c2;
    &two * &h1h1h1 + &six * &h1h1h2 + &six * &h1h2h2 + &two * &h2h2h2
}

/// `D³` of a single class.
pub fn cube(d: &DivisorClass) -> QuadRat {
    triple_product(d, d, d)
}

/// `c₂(X)·D = 44(a₁ + a₂)`.
pub fn c2_pair(d: &DivisorClass) -> QuadRat {
    &QuadRat::from_int(44) * &(&d.h1 + &d.h2)
}

/// Euler characteristic `χ(X, D) = D³/6 + c₂·D/12`.
///
/// With `require_integral` set, non-integral classes are rejected; for
/// integral classes the result is checked to be an integer and an
/// [`Error::IntegralityViolation`] signals an internal inconsistency.
pub fn euler_char(d: &DivisorClass, require_integral: bool) -> Result<QuadRat> {
    if require_integral && !d.is_integral() {
        return Err(Error::NonIntegralClass);
    }
    let chi = &(&cube(d) / &QuadRat::from_int(6)) + &(&c2_pair(d) / &QuadRat::from_int(12));
    if d.is_integral() && !chi.is_integer() {
        return Err(Error::IntegralityViolation);
    }
    Ok(chi)
}

/// `χ(X, D)` of an integral class as a big integer.
pub fn euler_char_integral(d: &DivisorClass) -> Result<BigInt> {
    let chi = euler_char(d, true)?;
    Ok(chi.to_integer().expect("integrality verified by euler_char"))
}

/// `Δ₊²·Δ₋`, exposed with its computing oracle in the test suite.
pub fn beta1() -> QuadRat {
    triple_product(&DivisorClass::delta_plus(), &DivisorClass::delta_plus(), &DivisorClass::delta_minus())
}

/// `Δ₊·Δ₋²`.
pub fn beta2() -> QuadRat {
    triple_product(&DivisorClass::delta_plus(), &DivisorClass::delta_minus(), &DivisorClass::delta_minus())
}

/// `(Δ₊ + Δ₋)³`, the volume normalizer of the ample eigenbasis sum.
pub fn ample_cube() -> QuadRat {
    cube(&(&DivisorClass::delta_plus() + &DivisorClass::delta_minus()))
}

#[allow(unused)]
fn half() -> QuadRat {
    rat(1, 2)
}
