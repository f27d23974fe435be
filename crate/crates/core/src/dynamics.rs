//! Pullback actions of the pseudoautomorphisms on the Picard lattice and the
//! exact cone-normalization loop.
//!
//! The covering involutions pull back as `τ₁* = (1 6 / 0 -1)` and
//! `τ₂* = (-1 0 / 6 1)`; the composite pulls back as `φ* = τ₂*τ₁* =
//! (-1 -6 / 6 35)` with spectral radius `λ = 17 + 12√2` and eigenclasses
//! `Δ±`. Normalization into the cone `C` multiplies `L₂` by `λ^{±2}` until it
//! lands in the half-open window `[99-70√2, 3+2√2)`; only exact comparisons
//! are used, never logarithms.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::lattice::{ConeSpec, DivisorClass};
use crate::qfield::QuadRat;
use crate::{Error, Result};

/// Default bound on normalization steps; `|k|` grows like `½·log_λ` of the
/// input's `L₂`, so hitting this cap signals a non-big or corrupted class.
pub const DEFAULT_ITERATION_CAP: u64 = 1_000_000;

/// A 2×2 integer matrix acting on `(h1, h2)` column coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PullbackMap {
    pub m11: BigInt,
    pub m12: BigInt,
    pub m21: BigInt,
    pub m22: BigInt,
}

impl PullbackMap {
    pub fn new(m11: i64, m12: i64, m21: i64, m22: i64) -> Self {
        PullbackMap {
            m11: BigInt::from(m11),
            m12: BigInt::from(m12),
            m21: BigInt::from(m21),
            m22: BigInt::from(m22),
        }
    }

    pub fn identity() -> Self {
        PullbackMap::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.m11 * &self.m22 - &self.m12 * &self.m21
    }

    pub fn is_identity(&self) -> bool {
        self.m11.is_one() && self.m12.is_zero() && self.m21.is_zero() && self.m22.is_one()
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &PullbackMap) -> Self {
        PullbackMap {
            m11: &self.m11 * &other.m11 + &self.m12 * &other.m21,
            m12: &self.m11 * &other.m12 + &self.m12 * &other.m22,
            m21: &self.m21 * &other.m11 + &self.m22 * &other.m21,
            m22: &self.m21 * &other.m12 + &self.m22 * &other.m22,
        }
    }

    /// Inverse over the integers; requires `det = ±1`.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.magnitude() != &num_bigint::BigUint::from(1u32) {
            return Err(Error::NonInvertible);
        }
        // det² = 1, so the inverse is det · adjugate.
        let adj = PullbackMap {
            m11: self.m22.clone(),
            m12: -self.m12.clone(),
            m21: -self.m21.clone(),
            m22: self.m11.clone(),
        };
        Ok(PullbackMap {
            m11: &adj.m11 * &det,
            m12: &adj.m12 * &det,
            m21: &adj.m21 * &det,
            m22: &adj.m22 * &det,
        })
    }

    /// `self^k` by repeated squaring; `k < 0` requires `det = ±1`.
    pub fn power(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.power(-k);
        }
        let mut result = PullbackMap::identity();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        Ok(result)
    }

    /// Linear action on a divisor class.
    pub fn apply(&self, d: &DivisorClass) -> DivisorClass {
        let m11 = QuadRat::from_bigint(self.m11.clone());
        let m12 = QuadRat::from_bigint(self.m12.clone());
        let m21 = QuadRat::from_bigint(self.m21.clone());
        let m22 = QuadRat::from_bigint(self.m22.clone());
        DivisorClass::new(
            &(&m11 * &d.h1) + &(&m12 * &d.h2),
            &(&m21 * &d.h1) + &(&m22 * &d.h2),
        )
    }
}

impl fmt::Debug for PullbackMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {} / {} {}]", self.m11, self.m12, self.m21, self.m22)
    }
}

impl fmt::Display for PullbackMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {} / {} {}]", self.m11, self.m12, self.m21, self.m22)
    }
}

/// The verified built-in geometry: generators, eigendata and the cone `C`.
pub struct Geometry {
    pub tau1: PullbackMap,
    pub tau2: PullbackMap,
    pub phi: PullbackMap,
    pub phi_inv: PullbackMap,
    /// Spectral radius `λ = 17 + 12√2` of `φ*`.
    pub lambda: QuadRat,
    pub lambda_sq: QuadRat,
    pub delta_plus: DivisorClass,
    pub delta_minus: DivisorClass,
    pub cone: ConeSpec,
}

static GEOMETRY: OnceLock<Geometry> = OnceLock::new();

/// Returns the built-in geometry, verifying every identity on first use.
pub fn geometry() -> &'static Geometry {
    GEOMETRY.get_or_init(Geometry::build)
}

impl Geometry {
    fn build() -> Self {
        let tau1 = PullbackMap::new(1, 6, 0, -1);
        let tau2 = PullbackMap::new(-1, 0, 6, 1);
        let phi = tau2.compose(&tau1);
        let phi_inv = phi.inverse().expect("phi is unimodular");
        let lambda = QuadRat::from_ints(17, 12);
        let lambda_sq = &lambda * &lambda;
        let delta_plus = DivisorClass::delta_plus();
        let delta_minus = DivisorClass::delta_minus();

        assert_eq!(phi, PullbackMap::new(-1, -6, 6, 35));
        assert_eq!(phi_inv, PullbackMap::new(35, 6, -6, -1));
        assert_eq!(phi.det(), BigInt::one());
        assert_eq!(tau1.det(), BigInt::from(-1));
        assert_eq!(tau2.det(), BigInt::from(-1));
        assert!(tau1.compose(&tau1).is_identity());
        assert!(tau2.compose(&tau2).is_identity());
        assert!(phi.compose(&phi_inv).is_identity());

        // Eigenvector identities φ*Δ± = λ^{±1}·Δ±.
        assert_eq!(phi.apply(&delta_plus), delta_plus.scale(&lambda));
        let lambda_inv = lambda.inverse().expect("lambda is a unit");
        assert_eq!(phi.apply(&delta_minus), delta_minus.scale(&lambda_inv));

        // Cone C bounds: L₂(τ₁*H₂) = 99-70√2 up to L₂(H₂) = 3+2√2, with
        // ratio exactly λ².
        let h2 = DivisorClass::hyperplane2();
        let l2_hi = h2.l2().expect("H2 is big");
        let l2_lo = tau1.apply(&h2).l2().expect("tau1*H2 is big");
        assert_eq!(l2_hi, QuadRat::from_ints(3, 2));
        assert_eq!(l2_lo, QuadRat::from_ints(99, -70));
        assert_eq!(&l2_hi / &l2_lo, lambda_sq);
        let cone = ConeSpec::new(l2_lo, l2_hi).expect("valid cone bounds");

        Geometry {
            tau1,
            tau2,
            phi,
            phi_inv,
            lambda,
            lambda_sq,
            delta_plus,
            delta_minus,
            cone,
        }
    }

    /// Finds the unique `k` with `(φ*)^k D` in the half-open cone `C`, by
    /// exact comparison iteration, and returns it with the landed class.
    pub fn normalize_to_c(&self, d: &DivisorClass) -> Result<(i64, DivisorClass)> {
        self.normalize_to_c_capped(d, DEFAULT_ITERATION_CAP)
    }

    pub fn normalize_to_c_capped(&self, d: &DivisorClass, cap: u64) -> Result<(i64, DivisorClass)> {
        let mut l2 = d.l2()?; // errors with NotBig off the big cone
        let mut current = d.clone();
        let mut k: i64 = 0;
        let mut steps: u64 = 0;
        while l2 >= self.cone.l2_hi {
            current = self.phi_inv.apply(&current);
            l2 = &l2 / &self.lambda_sq;
            k -= 1;
            steps += 1;
            if steps > cap {
                return Err(Error::IterationCap { cap });
            }
        }
        while l2 < self.cone.l2_lo {
            current = self.phi.apply(&current);
            l2 = &l2 * &self.lambda_sq;
            k += 1;
            steps += 1;
            if steps > cap {
                return Err(Error::IterationCap { cap });
            }
        }
        debug_assert_eq!(current.l2().expect("landed class is big"), l2);
        Ok((k, current))
    }
}
