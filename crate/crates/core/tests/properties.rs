//! Property suites for the exact arithmetic, the lattice, the dynamics and
//! the section-count engine.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use numdim::dynamics::geometry;
use numdim::lattice::{
    c2_pair, cube, euler_char, euler_char_integral, triple_product, DivisorClass,
};
use numdim::qfield::QuadRat;
use numdim::sections::{h0_big, h0_big_detailed};

fn rational() -> impl Strategy<Value = BigRational> {
    (-999i64..1000, 1i64..100)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn quadrat() -> impl Strategy<Value = QuadRat> {
    (rational(), rational()).prop_map(|(p, q)| QuadRat::new(p, q))
}

fn nonzero_quadrat() -> impl Strategy<Value = QuadRat> {
    quadrat().prop_filter("nonzero", |x| !x.is_zero())
}

fn divisor() -> impl Strategy<Value = DivisorClass> {
    (quadrat(), quadrat()).prop_map(|(h1, h2)| DivisorClass::new(h1, h2))
}

/// Big integral classes: a nonzero nef seed moved around by the dynamics,
/// which preserves both bigness and integrality.
fn big_integral() -> impl Strategy<Value = DivisorClass> {
    (
        (0i64..=60, 0i64..=60).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0),
        -4i64..=4,
        any::<bool>(),
    )
        .prop_map(|((a, b), j, flip)| {
            let g = geometry();
            let moved = g.phi.power(j).unwrap().apply(&DivisorClass::from_ints(a, b));
            if flip {
                g.tau1.apply(&moved)
            } else {
                moved
            }
        })
}

proptest! {
    // --- Q(√2) field axioms and exact predicates ---

    #[test]
    fn field_axioms(a in quadrat(), b in quadrat(), c in quadrat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &QuadRat::zero(), a.clone());
        prop_assert_eq!(&a * &QuadRat::one(), a.clone());
        prop_assert_eq!(&a - &a, QuadRat::zero());
    }

    #[test]
    fn multiplicative_inverses(a in nonzero_quadrat()) {
        prop_assert_eq!(&a * &a.inverse().unwrap(), QuadRat::one());
        prop_assert_eq!(a.checked_div(&a).unwrap(), QuadRat::one());
    }

    #[test]
    fn sign_is_multiplicative(a in quadrat(), b in quadrat()) {
        prop_assert_eq!((&a * &b).sign(), a.sign() * b.sign());
    }

    #[test]
    fn conjugation_is_a_field_automorphism(a in quadrat(), b in quadrat()) {
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        // x·conj(x) is the rational norm p² - 2q².
        let product = &a * &a.conjugate();
        prop_assert!(product.is_rational());
        prop_assert_eq!(product.p, a.norm());
    }

    #[test]
    fn floor_brackets_the_value(a in quadrat()) {
        let n = a.floor();
        let floor_q = QuadRat::from_bigint(n.clone());
        let next = QuadRat::from_bigint(&n + 1);
        prop_assert!((&a - &floor_q).sign() >= 0);
        prop_assert!((&next - &a).sign() > 0);
    }

    #[test]
    fn floor_of_silver_multiples_matches_isqrt(m in 0u64..=1_000_000_000_000u64) {
        // floor(m(1+√2)) - m = isqrt(2m²), checked by the defining squares.
        let x = QuadRat::new(
            BigRational::from_integer(BigInt::from(m)),
            BigRational::from_integer(BigInt::from(m)),
        );
        let s = x.floor() - BigInt::from(m);
        let s = s.magnitude().clone();
        let target = BigUint::from(2u32) * BigUint::from(m) * BigUint::from(m);
        prop_assert!(&s * &s <= target);
        let s1 = &s + BigUint::from(1u32);
        prop_assert!(&s1 * &s1 > target);
    }

    #[test]
    fn literal_round_trip(a in quadrat()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<QuadRat>().unwrap(), a);
    }

    #[test]
    fn decimal_rendering_brackets_the_value(a in quadrat(), digits in 1usize..8) {
        // |rendered - value| ≤ 10^{-digits}/2, checked exactly.
        let rendered = a.to_decimal(digits);
        let parsed = numdim::degrees::parse_decimal_rational(&rendered).unwrap();
        let delta = &a - &QuadRat::from_rational(parsed);
        let half_ulp = QuadRat::from_rational(BigRational::new(
            BigInt::from(1),
            BigInt::from(2) * BigInt::from(10u32).pow(digits as u32),
        ));
        prop_assert!(delta.abs() <= half_ulp);
    }

    // --- lattice form and coordinates ---

    #[test]
    fn triple_product_is_symmetric_and_matches_tensor_oracle(
        d1 in divisor(), d2 in divisor(), d3 in divisor()
    ) {
        let value = triple_product(&d1, &d2, &d3);
        // Brute-force trilinear expansion over the intersection tensor.
        let tensor = |i: usize, j: usize, k: usize| -> i64 {
            match i + j + k {
                0 => 2, // H₁³
                3 => 2, // H₂³
                _ => 6, // mixed
            }
        };
        let coord = |d: &DivisorClass, i: usize| if i == 0 { d.h1.clone() } else { d.h2.clone() };
        let mut oracle = QuadRat::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let term = &(&coord(&d1, i) * &coord(&d2, j)) * &coord(&d3, k);
                    oracle = &oracle + &(&QuadRat::from_int(tensor(i, j, k)) * &term);
                }
            }
        }
        prop_assert_eq!(&value, &oracle);
        // All six permutations agree.
        prop_assert_eq!(&value, &triple_product(&d1, &d3, &d2));
        prop_assert_eq!(&value, &triple_product(&d2, &d1, &d3));
        prop_assert_eq!(&value, &triple_product(&d2, &d3, &d1));
        prop_assert_eq!(&value, &triple_product(&d3, &d1, &d2));
        prop_assert_eq!(&value, &triple_product(&d3, &d2, &d1));
    }

    #[test]
    fn triple_product_is_trilinear(d1 in divisor(), d2 in divisor(), d3 in divisor(), t in quadrat()) {
        let scaled = triple_product(&d1.scale(&t), &d2, &d3);
        prop_assert_eq!(scaled, &t * &triple_product(&d1, &d2, &d3));
        let shifted = triple_product(&(&d1 + &d2), &d2, &d3);
        let split = &triple_product(&d1, &d2, &d3) + &triple_product(&d2, &d2, &d3);
        prop_assert_eq!(shifted, split);
    }

    #[test]
    fn euler_char_is_integral_on_integral_classes(a in -200i64..=200, b in -200i64..=200) {
        let d = DivisorClass::from_ints(a, b);
        let chi = euler_char(&d, true).unwrap();
        prop_assert!(chi.is_integer());
        // Cross-check against the expanded cubic.
        let six = QuadRat::from_int(6);
        let twelve = QuadRat::from_int(12);
        let expected = &(&cube(&d) / &six) + &(&c2_pair(&d) / &twelve);
        prop_assert_eq!(chi, expected);
    }

    #[test]
    fn delta_coordinates_invert(d in divisor()) {
        let (dp, dm) = d.to_delta();
        prop_assert_eq!(DivisorClass::from_delta(&dp, &dm), d);
    }

    #[test]
    fn floor_divisor_properties(d in divisor()) {
        let floored = d.floor_divisor();
        prop_assert!(floored.is_integral());
        prop_assert_eq!(floored == d, d.is_integral());
        let diff = &d - &floored;
        for part in [&diff.h1, &diff.h2] {
            prop_assert!(part.sign() >= 0);
            prop_assert!((&QuadRat::one() - part).sign() > 0);
        }
    }

    // --- dynamics ---

    #[test]
    fn l1_invariant_and_l2_scaled_by_phi(d in big_integral()) {
        let g = geometry();
        let image = g.phi.apply(&d);
        prop_assert_eq!(image.l1(), d.l1());
        prop_assert_eq!(image.l2().unwrap(), &d.l2().unwrap() * &g.lambda_sq);
        // τ₁ also preserves L₁ here: the edge eigendata have unit norm.
        let flipped = g.tau1.apply(&d);
        prop_assert_eq!(flipped.l1(), d.l1());
    }

    #[test]
    fn normalization_is_unique_and_idempotent(d in big_integral()) {
        let g = geometry();
        let (k, landed) = g.normalize_to_c(&d).unwrap();
        let l2 = landed.l2().unwrap();
        prop_assert!(l2 >= g.cone.l2_lo && l2 < g.cone.l2_hi);
        // Any other exponent leaves the half-open window (partition property).
        for j in [-2i64, -1, 1, 2] {
            let moved = &l2 * &g.lambda_sq.pow(j).unwrap();
            prop_assert!(moved < g.cone.l2_lo || moved >= g.cone.l2_hi);
        }
        let (k0, landed0) = g.normalize_to_c(&landed).unwrap();
        prop_assert_eq!(k0, 0);
        prop_assert_eq!(landed0, landed.clone());
        // Shift property: normalizing φ^j D returns k - j.
        for j in [-20i64, -7, -1, 1, 13, 20] {
            let moved = g.phi.power(j).unwrap().apply(&d);
            let (kj, landed_j) = g.normalize_to_c(&moved).unwrap();
            prop_assert_eq!(kj, k - j);
            prop_assert_eq!(&landed_j, &landed);
        }
    }

    // --- section counting ---

    #[test]
    fn h0_is_invariant_under_pullback(d in big_integral()) {
        let g = geometry();
        let expected = h0_big(g, &d).unwrap();
        prop_assert!(expected > BigInt::from(0));
        for j in -6i64..=6 {
            let moved = g.phi.power(j).unwrap().apply(&d);
            prop_assert_eq!(h0_big(g, &moved).unwrap(), expected.clone());
        }
        // τ₁ is a pseudoautomorphism too, and preserves bigness.
        let flipped = g.tau1.apply(&d);
        prop_assert_eq!(h0_big(g, &flipped).unwrap(), expected.clone());
        // τ₂ = φ ∘ τ₁ as pullbacks; an independent routing of the engine.
        let other = g.tau2.apply(&d);
        prop_assert_eq!(h0_big(g, &other).unwrap(), expected);
    }

    #[test]
    fn h0_matches_chi_of_the_counting_class(d in big_integral()) {
        let g = geometry();
        let detail = h0_big_detailed(g, &d, 1000).unwrap();
        let counting = if detail.used_tau1 {
            g.tau1.apply(&detail.landed)
        } else {
            detail.landed.clone()
        };
        prop_assert_eq!(euler_char_integral(&counting).unwrap(), detail.h0);
    }
}
