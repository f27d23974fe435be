//! Cross-checks of the exact production paths against independent
//! high-precision decimal evaluations. The exact comparisons are the
//! implementation; the 200-digit routes exist only to corroborate them.

use num_bigint::BigInt;
use num_traits::Signed;

use numdim::bigdec::DecCtx;
use numdim::dynamics::geometry;
use numdim::lattice::DivisorClass;
use numdim::qfield::isqrt;
use numdim::sections::{power_of_two_values, scan};

/// Deterministic generator for reproducible pseudo-random test inputs.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

fn random_big_integral(rng: &mut SplitMix64) -> DivisorClass {
    let g = geometry();
    let a = rng.range(0, 500);
    let b = rng.range(0, 500);
    let (a, b) = if a == 0 && b == 0 { (1, 1) } else { (a, b) };
    let j = rng.range(-5, 5);
    let base = g.phi.power(j).unwrap().apply(&DivisorClass::from_ints(a, b));
    if rng.next() & 1 == 0 {
        g.tau1.apply(&base)
    } else {
        base
    }
}

#[test]
fn normalization_exponent_matches_log_closed_form() {
    // k = -⌊½(log_λ L₂(D) - log_λ L₂(τ₁*H₂))⌋ at 200-digit precision.
    let g = geometry();
    let mut ctx = DecCtx::with_digits(200);
    let ln_lambda = {
        let l = ctx.from_quadrat(&g.lambda);
        ctx.ln(&l)
    };
    let ln_lo = {
        let lo = ctx.from_quadrat(&g.cone.l2_lo);
        ctx.ln(&lo)
    };
    let half = ctx.parse("0.5");

    let mut rng = SplitMix64(0x5eed_0001);
    for _ in 0..300 {
        let d = random_big_integral(&mut rng);
        let (k_exact, landed) = g.normalize_to_c(&d).unwrap();

        let l2 = d.l2().unwrap();
        let l2_f = ctx.from_quadrat(&l2);
        let ln_l2 = ctx.ln(&l2_f);
        // ½(log_λ L₂(D) - log_λ l2_lo) = (ln L₂ - ln l2_lo) / (2 ln λ)
        let diff = ctx.sub(&ln_l2, &ln_lo);
        let ratio = ctx.div(&diff, &ln_lambda);
        let scaled = ctx.mul(&half, &ratio);
        if landed.l2().unwrap() == g.cone.l2_lo {
            // Exact boundary landing: the closed form's argument is the
            // exact integer -k, where a decimal floor is ill-conditioned.
            // Corroborate proximity instead.
            let expected = ctx.int(-k_exact);
            let gap = ctx.sub(&scaled, &expected).abs();
            assert!(gap < ctx.parse("1e-150"), "boundary case drifted for {d}");
        } else {
            let k_closed = -ctx.floor_to_bigint(&scaled);
            assert_eq!(
                BigInt::from(k_exact),
                k_closed,
                "closed-form exponent disagrees for {d}",
            );
        }
    }
}

#[test]
fn squared_bound_checks_match_200_digit_decimals() {
    // lower_ok/upper_ok were decided by h0² vs c²m³; re-decide them against
    // ⌊m^{3/2}·10^200⌋ computed with an integer square root, and make sure
    // no row sits inside the rounding window of the cross-check itself.
    let g = geometry();
    let scale: BigInt = BigInt::from(10u8).pow(200);
    let scale_sq = (&scale) * (&scale);
    for ample in [DivisorClass::from_ints(1, 1), DivisorClass::from_ints(2, 2)] {
        let ms = power_of_two_values(10, 41);
        let outcome = scan(g, &ms, &ample, &BigInt::from(24), &BigInt::from(54)).unwrap();
        for r in &outcome.records {
            let m_cubed = (&r.m) * (&r.m) * (&r.m);
            let s = BigInt::from(isqrt((m_cubed * &scale_sq).magnitude()));
            let h0_scaled = (&r.h0) * (&scale);
            for (c, verdict, is_lower) in [
                (BigInt::from(24), r.lower_ok.unwrap(), true),
                (BigInt::from(54), r.upper_ok.unwrap(), false),
            ] {
                let cs = (&c) * (&s);
                let separation = (&h0_scaled - &cs).abs();
                assert!(
                    separation > c,
                    "cross-check resolution too coarse at m = {}",
                    r.m
                );
                let decimal_verdict = if is_lower { h0_scaled > cs } else { h0_scaled < cs };
                assert_eq!(verdict, decimal_verdict, "bound mismatch at m = {}", r.m);
            }
        }
    }
}
