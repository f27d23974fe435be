//! The `h⁰` engine: pull big integral classes into the cone `C`, nef-ify
//! with `τ₁*` when needed, evaluate the Euler characteristic, run `m`-scans
//! with exact squared-integer bound checks, and estimate the growth exponent.
//!
//! For a big and nef class on the threefold `h⁰ = χ` by vanishing, and `h⁰`
//! is invariant under pseudoautomorphism pullback, so every big integral
//! class can be counted exactly. Bound verdicts compare `h0²` against
//! `c²·m³` in integers; `m = 2^50` is far beyond double precision, so no
//! floating-point comparison appears anywhere on this path.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use astro_float::BigFloat;

use crate::bigdec::DecCtx;
use crate::dynamics::{Geometry, DEFAULT_ITERATION_CAP};
use crate::lattice::{euler_char_integral, DivisorClass};
use crate::qfield::QuadRat;
use crate::{Error, Result};

/// Outcome of counting sections of one big integral class.
#[derive(Clone, Debug)]
pub struct H0Breakdown {
    /// Normalization exponent: `(φ*)^k` lands the class in `C`.
    pub k: i64,
    /// The landed class, inside the half-open cone `C`.
    pub landed: DivisorClass,
    /// Whether `χ` was evaluated on `τ₁*·landed` instead of `landed`.
    pub used_tau1: bool,
    pub h0: BigInt,
}

/// Exact `h⁰` of a big integral class.
pub fn h0_big(geom: &Geometry, d: &DivisorClass) -> Result<BigInt> {
    Ok(h0_big_detailed(geom, d, DEFAULT_ITERATION_CAP)?.h0)
}

pub fn h0_big_detailed(geom: &Geometry, d: &DivisorClass, cap: u64) -> Result<H0Breakdown> {
    if !d.is_integral() {
        return Err(Error::NonIntegralClass);
    }
    let (k, landed) = geom.normalize_to_c_capped(d, cap)?;
    let landed_nef = landed.h1.sign() >= 0 && landed.h2.sign() >= 0;
    let (used_tau1, counting_class) = if landed_nef {
        (false, landed.clone())
    } else {
        let flipped = geom.tau1.apply(&landed);
        if flipped.h1.sign() >= 0 && flipped.h2.sign() >= 0 {
            (true, flipped)
        } else {
            // Unreachable for interior classes: every class of C or its
            // τ₁*-image is nef.
            return Err(Error::NefificationFailure);
        }
    };
    let h0 = euler_char_integral(&counting_class)?;
    debug_assert!(h0.is_positive(), "h0 of a big class must be positive");
    Ok(H0Breakdown { k, landed, used_tau1, h0 })
}

/// One row of a growth scan.
#[derive(Clone, Debug)]
pub struct GrowthRecord {
    pub m: BigInt,
    pub ample: DivisorClass,
    /// `⌊m·D₊⌋ + A`, always integral.
    pub rounded: DivisorClass,
    pub k_m: i64,
    pub landed: DivisorClass,
    pub used_tau1: bool,
    pub h0: BigInt,
    /// Exact verdicts of `c_lo·m^{3/2} < h0 < c_hi·m^{3/2}`; set by
    /// [`GrowthRecord::apply_bounds`].
    pub lower_ok: Option<bool>,
    pub upper_ok: Option<bool>,
}

impl GrowthRecord {
    /// Sets bound verdicts by comparing `h0²` with `c²·m³` in integers.
    pub fn apply_bounds(&mut self, c_lo: &BigInt, c_hi: &BigInt) {
        let h0_sq = &self.h0 * &self.h0;
        let m_cubed = &self.m * &self.m * &self.m;
        self.lower_ok = Some(h0_sq > c_lo * c_lo * &m_cubed);
        self.upper_ok = Some(h0_sq < c_hi * c_hi * &m_cubed);
    }

    pub fn bounds_pass(&self) -> bool {
        self.lower_ok == Some(true) && self.upper_ok == Some(true)
    }
}

fn validate_ample(ample: &DivisorClass) -> Result<()> {
    let one = QuadRat::one();
    if !ample.is_integral() || ample.h1 < one || ample.h2 < one {
        return Err(Error::Domain(
            "ample class must be integral with h1 >= 1 and h2 >= 1".into(),
        ));
    }
    Ok(())
}

/// Exact section count of `⌊m·D₊⌋ + A`.
pub fn h0_perturbed(geom: &Geometry, m: &BigInt, ample: &DivisorClass) -> Result<GrowthRecord> {
    h0_perturbed_capped(geom, m, ample, DEFAULT_ITERATION_CAP)
}

pub fn h0_perturbed_capped(
    geom: &Geometry,
    m: &BigInt,
    ample: &DivisorClass,
    cap: u64,
) -> Result<GrowthRecord> {
    if m.is_negative() {
        return Err(Error::Domain("m must be nonnegative".into()));
    }
    validate_ample(ample)?;
    let scaled = geom.delta_plus.scale(&QuadRat::from_bigint(m.clone()));
    let rounded = &scaled.floor_divisor() + ample;
    let breakdown = h0_big_detailed(geom, &rounded, cap)?;
    Ok(GrowthRecord {
        m: m.clone(),
        ample: ample.clone(),
        rounded,
        k_m: breakdown.k,
        landed: breakdown.landed,
        used_tau1: breakdown.used_tau1,
        h0: breakdown.h0,
        lower_ok: None,
        upper_ok: None,
    })
}

/// A completed scan with its overall verdict.
#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub records: Vec<GrowthRecord>,
    /// True when every row satisfies both bounds.
    pub pass: bool,
}

/// Runs one record per `m`, checking `c_lo·m^{3/2} < h0 < c_hi·m^{3/2}`
/// exactly. `m_values` must be nonempty and strictly increasing.
pub fn scan(
    geom: &Geometry,
    m_values: &[BigInt],
    ample: &DivisorClass,
    c_lo: &BigInt,
    c_hi: &BigInt,
) -> Result<ScanOutcome> {
    scan_with_options(geom, m_values, ample, c_lo, c_hi, DEFAULT_ITERATION_CAP, 1)
}

/// Scan with an explicit normalization cap and worker count. Rows are
/// independent; output order is by `m` regardless of completion order.
pub fn scan_with_options(
    geom: &Geometry,
    m_values: &[BigInt],
    ample: &DivisorClass,
    c_lo: &BigInt,
    c_hi: &BigInt,
    cap: u64,
    jobs: usize,
) -> Result<ScanOutcome> {
    if m_values.is_empty() {
        return Err(Error::Domain("scan requires at least one m value".into()));
    }
    if m_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("m values must be strictly increasing".into()));
    }
    validate_ample(ample)?;

    let mut records = if jobs > 1 {
        scan_rows_parallel(geom, m_values, ample, cap, jobs.min(m_values.len()))?
    } else {
        let mut rows = Vec::with_capacity(m_values.len());
        for m in m_values {
            rows.push(h0_perturbed_capped(geom, m, ample, cap)?);
        }
        rows
    };
    for record in &mut records {
        record.apply_bounds(c_lo, c_hi);
    }
    let pass = records.iter().all(GrowthRecord::bounds_pass);
    Ok(ScanOutcome { records, pass })
}

fn scan_rows_parallel(
    geom: &Geometry,
    m_values: &[BigInt],
    ample: &DivisorClass,
    cap: u64,
    jobs: usize,
) -> Result<Vec<GrowthRecord>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<GrowthRecord>>>> =
        m_values.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= m_values.len() {
                    break;
                }
                let row = h0_perturbed_capped(geom, &m_values[i], ample, cap);
                *slots[i].lock().unwrap() = Some(row);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every slot is filled"))
        .collect()
}

/// `[2^lo, ..., 2^hi]` as big integers.
pub fn power_of_two_values(lo: u32, hi: u32) -> Vec<BigInt> {
    (lo..=hi).map(|k| BigInt::from(1u8) << k).collect()
}

// --- machine-readable output ------------------------------------------------

/// CSV with the scan schema; exact integers are written in full.
pub fn scan_csv(records: &[GrowthRecord]) -> String {
    let mut out = String::from("m,rounded_h1,rounded_h2,k_m,used_tau1,h0,lower_ok,upper_ok\n");
    for r in records {
        let (h1, h2) = r
            .rounded
            .integral_coords()
            .expect("scan rows carry integral rounded classes");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.m,
            h1,
            h2,
            r.k_m,
            r.used_tau1,
            r.h0,
            opt_bool(r.lower_ok),
            opt_bool(r.upper_ok),
        ));
    }
    out
}

fn opt_bool(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

#[derive(Serialize)]
struct RecordJson {
    m: String,
    rounded_h1: String,
    rounded_h2: String,
    k_m: i64,
    used_tau1: bool,
    h0: String,
    lower_ok: Option<bool>,
    upper_ok: Option<bool>,
}

/// JSON mirror of the CSV schema. Big integers are strings so that no
/// consumer is forced through double precision.
pub fn scan_json(records: &[GrowthRecord]) -> String {
    let rows: Vec<RecordJson> = records
        .iter()
        .map(|r| {
            let (h1, h2) = r
                .rounded
                .integral_coords()
                .expect("scan rows carry integral rounded classes");
            RecordJson {
                m: r.m.to_string(),
                rounded_h1: h1.to_string(),
                rounded_h2: h2.to_string(),
                k_m: r.k_m,
                used_tau1: r.used_tau1,
                h0: r.h0.to_string(),
                lower_ok: r.lower_ok,
                upper_ok: r.upper_ok,
            }
        })
        .collect();
    serde_json::to_string(&rows).expect("records serialize")
}

// --- growth-exponent estimation ----------------------------------------------

/// Least-squares estimate of the growth exponent of `h0` against `m`.
pub struct ExponentEstimate {
    /// Slope of `log h0` against `log m`.
    pub slope: BigFloat,
    /// Largest absolute regression residual.
    pub max_residual: BigFloat,
}

/// Regresses `log h0` on `log m` at 50-digit precision from the exact
/// integers. Requires at least three records with strictly increasing
/// `m ≥ 1` and `h0 ≥ 1`.
pub fn estimate_exponent(records: &[GrowthRecord]) -> Result<ExponentEstimate> {
    if records.len() < 3 {
        return Err(Error::InsufficientData("need at least three records".into()));
    }
    if records.windows(2).any(|w| w[0].m >= w[1].m) {
        return Err(Error::InsufficientData("m values must be strictly increasing".into()));
    }
    if records.iter().any(|r| r.m < BigInt::from(1) || r.h0 < BigInt::from(1)) {
        return Err(Error::InsufficientData("all records need m >= 1 and h0 >= 1".into()));
    }

    let mut ctx = DecCtx::with_digits(50);
    let n = ctx.int(records.len() as i64);
    let points: Vec<(BigFloat, BigFloat)> = records
        .iter()
        .map(|r| {
            let x = ctx.from_bigint(&r.m);
            let y = ctx.from_bigint(&r.h0);
            (ctx.ln(&x), ctx.ln(&y))
        })
        .collect();

    let mut sum_x = ctx.int(0);
    let mut sum_y = ctx.int(0);
    for (x, y) in &points {
        sum_x = ctx.add(&sum_x, x);
        sum_y = ctx.add(&sum_y, y);
    }
    let mean_x = ctx.div(&sum_x, &n);
    let mean_y = ctx.div(&sum_y, &n);

    let mut sxy = ctx.int(0);
    let mut sxx = ctx.int(0);
    for (x, y) in &points {
        let dx = ctx.sub(x, &mean_x);
        let dy = ctx.sub(y, &mean_y);
        sxy = ctx.add(&sxy, &ctx.mul(&dx, &dy));
        sxx = ctx.add(&sxx, &ctx.mul(&dx, &dx));
    }
    if sxx.is_zero() {
        return Err(Error::InsufficientData("degenerate abscissas".into()));
    }
    let slope = ctx.div(&sxy, &sxx);
    let intercept = ctx.sub(&mean_y, &ctx.mul(&slope, &mean_x));

    let mut max_residual = ctx.int(0);
    for (x, y) in &points {
        let fitted = ctx.add(&intercept, &ctx.mul(&slope, x));
        let residual = ctx.sub(y, &fitted).abs();
        if residual > max_residual {
            max_residual = residual;
        }
    }
    Ok(ExponentEstimate { slope, max_residual })
}
