//! Closed-form numerical dimensions from dynamical degrees: the `ν_vol`
//! formula, the volume sequence underlying it, and the automorphism `κ_σ`
//! formula `max {a : λ_a = λ₁^a and J̃_a = a·J̃₁}`.
//!
//! `ν_vol = (dim X)(1 + log μ₁ / log λ₁)^{-1}` is returned as an exact
//! rational whenever the log-ratio is detectably rational (equal degrees, or
//! one degree an integer power of the other) and as a 50-digit decimal
//! otherwise; rationality in general is an open problem, so the decimal path
//! never asserts it.

use std::fmt;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Deserialize;

use crate::bigdec::DecCtx;
use crate::qfield::QuadRat;
use crate::{Error, Result};

/// Upper bound on the integer-power search in the rational-log detection.
const POWER_SEARCH_LIMIT: i64 = 64;

/// Result of the `ν_vol` formula: exact when detectable, decimal otherwise.
#[derive(Clone, Debug)]
pub enum NuVolValue {
    Exact(BigRational),
    Approx(BigFloat),
}

impl NuVolValue {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            NuVolValue::Exact(r) => Some(r),
            NuVolValue::Approx(_) => None,
        }
    }

    /// Decimal rendering; exact values print as fractions.
    pub fn display(&self, digits: usize) -> String {
        match self {
            NuVolValue::Exact(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            NuVolValue::Approx(x) => DecCtx::with_digits(digits + 8).format_sig(x, digits),
        }
    }
}

impl fmt::Display for NuVolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(50))
    }
}

/// `log μ / log λ` as an exact rational, when one degree is an integer power
/// of the other (searched up to exponent 64).
fn rational_log_ratio(lambda: &QuadRat, mu: &QuadRat) -> Option<BigRational> {
    if lambda == mu {
        return Some(BigRational::one());
    }
    let mut power = lambda.clone();
    for j in 2..=POWER_SEARCH_LIMIT {
        power = &power * lambda;
        if &power == mu {
            return Some(BigRational::from_integer(BigInt::from(j)));
        }
        if power > *mu {
            break;
        }
    }
    let mut power = mu.clone();
    for j in 2..=POWER_SEARCH_LIMIT {
        power = &power * mu;
        if &power == lambda {
            return Some(BigRational::new(BigInt::one(), BigInt::from(j)));
        }
        if power > *lambda {
            break;
        }
    }
    None
}

/// `ν_vol = dim · (1 + log μ₁ / log λ₁)^{-1}` for degrees `λ₁, μ₁ > 1`.
pub fn nu_vol(dim: u32, lambda1: &QuadRat, mu1: &QuadRat) -> Result<NuVolValue> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let one = QuadRat::one();
    if *lambda1 <= one || *mu1 <= one {
        return Err(Error::Domain("dynamical degrees must exceed 1".into()));
    }
    if let Some(ratio) = rational_log_ratio(lambda1, mu1) {
        // dim / (1 + a/b) = dim·b / (a + b)
        let dim_r = BigRational::from_integer(BigInt::from(dim));
        return Ok(NuVolValue::Exact(dim_r / (BigRational::one() + ratio)));
    }
    let mut ctx = DecCtx::with_digits(50);
    let ln_lambda = {
        let x = ctx.from_quadrat(lambda1);
        ctx.ln(&x)
    };
    let ln_mu = {
        let x = ctx.from_quadrat(mu1);
        ctx.ln(&x)
    };
    let dim_f = ctx.int(dim as i64);
    let denom = ctx.add(&ln_lambda, &ln_mu);
    let value = ctx.div(&ctx.mul(&dim_f, &ln_lambda), &denom);
    Ok(NuVolValue::Approx(value))
}

/// `t_n = μ₁^{-n}/(λ₁^n - μ₁^{-n}) = 1/((λ₁μ₁)^n - 1)`, exact.
pub fn t_exact(lambda1: &QuadRat, mu1: &QuadRat, n: u32) -> Result<QuadRat> {
    let product_pow = (lambda1 * mu1).pow(n as i64)?;
    (QuadRat::one()).checked_div(&(&product_pow - &QuadRat::one()))
}

/// `vol_n = (λ₁^n - μ₁^{-n})^{-dim} · vol(A)`, exact.
pub fn vol_exact(
    lambda1: &QuadRat,
    mu1: &QuadRat,
    dim: u32,
    vol_a: &QuadRat,
    n: u32,
) -> Result<QuadRat> {
    let base = &lambda1.pow(n as i64)? - &mu1.pow(-(n as i64))?;
    Ok(&base.pow(-(dim as i64))? * vol_a)
}

/// One emitted row of the volume sequence.
#[derive(Clone, Debug)]
pub struct VolRow {
    pub n: u32,
    pub t_n: BigFloat,
    pub vol_n: BigFloat,
    pub c_n: BigFloat,
}

/// Volume-sequence result with per-sequence verdicts.
pub struct VolSequence {
    pub rows: Vec<VolRow>,
    pub nu: NuVolValue,
    /// `C_n` strictly decreasing, verified by exact comparisons.
    pub c_strictly_decreasing: bool,
    /// `vol(A)·t_nᵛ < vol_n < 2·vol(A)·t_nᵛ` on every emitted row.
    pub sandwich_all_rows: bool,
}

/// Emits `t_n`, `vol_n` and `C_n = vol_n·t_n^{-ν}` for `n = 1..n_max` and
/// verifies that `C_n` strictly decreases and that the volume sandwich holds
/// on every row. Values are exact internally; the emitted columns are
/// 60-digit decimals.
pub fn vol_sequence(
    n_max: u32,
    dim: u32,
    lambda1: &QuadRat,
    mu1: &QuadRat,
    vol_a: &QuadRat,
) -> Result<VolSequence> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    if vol_a.sign() <= 0 {
        return Err(Error::Domain("vol(A) must be positive".into()));
    }
    let nu = nu_vol(dim, lambda1, mu1)?; // also validates dim and the degrees

    let mut ctx = DecCtx::with_digits(60);
    let nu_float = match &nu {
        NuVolValue::Exact(r) => ctx.from_rational(r),
        NuVolValue::Approx(x) => x.clone(),
    };

    let mut rows = Vec::with_capacity(n_max as usize);
    let mut t_rats = Vec::with_capacity(n_max as usize);
    let mut vol_rats = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let t_rat = t_exact(lambda1, mu1, n)?;
        let vol_rat = vol_exact(lambda1, mu1, dim, vol_a, n)?;
        let t_n = ctx.from_quadrat(&t_rat);
        let vol_n = ctx.from_quadrat(&vol_rat);
        let t_pow_nu = ctx.pow(&t_n, &nu_float);
        let c_n = ctx.div(&vol_n, &t_pow_nu);
        rows.push(VolRow { n, t_n, vol_n, c_n });
        t_rats.push(t_rat);
        vol_rats.push(vol_rat);
    }

    let (c_strictly_decreasing, sandwich_all_rows) = match &nu {
        NuVolValue::Exact(r) => {
            verify_exact(&t_rats, &vol_rats, vol_a, r)?
        }
        NuVolValue::Approx(_) => {
            // ν irrational: C_n = vol(A)·(1-(λμ)^{-n})^{ν-dim} with negative
            // exponent, so monotonicity reduces to the exact base chain;
            // the sandwich is checked on the 60-digit columns.
            let mut bases = Vec::with_capacity(t_rats.len());
            for n in 1..=n_max {
                let inv_pow = (lambda1 * mu1).pow(-(n as i64))?;
                bases.push(&QuadRat::one() - &inv_pow);
            }
            let decreasing = bases.windows(2).all(|w| w[0] < w[1]);
            let vol_a_f = ctx.from_quadrat(vol_a);
            let two = ctx.int(2);
            let sandwich = rows.iter().all(|row| {
                let lower = vol_a_f.clone();
                let upper = ctx.mul(&two, &vol_a_f);
                row.c_n > lower && row.c_n < upper
            });
            (decreasing, sandwich)
        }
    };

    Ok(VolSequence { rows, nu, c_strictly_decreasing, sandwich_all_rows })
}

/// Exact verdicts when `ν = p/q`: compares `C_n^q = vol_n^q · t_n^{-p}` and
/// the sandwich `vol(A)^q·t_n^p < vol_n^q < 2^q·vol(A)^q·t_n^p`.
fn verify_exact(
    t_rats: &[QuadRat],
    vol_rats: &[QuadRat],
    vol_a: &QuadRat,
    nu: &BigRational,
) -> Result<(bool, bool)> {
    let p = nu.numer().to_i64().ok_or_else(|| Error::Domain("exponent overflow".into()))?;
    let q = nu.denom().to_i64().ok_or_else(|| Error::Domain("exponent overflow".into()))?;
    let mut c_powers = Vec::with_capacity(t_rats.len());
    let mut sandwich = true;
    for (t, vol) in t_rats.iter().zip(vol_rats) {
        let vol_q = vol.pow(q)?;
        let t_p = t.pow(p)?;
        c_powers.push((&vol_q).checked_div(&t_p)?);
        let lower = &vol_a.pow(q)? * &t_p;
        let upper = &QuadRat::from_int(2).pow(q)? * &lower;
        if !(lower < vol_q && vol_q < upper) {
            sandwich = false;
        }
    }
    let decreasing = c_powers.windows(2).all(|w| w[0] > w[1]);
    Ok((decreasing, sandwich))
}

// --- kappa from a degree profile ---------------------------------------------

/// A dynamical-degree value: exact in Q(√2), or a decimal compared with the
/// documented relative tolerance.
#[derive(Clone, Debug)]
pub enum DegreeValue {
    Exact(QuadRat),
    Decimal(BigRational),
}

impl DegreeValue {
    pub fn as_quadrat(&self) -> QuadRat {
        match self {
            DegreeValue::Exact(x) => x.clone(),
            DegreeValue::Decimal(r) => QuadRat::from_rational(r.clone()),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, DegreeValue::Exact(_))
    }
}

#[derive(Clone, Debug)]
pub struct DegreeEntry {
    pub lambda: DegreeValue,
    pub jtilde: u64,
}

/// Dimension plus the `(λ_a, J̃_a)` list for `a = 1..entries.len()`.
#[derive(Clone, Debug)]
pub struct DegreeProfile {
    pub dim: u32,
    pub entries: Vec<DegreeEntry>,
}

/// Relative tolerance for decimal degree comparisons: `10^{-9}`, printed in
/// CLI output so near-misses are never silent.
pub fn decimal_rel_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

impl DegreeProfile {
    pub fn new(dim: u32, entries: Vec<DegreeEntry>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be positive".into()));
        }
        if entries.is_empty() || entries.len() > dim as usize {
            return Err(Error::Domain(format!(
                "profile needs between 1 and {dim} entries, got {}",
                entries.len()
            )));
        }
        for (idx, entry) in entries.iter().enumerate() {
            if entry.lambda.as_quadrat().sign() <= 0 {
                return Err(Error::Domain(format!("lambda_{} must be positive", idx + 1)));
            }
        }
        Ok(DegreeProfile { dim, entries })
    }

    /// Log-concavity check `λ_a² ≥ λ_{a-1}·λ_{a+1}` (with `λ₀ = 1`);
    /// violations are warnings, not errors.
    pub fn log_concavity_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        let lambdas: Vec<QuadRat> = std::iter::once(QuadRat::one())
            .chain(self.entries.iter().map(|e| e.lambda.as_quadrat()))
            .collect();
        for a in 1..lambdas.len().saturating_sub(1) {
            let square = &lambdas[a] * &lambdas[a];
            let neighbors = &lambdas[a - 1] * &lambdas[a + 1];
            if square < neighbors {
                warnings.push(format!(
                    "log-concavity violated at a = {a}: lambda_{a}^2 < lambda_{}*lambda_{}",
                    a - 1,
                    a + 1
                ));
            }
        }
        warnings
    }
}

/// `κ_σ = max {a : λ_a = λ₁^a and J̃_a = a·J̃₁}`.
///
/// Pairs of exact inputs are compared exactly; any decimal input switches
/// the λ-condition to `|λ_a - λ₁^a| ≤ 10^{-9}·λ₁^a` (inclusive).
pub fn kappa_from_degrees(profile: &DegreeProfile) -> Result<u32> {
    let first = &profile.entries[0];
    let lambda1 = first.lambda.as_quadrat();
    if lambda1 <= QuadRat::one() {
        return Err(Error::Domain("lambda_1 must exceed 1".into()));
    }
    let tolerance = QuadRat::from_rational(decimal_rel_tolerance());
    let mut best = 0u32;
    let mut lambda1_pow = QuadRat::one();
    for (idx, entry) in profile.entries.iter().enumerate() {
        let a = (idx + 1) as u32;
        lambda1_pow = &lambda1_pow * &lambda1;
        let lambda_a = entry.lambda.as_quadrat();
        let lambda_matches = if first.lambda.is_exact() && entry.lambda.is_exact() {
            lambda_a == lambda1_pow
        } else {
            (&lambda_a - &lambda1_pow).abs() <= &tolerance * &lambda1_pow
        };
        let jtilde_matches = entry.jtilde == a as u64 * first.jtilde;
        if lambda_matches && jtilde_matches {
            best = a;
        }
    }
    debug_assert!(best >= 1, "a = 1 always qualifies");
    Ok(best.max(1))
}

// --- JSON interface -----------------------------------------------------------

#[derive(Deserialize)]
struct ProfileDoc {
    dim: u32,
    lambda_format: String,
    entries: Vec<EntryDoc>,
}

#[derive(Deserialize)]
struct EntryDoc {
    lambda: serde_json::Value,
    jtilde: u64,
}

/// Parses the `kappa-auto` document
/// `{dim, entries: [{lambda, jtilde}...], lambda_format: "decimal"|"quadrat"}`.
pub fn profile_from_json(text: &str) -> Result<DegreeProfile> {
    let doc: ProfileDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        pos: e.column().saturating_sub(1),
        msg: e.to_string(),
    })?;
    let mut entries = Vec::with_capacity(doc.entries.len());
    for (idx, entry) in doc.entries.iter().enumerate() {
        let lambda_text = match &entry.lambda {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(Error::Domain(format!(
                    "entry {}: lambda must be a string or number, got {other}",
                    idx + 1
                )))
            }
        };
        let lambda = match doc.lambda_format.as_str() {
            "decimal" => DegreeValue::Decimal(parse_decimal_rational(&lambda_text)?),
            "quadrat" => DegreeValue::Exact(lambda_text.parse()?),
            other => {
                return Err(Error::Domain(format!(
                    "lambda_format must be \"decimal\" or \"quadrat\", got {other:?}"
                )))
            }
        };
        entries.push(DegreeEntry { lambda, jtilde: entry.jtilde });
    }
    DegreeProfile::new(doc.dim, entries)
}

/// Exact rational value of a plain decimal literal like `-12.34e-5`.
pub fn parse_decimal_rational(s: &str) -> Result<BigRational> {
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.into() };
    let bytes = s.trim().as_bytes();
    if bytes.is_empty() {
        return Err(err(0, "empty decimal literal"));
    }
    let mut i = 0;
    let neg = match bytes[0] {
        b'-' => {
            i += 1;
            true
        }
        b'+' => {
            i += 1;
            false
        }
        _ => false,
    };
    let digit_run = |i: &mut usize| {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        start != *i
    };
    let int_start = i;
    if !digit_run(&mut i) {
        return Err(err(i, "expected a digit"));
    }
    let int_part = &s.trim()[int_start..i];
    let mut frac_part = "";
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        let start = i;
        if !digit_run(&mut i) {
            return Err(err(i, "expected a digit after the decimal point"));
        }
        frac_part = &s.trim()[start..i];
    }
    let mut exponent: i64 = 0;
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        i += 1;
        let exp_neg = if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            let neg = bytes[i] == b'-';
            i += 1;
            neg
        } else {
            false
        };
        let start = i;
        if !digit_run(&mut i) {
            return Err(err(i, "expected exponent digits"));
        }
        exponent = s.trim()[start..i]
            .parse::<i64>()
            .map_err(|_| err(start, "exponent out of range"))?;
        if exp_neg {
            exponent = -exponent;
        }
    }
    if i != bytes.len() {
        return Err(err(i, "trailing characters in decimal literal"));
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().expect("digit run");
    let shift = exponent - frac_part.len() as i64;
    let mut value = BigRational::from_integer(digits);
    let ten = BigInt::from(10);
    if shift >= 0 {
        value *= BigRational::from_integer(ten.pow(shift as u32));
    } else {
        value /= BigRational::from_integer(ten.pow((-shift) as u32));
    }
    if neg {
        value = -value;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigdec;

    fn lambda() -> QuadRat {
        QuadRat::from_ints(17, 12)
    }

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn nu_vol_symmetric_case_is_exact() {
        let v = nu_vol(3, &lambda(), &lambda()).unwrap();
        assert_eq!(v.as_rational(), Some(&rational(3, 2)));
        for dim in 1..=8 {
            let v = nu_vol(dim, &lambda(), &lambda()).unwrap();
            assert_eq!(v.as_rational(), Some(&rational(dim as i64, 2)));
        }
    }

    #[test]
    fn nu_vol_detects_integer_powers() {
        let lambda_sq = &lambda() * &lambda();
        // (3, λ², λ): log ratio 1/2, ν = 3/(3/2) = 2.
        let v = nu_vol(3, &lambda_sq, &lambda()).unwrap();
        assert_eq!(v.as_rational(), Some(&rational(2, 1)));
        // Reversed: log ratio 2, ν = 3/3 = 1.
        let v = nu_vol(3, &lambda(), &lambda_sq).unwrap();
        assert_eq!(v.as_rational(), Some(&rational(1, 1)));
    }

    #[test]
    fn nu_vol_decimal_path_and_symmetry() {
        let a = QuadRat::from_ints(3, 0);
        let b = QuadRat::from_ints(5, 0);
        let v1 = nu_vol(3, &a, &b).unwrap();
        let v2 = nu_vol(3, &b, &a).unwrap();
        let (x1, x2) = match (&v1, &v2) {
            (NuVolValue::Approx(x1), NuVolValue::Approx(x2)) => (x1, x2),
            other => panic!("expected decimals, got {other:?}"),
        };
        let total = bigdec::to_f64(x1) + bigdec::to_f64(x2);
        assert!((total - 3.0).abs() < 1e-12);
    }

    #[test]
    fn nu_vol_rejects_degenerate_degrees() {
        assert!(nu_vol(3, &QuadRat::one(), &lambda()).is_err());
        assert!(nu_vol(3, &lambda(), &QuadRat::from_int(1)).is_err());
        assert!(nu_vol(0, &lambda(), &lambda()).is_err());
    }

    #[test]
    fn volume_sequence_at_builtin_parameters() {
        let vol_a = QuadRat::from_int(320);
        let seq = vol_sequence(20, 3, &lambda(), &lambda(), &vol_a).unwrap();
        assert_eq!(seq.rows.len(), 20);
        assert!(seq.c_strictly_decreasing);
        assert!(seq.sandwich_all_rows);
        assert_eq!(seq.nu.as_rational(), Some(&rational(3, 2)));
        // C_1 > vol(A) and already within a factor 2.
        let c1 = bigdec::to_f64(&seq.rows[0].c_n);
        assert!(c1 > 320.0 && c1 < 640.0);
    }

    #[test]
    fn volume_identity_is_exact() {
        // vol_n · (λ^n - μ^{-n})^{dim} = vol(A) exactly.
        let vol_a = QuadRat::from_int(320);
        for n in 1..=10 {
            let vol_n = vol_exact(&lambda(), &lambda(), 3, &vol_a, n).unwrap();
            let base = &lambda().pow(n as i64).unwrap() - &lambda().pow(-(n as i64)).unwrap();
            assert_eq!(&vol_n * &base.pow(3).unwrap(), vol_a);
        }
    }

    #[test]
    fn c20_is_within_1e50_of_vol_a() {
        // (C_20/320)² = (1 - λ^{-40})^{-3} must lie in (1, (1+10^{-50})²),
        // an exact rational comparison.
        let lam = lambda();
        let base = &QuadRat::one() - &(&lam * &lam).pow(-40).unwrap();
        let ratio_sq = base.pow(-3).unwrap();
        let one = QuadRat::one();
        let eps = QuadRat::from_rational(BigRational::new(
            BigInt::one(),
            BigInt::from(10u8).pow(50),
        ));
        let bound = &(&one + &eps) * &(&one + &eps);
        assert!(ratio_sq > one);
        assert!(ratio_sq < bound);
    }

    #[test]
    fn adopted_exponent_convention_converges_and_alternative_diverges() {
        // Adopted: vol_n = (λ^n - μ^{-n})^{-dim}·vol(A) gives C_n → vol(A)
        // decreasing. The opposite sign reading blows up instead.
        let vol_a = QuadRat::from_int(320);
        let seq = vol_sequence(6, 3, &lambda(), &lambda(), &vol_a).unwrap();
        let c_last = bigdec::to_f64(&seq.rows.last().unwrap().c_n);
        assert!((c_last - 320.0).abs() < 1e-6);

        let mut ctx = DecCtx::with_digits(60);
        let mut previous: Option<f64> = None;
        for n in 1..=6 {
            let base = &lambda().pow(n).unwrap() - &lambda().pow(-n).unwrap();
            let alt_vol = &base.pow(3).unwrap() * &vol_a; // wrong-sign reading
            let t = t_exact(&lambda(), &lambda(), n as u32).unwrap();
            let t_f = ctx.from_quadrat(&t);
            let nu = ctx.parse("1.5");
            let alt_vol_f = ctx.from_quadrat(&alt_vol);
            let t_pow = ctx.pow(&t_f, &nu);
            let c_alt = ctx.div(&alt_vol_f, &t_pow);
            let value = bigdec::to_f64(&c_alt);
            if let Some(prev) = previous {
                assert!(value > prev, "alternative reading must increase");
            }
            previous = Some(value);
        }
        assert!(previous.unwrap() > 1e40, "alternative reading diverges");
    }

    #[test]
    fn sequence_rejects_bad_inputs() {
        let vol_a = QuadRat::from_int(320);
        assert!(vol_sequence(0, 3, &lambda(), &lambda(), &vol_a).is_err());
        assert!(vol_sequence(5, 3, &lambda(), &lambda(), &QuadRat::zero()).is_err());
        assert!(vol_sequence(5, 3, &QuadRat::one(), &lambda(), &vol_a).is_err());
    }

    fn exact_entry(lambda: QuadRat, jtilde: u64) -> DegreeEntry {
        DegreeEntry { lambda: DegreeValue::Exact(lambda), jtilde }
    }

    #[test]
    fn kappa_on_hyper_kahler_style_profile() {
        // dim 4, λ = (2, 4, λ₃ < 8, λ₄), all J̃ = 0: the first two degrees
        // are exact powers, so κ = 2.
        let two = QuadRat::from_int(2);
        let profile = DegreeProfile::new(
            4,
            vec![
                exact_entry(two.clone(), 0),
                exact_entry(QuadRat::from_int(4), 0),
                exact_entry(QuadRat::from_int(7), 0),
                exact_entry(QuadRat::from_int(9), 0),
            ],
        )
        .unwrap();
        assert_eq!(kappa_from_degrees(&profile).unwrap(), 2);
    }

    #[test]
    fn kappa_full_profile_reaches_dim() {
        let lam = lambda();
        let entries: Vec<DegreeEntry> = (1..=3)
            .map(|a| exact_entry(lam.pow(a).unwrap(), 2 * a as u64))
            .collect();
        let profile = DegreeProfile::new(3, entries).unwrap();
        assert_eq!(kappa_from_degrees(&profile).unwrap(), 3);
    }

    #[test]
    fn kappa_is_a_max_not_a_prefix() {
        // a = 2 fails but a = 3 qualifies; the formula takes the max.
        let two = QuadRat::from_int(2);
        let profile = DegreeProfile::new(
            3,
            vec![
                exact_entry(two.clone(), 0),
                exact_entry(QuadRat::from_int(3), 0),
                exact_entry(QuadRat::from_int(8), 0),
            ],
        )
        .unwrap();
        assert_eq!(kappa_from_degrees(&profile).unwrap(), 3);
    }

    #[test]
    fn kappa_tolerance_boundary_is_inclusive() {
        // λ₁ = 3, λ₂ compared against 9 with relative tolerance 1e-9: the
        // boundary value 9(1 - 1e-9) qualifies, one part in 1e10 below fails.
        let at_boundary = rational(9, 1) * (BigRational::one() - rational(1, 1_000_000_000));
        let below = rational(9, 1)
            * (BigRational::one() - rational(11, 10_000_000_000));
        for (lambda2, expected) in [(at_boundary, 2), (below, 1)] {
            let profile = DegreeProfile::new(
                2,
                vec![
                    DegreeEntry { lambda: DegreeValue::Decimal(rational(3, 1)), jtilde: 0 },
                    DegreeEntry { lambda: DegreeValue::Decimal(lambda2), jtilde: 0 },
                ],
            )
            .unwrap();
            assert_eq!(kappa_from_degrees(&profile).unwrap(), expected);
        }
    }

    #[test]
    fn kappa_monotone_under_truncation() {
        let two = QuadRat::from_int(2);
        let entries = vec![
            exact_entry(two.clone(), 1),
            exact_entry(QuadRat::from_int(4), 2),
            exact_entry(QuadRat::from_int(5), 9),
        ];
        let full = DegreeProfile::new(3, entries.clone()).unwrap();
        let result = kappa_from_degrees(&full).unwrap();
        assert_eq!(result, 2);
        let truncated = DegreeProfile::new(3, entries[..result as usize].to_vec()).unwrap();
        assert_eq!(kappa_from_degrees(&truncated).unwrap(), result);
    }

    #[test]
    fn kappa_requires_expanding_lambda1() {
        let profile = DegreeProfile::new(2, vec![exact_entry(QuadRat::one(), 0)]).unwrap();
        assert!(matches!(kappa_from_degrees(&profile), Err(Error::Domain(_))));
    }

    #[test]
    fn log_concavity_warnings_fire() {
        let profile = DegreeProfile::new(
            3,
            vec![
                exact_entry(QuadRat::from_int(2), 0),
                exact_entry(QuadRat::from_int(1), 0),
                exact_entry(QuadRat::from_int(4), 0),
            ],
        )
        .unwrap();
        let warnings = profile.log_concavity_warnings();
        assert!(!warnings.is_empty());

        let fine = DegreeProfile::new(
            2,
            vec![exact_entry(QuadRat::from_int(4), 0), exact_entry(QuadRat::from_int(8), 0)],
        )
        .unwrap();
        assert!(fine.log_concavity_warnings().is_empty());
    }

    #[test]
    fn profile_json_round_trip() {
        let doc = r#"{
            "dim": 4,
            "lambda_format": "decimal",
            "entries": [
                {"lambda": "2", "jtilde": 0},
                {"lambda": "4.0", "jtilde": 0},
                {"lambda": 7.5, "jtilde": 0},
                {"lambda": "15.9999999999", "jtilde": 0}
            ]
        }"#;
        let profile = profile_from_json(doc).unwrap();
        assert_eq!(profile.dim, 4);
        assert_eq!(kappa_from_degrees(&profile).unwrap(), 4);

        let quadrat_doc = r#"{
            "dim": 2,
            "lambda_format": "quadrat",
            "entries": [
                {"lambda": "17+12*sqrt2", "jtilde": 0},
                {"lambda": "577+408*sqrt2", "jtilde": 0}
            ]
        }"#;
        let profile = profile_from_json(quadrat_doc).unwrap();
        assert_eq!(kappa_from_degrees(&profile).unwrap(), 2);

        assert!(profile_from_json("{").is_err());
        assert!(profile_from_json(r#"{"dim":1,"lambda_format":"oct","entries":[{"lambda":"2","jtilde":0}]}"#).is_err());
        assert!(profile_from_json(r#"{"dim":1,"lambda_format":"decimal","entries":[]}"#).is_err());
    }

    #[test]
    fn decimal_literals_parse_exactly() {
        assert_eq!(parse_decimal_rational("2").unwrap(), rational(2, 1));
        assert_eq!(parse_decimal_rational("-0.5").unwrap(), rational(-1, 2));
        assert_eq!(parse_decimal_rational("1.25e2").unwrap(), rational(125, 1));
        assert_eq!(parse_decimal_rational("33.97").unwrap(), rational(3397, 100));
        assert_eq!(parse_decimal_rational("1e-3").unwrap(), rational(1, 1000));
        assert!(parse_decimal_rational("").is_err());
        assert!(parse_decimal_rational("1.").is_err());
        assert!(parse_decimal_rational("1.2.3").is_err());
        assert!(parse_decimal_rational("abc").is_err());
    }
}
