//! High-precision decimal evaluation for the estimator and display paths.
//!
//! Everything exact stays in [`crate::qfield`]; this module only serves the
//! places the contracts call for decimals (growth-exponent regression, the
//! ν_vol formula off the rational cases, volume-sequence columns and
//! cross-checks). Values are arbitrary-precision binary floats carried at a
//! precision derived from the requested decimal digits plus guard bits.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::qfield::QuadRat;

/// Evaluation context: precision, rounding mode and cached constants.
pub struct DecCtx {
    prec: usize,
    rm: RoundingMode,
    cc: Consts,
}

impl DecCtx {
    /// Context carrying at least `digits` significant decimal digits.
    pub fn with_digits(digits: usize) -> Self {
        // log2(10) < 3.322; pad with guard bits for chained operations.
        let prec = digits * 10 / 3 + 96;
        DecCtx { prec, rm: RoundingMode::ToEven, cc: Consts::new().expect("constants cache") }
    }

    pub fn prec_bits(&self) -> usize {
        self.prec
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.prec)
    }

    pub fn from_bigint(&mut self, n: &BigInt) -> BigFloat {
        BigFloat::parse(&n.to_string(), Radix::Dec, self.prec, self.rm, &mut self.cc)
    }

    pub fn from_rational(&mut self, r: &BigRational) -> BigFloat {
        let numer = self.from_bigint(r.numer());
        let denom = self.from_bigint(r.denom());
        numer.div(&denom, self.prec, self.rm)
    }

    pub fn from_quadrat(&mut self, x: &QuadRat) -> BigFloat {
        let p = self.from_rational(&x.p);
        let q = self.from_rational(&x.q);
        let sqrt2 = self.int(2).sqrt(self.prec, self.rm);
        p.add(&q.mul(&sqrt2, self.prec, self.rm), self.prec, self.rm)
    }

    pub fn parse(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, self.prec, self.rm, &mut self.cc)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, self.rm)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, self.rm)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, self.rm)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, self.rm)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.prec, self.rm, &mut self.cc)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.prec, self.rm, &mut self.cc)
    }

    pub fn pow(&mut self, base: &BigFloat, exponent: &BigFloat) -> BigFloat {
        base.pow(exponent, self.prec, self.rm, &mut self.cc)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, self.rm)
    }

    pub fn floor_to_bigint(&mut self, a: &BigFloat) -> BigInt {
        // Render with explicit radix point and truncate toward -infinity.
        let f = a.floor();
        let s = f.format(Radix::Dec, self.rm, &mut self.cc).expect("finite value");
        parse_decimal_to_bigint_floor(&s)
    }

    /// Renders `x` with `sig` significant decimal digits; plain notation for
    /// moderate exponents, scientific otherwise. Display-only.
    pub fn format_sig(&mut self, x: &BigFloat, sig: usize) -> String {
        format_sig_impl(x, sig, self.rm, &mut self.cc)
    }
}

/// Best-effort `f64` view of a big float (display and coarse thresholds only).
pub fn to_f64(x: &BigFloat) -> f64 {
    let mut cc = Consts::new().expect("constants cache");
    let s = x
        .format(Radix::Dec, RoundingMode::ToEven, &mut cc)
        .unwrap_or_else(|_| "nan".into());
    s.parse::<f64>().unwrap_or(f64::NAN)
}

fn parse_decimal_to_bigint_floor(s: &str) -> BigInt {
    // Input looks like "-1.2345e+4"; shift the point per the exponent and
    // floor toward -infinity.
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().expect("exponent")),
        None => (s, 0),
    };
    let neg = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    let point = int_part.len() as i64 + exp; // digits before the point
    let (whole, frac): (String, String) = if point <= 0 {
        (String::new(), format!("{}{}", "0".repeat(-point as usize), digits))
    } else if (point as usize) >= digits.len() {
        (format!("{}{}", digits, "0".repeat(point as usize - digits.len())), String::new())
    } else {
        let (w, f) = digits.split_at(point as usize);
        (w.to_string(), f.to_string())
    };
    let mut value: BigInt = if whole.is_empty() {
        BigInt::from(0)
    } else {
        whole.parse().expect("integer digits")
    };
    let has_frac = frac.bytes().any(|b| b != b'0');
    if neg {
        value = -value;
        if has_frac {
            value -= 1;
        }
    }
    value
}

fn format_sig_impl(x: &BigFloat, sig: usize, rm: RoundingMode, cc: &mut Consts) -> String {
    assert!(sig >= 1);
    if x.is_zero() {
        return "0".into();
    }
    let s = match x.format(Radix::Dec, rm, cc) {
        Ok(s) => s,
        Err(_) => return "nan".into(),
    };
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let neg = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches(['-', '+']);
    let mut digits: Vec<u8> = mantissa.bytes().filter(|b| b.is_ascii_digit()).collect();
    // Normalized astro output has one leading digit before the point.
    let mut exp10 = exp;
    // Strip leading zeros (subnormal-looking strings), adjusting the exponent.
    while digits.len() > 1 && digits[0] == b'0' {
        digits.remove(0);
        exp10 -= 1;
    }
    if digits.len() > sig {
        let round_up = digits[sig] >= b'5';
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, b'1');
                    exp10 += 1;
                    digits.truncate(sig);
                    break;
                }
                i -= 1;
                if digits[i] == b'9' {
                    digits[i] = b'0';
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    while digits.len() > 1 && *digits.last().unwrap() == b'0' {
        digits.pop();
    }
    let digit_str = String::from_utf8(digits).unwrap();
    let sign = if neg { "-" } else { "" };
    if (-4..21).contains(&exp10) {
        if exp10 >= 0 {
            let point = exp10 as usize + 1;
            if point >= digit_str.len() {
                format!("{sign}{}{}", digit_str, "0".repeat(point - digit_str.len()))
            } else {
                format!("{sign}{}.{}", &digit_str[..point], &digit_str[point..])
            }
        } else {
            format!("{sign}0.{}{}", "0".repeat((-exp10 - 1) as usize), digit_str)
        }
    } else if digit_str.len() == 1 {
        format!("{sign}{digit_str}e{exp10}")
    } else {
        format!("{sign}{}.{}e{exp10}", &digit_str[..1], &digit_str[1..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrat_conversion_matches_decimal_rendering() {
        let mut ctx = DecCtx::with_digits(60);
        let lambda = QuadRat::from_ints(17, 12);
        let x = ctx.from_quadrat(&lambda);
        let shown = ctx.format_sig(&x, 12);
        assert_eq!(shown, "33.9705627485");
    }

    #[test]
    fn format_sig_cases() {
        let mut ctx = DecCtx::with_digits(40);
        let x = ctx.parse("123456.789");
        assert_eq!(ctx.format_sig(&x, 4), "123500");
        assert_eq!(ctx.format_sig(&x, 9), "123456.789");
        let tiny = ctx.parse("-1.25e-7");
        assert_eq!(ctx.format_sig(&tiny, 3), "-1.25e-7");
        let zero = ctx.parse("0");
        assert_eq!(ctx.format_sig(&zero, 5), "0");
        let carry = ctx.parse("9.99999");
        assert_eq!(ctx.format_sig(&carry, 3), "10");
    }

    #[test]
    fn floor_to_bigint_handles_negatives() {
        let mut ctx = DecCtx::with_digits(40);
        let x = ctx.parse("-2.5");
        assert_eq!(ctx.floor_to_bigint(&x), BigInt::from(-3));
        let y = ctx.parse("7.999");
        assert_eq!(ctx.floor_to_bigint(&y), BigInt::from(7));
        let z = ctx.parse("1234");
        assert_eq!(ctx.floor_to_bigint(&z), BigInt::from(1234));
    }

    #[test]
    fn ln_agrees_with_known_value() {
        let mut ctx = DecCtx::with_digits(50);
        let two = ctx.int(2);
        let ln2 = ctx.ln(&two);
        let shown = ctx.format_sig(&ln2, 20);
        assert_eq!(shown, "0.69314718055994530942");
    }
}
