//! Exact payoff arithmetic.
//!
//! Payoffs are `i128` ratios so that ties between sample totals are detected
//! exactly. Text forms are `p/q`, plain integers, or finite decimals such as
//! `0.35` (read exactly as `7/20`).

use alloc::format;
use alloc::string::String;
use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{input}` as a rational: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub fn ratio(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn parse_rational(input: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError { input: input.into(), reason };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| err("bad numerator"))?;
        let d: i128 = d.trim().parse().map_err(|_| err("bad denominator"))?;
        if d == 0 {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err("no digits"));
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err("expected p/q, an integer, or a decimal"));
    }
    if frac.len() > 30 {
        return Err(err("too many decimal places"));
    }
    let mut numer: i128 = 0;
    for b in whole.bytes().chain(frac.bytes()) {
        numer = numer
            .checked_mul(10)
            .and_then(|v| v.checked_add((b - b'0') as i128))
            .ok_or_else(|| err("overflow"))?;
    }
    let denom = 10i128.pow(frac.len() as u32);
    let r = Rational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Display adapter using the `p/q` text form.
pub struct Exact<'a>(pub &'a Rational);

impl fmt::Display for Exact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Least common multiple of all denominators, so that `value * scale` is an
/// integer for every value. `None` on overflow.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<i128> {
    let mut acc: i128 = 1;
    for v in values {
        let d = *v.denom();
        let g = acc.gcd(&d);
        acc = (acc / g).checked_mul(d)?;
    }
    Some(acc)
}

/// `value * scale` as an integer; `scale` must be a multiple of the denominator.
pub fn scaled(value: &Rational, scale: i128) -> Option<i128> {
    debug_assert!((scale % value.denom()).is_zero());
    value.numer().checked_mul(scale / value.denom())
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_text_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert_eq!(parse_rational("0.35").unwrap(), ratio(7, 20));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), ratio(3, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for r in [ratio(-7, 3), int(5), ratio(1, 2), int(0)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&ratio(4, 2)), "2");
    }

    #[test]
    fn common_denominator_scales_to_integers() {
        let vals = [ratio(1, 6), ratio(3, 4), int(2)];
        let s = common_denominator(vals.iter()).unwrap();
        assert_eq!(s, 12);
        assert_eq!(scaled(&vals[0], s), Some(2));
        assert_eq!(scaled(&vals[1], s), Some(9));
    }
}
