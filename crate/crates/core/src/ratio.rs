//! Exact rational scalars. Everything in this crate is computed over `Rat`;
//! no floating point appears anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fraction `n/d` as a rational.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p/q`, or plain `p` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (used by the CLI for weights and norm bounds).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
    }
}

/// Exact value of `r` as i64 if `r` is an integer in range.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    let n = r.numer();
    i64::try_from(n.clone()).ok()
}

/// Smallest nonnegative integer `n` with `n*n >= r`. Used to turn exact norm
/// bounds into finite coordinate ranges.
pub fn isqrt_ceil(r: &Rat) -> i64 {
    if r.is_negative() || r.is_zero() {
        return 0;
    }
    let mut n: i64 = 0;
    loop {
        let nn = rat(n) * rat(n);
        if nn >= *r {
            return n;
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse_round_trip() {
        for s in ["0", "5", "-3", "1/2", "-7/3"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("2/4").unwrap()), "1/2");
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn isqrt_ceil_exact() {
        assert_eq!(isqrt_ceil(&rat(0)), 0);
        assert_eq!(isqrt_ceil(&rat(1)), 1);
        assert_eq!(isqrt_ceil(&rat(2)), 2);
        assert_eq!(isqrt_ceil(&rat(4)), 2);
        assert_eq!(isqrt_ceil(&ratio(49, 4)), 4);
    }
}
