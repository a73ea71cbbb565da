//! Exact probabilities and rational parsing helpers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

/// Exact probability. Denominators stay small (powers of two times mixture
/// denominators), so a fixed-width ratio is enough and avoids allocation in
/// the enumeration engines.
pub type Prob = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {input:?}: {reason}")]
pub struct ParseRatioError {
    pub input: String,
    pub reason: &'static str,
}

/// Parses `num/den` or a bare integer.
pub fn parse_prob(s: &str) -> Result<Prob, ParseRatioError> {
    let err = |reason| ParseRatioError {
        input: s.to_string(),
        reason,
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = i128::from_str(num).map_err(|_| err("bad numerator"))?;
    let den = i128::from_str(den).map_err(|_| err("bad denominator"))?;
    if den == 0 {
        return Err(err("zero denominator"));
    }
    Ok(Prob::new(num, den))
}

/// Formats a probability as `num/den`, keeping bare integers short.
pub fn format_prob(p: &Prob) -> String {
    p.to_string()
}

pub fn to_big(p: &Prob) -> BigRational {
    BigRational::new(BigInt::from(*p.numer()), BigInt::from(*p.denom()))
}

pub fn half() -> Prob {
    Prob::new(1, 2)
}

/// `2^-k` as an exact probability.
pub fn pow_half(k: u32) -> Prob {
    Prob::new(1, 1i128 << k)
}

pub fn is_probability(p: &Prob) -> bool {
    *p >= Prob::zero() && *p <= Prob::one()
}

/// Wrapper that prints a probability in `num/den` form.
pub struct Display<'a>(pub &'a Prob);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_prob("1/3").unwrap(), Prob::new(1, 3));
        assert_eq!(parse_prob(" 2/4 ").unwrap(), Prob::new(1, 2));
        assert_eq!(parse_prob("1").unwrap(), Prob::one());
        assert!(parse_prob("1/0").is_err());
        assert!(parse_prob("x/2").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for p in [Prob::new(3, 4), Prob::zero(), Prob::new(5, 16)] {
            assert_eq!(parse_prob(&format_prob(&p)).unwrap(), p);
        }
    }
}
