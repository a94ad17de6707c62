//! Exact text encoding of rationals ("num/den", plain integers when the
//! denominator is 1) shared by the order files, reports and the CLI.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::str::FromStr;

pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num =
        BigInt::from_str(num).map_err(|e| Error::invalid("rational", format!("{s:?}: {e}")))?;
    let den =
        BigInt::from_str(den).map_err(|e| Error::invalid("rational", format!("{s:?}: {e}")))?;
    if den == BigInt::from(0) {
        return Err(Error::invalid(
            "rational",
            format!("{s:?}: zero denominator"),
        ));
    }
    Ok(BigRational::new(num, den))
}
