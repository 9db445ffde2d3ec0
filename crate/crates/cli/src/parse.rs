//! Parsing of comma-separated vectors and exact decimal tolerances.

use std::fmt;

use pathcount::{Integer, Rational};

/// Input the user typed that is not a well-formed vector or number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Malformed {
    pub flag: &'static str,
    pub input: String,
    pub reason: String,
}

impl fmt::Display for Malformed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "malformed --{} '{}': {}",
            self.flag, self.input, self.reason
        )
    }
}

impl std::error::Error for Malformed {}

fn malformed(flag: &'static str, input: &str, reason: impl Into<String>) -> Malformed {
    Malformed {
        flag,
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// `"1,2,0"` to `[1, 2, 0]`. Whitespace around entries is ignored; an empty
/// string is the empty vector.
pub fn parse_vector(flag: &'static str, input: &str) -> Result<Vec<u32>, Malformed> {
    if input.trim().is_empty() {
        return Ok(Vec::new());
    }
    input
        .split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<u32>().map_err(|_| {
                malformed(
                    flag,
                    input,
                    format!("entry '{part}' is not a nonnegative integer"),
                )
            })
        })
        .collect()
}

/// Exact rational from `"1e-6"`, `"0.001"`, `"-2.5E3"` or `"1/1000"`.
pub fn parse_rational(flag: &'static str, input: &str) -> Result<Rational, Malformed> {
    let s = input.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: Integer = num
            .trim()
            .parse()
            .map_err(|_| malformed(flag, input, "numerator is not an integer"))?;
        let den: Integer = den
            .trim()
            .parse()
            .map_err(|_| malformed(flag, input, "denominator is not an integer"))?;
        if den == Integer::from(0) {
            return Err(malformed(flag, input, "zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| malformed(flag, input, "exponent is not an integer"))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let all_digits = |t: &str| t.chars().all(|ch| ch.is_ascii_digit());
    if whole.is_empty() && frac.is_empty() || !all_digits(whole) || !all_digits(frac) {
        return Err(malformed(
            flag,
            input,
            "expected a decimal, e-notation or p/q number",
        ));
    }
    let mut value: Integer = format!("{whole}{frac}").parse().expect("checked digits");
    if negative {
        value = -value;
    }
    let scale = exponent - frac.len() as i64;
    let ten = Integer::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(value * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(value, num_traits::pow(ten, (-scale) as usize))
    })
}
