//! Deterministic text output: the float formatter every table shares, the
//! grid-step argument parser, and a small CSV writer.

use std::fs::File;
use std::io::{BufWriter, Result, Write};
use std::path::Path;

/// Formats a float as its shortest round-trip decimal, capped at 12
/// significant digits.
///
/// The cap keeps output byte-stable across runs and platforms without
/// losing anything a downstream comparison could see, while short exact
/// values keep their natural form ("0.5" stays "0.5", grid times like
/// "0.001953125" are untouched).
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        // Collapse -0.0; a signed zero in a table is just noise.
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let shortest = x.to_string();
    if significant_digits(&shortest) <= 12 {
        return shortest;
    }
    // Round to 12 significant digits in decimal, then print the shortest
    // form of the rounded value.  That form never needs more digits than
    // the 12-digit literal it round-trips through.
    let rounded: f64 = format!("{:.11e}", x).parse().expect("formatted float parses");
    rounded.to_string()
}

fn significant_digits(s: &str) -> usize {
    s.bytes()
        .take_while(|&b| b != b'e' && b != b'E')
        .filter(u8::is_ascii_digit)
        .skip_while(|&b| b == b'0')
        .count()
}

/// Parses a grid step given either as a plain number or as a ratio like
/// `1/512`.
pub fn parse_step(s: &str) -> std::result::Result<f64, String> {
    let value = if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse numerator {:?}", num.trim()))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse denominator {:?}", den.trim()))?;
        n / d
    } else {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {:?} as a number", s))?
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(format!("step must be positive and finite, got {}", s))
    }
}

/// Writes a header plus pre-joined rows with plain `\n` line endings, so
/// two runs with the same rows produce the same bytes on any platform.
pub fn write_csv<P: AsRef<Path>>(path: P, header: &str, rows: &[String]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", header)?;
    for row in rows {
        writeln!(out, "{}", row)?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_values_keep_their_exact_form() {
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(-0.0), "0");
        assert_eq!(fmt_float(0.5), "0.5");
        assert_eq!(fmt_float(-0.25), "-0.25");
        assert_eq!(fmt_float(8.0), "8");
        assert_eq!(fmt_float(1.0 / 512.0), "0.001953125");
    }

    #[test]
    fn long_values_are_capped_at_twelve_digits() {
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_float(-2.0 / 3.0), "-0.666666666667");
    }

    #[test]
    fn formatting_round_trips_to_twelve_digit_accuracy() {
        for &x in &[0.2689414213699951, 1.5081793566822645, 1e-13, 123456.789012345] {
            let back: f64 = fmt_float(x).parse().unwrap();
            assert!(
                ((back - x) / x).abs() < 1e-11,
                "{} formatted as {} moved too far",
                x,
                fmt_float(x)
            );
        }
    }

    #[test]
    fn step_parser_accepts_ratios_and_numbers() {
        assert_eq!(parse_step("1/512").unwrap(), 1.0 / 512.0);
        assert_eq!(parse_step(" 1 / 128 ").unwrap(), 1.0 / 128.0);
        assert_eq!(parse_step("0.25").unwrap(), 0.25);
        assert!(parse_step("0").is_err());
        assert!(parse_step("-1/512").is_err());
        assert!(parse_step("1/0").is_err());
        assert!(parse_step("abc").is_err());
    }
}
