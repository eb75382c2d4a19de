//! `a+bi` literals for complex command-line values.

use ellr_core::Cx;

fn real(text: &str, literal: &str) -> Result<f64, String> {
    text.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("invalid complex number '{literal}' (expected a+bi)"))
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (with `i` or `j`, optional exponents).
pub fn parse_complex(literal: &str) -> Result<Cx, String> {
    let text: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = text.strip_suffix(['i', 'j']) else {
        return Ok(Cx::new(real(&text, literal)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => real(other, literal)?,
    };
    let re = if re.is_empty() { 0.0 } else { real(re, literal)? };
    Ok(Cx::new(re, im))
}

/// Shortest round-trip form of `z` in `a+bi` notation.
pub fn format_complex(z: Cx) -> String {
    if z.im.is_sign_negative() {
        format!("{:?}-{:?}i", z.re, -z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}

/// `lo,hi` pairs for ranges.
pub fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let parts: Vec<_> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [lo, hi] => {
            let lo = lo.parse::<f64>().map_err(|_| format!("invalid range '{text}' (expected lo,hi)"))?;
            let hi = hi.parse::<f64>().map_err(|_| format!("invalid range '{text}' (expected lo,hi)"))?;
            Ok((lo, hi))
        }
        _ => Err(format!("invalid range '{text}' (expected lo,hi)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn literal_forms() {
        assert_eq!(parse_complex("0.6+0.2i").unwrap(), Cx::new(0.6, 0.2));
        assert_eq!(parse_complex("0.37-0.11i").unwrap(), Cx::new(0.37, -0.11));
        assert_eq!(parse_complex("1").unwrap(), Cx::new(1.0, 0.0));
        assert_eq!(parse_complex("-2.5i").unwrap(), Cx::new(0.0, -2.5));
        assert_eq!(parse_complex("i").unwrap(), Cx::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Cx::new(0.0, -1.0));
        assert_eq!(parse_complex("3-i").unwrap(), Cx::new(3.0, -1.0));
        assert_eq!(parse_complex("1e-3+2E+1j").unwrap(), Cx::new(1e-3, 20.0));
        assert_eq!(parse_complex(" 0.5 + 0.5i ").unwrap(), Cx::new(0.5, 0.5));
    }

    #[test]
    fn malformed_literals() {
        for bad in ["", "abc", "1+2", "1+2k", "1++2i", "nan", "inf+1i", "0.5,0.1"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0.05, 0.5").unwrap(), (0.05, 0.5));
        assert!(parse_range("0.05").is_err());
        assert!(parse_range("a,b").is_err());
    }

    proptest! {
        #[test]
        fn format_round_trips(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let z = Cx::new(re, im);
            prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
