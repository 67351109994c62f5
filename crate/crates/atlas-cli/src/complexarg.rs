//! Locale-independent parsing of complex literals in `RE+IMi` form.

use num_complex::Complex64;

/// Parses `RE`, `IMi`, or `RE+IMi` / `RE-IMi` literals, e.g. `3`,
/// `2.64732+0.0421017i`, `-1.2e-3i`. Exponent signs do not split the
/// number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the sign separating real and imaginary parts: the last
        // '+'/'-' that is neither leading nor part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let b = bytes[i];
            if (b == b'+' || b == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let re: f64 = re_str
            .parse()
            .map_err(|e| format!("bad real part {re_str:?}: {e}"))?;
        let im: f64 = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse()
                .map_err(|e| format!("bad imaginary part {other:?}: {e}"))?,
        };
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = s.parse().map_err(|e| format!("bad real literal {s:?}: {e}"))?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Formats a complex number back into the `RE+IMi` literal form.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literal_forms() {
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(
            parse_complex("2.64732+0.0421017i").unwrap(),
            Complex64::new(2.64732, 0.0421017)
        );
        assert_eq!(
            parse_complex("2.65675-0.0389604i").unwrap(),
            Complex64::new(2.65675, -0.0389604)
        );
        assert_eq!(parse_complex("-0.5i").unwrap(), Complex64::new(0.0, -0.5));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(
            parse_complex("1e+2-3e-4i").unwrap(),
            Complex64::new(100.0, -3e-4)
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_complex("").is_err());
        assert!(parse_complex("2+3j").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1,5").is_err());
    }

    #[test]
    fn round_trips() {
        for s in ["3", "2.5+0.25i", "-1.75-2i"] {
            let z = parse_complex(s).unwrap();
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
