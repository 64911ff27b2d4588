//! Complex numbers and size lists as single command-line tokens.

use ehs_core::combinatorics::MultiIndex;
use ehs_core::C64;

/// Shortest round-trip decimal form, `a+bi` / `a-bi`.
pub fn format_complex(z: C64) -> String {
    let im = if z.im.is_sign_negative() { format!("-{:e}", -z.im) } else { format!("+{:e}", z.im) };
    format!("{:e}{im}i", z.re)
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (exponents allowed, no spaces).
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let bad = || format!("invalid complex number `{s}` (expected a+bi)");
    let t = s.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that does not start an exponent or the string
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let im_of = |p: &str| -> Result<f64, String> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, im_of(&body[k..])?))
        }
        None => Ok(C64::new(0.0, im_of(body)?)),
    }
}

/// Comma-separated complex list.
pub fn parse_complex_list(s: &str) -> Result<Vec<C64>, String> {
    s.split(',').map(parse_complex).collect()
}

/// `2,1,0` as a multi-index; the empty string is the empty index.
pub fn parse_multi_index(s: &str) -> Result<MultiIndex, String> {
    if s.trim().is_empty() {
        return Ok(MultiIndex::default());
    }
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("invalid multi-index `{s}`")))
        .collect::<Result<Vec<_>, _>>()
        .map(MultiIndex)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_complex("0.3+0.1i").unwrap(), C64::new(0.3, 0.1));
        assert_eq!(parse_complex("0.3-0.1i").unwrap(), C64::new(0.3, -0.1));
        assert_eq!(parse_complex("-2").unwrap(), C64::new(-2.0, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("2.5i").unwrap(), C64::new(0.0, 2.5));
        assert_eq!(parse_complex("1e-3-2.5E+2i").unwrap(), C64::new(1e-3, -250.0));
        assert!(parse_complex("0.3 + 0.1i").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn formatting_round_trips() {
        for z in [C64::new(0.1, -0.2), C64::new(-1.0 / 3.0, 1e-300), C64::new(0.0, -0.0), C64::new(5e-324, 7.0)] {
            let back = parse_complex(&format_complex(z)).unwrap();
            assert_eq!(back.re.to_bits(), z.re.to_bits());
            assert_eq!(back.im.to_bits(), z.im.to_bits());
        }
    }

    #[test]
    fn multi_indices() {
        assert_eq!(parse_multi_index("2,1").unwrap(), MultiIndex::new(&[2, 1]));
        assert_eq!(parse_multi_index("").unwrap(), MultiIndex::default());
        assert!(parse_multi_index("2,x").is_err());
    }
}
