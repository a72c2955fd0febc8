use std::fmt::Write;

use num_complex::Complex64;

use super::{EchoCodec, RadarIoError, RawRecording};

/// One complex entry per line, `a+bi` / `a-bi`, header values plain reals.
///
/// Values are written with Rust's shortest round-trip float formatting, so
/// encoding then decoding is bit-exact for every non-NaN value.
#[derive(Debug, Clone, Copy, Default)]
pub struct AsciiCodec;

impl EchoCodec for AsciiCodec {
    fn name(&self) -> &'static str {
        "ascii"
    }

    fn extension(&self) -> &'static str {
        "dat"
    }

    fn decode(&self, bytes: &[u8]) -> Result<RawRecording, RadarIoError> {
        let text = std::str::from_utf8(bytes).map_err(|_| RadarIoError::NotText)?;
        let mut header = [0.0; 4];
        let mut found = 0;
        let mut payload = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let value = parse_complex(line).ok_or_else(|| RadarIoError::MalformedEntry {
                line: idx + 1,
                text: line.chars().take(64).collect(),
            })?;
            if found < 4 {
                // Header entries are real; an explicit zero imaginary part is tolerated.
                header[found] = value.re;
                found += 1;
            } else {
                payload.push(value);
            }
        }
        if found < 4 {
            return Err(RadarIoError::TruncatedHeader { found });
        }
        Ok(RawRecording { header, payload })
    }

    fn encode(&self, header: &[f64; 4], payload: &[Complex64]) -> Vec<u8> {
        let mut s = String::with_capacity(32 * (payload.len() + 4));
        for h in header {
            let _ = writeln!(s, "{h:?}");
        }
        for z in payload {
            let sign = if z.im.is_sign_negative() { "" } else { "+" };
            let _ = writeln!(s, "{:?}{sign}{:?}i", z.re, z.im);
        }
        s.into_bytes()
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (with `i` or `j`, exponents allowed).
pub(crate) fn parse_complex(s: &str) -> Option<Complex64> {
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().ok()?, parse_imag(&body[k..])?),
        None => (0.0, parse_imag(body)?),
    };
    Some(Complex64::new(re, im))
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |re, im| Some(Complex64::new(re, im));
        assert_eq!(parse_complex("1.5"), c(1.5, 0.0));
        assert_eq!(parse_complex("1.5+2i"), c(1.5, 2.0));
        assert_eq!(parse_complex("1.5-2j"), c(1.5, -2.0));
        assert_eq!(parse_complex("-1e-3+2.5E+2i"), c(-1e-3, 250.0));
        assert_eq!(parse_complex("1e+5-2e-3i"), c(1e5, -2e-3));
        assert_eq!(parse_complex("-3i"), c(0.0, -3.0));
        assert_eq!(parse_complex("i"), c(0.0, 1.0));
        assert_eq!(parse_complex("2-i"), c(2.0, -1.0));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex("1+2+3i"), None);
        assert_eq!(parse_complex("++i"), None);
    }

    #[test]
    fn negative_zero_survives() {
        let bytes = AsciiCodec.encode(&[1.0, 1.0, 1.0, 1.0], &[Complex64::new(-0.0, -0.0)]);
        let raw = AsciiCodec.decode(&bytes).unwrap();
        assert!(raw.payload[0].re.is_sign_negative());
        assert!(raw.payload[0].im.is_sign_negative());
    }

    #[test]
    fn malformed_line_is_reported() {
        let err = AsciiCodec.decode(b"1\n2\n3\n4\n1+1i\nbogus\n").unwrap_err();
        assert_eq!(
            err,
            RadarIoError::MalformedEntry { line: 6, text: "bogus".into() }
        );
        assert_eq!(AsciiCodec.decode(&[0xff, 0xfe]).unwrap_err(), RadarIoError::NotText);
    }
}
