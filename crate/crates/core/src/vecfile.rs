//! Plain-text complex vector format: one `re im` pair per line, decimal
//! floating point, `#` starts a comment line. Blank lines are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::Complex;

pub fn parse(text: &str) -> Result<Vec<Complex>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut next = |what: &str| -> Result<f64> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("missing {what} part"),
            })?;
            tok.parse::<f64>().map_err(|e| Error::Parse {
                line: i + 1,
                message: format!("bad {what} part `{tok}`: {e}"),
            })
        };
        let re = next("real")?;
        let im = next("imaginary")?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: i + 1,
                message: "more than two fields".into(),
            });
        }
        out.push(Complex::new(re, im));
    }
    Ok(out)
}

/// Shortest round-trip decimal representation of each part.
pub fn format(samples: &[Complex]) -> String {
    let mut s = String::with_capacity(samples.len() * 24);
    for z in samples {
        let _ = writeln!(s, "{:?} {:?}", z.re, z.im);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_samples() {
        let v = parse("# impulse\n1 0\n0.5 -2e-3\n\n  -0 1\n").unwrap();
        assert_eq!(
            v,
            vec![Complex::new(1.0, 0.0), Complex::new(0.5, -2e-3), Complex::new(-0.0, 1.0)]
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(parse("1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("1 0\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("1 2 3\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn format_round_trips_exactly() {
        let v = vec![Complex::new(0.1, -1.0 / 3.0), Complex::new(1e-300, 12345.678)];
        assert_eq!(parse(&format(&v)).unwrap(), v);
        assert_eq!(format(&[Complex::new(1.0, 0.0)]), "1.0 0.0\n");
    }
}
