//! Text formats: the matrix exchange format and region CSV.
//!
//! Matrix files start with a header line `n k` followed by `n` lines of `k`
//! whitespace-separated complex literals such as `1`, `-2i`, `0.5-0.866i` or
//! `1.0e-3+2E4i`. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::numrange::ConvexRegion;

/// Parses one complex literal (`a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`).
pub fn parse_complex(token: &str) -> std::result::Result<Complex64, String> {
    let s = token.trim();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = || format!("cannot parse `{token}` as a complex number");
    let real = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let imag_coeff = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(t),
    };

    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(real(s)?, 0.0));
    };
    // split at the last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(real(&body[..k])?, imag_coeff(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag_coeff(body)?)),
    }
}

/// Formats a complex entry as `a+bi` using the shortest representation that
/// reads back to the identical `f64`.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:?}{}{:?}i", z.re, sign, z.im.abs())
}

pub fn parse_matrix_str(text: &str) -> Result<CMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `n k` header".into(),
    })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |t: &str| {
        t.parse::<usize>().map_err(|_| Error::Parse {
            line: hline,
            msg: format!("malformed header `{header}`: expected two non-negative integers"),
        })
    };
    if dims.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            msg: format!("malformed header `{header}`: expected `n k`"),
        });
    }
    let (n, k) = (parse_dim(dims[0])?, parse_dim(dims[1])?);

    let mut m = CMatrix::zeros(n, k);
    let mut last_line = hline;
    for r in 0..n {
        let (lno, line) = lines.next().ok_or(Error::Parse {
            line: last_line + 1,
            msg: format!("expected {n} rows, found {r}"),
        })?;
        last_line = lno;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != k {
            return Err(Error::Parse {
                line: lno,
                msg: format!("expected {k} entries, found {}", tokens.len()),
            });
        }
        for (c, tok) in tokens.into_iter().enumerate() {
            m[(r, c)] = parse_complex(tok).map_err(|msg| Error::Parse { line: lno, msg })?;
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(Error::Parse {
            line: lno,
            msg: format!("unexpected data after {n} rows"),
        });
    }
    Ok(m)
}

pub fn write_matrix_string(m: &CMatrix) -> String {
    let mut out = format!("{} {}\n", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format_complex(m[(r, c)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// `re,im` header then one vertex per line, counterclockwise, no repeat of
/// the first vertex.
pub fn region_to_csv(region: &ConvexRegion) -> String {
    let mut out = String::from("re,im\n");
    for z in &region.vertices {
        let _ = writeln!(out, "{:?},{:?}", z.re, z.im);
    }
    out
}

pub fn region_from_csv(text: &str) -> Result<Vec<Complex64>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "re,im" => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "expected header `re,im`".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let err = || Error::Parse {
                line: i + 1,
                msg: format!("malformed vertex `{l}`"),
            };
            let (a, b) = l.split_once(',').ok_or_else(err)?;
            Ok(Complex64::new(
                a.trim().parse().map_err(|_| err())?,
                b.trim().parse().map_err(|_| err())?,
            ))
        })
        .collect()
}
