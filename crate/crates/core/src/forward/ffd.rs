//! `.ffd` far-field data files.
//!
//! ```text
//! ffd 1
//! # comment
//! lambda 2
//! mu 1
//! omega 1
//! m 64
//! noise_level 0.001
//! seed 7
//! <2m rows of 4m fields: re im re im ...>
//! ```

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{FarFieldOperatorMatrix, NoiseInfo};
use crate::elastic::ElasticMedium;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: &str = "ffd 1";

/// Serialize a far-field matrix to the text format.
pub fn to_string(f: &FarFieldOperatorMatrix) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_VERSION);
    out.push('\n');
    let med = &f.medium;
    let _ = writeln!(out, "lambda {:.16e}", med.lambda);
    let _ = writeln!(out, "mu {:.16e}", med.mu);
    let _ = writeln!(out, "omega {:.16e}", med.omega);
    let _ = writeln!(out, "m {}", f.m);
    if let Some(noise) = f.noise {
        let _ = writeln!(out, "noise_level {:.16e}", noise.level);
        let _ = writeln!(out, "seed {}", noise.seed);
    }
    let dim = f.matrix.nrows();
    for r in 0..dim {
        for c in 0..dim {
            let z = f.matrix[(r, c)];
            if c > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{:.16e} {:.16e}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

pub fn write(f: &FarFieldOperatorMatrix, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(to_string(f).as_bytes())?;
    Ok(())
}

pub fn read(path: &Path) -> Result<FarFieldOperatorMatrix> {
    parse(&std::fs::read_to_string(path)?)
}

fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok.parse().map_err(|_| format_err(line, format!("invalid number '{tok}'")))?;
    if !v.is_finite() {
        return Err(format_err(line, format!("non-finite value '{tok}'")));
    }
    Ok(v)
}

pub fn parse(text: &str) -> Result<FarFieldOperatorMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#') && !l.is_empty());

    let (ln, first) = lines.next().ok_or_else(|| format_err(1, "empty file"))?;
    if first != FORMAT_VERSION {
        return Err(format_err(ln, format!("unsupported version line '{first}'")));
    }

    let mut lambda = None;
    let mut mu = None;
    let mut omega = None;
    let mut m: Option<usize> = None;
    let mut level = None;
    let mut seed = None;
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for (ln, line) in lines {
        let first_tok = line.split_whitespace().next().unwrap_or("");
        if rows.is_empty() && first_tok.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            let mut it = line.split_whitespace();
            let key = it.next().unwrap_or("");
            let value = it.next().ok_or_else(|| format_err(ln, format!("missing value for '{key}'")))?;
            if it.next().is_some() {
                return Err(format_err(ln, format!("trailing fields after '{key}'")));
            }
            match key {
                "lambda" => lambda = Some(parse_f64(value, ln)?),
                "mu" => mu = Some(parse_f64(value, ln)?),
                "omega" => omega = Some(parse_f64(value, ln)?),
                "m" => m = Some(value.parse().map_err(|_| format_err(ln, format!("invalid m '{value}'")))?),
                "noise_level" => level = Some(parse_f64(value, ln)?),
                "seed" => seed = Some(value.parse().map_err(|_| format_err(ln, format!("invalid seed '{value}'")))?),
                other => return Err(format_err(ln, format!("unknown header key '{other}'"))),
            }
        } else {
            rows.push((ln, line));
        }
    }

    let missing = |k: &str| format_err(0, format!("missing header key '{k}'"));
    let medium = ElasticMedium::new(
        lambda.ok_or_else(|| missing("lambda"))?,
        mu.ok_or_else(|| missing("mu"))?,
        omega.ok_or_else(|| missing("omega"))?,
    )?;
    let m = m.ok_or_else(|| missing("m"))?;
    if m < 2 || m % 2 != 0 {
        return Err(format_err(0, format!("m must be even and >= 2, got {m}")));
    }
    let noise = match (level, seed) {
        (Some(level), Some(seed)) => Some(NoiseInfo { level, seed }),
        (None, None) => None,
        _ => return Err(format_err(0, "noise_level and seed must appear together")),
    };

    let dim = 2 * m;
    if rows.len() != dim {
        return Err(format_err(
            rows.last().map_or(0, |r| r.0),
            format!("expected {dim} matrix rows, found {}", rows.len()),
        ));
    }
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for (r, (ln, line)) in rows.iter().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 * dim {
            return Err(format_err(*ln, format!("expected {} fields, found {}", 2 * dim, fields.len())));
        }
        for c in 0..dim {
            matrix[(r, c)] = Complex64::new(parse_f64(fields[2 * c], *ln)?, parse_f64(fields[2 * c + 1], *ln)?);
        }
    }
    FarFieldOperatorMatrix::new(matrix, medium, noise)
}
