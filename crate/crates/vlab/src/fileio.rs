//! Instance file formats: point lists, multisets, explicit tables, and
//! generator parameter files.
//!
//! All numeric input is parsed exactly — `p/q` fractions and decimal
//! literals both land in [`BigRational`] with no rounding.

use std::path::Path;

use num::{BigInt, BigRational, One, Zero};

use crate::error::SpaceError;
use crate::instances::explicit::ExplicitSpace;
use crate::instances::random_consistent::RandomConsistentParams;
use crate::instances::seb::PointSet;

/// Parse `p/q`, an integer, or a decimal literal into an exact rational.
pub fn parse_rational(token: &str) -> Result<BigRational, SpaceError> {
    let token = token.trim();
    let bad = |detail: &str| {
        SpaceError::InvalidInstance(format!("cannot parse {token:?} as a rational: {detail}"))
    };
    if token.is_empty() {
        return Err(bad("empty token"));
    }
    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((whole, frac)) = token.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad fractional part"));
        }
        let (sign, whole_digits) = match whole.strip_prefix('-') {
            Some(rest) => (-BigInt::one(), rest),
            None => (BigInt::one(), whole.strip_prefix('+').unwrap_or(whole)),
        };
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) || whole_digits.is_empty() {
            return Err(bad("bad integer part"));
        }
        let whole: BigInt = whole_digits.parse().map_err(|_| bad("bad integer part"))?;
        let frac_value: BigInt = frac.parse().map_err(|_| bad("bad fractional part"))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRational::new(sign * (whole * &scale + frac_value), scale));
    }
    let value: BigInt = token.parse().map_err(|_| bad("not an integer"))?;
    Ok(BigRational::from_integer(value))
}

fn read_lines(path: &Path) -> Result<Vec<String>, SpaceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpaceError::InvalidInstance(format!("cannot read {}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

/// Read a point set: one point per line, coordinates comma-separated,
/// `#` comments and blank lines ignored. Dimension is taken from the
/// first point.
pub fn read_points_csv(path: &Path) -> Result<PointSet, SpaceError> {
    let lines = read_lines(path)?;
    if lines.is_empty() {
        return Err(SpaceError::InvalidInstance(format!("{} contains no points", path.display())));
    }
    let mut points = Vec::with_capacity(lines.len());
    let mut dim = 0usize;
    for (i, line) in lines.iter().enumerate() {
        let coords: Vec<BigRational> = line
            .split(',')
            .map(parse_rational)
            .collect::<Result<_, _>>()
            .map_err(|e| SpaceError::InvalidInstance(format!("line {}: {e}", i + 1)))?;
        if i == 0 {
            dim = coords.len();
        } else if coords.len() != dim {
            return Err(SpaceError::InvalidInstance(format!(
                "line {}: expected {dim} coordinates, found {}",
                i + 1,
                coords.len()
            )));
        }
        points.push(coords);
    }
    PointSet::new(dim, points)
}

/// Serialize a point set in the same format `read_points_csv` accepts.
pub fn points_to_csv(points: &PointSet) -> String {
    let mut out = String::new();
    for i in 0..points.len() as u32 {
        let row: Vec<String> = points.point(i).iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Read a multiset: one integer per line, `#` comments and blanks ignored.
pub fn read_multiset(path: &Path) -> Result<Vec<i64>, SpaceError> {
    let lines = read_lines(path)?;
    if lines.is_empty() {
        return Err(SpaceError::InvalidInstance(format!("{} contains no values", path.display())));
    }
    lines
        .iter()
        .enumerate()
        .map(|(i, line)| {
            line.parse().map_err(|_| {
                SpaceError::InvalidInstance(format!("line {}: {line:?} is not an integer", i + 1))
            })
        })
        .collect()
}

/// Read an explicit violator table from its JSON file format.
pub fn read_explicit_json(path: &Path) -> Result<ExplicitSpace, SpaceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpaceError::InvalidInstance(format!("cannot read {}: {e}", path.display())))?;
    ExplicitSpace::from_json(&text)
}

/// Read generator parameters from JSON.
pub fn read_params_json(path: &Path) -> Result<RandomConsistentParams, SpaceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpaceError::InvalidInstance(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        SpaceError::InvalidInstance(format!("bad parameter file {}: {e}", path.display()))
    })
}

pub fn params_to_json(params: &RandomConsistentParams) -> String {
    let mut out = serde_json::to_string_pretty(params).expect("params serialize");
    out.push('\n');
    out
}

/// Render rows as CSV with a fixed header. Fields are plain tokens
/// (numbers, identifiers); no quoting is applied or needed.
pub fn format_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
