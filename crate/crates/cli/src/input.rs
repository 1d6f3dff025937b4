//! Parsers for command-line values.

use std::str::FromStr;

use fstruct_core::classify::ClassTag;
use fstruct_core::curvature::{Axis, Grid};
use fstruct_core::flagmetric::FStructure;
use fstruct_core::phispace::root_of_unity;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Signed;

/// `1,1,0`, `-1,0,1` or a name such as `f3`; the zero structure is rejected.
pub fn structure(s: &str) -> Result<FStructure, String> {
    let f = FStructure::from_str(s).map_err(|e| e.to_string())?;
    if f.rank() == 0 {
        return Err("the zero structure is not an f-structure of interest".into());
    }
    Ok(f)
}

pub fn class(s: &str) -> Result<ClassTag, String> {
    ClassTag::from_str(s).map_err(|e| e.to_string())
}

/// A positive rational: `3`, `4/3` or a finite decimal such as `1.25`.
pub fn rational(s: &str) -> Result<Rational64, String> {
    let s = s.trim();
    let value = if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        if digits == 0 || digits > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("malformed number {s:?}"));
        }
        let negative = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| format!("malformed number {s:?}"))? };
        let frac: i64 = frac.parse().map_err(|_| format!("malformed number {s:?}"))?;
        let den = 10i64.pow(digits);
        let mag = int.abs() * den + frac;
        Rational64::new(if negative { -mag } else { mag }, den)
    } else {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: i64 = num.trim().parse().map_err(|_| format!("malformed number {s:?}"))?;
        let den: i64 = den.trim().parse().map_err(|_| format!("malformed number {s:?}"))?;
        if den == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        Rational64::new(num, den)
    };
    Ok(value)
}

/// Metric triple `λ1,λ2,λ3` of positive rationals.
pub fn metric(s: &str) -> Result<[Rational64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated entries, got {s:?}"));
    }
    let mut out = [Rational64::default(); 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        let v = rational(p)?;
        if !v.is_positive() {
            return Err(format!("metric entries must be positive, got {p:?}"));
        }
        *slot = v;
    }
    Ok(out)
}

/// One diagonal entry: `1`, `i`, `eK` (`exp(2πi/K)`), `eK*` (its conjugate)
/// or `eK^p`, each optionally negated with a leading `-`.
pub fn element_entry(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    let (negate, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let value = match body {
        "1" => Complex64::new(1.0, 0.0),
        "i" => Complex64::i(),
        _ => {
            let rest = body.strip_prefix('e').ok_or_else(|| format!("unrecognized element entry {s:?}"))?;
            let (k, power) = if let Some(k) = rest.strip_suffix('*') {
                (k, -1)
            } else if let Some((k, p)) = rest.split_once('^') {
                (k, p.parse::<i64>().map_err(|_| format!("bad exponent in {s:?}"))?)
            } else {
                (rest, 1)
            };
            let k: u32 = k.parse().map_err(|_| format!("bad root order in {s:?}"))?;
            if k == 0 {
                return Err(format!("root order must be positive in {s:?}"));
            }
            root_of_unity(k, power)
        }
    };
    Ok(if negate { -value } else { value })
}

pub fn element(s: &str) -> Result<[Complex64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three diagonal entries, got {s:?}"));
    }
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = element_entry(p)?;
    }
    Ok(out)
}

fn axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo:hi:step, got {s:?}"));
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("malformed number {p:?} in {s:?}"));
    let (lo, hi, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    if !(lo > 0.0) || !(step > 0.0) || !(hi >= lo) || !hi.is_finite() {
        return Err(format!("need 0 < lo <= hi and step > 0, got {s:?}"));
    }
    Ok(Axis::new(lo, hi, step))
}

/// `lo:hi:step` for both axes, or `lo:hi:step,lo:hi:step` for `t` then `s`.
pub fn grid(s: &str) -> Result<Grid, String> {
    match s.split_once(',') {
        Some((t, u)) => Ok(Grid::new(axis(t)?, axis(u)?)),
        None => {
            let a = axis(s)?;
            Ok(Grid::new(a, a))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(rational("4/3"), Ok(Rational64::new(4, 3)));
        assert_eq!(rational("1.25"), Ok(Rational64::new(5, 4)));
        assert_eq!(rational("7"), Ok(Rational64::new(7, 1)));
        assert!(rational("1/0").is_err());
        assert!(rational("x").is_err());
    }

    #[test]
    fn metrics() {
        assert!(metric("3,3,4").is_ok());
        assert!(metric("1,0,1").is_err());
        assert!(metric("1,1").is_err());
    }

    #[test]
    fn elements() {
        let e = element("e5,e5^-1,1").unwrap();
        assert!((e[0] * e[1] - 1.0).norm() < 1e-12);
        let e = element("e3,e3*,1").unwrap();
        assert!((e[1] - e[0].conj()).norm() < 1e-12);
        assert_eq!(element("i,-i,1").unwrap()[1], -Complex64::i());
        assert!(element("i,j,1").is_err());
    }

    #[test]
    fn structures() {
        assert!(structure("0,0,0").is_err());
        assert_eq!(structure("f1").unwrap().zeta(), [1, 1, 0]);
        assert_eq!(structure("-1,0,1").unwrap().zeta(), [-1, 0, 1]);
    }

    #[test]
    fn grids() {
        assert_eq!(grid("0.9:1.1:0.01").unwrap().t.len(), 21);
        assert!(grid("1:0.5:0.1").is_err());
        assert!(grid("0:1").is_err());
    }
}
