//! Resolving `--system` and numeric flags.

use std::path::Path;

use gls_normal::{make_system, parse_rational, DigitSystem, SystemConfig};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::CliResult;

/// A JSON config file, inline JSON, `uniform:<b>`, or a comma-separated list
/// of measures such as `1/2,1/4,1/4`.
pub fn load(source: &str) -> CliResult<DigitSystem> {
    let trimmed = source.trim();
    let sys = if Path::new(source).is_file() {
        let text = std::fs::read_to_string(source).map_err(|e| format!("cannot read {source}: {e}"))?;
        let cfg: SystemConfig = serde_json::from_str(&text).map_err(|e| format!("{source}: {e}"))?;
        DigitSystem::from_config(&cfg)?
    } else if trimmed.starts_with('{') {
        let cfg: SystemConfig = serde_json::from_str(trimmed).map_err(|e| format!("inline system: {e}"))?;
        DigitSystem::from_config(&cfg)?
    } else if let Some(b) = trimmed.strip_prefix("uniform:") {
        let b: usize = b.parse().map_err(|_| format!("bad base in {trimmed:?}"))?;
        DigitSystem::uniform(b)?
    } else if trimmed.contains(',') {
        let measures = trimmed.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
        make_system(&measures)?
    } else {
        return Err(format!("system {source:?} is not a file, inline JSON, uniform:<b> or a measure list").into());
    };
    Ok(sys)
}

/// An exact rational, or a decimal converted exactly with a warning.
pub fn parse_eps(s: &str) -> CliResult<BigRational> {
    if let Ok(r) = parse_rational(s) {
        return Ok(r);
    }
    let x: f64 = s.trim().parse().map_err(|_| format!("cannot parse epsilon {s:?}"))?;
    let r = BigRational::from_float(x).ok_or_else(|| format!("epsilon {s:?} is not finite"))?;
    eprintln!("warning: float epsilon {s} converted exactly to {r}");
    Ok(r)
}

/// `B^-k..B^-K` expanded to every power in between, in the written order.
pub fn parse_eps_range(s: &str) -> CliResult<Vec<BigRational>> {
    let bad = || format!("epsilon range {s:?} must look like 2^-8..2^-40");
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let split = |t: &str| -> CliResult<(i64, i32)> {
        let (base, exp) = t.trim().split_once('^').ok_or_else(bad)?;
        Ok((base.trim().parse().map_err(|_| bad())?, exp.trim().parse().map_err(|_| bad())?))
    };
    let (base_a, ea) = split(a)?;
    let (base_b, eb) = split(b)?;
    if base_a != base_b || base_a < 2 || ea > 0 || eb > 0 {
        return Err(bad().into());
    }
    let exps: Vec<i32> = if ea >= eb { (eb..=ea).rev().collect() } else { (ea..=eb).collect() };
    Ok(exps
        .into_iter()
        .map(|e| {
            let p = num_traits::pow(BigRational::from_integer(base_a.into()), e.unsigned_abs() as usize);
            if p.is_zero() {
                p
            } else {
                BigRational::one() / p
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_expand_in_order() {
        let r = parse_eps_range("2^-1..2^-3").unwrap();
        assert_eq!(r.iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["1/2", "1/4", "1/8"]);
        assert_eq!(parse_eps_range("2^-3..2^-2").unwrap().len(), 2);
        assert!(parse_eps_range("2^-3..3^-4").is_err());
    }

    #[test]
    fn sources() {
        assert_eq!(load("uniform:3").unwrap().len(), 3);
        assert_eq!(load("1/2,1/4,1/4").unwrap().len(), 3);
        assert!(load(r#"{"digits":[{"symbol":"a","measure":"1/3"},{"symbol":"b","measure":"2/3"}]}"#).is_ok());
        assert!(load("nonsense").is_err());
    }

    #[test]
    fn float_eps_is_exact() {
        assert_eq!(parse_eps("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_eps("1/4").unwrap(), BigRational::new(1.into(), 4.into()));
    }
}
