//! Parsing of symbol and function arguments.
//!
//! Every argument may be given inline or as a path to a file holding the
//! same text. Symbols accept either the tuple syntax `[(π,1),(0,2)]` or the
//! JSON forms `{"classA": [...]}`, `{"rational": {...}}` and
//! `{"singular": {...}}`; complex numbers are `[re, im]` pairs or plain reals.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use coanalytic_core::symbols::reduce;
use coanalytic_core::{
    CircleFactor, CircleZero, CircleZeroPolynomial, CoefficientSeries, RationalSymbol,
    SingularFactorFunction, C64,
};
use serde_json::Value;

/// Inline text, or the contents of the file it names.
fn resolve(arg: &str) -> Result<String> {
    let t = arg.trim();
    if !t.starts_with(['[', '{', '(']) && Path::new(t).is_file() {
        return std::fs::read_to_string(t).with_context(|| format!("reading {t}"));
    }
    Ok(t.to_string())
}

fn json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| anyhow!("malformed JSON: {e}"))
}

/// `π`, `-π/2`, `2π/3`, `3*pi/4`, `0.25`, `1e-3`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.replace("pi", "π");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.to_string(), Some(d.to_string())),
        None => (t.clone(), None),
    };
    let value = match num.split_once('π') {
        Some((coef, rest)) => {
            if !rest.is_empty() {
                bail!("bad angle {s:?}");
            }
            let coef = coef.trim_end_matches('*');
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| anyhow!("bad angle {s:?}"))?,
            };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| anyhow!("bad angle {s:?}"))?,
    };
    match den {
        Some(d) => {
            let d: f64 = d.parse().map_err(|_| anyhow!("bad angle {s:?}"))?;
            if d == 0.0 {
                bail!("bad angle {s:?}: division by zero");
            }
            Ok(value / d)
        }
        None => Ok(value),
    }
}

/// `[(θ, m), …]`; a missing multiplicity means 1.
fn parse_tuples(text: &str) -> Result<Vec<(f64, String)>> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| anyhow!("expected a bracketed list of tuples, got {text:?}"))?;
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| anyhow!("expected '(' in {text:?}"))?;
        let close = body.find(')').ok_or_else(|| anyhow!("unclosed tuple in {text:?}"))?;
        let (theta, second) = match body[..close].split_once(',') {
            Some((t, m)) => (t, m.trim().to_string()),
            None => (&body[..close], "1".to_string()),
        };
        out.push((parse_angle(theta)?, second));
        rest = body[close + 1..].trim_start().trim_start_matches(',').trim_start();
    }
    Ok(out)
}

fn complex(v: &Value) -> Result<C64> {
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(p) if p.len() == 2 => {
            let re = p[0].as_f64().ok_or_else(|| anyhow!("bad real part {}", p[0]))?;
            let im = p[1].as_f64().ok_or_else(|| anyhow!("bad imaginary part {}", p[1]))?;
            Ok(C64::new(re, im))
        }
        other => bail!("expected a number or [re, im], got {other}"),
    }
}

fn coefficients_value(v: &Value) -> Result<CoefficientSeries> {
    let items = v
        .as_array()
        .ok_or_else(|| anyhow!("expected a coefficient array, got {v}"))?;
    Ok(CoefficientSeries::new(
        items.iter().map(complex).collect::<Result<Vec<_>>>()?,
    ))
}

/// Coefficient list `[c0, c1, …]` with real or `[re, im]` entries.
pub fn coefficients(arg: &str) -> Result<CoefficientSeries> {
    coefficients_value(&json(&resolve(arg)?)?)
}

/// `0.3`, `0.3,0.1` or `[0.3, 0.1]`.
pub fn scalar(arg: &str) -> Result<C64> {
    let t = arg.trim();
    if t.starts_with('[') {
        return complex(&json(t)?);
    }
    let parts: Vec<&str> = t.split(',').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| anyhow!("bad number {s:?}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => bail!("expected re or re,im, got {arg:?}"),
    }
}

fn class_a_value(v: &Value) -> Result<CircleZeroPolynomial> {
    let zeros: Vec<CircleZero> =
        serde_json::from_value(v.clone()).map_err(|e| anyhow!("bad classA list: {e}"))?;
    Ok(CircleZeroPolynomial::new(zeros)?)
}

fn rational_value(v: &Value) -> Result<RationalSymbol> {
    let num = v
        .get("num")
        .ok_or_else(|| anyhow!("rational symbol needs \"num\""))?;
    let den = match v.get("den") {
        Some(d) => coefficients_value(d)?,
        None => CoefficientSeries::one(),
    };
    Ok(RationalSymbol::new(coefficients_value(num)?, den)?)
}

/// A class symbol from tuple syntax or JSON; rational input is reduced to
/// its circle zeros with tolerance `tol`.
pub fn class_a(arg: &str, tol: f64) -> Result<CircleZeroPolynomial> {
    let text = resolve(arg)?;
    if !text.starts_with('{') {
        let pairs = parse_tuples(&text)?
            .into_iter()
            .map(|(t, m)| {
                m.parse::<u32>()
                    .map(|m| (t, m))
                    .map_err(|_| anyhow!("multiplicity {m:?} is not a positive integer"))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(CircleZeroPolynomial::from_pairs(&pairs)?);
    }
    let v = json(&text)?;
    if let Some(z) = v.get("classA") {
        return class_a_value(z);
    }
    if let Some(r) = v.get("rational") {
        return Ok(reduce(&rational_value(r)?, tol)?);
    }
    bail!("expected {{\"classA\": ...}} or {{\"rational\": ...}}")
}

pub fn rational(arg: &str) -> Result<RationalSymbol> {
    let v = json(&resolve(arg)?)?;
    if let Some(r) = v.get("rational") {
        return rational_value(r);
    }
    if v.is_array() {
        return Ok(RationalSymbol::polynomial(coefficients_value(&v)?)?);
    }
    rational_value(&v)
}

fn singular_value(v: &Value) -> Result<SingularFactorFunction> {
    let rational = match v.get("rational") {
        Some(r) => rational_value(r)?,
        None => RationalSymbol::one(),
    };
    let factors: Vec<CircleFactor> = match v.get("factors") {
        Some(f) => serde_json::from_value(f.clone()).map_err(|e| anyhow!("bad factors: {e}"))?,
        None => Vec::new(),
    };
    Ok(SingularFactorFunction::new(rational, factors)?)
}

/// A multiplier candidate: tuple syntax `[(θ, α), …]` for a product of
/// circle factors, a coefficient array, or any of the JSON symbol forms.
pub fn phi(arg: &str) -> Result<SingularFactorFunction> {
    let text = resolve(arg)?;
    if text.starts_with('[') && text.contains('(') {
        let pairs = parse_tuples(&text)?
            .into_iter()
            .map(|(t, a)| Ok((t, parse_angle(&a)?)))
            .collect::<Result<Vec<_>>>()?;
        return Ok(SingularFactorFunction::from_factors(&pairs)?);
    }
    let v = json(&text)?;
    if v.is_array() {
        return Ok(SingularFactorFunction::from_polynomial(&coefficients_value(&v)?)?);
    }
    if let Some(s) = v.get("singular") {
        return singular_value(s);
    }
    if let Some(z) = v.get("classA") {
        return Ok(SingularFactorFunction::from_class_a(&class_a_value(z)?));
    }
    if v.get("factors").is_some() {
        return singular_value(&v);
    }
    if let Some(r) = v.get("rational") {
        return Ok(SingularFactorFunction::new(rational_value(r)?, Vec::new())?);
    }
    bail!("unrecognized function description")
}

/// `a:b` as `a` followed by the powers of two in `(a, b)` and then `b`;
/// `a:b:s` as the arithmetic progression with step `s`.
pub fn sweep(text: &str) -> Result<Vec<usize>> {
    let parts: Vec<usize> = text
        .split(':')
        .map(|p| p.trim().parse::<usize>().map_err(|_| anyhow!("bad sweep {text:?}")))
        .collect::<Result<_>>()?;
    let out: Vec<usize> = match parts.as_slice() {
        [a, b] if a <= b => {
            let mut v = vec![*a];
            let mut p = 1usize;
            while p < *b {
                if p > *a {
                    v.push(p);
                }
                p *= 2;
            }
            if *b > *a {
                v.push(*b);
            }
            v
        }
        [a, b, s] if a <= b && *s > 0 => (*a..=*b).step_by(*s).collect(),
        _ => bail!("bad sweep {text:?}: expected a:b or a:b:step with a ≤ b"),
    };
    Ok(out)
}

/// Comma-separated list of sizes.
pub fn sizes(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| anyhow!("bad size list {text:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("π").unwrap(), PI);
        assert_eq!(parse_angle("-π/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("3*π/4").unwrap(), 0.75 * PI);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert!(parse_angle("π2").is_err());
        assert!(parse_angle("1/0").is_err());
    }

    #[test]
    fn tuple_symbols() {
        let a = class_a("[(π,1),(0,1)]", 1e-8).unwrap();
        assert_eq!(a.degree(), 2);
        assert_eq!(class_a("[]", 1e-8).unwrap().degree(), 0);
        assert_eq!(class_a("[(0, 2)]", 1e-8).unwrap().zeros()[0].mult, 2);
        assert!(class_a("[(0,x)]", 1e-8).is_err());
        assert!(class_a("[(0,1)", 1e-8).is_err());
    }

    #[test]
    fn json_symbols() {
        let a = class_a(r#"{"classA":[{"theta":0,"mult":1}]}"#, 1e-8).unwrap();
        assert_eq!(a.degree(), 1);
        // (2 − z)(1 − z) = 2 − 3z + z²
        let r = class_a(r#"{"rational":{"num":[2,-3,1],"den":[1]}}"#, 1e-8).unwrap();
        assert_eq!(r.degree(), 1);
        assert!(r.zeros()[0].theta.abs() < 1e-12);
        assert!(class_a("{\"classA\":", 1e-8).is_err());
    }

    #[test]
    fn functions() {
        let p = phi("[(π, 0.6), (0, -0.4)]").unwrap();
        assert_eq!(p.factors().len(), 2);
        let q = phi("[[1,0],[0,1]]").unwrap();
        assert!(q.is_analytic());
        let s = phi(r#"{"singular":{"factors":[{"theta":1.0,"alpha":-0.25}]}}"#).unwrap();
        assert!(!s.hinf_membership());
    }

    #[test]
    fn scalars_and_sweeps() {
        assert_eq!(scalar("0.3,0.1").unwrap(), C64::new(0.3, 0.1));
        assert_eq!(scalar("[0, 1]").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(sweep("0:16").unwrap(), vec![0, 1, 2, 4, 8, 16]);
        assert_eq!(sweep("3:10").unwrap(), vec![3, 4, 8, 10]);
        assert_eq!(sweep("0:10:5").unwrap(), vec![0, 5, 10]);
        assert!(sweep("9:1").is_err());
    }
}
