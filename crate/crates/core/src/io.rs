//! The plain-text ideal file format.
//!
//! ```text
//! field 1009
//! vars x0 x1 y0 y1 y2
//! grading 2 1,0 1,0 0,1 0,1 0,1
//! gens:
//! x0*y1 - 3*x1*y0
//! ```
//!
//! `#` starts a comment. Generators are written one per line with explicit
//! `*` and `^`; coefficients are integers read modulo the field.

use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::Ideal;
use crate::ring::{Monomial, MonomialOrder, Polynomial, Ring};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses one polynomial; `Err` carries a message without position.
pub fn parse_polynomial(ring: &Arc<Ring>, s: &str) -> std::result::Result<Polynomial, String> {
    let f = ring.field();
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut terms: Vec<(Monomial, u32)> = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let mut neg = false;
        while let Some(c) = rest.chars().next().filter(|c| *c == '+' || *c == '-') {
            neg ^= c == '-';
            rest = &rest[1..];
        }
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = &rest[..end];
        rest = &rest[end..];
        if term.is_empty() {
            return Err("dangling sign".into());
        }
        let mut coef = 1u32;
        let mut exps = vec![0u32; ring.nvars()];
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(format!("empty factor in `{term}`"));
            }
            if factor.chars().all(|c| c.is_ascii_digit()) {
                let v: u64 = factor.parse().map_err(|_| format!("bad integer `{factor}`"))?;
                coef = f.mul(coef, (v % f.p() as u64) as u32);
                continue;
            }
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| format!("bad exponent in `{factor}`"))?),
                None => (factor, 1),
            };
            let i = ring.var_index(name).ok_or_else(|| format!("unknown variable `{name}`"))?;
            exps[i] = exps[i].checked_add(e).ok_or("exponent overflow")?;
        }
        if neg {
            coef = f.neg(coef);
        }
        let m = ring.monomial(&exps).map_err(|e| e.to_string())?;
        terms.push((m, coef));
    }
    Ok(Polynomial::from_terms(ring, terms))
}

/// Serializes an ideal; parsing the output gives back the same generators.
pub fn format_ideal(ideal: &Ideal) -> String {
    let ring = ideal.ring();
    let mut out = format!("field {}\nvars {}\n", ring.field().p(), ring.vars().join(" "));
    let k = ring.grading_rank();
    let vecs: Vec<String> =
        ring.grading().iter().map(|g| g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
    out.push_str(&format!("grading {k} {}\ngens:\n", vecs.join(" ")));
    for g in ideal.gens() {
        out.push_str(&format!("{g}\n"));
    }
    out
}

/// Parses an ideal file. With `expected_prime`, other characteristics are refused.
pub fn parse_ideal(text: &str, expected_prime: Option<u32>) -> Result<Ideal> {
    let mut field = None;
    let mut vars: Option<Vec<String>> = None;
    let mut ring: Option<Arc<Ring>> = None;
    let mut gens = Vec::new();
    let mut in_gens = false;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if in_gens {
            let r = ring.as_ref().unwrap();
            let p = parse_polynomial(r, line).map_err(|m| perr(line_no, m))?;
            if !p.is_homogeneous() {
                return Err(perr(line_no, "inhomogeneous generator"));
            }
            if !p.is_zero() {
                gens.push(p);
            }
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "field" => {
                let p: u32 = rest.parse().map_err(|_| perr(line_no, format!("bad prime `{rest}`")))?;
                let pf = PrimeField::new(p).map_err(|e| perr(line_no, e.to_string()))?;
                if let Some(q) = expected_prime.filter(|&q| q != p) {
                    return Err(perr(line_no, format!("characteristic {p} differs from requested {q}")));
                }
                field = Some(pf);
            }
            "vars" => {
                if field.is_none() {
                    return Err(perr(line_no, "`vars` before `field`"));
                }
                vars = Some(rest.split_whitespace().map(String::from).collect());
            }
            "grading" => {
                let (Some(f), Some(v)) = (field, vars.as_ref()) else {
                    return Err(perr(line_no, "`grading` before `field` and `vars`"));
                };
                let mut it = rest.split_whitespace();
                let k: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(|| perr(line_no, "missing grading rank"))?;
                let vecs: Vec<Vec<i64>> = it
                    .map(|s| s.split(',').map(|x| x.parse::<i64>()).collect::<std::result::Result<Vec<_>, _>>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| perr(line_no, "bad degree vector"))?;
                if vecs.len() != v.len() || vecs.iter().any(|g| g.len() != k) {
                    return Err(perr(line_no, "inconsistent grading"));
                }
                let r = Ring::new(f, v.clone(), vecs, MonomialOrder::GRevLex).map_err(|e| perr(line_no, e.to_string()))?;
                ring = Some(r);
            }
            "gens:" => {
                if ring.is_none() {
                    return Err(perr(line_no, "`gens:` before the ring header"));
                }
                in_gens = true;
            }
            _ => return Err(perr(line_no, format!("unexpected `{key}`"))),
        }
    }
    let ring = ring.ok_or_else(|| perr(text.lines().count().max(1), "missing ring header"))?;
    if !in_gens {
        return Err(perr(text.lines().count().max(1), "missing `gens:` section"));
    }
    Ideal::new(&ring, gens)
}

/// Writes `ideal` to `path` in the file format.
pub fn export_ideal(ideal: &Ideal, path: &Path) -> Result<()> {
    std::fs::write(path, format_ideal(ideal))?;
    Ok(())
}

/// A parsed ideal file.
#[derive(Clone, Debug)]
pub struct Ingested {
    pub ideal: Ideal,
    /// The file's ideal was not saturated and was replaced by its saturation.
    pub saturated_on_ingest: bool,
}

/// Reads an ideal file and checks saturation, saturating when needed.
pub fn ingest_ideal(path: &Path, expected_prime: Option<u32>) -> Result<Ingested> {
    let text = std::fs::read_to_string(path)?;
    let ideal = parse_ideal(&text, expected_prime)?;
    let sat = ideal.saturate(None)?;
    if sat.is_subset_of(&ideal) {
        Ok(Ingested { ideal, saturated_on_ingest: false })
    } else {
        let min = crate::geometry::minimal_ideal(ideal.ring(), sat.gens().to_vec());
        Ok(Ingested { ideal: min, saturated_on_ingest: true })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = "# twisted cubic\nfield 1009\nvars x0 x1 x2 x3\ngrading 1 1 1 1 1\ngens:\n-x1^2 + x0*x2\n-x1*x2 + x0*x3\n-x2^2 + x1*x3\n";

    #[test]
    fn round_trip_is_bit_exact() {
        let i = parse_ideal(CUBIC, None).unwrap();
        let text = format_ideal(&i);
        assert_eq!(text, CUBIC.trim_start_matches("# twisted cubic\n"));
        let j = parse_ideal(&text, Some(1009)).unwrap();
        assert_eq!(format_ideal(&j), text);
        assert_eq!(i.groebner_basis(), j.groebner_basis());
    }

    #[test]
    fn bigraded_round_trip() {
        let ring = Ring::cox_p1p2(PrimeField::new(101).unwrap());
        let g = crate::ring::random_form(&ring, &crate::ring::MultiDegree::bi(2, 1), 4).unwrap();
        let i = Ideal::new(&ring, vec![g]).unwrap();
        let j = parse_ideal(&format_ideal(&i), None).unwrap();
        assert_eq!(i.gens(), j.gens());
    }

    #[test]
    fn coefficients_reduce_mod_p() {
        let ring = Ring::projective(PrimeField::new(7).unwrap(), 1);
        let p = parse_polynomial(&ring, "9*x0 - 2*3*x1 + x1").unwrap();
        assert_eq!(p.to_string(), "2*x0 + 2*x1");
        assert!(parse_polynomial(&ring, "x0 + z").is_err());
        assert!(parse_polynomial(&ring, "x0 +").is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = CUBIC.replace("-x1*x2 + x0*x3", "-x1*x2 + x0");
        assert!(matches!(parse_ideal(&bad, None), Err(Error::Parse { line: 7, .. })));
        let bad = CUBIC.replace("grading 1 1 1 1 1", "grading 1 1 1 1");
        assert!(matches!(parse_ideal(&bad, None), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_ideal(CUBIC, Some(101)), Err(Error::Parse { line: 2, .. })));
        let bad = CUBIC.replace("x0*x3", "x0*w3");
        assert!(matches!(parse_ideal(&bad, None), Err(Error::Parse { line: 7, .. })));
    }

    #[test]
    fn ingest_saturates() {
        let dir = std::env::temp_dir().join(format!("llab-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cubic.ideal");
        std::fs::write(&path, CUBIC).unwrap();
        let got = ingest_ideal(&path, Some(1009)).unwrap();
        assert!(!got.saturated_on_ingest);
        let i = got.ideal;
        let m = Ideal::irrelevant(i.ring());
        export_ideal(&i.product(&m).unwrap(), &path).unwrap();
        let got = ingest_ideal(&path, None).unwrap();
        assert!(got.saturated_on_ingest);
        assert!(got.ideal.equals(&i));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
