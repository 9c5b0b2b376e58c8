//! Canonical text form of dp-monomials, e.g. `X1^[2]*Y1,2`.

use super::{Shape, Var};
use crate::error::{Error, Result};

fn var_name(v: Var) -> String {
    match v {
        Var::X(j) => format!("X{j}"),
        Var::Y(s, j) => format!("Y{s},{j}"),
    }
}

pub fn format_monomial(shape: &Shape, e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, k)| **k > 0)
        .map(|(idx, &k)| {
            let name = var_name(shape.var(idx));
            if k == 1 {
                name
            } else {
                format!("{name}^[{k}]")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn parse_var(shape: &Shape, s: &str) -> Result<usize> {
    let bad = || Error::Parse {
        path: "monomial".into(),
        message: format!("unknown variable `{s}`"),
    };
    let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
    let v = if let Some(rest) = s.strip_prefix('X') {
        Var::X(num(rest)?)
    } else if let Some(rest) = s.strip_prefix('Y') {
        let (a, b) = rest.split_once(',').ok_or_else(bad)?;
        Var::Y(num(a)?, num(b)?)
    } else {
        return Err(bad());
    };
    let ok = match v {
        Var::X(j) => shape.arith && (1..=shape.n).contains(&j),
        Var::Y(s, j) => (1..=shape.d).contains(&s) && (1..=shape.n).contains(&j),
    };
    if !ok {
        return Err(bad());
    }
    Ok(shape.index(v))
}

/// Inverse of [`format_monomial`].
pub fn parse_monomial(shape: &Shape, s: &str) -> Result<Vec<u32>> {
    let mut e = vec![0u32; shape.nvars()];
    let s = s.trim();
    if s == "1" {
        return Ok(e);
    }
    for factor in s.split('*') {
        let factor = factor.trim();
        let (name, k) = match factor.split_once("^[") {
            Some((name, rest)) => {
                let k = rest
                    .strip_suffix(']')
                    .and_then(|t| t.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse {
                        path: "monomial".into(),
                        message: format!("bad exponent in `{factor}`"),
                    })?;
                (name, k)
            }
            None => (factor, 1),
        };
        e[parse_var(shape, name)?] += k;
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_parse_round_trip() {
        let shape = Shape::arith(2, 2, 6);
        for e in shape.monomials(3) {
            let s = format_monomial(&shape, &e);
            assert_eq!(parse_monomial(&shape, &s).unwrap(), e, "{s}");
        }
        assert_eq!(format_monomial(&shape, &[2, 0, 1, 0, 0, 0]), "X1^[2]*Y1,1");
        assert!(parse_monomial(&shape, "Z1").is_err());
        assert!(parse_monomial(&shape, "Y3,1").is_err());
    }
}
