//! Module specifications in TOML or JSON, polynomial entry expressions, and
//! the canonical ε dump format.
//!
//! A module file looks like
//!
//! ```toml
//! p = 3
//! N = 6
//! E = [-3, 1]
//! d = 1
//! rank = 2
//! theta = [[[0, 1], [0, 0]]]
//! phi = [[0, 0], [0, "a"]]
//! ```
//!
//! Entries are integers or strings in `u`, `z` (for `ζ_p`) and `a` (for
//! `E′(π)`) built with `+ - * ^` and parentheses.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::dp::{parse_monomial, DpPoly, Shape};
use crate::error::{Error, Result};
use crate::galois::LAMBDA_BOUND;
use crate::higgs::EnhancedHiggsModule;
use crate::matrix::Matrix;
use crate::ring::{adjoin_zeta, make_base_ring_with_guard, PrimeConfig, Ring, Scalar};
use crate::scalar::vp_factorial;
use crate::stratification::Stratification;

fn parse_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    U,
    Z,
    A,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn uses_z(&self) -> bool {
        match self {
            Expr::Z => true,
            Expr::Int(_) | Expr::U | Expr::A => false,
            Expr::Add(x, y) | Expr::Sub(x, y) | Expr::Mul(x, y) => x.uses_z() || y.uses_z(),
            Expr::Neg(x) | Expr::Pow(x, _) => x.uses_z(),
        }
    }

    pub fn eval(&self, ring: &Ring) -> Scalar {
        match self {
            Expr::Int(n) => Scalar::from_int(ring, *n),
            Expr::U => Scalar::pi(ring),
            Expr::Z => Scalar::zeta(ring),
            Expr::A => Scalar::e_prime_at_pi(ring),
            Expr::Add(x, y) => x.eval(ring) + y.eval(ring),
            Expr::Sub(x, y) => x.eval(ring) - y.eval(ring),
            Expr::Mul(x, y) => x.eval(ring) * y.eval(ring),
            Expr::Neg(x) => -x.eval(ring),
            Expr::Pow(x, k) => crate::scalar::Coefficient::pow(&x.eval(ring), *k),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str, path: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = chars[start..i].iter().collect();
            let n = t
                .parse::<i64>()
                .map_err(|_| parse_err(path, format!("integer `{t}` out of range")))?;
            out.push(Tok::Num(n));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(parse_err(path, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    path: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(k)) if (0..=u32::MAX as i64).contains(&k) => {
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), k as u32))
                }
                _ => Err(parse_err(self.path, "exponent must be a non-negative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => Ok(Expr::Int(n)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "u" | "pi" => Ok(Expr::U),
                "z" | "zeta" => Ok(Expr::Z),
                "a" => Ok(Expr::A),
                _ => Err(parse_err(self.path, format!("unknown symbol `{name}`"))),
            },
            Some(Tok::Op('(')) => {
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(parse_err(self.path, "missing `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(parse_err(self.path, format!("unexpected token {t:?}"))),
            None => Err(parse_err(self.path, "unexpected end of expression")),
        }
    }
}

/// Parses an entry expression; `path` locates it in error messages.
pub fn parse_expr(s: &str, path: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(s, path)?,
        pos: 0,
        path,
    };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(parse_err(path, format!("trailing input in `{s}`")));
    }
    Ok(e)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Int(i64),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    #[serde(default)]
    name: Option<String>,
    p: u64,
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "E")]
    e: Vec<i64>,
    d: usize,
    rank: usize,
    theta: Vec<Vec<Vec<RawEntry>>>,
    phi: Vec<Vec<RawEntry>>,
}

/// A parsed module file; entries stay symbolic until a ring is chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleSpec {
    pub name: Option<String>,
    pub cfg: PrimeConfig,
    pub d: usize,
    pub rank: usize,
    pub theta: Vec<Vec<Vec<Expr>>>,
    pub phi: Vec<Vec<Expr>>,
}

fn convert_matrix(raw: &[Vec<RawEntry>], rank: usize, path: &str) -> Result<Vec<Vec<Expr>>> {
    if raw.len() != rank {
        return Err(parse_err(path, format!("expected {rank} rows, found {}", raw.len())));
    }
    raw.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != rank {
                return Err(parse_err(
                    format!("{path}[{i}]"),
                    format!("expected {rank} entries, found {}", row.len()),
                ));
            }
            row.iter()
                .enumerate()
                .map(|(j, e)| match e {
                    RawEntry::Int(n) => Ok(Expr::Int(*n)),
                    RawEntry::Text(s) => parse_expr(s, &format!("{path}[{i}][{j}]")),
                })
                .collect()
        })
        .collect()
}

impl ModuleSpec {
    fn from_raw(raw: RawModule) -> Result<Self> {
        let cfg = PrimeConfig::new(raw.p, raw.n, raw.e).map_err(|e| parse_err("p/N/E", e.to_string()))?;
        if raw.rank == 0 {
            return Err(parse_err("rank", "rank must be positive"));
        }
        if raw.theta.len() != raw.d {
            return Err(parse_err(
                "theta",
                format!("expected d = {} matrices, found {}", raw.d, raw.theta.len()),
            ));
        }
        let theta = raw
            .theta
            .iter()
            .enumerate()
            .map(|(s, m)| convert_matrix(m, raw.rank, &format!("theta[{s}]")))
            .collect::<Result<_>>()?;
        let phi = convert_matrix(&raw.phi, raw.rank, "phi")?;
        Ok(ModuleSpec {
            name: raw.name,
            cfg,
            d: raw.d,
            rank: raw.rank,
            theta,
            phi,
        })
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let raw: RawModule = toml::from_str(s).map_err(|e| parse_err("toml", e.message().to_string()))?;
        Self::from_raw(raw)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: RawModule = serde_json::from_str(s).map_err(|e| parse_err("json", e.to_string()))?;
        Self::from_raw(raw)
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| parse_err(path.display().to_string(), e.to_string()))?;
        if path.extension().is_some_and(|x| x.eq_ignore_ascii_case("json")) {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn uses_z(&self) -> bool {
        self.phi.iter().chain(self.theta.iter().flatten()).flatten().any(Expr::uses_z)
    }

    pub fn with_precision(mut self, n: u32) -> Result<Self> {
        self.cfg = PrimeConfig::new(self.cfg.p, n, self.cfg.e_coeffs.clone())?;
        Ok(self)
    }

    /// `O_K/p^{N+extra}`, with `ζ_p` adjoined when an entry mentions `z`.
    pub fn ring(&self, extra: u32) -> Result<Ring> {
        let base = make_base_ring_with_guard(&self.cfg, extra)?;
        if self.uses_z() {
            adjoin_zeta(&base)
        } else {
            Ok(base)
        }
    }

    pub fn instantiate(&self, ring: &Ring) -> Result<EnhancedHiggsModule<Scalar>> {
        let zero = Scalar::zero(ring);
        let build = |rows: &Vec<Vec<Expr>>| {
            Matrix::from_rows(
                rows.iter().map(|r| r.iter().map(|e| e.eval(ring)).collect()).collect(),
                &zero,
            )
        };
        let theta = self.theta.iter().map(build).collect::<Result<_>>()?;
        let phi = build(&self.phi)?;
        EnhancedHiggsModule::new(Scalar::e_prime_at_pi(ring), theta, phi)
    }
}

/// Extra p-adic digits that absorb the factorial divisions of degree-`degree`
/// stratifications and of the λ-expansions.
pub fn working_digits(p: u64, degree: u32) -> u32 {
    let k = degree.max(LAMBDA_BOUND as u32) as u64 + 1;
    vp_factorial(k, p) + 2
}

/// Header lines identifying the ring of a dump.
pub fn eps_header(ring: &Ring) -> Vec<(String, String)> {
    let cfg = &ring.cfg;
    let e: Vec<String> = cfg.e_coeffs.iter().map(|c| c.to_string()).collect();
    vec![
        ("format".into(), "htcrystal-eps 1".into()),
        ("p".into(), cfg.p.to_string()),
        ("N".into(), cfg.n.to_string()),
        ("W".into(), ring.exp.to_string()),
        ("E".into(), format!("[{}]", e.join(", "))),
    ]
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn strip_brackets<'a>(s: &'a str, path: &str) -> Result<&'a str> {
    s.trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| parse_err(path, format!("expected a bracketed list, found `{s}`")))
}

fn parse_matrix_text(s: &str, ring: &Ring, rank: usize, path: &str) -> Result<Matrix<Scalar>> {
    let rows: Vec<Vec<Scalar>> = split_top_level(strip_brackets(s, path)?)
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            split_top_level(strip_brackets(row, path)?)
                .into_iter()
                .enumerate()
                .map(|(j, e)| Ok(parse_expr(e, &format!("{path}[{i}][{j}]"))?.eval(ring)))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        return Err(parse_err(path, format!("expected a {rank}x{rank} matrix")));
    }
    Matrix::from_rows(rows, &Scalar::zero(ring))
}

/// Reads a dump written by [`crate::stratification::dump_eps`] with an
/// [`eps_header`].
pub fn parse_eps(text: &str) -> Result<(Ring, Stratification<Scalar>)> {
    let mut header = std::collections::BTreeMap::new();
    let mut body = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = line.split_once(" : ") {
            body.push((lineno + 1, k.trim().to_string(), v.trim().to_string()));
        } else if let Some((k, v)) = line.split_once('=') {
            header.insert(k.trim().to_string(), v.trim().to_string());
        } else {
            return Err(parse_err(format!("line {}", lineno + 1), "expected `key = value` or `monomial : matrix`"));
        }
    }
    let get = |k: &str| header.get(k).ok_or_else(|| parse_err(k, "missing header field"));
    let num = |k: &str| -> Result<u64> {
        get(k)?.parse::<u64>().map_err(|_| parse_err(k, "expected a non-negative integer"))
    };
    let e: Vec<i64> = split_top_level(strip_brackets(get("E")?, "E")?)
        .into_iter()
        .map(|t| t.trim().parse::<i64>().map_err(|_| parse_err("E", format!("bad coefficient `{t}`"))))
        .collect::<Result<_>>()?;
    let n = num("N")? as u32;
    let w = num("W")? as u32;
    if w < n {
        return Err(parse_err("W", "working exponent below N"));
    }
    let cfg = PrimeConfig::new(num("p")?, n, e).map_err(|e| parse_err("p/N/E", e.to_string()))?;
    let base = make_base_ring_with_guard(&cfg, w - n)?;
    let ring = if body.iter().any(|(_, _, m)| m.contains('z')) { adjoin_zeta(&base)? } else { base };
    let d = num("d")? as usize;
    let rank = num("rank")? as usize;
    let degree = num("degree")? as u32;
    let a = parse_expr(get("a")?, "a")?.eval(&ring);
    let shape = Shape::arith(1, d, degree);
    let zero = Matrix::zeros(rank, rank, &Scalar::zero(&ring));
    let mut eps = DpPoly::zero(shape, &zero);
    for (lineno, mono, m) in body {
        let path = format!("line {lineno}");
        let e = parse_monomial(&shape, &mono).map_err(|err| parse_err(&path, err.to_string()))?;
        eps.insert_add(e, parse_matrix_text(&m, &ring, rank, &path)?);
    }
    Ok((ring, Stratification::from_eps(a, eps)?))
}

/// Renders a module back into the TOML schema.
pub fn module_to_toml(m: &EnhancedHiggsModule<Scalar>, cfg: &PrimeConfig, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(n) = name {
        let _ = writeln!(out, "name = {:?}", n);
    }
    let e: Vec<String> = cfg.e_coeffs.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "p = {}\nN = {}\nE = [{}]", cfg.p, cfg.n, e.join(", "));
    let _ = writeln!(out, "d = {}\nrank = {}", m.dim(), m.rank());
    let mat = |x: &Matrix<Scalar>| {
        let rows: Vec<String> = (0..x.rows())
            .map(|i| {
                let es: Vec<String> = x.row(i).iter().map(|s| format!("\"{s}\"")).collect();
                format!("[{}]", es.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    };
    let th: Vec<String> = m.theta.iter().map(mat).collect();
    let _ = writeln!(out, "theta = [{}]", th.join(", "));
    let _ = writeln!(out, "phi = {}", mat(&m.phi));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_base_ring;

    const BK1: &str = "p = 3\nN = 6\nE = [-3, 1]\nd = 1\nrank = 1\ntheta = [[[0]]]\nphi = [[\"-a\"]]\n";

    #[test]
    fn expressions() {
        let r = make_base_ring(&PrimeConfig::new(3, 6, vec![-3, 0, 1]).unwrap()).unwrap();
        let u = Scalar::pi(&r);
        let e = parse_expr("2*u^2 - (u + 1)*3 + a", "x").unwrap();
        let want = u.clone() * u.clone() * Scalar::from_int(&r, 2) - (u.clone() + Scalar::from_int(&r, 1)) * Scalar::from_int(&r, 3)
            + Scalar::e_prime_at_pi(&r);
        assert_eq!(e.eval(&r), want);
        assert!(parse_expr("2*", "x").is_err());
        assert!(parse_expr("q", "x").is_err());
        assert!(parse_expr("-z^2", "x").unwrap().uses_z());
    }

    #[test]
    fn toml_and_json_agree() {
        let t = ModuleSpec::from_toml_str(BK1).unwrap();
        let j = ModuleSpec::from_json_str(
            r#"{"p":3,"N":6,"E":[-3,1],"d":1,"rank":1,"theta":[[[0]]],"phi":[["-a"]]}"#,
        )
        .unwrap();
        assert_eq!(t, j);
        let r = t.ring(0).unwrap();
        let m = t.instantiate(&r).unwrap();
        assert_eq!(m, EnhancedHiggsModule::bk_twist_unit(1, &Scalar::e_prime_at_pi(&r), 1));
    }

    #[test]
    fn schema_errors_carry_paths() {
        let bad = BK1.replace("[[\"-a\"]]", "[[\"-a\", 1]]");
        match ModuleSpec::from_toml_str(&bad) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "phi[0]"),
            other => panic!("{other:?}"),
        }
        let bad = BK1.replace("\"-a\"", "\"-b\"");
        match ModuleSpec::from_toml_str(&bad) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "phi[0][0]"),
            other => panic!("{other:?}"),
        }
        assert!(ModuleSpec::from_toml_str(&BK1.replace("E = [-3, 1]", "E = [-2, 1]")).is_err());
    }

    #[test]
    fn module_text_roundtrip() {
        let spec = ModuleSpec::from_toml_str(BK1).unwrap();
        let r = spec.ring(0).unwrap();
        let m = spec.instantiate(&r).unwrap();
        let again = ModuleSpec::from_toml_str(&module_to_toml(&m, &spec.cfg, Some("bk"))).unwrap();
        assert_eq!(again.instantiate(&r).unwrap(), m);
    }

    #[test]
    fn eps_roundtrip() {
        let spec = ModuleSpec::from_toml_str(
            "p = 2\nN = 6\nE = [-2, 0, 1]\nd = 1\nrank = 2\ntheta = [[[0, 1], [0, 0]]]\nphi = [[0, 0], [0, \"a\"]]\n",
        )
        .unwrap();
        let r = spec.ring(working_digits(2, 4)).unwrap();
        let m = spec.instantiate(&r).unwrap();
        let s = Stratification::build(&m, 4).unwrap();
        let text = crate::stratification::dump_eps(&s, &eps_header(&r));
        let (r2, s2) = parse_eps(&text).unwrap();
        assert_eq!(r2.exp, r.exp);
        assert_eq!(s2.eps, s.eps);
        assert!(s2.check_cocycle().passed());
    }
}
