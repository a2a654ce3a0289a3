//! Bracket tables: one line per pair `i <= j` with a nonzero bracket,
//!
//! ```text
//! {q1(x), q2(y)} = (3/2*q2_0)*delta^(1)(x-y) + (-3*q2_0*q4_0 + 1/2*q2_1)*delta(x-y)
//! ```
//!
//! Indices are 1-based. The coefficients are those of the stored operator
//! (see the module docs of `lpb` for the `1/ε` convention).

use serde::{Deserialize, Serialize};

use crate::diffalg::{parse_poly, render_poly, DiffPoly, LinDiffOp, MatDiffOp};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub i: usize,
    pub j: usize,
    /// Coefficient of `δ^{(k)}(x-y)` at position `k`.
    pub coeffs: Vec<DiffPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketTable {
    pub prefix: String,
    pub fields: usize,
    pub entries: Vec<TableEntry>,
}

impl BracketTable {
    /// Upper triangle of a skew operator.
    pub fn from_op(op: &MatDiffOp, prefix: &str) -> Self {
        let n = op.rows();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                let e = op.get(i, j);
                if !e.is_zero() {
                    entries.push(TableEntry {
                        i: i + 1,
                        j: j + 1,
                        coeffs: e.coeffs().to_vec(),
                    });
                }
            }
        }
        BracketTable {
            prefix: prefix.to_string(),
            fields: n,
            entries,
        }
    }

    /// Full operator, lower triangle from skewness `F^{ji} = -(F^{ij})*`.
    pub fn to_op(&self) -> Result<MatDiffOp> {
        let n = self.fields;
        let mut op = MatDiffOp::zeros(n, n);
        for e in &self.entries {
            if e.i == 0 || e.j == 0 || e.i > n || e.j > n || e.i > e.j {
                return Err(Error::Parse(format!("bad table index ({}, {})", e.i, e.j)));
            }
            let l = LinDiffOp::from_coeffs(e.coeffs.clone());
            let (i, j) = (e.i - 1, e.j - 1);
            if i != j {
                op.set(j, i, -&l.adjoint());
            }
            op.set(i, j, l);
        }
        Ok(op)
    }

    pub fn get(&self, i: usize, j: usize) -> LinDiffOp {
        self.entries
            .iter()
            .find(|e| e.i == i && e.j == j)
            .map(|e| LinDiffOp::from_coeffs(e.coeffs.clone()))
            .unwrap_or_default()
    }

    pub fn to_text(&self) -> String {
        let p = &self.prefix;
        let mut s = format!("# fields {}\n", self.fields);
        for e in &self.entries {
            let mut parts = Vec::new();
            for (k, c) in e.coeffs.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let delta = if k == 0 {
                    "delta(x-y)".to_string()
                } else {
                    format!("delta^({k})(x-y)")
                };
                parts.push(format!("({})*{delta}", render_poly(c, p)));
            }
            s.push_str(&format!(
                "{{{p}{}(x), {p}{}(y)}} = {}\n",
                e.i,
                e.j,
                parts.join(" + ")
            ));
        }
        s
    }

    pub fn parse_text(text: &str, prefix: &str) -> Result<Self> {
        let mut fields = None;
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(n) = rest.trim().strip_prefix("fields") {
                    fields = Some(n.trim().parse::<usize>().map_err(|_| {
                        Error::Parse(format!("line {}: bad field count", lineno + 1))
                    })?);
                }
                continue;
            }
            entries.push(parse_line(line, prefix).map_err(|e| match e {
                Error::Parse(m) => Error::Parse(format!("line {}: {m}", lineno + 1)),
                other => other,
            })?);
        }
        let fields = match fields {
            Some(f) => f,
            None => entries.iter().map(|e: &TableEntry| e.j).max().unwrap_or(0),
        };
        Ok(BracketTable {
            prefix: prefix.to_string(),
            fields,
            entries,
        })
    }

    /// First pair whose bracket differs, with both sides rendered.
    pub fn first_difference(&self, other: &BracketTable) -> Option<String> {
        let n = self.fields.max(other.fields);
        for i in 1..=n {
            for j in i..=n {
                let a = self.get(i, j);
                let b = other.get(i, j);
                if a != b {
                    let p = &self.prefix;
                    return Some(format!(
                        "{{{p}{i}, {p}{j}}}: {} vs {}",
                        crate::diffalg::render_op(&a, p),
                        crate::diffalg::render_op(&b, p)
                    ));
                }
            }
        }
        None
    }
}

fn parse_line(line: &str, prefix: &str) -> Result<TableEntry> {
    let bad = |m: &str| Error::Parse(format!("{m}: {line:?}"));
    let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("missing '='"))?;
    let lhs = lhs.trim();
    let inner = lhs
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| bad("left side must be {..}"))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| bad("left side needs two fields"))?;
    let idx = |s: &str, var: &str| -> Result<usize> {
        s.trim()
            .strip_prefix(prefix)
            .and_then(|s| s.strip_suffix(&format!("({var})")))
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| bad("bad field name"))
    };
    let (i, j) = (idx(a, "x")?, idx(b, "y")?);
    let mut coeffs: Vec<DiffPoly> = Vec::new();
    for term in split_top_level(rhs.trim()) {
        let term = term.trim();
        let open = term.rfind(")*delta").ok_or_else(|| bad("term must be (C)*delta..."))?;
        let c = term
            .get(1..open)
            .filter(|_| term.starts_with('('))
            .ok_or_else(|| bad("coefficient must be parenthesised"))?;
        let tail = &term[open + 1..];
        let k = if tail == "*delta(x-y)" {
            0
        } else {
            tail.strip_prefix("*delta^(")
                .and_then(|s| s.strip_suffix(")(x-y)"))
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| bad("bad delta derivative"))?
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, DiffPoly::zero());
        }
        coeffs[k] += parse_poly(c, prefix)?;
    }
    while matches!(coeffs.last(), Some(c) if c.is_zero()) {
        coeffs.pop();
    }
    Ok(TableEntry { i, j, coeffs })
}

/// Splits on `+` outside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn kdv_like() -> MatDiffOp {
        let u = DiffPoly::var(0, 0);
        MatDiffOp::from_fn(1, 1, |_, _| {
            LinDiffOp::from_coeffs(vec![
                u.total_derivative(),
                u.scale(&q(2)),
                DiffPoly::zero(),
                DiffPoly::constant(crate::rational::frac(-1, 2)),
            ])
        })
    }

    #[test]
    fn text_roundtrip() {
        let t = BracketTable::from_op(&kdv_like(), "q");
        let text = t.to_text();
        assert!(text.contains("{q1(x), q1(y)} = (-1/2)*delta^(3)(x-y) + (2*q1_0)*delta^(1)(x-y) + (q1_1)*delta(x-y)"));
        let back = BracketTable::parse_text(&text, "q").unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_op().unwrap(), kdv_like());
    }

    #[test]
    fn json_roundtrip() {
        let t = BracketTable::from_op(&kdv_like(), "q");
        let s = serde_json::to_string(&t).unwrap();
        let back: BracketTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn differences_reported() {
        let t = BracketTable::from_op(&kdv_like(), "q");
        let mut u = t.clone();
        u.entries[0].coeffs[0] = DiffPoly::zero();
        let d = t.first_difference(&u).unwrap();
        assert!(d.starts_with("{q1, q1}"), "{d}");
        assert!(t.first_difference(&t).is_none());
    }

    #[test]
    fn malformed_lines() {
        assert!(BracketTable::parse_text("{q1(x), q2(y)} (1)*delta(x-y)", "q").is_err());
        assert!(BracketTable::parse_text("{q1(x), q2(y)} = 1*delta(x-y)", "q").is_err());
        assert!(BracketTable::parse_text("{q1(x)} = (1)*delta(x-y)", "q").is_err());
    }
}
