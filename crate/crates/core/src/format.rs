//! Text formats: linear systems and JSON-lines proof files.
//!
//! System files look like
//!
//! ```text
//! # the triangle
//! field 2
//! vars 3
//! 1*x1 + 1*x2 = 1
//! x2 + x3 = 1
//! ```
//!
//! Proof files start with a header object carrying the field, the encoding
//! mode and the hypothesis list, followed by one object per line in id order.

use serde::{Deserialize, Serialize};

use crate::encoder::EncodingMode;
use crate::gf::{is_prime, LinSystemFp, Row};
use crate::kernel::{AxiomKind, Justification, LineId, Proof, ProofLine};
use crate::poly::{Poly, VarId};
use crate::rational::Rational;

pub const PROOF_FORMAT: &str = "saj1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("{line}:{col}: {reason}")]
    Parse { line: usize, col: usize, reason: String },
    #[error("field size {0} is not prime")]
    NonPrimeField(u64),
    #[error("line {line}: variable x{index} outside 1..={n}")]
    IndexOutOfRange { line: usize, index: u64, n: usize },
    #[error("proof header: {0}")]
    Header(String),
    /// A malformed record for proof line `line`.
    #[error("proof line {line}: {reason}")]
    Record { line: LineId, reason: String },
}

fn perr(line: usize, col: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        col,
        reason: reason.into(),
    }
}

fn parse_header_value(raw: &str, lineno: usize, key: &str) -> Result<Option<u64>, FormatError> {
    let t = raw.trim_start();
    let Some(rest) = t.strip_prefix(key) else {
        return Ok(None);
    };
    if !rest.starts_with(char::is_whitespace) {
        return Ok(None);
    }
    let col = raw.len() - rest.trim_start().len() + 1;
    rest.trim()
        .parse::<u64>()
        .map(Some)
        .map_err(|_| perr(lineno, col, format!("expected a number after `{key}`")))
}

/// Parses one side of `c*xi + … = b`, reporting columns relative to `raw`.
fn parse_equation(raw: &str, lineno: usize, p: u64, n: usize) -> Result<Row, FormatError> {
    // Every slice passed in points into `raw`.
    let col_of = |s: &str| s.as_ptr() as usize - raw.as_ptr() as usize + 1;
    let (lhs, rhs) = raw
        .split_once('=')
        .ok_or_else(|| perr(lineno, 1, "expected `=`"))?;
    let rhs_t = rhs.trim();
    let b: u64 = rhs_t
        .parse()
        .map_err(|_| perr(lineno, col_of(rhs.trim_start()), "right-hand side must be a non-negative integer"))?;
    let mut a = vec![0u64; n];
    let mut rest = lhs;
    loop {
        let piece_end = rest.find('+').unwrap_or(rest.len());
        let piece = &rest[..piece_end];
        let term = piece.trim();
        let col = col_of(piece.trim_start());
        if term.is_empty() {
            return Err(perr(lineno, col, "empty term"));
        }
        let (coef, var) = match term.split_once('*') {
            Some((c, v)) => {
                let c = c.trim();
                let c: u64 = c.parse().map_err(|_| perr(lineno, col, format!("bad coefficient `{c}`")))?;
                (c, Some(v.trim()))
            }
            None if term.starts_with('x') => (1, Some(term)),
            None => {
                let c: u64 = term.parse().map_err(|_| perr(lineno, col, format!("bad term `{term}`")))?;
                if c != 0 {
                    return Err(perr(lineno, col, "constant terms belong on the right-hand side"));
                }
                (0, None)
            }
        };
        if let Some(v) = var {
            let idx: u64 = v
                .strip_prefix('x')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| perr(lineno, col, format!("bad variable `{v}`")))?;
            if idx == 0 || idx > n as u64 {
                return Err(FormatError::IndexOutOfRange {
                    line: lineno,
                    index: idx,
                    n,
                });
            }
            let slot = &mut a[idx as usize - 1];
            *slot = (*slot + coef % p) % p;
        }
        if piece_end == rest.len() {
            break;
        }
        rest = &rest[piece_end + 1..];
    }
    Ok(Row { a, b: b % p })
}

/// Parses the system text format. Line and column numbers are 1-based.
pub fn parse_system(text: &str) -> Result<LinSystemFp, FormatError> {
    let mut p: Option<u64> = None;
    let mut n: Option<usize> = None;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(v) = parse_header_value(raw, lineno, "field")? {
            if p.is_some() {
                return Err(perr(lineno, 1, "duplicate `field` line"));
            }
            if !is_prime(v) {
                return Err(FormatError::NonPrimeField(v));
            }
            p = Some(v);
            continue;
        }
        if let Some(v) = parse_header_value(raw, lineno, "vars")? {
            if p.is_none() {
                return Err(perr(lineno, 1, "`vars` must follow `field`"));
            }
            if n.is_some() {
                return Err(perr(lineno, 1, "duplicate `vars` line"));
            }
            n = Some(v as usize);
            continue;
        }
        let (Some(p), Some(n)) = (p, n) else {
            return Err(perr(lineno, 1, "equations must follow the `field` and `vars` lines"));
        };
        rows.push(parse_equation(raw, lineno, p, n)?);
    }
    let p = p.ok_or_else(|| perr(1, 1, "missing `field` line"))?;
    let n = n.ok_or_else(|| perr(1, 1, "missing `vars` line"))?;
    LinSystemFp::new(p, n, rows).map_err(|e| perr(1, 1, e.to_string()))
}

/// Canonical text: explicit coefficients, zero terms omitted, `0 = b` for an
/// empty row.
pub fn emit_system(sys: &LinSystemFp) -> String {
    let mut out = format!("field {}\nvars {}\n", sys.p(), sys.n());
    for row in sys.rows() {
        let terms: Vec<String> = row
            .a
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| format!("{c}*x{}", i + 1))
            .collect();
        let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        out.push_str(&format!("{lhs} = {}\n", row.b));
    }
    out
}

/// A proof together with the field and encoding it was produced for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofFile {
    pub field: u64,
    pub mode: EncodingMode,
    pub proof: Proof,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format: String,
    field: u64,
    mode: String,
    hypotheses: Vec<String>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Record {
    id: usize,
    kind: String,
    poly: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    axiom: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    var: Option<String>,
}

fn record_of(line: &ProofLine) -> Record {
    let mut r = Record {
        id: line.id,
        poly: line.poly.to_string(),
        ..Default::default()
    };
    match &line.just {
        Justification::Axiom { kind, var } => {
            r.kind = "axiom".into();
            r.axiom = Some(kind.tag().into());
            r.var = Some(var.name());
        }
        Justification::Hypothesis(i) => {
            r.kind = "hyp".into();
            r.index = Some(*i);
        }
        Justification::LinComb { p1, a, p2, b } => {
            r.kind = "lincomb".into();
            r.p1 = Some(*p1);
            r.a = Some(a.to_string());
            r.p2 = Some(*p2);
            r.b = Some(b.to_string());
        }
        Justification::MultVar { p1, var } | Justification::MultCompl { p1, var } => {
            r.kind = if matches!(line.just, Justification::MultVar { .. }) {
                "mult_var".into()
            } else {
                "mult_compl".into()
            };
            r.p1 = Some(*p1);
            r.var = Some(var.name());
        }
    }
    r
}

pub fn emit_proof(file: &ProofFile) -> String {
    let header = Header {
        format: PROOF_FORMAT.into(),
        field: file.field,
        mode: file.mode.tag().into(),
        hypotheses: file.proof.hypotheses.iter().map(Poly::to_string).collect(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for line in &file.proof.lines {
        out.push_str(&serde_json::to_string(&record_of(line)).expect("record serializes"));
        out.push('\n');
    }
    out
}

fn line_of(r: Record) -> Result<ProofLine, FormatError> {
    let id = r.id;
    let bad = |reason: String| FormatError::Record { line: id, reason };
    let need = |field: &str, v: Option<usize>| v.ok_or_else(|| bad(format!("missing `{field}`")));
    let var = |v: &Option<String>| -> Result<VarId, FormatError> {
        v.as_deref()
            .ok_or_else(|| bad("missing `var`".into()))?
            .parse()
            .map_err(|e| bad(format!("{e}")))
    };
    let scalar = |field: &str, v: &Option<String>| -> Result<Rational, FormatError> {
        v.as_deref()
            .ok_or_else(|| bad(format!("missing `{field}`")))?
            .parse()
            .map_err(|e| bad(format!("{e}")))
    };
    let poly: Poly = r.poly.parse().map_err(|e| bad(format!("{e}")))?;
    let just = match r.kind.as_str() {
        "axiom" => {
            let tag = r.axiom.as_deref().ok_or_else(|| bad("missing `axiom`".into()))?;
            let kind = AxiomKind::from_tag(tag).ok_or_else(|| bad(format!("unknown axiom `{tag}`")))?;
            Justification::Axiom { kind, var: var(&r.var)? }
        }
        "hyp" => Justification::Hypothesis(need("index", r.index)?),
        "lincomb" => Justification::LinComb {
            p1: need("p1", r.p1)?,
            a: scalar("a", &r.a)?,
            p2: need("p2", r.p2)?,
            b: scalar("b", &r.b)?,
        },
        "mult_var" => Justification::MultVar {
            p1: need("p1", r.p1)?,
            var: var(&r.var)?,
        },
        "mult_compl" => Justification::MultCompl {
            p1: need("p1", r.p1)?,
            var: var(&r.var)?,
        },
        other => return Err(bad(format!("unknown kind `{other}`"))),
    };
    Ok(ProofLine { id, poly, just })
}

pub fn parse_proof(text: &str) -> Result<ProofFile, FormatError> {
    let mut lines = text.lines();
    let head = lines.next().ok_or_else(|| FormatError::Header("empty file".into()))?;
    let header: Header = serde_json::from_str(head).map_err(|e| FormatError::Header(e.to_string()))?;
    if header.format != PROOF_FORMAT {
        return Err(FormatError::Header(format!("unknown format `{}`", header.format)));
    }
    let mode = EncodingMode::from_tag(&header.mode)
        .ok_or_else(|| FormatError::Header(format!("unknown mode `{}`", header.mode)))?;
    let hypotheses = header
        .hypotheses
        .iter()
        .map(|h| h.parse::<Poly>().map_err(|e| FormatError::Header(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for (pos, raw) in lines.enumerate() {
        let rec: Record = serde_json::from_str(raw).map_err(|e| FormatError::Record {
            line: pos,
            reason: e.to_string(),
        })?;
        out.push(line_of(rec)?);
    }
    Ok(ProofFile {
        field: header.field,
        mode,
        proof: Proof {
            hypotheses,
            lines: out,
            goal: None,
        },
    })
}
