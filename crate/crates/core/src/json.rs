//! JSON and LaTeX renderings of polynomials, root systems and invariant
//! systems.
//!
//! Terms are written in descending graded-lex order and scalars as exact
//! strings (`"3/4"`, `"1/2+1/2*sqrt5"`), so output is byte-stable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{Entry, InvariantSystem, Provenance};
use crate::groups::{GroupError, GroupType, RootSystem};
use crate::polys::{Monomial, Polynomial, MAX_VARS};
use crate::scalars::{Field, FieldKind, Scalar, ScalarError};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("unknown field {0:?}")]
    Field(String),
    #[error("field {found} does not match the expected {expected}")]
    FieldMismatch { found: FieldKind, expected: FieldKind },
    #[error("bad term: {0}")]
    Term(String),
    #[error("unknown provenance {0:?}")]
    Provenance(String),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub vars: usize,
    pub field: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GroupJson {
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u32>,
    pub field: String,
    pub ambient: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EntryJson {
    pub degree: u32,
    pub norm: String,
    pub poly: PolyJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SystemJson {
    pub group: GroupJson,
    pub entries: Vec<EntryJson>,
    pub provenance: String,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RootSystemJson {
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    pub positive_roots: Vec<Vec<String>>,
}

pub fn poly_to_json<F: Field>(p: &Polynomial<F>) -> PolyJson {
    PolyJson {
        vars: p.nvars(),
        field: F::KIND.label().to_string(),
        terms: p
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| TermJson {
                exp: m.exps(p.nvars()),
                coef: c.to_scalar().to_string(),
            })
            .collect(),
    }
}

pub fn poly_from_json<F: Field>(j: &PolyJson) -> Result<Polynomial<F>, JsonError> {
    let kind = FieldKind::from_label(&j.field).ok_or_else(|| JsonError::Field(j.field.clone()))?;
    if kind != F::KIND && !(kind == FieldKind::Rational && F::KIND == FieldKind::QuadSqrt5) {
        return Err(JsonError::FieldMismatch {
            found: kind,
            expected: F::KIND,
        });
    }
    if j.vars == 0 || j.vars > MAX_VARS {
        return Err(JsonError::Term(format!("{} variables", j.vars)));
    }
    let mut p = Polynomial::zero(j.vars);
    for t in &j.terms {
        if t.exp.len() != j.vars || t.exp.iter().any(|&e| e > u8::MAX as u32) {
            return Err(JsonError::Term(format!("exponent vector {:?}", t.exp)));
        }
        let c = F::from_scalar(&Scalar::parse(kind, &t.coef)?)?;
        p.add_term(Monomial::new(&t.exp), c);
    }
    Ok(p)
}

pub fn group_json(t: GroupType, field: FieldKind) -> GroupJson {
    GroupJson {
        type_label: match t {
            GroupType::I2(_) => "I2".into(),
            GroupType::H3 | GroupType::H4 => "H".into(),
            GroupType::F4 => "F".into(),
            other => other.label()[..1].to_string(),
        },
        rank: t.rank(),
        m: t.dihedral_m(),
        field: field.label().into(),
        ambient: t.ambient_dim(),
    }
}

pub fn group_from_json(g: &GroupJson) -> Result<(GroupType, FieldKind), JsonError> {
    let t = GroupType::parse(&g.type_label, Some(g.rank), g.m)?;
    let kind = FieldKind::from_label(&g.field).ok_or_else(|| JsonError::Field(g.field.clone()))?;
    Ok((t, kind))
}

pub fn system_to_json<F: Field>(sys: &InvariantSystem<F>, verified: bool) -> SystemJson {
    SystemJson {
        group: group_json(sys.group, F::KIND),
        entries: sys
            .entries
            .iter()
            .map(|e| EntryJson {
                degree: e.degree,
                norm: e.norm.to_scalar().to_string(),
                poly: poly_to_json(&e.poly),
            })
            .collect(),
        provenance: sys.provenance.label().into(),
        verified,
    }
}

/// Rebuild a system; the stored norms are kept as written so verification
/// can compare them with the recomputed pairings.
pub fn system_from_json<F: Field>(j: &SystemJson) -> Result<InvariantSystem<F>, JsonError> {
    let (t, kind) = group_from_json(&j.group)?;
    if kind != F::KIND {
        return Err(JsonError::FieldMismatch {
            found: kind,
            expected: F::KIND,
        });
    }
    let entries = j
        .entries
        .iter()
        .map(|e| {
            Ok(Entry {
                poly: poly_from_json(&e.poly)?,
                degree: e.degree,
                norm: F::from_scalar(&Scalar::parse(kind, &e.norm)?)?,
            })
        })
        .collect::<Result<Vec<_>, JsonError>>()?;
    let provenance = Provenance::from_label(&j.provenance).ok_or_else(|| JsonError::Provenance(j.provenance.clone()))?;
    Ok(InvariantSystem {
        group: t,
        ambient: j.group.ambient,
        entries,
        provenance,
    })
}

pub fn root_system_to_json<F: Field>(rs: &RootSystem<F>) -> RootSystemJson {
    let t = rs.group_type();
    RootSystemJson {
        type_label: t.to_string(),
        rank: t.rank(),
        positive_roots: rs
            .positive_roots()
            .iter()
            .map(|r| r.iter().map(|x| x.to_scalar().to_string()).collect())
            .collect(),
    }
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn latex_scalar(s: &Scalar) -> String {
    match s {
        Scalar::Rational(r) if r.denom() == &1.into() => r.numer().to_string(),
        Scalar::Rational(r) => {
            let sign = if r.numer() < &0.into() { "-" } else { "" };
            let num = if r.numer() < &0.into() { -r.numer().clone() } else { r.numer().clone() };
            format!("{sign}\\frac{{{num}}}{{{}}}", r.denom())
        }
        Scalar::QuadExt(q) => {
            let a = latex_scalar(&Scalar::Rational(crate::scalars::Rational(q.a.clone())));
            let b = latex_scalar(&Scalar::Rational(crate::scalars::Rational(q.b.clone())));
            if num_traits::Zero::is_zero(&q.b) {
                a
            } else if num_traits::Zero::is_zero(&q.a) {
                format!("{b}\\sqrt{{5}}")
            } else {
                format!("\\left({a} + ({b})\\sqrt{{5}}\\right)")
            }
        }
        Scalar::Float(v) => format!("{v:.12}"),
    }
}

pub fn poly_to_latex<F: Field>(p: &Polynomial<F>) -> String {
    let n = p.nvars();
    let mut out = String::new();
    for (k, (m, c)) in p.sorted_terms().into_iter().enumerate() {
        let coef = latex_scalar(&c.to_scalar());
        let (neg, body) = match coef.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, coef),
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let vars: String = (0..n)
            .filter(|&i| m.exp(i) > 0)
            .map(|i| match m.exp(i) {
                1 => format!("x_{{{}}}", i + 1),
                e => format!("x_{{{}}}^{{{e}}}", i + 1),
            })
            .collect();
        if body == "1" && !vars.is_empty() {
            out.push_str(&vars);
        } else {
            out.push_str(&body);
            out.push_str(&vars);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn system_to_latex<F: Field>(sys: &InvariantSystem<F>) -> String {
    let mut out = format!("% {} over {}, {}\n\\begin{{align*}}\n", sys.group, F::KIND, sys.provenance);
    for (i, e) in sys.entries.iter().enumerate() {
        out.push_str(&format!(
            "f_{{{}}} &= {} && \\langle f_{{{}}}, f_{{{}}} \\rangle = {} \\\\\n",
            i + 1,
            poly_to_latex(&e.poly),
            i + 1,
            i + 1,
            latex_scalar(&e.norm.to_scalar())
        ));
    }
    out.push_str("\\end{align*}\n");
    out
}
