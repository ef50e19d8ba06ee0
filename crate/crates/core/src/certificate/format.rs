//! Text form of a certificate.
//!
//! ```text
//! VER 1
//! VAR n            then n names
//! INT k            then k column indices
//! OBJ min          then: nnz (idx val)*
//! CON m            then m lines: name sense rhs nnz (idx val)*
//! RTP infeas | RTP range L U
//! SOL s            then s lines: name nnz (idx val)*
//! DER d            then d lines: name sense rhs nnz (idx val)* { reason }
//! ```
//!
//! Senses are `G`, `L`, `E`. Reasons are `asm`, `lin t (ref mult)*`,
//! `rnd t (ref mult)*` and `uns i1 a1 i2 a2`. References index the joint
//! list of constraints followed by derivations. `L` and `U` may be `-inf`
//! and `inf`; they bound `c.x` without the objective offset.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::RowSense;
use crate::numerics::{format_rational, parse_rational, ExtendedRational, Rational};

pub type Sparse = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub sense: RowSense,
    pub rhs: Rational,
    pub coefs: Sparse,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reason {
    Asm,
    Lin(Vec<(usize, Rational)>),
    Rnd(Vec<(usize, Rational)>),
    Uns { i1: usize, a1: usize, i2: usize, a2: usize },
}

impl Reason {
    /// Every constraint index the reason refers to.
    pub fn refs(&self) -> Vec<usize> {
        match self {
            Reason::Asm => Vec::new(),
            Reason::Lin(terms) | Reason::Rnd(terms) => terms.iter().map(|(i, _)| *i).collect(),
            Reason::Uns { i1, a1, i2, a2 } => vec![*i1, *a1, *i2, *a2],
        }
    }

    pub fn refs_mut(&mut self) -> Vec<&mut usize> {
        match self {
            Reason::Asm => Vec::new(),
            Reason::Lin(terms) | Reason::Rnd(terms) => terms.iter_mut().map(|(i, _)| i).collect(),
            Reason::Uns { i1, a1, i2, a2 } => vec![i1, a1, i2, a2],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub constraint: Constraint,
    pub reason: Reason,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Relation {
    Infeasible,
    Range { lower: ExtendedRational, upper: ExtendedRational },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub var_names: Vec<String>,
    pub integers: Vec<usize>,
    pub objective: Sparse,
    pub constraints: Vec<Constraint>,
    pub relation: Relation,
    pub solutions: Vec<(String, Sparse)>,
    pub derivations: Vec<Derivation>,
}

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unexpected end of certificate")]
    Eof,
}

fn write_sparse(out: &mut String, v: &Sparse) {
    let _ = write!(out, "{}", v.len());
    for (j, a) in v {
        let _ = write!(out, " {j} {}", format_rational(a));
    }
}

fn write_constraint(out: &mut String, c: &Constraint) {
    let _ = write!(out, "{} {} {} ", c.name, c.sense.symbol_letter(), format_rational(&c.rhs));
    write_sparse(out, &c.coefs);
}

impl RowSense {
    fn symbol_letter(self) -> char {
        match self {
            RowSense::Ge => 'G',
            RowSense::Le => 'L',
            RowSense::Eq => 'E',
        }
    }

    fn from_letter(s: &str) -> Option<Self> {
        match s {
            "G" => Some(RowSense::Ge),
            "L" => Some(RowSense::Le),
            "E" => Some(RowSense::Eq),
            _ => None,
        }
    }
}

impl Certificate {
    pub fn to_text(&self) -> String {
        let mut out = String::from("VER 1\n");
        let _ = writeln!(out, "VAR {}", self.var_names.len());
        for name in &self.var_names {
            let _ = writeln!(out, "{name}");
        }
        let _ = writeln!(out, "INT {}", self.integers.len());
        if !self.integers.is_empty() {
            let list: Vec<String> = self.integers.iter().map(|j| j.to_string()).collect();
            let _ = writeln!(out, "{}", list.join(" "));
        }
        out.push_str("OBJ min\n");
        write_sparse(&mut out, &self.objective);
        out.push('\n');
        let _ = writeln!(out, "CON {}", self.constraints.len());
        for c in &self.constraints {
            write_constraint(&mut out, c);
            out.push('\n');
        }
        match &self.relation {
            Relation::Infeasible => out.push_str("RTP infeas\n"),
            Relation::Range { lower, upper } => {
                let _ = writeln!(out, "RTP range {lower} {upper}");
            }
        }
        let _ = writeln!(out, "SOL {}", self.solutions.len());
        for (name, x) in &self.solutions {
            let _ = write!(out, "{name} ");
            write_sparse(&mut out, x);
            out.push('\n');
        }
        let _ = writeln!(out, "DER {}", self.derivations.len());
        for d in &self.derivations {
            write_constraint(&mut out, &d.constraint);
            out.push_str(" { ");
            match &d.reason {
                Reason::Asm => out.push_str("asm"),
                Reason::Lin(terms) | Reason::Rnd(terms) => {
                    out.push_str(if matches!(d.reason, Reason::Lin(_)) { "lin " } else { "rnd " });
                    write_sparse(&mut out, terms);
                }
                Reason::Uns { i1, a1, i2, a2 } => {
                    let _ = write!(out, "uns {i1} {a1} {i2} {a2}");
                }
            }
            out.push_str(" }\n");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Parser::new(text).certificate()
    }
}

struct Parser<'a> {
    tokens: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let tokens = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
            .collect();
        Self { tokens, pos: 0 }
    }

    fn next(&mut self) -> Result<(usize, &'a str), FormatError> {
        let t = self.tokens.get(self.pos).copied().ok_or(FormatError::Eof)?;
        self.pos += 1;
        Ok(t)
    }

    fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError::Syntax { line, msg: msg.into() })
    }

    fn keyword(&mut self, kw: &str) -> Result<(), FormatError> {
        let (line, t) = self.next()?;
        if t != kw {
            return Self::err(line, format!("expected {kw}, found {t}"));
        }
        Ok(())
    }

    fn count(&mut self) -> Result<usize, FormatError> {
        let (line, t) = self.next()?;
        t.parse().or_else(|_| Self::err(line, format!("expected a count, found {t}")))
    }

    fn rational(&mut self) -> Result<Rational, FormatError> {
        let (line, t) = self.next()?;
        parse_rational(t).or_else(|_| Self::err(line, format!("bad number {t}")))
    }

    fn extended(&mut self) -> Result<ExtendedRational, FormatError> {
        let (line, t) = self.next()?;
        match t {
            "inf" | "+inf" => Ok(ExtendedRational::PosInf),
            "-inf" => Ok(ExtendedRational::NegInf),
            _ => parse_rational(t).map(ExtendedRational::Finite).or_else(|_| Self::err(line, format!("bad bound {t}"))),
        }
    }

    fn sparse(&mut self) -> Result<Sparse, FormatError> {
        let n = self.count()?;
        (0..n).map(|_| Ok((self.count()?, self.rational()?))).collect()
    }

    fn constraint(&mut self) -> Result<Constraint, FormatError> {
        let (_, name) = self.next()?;
        let (line, s) = self.next()?;
        let Some(sense) = RowSense::from_letter(s) else {
            return Self::err(line, format!("bad sense {s}"));
        };
        let rhs = self.rational()?;
        let coefs = self.sparse()?;
        Ok(Constraint { name: name.to_string(), sense, rhs, coefs })
    }

    fn reason(&mut self) -> Result<Reason, FormatError> {
        self.keyword("{")?;
        let (line, kind) = self.next()?;
        let reason = match kind {
            "asm" => Reason::Asm,
            "lin" => Reason::Lin(self.sparse()?),
            "rnd" => Reason::Rnd(self.sparse()?),
            "uns" => Reason::Uns { i1: self.count()?, a1: self.count()?, i2: self.count()?, a2: self.count()? },
            _ => return Self::err(line, format!("unknown reason {kind}")),
        };
        self.keyword("}")?;
        Ok(reason)
    }

    fn certificate(mut self) -> Result<Certificate, FormatError> {
        self.keyword("VER")?;
        let (line, v) = self.next()?;
        if !(v == "1" || v.starts_with("1.")) {
            return Self::err(line, format!("unsupported version {v}"));
        }
        self.keyword("VAR")?;
        let n = self.count()?;
        let var_names = (0..n).map(|_| self.next().map(|(_, t)| t.to_string())).collect::<Result<_, _>>()?;
        self.keyword("INT")?;
        let k = self.count()?;
        let integers = (0..k).map(|_| self.count()).collect::<Result<_, _>>()?;
        self.keyword("OBJ")?;
        self.keyword("min")?;
        let objective = self.sparse()?;
        self.keyword("CON")?;
        let m = self.count()?;
        let constraints = (0..m).map(|_| self.constraint()).collect::<Result<_, _>>()?;
        self.keyword("RTP")?;
        let (line, kind) = self.next()?;
        let relation = match kind {
            "infeas" => Relation::Infeasible,
            "range" => Relation::Range { lower: self.extended()?, upper: self.extended()? },
            _ => return Self::err(line, format!("unknown relation {kind}")),
        };
        self.keyword("SOL")?;
        let s = self.count()?;
        let solutions = (0..s)
            .map(|_| Ok((self.next()?.1.to_string(), self.sparse()?)))
            .collect::<Result<_, FormatError>>()?;
        self.keyword("DER")?;
        let d = self.count()?;
        let derivations = (0..d)
            .map(|_| Ok(Derivation { constraint: self.constraint()?, reason: self.reason()? }))
            .collect::<Result<_, FormatError>>()?;
        if let Some((line, t)) = self.tokens.get(self.pos) {
            return Self::err(*line, format!("trailing token {t}"));
        }
        Ok(Certificate { var_names, integers, objective, constraints, relation, solutions, derivations })
    }
}
