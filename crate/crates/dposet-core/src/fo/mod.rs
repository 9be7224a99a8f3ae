//! A small first-order language over the poset signature with named digraph
//! constants, evaluated over a bounded universe of isomorphism types.

mod eval;
mod parser;

pub use eval::{defined_set, evaluate};
pub use parser::parse;

use std::fmt;

use thiserror::Error;

use crate::catalog::{Catalog, OrderKind, Relations};
use crate::digraph::CanonCode;

/// A term: a variable or a resolved constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(Constant),
}

/// A constant keeps its source spelling for printing and its resolved
/// canonical code for evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constant {
    pub text: String,
    pub code: CanonCode,
}

impl Constant {
    pub fn from_code(code: CanonCode) -> Constant {
        Constant {
            text: format!("#{code}"),
            code,
        }
    }

    pub fn resolve(text: &str) -> Option<Constant> {
        let g = crate::families::resolve_constant(text).ok()?;
        Some(Constant {
            text: text.to_string(),
            code: g.canonical_form(),
        })
    }
}

/// Abstract syntax of a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Leq(Term, Term),
    Eq(Term, Term),
}

impl Formula {
    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn leq(a: Term, b: Term) -> Formula {
        Formula::Leq(a, b)
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    /// Strict order, desugared exactly as the parser does it.
    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::and(
            Formula::Leq(a.clone(), b.clone()),
            Formula::not(Formula::Eq(a, b)),
        )
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut term = |t: &Term| {
            if let Term::Var(v) = t {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
        };
        match self {
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::Leq(a, b) | Formula::Eq(a, b) => {
                term(a);
                term(b);
            }
        }
    }

    fn level(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            Formula::Leq(..) | Formula::Eq(..) => 6,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Forall(v, body) => {
                write!(f, "forall {v}. ")?;
                body.fmt_prec(f, 0)
            }
            Formula::Exists(v, body) => {
                write!(f, "exists {v}. ")?;
                body.fmt_prec(f, 0)
            }
            Formula::Iff(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " <-> ")?;
                b.fmt_prec(f, 2)
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 2)
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 4)
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 4)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 5)
            }
            Formula::Not(a) => {
                write!(f, "~")?;
                a.fmt_prec(f, 5)
            }
            Formula::Leq(a, b) => write!(f, "{a} <= {b}"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => f.write_str(&c.text),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Errors of the formula language.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FoError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: unknown constant `{name}`")]
    UnknownConstant { line: usize, col: usize, name: String },
    #[error("line {line}, column {col}: variable `{var}` shadows an enclosing binder")]
    Shadowed { line: usize, col: usize, var: String },
    #[error("unbound free variable `{0}`")]
    UnboundVariable(String),
    #[error("expected exactly one free variable, found {0}")]
    BadArity(usize),
    #[error("constant `{0}` denotes an element outside the universe")]
    OutsideUniverse(String),
}

/// A bounded universe: every isomorphism type with at most `bound` vertices,
/// ordered by substructure or embeddability.
#[derive(Clone, Copy)]
pub struct Universe<'a> {
    rel: &'a Relations,
    bound: usize,
    order: OrderKind,
}

impl<'a> Universe<'a> {
    pub fn new(catalog: &'a Catalog, bound: usize, order: OrderKind) -> Universe<'a> {
        assert!(
            bound >= 1 && bound <= catalog.max_n(),
            "universe bound {bound} outside the catalog (max {})",
            catalog.max_n()
        );
        Universe {
            rel: catalog.relations(),
            bound,
            order,
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn order(&self) -> OrderKind {
        self.order
    }

    pub fn size(&self) -> usize {
        self.rel.ids_up_to(self.bound).end
    }

    pub fn element_id(&self, code: &CanonCode) -> Option<usize> {
        let id = self.rel.id_of(code)?;
        if id < self.size() {
            Some(id)
        } else {
            None
        }
    }

    pub fn code(&self, id: usize) -> &CanonCode {
        self.rel.code(id)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.rel.le(self.order, a, b)
    }

    pub fn elements(&self) -> impl Iterator<Item = &CanonCode> + '_ {
        self.rel.ids_up_to(self.bound).map(move |id| self.rel.code(id))
    }
}

impl fmt::Debug for Universe<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Universe(bound={}, order={:?}, size={})",
            self.bound,
            self.order,
            self.size()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use std::collections::BTreeMap;

    #[test]
    fn free_vars_and_display() {
        let f = parse("forall y. y <= x -> y = x | y = E1 | y = L1").unwrap();
        assert_eq!(f.free_vars(), vec!["x".to_string()]);
        let printed = f.to_string();
        assert_eq!(parse(&printed).unwrap(), f);
    }

    #[test]
    fn minimal_elements_are_the_two_singletons() {
        let catalog = Catalog::build(3).unwrap();
        let u = Universe::new(&catalog, 3, OrderKind::Sub);
        let f = parse("~exists y. y < x").unwrap();
        let set = defined_set(&f, &u).unwrap();
        let expected: std::collections::BTreeSet<_> = ["1:0", "1:1"]
            .iter()
            .map(|s| CanonCode::parse(s).unwrap())
            .collect();
        assert_eq!(set, expected);
    }

    #[test]
    fn truncation_has_no_larger_witness() {
        let catalog = Catalog::build(3).unwrap();
        let u = Universe::new(&catalog, 2, OrderKind::Sub);
        let f = parse("exists y. x < y").unwrap();
        for code in catalog.level(2).members.iter() {
            let mut binding = BTreeMap::new();
            binding.insert("x".to_string(), code.clone());
            assert_eq!(evaluate(&f, &u, &binding).unwrap(), false, "{code}");
        }
    }

    #[test]
    fn substructures_of_l1() {
        let catalog = Catalog::build(3).unwrap();
        let u = Universe::new(&catalog, 3, OrderKind::Sub);
        let f = parse("E1 <= x").unwrap();
        let mut binding = BTreeMap::new();
        binding.insert(
            "x".to_string(),
            crate::families::loops(1).unwrap().canonical_form(),
        );
        assert_eq!(evaluate(&f, &u, &binding).unwrap(), false);
    }

    #[test]
    fn defined_set_arity_and_bounds() {
        let catalog = Catalog::build(3).unwrap();
        let u = Universe::new(&catalog, 3, OrderKind::Sub);
        let f = parse("x = x").unwrap();
        assert_eq!(defined_set(&f, &u).unwrap().len(), u.size());
        let f2 = parse("x <= y").unwrap();
        assert_eq!(defined_set(&f2, &u).unwrap_err(), FoError::BadArity(2));
        // E2-and-below under sub: {E1, E2} minus E2 itself
        let f3 = parse("x <= E2 & ~(x = E2)").unwrap();
        let set = defined_set(&f3, &u).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.contains(&CanonCode::parse("1:0").unwrap()));
    }

    #[test]
    fn unbound_variable_is_reported() {
        let catalog = Catalog::build(2).unwrap();
        let u = Universe::new(&catalog, 2, OrderKind::Sub);
        let f = parse("x <= E1").unwrap();
        assert_eq!(
            evaluate(&f, &u, &BTreeMap::new()).unwrap_err(),
            FoError::UnboundVariable("x".to_string())
        );
    }
}
