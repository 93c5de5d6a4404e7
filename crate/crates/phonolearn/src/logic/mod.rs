//! First-order Horn-clause substrate: terms, literals, definite clauses,
//! substitutions, unification, depth-bounded derivation and θ-subsumption.
//!
//! Everything here is an immutable value; all operations are pure and safe
//! to call from multiple threads.

mod solve;
mod subsume;
mod text;
mod unify;

pub use solve::{derives, derives_with_extra, solve, Derivation, Program};
pub use subsume::theta_subsumes;
pub use text::{parse_clause, parse_literal, parse_program, parse_term, TextError};
pub use unify::unify;

use std::collections::BTreeMap;
use std::fmt;

/// Functor used for list cons cells.
pub const CONS: &str = ".";
/// Constant naming the empty list.
pub const NIL: &str = "[]";

/// A first-order term: variable, constant, or compound.
///
/// Lists are ordinary compound terms built from the binary [`CONS`] functor
/// and the [`NIL`] constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    Compound(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn compound(functor: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Compound(functor.into(), args)
    }

    /// Builds a proper list term from the given elements.
    pub fn list(items: Vec<Term>) -> Term {
        let mut tail = Term::Const(NIL.into());
        for item in items.into_iter().rev() {
            tail = Term::Compound(CONS.into(), vec![item, tail]);
        }
        tail
    }

    /// Decomposes a proper list term into its elements.
    /// Returns `None` for partial lists (variable tails) and non-lists.
    pub fn as_list(&self) -> Option<Vec<&Term>> {
        let mut items = Vec::new();
        let mut cursor = self;
        loop {
            match cursor {
                Term::Const(c) if c == NIL => return Some(items),
                Term::Compound(f, args) if f == CONS && args.len() == 2 => {
                    items.push(&args[0]);
                    cursor = &args[1];
                }
                _ => return None,
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Collects variable names in first-occurrence order.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.iter().any(|x| x == v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Compound(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    /// Replaces every variable occurrence using `rename`.
    pub fn rename_vars(&self, rename: &dyn Fn(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(rename(v)),
            Term::Const(c) => Term::Const(c.clone()),
            Term::Compound(f, args) => Term::Compound(
                f.clone(),
                args.iter().map(|a| a.rename_vars(rename)).collect(),
            ),
        }
    }
}

/// An atom: predicate symbol applied to argument terms.
///
/// Arity is fixed per predicate symbol within one knowledge base; the
/// [`Program`] index keys on `(predicate, arity)` so a violation simply
/// never resolves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Literal {
        Literal {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        for a in &self.args {
            a.collect_vars(out);
        }
    }

    pub fn rename_vars(&self, rename: &dyn Fn(&str) -> String) -> Literal {
        Literal {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|a| a.rename_vars(rename)).collect(),
        }
    }
}

/// A definite clause: one head literal and an ordered, possibly empty body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Literal,
    pub body: Vec<Literal>,
}

impl Clause {
    pub fn fact(head: Literal) -> Clause {
        Clause { head, body: vec![] }
    }

    pub fn rule(head: Literal, body: Vec<Literal>) -> Clause {
        Clause { head, body }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// Variable names in first-occurrence order, head first.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = Vec::new();
        self.head.collect_vars(&mut vars);
        for lit in &self.body {
            lit.collect_vars(&mut vars);
        }
        vars
    }

    pub fn rename_vars(&self, rename: &dyn Fn(&str) -> String) -> Clause {
        Clause {
            head: self.head.rename_vars(rename),
            body: self.body.iter().map(|l| l.rename_vars(rename)).collect(),
        }
    }
}

/// A variable-to-term binding map.
///
/// Substitutions returned by [`unify`] are idempotent: no bound term
/// mentions a bound variable, so applying twice equals applying once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn bind(&mut self, var: impl Into<String>, term: Term) {
        self.bindings.insert(var.into(), term);
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.bindings.get(v) {
                Some(bound) => bound.clone(),
                None => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::Compound(f, args) => Term::Compound(
                f.clone(),
                args.iter().map(|a| self.apply_term(a)).collect(),
            ),
        }
    }

    pub fn apply_literal(&self, lit: &Literal) -> Literal {
        Literal {
            predicate: lit.predicate.clone(),
            args: lit.args.iter().map(|a| self.apply_term(a)).collect(),
        }
    }

    pub fn apply_clause(&self, clause: &Clause) -> Clause {
        Clause {
            head: self.apply_literal(&clause.head),
            body: clause.body.iter().map(|l| self.apply_literal(l)).collect(),
        }
    }

    /// Resolves every binding through the map until no bound variable
    /// remains on the right-hand side. Requires an acyclic binding
    /// relation, which the occurs check guarantees.
    pub(crate) fn normalize(&mut self) {
        let keys: Vec<String> = self.bindings.keys().cloned().collect();
        for key in keys {
            let resolved = self.resolve_deep(&self.bindings[&key]);
            self.bindings.insert(key, resolved);
        }
    }

    fn resolve_deep(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.bindings.get(v) {
                Some(bound) => self.resolve_deep(bound),
                None => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::Compound(f, args) => Term::Compound(
                f.clone(),
                args.iter().map(|a| self.resolve_deep(a)).collect(),
            ),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_term(f, self)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_literal(f, self)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_clause(f, self)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        write!(f, "}}")
    }
}
