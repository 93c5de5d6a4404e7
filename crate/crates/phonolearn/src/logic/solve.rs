//! Depth-bounded top-down derivation over definite programs.
//!
//! Body literals are explored left to right and clauses in program order,
//! so coverage answers are deterministic. The depth bound counts resolution
//! steps along a derivation, not term depth.

use std::collections::HashMap;

use super::unify::unify_args;
use super::{Clause, Literal, Substitution, Term};

/// Outcome of a bounded derivation attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivation {
    Proved,
    NotProved,
    /// The bound was hit on some branch without a proof anywhere else.
    /// Callers treat this as "not covered" but may log it.
    DepthExhausted,
}

/// A definite program indexed by predicate symbol and arity.
///
/// Clause order is preserved: within one predicate, clauses resolve in the
/// order they were added. Immutable once built; safe to share across threads.
#[derive(Debug, Clone, Default)]
pub struct Program {
    clauses: Vec<Clause>,
    index: HashMap<(String, usize), Vec<usize>>,
}

impl Program {
    pub fn new(clauses: Vec<Clause>) -> Program {
        let mut program = Program::default();
        for c in clauses {
            program.push(c);
        }
        program
    }

    pub fn push(&mut self, clause: Clause) {
        let key = (clause.head.predicate.clone(), clause.head.arity());
        self.index.entry(key).or_default().push(self.clauses.len());
        self.clauses.push(clause);
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    fn matching<'a>(&'a self, goal: &Literal) -> impl Iterator<Item = &'a Clause> + 'a {
        let key = (goal.predicate.clone(), goal.arity());
        self.index
            .get(&key)
            .into_iter()
            .flatten()
            .map(move |&i| &self.clauses[i])
    }
}

/// Tests whether `goal` is derivable from `program` within `depth`
/// resolution steps. Non-ground goals are proved when any instance is.
pub fn derives(program: &Program, goal: &Literal, depth: usize) -> Derivation {
    derives_with_extra(program, &[], goal, depth)
}

/// Like [`derives`], with `extra` clauses appended after the program's own
/// clauses for resolution ordering.
pub fn derives_with_extra(
    program: &Program,
    extra: &[Clause],
    goal: &Literal,
    depth: usize,
) -> Derivation {
    let mut search = Search {
        program,
        extra,
        max_solutions: 1,
        solutions: Vec::new(),
        exhausted: false,
        fresh: 0,
        goal_vars: Vec::new(),
    };
    let subst = Substitution::new();
    search.run(&[goal.clone()], &subst, depth);
    if !search.solutions.is_empty() {
        Derivation::Proved
    } else if search.exhausted {
        Derivation::DepthExhausted
    } else {
        Derivation::NotProved
    }
}

/// Enumerates up to `max_solutions` answer substitutions for `goal`,
/// restricted to the goal's own variables, in derivation order.
///
/// The second component reports whether the depth bound cut any branch.
pub fn solve(
    program: &Program,
    extra: &[Clause],
    goal: &Literal,
    depth: usize,
    max_solutions: usize,
) -> (Vec<Substitution>, bool) {
    let mut goal_vars = Vec::new();
    goal.collect_vars(&mut goal_vars);
    let mut search = Search {
        program,
        extra,
        max_solutions,
        solutions: Vec::new(),
        exhausted: false,
        fresh: 0,
        goal_vars,
    };
    let subst = Substitution::new();
    search.run(&[goal.clone()], &subst, depth);
    (search.solutions, search.exhausted)
}

struct Search<'a> {
    program: &'a Program,
    extra: &'a [Clause],
    max_solutions: usize,
    solutions: Vec<Substitution>,
    exhausted: bool,
    fresh: u64,
    goal_vars: Vec<String>,
}

impl<'a> Search<'a> {
    fn done(&self) -> bool {
        self.max_solutions > 0 && self.solutions.len() >= self.max_solutions
    }

    fn record(&mut self, subst: &Substitution) {
        let mut answer = Substitution::new();
        for v in &self.goal_vars {
            let t = subst.apply_term(&Term::Var(v.clone()));
            answer.bind(v.clone(), t);
        }
        if !self.solutions.contains(&answer) {
            self.solutions.push(answer);
        }
    }

    fn run(&mut self, goals: &[Literal], subst: &Substitution, depth: usize) {
        if self.done() {
            return;
        }
        if goals.is_empty() {
            let mut resolved = subst.clone();
            resolved.normalize();
            self.record(&resolved);
            return;
        }
        if depth == 0 {
            self.exhausted = true;
            return;
        }
        let goal = subst.apply_literal(&goals[0]);
        let rest = &goals[1..];
        let candidates: Vec<&Clause> = self
            .program
            .matching(&goal)
            .chain(
                self.extra
                    .iter()
                    .filter(|c| c.head.predicate == goal.predicate && c.head.arity() == goal.arity()),
            )
            .collect();
        for clause in candidates {
            if self.done() {
                return;
            }
            let renamed = self.rename_apart(clause);
            let mut attempt = subst.clone();
            if !unify_args(&renamed.head.args, &goal.args, &mut attempt) {
                continue;
            }
            let mut next: Vec<Literal> = renamed.body.clone();
            next.extend_from_slice(rest);
            self.run(&next, &attempt, depth - 1);
        }
    }

    fn rename_apart(&mut self, clause: &Clause) -> Clause {
        self.fresh += 1;
        let tag = self.fresh;
        clause.rename_vars(&move |v| format!("_R{tag}_{v}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_clause, parse_literal};

    fn program(src: &[&str]) -> Program {
        Program::new(src.iter().map(|s| parse_clause(s).unwrap()).collect())
    }

    fn lit(src: &str) -> Literal {
        parse_literal(src).unwrap()
    }

    #[test]
    fn proves_head_of_singleton_list() {
        let p = program(&["head([H|T],H)."]);
        let goal = lit("head([m],X)");
        assert_eq!(derives(&p, &goal, 5), Derivation::Proved);
        let (solutions, _) = solve(&p, &[], &goal, 5, 0);
        assert_eq!(solutions.len(), 1);
        assert_eq!(solutions[0].get("X"), Some(&Term::constant("m")));
    }

    #[test]
    fn empty_program_proves_nothing() {
        let p = Program::default();
        assert_eq!(derives(&p, &lit("p(a)"), 5), Derivation::NotProved);
    }

    #[test]
    fn infinite_recursion_is_cut_by_bound() {
        let p = program(&["p(X) :- p(X)."]);
        assert_eq!(derives(&p, &lit("p(a)"), 10), Derivation::DepthExhausted);
    }

    #[test]
    fn proved_beats_exhausted_elsewhere() {
        // First clause loops, second proves; the proof must win.
        let p = program(&["p(X) :- p(X).", "p(a)."]);
        assert_eq!(derives(&p, &lit("p(a)"), 10), Derivation::Proved);
    }

    #[test]
    fn depth_counts_resolution_steps() {
        let p = program(&["p(X) :- q(X).", "q(X) :- r(X).", "r(a)."]);
        let goal = lit("p(a)");
        assert_eq!(derives(&p, &goal, 2), Derivation::DepthExhausted);
        assert_eq!(derives(&p, &goal, 3), Derivation::Proved);
    }

    #[test]
    fn conjunction_shares_bindings() {
        let p = program(&["q(a).", "q(b).", "r(b).", "both(X) :- q(X), r(X)."]);
        let (solutions, _) = solve(&p, &[], &lit("both(X)"), 10, 0);
        assert_eq!(solutions.len(), 1);
        assert_eq!(solutions[0].get("X"), Some(&Term::constant("b")));
    }

    #[test]
    fn solutions_come_in_program_order() {
        let p = program(&["q(a).", "q(b).", "q(c)."]);
        let (solutions, _) = solve(&p, &[], &lit("q(X)"), 5, 2);
        let got: Vec<_> = solutions
            .iter()
            .map(|s| s.get("X").unwrap().clone())
            .collect();
        assert_eq!(got, vec![Term::constant("a"), Term::constant("b")]);
    }

    #[test]
    fn extra_clauses_resolve_after_program_clauses() {
        let p = program(&["q(a)."]);
        let extra = vec![parse_clause("q(b).").unwrap()];
        let (solutions, _) = solve(&p, &extra, &lit("q(X)"), 5, 0);
        let got: Vec<_> = solutions
            .iter()
            .map(|s| s.get("X").unwrap().clone())
            .collect();
        assert_eq!(got, vec![Term::constant("a"), Term::constant("b")]);
    }

    #[test]
    fn rest_of_two_element_list() {
        let p = program(&["rest([H|T],T)."]);
        let (solutions, _) = solve(&p, &[], &lit("rest([a,:],X)"), 5, 0);
        assert_eq!(solutions.len(), 1);
        assert_eq!(
            solutions[0].get("X"),
            Some(&Term::list(vec![Term::constant(":")]))
        );
    }
}
