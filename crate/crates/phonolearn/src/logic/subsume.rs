//! θ-subsumption between definite clauses.

use super::{Clause, Literal, Substitution, Term};

/// Tests whether `c` θ-subsumes `d`: some substitution σ maps c's head onto
/// d's head and c's body injectively into d's body (literal multiset
/// inclusion).
///
/// Implemented as backtracking literal matching with first-fail candidate
/// ordering; `d` is treated as frozen, so only c's variables bind.
pub fn theta_subsumes(c: &Clause, d: &Clause) -> bool {
    if c.body.len() > d.body.len() {
        return false;
    }
    let mut subst = Substitution::new();
    if !match_literal(&c.head, &d.head, &mut subst) {
        return false;
    }

    // Order c's body literals by how few d literals they could match,
    // cheapest-to-refute first.
    let mut order: Vec<usize> = (0..c.body.len()).collect();
    let fanout: Vec<usize> = c
        .body
        .iter()
        .map(|cl| {
            d.body
                .iter()
                .filter(|dl| dl.predicate == cl.predicate && dl.arity() == cl.arity())
                .count()
        })
        .collect();
    order.sort_by_key(|&i| fanout[i]);

    let mut used = vec![false; d.body.len()];
    match_rest(&order, 0, &c.body, &d.body, &mut used, &subst)
}

fn match_rest(
    order: &[usize],
    pos: usize,
    c_body: &[Literal],
    d_body: &[Literal],
    used: &mut [bool],
    subst: &Substitution,
) -> bool {
    if pos == order.len() {
        return true;
    }
    let cl = &c_body[order[pos]];
    for (i, dl) in d_body.iter().enumerate() {
        if used[i] {
            continue;
        }
        let mut attempt = subst.clone();
        if match_literal(cl, dl, &mut attempt) {
            used[i] = true;
            if match_rest(order, pos + 1, c_body, d_body, used, &attempt) {
                return true;
            }
            used[i] = false;
        }
    }
    false
}

/// One-way matching: binds variables of `pattern` only.
fn match_literal(pattern: &Literal, target: &Literal, subst: &mut Substitution) -> bool {
    if pattern.predicate != target.predicate || pattern.arity() != target.arity() {
        return false;
    }
    pattern
        .args
        .iter()
        .zip(&target.args)
        .all(|(p, t)| match_term(p, t, subst))
}

pub(crate) fn match_term(pattern: &Term, target: &Term, subst: &mut Substitution) -> bool {
    match pattern {
        Term::Var(v) => match subst.get(v) {
            Some(bound) => bound == target,
            None => {
                subst.bind(v.clone(), target.clone());
                true
            }
        },
        Term::Const(c) => matches!(target, Term::Const(tc) if tc == c),
        Term::Compound(f, args) => match target {
            Term::Compound(tf, targs) if tf == f && targs.len() == args.len() => {
                args.iter().zip(targs).all(|(p, t)| match_term(p, t, subst))
            }
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_clause;

    fn clause(src: &str) -> Clause {
        parse_clause(src).unwrap()
    }

    #[test]
    fn general_subsumes_specific() {
        let c = clause("p(X) :- q(X).");
        let d = clause("p(a) :- q(a), r(a).");
        assert!(theta_subsumes(&c, &d));
        assert!(!theta_subsumes(&d, &c));
    }

    #[test]
    fn specific_does_not_subsume_general() {
        let c = clause("p(a).");
        let d = clause("p(X).");
        assert!(!theta_subsumes(&c, &d));
        assert!(theta_subsumes(&d, &c));
    }

    #[test]
    fn reflexive() {
        let c = clause("p(X,Y) :- q(X), r(Y), q(Y).");
        assert!(theta_subsumes(&c, &c));
    }

    #[test]
    fn body_matching_is_injective() {
        // Two q-literals cannot both land on the single q in d.
        let c = clause("p(X) :- q(X,Y), q(Y,X).");
        let d = clause("p(a) :- q(a,a).");
        assert!(!theta_subsumes(&c, &d));
        let d2 = clause("p(a) :- q(a,b), q(b,a).");
        assert!(theta_subsumes(&c, &d2));
    }

    #[test]
    fn shared_variables_constrain_matching() {
        let c = clause("p(X) :- q(X,Y), r(Y).");
        let d = clause("p(a) :- q(a,b), r(c).");
        assert!(!theta_subsumes(&c, &d));
        let d2 = clause("p(a) :- q(a,b), r(b).");
        assert!(theta_subsumes(&c, &d2));
    }

    #[test]
    fn empty_body_subsumes_anything_with_matching_head() {
        let c = clause("p(X,Z).");
        let d = clause("p(a,b) :- q(a).");
        assert!(theta_subsumes(&c, &d));
    }

    #[test]
    fn head_mismatch_fails() {
        let c = clause("p(a).");
        let d = clause("p(b).");
        assert!(!theta_subsumes(&c, &d));
    }
}
