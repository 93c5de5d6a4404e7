//! Robinson unification with the occurs check enabled.

use super::{Substitution, Term};

/// Computes the most general unifier of `a` and `b`, or `None` when they
/// do not unify (functor/arity clash or occurs-check violation).
///
/// The returned substitution is idempotent and fully resolved: applying it
/// to both inputs yields syntactically identical terms.
pub fn unify(a: &Term, b: &Term) -> Option<Substitution> {
    let mut subst = Substitution::new();
    if !unify_into(a, b, &mut subst) {
        return None;
    }
    subst.normalize();
    Some(subst)
}

/// Unifies two argument lists pairwise under one substitution.
pub(crate) fn unify_args(xs: &[Term], ys: &[Term], subst: &mut Substitution) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    xs.iter().zip(ys).all(|(x, y)| unify_into(x, y, subst))
}

fn unify_into(a: &Term, b: &Term, subst: &mut Substitution) -> bool {
    let a = walk(a, subst);
    let b = walk(b, subst);
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), _) => bind(x, &b, subst),
        (_, Term::Var(y)) => bind(y, &a, subst),
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::Compound(f, fa), Term::Compound(g, ga)) => {
            f == g && fa.len() == ga.len() && unify_args(fa, ga, subst)
        }
        _ => false,
    }
}

/// Follows variable bindings at the top level without descending into
/// compound arguments.
fn walk<'a>(t: &'a Term, subst: &'a Substitution) -> Term {
    let mut cursor = t;
    while let Term::Var(v) = cursor {
        match subst.get(v) {
            Some(bound) => cursor = bound,
            None => break,
        }
    }
    cursor.clone()
}

fn bind(var: &str, term: &Term, subst: &mut Substitution) -> bool {
    if occurs(var, term, subst) {
        return false;
    }
    subst.bind(var, term.clone());
    true
}

fn occurs(var: &str, term: &Term, subst: &Substitution) -> bool {
    match term {
        Term::Var(v) => {
            if v == var {
                return true;
            }
            match subst.get(v) {
                Some(bound) => occurs(var, bound, subst),
                None => false,
            }
        }
        Term::Const(_) => false,
        Term::Compound(_, args) => args.iter().any(|a| occurs(var, a, subst)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Term;

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn v(name: &str) -> Term {
        Term::var(name)
    }

    #[test]
    fn variable_constant_binding() {
        let s = unify(&v("X"), &c("a")).unwrap();
        assert_eq!(s.get("X"), Some(&c("a")));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn crosswise_compound_binding() {
        let a = Term::compound("f", vec![v("X"), c("b")]);
        let b = Term::compound("f", vec![c("a"), v("Y")]);
        let s = unify(&a, &b).unwrap();
        assert_eq!(s.get("X"), Some(&c("a")));
        assert_eq!(s.get("Y"), Some(&c("b")));
        assert_eq!(s.apply_term(&a), s.apply_term(&b));
    }

    #[test]
    fn distinct_constants_fail() {
        assert!(unify(&c("a"), &c("b")).is_none());
    }

    #[test]
    fn functor_clash_fails() {
        let a = Term::compound("f", vec![c("a")]);
        let b = Term::compound("g", vec![c("a")]);
        assert!(unify(&a, &b).is_none());
    }

    #[test]
    fn arity_clash_fails() {
        let a = Term::compound("f", vec![c("a")]);
        let b = Term::compound("f", vec![c("a"), c("b")]);
        assert!(unify(&a, &b).is_none());
    }

    #[test]
    fn occurs_check_rejects_cyclic_binding() {
        let a = v("X");
        let b = Term::compound("f", vec![v("X")]);
        assert!(unify(&a, &b).is_none());
    }

    #[test]
    fn occurs_check_through_chain() {
        // X = f(Y) then Y = f(X) must fail through the chain.
        let a = Term::compound("p", vec![v("X"), v("Y")]);
        let b = Term::compound(
            "p",
            vec![
                Term::compound("f", vec![v("Y")]),
                Term::compound("f", vec![v("X")]),
            ],
        );
        assert!(unify(&a, &b).is_none());
    }

    #[test]
    fn mgu_is_idempotent() {
        let a = Term::compound("f", vec![v("X"), v("Y")]);
        let b = Term::compound("f", vec![v("Y"), c("k")]);
        let s = unify(&a, &b).unwrap();
        let once = s.apply_term(&a);
        let twice = s.apply_term(&once);
        assert_eq!(once, twice);
    }

    #[test]
    fn unifies_lists() {
        let a = Term::list(vec![v("H"), c(":")]);
        let b = Term::list(vec![c("a"), v("T")]);
        let s = unify(&a, &b).unwrap();
        assert_eq!(s.get("H"), Some(&c("a")));
        assert_eq!(s.get("T"), Some(&c(":")));
    }
}
