//! Lattice search between the empty-bodied head and the bottom clause.
//!
//! Best-first on score; a candidate is grown by appending one bottom
//! literal whose input variables are already bound, so every candidate
//! respects the mode chaining bias. Coverage of a candidate only shrinks
//! relative to its parent, which lets children re-test just the parent's
//! covered examples and gives an admissible optimistic bound for pruning.

use std::collections::{BinaryHeap, HashSet};

use num_rational::Ratio;
use thiserror::Error;

use crate::logic::{derives_with_extra, Clause, Derivation, Literal, Program};

use super::eval::EvalFn;
use super::saturate::BottomClause;
use super::SearchParams;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("no clause within bounds reaches minimum accuracy {min_accuracy}")]
    NoAcceptableClause { min_accuracy: Ratio<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredClause {
    pub clause: Clause,
    pub p: usize,
    pub n: usize,
    pub score: Ratio<i64>,
    /// Indices into the positive list handed to [`reduce`].
    pub covered_positives: Vec<usize>,
}

struct Node {
    /// Sorted indices into the bottom clause's body.
    literals: Vec<usize>,
    pos: Vec<usize>,
    neg: Vec<usize>,
    score: Ratio<i64>,
}

/// Max-heap key: best score first, then fewer literals, then earlier
/// discovery.
#[derive(PartialEq, Eq)]
struct HeapEntry {
    score: Ratio<i64>,
    len: usize,
    seq: usize,
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &HeapEntry) -> std::cmp::Ordering {
        self.score
            .cmp(&other.score)
            .then_with(|| other.len.cmp(&self.len))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &HeapEntry) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn candidate_clause(bottom: &BottomClause, literals: &[usize]) -> Clause {
    Clause::rule(
        bottom.clause.head.clone(),
        literals
            .iter()
            .map(|&i| bottom.clause.body[i].clone())
            .collect(),
    )
}

fn covers(background: &Program, clause: &Clause, example: &Literal, depth: usize) -> bool {
    derives_with_extra(background, std::slice::from_ref(clause), example, depth)
        == Derivation::Proved
}

/// Returns the best acceptable clause: maximal score, ties broken by
/// fewer body literals, then by discovery order. Acceptable means
/// P/(P+N) >= min_accuracy with P >= 1. P is measured over `positives`
/// (the caller passes the still-uncovered ones), N over all `negatives`.
pub fn reduce(
    bottom: &BottomClause,
    positives: &[Literal],
    negatives: &[Literal],
    background: &Program,
    evalfn: EvalFn,
    params: &SearchParams,
) -> Result<ScoredClause, ReduceError> {
    let max_body = params.max_clause_literals.saturating_sub(1);
    let depth = params.derivation_depth;

    let acceptable = |p: usize, n: usize| -> bool {
        p >= 1 && Ratio::new(p as i64, (p + n) as i64) >= params.min_accuracy
    };

    let mut nodes: Vec<Node> = Vec::new();
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let mut visited: HashSet<Vec<usize>> = HashSet::new();
    let mut best: Option<usize> = None;
    let mut evaluated = 0usize;

    let consider = |node: Node,
                        nodes: &mut Vec<Node>,
                        heap: &mut BinaryHeap<HeapEntry>,
                        best: &mut Option<usize>| {
        let p = node.pos.len();
        let n = node.neg.len();
        if acceptable(p, n) {
            let better = match *best {
                None => true,
                Some(b) => {
                    node.score > nodes[b].score
                        || (node.score == nodes[b].score
                            && node.literals.len() < nodes[b].literals.len())
                }
            };
            if better {
                *best = Some(nodes.len());
            }
        }
        // Nodes covering no positives cannot become acceptable, and
        // neither can their refinements.
        if p > 0 && node.literals.len() < max_body {
            heap.push(HeapEntry {
                score: node.score,
                len: node.literals.len(),
                seq: nodes.len(),
            });
        }
        nodes.push(node);
    };

    let root_clause = candidate_clause(bottom, &[]);
    let root = Node {
        literals: vec![],
        pos: (0..positives.len())
            .filter(|&i| covers(background, &root_clause, &positives[i], depth))
            .collect(),
        neg: (0..negatives.len())
            .filter(|&i| covers(background, &root_clause, &negatives[i], depth))
            .collect(),
        score: evalfn.score(0, 0),
    };
    let root = Node {
        score: evalfn.score(root.pos.len(), root.neg.len()),
        ..root
    };
    evaluated += 1;
    visited.insert(vec![]);
    consider(root, &mut nodes, &mut heap, &mut best);

    while let Some(entry) = heap.pop() {
        if evaluated >= params.open_list_bound {
            break;
        }
        let parent = entry.seq;
        if let Some(b) = best {
            // Descendants cannot beat a strictly better established best.
            if evalfn.optimistic_bound(nodes[parent].pos.len()) < nodes[b].score {
                continue;
            }
        }
        let bound_vars = bound_variables(bottom, &nodes[parent].literals);
        for i in 0..bottom.clause.body.len() {
            if evaluated >= params.open_list_bound {
                break;
            }
            if nodes[parent].literals.binary_search(&i).is_ok() {
                continue;
            }
            if !bottom.literal_inputs[i].iter().all(|v| bound_vars.contains(v)) {
                continue;
            }
            let mut literals = nodes[parent].literals.clone();
            let at = literals.binary_search(&i).unwrap_err();
            literals.insert(at, i);
            if !visited.insert(literals.clone()) {
                continue;
            }
            let clause = candidate_clause(bottom, &literals);
            let pos: Vec<usize> = nodes[parent]
                .pos
                .iter()
                .copied()
                .filter(|&j| covers(background, &clause, &positives[j], depth))
                .collect();
            let neg: Vec<usize> = nodes[parent]
                .neg
                .iter()
                .copied()
                .filter(|&j| covers(background, &clause, &negatives[j], depth))
                .collect();
            let score = evalfn.score(pos.len(), neg.len());
            evaluated += 1;
            let node = Node {
                literals,
                pos,
                neg,
                score,
            };
            consider(node, &mut nodes, &mut heap, &mut best);
        }
    }

    match best {
        Some(b) => {
            let node = &nodes[b];
            Ok(ScoredClause {
                clause: candidate_clause(bottom, &node.literals),
                p: node.pos.len(),
                n: node.neg.len(),
                score: node.score,
                covered_positives: node.pos.clone(),
            })
        }
        None => Err(ReduceError::NoAcceptableClause {
            min_accuracy: params.min_accuracy,
        }),
    }
}

fn bound_variables(bottom: &BottomClause, literals: &[usize]) -> HashSet<String> {
    let mut bound: HashSet<String> = bottom.head_vars.iter().cloned().collect();
    for &i in literals {
        bound.extend(bottom.literal_outputs[i].iter().cloned());
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_clause, parse_literal, parse_program};

    fn program(src: &str) -> Program {
        Program::new(parse_program(src).unwrap())
    }

    fn literals(srcs: &[&str]) -> Vec<Literal> {
        srcs.iter().map(|s| parse_literal(s).unwrap()).collect()
    }

    /// Bottom clause p(A) :- q(A), r(A) with A bound by the head.
    fn flat_bottom(body: &[&str]) -> BottomClause {
        let mut clause = parse_clause("p(A).").unwrap();
        for lit in body {
            clause.body.push(parse_literal(lit).unwrap());
        }
        let n = clause.body.len();
        BottomClause {
            clause,
            seed: parse_literal("p(a)").unwrap(),
            ground_body: Vec::new(),
            literal_depth_map: vec![1; n],
            literal_inputs: vec![vec!["A".into()]; n],
            literal_outputs: vec![vec![]; n],
            head_vars: vec!["A".into()],
        }
    }

    #[test]
    fn finds_the_best_scoring_subclause() {
        let bottom = flat_bottom(&["q(A)", "r(A)"]);
        let background = program("q(a). q(b). q(c). r(a). r(b).");
        let positives = literals(&["p(a)", "p(b)"]);
        let negatives = literals(&["p(c)"]);
        let sc = reduce(
            &bottom,
            &positives,
            &negatives,
            &background,
            EvalFn::Laplace,
            &SearchParams::default(),
        )
        .unwrap();
        assert_eq!(sc.clause.to_string(), "p(A) :- r(A).");
        assert_eq!((sc.p, sc.n), (2, 0));
        assert_eq!(sc.score, Ratio::new(3, 4));
        assert_eq!(sc.covered_positives, vec![0, 1]);
    }

    #[test]
    fn no_negatives_yields_the_most_general_clause() {
        let bottom = flat_bottom(&["q(A)"]);
        let background = program("q(a).");
        let positives = literals(&["p(a)", "p(b)", "p(c)"]);
        let sc = reduce(
            &bottom,
            &positives,
            &[],
            &background,
            EvalFn::Laplace,
            &SearchParams::default(),
        )
        .unwrap();
        assert_eq!(sc.clause.to_string(), "p(A).");
        assert_eq!((sc.p, sc.n), (3, 0));
    }

    #[test]
    fn contradictory_data_has_no_acceptable_clause() {
        let bottom = flat_bottom(&[]);
        let positives = literals(&["p(a)"]);
        let negatives = literals(&["p(a)"]);
        let err = reduce(
            &bottom,
            &positives,
            &negatives,
            &Program::new(vec![]),
            EvalFn::Laplace,
            &SearchParams::default(),
        )
        .unwrap_err();
        assert!(matches!(err, ReduceError::NoAcceptableClause { .. }));
    }

    #[test]
    fn ties_break_toward_fewer_literals() {
        // Both q and q,r score identically; the shorter clause wins.
        let bottom = flat_bottom(&["q(A)", "r(A)"]);
        let background = program("q(a). r(a).");
        let positives = literals(&["p(a)"]);
        let negatives = literals(&["p(b)"]);
        let sc = reduce(
            &bottom,
            &positives,
            &negatives,
            &background,
            EvalFn::Laplace,
            &SearchParams::default(),
        )
        .unwrap();
        assert_eq!(sc.clause.to_string(), "p(A) :- q(A).");
    }

    #[test]
    fn chaining_gates_literals_on_bound_inputs() {
        // r(B) may only appear after q(A,B) introduces B.
        let clause = parse_clause("p(A) :- q(A,B), r(B).").unwrap();
        let bottom = BottomClause {
            seed: parse_literal("p(a)").unwrap(),
            ground_body: Vec::new(),
            literal_depth_map: vec![1, 2],
            literal_inputs: vec![vec!["A".into()], vec!["B".into()]],
            literal_outputs: vec![vec!["B".into()], vec![]],
            head_vars: vec!["A".into()],
            clause,
        };
        // q alone covers both positives and the negative; r(B) is what
        // separates them, but it needs q first.
        let background = program("q(a,x). q(b,y). q(c,y2). r(x). r(y).");
        let positives = literals(&["p(a)", "p(b)"]);
        let negatives = literals(&["p(c)"]);
        let sc = reduce(
            &bottom,
            &positives,
            &negatives,
            &background,
            EvalFn::Laplace,
            &SearchParams::default(),
        )
        .unwrap();
        assert_eq!(sc.clause.to_string(), "p(A) :- q(A,B), r(B).");
        assert_eq!((sc.p, sc.n), (2, 0));
    }

    #[test]
    fn max_clause_literals_counts_the_head() {
        let bottom = flat_bottom(&["q(A)", "r(A)"]);
        let background = program("q(a). q(b). r(b). r(c).");
        // Only q,r together exclude the negative p(c)... but a cap of 2
        // literals (head + 1) forbids the pair.
        let positives = literals(&["p(b)"]);
        let negatives = literals(&["p(a)", "p(c)"]);
        let params = SearchParams {
            max_clause_literals: 2,
            ..SearchParams::default()
        };
        let err = reduce(
            &bottom,
            &positives,
            &negatives,
            &background,
            EvalFn::Laplace,
            &params,
        )
        .unwrap_err();
        assert!(matches!(err, ReduceError::NoAcceptableClause { .. }));

        let sc = reduce(
            &bottom,
            &positives,
            &negatives,
            &background,
            EvalFn::Laplace,
            &SearchParams::default(),
        )
        .unwrap();
        assert_eq!(sc.clause.to_string(), "p(A) :- q(A), r(A).");
    }

    #[test]
    fn coverage_evalfn_prefers_high_coverage() {
        let bottom = flat_bottom(&["q(A)"]);
        let background = program("q(a). q(b).");
        let positives = literals(&["p(a)", "p(b)", "p(c)", "p(d)"]);
        let sc = reduce(
            &bottom,
            &positives,
            &[],
            &background,
            EvalFn::Coverage,
            &SearchParams::default(),
        )
        .unwrap();
        // The empty body covers all four; q only two.
        assert_eq!(sc.clause.to_string(), "p(A).");
        assert_eq!(sc.score, Ratio::from_integer(4));
    }
}
