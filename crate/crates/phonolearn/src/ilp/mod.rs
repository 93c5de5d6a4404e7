//! Progol-style single-predicate learner.
//!
//! The pipeline is the classic covering loop: pick an uncovered positive
//! example, saturate it into a bottom clause under the mode declarations,
//! search the generalization lattice for the best-scoring clause, add it,
//! remove what it covers, repeat. See [`learn`] for the loop, [`saturate`]
//! and [`reduce`] for the two inner steps.

mod eval;
mod examples;
mod learn;
mod modes;
mod reduce;
mod saturate;

pub use eval::{parse_fraction, EvalFn};
pub use examples::{ExampleSet, ExamplesError};
pub use learn::{learn, ClauseProvenance, LearnResult, Theory, TheoryFileError};
pub use modes::{parse_modes, ArgMode, ModeDeclaration, ModeError, ModeKind, Recall};
pub use reduce::{reduce, ReduceError, ScoredClause};
pub use saturate::{saturate, BottomClause, SaturationError};

use num_rational::Ratio;

/// Search-space bounds for saturation and reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    /// Clause size cap, counting the head. The learned-rule shape
    /// `prefix(A,B,C) :- l1, ..., l5` is 6 literals.
    pub max_clause_literals: usize,
    /// Variable chaining rounds during saturation: a body literal may only
    /// consume values introduced strictly earlier in the chain.
    pub variable_depth: usize,
    /// Resolution-step bound for every derivation (coverage tests and
    /// saturation queries alike).
    pub derivation_depth: usize,
    /// Per-clause training accuracy P/(P+N) a clause must reach to be
    /// accepted by reduction.
    pub min_accuracy: Ratio<i64>,
    /// Cap on candidate clauses scored during one reduction.
    pub open_list_bound: usize,
    /// Order in which uncovered positives are picked as seeds.
    pub seed_order: SeedOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedOrder {
    /// Corpus order: first uncovered positive in input order.
    Corpus,
    /// Deterministic shuffle of the positive list by the given seed.
    Shuffled(u64),
}

impl Default for SearchParams {
    fn default() -> SearchParams {
        SearchParams {
            max_clause_literals: 6,
            variable_depth: 2,
            derivation_depth: 20,
            min_accuracy: Ratio::new(17, 20),
            open_list_bound: 5000,
            seed_order: SeedOrder::Corpus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_min_accuracy_is_exactly_85_percent() {
        let params = SearchParams::default();
        assert_eq!(params.min_accuracy, Ratio::new(85, 100));
    }
}
