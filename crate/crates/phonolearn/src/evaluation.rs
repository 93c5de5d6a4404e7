//! Whole-word acceptance under a clause set and recall/precision
//! reporting.
//!
//! A word is accepted when every affixing event outward from the
//! nucleus, including the terminal boundary on both sides, is proved
//! by background plus theory.

use std::fmt;

use num_rational::Ratio;

use crate::dataset::{affix_chain, segment, AffixExample, Direction, Word};
use crate::logic::{derives, Clause, Derivation, Program};
use crate::phonology::{Background, Inventory};

/// Why a word was turned away.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectCause {
    /// The word does not fit the syllable template.
    Template(String),
    /// First affixing event the clause set fails to prove.
    Affix(AffixExample),
    /// A named acceptor rule fired (baseline filters).
    Rule { name: String, detail: String },
}

impl fmt::Display for RejectCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectCause::Template(e) => write!(f, "template ({e})"),
            RejectCause::Affix(atom) => write!(f, "affix {atom}"),
            RejectCause::Rule { name, detail } => write!(f, "rule {name} ({detail})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordVerdict {
    Accept,
    Reject(RejectCause),
}

impl WordVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, WordVerdict::Accept)
    }
}

/// Proves each affixing of `word` against `program` (background plus
/// theory clauses), innermost first, prefix side before suffix side.
pub fn word_accepted_by_program(
    program: &Program,
    inventory: &Inventory,
    word: &Word,
    derivation_depth: usize,
) -> WordVerdict {
    let sw = match segment(word, inventory) {
        Ok(sw) => sw,
        Err(e) => return WordVerdict::Reject(RejectCause::Template(e.to_string())),
    };
    for direction in [Direction::Prefix, Direction::Suffix] {
        for atom in affix_chain(&sw, direction) {
            let goal = atom.to_literal();
            if derives(program, &goal, derivation_depth) != Derivation::Proved {
                return WordVerdict::Reject(RejectCause::Affix(atom));
            }
        }
    }
    WordVerdict::Accept
}

/// One-shot form: builds the program from background and theory
/// clauses, then defers to [`word_accepted_by_program`].
pub fn word_accepted(
    theory_clauses: &[Clause],
    background: &Background,
    inventory: &Inventory,
    word: &Word,
    derivation_depth: usize,
) -> WordVerdict {
    let program = acceptance_program(theory_clauses, background);
    word_accepted_by_program(&program, inventory, word, derivation_depth)
}

pub fn acceptance_program(theory_clauses: &[Clause], background: &Background) -> Program {
    let mut clauses = background.clauses.clone();
    clauses.extend(theory_clauses.iter().cloned());
    Program::new(clauses)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationReport {
    /// (prefix clauses, suffix clauses) for theories; (licenses,
    /// filters) when the acceptor is the sonority baseline.
    pub clause_counts: (usize, usize),
    pub accepted_positives: Vec<Word>,
    pub rejected_positives: Vec<(Word, RejectCause)>,
    pub accepted_negatives: Vec<Word>,
    pub rejected_negatives: Vec<(Word, RejectCause)>,
}

impl EvaluationReport {
    pub fn positive_total(&self) -> usize {
        self.accepted_positives.len() + self.rejected_positives.len()
    }

    pub fn negative_total(&self) -> usize {
        self.accepted_negatives.len() + self.rejected_negatives.len()
    }

    pub fn recall_defined(&self) -> bool {
        self.positive_total() > 0
    }

    /// Accepted positives over all positives; 1 for an empty positive
    /// set (flagged via [`recall_defined`]).
    pub fn recall(&self) -> Ratio<i64> {
        if !self.recall_defined() {
            return Ratio::from_integer(1);
        }
        Ratio::new(
            self.accepted_positives.len() as i64,
            self.positive_total() as i64,
        )
    }

    pub fn precision_defined(&self) -> bool {
        !self.accepted_positives.is_empty() || !self.accepted_negatives.is_empty()
    }

    /// Accepted positives over all accepted words; 1 when nothing is
    /// accepted (no false positives; flagged via
    /// [`precision_defined`]).
    pub fn precision(&self) -> Ratio<i64> {
        let accepted = self.accepted_positives.len() + self.accepted_negatives.len();
        if accepted == 0 {
            return Ratio::from_integer(1);
        }
        Ratio::new(self.accepted_positives.len() as i64, accepted as i64)
    }

    /// Human table in the results schema: recall, precision, clause
    /// counts.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("Recall        {}\n", percent(self.recall())));
        let precision_note = if self.precision_defined() { "" } else { "  (no accepted words; by convention)" };
        out.push_str(&format!(
            "Precision     {}{precision_note}\n",
            percent(self.precision())
        ));
        out.push_str(&format!(
            "Num. Clauses  {} + {}\n",
            self.clause_counts.0, self.clause_counts.1
        ));
        out.push_str(&format!(
            "Words         {} positive, {} negative\n",
            self.positive_total(),
            self.negative_total()
        ));
        out
    }

    /// Machine form: `key: value` lines, `#` comments, reject detail
    /// lines last.
    pub fn render_machine(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            out.push_str(&format!("# {line}\n"));
        }
        out.push_str(&format!("recall: {}\n", decimal(self.recall())));
        out.push_str(&format!("recall_exact: {}\n", fraction(self.recall())));
        out.push_str(&format!("recall_defined: {}\n", self.recall_defined()));
        out.push_str(&format!("precision: {}\n", decimal(self.precision())));
        out.push_str(&format!("precision_exact: {}\n", fraction(self.precision())));
        out.push_str(&format!(
            "precision_defined: {}\n",
            self.precision_defined()
        ));
        out.push_str(&format!("prefix_clauses: {}\n", self.clause_counts.0));
        out.push_str(&format!("suffix_clauses: {}\n", self.clause_counts.1));
        out.push_str(&format!("positive_words: {}\n", self.positive_total()));
        out.push_str(&format!("negative_words: {}\n", self.negative_total()));
        out.push_str(&format!(
            "accepted_positives: {}\n",
            self.accepted_positives.len()
        ));
        out.push_str(&format!(
            "accepted_negatives: {}\n",
            self.accepted_negatives.len()
        ));
        for (word, cause) in &self.rejected_positives {
            out.push_str(&format!("rejected_positive: {word} => {cause}\n"));
        }
        for (word, cause) in &self.rejected_negatives {
            out.push_str(&format!("rejected_negative: {word} => {cause}\n"));
        }
        out
    }
}

fn percent(r: Ratio<i64>) -> String {
    format!("{:.2}%", ratio_to_f64(r) * 100.0)
}

fn decimal(r: Ratio<i64>) -> String {
    format!("{:.4}", ratio_to_f64(r))
}

fn fraction(r: Ratio<i64>) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Scores any acceptor over labeled word sets.
pub fn evaluate_with<F>(
    mut accept: F,
    pos_words: &[Word],
    neg_words: &[Word],
    clause_counts: (usize, usize),
) -> EvaluationReport
where
    F: FnMut(&Word) -> WordVerdict,
{
    let mut report = EvaluationReport {
        clause_counts,
        accepted_positives: Vec::new(),
        rejected_positives: Vec::new(),
        accepted_negatives: Vec::new(),
        rejected_negatives: Vec::new(),
    };
    for word in pos_words {
        match accept(word) {
            WordVerdict::Accept => report.accepted_positives.push(word.clone()),
            WordVerdict::Reject(cause) => {
                report.rejected_positives.push((word.clone(), cause))
            }
        }
    }
    for word in neg_words {
        match accept(word) {
            WordVerdict::Accept => report.accepted_negatives.push(word.clone()),
            WordVerdict::Reject(cause) => {
                report.rejected_negatives.push((word.clone(), cause))
            }
        }
    }
    report
}

/// Scores a clause set: clause counts are split by predicate.
pub fn evaluate(
    theory_clauses: &[Clause],
    background: &Background,
    inventory: &Inventory,
    pos_words: &[Word],
    neg_words: &[Word],
    derivation_depth: usize,
) -> EvaluationReport {
    let program = acceptance_program(theory_clauses, background);
    let prefix_clauses = theory_clauses
        .iter()
        .filter(|c| c.head.predicate == "prefix")
        .count();
    let suffix_clauses = theory_clauses
        .iter()
        .filter(|c| c.head.predicate == "suffix")
        .count();
    evaluate_with(
        |word| word_accepted_by_program(&program, inventory, word, derivation_depth),
        pos_words,
        neg_words,
        (prefix_clauses, suffix_clauses),
    )
}
