//! Example files: one ground atom per line, `+` for positives and `-`
//! for negatives, `%` comments.
//!
//! ```text
//! % target=prefix
//! % positives instances=2 unique=2
//! + prefix(m,[],[a,:]).
//! - prefix(t,[],[i]).
//! ```
//!
//! Lines are instances: the same atom may repeat, and repeats count
//! separately during scoring.

use std::collections::HashSet;

use thiserror::Error;

use crate::logic::{parse_literal, Literal};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExamplesError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: expected target '{target}', found '{found}'")]
    MixedTarget {
        line: usize,
        target: String,
        found: String,
    },
    #[error("line {line}: example atom must be ground")]
    NonGround { line: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExampleSet {
    /// Predicate shared by every atom; empty when the set is empty.
    pub target: String,
    pub positives: Vec<Literal>,
    pub negatives: Vec<Literal>,
}

impl ExampleSet {
    pub fn new(target: impl Into<String>) -> ExampleSet {
        ExampleSet {
            target: target.into(),
            positives: Vec::new(),
            negatives: Vec::new(),
        }
    }

    pub fn unique_positives(&self) -> usize {
        self.positives.iter().collect::<HashSet<_>>().len()
    }

    pub fn unique_negatives(&self) -> usize {
        self.negatives.iter().collect::<HashSet<_>>().len()
    }

    /// Renders the file: target and count comments, caller-supplied
    /// header comments, positives, then negatives.
    pub fn render(&self, extra_header: &[String]) -> String {
        let mut out = String::new();
        if !self.target.is_empty() {
            out.push_str(&format!("% target={}\n", self.target));
        }
        for line in extra_header {
            out.push_str(&format!("% {line}\n"));
        }
        out.push_str(&format!(
            "% positives instances={} unique={}\n",
            self.positives.len(),
            self.unique_positives()
        ));
        out.push_str(&format!(
            "% negatives instances={} unique={}\n",
            self.negatives.len(),
            self.unique_negatives()
        ));
        for atom in &self.positives {
            out.push_str(&format!("+ {atom}.\n"));
        }
        for atom in &self.negatives {
            out.push_str(&format!("- {atom}.\n"));
        }
        out
    }

    pub fn parse(src: &str) -> Result<ExampleSet, ExamplesError> {
        let mut set = ExampleSet::default();
        for (lineno, raw) in src.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('%') {
                continue;
            }
            let (sign, rest) = match line.split_at(1) {
                ("+", rest) => (true, rest),
                ("-", rest) => (false, rest),
                _ => {
                    return Err(ExamplesError::Syntax {
                        line: lineno,
                        message: format!("expected '+' or '-' at start of '{line}'"),
                    })
                }
            };
            let text = rest.trim();
            let text = text.strip_suffix('.').ok_or(ExamplesError::Syntax {
                line: lineno,
                message: "missing terminating '.'".into(),
            })?;
            let atom = parse_literal(text).map_err(|e| ExamplesError::Syntax {
                line: lineno,
                message: e.to_string(),
            })?;
            if !atom.is_ground() {
                return Err(ExamplesError::NonGround { line: lineno });
            }
            if set.target.is_empty() {
                set.target = atom.predicate.clone();
            } else if atom.predicate != set.target {
                return Err(ExamplesError::MixedTarget {
                    line: lineno,
                    target: set.target.clone(),
                    found: atom.predicate.clone(),
                });
            }
            if sign {
                set.positives.push(atom);
            } else {
                set.negatives.push(atom);
            }
        }
        Ok(set)
    }
}
