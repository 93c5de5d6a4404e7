//! The covering loop, and the theory file format it produces.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::logic::{parse_clause, parse_literal, Clause, Literal, Program, TextError};

use super::eval::{parse_fraction, EvalFn};
use super::modes::{ModeDeclaration, ModeKind};
use super::reduce::reduce;
use super::saturate::saturate;
use super::{SearchParams, SeedOrder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseProvenance {
    pub seed: Literal,
    pub p: usize,
    pub n: usize,
    pub score: Ratio<i64>,
    /// True when the clause is a memorized exception: the seed's own
    /// ground atom, added because no generalization met min_accuracy.
    pub memorized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub target: String,
    pub clauses: Vec<Clause>,
    /// Parallel to `clauses`; empty when unknown (e.g. parsed from a
    /// file without provenance comments).
    pub provenance: Vec<ClauseProvenance>,
}

#[derive(Debug, Error)]
pub enum TheoryFileError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error("line {line}: clause head {found} does not match theory target {target}")]
    MixedTarget {
        line: usize,
        target: String,
        found: String,
    },
    #[error("theory file has no clauses and no '% theory target=' header")]
    MissingTarget,
    #[error("line {line}: bad provenance comment ({message})")]
    BadProvenance { line: usize, message: String },
}

impl Theory {
    pub fn new(target: impl Into<String>) -> Theory {
        Theory {
            target: target.into(),
            clauses: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Renders the theory file: a `% theory target=...` header, caller
    /// header lines (seeds and the like), then one clause per line with
    /// its provenance comment.
    pub fn render(&self, extra_header: &[String]) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "% theory target={} clauses={}\n",
            self.target,
            self.clauses.len()
        ));
        for line in extra_header {
            out.push_str(&format!("% {line}\n"));
        }
        let with_provenance = self.provenance.len() == self.clauses.len();
        for (i, clause) in self.clauses.iter().enumerate() {
            out.push_str(&clause.to_string());
            if with_provenance {
                let p = &self.provenance[i];
                out.push_str(&format!(
                    " % seed={} P={} N={} score={}",
                    p.seed, p.p, p.n, p.score
                ));
                if p.memorized {
                    out.push_str(" memorized");
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(src: &str) -> Result<Theory, TheoryFileError> {
        let mut target: Option<String> = None;
        let mut clauses = Vec::new();
        let mut provenance: Vec<Option<ClauseProvenance>> = Vec::new();
        for (lineno, raw) in src.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim_end_matches('\r');
            let (code, comment) = split_comment(line);
            let code = code.trim();
            let comment = comment.map(str::trim);
            if code.is_empty() {
                if let Some(rest) = comment.and_then(|c| c.strip_prefix("theory ")) {
                    for token in rest.split_whitespace() {
                        if let Some(t) = token.strip_prefix("target=") {
                            target = Some(t.to_string());
                        }
                    }
                }
                continue;
            }
            let clause = parse_clause(code).map_err(|e| TextError {
                line: lineno,
                message: e.message,
            })?;
            let head_pred = clause.head.predicate.clone();
            match &target {
                None => target = Some(head_pred),
                Some(t) if *t != head_pred => {
                    return Err(TheoryFileError::MixedTarget {
                        line: lineno,
                        target: t.clone(),
                        found: head_pred,
                    });
                }
                Some(_) => {}
            }
            provenance.push(match comment {
                Some(c) => parse_provenance(c, lineno)?,
                None => None,
            });
            clauses.push(clause);
        }
        let target = target.ok_or(TheoryFileError::MissingTarget)?;
        let provenance = if provenance.iter().all(|p| p.is_some()) {
            provenance.into_iter().flatten().collect()
        } else {
            Vec::new()
        };
        Ok(Theory {
            target,
            clauses,
            provenance,
        })
    }
}

/// Splits a line at the first `%` outside single quotes.
fn split_comment(line: &str) -> (&str, Option<&str>) {
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '\'' => in_quote = !in_quote,
            '%' if !in_quote => return (&line[..i], Some(&line[i + 1..])),
            _ => {}
        }
    }
    (line, None)
}

fn parse_provenance(comment: &str, line: usize) -> Result<Option<ClauseProvenance>, TheoryFileError> {
    let bad = |message: String| TheoryFileError::BadProvenance { line, message };
    let mut seed = None;
    let mut p = None;
    let mut n = None;
    let mut score = None;
    let mut memorized = false;
    for token in comment.split_whitespace() {
        if let Some(v) = token.strip_prefix("seed=") {
            seed = Some(parse_literal(v).map_err(|e| bad(e.message))?);
        } else if let Some(v) = token.strip_prefix("P=") {
            p = Some(v.parse::<usize>().map_err(|_| bad(format!("bad P '{v}'")))?);
        } else if let Some(v) = token.strip_prefix("N=") {
            n = Some(v.parse::<usize>().map_err(|_| bad(format!("bad N '{v}'")))?);
        } else if let Some(v) = token.strip_prefix("score=") {
            score = Some(parse_fraction(v).map_err(bad)?);
        } else if token == "memorized" {
            memorized = true;
        }
    }
    Ok(match (seed, p, n, score) {
        (Some(seed), Some(p), Some(n), Some(score)) => Some(ClauseProvenance {
            seed,
            p,
            n,
            score,
            memorized,
        }),
        _ => None,
    })
}

#[derive(Debug)]
pub struct LearnResult {
    pub theory: Theory,
    pub warnings: Vec<String>,
}

/// Greedy covering: seed, saturate, reduce, remove covered, repeat until
/// every positive is covered. Seeds whose reduction finds no acceptable
/// clause are memorized as ground unit clauses, so the loop always
/// terminates within one iteration per positive and ends at 100% cover.
pub fn learn(
    positives: &[Literal],
    negatives: &[Literal],
    background: &Program,
    modes: &[ModeDeclaration],
    evalfn: EvalFn,
    params: &SearchParams,
) -> LearnResult {
    let target = positives
        .first()
        .map(|l| l.predicate.clone())
        .or_else(|| {
            modes
                .iter()
                .find(|m| m.kind == ModeKind::Head)
                .map(|m| m.predicate.clone())
        })
        .unwrap_or_default();
    let mut theory = Theory::new(target);
    let mut warnings = Vec::new();

    let mut order: Vec<usize> = (0..positives.len()).collect();
    if let SeedOrder::Shuffled(seed) = params.seed_order {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
    }
    let mut covered = vec![false; positives.len()];

    let memorize = |seed_idx: usize, covered: &mut Vec<bool>, theory: &mut Theory| {
        let seed = &positives[seed_idx];
        let mut p = 0;
        for (i, lit) in positives.iter().enumerate() {
            if !covered[i] && lit == seed {
                covered[i] = true;
                p += 1;
            }
        }
        let n = negatives.iter().filter(|l| *l == seed).count();
        theory.clauses.push(Clause::fact(seed.clone()));
        theory.provenance.push(ClauseProvenance {
            seed: seed.clone(),
            p,
            n,
            score: evalfn.score(p, n),
            memorized: true,
        });
    };

    loop {
        let Some(&seed_idx) = order.iter().find(|&&i| !covered[i]) else {
            break;
        };
        let seed = &positives[seed_idx];
        match saturate(seed, background, modes, params) {
            Err(err) => {
                warnings.push(format!("seed skipped and memorized: {err}"));
                memorize(seed_idx, &mut covered, &mut theory);
            }
            Ok(bottom) => {
                let remaining: Vec<usize> = (0..positives.len()).filter(|&i| !covered[i]).collect();
                let remaining_lits: Vec<Literal> =
                    remaining.iter().map(|&i| positives[i].clone()).collect();
                match reduce(&bottom, &remaining_lits, negatives, background, evalfn, params) {
                    Ok(sc) => {
                        for &local in &sc.covered_positives {
                            covered[remaining[local]] = true;
                        }
                        theory.clauses.push(sc.clause);
                        theory.provenance.push(ClauseProvenance {
                            seed: seed.clone(),
                            p: sc.p,
                            n: sc.n,
                            score: sc.score,
                            memorized: false,
                        });
                    }
                    Err(_) => memorize(seed_idx, &mut covered, &mut theory),
                }
            }
        }
    }
    LearnResult { theory, warnings }
}
