//! Lexicon handling and example generation: segmenting words under
//! the C3-V-C5 template, expanding them into positive affix atoms, and
//! deriving balanced negatives.

pub mod negatives;
pub mod positives;
pub mod segment;

pub use negatives::{
    derive_negative_examples, generate_negative_words, NegativeGenConfig, NegativeGenError,
};
pub use positives::{affix_chain, generate_positives, positives_from_word, RejectedWord};
pub use segment::{segment, SegmentError, SegmentedWord, MAX_CODA, MAX_NUCLEUS, MAX_ONSET};

use std::fmt;
use std::str::FromStr;

use crate::logic::{Literal, Term};

/// A transcription: ordered phoneme symbols, no boundary marks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<String>);

impl Word {
    pub fn new(symbols: impl IntoIterator<Item = impl Into<String>>) -> Word {
        Word(symbols.into_iter().map(Into::into).collect())
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    /// Compact form for messages and report rows, e.g. `/ma:kt/`.
    pub fn compact(&self) -> String {
        format!("/{}/", self.0.join(""))
    }
}

impl fmt::Display for Word {
    /// Lexicon-file form: symbols separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(" "))
    }
}

/// Parses a lexicon: one word per line, symbols separated by spaces,
/// `#` comments. Unknown symbols surface later, at segmentation.
pub fn parse_lexicon(src: &str) -> Vec<Word> {
    let mut words = Vec::new();
    for raw in src.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        words.push(Word(line.split_whitespace().map(String::from).collect()));
    }
    words
}

pub fn render_lexicon(words: &[Word], header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        out.push_str(&format!("# {line}\n"));
    }
    for w in words {
        out.push_str(&format!("{w}\n"));
    }
    out
}

/// Which side of the nucleus an affixing extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Prefix,
    Suffix,
}

impl Direction {
    pub fn predicate(self) -> &'static str {
        match self {
            Direction::Prefix => "prefix",
            Direction::Suffix => "suffix",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Direction, String> {
        match s {
            "prefix" => Ok(Direction::Prefix),
            "suffix" => Ok(Direction::Suffix),
            other => Err(format!("unknown direction '{other}' (expected prefix or suffix)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

/// One affixing event: `phone` is licensed against the already-affixed
/// consonants (most recently affixed first) and the nucleus (reversed
/// for the suffix direction). The boundary `^` marks that no further
/// consonant follows on that side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffixExample {
    pub direction: Direction,
    pub phone: String,
    pub context: Vec<String>,
    pub nucleus_context: Vec<String>,
    pub polarity: Polarity,
}

impl AffixExample {
    pub fn to_literal(&self) -> Literal {
        Literal::new(
            self.direction.predicate(),
            vec![
                Term::constant(&self.phone),
                Term::list(self.context.iter().map(Term::constant).collect()),
                Term::list(self.nucleus_context.iter().map(Term::constant).collect()),
            ],
        )
    }

    pub fn from_literal(lit: &Literal, polarity: Polarity) -> Option<AffixExample> {
        let direction = lit.predicate.parse::<Direction>().ok()?;
        if lit.args.len() != 3 {
            return None;
        }
        let phone = match &lit.args[0] {
            Term::Const(c) => c.clone(),
            _ => return None,
        };
        let atom_list = |t: &Term| -> Option<Vec<String>> {
            t.as_list()?
                .into_iter()
                .map(|item| match item {
                    Term::Const(c) => Some(c.clone()),
                    _ => None,
                })
                .collect()
        };
        Some(AffixExample {
            direction,
            phone,
            context: atom_list(&lit.args[1])?,
            nucleus_context: atom_list(&lit.args[2])?,
            polarity,
        })
    }

    pub fn with_polarity(&self, polarity: Polarity) -> AffixExample {
        AffixExample {
            polarity,
            ..self.clone()
        }
    }
}

impl fmt::Display for AffixExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}
