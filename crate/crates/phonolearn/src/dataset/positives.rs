//! Positive affix examples: a segmented word is replayed as a series
//! of affixing events, innermost consonant first, closed by the
//! boundary `^` on each side.

use crate::dataset::{AffixExample, Direction, Polarity, SegmentError, SegmentedWord, Word};
use crate::phonology::Inventory;

/// The affixing chain on one side, innermost first, ending with the
/// boundary event. Contexts list the already-affixed consonants most
/// recently affixed first; the suffix side sees the nucleus reversed.
pub fn affix_chain(sw: &SegmentedWord, direction: Direction) -> Vec<AffixExample> {
    let (consonants, nucleus_context): (Vec<&String>, Vec<String>) = match direction {
        Direction::Prefix => (sw.onset.iter().rev().collect(), sw.nucleus.clone()),
        Direction::Suffix => (
            sw.coda.iter().collect(),
            sw.nucleus.iter().rev().cloned().collect(),
        ),
    };
    let mut chain = Vec::with_capacity(consonants.len() + 1);
    let mut context: Vec<String> = Vec::new();
    for phone in consonants {
        chain.push(AffixExample {
            direction,
            phone: phone.clone(),
            context: context.clone(),
            nucleus_context: nucleus_context.clone(),
            polarity: Polarity::Positive,
        });
        context.insert(0, phone.clone());
    }
    chain.push(AffixExample {
        direction,
        phone: "^".into(),
        context,
        nucleus_context,
        polarity: Polarity::Positive,
    });
    chain
}

/// All positives for one word: |onset|+1 prefix atoms then |coda|+1
/// suffix atoms.
pub fn positives_from_word(sw: &SegmentedWord) -> Vec<AffixExample> {
    let mut atoms = affix_chain(sw, Direction::Prefix);
    atoms.extend(affix_chain(sw, Direction::Suffix));
    atoms
}

/// A lexicon entry that does not fit the template, with its reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedWord {
    pub word: Word,
    pub reason: SegmentError,
}

/// Expands a lexicon into positive instances. Words outside the
/// template are excluded and reported, not fatal.
pub fn generate_positives(
    lexicon: &[Word],
    inventory: &Inventory,
) -> (Vec<AffixExample>, Vec<RejectedWord>) {
    let mut atoms = Vec::new();
    let mut rejected = Vec::new();
    for word in lexicon {
        match crate::dataset::segment(word, inventory) {
            Ok(sw) => atoms.extend(positives_from_word(&sw)),
            Err(reason) => rejected.push(RejectedWord {
                word: word.clone(),
                reason,
            }),
        }
    }
    (atoms, rejected)
}
