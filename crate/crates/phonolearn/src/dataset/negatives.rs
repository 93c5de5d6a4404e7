//! Negative data: random template-conforming words absent from the
//! positive lexicon, balanced per affix length, and the deductive step
//! that turns each such word into one negative affix example.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::{
    affix_chain, segment, AffixExample, Direction, Polarity, Word, MAX_CODA, MAX_ONSET,
};
use crate::phonology::Inventory;

/// Spaces small enough to enumerate exactly when sampling stalls.
const EXHAUSTIVE_LIMIT: u128 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NegativeGenError {
    #[error(
        "{direction} affix length {affix_length}: quota asks {needed} more words but only {available} template words remain"
    )]
    QuotaUnsatisfiable {
        direction: Direction,
        affix_length: usize,
        needed: usize,
        available: usize,
    },
    #[error(
        "{direction} affix length {affix_length}: sampling exhausted before the quota was met"
    )]
    SamplingExhausted {
        direction: Direction,
        affix_length: usize,
    },
}

/// Balancing plan for negative words: each (side, affix length)
/// bucket receives `quota` words whose cluster on that side has
/// exactly that length, the other side being drawn freely up to the
/// pool bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeGenConfig {
    pub rng_seed: u64,
    pub quotas: BTreeMap<(Direction, usize), usize>,
    pub max_onset: usize,
    pub max_coda: usize,
}

impl NegativeGenConfig {
    /// Equal counts per length: 0..=3 on the onset side, 0..=5 on the
    /// coda side.
    pub fn balanced(per_length: usize, rng_seed: u64) -> NegativeGenConfig {
        let mut quotas = BTreeMap::new();
        for len in 0..=MAX_ONSET {
            quotas.insert((Direction::Prefix, len), per_length);
        }
        for len in 0..=MAX_CODA {
            quotas.insert((Direction::Suffix, len), per_length);
        }
        NegativeGenConfig {
            rng_seed,
            quotas,
            max_onset: MAX_ONSET,
            max_coda: MAX_CODA,
        }
    }
}

/// The nuclei available to the generator: every single vowel, plus
/// each vowel lengthened by the mark when the inventory has one.
fn nucleus_pool(inventory: &Inventory) -> Vec<Vec<String>> {
    let mark = inventory
        .vowels()
        .find(|p| p.length_mark)
        .map(|p| p.symbol.clone());
    let mut pool: Vec<Vec<String>> = Vec::new();
    for v in inventory.vowels().filter(|p| !p.length_mark) {
        pool.push(vec![v.symbol.clone()]);
    }
    if let Some(mark) = mark {
        for v in inventory.vowels().filter(|p| !p.length_mark) {
            pool.push(vec![v.symbol.clone(), mark.clone()]);
        }
    }
    pool
}

pub fn generate_negative_words(
    cfg: &NegativeGenConfig,
    inventory: &Inventory,
    positive_words: &HashSet<Word>,
) -> Result<Vec<Word>, NegativeGenError> {
    let consonants: Vec<String> = inventory.consonants().map(|p| p.symbol.clone()).collect();
    let nuclei = nucleus_pool(inventory);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut words: Vec<Word> = Vec::new();
    let mut seen: HashSet<Word> = HashSet::new();

    for (&(direction, affix_length), &quota) in &cfg.quotas {
        let other_max = match direction {
            Direction::Prefix => cfg.max_coda,
            Direction::Suffix => cfg.max_onset,
        };
        let mut produced = 0;
        let attempt_cap = quota * 200 + 100;
        let mut attempts = 0;
        while produced < quota && attempts < attempt_cap {
            attempts += 1;
            let fixed = sample_cluster(&mut rng, &consonants, affix_length);
            let other_len = rng.gen_range(0..=other_max);
            let other = sample_cluster(&mut rng, &consonants, other_len);
            let nucleus = nuclei[rng.gen_range(0..nuclei.len())].clone();
            let word = assemble(direction, &fixed, &nucleus, &other);
            if positive_words.contains(&word) || seen.contains(&word) {
                continue;
            }
            seen.insert(word.clone());
            words.push(word);
            produced += 1;
        }
        if produced < quota {
            fill_exhaustively(
                direction,
                affix_length,
                quota - produced,
                other_max,
                &consonants,
                &nuclei,
                positive_words,
                &mut seen,
                &mut words,
                &mut rng,
            )?;
        }
    }
    Ok(words)
}

fn sample_cluster(rng: &mut ChaCha8Rng, consonants: &[String], len: usize) -> Vec<String> {
    (0..len)
        .map(|_| consonants[rng.gen_range(0..consonants.len())].clone())
        .collect()
}

fn assemble(direction: Direction, fixed: &[String], nucleus: &[String], other: &[String]) -> Word {
    let (onset, coda) = match direction {
        Direction::Prefix => (fixed, other),
        Direction::Suffix => (other, fixed),
    };
    let mut symbols = onset.to_vec();
    symbols.extend(nucleus.iter().cloned());
    symbols.extend(coda.iter().cloned());
    Word(symbols)
}

/// When rejection sampling stalls, decide the bucket exactly: if the
/// whole space is small, enumerate it; otherwise report exhaustion.
#[allow(clippy::too_many_arguments)]
fn fill_exhaustively(
    direction: Direction,
    affix_length: usize,
    needed: usize,
    other_max: usize,
    consonants: &[String],
    nuclei: &[Vec<String>],
    positive_words: &HashSet<Word>,
    seen: &mut HashSet<Word>,
    words: &mut Vec<Word>,
    rng: &mut ChaCha8Rng,
) -> Result<(), NegativeGenError> {
    let nc = consonants.len() as u128;
    let other_space: u128 = (0..=other_max).map(|c| nc.saturating_pow(c as u32)).sum();
    let space = nc
        .saturating_pow(affix_length as u32)
        .saturating_mul(nuclei.len() as u128)
        .saturating_mul(other_space);
    if space > EXHAUSTIVE_LIMIT {
        return Err(NegativeGenError::SamplingExhausted {
            direction,
            affix_length,
        });
    }
    let mut candidates: Vec<Word> = Vec::new();
    for fixed in clusters(consonants, affix_length) {
        for nucleus in nuclei {
            for other_len in 0..=other_max {
                for other in clusters(consonants, other_len) {
                    let word = assemble(direction, &fixed, nucleus, &other);
                    if !positive_words.contains(&word) && !seen.contains(&word) {
                        candidates.push(word);
                    }
                }
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    if candidates.len() < needed {
        return Err(NegativeGenError::QuotaUnsatisfiable {
            direction,
            affix_length,
            needed,
            available: candidates.len(),
        });
    }
    candidates.shuffle(rng);
    for word in candidates.into_iter().take(needed) {
        seen.insert(word.clone());
        words.push(word);
    }
    Ok(())
}

/// All consonant sequences of exactly `len`, lexicographic in symbol
/// order.
fn clusters(consonants: &[String], len: usize) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * consonants.len());
        for prefix in &out {
            for c in consonants {
                let mut cluster = prefix.clone();
                cluster.push(c.clone());
                next.push(cluster);
            }
        }
        out = next;
    }
    out
}

/// Stable per-word RNG stream: FNV-1a over the master seed and the
/// word's symbols, independent of processing order.
fn word_stream_seed(rng_seed: u64, word: &Word) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |byte: u8| {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    };
    for byte in rng_seed.to_le_bytes() {
        eat(byte);
    }
    for symbol in word.symbols() {
        for byte in symbol.as_bytes() {
            eat(*byte);
        }
        eat(0x1f);
    }
    hash
}

/// Deduces one negative affix example per negative word: walk each
/// side's affixing chain outward from the nucleus and take the first
/// event the positives do not license; when both sides fail, pick a
/// side at random from the word's own stream. Words the positives
/// fully license cannot be disproved and are skipped with a warning.
pub fn derive_negative_examples(
    neg_words: &[Word],
    positives: &HashSet<AffixExample>,
    inventory: &Inventory,
    rng_seed: u64,
) -> (Vec<AffixExample>, Vec<String>) {
    let mut emitted = Vec::new();
    let mut warnings = Vec::new();
    for word in neg_words {
        let sw = match segment(word, inventory) {
            Ok(sw) => sw,
            Err(e) => {
                warnings.push(format!(
                    "negative word {} does not fit the template ({e}); skipped",
                    word.compact()
                ));
                continue;
            }
        };
        let prefix_chain = affix_chain(&sw, Direction::Prefix);
        let suffix_chain = affix_chain(&sw, Direction::Suffix);
        let first_fail =
            |chain: &[AffixExample]| chain.iter().position(|atom| !positives.contains(atom));
        let chosen = match (first_fail(&prefix_chain), first_fail(&suffix_chain)) {
            (None, None) => {
                warnings.push(format!(
                    "negative word {} is fully licensed by the positives; skipped",
                    word.compact()
                ));
                continue;
            }
            (Some(i), None) => prefix_chain[i].clone(),
            (None, Some(j)) => suffix_chain[j].clone(),
            (Some(i), Some(j)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(word_stream_seed(rng_seed, word));
                if rng.gen_range(0..2) == 0 {
                    prefix_chain[i].clone()
                } else {
                    suffix_chain[j].clone()
                }
            }
        };
        emitted.push(chosen.with_polarity(Polarity::Negative));
    }
    (emitted, warnings)
}
