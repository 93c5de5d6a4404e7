//! Breaking a transcription into onset, nucleus, and coda under the
//! C3-V-C5 template.

use thiserror::Error;

use crate::dataset::Word;
use crate::phonology::{Inventory, PhonemeClass};

pub const MAX_ONSET: usize = 3;
pub const MAX_NUCLEUS: usize = 2;
pub const MAX_CODA: usize = 5;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SegmentError {
    #[error("unknown symbol '{symbol}'")]
    UnknownSymbol { symbol: String },
    #[error("boundary mark '^' may not appear inside a word")]
    BoundarySymbol,
    #[error("no vowel")]
    NoVowel,
    #[error("more than one vowel run")]
    MultipleNuclei,
    #[error("nucleus of length {len} exceeds {MAX_NUCLEUS} symbols")]
    NucleusTooLong { len: usize },
    #[error("nucleus starts with the length mark")]
    MarkLeadsNucleus,
    #[error("onset of length {len} exceeds {MAX_ONSET} consonants")]
    OnsetTooLong { len: usize },
    #[error("coda of length {len} exceeds {MAX_CODA} consonants")]
    CodaTooLong { len: usize },
}

/// A word split at its unique vowel run. Concatenating the three
/// parts reproduces the word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SegmentedWord {
    pub onset: Vec<String>,
    pub nucleus: Vec<String>,
    pub coda: Vec<String>,
}

impl SegmentedWord {
    pub fn word(&self) -> Word {
        let mut symbols = self.onset.clone();
        symbols.extend(self.nucleus.iter().cloned());
        symbols.extend(self.coda.iter().cloned());
        Word(symbols)
    }
}

pub fn segment(word: &Word, inventory: &Inventory) -> Result<SegmentedWord, SegmentError> {
    let mut vowel_flags = Vec::with_capacity(word.symbols().len());
    for symbol in word.symbols() {
        let phoneme = inventory
            .get(symbol)
            .ok_or_else(|| SegmentError::UnknownSymbol {
                symbol: symbol.clone(),
            })?;
        match phoneme.category {
            PhonemeClass::Boundary => return Err(SegmentError::BoundarySymbol),
            PhonemeClass::Vowel => vowel_flags.push(true),
            PhonemeClass::Consonant => vowel_flags.push(false),
        }
    }

    let Some(start) = vowel_flags.iter().position(|&v| v) else {
        return Err(SegmentError::NoVowel);
    };
    let end = start
        + vowel_flags[start..]
            .iter()
            .position(|&v| !v)
            .unwrap_or(vowel_flags.len() - start);
    if vowel_flags[end..].iter().any(|&v| v) {
        return Err(SegmentError::MultipleNuclei);
    }

    let nucleus_len = end - start;
    if nucleus_len > MAX_NUCLEUS {
        return Err(SegmentError::NucleusTooLong { len: nucleus_len });
    }
    if inventory.get(&word.symbols()[start]).unwrap().length_mark {
        return Err(SegmentError::MarkLeadsNucleus);
    }
    if start > MAX_ONSET {
        return Err(SegmentError::OnsetTooLong { len: start });
    }
    let coda_len = word.symbols().len() - end;
    if coda_len > MAX_CODA {
        return Err(SegmentError::CodaTooLong { len: coda_len });
    }

    Ok(SegmentedWord {
        onset: word.symbols()[..start].to_vec(),
        nucleus: word.symbols()[start..end].to_vec(),
        coda: word.symbols()[end..].to_vec(),
    })
}
