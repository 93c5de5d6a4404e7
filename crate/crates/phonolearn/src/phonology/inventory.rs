//! Phoneme inventory: the segment space behind every feature system.
//!
//! File format, one phoneme per line, `#` comments:
//!
//! ```text
//! p class=consonant manner=plosive place=bilabial voiced=minus sonority=1
//! a class=vowel place=centre manner=open length=short round=minus sonority=4
//! ^ class=boundary
//! ```

use std::collections::HashMap;

use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InventoryError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: phoneme '{symbol}' declared twice")]
    Duplicate { line: usize, symbol: String },
    #[error("phoneme '{symbol}' is missing required feature '{feature}'")]
    MissingFeature { symbol: String, feature: String },
    #[error("phoneme '{symbol}': {message}")]
    BadFeature { symbol: String, message: String },
    #[error("inventory does not declare the boundary phoneme '^'")]
    MissingBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhonemeClass {
    Consonant,
    Vowel,
    Boundary,
}

pub const CONSONANT_MANNERS: [&str; 6] =
    ["plosive", "nasal", "lateral", "trill", "fricative", "approximant"];
pub const CONSONANT_PLACES: [&str; 6] = [
    "bilabial",
    "alveolar",
    "velar",
    "labiodental",
    "postalveolar",
    "palatal",
];
pub const VOWEL_MANNERS: [&str; 4] = ["open", "open_mid", "closed_mid", "closed"];
pub const VOWEL_PLACES: [&str; 3] = ["front", "centre", "back"];
pub const BINARY: [&str; 2] = ["plus", "minus"];

/// The seven sonority levels, as (canonical text, exact value).
pub const SONORITY_LEVELS: [(&str, (i64, i64)); 7] = [
    ("1", (1, 1)),
    ("2", (2, 1)),
    ("2.25", (9, 4)),
    ("2.5", (5, 2)),
    ("2.75", (11, 4)),
    ("3", (3, 1)),
    ("4", (4, 1)),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phoneme {
    pub symbol: String,
    pub category: PhonemeClass,
    pub manner: Option<String>,
    pub place: Option<String>,
    pub voiced: Option<String>,
    pub length: Option<String>,
    pub round: Option<String>,
    pub sonority: Option<Ratio<i64>>,
    /// Semivowel flag (j, w): sonority level 3 and the derived Glide
    /// feature.
    pub glide: bool,
    /// The reduced vowel: carries only the Schwa feature in the
    /// feature-class system.
    pub schwa: bool,
    /// The long-vowel mark `:`. Occupies a nucleus slot but cannot
    /// start one, and has no feature-class specification.
    pub length_mark: bool,
    /// Laryngeal Aspiration value; separates h from everything else.
    pub aspiration: String,
}

impl Phoneme {
    pub fn is_consonant(&self) -> bool {
        self.category == PhonemeClass::Consonant
    }

    pub fn is_vowel(&self) -> bool {
        self.category == PhonemeClass::Vowel
    }

    /// Canonical text of the sonority value, e.g. "2.25".
    pub fn sonority_symbol(&self) -> Option<&'static str> {
        let sonority = self.sonority?;
        SONORITY_LEVELS
            .iter()
            .find(|(_, (n, d))| Ratio::new(*n, *d) == sonority)
            .map(|(text, _)| *text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inventory {
    phonemes: Vec<Phoneme>,
    by_symbol: HashMap<String, usize>,
}

impl Inventory {
    pub fn parse(src: &str) -> Result<Inventory, InventoryError> {
        let mut phonemes: Vec<Phoneme> = Vec::new();
        let mut by_symbol = HashMap::new();
        for (lineno, raw) in src.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let symbol = tokens.next().unwrap().to_string();
            if by_symbol.contains_key(&symbol) {
                return Err(InventoryError::Duplicate {
                    line: lineno,
                    symbol,
                });
            }
            let mut fields: HashMap<&str, &str> = HashMap::new();
            for token in tokens {
                let Some((key, value)) = token.split_once('=') else {
                    return Err(InventoryError::Syntax {
                        line: lineno,
                        message: format!("expected key=value, found '{token}'"),
                    });
                };
                if fields.insert(key, value).is_some() {
                    return Err(InventoryError::Syntax {
                        line: lineno,
                        message: format!("key '{key}' given twice"),
                    });
                }
            }
            let phoneme = build_phoneme(symbol, &fields)?;
            by_symbol.insert(phoneme.symbol.clone(), phonemes.len());
            phonemes.push(phoneme);
        }
        if !by_symbol.contains_key("^") {
            return Err(InventoryError::MissingBoundary);
        }
        Ok(Inventory {
            phonemes,
            by_symbol,
        })
    }

    /// The bundled Dutch inventory.
    pub fn bundled_dutch() -> Inventory {
        Inventory::parse(include_str!("../../data/dutch.inventory"))
            .expect("bundled inventory must validate")
    }

    pub fn get(&self, symbol: &str) -> Option<&Phoneme> {
        self.by_symbol.get(symbol).map(|&i| &self.phonemes[i])
    }

    /// All phonemes in file order.
    pub fn iter(&self) -> impl Iterator<Item = &Phoneme> {
        self.phonemes.iter()
    }

    pub fn consonants(&self) -> impl Iterator<Item = &Phoneme> {
        self.phonemes.iter().filter(|p| p.is_consonant())
    }

    pub fn vowels(&self) -> impl Iterator<Item = &Phoneme> {
        self.phonemes.iter().filter(|p| p.is_vowel())
    }

    pub fn len(&self) -> usize {
        self.phonemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phonemes.is_empty()
    }
}

fn build_phoneme(
    symbol: String,
    fields: &HashMap<&str, &str>,
) -> Result<Phoneme, InventoryError> {
    let bad = |message: String| InventoryError::BadFeature {
        symbol: symbol.clone(),
        message,
    };
    let missing = |feature: &str| InventoryError::MissingFeature {
        symbol: symbol.clone(),
        feature: feature.to_string(),
    };

    let known_keys = [
        "class",
        "manner",
        "place",
        "voiced",
        "length",
        "round",
        "sonority",
        "glide",
        "schwa",
        "length_mark",
        "aspiration",
    ];
    for key in fields.keys() {
        if !known_keys.contains(key) {
            return Err(bad(format!("unknown key '{key}'")));
        }
    }

    let category = match fields.get("class").copied() {
        Some("consonant") => PhonemeClass::Consonant,
        Some("vowel") => PhonemeClass::Vowel,
        Some("boundary") => PhonemeClass::Boundary,
        Some(other) => return Err(bad(format!("unknown class '{other}'"))),
        None => return Err(missing("class")),
    };

    let value_in = |key: &str, allowed: &[&str], required: bool| -> Result<Option<String>, InventoryError> {
        match fields.get(key).copied() {
            Some(v) if allowed.contains(&v) => Ok(Some(v.to_string())),
            Some(v) => Err(bad(format!(
                "{key}={v} is not one of {}",
                allowed.join("|")
            ))),
            None if required => Err(missing(key)),
            None => Ok(None),
        }
    };
    let flag = |key: &str| -> Result<bool, InventoryError> {
        match fields.get(key).copied() {
            Some("true") => Ok(true),
            Some(other) => Err(bad(format!("{key}={other} should be {key}=true"))),
            None => Ok(false),
        }
    };
    let forbid = |key: &str| -> Result<(), InventoryError> {
        if fields.contains_key(key) {
            Err(bad(format!("{key} is not valid for this class")))
        } else {
            Ok(())
        }
    };

    let glide = flag("glide")?;
    let schwa = flag("schwa")?;
    let length_mark = flag("length_mark")?;

    let sonority = match fields.get("sonority").copied() {
        Some(text) => {
            let level = SONORITY_LEVELS
                .iter()
                .find(|(t, _)| *t == text)
                .map(|(_, (n, d))| Ratio::new(*n, *d));
            match level {
                Some(v) => Some(v),
                None => {
                    return Err(bad(format!(
                        "sonority={text} is not one of the seven scale levels"
                    )))
                }
            }
        }
        None => None,
    };

    let phoneme = match category {
        PhonemeClass::Consonant => {
            forbid("length")?;
            forbid("round")?;
            let manner = value_in("manner", &CONSONANT_MANNERS, true)?;
            let place = value_in("place", &CONSONANT_PLACES, true)?;
            let voiced = value_in("voiced", &BINARY, true)?;
            let sonority = sonority.ok_or_else(|| missing("sonority"))?;
            check_consonant_sonority(&symbol, manner.as_deref().unwrap(), place.as_deref().unwrap(), glide, sonority)
                .map_err(bad)?;
            Phoneme {
                symbol: symbol.clone(),
                category,
                manner,
                place,
                voiced,
                length: None,
                round: None,
                sonority: Some(sonority),
                glide,
                schwa,
                length_mark,
                aspiration: value_in("aspiration", &BINARY, false)?.unwrap_or_else(|| "minus".into()),
            }
        }
        PhonemeClass::Vowel => {
            forbid("voiced")?;
            forbid("aspiration")?;
            let sonority = sonority.ok_or_else(|| missing("sonority"))?;
            if sonority != Ratio::from_integer(4) {
                return Err(bad("vowels carry sonority 4".into()));
            }
            Phoneme {
                symbol: symbol.clone(),
                category,
                manner: value_in("manner", &VOWEL_MANNERS, true)?,
                place: value_in("place", &VOWEL_PLACES, true)?,
                voiced: None,
                length: value_in("length", &["short", "long"], true)?,
                round: value_in("round", &BINARY, true)?,
                sonority: Some(sonority),
                glide,
                schwa,
                length_mark,
                aspiration: "minus".into(),
            }
        }
        PhonemeClass::Boundary => {
            if symbol != "^" {
                return Err(bad("only '^' may be declared as the boundary".into()));
            }
            for key in ["manner", "place", "voiced", "length", "round", "sonority", "aspiration"] {
                forbid(key)?;
            }
            Phoneme {
                symbol: symbol.clone(),
                category,
                manner: None,
                place: None,
                voiced: None,
                length: None,
                round: None,
                sonority: None,
                glide: false,
                schwa: false,
                length_mark: false,
                aspiration: "minus".into(),
            }
        }
    };
    Ok(phoneme)
}

/// The scale is class-derived (obstruents 1, nasals 2 or 2.25, l 2.5,
/// r 2.75, glides 3, vowels 4); explicit file values must agree.
fn check_consonant_sonority(
    _symbol: &str,
    manner: &str,
    place: &str,
    glide: bool,
    sonority: Ratio<i64>,
) -> Result<(), String> {
    let expected = match manner {
        "plosive" | "fricative" => Ratio::from_integer(1),
        "nasal" if place == "bilabial" => Ratio::from_integer(2),
        "nasal" => Ratio::new(9, 4),
        "lateral" => Ratio::new(5, 2),
        "trill" => Ratio::new(11, 4),
        "approximant" => Ratio::from_integer(3),
        _ => unreachable!("manner is validated before sonority"),
    };
    if glide && manner != "approximant" {
        return Err("glides must have manner=approximant".into());
    }
    if sonority != expected {
        return Err(format!(
            "sonority disagrees with the scale (expected {}/{} for this manner)",
            expected.numer(),
            expected.denom()
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_inventory_loads() {
        let inv = Inventory::bundled_dutch();
        assert!(inv.get("^").is_some());
        assert!(inv.get("p").unwrap().is_consonant());
        assert!(inv.get("a").unwrap().is_vowel());
        assert!(inv.get(":").unwrap().length_mark);
        assert!(inv.get("@").unwrap().schwa);
        assert!(inv.get("j").unwrap().glide);
        assert!(inv.get("w").unwrap().glide);
        assert_eq!(inv.get("h").unwrap().aspiration, "plus");
    }

    #[test]
    fn bundled_scale_matches_the_seven_levels() {
        let inv = Inventory::bundled_dutch();
        assert_eq!(inv.get("m").unwrap().sonority, Some(Ratio::from_integer(2)));
        assert_eq!(inv.get("n").unwrap().sonority, Some(Ratio::new(9, 4)));
        assert_eq!(inv.get("l").unwrap().sonority, Some(Ratio::new(5, 2)));
        assert_eq!(inv.get("r").unwrap().sonority, Some(Ratio::new(11, 4)));
        assert_eq!(inv.get("n").unwrap().sonority_symbol(), Some("2.25"));
        for p in inv.iter() {
            match p.category {
                PhonemeClass::Boundary => assert_eq!(p.sonority, None),
                PhonemeClass::Vowel => assert_eq!(p.sonority, Some(Ratio::from_integer(4))),
                PhonemeClass::Consonant => {
                    let v = p.sonority.unwrap();
                    assert!(SONORITY_LEVELS
                        .iter()
                        .any(|(_, (n, d))| Ratio::new(*n, *d) == v));
                    if p.glide {
                        assert_eq!(v, Ratio::from_integer(3));
                    }
                    if matches!(p.manner.as_deref(), Some("plosive") | Some("fricative")) {
                        assert_eq!(v, Ratio::from_integer(1));
                    }
                }
            }
        }
    }

    #[test]
    fn bundled_ipa_dimensions_are_total() {
        let inv = Inventory::bundled_dutch();
        for c in inv.consonants() {
            assert!(CONSONANT_MANNERS.contains(&c.manner.as_deref().unwrap()));
            assert!(CONSONANT_PLACES.contains(&c.place.as_deref().unwrap()));
            assert!(BINARY.contains(&c.voiced.as_deref().unwrap()));
        }
        for v in inv.vowels() {
            assert!(VOWEL_MANNERS.contains(&v.manner.as_deref().unwrap()));
            assert!(VOWEL_PLACES.contains(&v.place.as_deref().unwrap()));
            assert!(BINARY.contains(&v.round.as_deref().unwrap()));
            assert!(["short", "long"].contains(&v.length.as_deref().unwrap()));
        }
    }

    #[test]
    fn rejects_duplicate_symbols() {
        let err = Inventory::parse(
            "p class=consonant manner=plosive place=bilabial voiced=minus sonority=1\n\
             p class=consonant manner=plosive place=bilabial voiced=minus sonority=1\n\
             ^ class=boundary\n",
        )
        .unwrap_err();
        assert!(matches!(err, InventoryError::Duplicate { line: 2, .. }));
    }

    #[test]
    fn rejects_missing_required_feature() {
        let err = Inventory::parse(
            "p class=consonant manner=plosive place=bilabial sonority=1\n^ class=boundary\n",
        )
        .unwrap_err();
        assert!(
            matches!(err, InventoryError::MissingFeature { ref feature, .. } if feature == "voiced")
        );
    }

    #[test]
    fn rejects_off_scale_sonority() {
        let err = Inventory::parse(
            "p class=consonant manner=plosive place=bilabial voiced=minus sonority=5\n^ class=boundary\n",
        )
        .unwrap_err();
        assert!(matches!(err, InventoryError::BadFeature { .. }));
    }

    #[test]
    fn rejects_sonority_disagreeing_with_manner() {
        let err = Inventory::parse(
            "m class=consonant manner=nasal place=bilabial voiced=plus sonority=2.25\n^ class=boundary\n",
        )
        .unwrap_err();
        assert!(matches!(err, InventoryError::BadFeature { .. }));
    }

    #[test]
    fn requires_the_boundary_phoneme() {
        let err = Inventory::parse(
            "p class=consonant manner=plosive place=bilabial voiced=minus sonority=1\n",
        )
        .unwrap_err();
        assert_eq!(err, InventoryError::MissingBoundary);
    }

    #[test]
    fn boundary_carries_no_features() {
        let inv = Inventory::bundled_dutch();
        let caret = inv.get("^").unwrap();
        assert_eq!(caret.category, PhonemeClass::Boundary);
        assert_eq!(caret.manner, None);
        assert_eq!(caret.sonority, None);
        let err = Inventory::parse("^ class=boundary sonority=1\n").unwrap_err();
        assert!(matches!(err, InventoryError::BadFeature { .. }));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let inv = Inventory::parse(
            "# comment line\n\np class=consonant manner=plosive place=bilabial voiced=minus sonority=1 # trailing\n^ class=boundary\n",
        )
        .unwrap();
        assert_eq!(inv.len(), 2);
    }
}
