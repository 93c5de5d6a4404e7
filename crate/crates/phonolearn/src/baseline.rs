//! Non-learned reference acceptor: sonority must fall strictly
//! outward from the nucleus on both sides, with a short list of
//! licenses and filters layered on top.
//!
//! Shipped rule hooks, in evaluation order after the core progression:
//!   - `s` license: the word-initial onset position may hold /s/
//!     regardless of the progression (it may also simply be absent).
//!   - `left-sonority` filter: onset positions must stay below
//!     sonority 4.
//!   - `no-voiced-obstruent-coda` filter: no voiced obstruent after
//!     the vowel.
//!
//! The original model carries more filters; the config file
//! (`scale.* / license.* / filter.*` keys) adjusts the scale and
//! toggles the shipped hooks, but new rule kinds require code.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::dataset::{segment, Word};
use crate::evaluation::{evaluate_with, EvaluationReport, RejectCause, WordVerdict};
use crate::ilp::parse_fraction;
use crate::phonology::Inventory;

const NUCLEUS_SONORITY: (i64, i64) = (4, 1);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BaselineConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: '{symbol}' is not in the inventory")]
    UnknownSymbol { line: usize, symbol: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SonorityModel {
    inventory: Inventory,
    scale: BTreeMap<String, Ratio<i64>>,
    voiced_obstruents: Vec<String>,
    pub s_license: bool,
    pub left_sonority_filter: bool,
    pub voiced_obstruent_coda_filter: bool,
}

impl SonorityModel {
    pub fn new(inventory: &Inventory) -> SonorityModel {
        let mut scale = BTreeMap::new();
        for p in inventory.iter() {
            if let Some(s) = p.sonority {
                scale.insert(p.symbol.clone(), s);
            }
        }
        let voiced_obstruents = inventory
            .consonants()
            .filter(|p| {
                matches!(p.manner.as_deref(), Some("plosive") | Some("fricative"))
                    && p.voiced.as_deref() == Some("plus")
            })
            .map(|p| p.symbol.clone())
            .collect();
        SonorityModel {
            inventory: inventory.clone(),
            scale,
            voiced_obstruents,
            s_license: true,
            left_sonority_filter: true,
            voiced_obstruent_coda_filter: true,
        }
    }

    /// Applies a config file: `scale.<symbol> = <value>` overrides and
    /// `license.s` / `filter.left_sonority` /
    /// `filter.voiced_obstruent_coda` set to on/off.
    pub fn apply_config(&mut self, src: &str) -> Result<(), BaselineConfigError> {
        for (lineno, raw) in src.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(BaselineConfigError::Syntax {
                    line: lineno,
                    message: format!("expected key = value, found '{line}'"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            let parse_switch = |v: &str| match v {
                "on" | "true" => Ok(true),
                "off" | "false" => Ok(false),
                other => Err(BaselineConfigError::Syntax {
                    line: lineno,
                    message: format!("expected on/off, found '{other}'"),
                }),
            };
            if let Some(symbol) = key.strip_prefix("scale.") {
                if !self.scale.contains_key(symbol) {
                    return Err(BaselineConfigError::UnknownSymbol {
                        line: lineno,
                        symbol: symbol.to_string(),
                    });
                }
                let parsed = parse_fraction(value).map_err(|e| BaselineConfigError::Syntax {
                    line: lineno,
                    message: e,
                })?;
                self.scale.insert(symbol.to_string(), parsed);
            } else {
                match key {
                    "license.s" => self.s_license = parse_switch(value)?,
                    "filter.left_sonority" => self.left_sonority_filter = parse_switch(value)?,
                    "filter.voiced_obstruent_coda" => {
                        self.voiced_obstruent_coda_filter = parse_switch(value)?
                    }
                    other => {
                        return Err(BaselineConfigError::Syntax {
                            line: lineno,
                            message: format!("unknown key '{other}'"),
                        })
                    }
                }
            }
        }
        Ok(())
    }

    pub fn sonority_of(&self, symbol: &str) -> Option<Ratio<i64>> {
        self.scale.get(symbol).copied()
    }

    /// (enabled licenses, enabled filters), reported in the clause
    /// counts slot of evaluation reports.
    pub fn rule_counts(&self) -> (usize, usize) {
        (
            usize::from(self.s_license),
            usize::from(self.left_sonority_filter)
                + usize::from(self.voiced_obstruent_coda_filter),
        )
    }

    pub fn accepts(&self, word: &Word) -> WordVerdict {
        let sw = match segment(word, &self.inventory) {
            Ok(sw) => sw,
            Err(e) => return WordVerdict::Reject(RejectCause::Template(e.to_string())),
        };
        let nucleus = Ratio::new(NUCLEUS_SONORITY.0, NUCLEUS_SONORITY.1);

        // Core progression, outward from the nucleus. The licensed
        // word-initial /s/ is exempt.
        let mut prev = nucleus;
        let outward: Vec<&String> = sw.onset.iter().rev().collect();
        for (step, symbol) in outward.iter().enumerate() {
            let word_initial = step + 1 == outward.len();
            if self.s_license && word_initial && symbol.as_str() == "s" {
                continue;
            }
            let value = self.scale[symbol.as_str()];
            if value >= prev {
                return WordVerdict::Reject(RejectCause::Rule {
                    name: "sonority".into(),
                    detail: format!("onset {symbol} does not fall below the segment to its right"),
                });
            }
            prev = value;
        }
        let mut prev = nucleus;
        for symbol in &sw.coda {
            let value = self.scale[symbol.as_str()];
            if value >= prev {
                return WordVerdict::Reject(RejectCause::Rule {
                    name: "sonority".into(),
                    detail: format!("coda {symbol} does not fall below the segment to its left"),
                });
            }
            prev = value;
        }

        if self.left_sonority_filter {
            for symbol in &sw.onset {
                if self.scale[symbol.as_str()] >= nucleus {
                    return WordVerdict::Reject(RejectCause::Rule {
                        name: "left-sonority".into(),
                        detail: format!("onset {symbol} carries vowel-level sonority"),
                    });
                }
            }
        }
        if self.voiced_obstruent_coda_filter {
            for symbol in &sw.coda {
                if self.voiced_obstruents.contains(symbol) {
                    return WordVerdict::Reject(RejectCause::Rule {
                        name: "no-voiced-obstruent-coda".into(),
                        detail: format!("voiced obstruent {symbol} after the vowel"),
                    });
                }
            }
        }
        WordVerdict::Accept
    }

    pub fn evaluate(&self, pos_words: &[Word], neg_words: &[Word]) -> EvaluationReport {
        evaluate_with(
            |word| self.accepts(word),
            pos_words,
            neg_words,
            self.rule_counts(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> SonorityModel {
        SonorityModel::new(&Inventory::bundled_dutch())
    }

    fn reject_rule(verdict: &WordVerdict) -> &str {
        match verdict {
            WordVerdict::Reject(RejectCause::Rule { name, .. }) => name,
            other => panic!("expected a rule rejection, got {other:?}"),
        }
    }

    #[test]
    fn liquid_order_separates_mirror_codas() {
        let m = model();
        assert!(m.accepts(&Word::new(["k", "a", "r", "l"])).is_accept());
        let verdict = m.accepts(&Word::new(["k", "a", "l", "r"]));
        assert_eq!(reject_rule(&verdict), "sonority");
    }

    #[test]
    fn voiced_obstruent_coda_is_filtered() {
        let m = model();
        let verdict = m.accepts(&Word::new(["a", "b"]));
        assert_eq!(reject_rule(&verdict), "no-voiced-obstruent-coda");
        assert!(m.accepts(&Word::new(["a", "p"])).is_accept());
    }

    #[test]
    fn word_initial_s_is_licensed_over_the_progression() {
        let m = model();
        assert!(m.accepts(&Word::new(["s", "t", "r", "a", "k"])).is_accept());
        assert!(m.accepts(&Word::new(["s", "p", "a"])).is_accept());
        let verdict = m.accepts(&Word::new(["t", "s", "r", "a"]));
        assert_eq!(reject_rule(&verdict), "sonority");
        let mut unlicensed = model();
        unlicensed.s_license = false;
        let verdict = unlicensed.accepts(&Word::new(["s", "t", "r", "a", "k"]));
        assert_eq!(reject_rule(&verdict), "sonority");
    }

    #[test]
    fn license_does_not_bypass_the_left_sonority_filter() {
        let mut m = model();
        m.apply_config("scale.s = 4\n").unwrap();
        let verdict = m.accepts(&Word::new(["s", "t", "r", "a", "k"]));
        assert_eq!(reject_rule(&verdict), "left-sonority");
    }

    #[test]
    fn equal_sonority_adjacency_is_rejected() {
        let m = model();
        let verdict = m.accepts(&Word::new(["a", "n", "N"]));
        assert_eq!(reject_rule(&verdict), "sonority");
        let verdict = m.accepts(&Word::new(["k", "t", "a"]));
        assert_eq!(reject_rule(&verdict), "sonority");
    }

    #[test]
    fn template_failures_reject_with_template() {
        let m = model();
        assert!(matches!(
            m.accepts(&Word::new(["s", "t"])),
            WordVerdict::Reject(RejectCause::Template(_))
        ));
    }

    #[test]
    fn config_toggles_and_overrides_apply() {
        let mut m = model();
        m.apply_config(
            "# tweaks\nfilter.voiced_obstruent_coda = off\nscale.h = 2.75 # demote h\n",
        )
        .unwrap();
        assert!(m.accepts(&Word::new(["a", "b"])).is_accept());
        assert_eq!(m.sonority_of("h"), Some(Ratio::new(11, 4)));
        assert!(matches!(
            m.apply_config("scale.q = 1\n"),
            Err(BaselineConfigError::UnknownSymbol { line: 1, .. })
        ));
        assert!(matches!(
            m.apply_config("filter.unknown = on\n"),
            Err(BaselineConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            m.apply_config("license.s = maybe\n"),
            Err(BaselineConfigError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn rule_counts_track_enabled_hooks() {
        let mut m = model();
        assert_eq!(m.rule_counts(), (1, 2));
        m.left_sonority_filter = false;
        assert_eq!(m.rule_counts(), (1, 1));
    }

    #[test]
    fn evaluation_report_wires_through() {
        let m = model();
        let report = m.evaluate(
            &[Word::new(["k", "a", "r", "l"])],
            &[Word::new(["k", "a", "l", "r"])],
        );
        assert_eq!(report.accepted_positives.len(), 1);
        assert_eq!(report.rejected_negatives.len(), 1);
        assert_eq!(report.clause_counts, (1, 2));
    }
}
