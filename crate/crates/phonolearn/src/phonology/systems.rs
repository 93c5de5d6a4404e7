//! The three background theories: IPA feature dimensions, feature
//! classes after Booij (1995) and Van der Hulst (1984), and the
//! sonority scale.
//!
//! Every theory ships with the list primitives (head/rest/empty), an
//! equality fact per phoneme, and the mode declarations that drive
//! saturation. IPA and sonority facts are value-first
//! (`manner(plosive,p)`), feature-class facts are phone-first
//! (`sonorant(a,plu)`).

use std::fmt;
use std::str::FromStr;

use crate::ilp::{ArgMode, ModeDeclaration, Recall};
use crate::logic::{parse_clause, Clause, Literal, Term};
use crate::phonology::inventory::{Inventory, Phoneme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureSystem {
    Ipa,
    Booij,
    Sonority,
}

impl FromStr for FeatureSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<FeatureSystem, String> {
        match s {
            "ipa" => Ok(FeatureSystem::Ipa),
            "booij" => Ok(FeatureSystem::Booij),
            "sonority" => Ok(FeatureSystem::Sonority),
            other => Err(format!(
                "unknown feature system '{other}' (expected ipa, booij, or sonority)"
            )),
        }
    }
}

impl fmt::Display for FeatureSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureSystem::Ipa => write!(f, "ipa"),
            FeatureSystem::Booij => write!(f, "booij"),
            FeatureSystem::Sonority => write!(f, "sonority"),
        }
    }
}

/// A feature system instantiated over an inventory: the clause set
/// fed to the prover plus the body modes that drive saturation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Background {
    pub system: FeatureSystem,
    pub clauses: Vec<Clause>,
    pub modes: Vec<ModeDeclaration>,
}

/// Head mode for an affix target: `modeh(target(+phone,+context,+context))`.
pub fn head_mode(target: &str) -> ModeDeclaration {
    ModeDeclaration::head(
        target,
        vec![
            ArgMode::Input("phone".into()),
            ArgMode::Input("context".into()),
            ArgMode::Input("context".into()),
        ],
    )
}

pub fn background(system: FeatureSystem, inventory: &Inventory) -> Background {
    let mut clauses = shared_clauses(inventory);
    let mut modes = shared_modes();
    match system {
        FeatureSystem::Ipa => {
            clauses.extend(ipa_clauses(inventory));
            modes.extend(ipa_modes());
        }
        FeatureSystem::Booij => {
            clauses.extend(booij_clauses(inventory));
            modes.extend(booij_modes());
        }
        FeatureSystem::Sonority => {
            clauses.extend(sonority_clauses(inventory));
            modes.extend(sonority_modes());
        }
    }
    Background {
        system,
        clauses,
        modes,
    }
}

impl Background {
    /// Values a fact base assigns to a phoneme under a feature
    /// predicate. Empty for the boundary and for anything a system
    /// leaves unspecified (e.g. the schwa outside `schwa/2`). Unary
    /// derived features report `plu` when present.
    pub fn feature_lookup(&self, phoneme: &str, feature: &str) -> Vec<Term> {
        let phone = Term::constant(phoneme);
        let mut values = Vec::new();
        for clause in &self.clauses {
            if !clause.is_fact() || clause.head.predicate != feature {
                continue;
            }
            let args = &clause.head.args;
            let value = match (self.system, args.len()) {
                (_, 1) if args[0] == phone => Some(Term::constant("plu")),
                (FeatureSystem::Booij, 2) if args[0] == phone => Some(args[1].clone()),
                (FeatureSystem::Ipa | FeatureSystem::Sonority, 2) if args[1] == phone => {
                    Some(args[0].clone())
                }
                _ => None,
            };
            if let Some(v) = value {
                if !values.contains(&v) {
                    values.push(v);
                }
            }
        }
        values
    }
}

fn fact(predicate: &str, args: Vec<Term>) -> Clause {
    Clause::fact(Literal::new(predicate, args))
}

fn c(name: &str) -> Term {
    Term::constant(name)
}

/// List primitives and per-phoneme equality, shared by every system.
fn shared_clauses(inventory: &Inventory) -> Vec<Clause> {
    let mut clauses: Vec<Clause> = ["head([A|B],A).", "rest([A|B],B).", "empty([])."]
        .iter()
        .map(|src| parse_clause(src).unwrap())
        .collect();
    for p in inventory.iter() {
        clauses.push(fact("equal", vec![c(&p.symbol), c(&p.symbol)]));
    }
    clauses
}

fn shared_modes() -> Vec<ModeDeclaration> {
    vec![
        ModeDeclaration::body(
            Recall::Bounded(1),
            "head",
            vec![ArgMode::Input("context".into()), ArgMode::Output("phone".into())],
        ),
        ModeDeclaration::body(
            Recall::Bounded(1),
            "rest",
            vec![
                ArgMode::Input("context".into()),
                ArgMode::Output("context".into()),
            ],
        ),
        ModeDeclaration::body(
            Recall::Bounded(1),
            "empty",
            vec![ArgMode::Input("context".into())],
        ),
        ModeDeclaration::body(
            Recall::Bounded(1),
            "equal",
            vec![ArgMode::Input("phone".into()), ArgMode::Constant("phone".into())],
        ),
    ]
}

fn ipa_clauses(inventory: &Inventory) -> Vec<Clause> {
    let mut clauses = Vec::new();
    for p in inventory.consonants() {
        let sym = c(&p.symbol);
        clauses.push(fact("manner", vec![c(p.manner.as_deref().unwrap()), sym.clone()]));
        clauses.push(fact("place", vec![c(p.place.as_deref().unwrap()), sym.clone()]));
        clauses.push(fact("voiced", vec![c(p.voiced.as_deref().unwrap()), sym]));
    }
    for p in inventory.vowels() {
        let sym = c(&p.symbol);
        clauses.push(fact("place", vec![c(p.place.as_deref().unwrap()), sym.clone()]));
        clauses.push(fact("manner", vec![c(p.manner.as_deref().unwrap()), sym.clone()]));
        clauses.push(fact("length", vec![c(p.length.as_deref().unwrap()), sym.clone()]));
        clauses.push(fact("round", vec![c(p.round.as_deref().unwrap()), sym]));
    }
    clauses
}

fn ipa_modes() -> Vec<ModeDeclaration> {
    ["manner", "place", "voiced", "length", "round"]
        .into_iter()
        .map(|dim| {
            ModeDeclaration::body(
                Recall::Bounded(1),
                dim,
                vec![ArgMode::Constant(dim.into()), ArgMode::Input("phone".into())],
            )
        })
        .collect()
}

/// plus/minus in the inventory prints as plu/min in the feature-class
/// system, matching how its facts are conventionally written.
fn bin(value: &str) -> &'static str {
    match value {
        "plus" => "plu",
        "minus" => "min",
        other => unreachable!("binary value '{other}' escaped inventory validation"),
    }
}

fn booij_clauses(inventory: &Inventory) -> Vec<Clause> {
    let mut clauses = Vec::new();
    for p in inventory.iter() {
        if p.schwa {
            // The reduced vowel is set apart: Schwa is its only
            // specification.
            clauses.push(fact("schwa", vec![c(&p.symbol), c("plu")]));
            continue;
        }
        if p.length_mark || !(p.is_consonant() || p.is_vowel()) {
            continue;
        }
        let sym = c(&p.symbol);
        if p.is_vowel() {
            clauses.push(fact("consonantal", vec![sym.clone(), c("min")]));
            clauses.push(fact("sonorant", vec![sym, c("plu")]));
            continue;
        }
        let manner = p.manner.as_deref().unwrap();
        let sonorant = matches!(manner, "nasal" | "lateral" | "trill" | "approximant");
        let continuant = matches!(manner, "trill" | "fricative" | "approximant");
        clauses.push(fact("consonantal", vec![sym.clone(), c("plu")]));
        clauses.push(fact(
            "sonorant",
            vec![sym.clone(), c(if sonorant { "plu" } else { "min" })],
        ));
        clauses.push(fact(
            "continuant",
            vec![sym.clone(), c(if continuant { "plu" } else { "min" })],
        ));
        clauses.push(fact(
            "nasal",
            vec![sym.clone(), c(if manner == "nasal" { "plu" } else { "min" })],
        ));
        clauses.push(fact(
            "lateral",
            vec![sym.clone(), c(if manner == "lateral" { "plu" } else { "min" })],
        ));

        let voice = bin(p.voiced.as_deref().unwrap());
        let aspiration = bin(&p.aspiration);
        clauses.push(fact("voice", vec![sym.clone(), c(voice)]));
        clauses.push(fact("aspiration", vec![sym.clone(), c(aspiration)]));
        clauses.push(fact(
            "larynx",
            vec![
                sym.clone(),
                Term::compound("lar", vec![c(voice), c(aspiration)]),
            ],
        ));

        let place = p.place.as_deref().unwrap();
        let labial = matches!(place, "bilabial" | "labiodental");
        let coronal = matches!(place, "alveolar" | "postalveolar" | "palatal");
        let dorsal = place == "velar";
        let lcd = |v: bool| c(if v { "plu" } else { "min" });
        clauses.push(fact("labial", vec![sym.clone(), lcd(labial)]));
        clauses.push(fact("coronal", vec![sym.clone(), lcd(coronal)]));
        clauses.push(fact("dorsal", vec![sym.clone(), lcd(dorsal)]));
        clauses.push(fact(
            "place_cls",
            vec![
                sym.clone(),
                Term::compound("pl", vec![lcd(labial), lcd(coronal), lcd(dorsal)]),
            ],
        ));

        let liquid = matches!(manner, "lateral" | "trill");
        if p.glide {
            clauses.push(fact("glide", vec![sym.clone()]));
        }
        if liquid {
            clauses.push(fact("liquid", vec![sym.clone()]));
        }
        if p.glide || liquid || manner == "approximant" {
            clauses.push(fact("approximant", vec![sym.clone()]));
        }
    }
    clauses.push(
        parse_clause("same_class_values(laryngeal,P,Q) :- larynx(P,V), larynx(Q,V).").unwrap(),
    );
    clauses.push(
        parse_clause("same_class_values(place,P,Q) :- place_cls(P,V), place_cls(Q,V).").unwrap(),
    );
    clauses
}

fn booij_modes() -> Vec<ModeDeclaration> {
    let mut modes = Vec::new();
    for pred in [
        "consonantal",
        "sonorant",
        "continuant",
        "nasal",
        "lateral",
        "voice",
        "aspiration",
        "labial",
        "coronal",
        "dorsal",
        "schwa",
    ] {
        modes.push(ModeDeclaration::body(
            Recall::Bounded(1),
            pred,
            vec![ArgMode::Input("phone".into()), ArgMode::Constant("bin".into())],
        ));
    }
    modes.push(ModeDeclaration::body(
        Recall::Bounded(1),
        "larynx",
        vec![
            ArgMode::Input("phone".into()),
            ArgMode::Output("laryngeal".into()),
        ],
    ));
    modes.push(ModeDeclaration::body(
        Recall::Bounded(1),
        "place_cls",
        vec![
            ArgMode::Input("phone".into()),
            ArgMode::Output("place_class".into()),
        ],
    ));
    for pred in ["glide", "liquid", "approximant"] {
        modes.push(ModeDeclaration::body(
            Recall::Bounded(1),
            pred,
            vec![ArgMode::Input("phone".into())],
        ));
    }
    // Recall 2: a pair can agree on the laryngeal and the place class.
    modes.push(ModeDeclaration::body(
        Recall::Bounded(2),
        "same_class_values",
        vec![
            ArgMode::Constant("class".into()),
            ArgMode::Input("phone".into()),
            ArgMode::Input("phone".into()),
        ],
    ));
    modes
}

fn sonority_clauses(inventory: &Inventory) -> Vec<Clause> {
    let mut clauses = Vec::new();
    let scaled: Vec<&Phoneme> = inventory
        .iter()
        .filter(|p| p.sonority.is_some())
        .collect();
    for p in &scaled {
        clauses.push(fact(
            "sonority",
            vec![c(p.sonority_symbol().unwrap()), c(&p.symbol)],
        ));
    }
    for a in &scaled {
        for b in &scaled {
            if a.sonority.unwrap() < b.sonority.unwrap() {
                clauses.push(fact("sonority_lt", vec![c(&a.symbol), c(&b.symbol)]));
            }
        }
    }
    clauses
}

fn sonority_modes() -> Vec<ModeDeclaration> {
    vec![
        ModeDeclaration::body(
            Recall::Bounded(1),
            "sonority",
            vec![
                ArgMode::Constant("sonority".into()),
                ArgMode::Input("phone".into()),
            ],
        ),
        ModeDeclaration::body(
            Recall::Bounded(1),
            "sonority_lt",
            vec![ArgMode::Input("phone".into()), ArgMode::Input("phone".into())],
        ),
    ]
}
