//! Property tests for the load-bearing invariants: unification,
//! derivation, subsumption, example generation, and file round-trips.

use std::collections::HashSet;

use num_rational::Ratio;
use proptest::prelude::*;

use phonolearn::dataset::{
    derive_negative_examples, generate_positives, parse_lexicon, render_lexicon, segment,
    AffixExample, Direction, Word, MAX_CODA, MAX_NUCLEUS, MAX_ONSET,
};
use phonolearn::ilp::{saturate, EvalFn, ExampleSet, SearchParams, Theory};
use phonolearn::logic::{
    derives, derives_with_extra, parse_clause, parse_literal, theta_subsumes, unify, Clause,
    Derivation, Program, Term,
};
use phonolearn::phonology::{background, head_mode, FeatureSystem, Inventory};

// ---------------------------------------------------------------- terms

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(Term::constant),
        prop_oneof![Just("X"), Just("Y"), Just("Z")].prop_map(Term::var),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..3)
                .prop_map(|args| Term::compound("f", args)),
            prop::collection::vec(inner, 2..4).prop_map(|args| Term::compound("g", args)),
        ]
    })
}

proptest! {
    /// A successful unifier makes both terms syntactically identical in
    /// one application (it is fully resolved), and unification is
    /// symmetric in success.
    #[test]
    fn unifier_equates_both_terms(a in arb_term(), b in arb_term()) {
        let forward = unify(&a, &b);
        let backward = unify(&b, &a);
        prop_assert_eq!(forward.is_some(), backward.is_some());
        if let Some(s) = forward {
            let sa = s.apply_term(&a);
            let sb = s.apply_term(&b);
            prop_assert_eq!(&sa, &sb);
            // Idempotent: a second application changes nothing.
            prop_assert_eq!(&s.apply_term(&sa), &sa);
        }
    }

    /// A term always unifies with itself, with nothing left to bind
    /// beyond trivial self-consistency.
    #[test]
    fn unification_is_reflexive(a in arb_term()) {
        let s = unify(&a, &a);
        prop_assert!(s.is_some());
        prop_assert_eq!(s.unwrap().apply_term(&a), a);
    }

    /// The occurs check rejects binding a variable to a compound that
    /// contains it.
    #[test]
    fn occurs_check_blocks_cyclic_bindings(t in arb_term()) {
        let mut vars = Vec::new();
        t.collect_vars(&mut vars);
        for v in vars {
            let var = Term::var(&v);
            // Wrap t so the variable occurs strictly inside a compound.
            let wrapped = Term::compound("f", vec![t.clone()]);
            prop_assert!(unify(&var, &wrapped).is_none());
        }
    }
}

// ----------------------------------------------------------- derivation

fn ipa_program() -> Program {
    let inventory = Inventory::bundled_dutch();
    Program::new(background(FeatureSystem::Ipa, &inventory).clauses)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Proof success is monotone in the depth bound.
    #[test]
    fn derivation_is_monotone_in_depth(
        fact_idx in 0usize..1000,
        depth in 1usize..8,
        extra in 1usize..10,
    ) {
        let program = ipa_program();
        let facts: Vec<&Clause> =
            program.clauses().iter().filter(|c| c.is_fact()).collect();
        let fact = facts[fact_idx % facts.len()];
        let at = derives(&program, &fact.head, depth);
        if at == Derivation::Proved {
            prop_assert_eq!(derives(&program, &fact.head, depth + extra), Derivation::Proved);
        }
    }
}

// ----------------------------------------------------------- subsumption

fn arb_affix_clause() -> impl Strategy<Value = Clause> {
    // Clauses over the shared list/feature vocabulary with head
    // prefix(A,B,C); bodies chain on the head variables.
    let bodies = prop::sample::subsequence(
        vec![
            "head(C,D)",
            "rest(C,E)",
            "empty(B)",
            "manner(plosive,A)",
            "voiced(min,A)",
            "place(bilabial,A)",
            "equal(D,a)",
        ],
        0..4,
    );
    bodies.prop_map(|lits| {
        let mut src = String::from("prefix(A,B,C)");
        if !lits.is_empty() {
            src.push_str(" :- ");
            src.push_str(&lits.join(", "));
        }
        src.push('.');
        parse_clause(&src).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Subsumption is reflexive, and a clause subsumes any clause made
    /// from it by adding body literals or instantiating variables.
    #[test]
    fn clause_subsumes_its_specializations(c in arb_affix_clause()) {
        prop_assert!(theta_subsumes(&c, &c));
        let mut longer = c.clone();
        longer.body.push(parse_literal("sonorant(plu,A)").unwrap());
        prop_assert!(theta_subsumes(&c, &longer));

        let grounded = {
            let rename = |v: &str| match v {
                "A" => "A".to_string(),
                other => format!("{other}_g"),
            };
            c.rename_vars(&rename)
        };
        prop_assert!(theta_subsumes(&c, &grounded));
    }

    /// Subsumption implies coverage: whenever c subsumes d, every atom
    /// derivable with d is derivable with c (same background, ample
    /// depth).
    #[test]
    fn subsumption_implies_coverage(
        c in arb_affix_clause(),
        word in arb_template_word(),
    ) {
        let mut d = c.clone();
        d.body.push(parse_literal("voiced(min,A)").unwrap());
        prop_assert!(theta_subsumes(&c, &d));

        let inventory = Inventory::bundled_dutch();
        let program = ipa_program();
        let (atoms, _) = generate_positives(&[word], &inventory);
        for atom in atoms.iter().filter(|a| a.direction == Direction::Prefix) {
            let goal = atom.to_literal();
            let with_d = derives_with_extra(&program, &[d.clone()], &goal, 40);
            if with_d == Derivation::Proved {
                prop_assert_eq!(
                    derives_with_extra(&program, &[c.clone()], &goal, 40),
                    Derivation::Proved,
                    "{} subsumes {} but fails to cover {}",
                    c, d, goal
                );
            }
        }
    }
}

// ------------------------------------------------------ dataset invariants

fn arb_template_word() -> impl Strategy<Value = Word> {
    let inventory = Inventory::bundled_dutch();
    let consonants: Vec<String> = inventory.consonants().map(|p| p.symbol.clone()).collect();
    let vowels: Vec<String> = inventory
        .vowels()
        .filter(|p| !p.length_mark && !p.schwa)
        .map(|p| p.symbol.clone())
        .collect();
    let cons = prop::sample::select(consonants);
    let vowel = prop::sample::select(vowels);
    (
        prop::collection::vec(cons.clone(), 0..=MAX_ONSET),
        vowel,
        prop::bool::ANY,
        prop::collection::vec(cons, 0..=MAX_CODA),
    )
        .prop_map(|(onset, nucleus, long, coda)| {
            let mut symbols = onset;
            symbols.push(nucleus);
            if long {
                symbols.push(":".to_string());
            }
            symbols.extend(coda);
            Word::new(symbols)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Segmentation reconstructs the word and respects the template caps.
    #[test]
    fn segmentation_round_trips(word in arb_template_word()) {
        let inventory = Inventory::bundled_dutch();
        let sw = segment(&word, &inventory).unwrap();
        prop_assert_eq!(sw.word(), word);
        prop_assert!(sw.onset.len() <= MAX_ONSET);
        prop_assert!((1..=MAX_NUCLEUS).contains(&sw.nucleus.len()));
        prop_assert!(sw.coda.len() <= MAX_CODA);
    }

    /// A word with onset length o and coda length c yields exactly
    /// (o + 1) prefix atoms and (c + 1) suffix atoms, carets included.
    #[test]
    fn positive_atom_counting_law(word in arb_template_word()) {
        let inventory = Inventory::bundled_dutch();
        let sw = segment(&word, &inventory).unwrap();
        let (atoms, rejected) = generate_positives(&[word], &inventory);
        prop_assert!(rejected.is_empty());
        let prefix = atoms.iter().filter(|a| a.direction == Direction::Prefix).count();
        let suffix = atoms.iter().filter(|a| a.direction == Direction::Suffix).count();
        prop_assert_eq!(prefix, sw.onset.len() + 1);
        prop_assert_eq!(suffix, sw.coda.len() + 1);
        // Exactly one terminal atom per side.
        let carets = atoms.iter().filter(|a| a.phone == "^").count();
        prop_assert_eq!(carets, 2);
    }

    /// Every emitted negative atom is absent from the positive atom set,
    /// and each negative word contributes at most one atom per side.
    #[test]
    fn derived_negatives_avoid_positives(
        lexicon in prop::collection::vec(arb_template_word(), 1..12),
        nonwords in prop::collection::vec(arb_template_word(), 1..12),
        seed in any::<u64>(),
    ) {
        let inventory = Inventory::bundled_dutch();
        let lexicon_set: HashSet<Word> = lexicon.iter().cloned().collect();
        let nonwords: Vec<Word> = nonwords
            .into_iter()
            .filter(|w| !lexicon_set.contains(w))
            .collect();
        let (pos, _) = generate_positives(&lexicon, &inventory);
        let pos_set: HashSet<AffixExample> = pos.into_iter().collect();
        let (negs, _) = derive_negative_examples(&nonwords, &pos_set, &inventory, seed);
        for neg in &negs {
            let as_pos = neg.clone().with_polarity(phonolearn::dataset::Polarity::Positive);
            prop_assert!(!pos_set.contains(&as_pos), "negative {} is also positive", neg);
        }
        prop_assert!(negs.len() <= nonwords.len());
    }

    /// The derivation side choice is a function of the seed and the word
    /// alone: re-running with the same seed reproduces the same atoms.
    #[test]
    fn negative_derivation_is_deterministic(
        lexicon in prop::collection::vec(arb_template_word(), 1..8),
        nonwords in prop::collection::vec(arb_template_word(), 1..8),
        seed in any::<u64>(),
    ) {
        let inventory = Inventory::bundled_dutch();
        let (pos, _) = generate_positives(&lexicon, &inventory);
        let pos_set: HashSet<AffixExample> = pos.into_iter().collect();
        let (first, _) = derive_negative_examples(&nonwords, &pos_set, &inventory, seed);
        let (second, _) = derive_negative_examples(&nonwords, &pos_set, &inventory, seed);
        prop_assert_eq!(first, second);
    }
}

// ----------------------------------------------------- scoring functions

proptest! {
    /// Laplace and coverage scores are exact rationals with no rounding.
    #[test]
    fn scores_are_exact(p in 0usize..1000, n in 0usize..1000) {
        let laplace = EvalFn::Laplace.score(p, n);
        prop_assert_eq!(
            laplace,
            Ratio::new(p as i64 + 1, (p + n) as i64 + 2)
        );
        let coverage = EvalFn::Coverage.score(p, n);
        prop_assert_eq!(coverage, Ratio::from_integer(p as i64 - n as i64));
    }
}

// ------------------------------------------------------- bottom clauses

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The bottom clause always covers its own seed: background plus the
    /// clause derives the seed atom.
    #[test]
    fn bottom_clause_covers_its_seed(word in arb_template_word()) {
        let inventory = Inventory::bundled_dutch();
        let bg = background(FeatureSystem::Ipa, &inventory);
        let program = Program::new(bg.clauses.clone());
        let params = SearchParams::default();
        let (atoms, _) = generate_positives(&[word], &inventory);
        for atom in atoms {
            let seed = atom.to_literal();
            let mut modes = vec![head_mode(atom.direction.predicate())];
            modes.extend(bg.modes.iter().cloned());
            let bottom = saturate(&seed, &program, &modes, &params).unwrap();
            prop_assert_eq!(
                derives_with_extra(&program, &[bottom.clause.clone()], &seed, 60),
                Derivation::Proved,
                "bottom clause {} does not cover seed {}",
                bottom.clause, seed
            );
        }
    }
}

// --------------------------------------------------------- file formats

fn arb_affix_example(direction: Direction) -> impl Strategy<Value = AffixExample> {
    let inventory = Inventory::bundled_dutch();
    let symbols: Vec<String> = inventory.iter().map(|p| p.symbol.clone()).collect();
    let phone = prop::sample::select(symbols.clone());
    let ctx = prop::collection::vec(prop::sample::select(symbols.clone()), 0..4);
    let nucleus = prop::collection::vec(prop::sample::select(symbols), 1..=2);
    (phone, ctx, nucleus).prop_map(move |(phone, context, nucleus_context)| AffixExample {
        direction,
        phone,
        context,
        nucleus_context,
        polarity: phonolearn::dataset::Polarity::Positive,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Example files survive a render/parse round trip.
    #[test]
    fn example_files_round_trip(
        pos in prop::collection::vec(arb_affix_example(Direction::Prefix), 1..12),
        neg in prop::collection::vec(arb_affix_example(Direction::Prefix), 0..12),
    ) {
        let mut set = ExampleSet::new("prefix");
        set.positives = pos.iter().map(AffixExample::to_literal).collect();
        set.negatives = neg.iter().map(AffixExample::to_literal).collect();
        let text = set.render(&["round trip".to_string()]);
        let parsed = ExampleSet::parse(&text).unwrap();
        prop_assert_eq!(parsed, set);
    }

    /// Lexicon files survive a render/parse round trip.
    #[test]
    fn lexicon_files_round_trip(words in prop::collection::vec(arb_template_word(), 0..20)) {
        let text = render_lexicon(&words, &["header".to_string()]);
        prop_assert_eq!(parse_lexicon(&text), words);
    }

    /// Theory files survive a render/parse round trip on the clause level.
    #[test]
    fn theory_files_round_trip(clauses in prop::collection::vec(arb_affix_clause(), 0..8)) {
        let theory = Theory {
            target: "prefix".to_string(),
            clauses: clauses.clone(),
            provenance: Vec::new(),
        };
        let text = theory.render(&[]);
        let parsed = Theory::parse(&text).unwrap();
        prop_assert_eq!(parsed.target.as_str(), "prefix");
        prop_assert_eq!(parsed.clauses, clauses);
    }
}
