//! Pipeline sessions behind the CLI: dataset generation, learning runs,
//! theory evaluation, the sonority baseline, and background export.
//!
//! Every function here is deterministic given its inputs. All randomness
//! funnels through two seeds: `neg_seed` drives dataset generation (the
//! train/eval split, negative-word sampling, and negative-side tie breaks)
//! and `search_seed` drives seed-selection order when `seed_order` is
//! `shuffled`. Both seeds appear in every output file header.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::baseline::{BaselineConfigError, SonorityModel};
use crate::dataset::{
    derive_negative_examples, generate_negative_words, generate_positives, parse_lexicon,
    render_lexicon, segment, AffixExample, Direction, NegativeGenConfig, NegativeGenError, Word,
};
use crate::evaluation::{evaluate, EvaluationReport};
use crate::ilp::{
    learn, parse_fraction, EvalFn, ExampleSet, ExamplesError, SearchParams, SeedOrder, Theory,
    TheoryFileError,
};
use crate::logic::{Clause, Program};
use crate::phonology::{background, head_mode, FeatureSystem, Inventory, InventoryError};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("inventory {name}: {source}")]
    Inventory {
        name: String,
        source: InventoryError,
    },
    #[error("{path}: {source}")]
    Examples {
        path: PathBuf,
        source: ExamplesError,
    },
    #[error("{path}: {source}")]
    Theory {
        path: PathBuf,
        source: TheoryFileError,
    },
    #[error("{path}: {source}")]
    ModelConfig {
        path: PathBuf,
        source: BaselineConfigError,
    },
    #[error(transparent)]
    Negatives(#[from] NegativeGenError),
    #[error("{0}")]
    Invalid(String),
}

fn read(path: &Path) -> Result<String, SessionError> {
    fs::read_to_string(path).map_err(|source| SessionError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), SessionError> {
    fs::write(path, contents).map_err(|source| SessionError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn ensure_dir(dir: &Path) -> Result<(), SessionError> {
    fs::create_dir_all(dir).map_err(|source| SessionError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Evaluation holdout size: an absolute word count or a fraction of the
/// lexicon (rounded to nearest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalSplit {
    Count(usize),
    Fraction(Ratio<i64>),
}

impl EvalSplit {
    pub fn parse(text: &str) -> Result<EvalSplit, String> {
        let text = text.trim();
        if text.contains('/') || text.contains('.') {
            let frac = parse_fraction(text).map_err(|e| format!("eval split {text:?}: {e}"))?;
            if frac < Ratio::new(0, 1) || frac > Ratio::new(1, 1) {
                return Err(format!("eval split fraction {text} is outside [0, 1]"));
            }
            Ok(EvalSplit::Fraction(frac))
        } else {
            let count: usize = text
                .parse()
                .map_err(|_| format!("eval split {text:?} is neither a count nor a fraction"))?;
            Ok(EvalSplit::Count(count))
        }
    }

    /// Number of words to hold out from a lexicon of `total` words.
    pub fn count(&self, total: usize) -> usize {
        match *self {
            EvalSplit::Count(n) => n.min(total),
            EvalSplit::Fraction(f) => {
                let exact = f * Ratio::new(total as i64, 1);
                (exact.round().to_integer() as usize).min(total)
            }
        }
    }
}

impl std::fmt::Display for EvalSplit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalSplit::Count(n) => write!(f, "{n}"),
            EvalSplit::Fraction(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// Run configuration shared by every subcommand. Defaults can be adjusted
/// by a `key = value` config file and then by command-line flags, in that
/// order.
#[derive(Debug, Clone)]
pub struct Settings {
    /// Phoneme inventory: the bundled name `dutch` or a file path.
    pub inventory: String,
    pub background: FeatureSystem,
    pub evalfn: EvalFn,
    pub min_accuracy: Ratio<i64>,
    pub max_clause_literals: usize,
    pub variable_depth: usize,
    pub derivation_depth: usize,
    pub open_list_bound: usize,
    /// Seed-selection order for the cover loop: corpus order or a
    /// deterministic shuffle driven by `search_seed`.
    pub shuffled_seeds: bool,
    pub search_seed: u64,
    pub neg_seed: u64,
    /// Negative words sampled per (side, affix length) bucket.
    pub neg_quota: usize,
    pub eval_split: EvalSplit,
}

impl Default for Settings {
    fn default() -> Settings {
        let params = SearchParams::default();
        Settings {
            inventory: "dutch".to_string(),
            background: FeatureSystem::Ipa,
            evalfn: EvalFn::Laplace,
            min_accuracy: params.min_accuracy,
            max_clause_literals: params.max_clause_literals,
            variable_depth: params.variable_depth,
            derivation_depth: params.derivation_depth,
            open_list_bound: params.open_list_bound,
            shuffled_seeds: false,
            search_seed: 0,
            neg_seed: 0,
            neg_quota: 40,
            eval_split: EvalSplit::Count(0),
        }
    }
}

impl Settings {
    /// Applies one `key = value` assignment. Keys use the flag spelling;
    /// `-` and `_` are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let key = key.replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "inventory" => self.inventory = value.to_string(),
            "background" => {
                self.background = value
                    .parse()
                    .map_err(|_| format!("unknown background system {value:?}"))?;
            }
            "evalfn" => {
                self.evalfn = value
                    .parse()
                    .map_err(|_| format!("unknown evaluation function {value:?}"))?;
            }
            "min_accuracy" => {
                self.min_accuracy =
                    parse_fraction(value).map_err(|e| format!("min accuracy {value:?}: {e}"))?;
            }
            "max_clause_literals" => self.max_clause_literals = parse_usize(&key, value)?,
            "variable_depth" => self.variable_depth = parse_usize(&key, value)?,
            "derivation_depth" => self.derivation_depth = parse_usize(&key, value)?,
            "open_list_bound" => self.open_list_bound = parse_usize(&key, value)?,
            "seed_order" => {
                self.shuffled_seeds = match value {
                    "corpus" => false,
                    "shuffled" => true,
                    other => return Err(format!("seed order must be corpus or shuffled, got {other:?}")),
                };
            }
            "search_seed" => self.search_seed = parse_u64(&key, value)?,
            "neg_seed" => self.neg_seed = parse_u64(&key, value)?,
            "neg_quota" => self.neg_quota = parse_usize(&key, value)?,
            "eval_split" => self.eval_split = EvalSplit::parse(value)?,
            other => return Err(format!("unknown config key {other:?}")),
        }
        Ok(())
    }

    /// Applies a config file of `key = value` lines. `#` starts a comment;
    /// blank lines are skipped.
    pub fn apply_config(&mut self, src: &str) -> Result<(), String> {
        for (lineno, raw) in src.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            self.set(key.trim(), value)
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        }
        Ok(())
    }

    pub fn search_params(&self) -> SearchParams {
        SearchParams {
            max_clause_literals: self.max_clause_literals,
            variable_depth: self.variable_depth,
            derivation_depth: self.derivation_depth,
            min_accuracy: self.min_accuracy,
            open_list_bound: self.open_list_bound,
            seed_order: if self.shuffled_seeds {
                SeedOrder::Shuffled(self.search_seed)
            } else {
                SeedOrder::Corpus
            },
        }
    }

    /// Header comment lines stamped into every output file.
    pub fn header_lines(&self) -> Vec<String> {
        vec![
            format!("neg_seed={}", self.neg_seed),
            format!("search_seed={}", self.search_seed),
            format!(
                "seed_order={}",
                if self.shuffled_seeds { "shuffled" } else { "corpus" }
            ),
            format!("inventory={}", self.inventory),
            format!("background={}", self.background),
            format!("evalfn={}", self.evalfn),
            format!(
                "min_accuracy={}/{}",
                self.min_accuracy.numer(),
                self.min_accuracy.denom()
            ),
            format!("max_clause_literals={}", self.max_clause_literals),
            format!("variable_depth={}", self.variable_depth),
            format!("derivation_depth={}", self.derivation_depth),
            format!("open_list_bound={}", self.open_list_bound),
            format!("neg_quota={}", self.neg_quota),
            format!("eval_split={}", self.eval_split),
        ]
    }

    pub fn load_inventory(&self) -> Result<Inventory, SessionError> {
        if self.inventory == "dutch" {
            return Ok(Inventory::bundled_dutch());
        }
        let path = Path::new(&self.inventory);
        let src = read(path)?;
        Inventory::parse(&src).map_err(|source| SessionError::Inventory {
            name: self.inventory.clone(),
            source,
        })
    }
}

fn parse_usize(key: &str, value: &str) -> Result<usize, String> {
    value
        .parse()
        .map_err(|_| format!("{key} must be a non-negative integer, got {value:?}"))
}

fn parse_u64(key: &str, value: &str) -> Result<u64, String> {
    value
        .parse()
        .map_err(|_| format!("{key} must be a non-negative integer, got {value:?}"))
}

/// FNV-1a over a label, mixed with the base seed. Gives each pipeline
/// stage its own RNG stream so stages cannot perturb one another.
fn label_seed(base: u64, label: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |byte: u8| {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    };
    for byte in base.to_le_bytes() {
        eat(byte);
    }
    for byte in label.bytes() {
        eat(byte);
    }
    hash
}

#[derive(Debug)]
pub struct GenerateOutcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    pub train_words: usize,
    pub eval_words: usize,
    /// (positive instances, negative instances) per task.
    pub prefix_counts: (usize, usize),
    pub suffix_counts: (usize, usize),
}

/// Builds the full dataset for one lexicon: positive affix atoms from the
/// training split, sampled negative words with derived near-miss negative
/// atoms, and word lists for the held-out evaluation split.
///
/// Writes `prefix.examples`, `suffix.examples`, `train.words`,
/// `eval.words`, `negatives-train.words`, and `negatives-eval.words`
/// under `out_dir`.
pub fn run_generate(
    settings: &Settings,
    lexicon_path: &Path,
    out_dir: &Path,
) -> Result<GenerateOutcome, SessionError> {
    let inventory = settings.load_inventory()?;
    let lexicon = parse_lexicon(&read(lexicon_path)?);
    if lexicon.is_empty() {
        return Err(SessionError::Invalid(format!(
            "{}: lexicon contains no words",
            lexicon_path.display()
        )));
    }
    let mut warnings = Vec::new();

    // Keep only words the syllable template can segment; the rest are
    // reported and excluded from both splits.
    let mut valid = Vec::new();
    for word in &lexicon {
        match segment(word, &inventory) {
            Ok(_) => valid.push(word.clone()),
            Err(e) => warnings.push(format!("skipping /{}/: {e}", word.compact())),
        }
    }
    if valid.is_empty() {
        return Err(SessionError::Invalid(format!(
            "{}: no word fits the syllable template",
            lexicon_path.display()
        )));
    }

    // Held-out split: shuffle indices on a dedicated stream, then restore
    // lexicon order inside each half so the files stay readable.
    let eval_count = settings.eval_split.count(valid.len());
    let mut indices: Vec<usize> = (0..valid.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(label_seed(settings.neg_seed, "eval-split"));
    indices.shuffle(&mut rng);
    let mut eval_indices: Vec<usize> = indices[..eval_count].to_vec();
    let mut train_indices: Vec<usize> = indices[eval_count..].to_vec();
    eval_indices.sort_unstable();
    train_indices.sort_unstable();
    let eval_words: Vec<Word> = eval_indices.iter().map(|&i| valid[i].clone()).collect();
    let train_words: Vec<Word> = train_indices.iter().map(|&i| valid[i].clone()).collect();
    if train_words.is_empty() {
        return Err(SessionError::Invalid(
            "eval split leaves no training words".to_string(),
        ));
    }

    let (positives, rejected) = generate_positives(&train_words, &inventory);
    debug_assert!(rejected.is_empty(), "unsegmentable words were filtered above");
    let positive_atoms: HashSet<AffixExample> = positives.iter().cloned().collect();

    // Negative words must not collide with any real word, train or eval.
    let valid_set: HashSet<Word> = valid.iter().cloned().collect();
    let train_cfg = NegativeGenConfig::balanced(settings.neg_quota, settings.neg_seed);
    let neg_train = generate_negative_words(&train_cfg, &inventory, &valid_set)?;

    let mut excluded: HashSet<Word> = valid_set.clone();
    excluded.extend(neg_train.iter().cloned());
    let eval_cfg = NegativeGenConfig::balanced(
        settings.neg_quota,
        label_seed(settings.neg_seed, "eval-negatives"),
    );
    let neg_eval = generate_negative_words(&eval_cfg, &inventory, &excluded)?;

    let (negative_atoms, derive_warnings) =
        derive_negative_examples(&neg_train, &positive_atoms, &inventory, settings.neg_seed);
    warnings.extend(derive_warnings);

    let mut prefix_set = ExampleSet::new(Direction::Prefix.predicate());
    let mut suffix_set = ExampleSet::new(Direction::Suffix.predicate());
    for example in &positives {
        let set = match example.direction {
            Direction::Prefix => &mut prefix_set,
            Direction::Suffix => &mut suffix_set,
        };
        set.positives.push(example.to_literal());
    }
    for example in &negative_atoms {
        let set = match example.direction {
            Direction::Prefix => &mut prefix_set,
            Direction::Suffix => &mut suffix_set,
        };
        set.negatives.push(example.to_literal());
    }

    ensure_dir(out_dir)?;
    let header = settings.header_lines();
    let mut files = Vec::new();
    let mut emit = |name: &str, contents: String| -> Result<(), SessionError> {
        let path = out_dir.join(name);
        write(&path, &contents)?;
        files.push(path);
        Ok(())
    };
    emit("prefix.examples", prefix_set.render(&header))?;
    emit("suffix.examples", suffix_set.render(&header))?;
    emit("train.words", render_lexicon(&train_words, &header))?;
    emit("eval.words", render_lexicon(&eval_words, &header))?;
    emit("negatives-train.words", render_lexicon(&neg_train, &header))?;
    emit("negatives-eval.words", render_lexicon(&neg_eval, &header))?;

    Ok(GenerateOutcome {
        files,
        warnings,
        train_words: train_words.len(),
        eval_words: eval_words.len(),
        prefix_counts: (prefix_set.positives.len(), prefix_set.negatives.len()),
        suffix_counts: (suffix_set.positives.len(), suffix_set.negatives.len()),
    })
}

#[derive(Debug)]
pub struct LearnOutcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    /// (target, clause count) per session, in input order.
    pub clause_counts: Vec<(String, usize)>,
}

/// Runs one learning session per example file, concurrently, and writes
/// `<target>.theory` for each. Warnings from any session are collected;
/// the caller maps them to exit status.
pub fn run_learn(
    settings: &Settings,
    example_paths: &[PathBuf],
    out_dir: &Path,
) -> Result<LearnOutcome, SessionError> {
    let inventory = settings.load_inventory()?;
    let bg = background(settings.background, &inventory);
    let program = Program::new(bg.clauses.clone());
    let params = settings.search_params();

    let mut sets = Vec::new();
    for path in example_paths {
        let set = ExampleSet::parse(&read(path)?).map_err(|source| SessionError::Examples {
            path: path.clone(),
            source,
        })?;
        if set.positives.is_empty() {
            return Err(SessionError::Invalid(format!(
                "{}: no positive examples",
                path.display()
            )));
        }
        if sets.iter().any(|s: &ExampleSet| s.target == set.target) {
            return Err(SessionError::Invalid(format!(
                "{}: duplicate target {}",
                path.display(),
                set.target
            )));
        }
        sets.push(set);
    }

    // The affix tasks are independent: each session gets its own head mode
    // over the shared background, so they can run in parallel.
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = sets
            .iter()
            .map(|set| {
                let bg = &bg;
                let program = &program;
                let params = &params;
                scope.spawn(move || {
                    let mut modes = vec![head_mode(&set.target)];
                    modes.extend(bg.modes.iter().cloned());
                    learn(
                        &set.positives,
                        &set.negatives,
                        program,
                        &modes,
                        settings.evalfn,
                        params,
                    )
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    ensure_dir(out_dir)?;
    let header = settings.header_lines();
    let mut files = Vec::new();
    let mut warnings = Vec::new();
    let mut clause_counts = Vec::new();
    for (set, result) in sets.iter().zip(results) {
        let mut lines = header.clone();
        lines.push(format!(
            "examples positives={} negatives={}",
            set.positives.len(),
            set.negatives.len()
        ));
        let path = out_dir.join(format!("{}.theory", set.target));
        write(&path, &result.theory.render(&lines))?;
        files.push(path);
        clause_counts.push((set.target.clone(), result.theory.clauses.len()));
        warnings.extend(
            result
                .warnings
                .into_iter()
                .map(|w| format!("{}: {w}", set.target)),
        );
    }

    Ok(LearnOutcome {
        files,
        warnings,
        clause_counts,
    })
}

#[derive(Debug)]
pub struct EvaluateOutcome {
    pub files: Vec<PathBuf>,
    pub report: EvaluationReport,
    pub warnings: Vec<String>,
}

/// Scores a learned theory (one or more theory files, typically prefix
/// and suffix) against labeled word lists. Writes `evaluation.txt`
/// (table) and `evaluation.kv` (machine-readable) under `out_dir`.
/// Warns when a theory's stamped background differs from the one in
/// force: clauses over the wrong feature predicates silently prove
/// nothing.
pub fn run_evaluate(
    settings: &Settings,
    theory_paths: &[PathBuf],
    pos_path: &Path,
    neg_path: &Path,
    out_dir: &Path,
) -> Result<EvaluateOutcome, SessionError> {
    let inventory = settings.load_inventory()?;
    let bg = background(settings.background, &inventory);

    let mut clauses: Vec<Clause> = Vec::new();
    let mut warnings = Vec::new();
    for path in theory_paths {
        let src = read(path)?;
        for line in src.lines() {
            if let Some(stamped) = line.strip_prefix("% background=") {
                if stamped.trim() != settings.background.to_string() {
                    warnings.push(format!(
                        "{}: learned with background={}, evaluating with background={}",
                        path.display(),
                        stamped.trim(),
                        settings.background
                    ));
                }
            }
        }
        let theory = Theory::parse(&src).map_err(|source| SessionError::Theory {
            path: path.clone(),
            source,
        })?;
        clauses.extend(theory.clauses);
    }
    let pos_words = parse_lexicon(&read(pos_path)?);
    let neg_words = parse_lexicon(&read(neg_path)?);

    let report = evaluate(
        &clauses,
        &bg,
        &inventory,
        &pos_words,
        &neg_words,
        settings.derivation_depth,
    );

    ensure_dir(out_dir)?;
    let table_path = out_dir.join("evaluation.txt");
    write(&table_path, &report.render_table())?;
    let kv_path = out_dir.join("evaluation.kv");
    write(&kv_path, &report.render_machine(&settings.header_lines()))?;

    Ok(EvaluateOutcome {
        files: vec![table_path, kv_path],
        report,
        warnings,
    })
}

#[derive(Debug)]
pub struct BaselineOutcome {
    pub files: Vec<PathBuf>,
    pub report: EvaluationReport,
}

/// Scores the hand-written sonority model against labeled word lists.
/// Writes `baseline.txt` and `baseline.kv` under `out_dir`.
pub fn run_baseline(
    settings: &Settings,
    lexicon_path: &Path,
    negatives_path: &Path,
    model_config: Option<&Path>,
    out_dir: &Path,
) -> Result<BaselineOutcome, SessionError> {
    let inventory = settings.load_inventory()?;
    let mut model = SonorityModel::new(&inventory);
    if let Some(path) = model_config {
        model
            .apply_config(&read(path)?)
            .map_err(|source| SessionError::ModelConfig {
                path: path.to_path_buf(),
                source,
            })?;
    }
    let pos_words = parse_lexicon(&read(lexicon_path)?);
    let neg_words = parse_lexicon(&read(negatives_path)?);
    let report = model.evaluate(&pos_words, &neg_words);

    ensure_dir(out_dir)?;
    let table_path = out_dir.join("baseline.txt");
    write(&table_path, &report.render_table())?;
    let kv_path = out_dir.join("baseline.kv");
    write(&kv_path, &report.render_machine(&settings.header_lines()))?;

    Ok(BaselineOutcome {
        files: vec![table_path, kv_path],
        report,
    })
}

/// Emits the selected background theory as a clause file and, when asked,
/// the matching mode declarations (head modes for both affix tasks plus
/// the system's body modes).
pub fn run_export_background(
    settings: &Settings,
    out_path: &Path,
    modes_path: Option<&Path>,
) -> Result<Vec<PathBuf>, SessionError> {
    let inventory = settings.load_inventory()?;
    let bg = background(settings.background, &inventory);

    let mut clauses_text = String::new();
    let _ = writeln!(clauses_text, "% background system={}", settings.background);
    for line in settings.header_lines() {
        let _ = writeln!(clauses_text, "% {line}");
    }
    for clause in &bg.clauses {
        let _ = writeln!(clauses_text, "{clause}");
    }
    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            ensure_dir(parent)?;
        }
    }
    write(out_path, &clauses_text)?;
    let mut files = vec![out_path.to_path_buf()];

    if let Some(modes_path) = modes_path {
        let mut modes_text = String::new();
        let _ = writeln!(modes_text, "% modes system={}", settings.background);
        for target in ["prefix", "suffix"] {
            let _ = writeln!(modes_text, "{}", head_mode(target));
        }
        for mode in &bg.modes {
            let _ = writeln!(modes_text, "{mode}");
        }
        if let Some(parent) = modes_path.parent() {
            if !parent.as_os_str().is_empty() {
                ensure_dir(parent)?;
            }
        }
        write(modes_path, &modes_text)?;
        files.push(modes_path.to_path_buf());
    }
    Ok(files)
}
