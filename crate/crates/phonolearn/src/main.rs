//! Command-line entry point.
//!
//! Exit codes: 0 on success, 1 when a subcommand completed with
//! warnings (skipped seeds, background mismatches), 2 on usage,
//! config, or I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phonolearn::session::{
    run_baseline, run_evaluate, run_export_background, run_generate, run_learn, Settings,
};

#[derive(Parser)]
#[command(
    name = "phonolearn",
    version,
    about = "Phonotactic grammar workbench: learns affix-licensing rules from a lexicon",
    after_help = "Settings resolve in three layers: built-in defaults, then an optional\n\
                  `key = value` config file (--config), then command-line flags."
)]
struct Cli {
    /// Config file of `key = value` lines; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Settings every subcommand accepts. Each flag mirrors a config-file key.
#[derive(Args)]
struct SettingsArgs {
    /// Phoneme inventory: the bundled name `dutch` or a file path.
    #[arg(long, value_name = "NAME|FILE")]
    inventory: Option<String>,
    /// Background feature system: ipa, booij, or sonority.
    #[arg(long, value_name = "SYSTEM")]
    background: Option<String>,
    /// Clause evaluation function: laplace or coverage.
    #[arg(long, value_name = "FN")]
    evalfn: Option<String>,
    /// Per-clause training accuracy floor, e.g. 0.85 or 17/20.
    #[arg(long, value_name = "FRACTION")]
    min_accuracy: Option<String>,
    /// Clause size cap, counting the head literal.
    #[arg(long, value_name = "N")]
    max_clause_literals: Option<String>,
    /// Variable chaining rounds during saturation.
    #[arg(long, value_name = "N")]
    variable_depth: Option<String>,
    /// Resolution-step bound for every derivation.
    #[arg(long, value_name = "N")]
    derivation_depth: Option<String>,
    /// Cap on candidate clauses scored during one reduction.
    #[arg(long, value_name = "N")]
    open_list_bound: Option<String>,
    /// Cover-loop seed order: corpus or shuffled.
    #[arg(long, value_name = "ORDER")]
    seed_order: Option<String>,
    /// Seed for shuffled seed order.
    #[arg(long, value_name = "SEED")]
    search_seed: Option<String>,
    /// Seed for dataset generation (splits, negative sampling, tie breaks).
    #[arg(long, value_name = "SEED")]
    neg_seed: Option<String>,
    /// Negative words sampled per (side, affix length) bucket.
    #[arg(long, value_name = "N")]
    neg_quota: Option<String>,
    /// Evaluation holdout: a word count or a fraction like 0.1.
    #[arg(long, value_name = "N|FRACTION")]
    eval_split: Option<String>,
}

impl SettingsArgs {
    /// Layers these flags over `settings`. Applied after the config file
    /// so flags win.
    fn apply(&self, settings: &mut Settings) -> Result<(), String> {
        let pairs: [(&str, &Option<String>); 13] = [
            ("inventory", &self.inventory),
            ("background", &self.background),
            ("evalfn", &self.evalfn),
            ("min_accuracy", &self.min_accuracy),
            ("max_clause_literals", &self.max_clause_literals),
            ("variable_depth", &self.variable_depth),
            ("derivation_depth", &self.derivation_depth),
            ("open_list_bound", &self.open_list_bound),
            ("seed_order", &self.seed_order),
            ("search_seed", &self.search_seed),
            ("neg_seed", &self.neg_seed),
            ("neg_quota", &self.neg_quota),
            ("eval_split", &self.eval_split),
        ];
        for (key, value) in pairs {
            if let Some(value) = value {
                settings.set(key, value).map_err(|e| format!("--{}: {e}", key.replace('_', "-")))?;
            }
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build affix example files and train/eval splits from a lexicon.
    Generate {
        /// Lexicon file: one word per line, symbols separated by spaces.
        #[arg(long, value_name = "FILE")]
        lexicon: PathBuf,
        /// Output directory for example and word files.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        settings: SettingsArgs,
    },
    /// Learn a theory per example file (prefix and suffix run concurrently).
    Learn {
        /// Example file (repeatable; typically prefix.examples and
        /// suffix.examples).
        #[arg(long = "examples", value_name = "FILE", required = true)]
        examples: Vec<PathBuf>,
        /// Output directory for <target>.theory files.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        settings: SettingsArgs,
    },
    /// Score theory files against labeled word lists.
    Evaluate {
        /// Theory file (repeatable; pass both prefix and suffix theories).
        #[arg(long = "theory", value_name = "FILE", required = true)]
        theories: Vec<PathBuf>,
        /// Positive (real) words, one per line.
        #[arg(long, value_name = "FILE")]
        pos: PathBuf,
        /// Negative (non-)words, one per line.
        #[arg(long, value_name = "FILE")]
        neg: PathBuf,
        /// Output directory for evaluation.txt and evaluation.kv.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        settings: SettingsArgs,
    },
    /// Score the hand-written sonority model against labeled word lists.
    Baseline {
        /// Positive (real) words, one per line.
        #[arg(long, value_name = "FILE")]
        lexicon: PathBuf,
        /// Negative (non-)words, one per line.
        #[arg(long, value_name = "FILE")]
        negatives: PathBuf,
        /// Sonority model overrides (scale.<symbol>, license.s, filter.*).
        #[arg(long, value_name = "FILE")]
        model_config: Option<PathBuf>,
        /// Output directory for baseline.txt and baseline.kv.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        settings: SettingsArgs,
    },
    /// Write a background feature system as clause and mode files.
    ExportBackground {
        /// Output file for the clause-syntax background theory.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Optional output file for mode declarations.
        #[arg(long, value_name = "FILE")]
        modes_out: Option<PathBuf>,
        #[command(flatten)]
        settings: SettingsArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn resolve_settings(config: Option<&PathBuf>, args: &SettingsArgs) -> Result<Settings, String> {
    let mut settings = Settings::default();
    if let Some(path) = config {
        let src = std::fs::read_to_string(path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        settings
            .apply_config(&src)
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    args.apply(&mut settings)?;
    Ok(settings)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Generate {
            lexicon,
            out,
            settings,
        } => {
            let settings = resolve_settings(cli.config.as_ref(), settings)?;
            let outcome =
                run_generate(&settings, lexicon, out).map_err(|e| e.to_string())?;
            for warning in &outcome.warnings {
                eprintln!("warning: {warning}");
            }
            println!(
                "train words: {}  eval words: {}",
                outcome.train_words, outcome.eval_words
            );
            println!(
                "prefix task: {} positive / {} negative atoms",
                outcome.prefix_counts.0, outcome.prefix_counts.1
            );
            println!(
                "suffix task: {} positive / {} negative atoms",
                outcome.suffix_counts.0, outcome.suffix_counts.1
            );
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Learn {
            examples,
            out,
            settings,
        } => {
            let settings = resolve_settings(cli.config.as_ref(), settings)?;
            let outcome =
                run_learn(&settings, examples, out).map_err(|e| e.to_string())?;
            for warning in &outcome.warnings {
                eprintln!("warning: {warning}");
            }
            for (target, clauses) in &outcome.clause_counts {
                println!("{target}: {clauses} clauses");
            }
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            if outcome.warnings.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Evaluate {
            theories,
            pos,
            neg,
            out,
            settings,
        } => {
            let settings = resolve_settings(cli.config.as_ref(), settings)?;
            let outcome = run_evaluate(&settings, theories, pos, neg, out)
                .map_err(|e| e.to_string())?;
            for warning in &outcome.warnings {
                eprintln!("warning: {warning}");
            }
            print!("{}", outcome.report.render_table());
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            if outcome.warnings.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Baseline {
            lexicon,
            negatives,
            model_config,
            out,
            settings,
        } => {
            let settings = resolve_settings(cli.config.as_ref(), settings)?;
            let outcome = run_baseline(
                &settings,
                lexicon,
                negatives,
                model_config.as_deref(),
                out,
            )
            .map_err(|e| e.to_string())?;
            print!("{}", outcome.report.render_table());
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportBackground {
            out,
            modes_out,
            settings,
        } => {
            let settings = resolve_settings(cli.config.as_ref(), settings)?;
            let files = run_export_background(&settings, out, modes_out.as_deref())
                .map_err(|e| e.to_string())?;
            for file in &files {
                println!("wrote {}", file.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
