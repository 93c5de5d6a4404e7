//! Affix-licensing phonotactics workbench: a Horn-clause interpreter,
//! a Progol-style rule learner, phoneme feature systems, lexicon
//! example generation, a sonority-based reference acceptor, and
//! whole-word evaluation.

pub mod baseline;
pub mod dataset;
pub mod evaluation;
pub mod ilp;
pub mod logic;
pub mod phonology;
pub mod session;
