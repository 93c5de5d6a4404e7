//! Bottom-clause construction: the most specific clause, within the mode
//! and depth bounds, that a seed example satisfies against the background.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::logic::{solve, Clause, Literal, Program, Term};

use super::modes::{ArgMode, ModeDeclaration, ModeKind};
use super::SearchParams;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SaturationError {
    #[error("seed {seed} matches no head mode declaration")]
    RejectedSeed { seed: String },
    #[error("seed {seed} is not ground")]
    NonGroundSeed { seed: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottomClause {
    pub clause: Clause,
    pub seed: Literal,
    /// The body literals before inverse substitution, parallel to
    /// `clause.body`: each variable replaced by the ground value it
    /// stands for in the seed's derivation.
    pub ground_body: Vec<Literal>,
    /// Chaining round at which each body literal entered, parallel to
    /// `clause.body`. Head variables sit at depth 0.
    pub literal_depth_map: Vec<usize>,
    /// Variables each body literal consumes at its input positions;
    /// refinement may only append a literal once all of these are bound.
    pub literal_inputs: Vec<Vec<String>>,
    /// Variables each body literal introduces at its output positions.
    pub literal_outputs: Vec<Vec<String>>,
    /// Variables bound by the head's input positions.
    pub head_vars: Vec<String>,
}

struct VarEntry {
    ty: String,
    value: Term,
    depth: usize,
    /// Head output variables are goals, not sources: they never feed
    /// body-literal inputs.
    available: bool,
    name: String,
}

struct VarTable {
    by_value: HashMap<(String, Term), usize>,
    entries: Vec<VarEntry>,
}

impl VarTable {
    fn new() -> VarTable {
        VarTable {
            by_value: HashMap::new(),
            entries: Vec::new(),
        }
    }

    fn intern(&mut self, ty: &str, value: &Term, depth: usize, available: bool) -> usize {
        let key = (ty.to_string(), value.clone());
        if let Some(&idx) = self.by_value.get(&key) {
            return idx;
        }
        let idx = self.entries.len();
        self.entries.push(VarEntry {
            ty: ty.to_string(),
            value: value.clone(),
            depth,
            available,
            name: format!("_V{idx}"),
        });
        self.by_value.insert(key, idx);
        idx
    }
}

/// Builds the bottom clause for `seed`: every deduplicated body-mode
/// literal provable from `background` plus the seed itself, whose input
/// values are reachable within `params.variable_depth` chaining rounds
/// from the head's input values.
pub fn saturate(
    seed: &Literal,
    background: &Program,
    modes: &[ModeDeclaration],
    params: &SearchParams,
) -> Result<BottomClause, SaturationError> {
    if !seed.is_ground() {
        return Err(SaturationError::NonGroundSeed {
            seed: seed.to_string(),
        });
    }
    let head_mode = modes
        .iter()
        .find(|m| {
            m.kind == ModeKind::Head && m.predicate == seed.predicate && m.arity() == seed.arity()
        })
        .ok_or_else(|| SaturationError::RejectedSeed {
            seed: seed.to_string(),
        })?;

    let mut table = VarTable::new();
    let mut head_args = Vec::with_capacity(seed.arity());
    let mut head_vars = Vec::new();
    for (role, value) in head_mode.args.iter().zip(&seed.args) {
        match role {
            ArgMode::Input(ty) => {
                let idx = table.intern(ty, value, 0, true);
                let name = table.entries[idx].name.clone();
                if !head_vars.contains(&name) {
                    head_vars.push(name.clone());
                }
                head_args.push(Term::Var(name));
            }
            ArgMode::Output(ty) => {
                let idx = table.intern(ty, value, 0, false);
                head_args.push(Term::Var(table.entries[idx].name.clone()));
            }
            ArgMode::Constant(_) => head_args.push(value.clone()),
        }
    }
    let head = Literal::new(seed.predicate.clone(), head_args);

    let seed_fact = [Clause::fact(seed.clone())];
    let mut body: Vec<Literal> = Vec::new();
    let mut ground_body: Vec<Literal> = Vec::new();
    let mut literal_depth_map: Vec<usize> = Vec::new();
    let mut literal_inputs: Vec<Vec<String>> = Vec::new();
    let mut literal_outputs: Vec<Vec<String>> = Vec::new();
    let mut emitted: HashSet<Literal> = HashSet::new();
    let mut queried: HashSet<(usize, Vec<usize>)> = HashSet::new();

    for round in 1..=params.variable_depth {
        // Values introduced in earlier rounds only; this round's outputs
        // become inputs next round.
        let horizon = table.entries.len();
        for (mode_idx, mode) in modes.iter().enumerate() {
            if mode.kind != ModeKind::Body {
                continue;
            }
            let input_positions: Vec<(usize, &str)> = mode
                .args
                .iter()
                .enumerate()
                .filter_map(|(i, role)| match role {
                    ArgMode::Input(ty) => Some((i, ty.as_str())),
                    _ => None,
                })
                .collect();
            let candidates: Vec<Vec<usize>> = input_positions
                .iter()
                .map(|(_, ty)| {
                    (0..horizon)
                        .filter(|&idx| {
                            let e = &table.entries[idx];
                            e.available && e.depth < round && e.ty == *ty
                        })
                        .collect()
                })
                .collect();
            if candidates.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut odometer = vec![0usize; candidates.len()];
            'combos: loop {
                let combo: Vec<usize> = odometer
                    .iter()
                    .zip(&candidates)
                    .map(|(&i, c)| c[i])
                    .collect();
                if queried.insert((mode_idx, combo.clone())) {
                    run_query(
                        mode,
                        &input_positions,
                        &combo,
                        background,
                        &seed_fact,
                        params,
                        round,
                        &mut table,
                        &mut emitted,
                        &mut body,
                        &mut ground_body,
                        &mut literal_depth_map,
                        &mut literal_inputs,
                        &mut literal_outputs,
                    );
                }
                // Odometer over candidate indices, rightmost fastest. A
                // mode with no input positions has the single empty combo.
                let mut pos = odometer.len();
                loop {
                    if pos == 0 {
                        break 'combos;
                    }
                    pos -= 1;
                    odometer[pos] += 1;
                    if odometer[pos] < candidates[pos].len() {
                        break;
                    }
                    odometer[pos] = 0;
                }
            }
        }
    }

    let mut clause = Clause::rule(head, body);
    rename_by_first_appearance(
        &mut clause,
        &mut head_vars,
        &mut literal_inputs,
        &mut literal_outputs,
    );
    Ok(BottomClause {
        clause,
        seed: seed.clone(),
        ground_body,
        literal_depth_map,
        literal_inputs,
        literal_outputs,
        head_vars,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_query(
    mode: &ModeDeclaration,
    input_positions: &[(usize, &str)],
    combo: &[usize],
    background: &Program,
    seed_fact: &[Clause],
    params: &SearchParams,
    round: usize,
    table: &mut VarTable,
    emitted: &mut HashSet<Literal>,
    body: &mut Vec<Literal>,
    ground_body: &mut Vec<Literal>,
    literal_depth_map: &mut Vec<usize>,
    literal_inputs: &mut Vec<Vec<String>>,
    literal_outputs: &mut Vec<Vec<String>>,
) {
    let mut chosen: HashMap<usize, usize> = HashMap::new();
    for ((pos, _), &entry) in input_positions.iter().zip(combo) {
        chosen.insert(*pos, entry);
    }
    let mut query_args = Vec::with_capacity(mode.arity());
    for (i, role) in mode.args.iter().enumerate() {
        match role {
            ArgMode::Input(_) => query_args.push(table.entries[chosen[&i]].value.clone()),
            ArgMode::Output(_) | ArgMode::Constant(_) => {
                query_args.push(Term::var(format!("_Q{i}")))
            }
        }
    }
    let query = Literal::new(mode.predicate.clone(), query_args);
    let (solutions, _) = solve(
        background,
        seed_fact,
        &query,
        params.derivation_depth,
        mode.recall.limit(),
    );
    for sol in solutions {
        let mut args = Vec::with_capacity(mode.arity());
        let mut ground_args = Vec::with_capacity(mode.arity());
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut ok = true;
        for (i, role) in mode.args.iter().enumerate() {
            match role {
                ArgMode::Input(_) => {
                    let name = table.entries[chosen[&i]].name.clone();
                    inputs.push(name.clone());
                    ground_args.push(table.entries[chosen[&i]].value.clone());
                    args.push(Term::Var(name));
                }
                ArgMode::Output(ty) => match sol.get(&format!("_Q{i}")) {
                    Some(t) if t.is_ground() => {
                        let idx = table.intern(ty, t, round, true);
                        let name = table.entries[idx].name.clone();
                        outputs.push(name.clone());
                        ground_args.push(t.clone());
                        args.push(Term::Var(name));
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                },
                ArgMode::Constant(_) => match sol.get(&format!("_Q{i}")) {
                    Some(t) if t.is_ground() => {
                        ground_args.push(t.clone());
                        args.push(t.clone());
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                },
            }
        }
        if !ok {
            continue;
        }
        let lit = Literal::new(mode.predicate.clone(), args);
        if emitted.insert(lit.clone()) {
            body.push(lit);
            ground_body.push(Literal::new(mode.predicate.clone(), ground_args));
            literal_depth_map.push(round);
            literal_inputs.push(inputs);
            literal_outputs.push(outputs);
        }
    }
}

/// Gives variables display names A, B, ..., Z, A1, B1, ... in order of
/// first appearance, head first.
fn rename_by_first_appearance(
    clause: &mut Clause,
    head_vars: &mut [String],
    literal_inputs: &mut [Vec<String>],
    literal_outputs: &mut [Vec<String>],
) {
    let mut order = Vec::new();
    clause.head.collect_vars(&mut order);
    for lit in &clause.body {
        lit.collect_vars(&mut order);
    }
    let mut map: HashMap<String, String> = HashMap::new();
    for v in order {
        if !map.contains_key(&v) {
            let idx = map.len();
            map.insert(v, display_name(idx));
        }
    }
    let rename = |v: &str| map.get(v).cloned().unwrap_or_else(|| v.to_string());
    *clause = clause.rename_vars(&rename);
    for v in head_vars.iter_mut() {
        *v = rename(v);
    }
    for vars in literal_inputs.iter_mut().chain(literal_outputs.iter_mut()) {
        for v in vars.iter_mut() {
            *v = rename(v);
        }
    }
}

fn display_name(idx: usize) -> String {
    let letter = (b'A' + (idx % 26) as u8) as char;
    if idx < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", idx / 26)
    }
}
