//! Brute-force reference implementations, transcribed from the defining
//! equations and deliberately slow. They share nothing with the engine
//! beyond the kernel's evaluation and the language definitions they are
//! stated in, and abort loudly when a budget is exceeded rather than
//! sampling.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use fol::structure::assignments;
use fol::{EvalError, Signature, Sort, State, Var};
use lang::{
    canonicalize, compare, enumerate_canonical, enumerate_formulas, satisfies, subsumes,
    EnumError, Formula, LanguageSpec,
};
use tsys::{Bounds, ProtocolModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_formulas: usize,
    pub max_structures: usize,
    pub max_states: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_formulas: 100_000,
            max_structures: 100_000,
            max_states: 1_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<EnumError> for OracleError {
    fn from(e: EnumError) -> Self {
        OracleError::Budget(e.to_string())
    }
}

impl From<fol::enumerate::BoundsError> for OracleError {
    fn from(e: fol::enumerate::BoundsError) -> Self {
        OracleError::Budget(e.to_string())
    }
}

/// The weaken operator computed literally from its definition: the minimal
/// canonicalizations of all language formulas subsumed-from `phi` and
/// satisfied by `s`.
pub fn naive_weaken(
    spec: &LanguageSpec,
    phi: &Formula,
    s: &State,
    budget: &OracleBudget,
) -> Result<Vec<Formula>, OracleError> {
    let mut candidates = Vec::new();
    for psi in enumerate_formulas(spec, budget.max_formulas)? {
        if subsumes(spec, phi, &psi) && satisfies(s, spec, &psi)? {
            candidates.push(canonicalize(spec, &psi));
        }
    }
    Ok(naive_min(spec, candidates))
}

/// Subsumption-minimal elements by the quadratic definition, deduplicated
/// and sorted.
pub fn naive_min(spec: &LanguageSpec, mut formulas: Vec<Formula>) -> Vec<Formula> {
    formulas.sort_by(|a, b| compare(spec, a, b));
    formulas.dedup();
    formulas
        .iter()
        .filter(|f| {
            !formulas
                .iter()
                .any(|g| g != *f && subsumes(spec, g, f))
        })
        .cloned()
        .collect()
}

/// The upward closure of a formula set within the whole language, by
/// enumeration.
pub fn upward_closure(
    spec: &LanguageSpec,
    base: &[Formula],
    budget: &OracleBudget,
) -> Result<Vec<Formula>, OracleError> {
    let mut out = Vec::new();
    for phi in enumerate_formulas(spec, budget.max_formulas)? {
        if base.iter().any(|psi| subsumes(spec, psi, &phi)) {
            out.push(phi);
        }
    }
    Ok(out)
}

/// Semantic entailment over bounded structures: no state within the bounds
/// (under any assignment of the language's free variables) satisfies `phi`
/// but not `psi`.
pub fn semantic_entails(
    spec: &LanguageSpec,
    sig: &Arc<Signature>,
    phi: &Formula,
    psi: &Formula,
    bounds: &BTreeMap<Sort, usize>,
) -> Result<bool, OracleError> {
    let free: Vec<Var> = spec
        .free_vars()
        .into_iter()
        .map(|(name, sort)| Var::new(name, sort))
        .collect();
    for structure in fol::structures_up_to(sig, bounds)? {
        let structure = Arc::new(structure);
        for nu in assignments(&free, &structure) {
            let state = State::with_assignment(Arc::clone(&structure), nu);
            if satisfies(&state, spec, phi)? && !satisfies(&state, spec, psi)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The unsat filter by direct iteration.
pub fn naive_unsat(
    spec: &LanguageSpec,
    set: &[Formula],
    s: &State,
) -> Result<Vec<Formula>, OracleError> {
    let mut out = Vec::new();
    for f in set {
        if !satisfies(s, spec, f)? {
            out.push(f.clone());
        }
    }
    out.sort_by(|a, b| compare(spec, a, b));
    Ok(out)
}

/// The subsuming filter by direct pairwise subsumption.
pub fn naive_subsuming(spec: &LanguageSpec, set: &[Formula], phi: &Formula) -> Vec<Formula> {
    let mut out: Vec<Formula> = set
        .iter()
        .filter(|psi| subsumes(spec, psi, phi))
        .cloned()
        .collect();
    out.sort_by(|a, b| compare(spec, a, b));
    out
}

/// Successor states transcribed from the guarded-update semantics, kept
/// independent of the engine's implementation.
fn oracle_successors(model: &ProtocolModel, s: &State) -> Result<Vec<State>, OracleError> {
    let mut out: Vec<State> = Vec::new();
    for action in &model.actions {
        for params in assignments(&action.params, &s.structure) {
            let pre = State::with_assignment(Arc::clone(&s.structure), params.clone());
            if !action.guard.eval(&pre)? {
                continue;
            }
            let mut post = (*s.structure).clone();
            for rel in &model.signature.relations {
                let Some(update) = action.update_for(&rel.name) else {
                    continue; // frame: unchanged
                };
                let mut table = std::collections::BTreeSet::new();
                for point in assignments(&update.vars, &s.structure) {
                    let env =
                        State::with_assignment(Arc::clone(&s.structure), params.updated(&point));
                    if update.formula.eval(&env)? {
                        let tuple: Vec<usize> = update
                            .vars
                            .iter()
                            .map(|v| env.assignment.get(&v.name).unwrap())
                            .collect();
                        table.insert(tuple);
                    }
                }
                post.relations.insert(rel.name.clone(), table);
            }
            let state = State::new(Arc::new(post));
            if !out.contains(&state) {
                out.push(state);
            }
        }
    }
    Ok(out)
}

/// The Kleene iteration for the least fixpoint of the best abstract
/// transformer, over the canonical formulas only: repeatedly drop formulas
/// violated by an initial state or by a successor of a bounded structure
/// satisfying all remaining formulas, until stable. The surviving set is the
/// upward-closed fixpoint restricted to canonical representatives.
pub fn kleene_lfp(
    model: &ProtocolModel,
    bounds: &Bounds,
    spec: &LanguageSpec,
    budget: &OracleBudget,
) -> Result<Vec<Formula>, OracleError> {
    let mut formulas = enumerate_canonical(spec, budget.max_formulas)?;
    let structures: Vec<State> = fol::structures_up_to(&model.signature, &bounds.0)?
        .map(|st| State::new(Arc::new(st)))
        .collect();
    if structures.len() > budget.max_structures {
        return Err(OracleError::Budget(format!(
            "{} structures exceed the budget",
            structures.len()
        )));
    }
    let mut inits = Vec::new();
    for s in &structures {
        if model.init.eval(s)? {
            inits.push(s.clone());
        }
    }
    loop {
        // states to preserve against: initial states plus successors of all
        // bounded structures satisfying the current conjunction
        let mut targets: Vec<State> = inits.clone();
        for s in &structures {
            let mut sat_all = true;
            for f in &formulas {
                if !satisfies(s, spec, f)? {
                    sat_all = false;
                    break;
                }
            }
            if sat_all {
                targets.extend(oracle_successors(model, s)?);
            }
        }
        let mut kept = Vec::with_capacity(formulas.len());
        'formulas: for f in &formulas {
            for t in &targets {
                if !satisfies(t, spec, f)? {
                    continue 'formulas;
                }
            }
            kept.push(f.clone());
        }
        if kept.len() == formulas.len() {
            return Ok(kept);
        }
        formulas = kept;
    }
}
