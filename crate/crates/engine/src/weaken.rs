//! The weaken operator: given a canonical formula not satisfied by a state,
//! compute the subsumption-minimal canonical formulas that are subsumed by it
//! and satisfied by the state. Lifting it over an LSet implements the join of
//! an abstract element with the abstraction of a state.

use std::sync::Arc;

use thiserror::Error;

use fol::structure::assignments;
use fol::{EvalError, QuantKind, State};
use lang::{
    bottom, canonicalize, compare, is_canonical, minimize, satisfies, Formula, LanguageSpec,
    VarBlock,
};

use crate::antichain::Antichain;
use crate::lset::LSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeakenError {
    #[error("input formula is not canonical")]
    NotCanonical,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Counters observed during one weakening.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WeakenStats {
    /// Largest intermediate antichain while chaining a universal quantifier
    /// through its assignments.
    pub peak_chain: usize,
}

/// Weakens a single canonical formula with respect to a state. The result is
/// an antichain of canonical formulas, sorted by the total order: the minimal
/// weakenings of `phi` satisfied by `s`. If `s` already satisfies `phi` the
/// result is just `phi`; the result is empty when no weakening exists.
pub fn weaken_formula(
    spec: &LanguageSpec,
    phi: &Formula,
    s: &State,
) -> Result<Vec<Formula>, WeakenError> {
    Ok(weaken_formula_with_stats(spec, phi, s)?.0)
}

/// Like [`weaken_formula`], also reporting instrumentation counters.
pub fn weaken_formula_with_stats(
    spec: &LanguageSpec,
    phi: &Formula,
    s: &State,
) -> Result<(Vec<Formula>, WeakenStats), WeakenError> {
    if !is_canonical(spec, phi) {
        return Err(WeakenError::NotCanonical);
    }
    let mut stats = WeakenStats::default();
    let mut result = weaken_rec(spec, phi, s, &mut stats)?;
    result.sort_by(|a, b| compare(spec, a, b));
    Ok((result, stats))
}

fn weaken_rec(
    spec: &LanguageSpec,
    phi: &Formula,
    s: &State,
    stats: &mut WeakenStats,
) -> Result<Vec<Formula>, EvalError> {
    if satisfies(s, spec, phi)? {
        return Ok(vec![phi.clone()]);
    }
    match (spec, phi) {
        (LanguageSpec::Atoms(atoms), Formula::Bottom) => {
            let mut out = Vec::new();
            for lit in atoms.literals() {
                if s.holds(lit)? {
                    out.push(Formula::Lit(lit.clone()));
                }
            }
            Ok(out)
        }
        (LanguageSpec::Atoms(_), Formula::Lit(_)) => Ok(Vec::new()),
        (LanguageSpec::Or2(l, r), Formula::Or(a, b)) => {
            // weaken exactly one side
            let mut out = Vec::new();
            for psi in weaken_rec(l, a, s, stats)? {
                out.push(Formula::Or(Box::new(psi), b.clone()));
            }
            for psi in weaken_rec(r, b, s, stats)? {
                out.push(Formula::Or(a.clone(), Box::new(psi)));
            }
            Ok(out)
        }
        (LanguageSpec::And2(l, r), Formula::And(a, b)) => {
            // both sides must be weakened; take the product
            let left = weaken_rec(l, a, s, stats)?;
            let right = weaken_rec(r, b, s, stats)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for psi1 in &left {
                for psi2 in &right {
                    out.push(Formula::And(Box::new(psi1.clone()), Box::new(psi2.clone())));
                }
            }
            Ok(out)
        }
        (LanguageSpec::OrK(k, inner), Formula::OrSeq(fs)) => {
            let mut pool = Vec::new();
            // weaken one existing disjunct, re-sorting to restore canonicity
            for i in 0..fs.len() {
                for psi in weaken_rec(inner, &fs[i], s, stats)? {
                    let mut seq = fs.clone();
                    seq[i] = psi;
                    seq.sort_by(|a, b| compare(inner, a, b));
                    pool.push(Formula::OrSeq(seq));
                }
            }
            // or append a weakening of the inner bottom while below the bound
            if fs.len() < *k {
                for psi in weaken_rec(inner, &bottom(inner), s, stats)? {
                    let mut seq = fs.clone();
                    seq.push(psi);
                    seq.sort_by(|a, b| compare(inner, a, b));
                    pool.push(Formula::OrSeq(seq));
                }
            }
            Ok(minimize(spec, pool))
        }
        (LanguageSpec::AndW(inner), Formula::AndSeq(fs)) => {
            // weaken every conjunct and pool the results into one conjunction
            let mut pool = Vec::new();
            for f in fs {
                pool.extend(weaken_rec(inner, f, s, stats)?);
            }
            let conjuncts = minimize(inner, pool);
            if conjuncts.is_empty() {
                // no conjunct can be weakened to hold in s, and the empty
                // conjunction is not a formula
                Ok(Vec::new())
            } else {
                Ok(vec![Formula::AndSeq(conjuncts)])
            }
        }
        (LanguageSpec::Exists(block, inner), Formula::Quant(QuantKind::Exists, body)) => {
            let weakened =
                weaken_exists_bodies(spec, block, inner, body, s, stats)?;
            Ok(minimize(spec, weakened))
        }
        (LanguageSpec::Forall(block, inner), Formula::Quant(QuantKind::Forall, body)) => {
            let weakened = weaken_forall_chain(spec, block, inner, body, s, stats)?;
            Ok(minimize(spec, weakened))
        }
        (LanguageSpec::Ef(block, inner), Formula::Quant(kind, body)) => {
            // existential formulas weaken by the existential rule alone;
            // universal ones may also drop to an existential quantifier
            let mut pool = weaken_exists_bodies(spec, block, inner, body, s, stats)?;
            if *kind == QuantKind::Forall {
                pool.extend(weaken_forall_chain(spec, block, inner, body, s, stats)?);
            }
            Ok(minimize(spec, pool))
        }
        _ => panic!("formula shape does not match language spec"),
    }
}

/// The existential rule: weaken the body under every assignment of the block
/// and re-canonicalize under the quantifier. `quant_spec` is the quantifier
/// node itself, used for canonicalization.
fn weaken_exists_bodies(
    quant_spec: &LanguageSpec,
    block: &VarBlock,
    inner: &LanguageSpec,
    body: &Formula,
    s: &State,
    stats: &mut WeakenStats,
) -> Result<Vec<Formula>, EvalError> {
    let mut bodies: Vec<Formula> = Vec::new();
    for nu in assignments(block.vars(), &s.structure) {
        for psi in weaken_rec(inner, body, &s.updated(&nu), stats)? {
            bodies.push(psi);
        }
    }
    // identical bodies arise from many assignments; dedup before the
    // quantifier-level canonicalization
    bodies.sort_by(|a, b| compare(inner, a, b));
    bodies.dedup();
    let mut out = Vec::with_capacity(bodies.len());
    for b in bodies {
        out.push(canonicalize(
            quant_spec,
            &Formula::Quant(QuantKind::Exists, Box::new(b)),
        ));
    }
    out.sort_by(|a, b| compare(quant_spec, a, b));
    out.dedup();
    Ok(out)
}

/// The universal rule: chain the body's weakenings through every assignment
/// of the block, pruning each intermediate result to an antichain, then
/// re-canonicalize under the quantifier.
fn weaken_forall_chain(
    quant_spec: &LanguageSpec,
    block: &VarBlock,
    inner: &LanguageSpec,
    body: &Formula,
    s: &State,
    stats: &mut WeakenStats,
) -> Result<Vec<Formula>, EvalError> {
    let mut chain: Vec<Formula> = vec![body.clone()];
    for nu in assignments(block.vars(), &s.structure) {
        let updated = s.updated(&nu);
        let mut next = Vec::new();
        for chi in &chain {
            next.extend(weaken_rec(inner, chi, &updated, stats)?);
        }
        chain = minimize(inner, next);
        stats.peak_chain = stats.peak_chain.max(chain.len());
        if chain.is_empty() {
            return Ok(Vec::new());
        }
    }
    let mut out = Vec::with_capacity(chain.len());
    for chi in chain {
        out.push(canonicalize(
            quant_spec,
            &Formula::Quant(QuantKind::Forall, Box::new(chi)),
        ));
    }
    out.sort_by(|a, b| compare(quant_spec, a, b));
    out.dedup();
    Ok(out)
}

/// What one in-place set weakening did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakenSetResult {
    pub removed: Vec<Formula>,
    pub inserted: Vec<Formula>,
    pub stats: WeakenStats,
}

/// In-place weakening of an antichain stored in an LSet: remove the formulas
/// the state falsifies, weaken each of them, and insert the weakenings back
/// in ascending total order, skipping any formula already subsumed. With the
/// total order extending subsumption, the set stays an antichain.
pub fn weaken_set(r: &mut LSet, s: &State, threads: usize) -> Result<WeakenSetResult, WeakenError> {
    let spec = Arc::clone(r.spec());
    let unsatisfied = r.unsat(s)?;
    for phi in &unsatisfied {
        r.remove(phi);
    }
    let (pools, stats) = weaken_all(&spec, &unsatisfied, s, threads)?;
    let mut pool: Vec<Formula> = pools.into_iter().flatten().collect();
    pool.sort_by(|a, b| compare(&spec, a, b));
    pool.dedup();
    let mut inserted = Vec::new();
    for phi in pool {
        if !r.is_subsumed(&phi) {
            r.insert(phi.clone());
            inserted.push(phi);
        }
    }
    Ok(WeakenSetResult {
        removed: unsatisfied,
        inserted,
        stats,
    })
}

/// Weakens a batch of formulas, splitting the batch across worker threads
/// when asked to. Results keep the input order, so the outcome is identical
/// for any thread count.
fn weaken_all(
    spec: &Arc<LanguageSpec>,
    formulas: &[Formula],
    s: &State,
    threads: usize,
) -> Result<(Vec<Vec<Formula>>, WeakenStats), WeakenError> {
    let mut stats = WeakenStats::default();
    if threads <= 1 || formulas.len() <= 1 {
        let mut pools = Vec::with_capacity(formulas.len());
        for phi in formulas {
            let (pool, st) = weaken_formula_with_stats(spec, phi, s)?;
            stats.peak_chain = stats.peak_chain.max(st.peak_chain);
            pools.push(pool);
        }
        return Ok((pools, stats));
    }
    type Batch = Result<Vec<(Vec<Formula>, WeakenStats)>, WeakenError>;
    let chunk = formulas.len().div_ceil(threads);
    let results: Vec<Batch> = std::thread::scope(|scope| {
            let handles: Vec<_> = formulas
                .chunks(chunk)
                .map(|batch| {
                    scope.spawn(move || {
                        batch
                            .iter()
                            .map(|phi| weaken_formula_with_stats(spec, phi, s))
                            .collect()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
    let mut pools = Vec::with_capacity(formulas.len());
    for batch in results {
        for (pool, st) in batch? {
            stats.peak_chain = stats.peak_chain.max(st.peak_chain);
            pools.push(pool);
        }
    }
    Ok((pools, stats))
}

/// The abstraction of a finite state sequence: iterated in-place weakening
/// starting from the bottom element. The resulting antichain represents the
/// set of all language formulas satisfied by every state.
pub fn abstract_states(
    spec: &Arc<LanguageSpec>,
    states: &[State],
    threads: usize,
) -> Result<Antichain, WeakenError> {
    let mut r = LSet::new(Arc::clone(spec));
    r.insert(bottom(spec));
    for s in states {
        weaken_set(&mut r, s, threads)?;
    }
    Ok(Antichain::from_canonical(Arc::clone(spec), r.iter_sorted()))
}
