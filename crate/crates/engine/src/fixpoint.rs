//! Bounded-model symbolic abstraction: explicit successor computation,
//! counterexample-to-induction search, and the least fixpoint of the best
//! abstract transformer.
//!
//! The concrete transformer maps a state set to the initial states plus all
//! successors of its members; its least fixpoint is the reachable states.
//! Restricting to structures within per-sort bounds makes the transformer
//! computable by enumeration, replacing solver queries: a CTI is an initial
//! state violating the current abstraction, or a successor of a state
//! satisfying it that violates it. Weakening by each CTI until none exists
//! computes the least fixpoint of the abstract transformer, the strongest
//! inductive invariant of the bounded system expressible in the language.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use fol::enumerate::BoundsError;
use fol::structure::assignments;
use fol::{EvalError, State, Structure};
use lang::{bottom, LanguageSpec};
use tsys::{Bounds, ProtocolModel};

use crate::antichain::Antichain;
use crate::lset::LSet;
use crate::weaken::{weaken_set, WeakenError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixpointError {
    #[error("iteration cap of {0} exceeded")]
    IterationCap(usize),
    #[error("state explosion: more than {0} structures enumerated")]
    StateCap(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("weakening failed: {0}")]
    Weaken(#[from] WeakenError),
    #[error("the model declares no safety formula")]
    NoSafety,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixOpts {
    pub max_iters: Option<usize>,
    pub max_states: Option<usize>,
    pub threads: usize,
}

impl Default for FixOpts {
    fn default() -> Self {
        FixOpts {
            max_iters: None,
            max_states: None,
            threads: 1,
        }
    }
}

/// Statistics of one fixpoint run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Number of CTIs processed (weakening steps).
    pub iterations: usize,
    /// Largest representation size reached.
    pub peak_size: usize,
    /// Time spent weakening.
    pub weaken_nanos: u128,
    /// Time spent searching for CTIs.
    pub cti_nanos: u128,
    pub ctis_from_cache: usize,
    pub ctis_from_init: usize,
    pub ctis_from_scan: usize,
}

impl RunStats {
    /// Share of the tracked time spent weakening, in percent.
    pub fn weaken_pct(&self) -> f64 {
        let total = self.weaken_nanos + self.cti_nanos;
        if total == 0 {
            return 0.0;
        }
        100.0 * self.weaken_nanos as f64 / total as f64
    }
}

/// All structures with universe sizes within the bounds satisfying the
/// initial-state formula, in enumeration order.
pub fn initial_states(
    model: &ProtocolModel,
    bounds: &Bounds,
) -> Result<Vec<State>, FixpointError> {
    let mut out = Vec::new();
    for structure in fol::structures_up_to(&model.signature, &bounds.0)? {
        let state = State::new(Arc::new(structure));
        if model.init.eval(&state)? {
            out.push(state);
        }
    }
    Ok(out)
}

/// The successor states of `s`: one per action and parameter assignment
/// whose guard holds, deduplicated, in enumeration order. Universes never
/// change and constants are immutable.
pub fn successors(model: &ProtocolModel, s: &State) -> Result<Vec<State>, FixpointError> {
    let mut out = Vec::new();
    let mut seen: HashSet<Structure> = HashSet::new();
    for action in &model.actions {
        for params in assignments(&action.params, &s.structure) {
            let pre = State::with_assignment(Arc::clone(&s.structure), params.clone());
            if !action.guard.eval(&pre)? {
                continue;
            }
            let mut post = (*s.structure).clone();
            for update in &action.updates {
                let mut table = std::collections::BTreeSet::new();
                for point in assignments(&update.vars, &s.structure) {
                    let env = State::with_assignment(
                        Arc::clone(&s.structure),
                        params.updated(&point),
                    );
                    if update.formula.eval(&env)? {
                        table.insert(
                            update
                                .vars
                                .iter()
                                .map(|v| env.assignment.get(&v.name).unwrap())
                                .collect(),
                        );
                    }
                }
                post.relations.insert(update.relation.clone(), table);
            }
            if seen.insert(post.clone()) {
                out.push(State::new(Arc::new(post)));
            }
        }
    }
    Ok(out)
}

/// Breadth-first closure of the initial states under successors.
pub fn reachable(
    model: &ProtocolModel,
    bounds: &Bounds,
    max_states: Option<usize>,
) -> Result<Vec<State>, FixpointError> {
    let cap = max_states.unwrap_or(usize::MAX);
    let mut visited: HashSet<Structure> = HashSet::new();
    let mut queue: std::collections::VecDeque<State> = std::collections::VecDeque::new();
    let mut out = Vec::new();
    for s in initial_states(model, bounds)? {
        if visited.insert((*s.structure).clone()) {
            queue.push_back(s.clone());
            out.push(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for succ in successors(model, &s)? {
            if visited.insert((*succ.structure).clone()) {
                if out.len() >= cap {
                    return Err(FixpointError::StateCap(cap));
                }
                queue.push_back(succ.clone());
                out.push(succ);
            }
        }
    }
    Ok(out)
}

/// Previously discovered counterexamples, used to find new ones by
/// simulation before falling back to exhaustive search.
#[derive(Debug, Default)]
pub struct CtiCache {
    pool: Vec<State>,
}

impl CtiCache {
    pub fn new() -> Self {
        CtiCache::default()
    }

    pub fn record(&mut self, s: State) {
        self.pool.push(s);
    }

    pub fn len(&self) -> usize {
        self.pool.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pool.is_empty()
    }
}

/// Where a CTI was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtiSource {
    Cache,
    Init,
    Scan,
}

/// Searches for a counterexample to induction of the abstraction stored in
/// `r`: an initial state within bounds violating some formula, or a
/// successor of a structure satisfying all formulas that violates some
/// formula. Search order: successors of cached states first, then initial
/// states, then an exhaustive scan over bounded structures. `None` certifies
/// bounded inductiveness.
pub fn find_cti(
    model: &ProtocolModel,
    bounds: &Bounds,
    r: &LSet,
    cache: &CtiCache,
    max_states: Option<usize>,
) -> Result<Option<(State, CtiSource)>, FixpointError> {
    let cap = max_states.unwrap_or(usize::MAX);
    // simulation from previous counterexamples: they satisfy the weakened
    // abstraction, so their successors are candidate violations
    for s in &cache.pool {
        if !r.unsat(s)?.is_empty() {
            continue;
        }
        for succ in successors(model, s)? {
            if !r.unsat(&succ)?.is_empty() {
                return Ok(Some((succ, CtiSource::Cache)));
            }
        }
    }
    let mut enumerated = 0usize;
    // initial states violating the abstraction
    for structure in fol::structures_up_to(&model.signature, &bounds.0)? {
        enumerated += 1;
        if enumerated > cap {
            return Err(FixpointError::StateCap(cap));
        }
        let state = State::new(Arc::new(structure));
        if model.init.eval(&state)? && !r.unsat(&state)?.is_empty() {
            return Ok(Some((state, CtiSource::Init)));
        }
    }
    // exhaustive: successors of any bounded structure satisfying the
    // abstraction
    for structure in fol::structures_up_to(&model.signature, &bounds.0)? {
        enumerated += 1;
        if enumerated > cap {
            return Err(FixpointError::StateCap(cap));
        }
        let state = State::new(Arc::new(structure));
        if !r.unsat(&state)?.is_empty() {
            continue;
        }
        for succ in successors(model, &state)? {
            if !r.unsat(&succ)?.is_empty() {
                return Ok(Some((succ, CtiSource::Scan)));
            }
        }
    }
    Ok(None)
}

/// Computes the least fixpoint of the best abstract transformer over the
/// bounded models: starting from the bottom element, weaken by CTIs until
/// none exists. The returned antichain's upward closure is the strongest
/// bounded inductive invariant expressible in the language.
pub fn lfp_symbolic_abstraction(
    model: &ProtocolModel,
    bounds: &Bounds,
    spec: &Arc<LanguageSpec>,
    opts: FixOpts,
) -> Result<(Antichain, RunStats), FixpointError> {
    let mut r = LSet::new(Arc::clone(spec));
    r.insert(bottom(spec));
    let mut cache = CtiCache::new();
    let mut stats = RunStats {
        peak_size: 1,
        ..RunStats::default()
    };
    loop {
        let t0 = Instant::now();
        let cti = find_cti(model, bounds, &r, &cache, opts.max_states)?;
        stats.cti_nanos += t0.elapsed().as_nanos();
        let Some((state, source)) = cti else {
            break;
        };
        match source {
            CtiSource::Cache => stats.ctis_from_cache += 1,
            CtiSource::Init => stats.ctis_from_init += 1,
            CtiSource::Scan => stats.ctis_from_scan += 1,
        }
        if let Some(cap) = opts.max_iters {
            if stats.iterations >= cap {
                return Err(FixpointError::IterationCap(cap));
            }
        }
        stats.iterations += 1;
        let t1 = Instant::now();
        weaken_set(&mut r, &state, opts.threads)?;
        stats.weaken_nanos += t1.elapsed().as_nanos();
        stats.peak_size = stats.peak_size.max(r.len());
        cache.record(state);
    }
    let result = Antichain::from_canonical(Arc::clone(spec), r.iter_sorted());
    Ok((result, stats))
}

/// Is the conjunction of the antichain inductive within the bounds? Returns
/// the counterexample when it is not. Always searches from a fresh cache.
pub fn check_inductive(
    model: &ProtocolModel,
    bounds: &Bounds,
    r: &Antichain,
    max_states: Option<usize>,
) -> Result<Option<State>, FixpointError> {
    let mut set = LSet::new(Arc::clone(r.spec()));
    for f in r.formulas() {
        set.insert(f.clone());
    }
    let cache = CtiCache::new();
    Ok(find_cti(model, bounds, &set, &cache, max_states)?.map(|(s, _)| s))
}

/// Does every bounded structure satisfying the antichain's conjunction
/// satisfy the model's safety formula?
pub fn check_safety(
    model: &ProtocolModel,
    bounds: &Bounds,
    r: &Antichain,
) -> Result<bool, FixpointError> {
    let safety = model.safety.as_ref().ok_or(FixpointError::NoSafety)?;
    let mut set = LSet::new(Arc::clone(r.spec()));
    for f in r.formulas() {
        set.insert(f.clone());
    }
    for structure in fol::structures_up_to(&model.signature, &bounds.0)? {
        let state = State::new(Arc::new(structure));
        if set.unsat(&state)?.is_empty() && !safety.eval(&state)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience wrapper: formulas of the result as an LSet, for external
/// filter queries.
pub fn antichain_to_lset(r: &Antichain) -> LSet {
    let mut set = LSet::new(Arc::clone(r.spec()));
    for f in r.formulas() {
        set.insert(f.clone());
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use fol::Sort;
    use tsys::parse_model;

    pub(crate) const LOCKSERV: &str = "\
sort node
relation lock(node)
relation grant(node)
init forall N:node. !lock(N) & !grant(N)
safe forall M:node, N:node. (grant(M) & grant(N)) -> M = N
action request(n: node)
  guard !lock(n)
  update lock(V: node) := lock(V) | V = n
action acquire(n: node)
  guard lock(n) & (forall W:node. !grant(W))
  update grant(V: node) := grant(V) | V = n
action release(n: node)
  guard grant(n)
  update grant(V: node) := grant(V) & V != n
  update lock(V: node) := lock(V) & V != n
";

    fn lockserv() -> ProtocolModel {
        parse_model(LOCKSERV).unwrap()
    }

    fn node_bounds(n: usize) -> Bounds {
        Bounds([(Sort::new("node"), n)].into())
    }

    #[test]
    fn initial_states_have_empty_relations() {
        let model = lockserv();
        let inits = initial_states(&model, &node_bounds(2)).unwrap();
        // one initial structure per universe size
        assert_eq!(inits.len(), 2);
        for s in inits {
            assert!(s.structure.relations["lock"].is_empty());
            assert!(s.structure.relations["grant"].is_empty());
        }
    }

    #[test]
    fn false_init_has_no_states() {
        let model = parse_model("sort node\nrelation p(node)\ninit false\n").unwrap();
        assert!(initial_states(&model, &node_bounds(2)).unwrap().is_empty());
    }

    #[test]
    fn successors_of_all_idle_state() {
        let model = lockserv();
        let init = initial_states(&model, &node_bounds(2))
            .unwrap()
            .into_iter()
            .nth(1)
            .unwrap(); // the size-2 initial state
        let succs = successors(&model, &init).unwrap();
        // only request(n) is enabled, one distinct post-state per node
        assert_eq!(succs.len(), 2);
        for s in &succs {
            assert_eq!(s.structure.relations["lock"].len(), 1);
            assert!(s.structure.relations["grant"].is_empty());
        }
    }

    #[test]
    fn no_actions_means_no_successors() {
        let model = parse_model("sort node\nrelation p(node)\ninit true\n").unwrap();
        let inits = initial_states(&model, &node_bounds(1)).unwrap();
        assert_eq!(successors(&model, &inits[0]).unwrap(), vec![]);
    }

    #[test]
    fn reachable_respects_safety() {
        let model = lockserv();
        let states = reachable(&model, &node_bounds(2), None).unwrap();
        assert!(!states.is_empty());
        let safety = model.safety.as_ref().unwrap();
        for s in &states {
            assert_eq!(safety.eval(s), Ok(true));
        }
    }

    #[test]
    fn reachable_strata_are_universe_preserving() {
        let model = lockserv();
        let states = reachable(&model, &node_bounds(2), None).unwrap();
        // universes never grow: every reachable state keeps its initial size
        let node = Sort::new("node");
        let by_size = |n: usize| states.iter().filter(|s| s.structure.size(&node) == n).count();
        assert!(by_size(1) >= 1);
        assert!(by_size(2) > by_size(1));
    }

    #[test]
    fn state_cap_triggers() {
        let model = lockserv();
        assert_eq!(
            reachable(&model, &node_bounds(2), Some(3)).unwrap_err(),
            FixpointError::StateCap(3)
        );
    }
}
