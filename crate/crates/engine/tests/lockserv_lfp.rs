//! End-to-end fixpoint computation on the lock-server model: the engine's
//! least fixpoint matches the Kleene iteration of the oracle exactly, is
//! inductive, and proves mutual exclusion of grants.

use std::sync::Arc;

use engine::{
    check_inductive, check_safety, find_cti, lfp_symbolic_abstraction, reachable, Antichain,
    CtiCache, FixOpts, LSet,
};
use fol::Sort;
use lang::{build_kpdnf, subsumes, KpdnfOptions, PrefixItem, PrefixKind};
use oracle::{kleene_lfp, OracleBudget};
use tsys::{parse_model, Bounds, ProtocolModel};

const LOCKSERV: &str = "\
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

fn forall2_language(model: &ProtocolModel) -> Arc<lang::LanguageSpec> {
    let node = Sort::new("node");
    let prefix = vec![
        PrefixItem {
            kind: PrefixKind::Forall,
            var: fol::Var::new("M", node.clone()),
        },
        PrefixItem {
            kind: PrefixKind::Forall,
            var: fol::Var::new("N", node),
        },
    ];
    build_kpdnf(&model.signature, &prefix, 1, 3, KpdnfOptions { equality: true }).unwrap()
}

fn node_bounds(n: usize) -> Bounds {
    Bounds([(Sort::new("node"), n)].into())
}

#[test]
fn lfp_matches_kleene_iteration_exactly() {
    let model = lockserv();
    let spec = forall2_language(&model);
    let bounds = node_bounds(2);
    let (result, stats) =
        lfp_symbolic_abstraction(&model, &bounds, &spec, FixOpts::default()).unwrap();
    assert!(stats.iterations > 0);
    assert!(stats.peak_size >= result.len());

    // the upward closure of the engine's antichain within the canonical
    // formulas equals the oracle's Kleene fixpoint
    let kleene = kleene_lfp(&model, &bounds, &spec, &OracleBudget::default()).unwrap();
    let closure: Vec<lang::Formula> = lang::enumerate_canonical(&spec, 100_000)
        .unwrap()
        .into_iter()
        .filter(|f| result.formulas().iter().any(|r| subsumes(&spec, r, f)))
        .collect();
    assert_eq!(closure, kleene);
}

#[test]
fn lfp_is_inductive_and_safe() {
    let model = lockserv();
    let spec = forall2_language(&model);
    let bounds = node_bounds(2);
    let (result, _) =
        lfp_symbolic_abstraction(&model, &bounds, &spec, FixOpts::default()).unwrap();
    assert_eq!(check_inductive(&model, &bounds, &result, None).unwrap(), None);
    assert!(check_safety(&model, &bounds, &result).unwrap());

    // soundness: every reachable state satisfies every formula of the result
    for state in reachable(&model, &bounds, None).unwrap() {
        for f in result.formulas() {
            assert_eq!(lang::satisfies(&state, &spec, f), Ok(true));
        }
    }
}

#[test]
fn lfp_is_deterministic_and_thread_count_invariant() {
    let model = lockserv();
    let spec = forall2_language(&model);
    let bounds = node_bounds(2);
    let (a, _) = lfp_symbolic_abstraction(&model, &bounds, &spec, FixOpts::default()).unwrap();
    let (b, _) = lfp_symbolic_abstraction(&model, &bounds, &spec, FixOpts::default()).unwrap();
    assert_eq!(a, b);
    let (c, _) = lfp_symbolic_abstraction(
        &model,
        &bounds,
        &spec,
        FixOpts {
            threads: 4,
            ..FixOpts::default()
        },
    )
    .unwrap();
    assert_eq!(a, c);
}

#[test]
fn cti_search_postconditions() {
    let model = lockserv();
    let spec = forall2_language(&model);
    let bounds = node_bounds(2);

    // against the bottom abstraction, some initial state is a counterexample
    let mut r = LSet::new(Arc::clone(&spec));
    r.insert(lang::bottom(&spec));
    let cache = CtiCache::new();
    let (state, _) = find_cti(&model, &bounds, &r, &cache, None)
        .unwrap()
        .expect("bottom cannot be inductive on a model with initial states");
    assert!(!r.unsat(&state).unwrap().is_empty());

    // the abstraction of all reachable states is inductive at the same
    // bounds, so no counterexample exists against it
    let states = reachable(&model, &bounds, None).unwrap();
    let abstraction = engine::abstract_states(&spec, &states, 1).unwrap();
    assert_eq!(
        check_inductive(&model, &bounds, &abstraction, None).unwrap(),
        None
    );
}

#[test]
fn empty_antichain_is_trivially_inductive() {
    let model = lockserv();
    let spec = forall2_language(&model);
    let bounds = node_bounds(2);
    let empty = Antichain::empty(Arc::clone(&spec));
    assert_eq!(check_inductive(&model, &bounds, &empty, None).unwrap(), None);
}

#[test]
fn unsatisfiable_init_fixes_at_bottom() {
    let model = parse_model("sort node\nrelation lock(node)\ninit false\n").unwrap();
    let node = Sort::new("node");
    let prefix = vec![PrefixItem {
        kind: PrefixKind::Forall,
        var: fol::Var::new("N", node),
    }];
    let spec =
        build_kpdnf(&model.signature, &prefix, 1, 2, KpdnfOptions { equality: false }).unwrap();
    let (result, stats) =
        lfp_symbolic_abstraction(&model, &node_bounds(2), &spec, FixOpts::default()).unwrap();
    assert_eq!(stats.iterations, 0);
    assert_eq!(result.formulas(), &[lang::bottom(&spec)]);
}

#[test]
fn lfp_at_bound_three_is_inductive_and_safe() {
    let model = lockserv();
    let spec = forall2_language(&model);
    let bounds = node_bounds(3);
    let (result, stats) =
        lfp_symbolic_abstraction(&model, &bounds, &spec, FixOpts::default()).unwrap();
    assert!(stats.iterations > 0);
    assert_eq!(check_inductive(&model, &bounds, &result, None).unwrap(), None);
    assert!(check_safety(&model, &bounds, &result).unwrap());

    // the Kleene iteration agrees at this bound too
    let kleene = kleene_lfp(&model, &bounds, &spec, &OracleBudget::default()).unwrap();
    let closure: Vec<lang::Formula> = lang::enumerate_canonical(&spec, 100_000)
        .unwrap()
        .into_iter()
        .filter(|f| result.formulas().iter().any(|r| subsumes(&spec, r, f)))
        .collect();
    assert_eq!(closure, kleene);
}

#[test]
fn lfp_of_unconstrained_model_abstracts_all_bounded_structures() {
    // init = true, no actions: the fixpoint is the abstraction of every
    // bounded structure
    let model = parse_model("sort node\nrelation p(node)\ninit true\n").unwrap();
    let node = Sort::new("node");
    let prefix = vec![
        PrefixItem {
            kind: PrefixKind::Forall,
            var: fol::Var::new("x", node.clone()),
        },
        PrefixItem {
            kind: PrefixKind::Forall,
            var: fol::Var::new("y", node.clone()),
        },
    ];
    let spec =
        build_kpdnf(&model.signature, &prefix, 1, 2, KpdnfOptions { equality: false }).unwrap();
    let bounds = node_bounds(2);
    let (result, _) =
        lfp_symbolic_abstraction(&model, &bounds, &spec, FixOpts::default()).unwrap();
    let all: Vec<fol::State> = fol::structures_up_to(&model.signature, &bounds.0)
        .unwrap()
        .map(|s| fol::State::new(Arc::new(s)))
        .collect();
    let expected = engine::abstract_states(&spec, &all, 1).unwrap();
    assert_eq!(result, expected);
}

#[test]
fn search_strategy_does_not_change_the_fixpoint() {
    // the least fixpoint is unique, so disabling the simulation cache (by
    // resetting it before every search) must produce the same closure
    let model = lockserv();
    let spec = forall2_language(&model);
    let bounds = node_bounds(2);
    let (with_cache, _) =
        lfp_symbolic_abstraction(&model, &bounds, &spec, FixOpts::default()).unwrap();

    let mut r = LSet::new(Arc::clone(&spec));
    r.insert(lang::bottom(&spec));
    loop {
        let cache = CtiCache::new(); // no simulation: init + exhaustive only
        match find_cti(&model, &bounds, &r, &cache, None).unwrap() {
            Some((state, _)) => {
                engine::weaken_set(&mut r, &state, 1).unwrap();
            }
            None => break,
        }
    }
    let exhaustive_only = Antichain::from_canonical(Arc::clone(&spec), r.iter_sorted());
    assert_eq!(with_cache, exhaustive_only);
}

#[test]
fn reachable_is_monotone_in_the_bounds() {
    // universes never grow, so the strata are independent and the size-1
    // stratum reappears untouched under a larger bound
    let model = lockserv();
    let small: std::collections::HashSet<_> = reachable(&model, &node_bounds(1), None)
        .unwrap()
        .into_iter()
        .collect();
    let large: std::collections::HashSet<_> = reachable(&model, &node_bounds(2), None)
        .unwrap()
        .into_iter()
        .collect();
    assert!(small.is_subset(&large));
    assert!(large.len() > small.len());
}

#[test]
fn iteration_cap_aborts() {
    let model = lockserv();
    let spec = forall2_language(&model);
    let err = lfp_symbolic_abstraction(
        &model,
        &node_bounds(2),
        &spec,
        FixOpts {
            max_iters: Some(0),
            ..FixOpts::default()
        },
    )
    .unwrap_err();
    assert_eq!(err, engine::FixpointError::IterationCap(0));
}
