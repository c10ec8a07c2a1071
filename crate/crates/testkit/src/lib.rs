//! Test support shared by the property tests and the acceptance suite: a
//! battery of small languages exercising every constructor, and seeded
//! generators for structures, states and formula sets. Everything is
//! deterministic given the caller's RNG.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use fol::structure::assignments;
use fol::{ConstDecl, RelationDecl, Signature, Sort, State, Structure, Var};
use lang::{
    enumerate_canonical, enumerate_formulas, generate_literals, AtomsSpec, Formula, LanguageSpec,
    LitOptions, VarBlock,
};

/// A named language over its signature, with its formulas enumerated once.
pub struct SpecCase {
    pub name: &'static str,
    pub sig: Arc<Signature>,
    pub spec: Arc<LanguageSpec>,
    pub all: Vec<Formula>,
    pub canonical: Vec<Formula>,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn p_sig() -> Arc<Signature> {
    Signature {
        sorts: vec![Sort::new("node")],
        constants: vec![],
        relations: vec![RelationDecl {
            name: "p".to_string(),
            args: vec![Sort::new("node")],
        }],
    }
    .into_arc()
}

fn pq_sig() -> Arc<Signature> {
    Signature {
        sorts: vec![Sort::new("node")],
        constants: vec![ConstDecl {
            name: "c".to_string(),
            sort: Sort::new("node"),
        }],
        relations: vec![
            RelationDecl {
                name: "p".to_string(),
                args: vec![Sort::new("node")],
            },
            RelationDecl {
                name: "q".to_string(),
                args: vec![Sort::new("node")],
            },
        ],
    }
    .into_arc()
}

fn two_sort_sig() -> Arc<Signature> {
    Signature {
        sorts: vec![Sort::new("node"), Sort::new("value")],
        constants: vec![],
        relations: vec![RelationDecl {
            name: "has".to_string(),
            args: vec![Sort::new("node"), Sort::new("value")],
        }],
    }
    .into_arc()
}

fn vars(names: &[(&str, &str)]) -> Vec<Var> {
    names
        .iter()
        .map(|(n, s)| Var::new(*n, Sort::new(*s)))
        .collect()
}

fn atoms(sig: &Signature, vs: &[Var], equality: bool) -> Arc<LanguageSpec> {
    LanguageSpec::Atoms(AtomsSpec::new(generate_literals(
        sig,
        vs,
        LitOptions {
            equality,
            positive_only: false,
        },
    )))
    .into_arc()
}

fn case(
    name: &'static str,
    sig: Arc<Signature>,
    spec: Arc<LanguageSpec>,
    limit: usize,
) -> SpecCase {
    spec.validate(&sig).expect("battery spec must validate");
    let all = enumerate_formulas(&spec, limit).expect("battery spec must be enumerable");
    let canonical = enumerate_canonical(&spec, limit).expect("battery spec must be enumerable");
    SpecCase {
        name,
        sig,
        spec,
        all,
        canonical,
    }
}

/// Small languages exercising every constructor at least once: the running
/// example, bare atoms, binary connectives, bounded disjunctions over cubes,
/// quantifier alternation with either-quantifier blocks, and a second sort.
pub fn spec_battery() -> Vec<SpecCase> {
    let node = || Sort::new("node");
    let mut battery = Vec::new();

    // the running example: forall {x,y}. or<=2 of p-literals
    {
        let sig = p_sig();
        let xy = vars(&[("x", "node"), ("y", "node")]);
        let spec = LanguageSpec::Forall(
            VarBlock::new(xy.clone()).unwrap(),
            LanguageSpec::OrK(2, atoms(&sig, &xy, false)).into_arc(),
        )
        .into_arc();
        battery.push(case("ex1", sig, spec, 2000));
    }

    // bare literal base with equality and a constant
    {
        let sig = pq_sig();
        let x = vars(&[("x", "node")]);
        battery.push(case("atoms-eq", sig.clone(), atoms(&sig, &x, true), 2000));
    }

    // binary disjunction of a literal base and a cube language
    {
        let sig = Signature {
            sorts: vec![node()],
            constants: vec![],
            relations: vec![
                RelationDecl {
                    name: "p".to_string(),
                    args: vec![node()],
                },
                RelationDecl {
                    name: "q".to_string(),
                    args: vec![node()],
                },
            ],
        }
        .into_arc();
        let x = vars(&[("x", "node")]);
        let spec = LanguageSpec::Or2(
            atoms(&sig, &x, false),
            LanguageSpec::AndW(atoms(&sig, &x, false)).into_arc(),
        )
        .into_arc();
        battery.push(case("or2-cube", sig, spec, 2000));
    }

    // binary conjunction of two bounded disjunctions
    {
        let sig = p_sig();
        let x = vars(&[("x", "node")]);
        let spec = LanguageSpec::And2(
            LanguageSpec::OrK(1, atoms(&sig, &x, false)).into_arc(),
            LanguageSpec::OrK(1, atoms(&sig, &x, false)).into_arc(),
        )
        .into_arc();
        battery.push(case("and2-or1", sig, spec, 2000));
    }

    // existential block over two-literal disjunctions
    {
        let sig = pq_sig();
        let xy = vars(&[("x", "node"), ("y", "node")]);
        let spec = LanguageSpec::Exists(
            VarBlock::new(xy.clone()).unwrap(),
            LanguageSpec::OrK(1, atoms(&sig, &xy, false)).into_arc(),
        )
        .into_arc();
        battery.push(case("exists-or1", sig, spec, 2000));
    }

    // either-quantifier block over a k-pDNF-shaped matrix
    {
        let sig = p_sig();
        let xy = vars(&[("x", "node"), ("y", "node")]);
        let spec = LanguageSpec::Ef(
            VarBlock::new(xy.clone()).unwrap(),
            LanguageSpec::Or2(
                LanguageSpec::OrK(1, atoms(&sig, &xy, false)).into_arc(),
                LanguageSpec::OrK(1, LanguageSpec::AndW(atoms(&sig, &xy, false)).into_arc())
                    .into_arc(),
            )
            .into_arc(),
        )
        .into_arc();
        battery.push(case("ef-kpdnf", sig, spec, 2000));
    }

    // quantified disjuncts: existentials inside a homogeneous disjunction
    {
        let sig = pq_sig();
        let x = vars(&[("x", "node")]);
        let spec = LanguageSpec::OrK(
            2,
            LanguageSpec::Exists(
                VarBlock::new(x.clone()).unwrap(),
                LanguageSpec::OrK(1, atoms(&sig, &x, false)).into_arc(),
            )
            .into_arc(),
        )
        .into_arc();
        battery.push(case("or-of-exists", sig, spec, 2000));
    }

    // binary conjunction under a universal block
    {
        let sig = pq_sig();
        let x = vars(&[("x", "node")]);
        let spec = LanguageSpec::Forall(
            VarBlock::new(x.clone()).unwrap(),
            LanguageSpec::And2(
                atoms(&sig, &x, false),
                LanguageSpec::OrK(1, atoms(&sig, &x, false)).into_arc(),
            )
            .into_arc(),
        )
        .into_arc();
        battery.push(case("forall-and2", sig, spec, 2000));
    }

    // nested quantifiers over two sorts
    {
        let sig = two_sort_sig();
        let x = vars(&[("x", "node")]);
        let v = vars(&[("v", "value")]);
        let both = [x.clone(), v.clone()].concat();
        let spec = LanguageSpec::Forall(
            VarBlock::new(x).unwrap(),
            LanguageSpec::Ef(
                VarBlock::new(v).unwrap(),
                LanguageSpec::OrK(2, atoms(&sig, &both, false)).into_arc(),
            )
            .into_arc(),
        )
        .into_arc();
        battery.push(case("forall-ef-2sort", sig, spec, 2000));
    }

    let _ = node;
    battery
}

/// A uniformly random structure with per-sort sizes in `1..=max_size`.
pub fn random_structure(sig: &Arc<Signature>, max_size: usize, rng: &mut ChaCha8Rng) -> Structure {
    let universe: BTreeMap<Sort, usize> = sig
        .sorts
        .iter()
        .map(|s| (s.clone(), rng.gen_range(1..=max_size)))
        .collect();
    let mut structure = Structure::new(Arc::clone(sig), universe);
    for c in &sig.constants {
        let n = structure.size(&c.sort);
        structure.constants.insert(c.name.clone(), rng.gen_range(0..n));
    }
    for r in &sig.relations {
        let mut tuples = vec![Vec::new()];
        for s in &r.args {
            let n = structure.size(s);
            let mut next = Vec::new();
            for t in &tuples {
                for e in 0..n {
                    let mut t2 = t.clone();
                    t2.push(e);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let table: std::collections::BTreeSet<Vec<usize>> =
            tuples.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        structure.relations.insert(r.name.clone(), table);
    }
    structure
}

/// A random state for a language: a random structure plus a random
/// assignment to the language's free variables.
pub fn random_state(
    sig: &Arc<Signature>,
    spec: &LanguageSpec,
    max_size: usize,
    rng: &mut ChaCha8Rng,
) -> State {
    let structure = Arc::new(random_structure(sig, max_size, rng));
    let free: Vec<Var> = spec
        .free_vars()
        .into_iter()
        .map(|(name, sort)| Var::new(name, sort))
        .collect();
    let all = assignments(&free, &structure);
    let assignment = all[rng.gen_range(0..all.len())].clone();
    State::with_assignment(structure, assignment)
}

/// A random subset of the case's canonical formulas, of size at most `max`.
pub fn random_canonical_set(case: &SpecCase, max: usize, rng: &mut ChaCha8Rng) -> Vec<Formula> {
    let count = rng.gen_range(0..=max.min(case.canonical.len()));
    let mut picked = case.canonical.clone();
    picked.shuffle(rng);
    picked.truncate(count);
    picked
}

/// A random formula of the full language.
pub fn random_formula(case: &SpecCase, rng: &mut ChaCha8Rng) -> Formula {
    case.all[rng.gen_range(0..case.all.len())].clone()
}

/// A random canonical formula.
pub fn random_canonical_formula(case: &SpecCase, rng: &mut ChaCha8Rng) -> Formula {
    case.canonical[rng.gen_range(0..case.canonical.len())].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_covers_every_constructor() {
        let battery = spec_battery();
        assert!(battery.len() >= 6);
        let mut seen = [false; 8];
        fn mark(spec: &LanguageSpec, seen: &mut [bool; 8]) {
            match spec {
                LanguageSpec::Atoms(_) => seen[0] = true,
                LanguageSpec::Or2(a, b) => {
                    seen[1] = true;
                    mark(a, seen);
                    mark(b, seen);
                }
                LanguageSpec::And2(a, b) => {
                    seen[2] = true;
                    mark(a, seen);
                    mark(b, seen);
                }
                LanguageSpec::OrK(_, a) => {
                    seen[3] = true;
                    mark(a, seen);
                }
                LanguageSpec::AndW(a) => {
                    seen[4] = true;
                    mark(a, seen);
                }
                LanguageSpec::Exists(_, a) => {
                    seen[5] = true;
                    mark(a, seen);
                }
                LanguageSpec::Forall(_, a) => {
                    seen[6] = true;
                    mark(a, seen);
                }
                LanguageSpec::Ef(_, a) => {
                    seen[7] = true;
                    mark(a, seen);
                }
            }
        }
        for case in &battery {
            mark(&case.spec, &mut seen);
            assert!(!case.all.is_empty());
            assert!(!case.canonical.is_empty());
            assert!(case.all.len() <= 2000);
        }
        assert!(seen.iter().all(|&b| b), "constructors covered: {seen:?}");
    }

    #[test]
    fn generators_are_deterministic() {
        let battery = spec_battery();
        let case = &battery[0];
        let a = random_state(&case.sig, &case.spec, 2, &mut rng(7));
        let b = random_state(&case.sig, &case.spec, 2, &mut rng(7));
        assert_eq!(a, b);
    }
}
