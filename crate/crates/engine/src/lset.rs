//! The LSet data structure: a set of canonical formulas with auxiliary
//! indexes shaped by the language constructor, supporting two filters without
//! full iteration: the formulas a state falsifies, and the formulas subsuming
//! a given formula.
//!
//! Binary disjunctions index second disjuncts under first disjuncts; binary
//! conjunctions index both positions. Homogeneous disjunctions use a trie
//! whose edges are inner formulas in ascending order, with each node's
//! outgoing labels held in an inner LSet so traversals can prune whole
//! subtrees. Homogeneous conjunctions aggregate all conjuncts in one inner
//! LSet with reference counts. Quantifier nodes hold their bodies in an inner
//! LSet and iterate assignments (for the state filter) or permutations (for
//! the subsumption filter). Auxiliary maps are keyed by interned formula IDs.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use fol::structure::assignments;
use fol::{EvalError, QuantKind, State};
use lang::{
    apply_permutation, canonicalize, compare, shape_check, Formula, LanguageSpec, VarBlock,
};

/// A bidirectional formula-to-ID table.
#[derive(Debug, Default)]
struct Interner {
    to_id: HashMap<Formula, u32>,
    from_id: Vec<Formula>,
}

impl Interner {
    fn intern(&mut self, f: &Formula) -> u32 {
        if let Some(&id) = self.to_id.get(f) {
            return id;
        }
        let id = self.from_id.len() as u32;
        self.from_id.push(f.clone());
        self.to_id.insert(f.clone(), id);
        id
    }

    fn get(&self, f: &Formula) -> Option<u32> {
        self.to_id.get(f).copied()
    }

    fn formula(&self, id: u32) -> &Formula {
        &self.from_id[id as usize]
    }
}

#[derive(Debug)]
struct TrieNode {
    /// Outgoing edge labels, stored as an inner LSet for filtered traversal.
    labels: Box<LSet>,
    children: HashMap<u32, TrieNode>,
    /// Does the path from the root to this node spell a stored formula?
    terminal: bool,
}

impl TrieNode {
    fn new(inner: Arc<LanguageSpec>) -> Self {
        TrieNode {
            labels: Box::new(LSet::new(inner)),
            children: HashMap::new(),
            terminal: false,
        }
    }

    fn is_empty(&self) -> bool {
        !self.terminal && self.children.is_empty()
    }
}

#[derive(Debug)]
enum Node {
    Atoms,
    Or2 {
        ids: Interner,
        left: Box<LSet>,
        map: HashMap<u32, LSet>,
    },
    And2 {
        ids1: Interner,
        ids2: Interner,
        left: Box<LSet>,
        right: Box<LSet>,
        map1: HashMap<u32, LSet>,
        map2: HashMap<u32, LSet>,
    },
    OrK {
        ids: Interner,
        root: TrieNode,
    },
    AndW {
        ids: Interner,
        conjuncts: Box<LSet>,
        counts: HashMap<u32, usize>,
        owners: HashMap<u32, BTreeSet<Formula>>,
    },
    Quant {
        bodies: Box<LSet>,
    },
    Ef {
        foralls: Box<LSet>,
        exists: Box<LSet>,
    },
}

/// A set of canonical formulas of one bounded language, with the `unsat` and
/// `subsuming` filters.
#[derive(Debug)]
pub struct LSet {
    spec: Arc<LanguageSpec>,
    members: HashSet<Formula>,
    node: Node,
}

impl LSet {
    pub fn new(spec: Arc<LanguageSpec>) -> Self {
        let node = match spec.as_ref() {
            LanguageSpec::Atoms(_) => Node::Atoms,
            LanguageSpec::Or2(l1, _) => Node::Or2 {
                ids: Interner::default(),
                left: Box::new(LSet::new(Arc::clone(l1))),
                map: HashMap::new(),
            },
            LanguageSpec::And2(l1, l2) => Node::And2 {
                ids1: Interner::default(),
                ids2: Interner::default(),
                left: Box::new(LSet::new(Arc::clone(l1))),
                right: Box::new(LSet::new(Arc::clone(l2))),
                map1: HashMap::new(),
                map2: HashMap::new(),
            },
            LanguageSpec::OrK(_, inner) => Node::OrK {
                ids: Interner::default(),
                root: TrieNode::new(Arc::clone(inner)),
            },
            LanguageSpec::AndW(inner) => Node::AndW {
                ids: Interner::default(),
                conjuncts: Box::new(LSet::new(Arc::clone(inner))),
                counts: HashMap::new(),
                owners: HashMap::new(),
            },
            LanguageSpec::Exists(_, inner) | LanguageSpec::Forall(_, inner) => Node::Quant {
                bodies: Box::new(LSet::new(Arc::clone(inner))),
            },
            LanguageSpec::Ef(block, inner) => Node::Ef {
                foralls: Box::new(LSet::new(
                    LanguageSpec::Forall(block.clone(), Arc::clone(inner)).into_arc(),
                )),
                exists: Box::new(LSet::new(
                    LanguageSpec::Exists(block.clone(), Arc::clone(inner)).into_arc(),
                )),
            },
        };
        LSet {
            spec,
            members: HashSet::new(),
            node,
        }
    }

    pub fn spec(&self) -> &Arc<LanguageSpec> {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.members.contains(f)
    }

    /// Members in ascending total order.
    pub fn iter_sorted(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = self.members.iter().cloned().collect();
        out.sort_by(|a, b| compare(&self.spec, a, b));
        out
    }

    /// One rendered formula per line, in ascending total order.
    pub fn dump(&self) -> String {
        self.iter_sorted()
            .iter()
            .map(|f| lang::render(&self.spec, f))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Inserts a canonical formula, restoring all indexes. Returns whether it
    /// was newly added.
    pub fn insert(&mut self, f: Formula) -> bool {
        debug_assert!(shape_check(&self.spec, &f).is_ok());
        if !self.members.insert(f.clone()) {
            return false;
        }
        match (&mut self.node, &f) {
            (Node::Atoms, _) => {}
            (Node::Or2 { ids, left, map }, Formula::Or(a, b)) => {
                let LanguageSpec::Or2(_, l2) = self.spec.as_ref() else {
                    unreachable!()
                };
                let id = ids.intern(a);
                left.insert((**a).clone());
                map.entry(id)
                    .or_insert_with(|| LSet::new(Arc::clone(l2)))
                    .insert((**b).clone());
            }
            (
                Node::And2 {
                    ids1,
                    ids2,
                    left,
                    right,
                    map1,
                    map2,
                },
                Formula::And(a, b),
            ) => {
                let LanguageSpec::And2(l1, l2) = self.spec.as_ref() else {
                    unreachable!()
                };
                let id1 = ids1.intern(a);
                left.insert((**a).clone());
                map1.entry(id1)
                    .or_insert_with(|| LSet::new(Arc::clone(l2)))
                    .insert((**b).clone());
                let id2 = ids2.intern(b);
                right.insert((**b).clone());
                map2.entry(id2)
                    .or_insert_with(|| LSet::new(Arc::clone(l1)))
                    .insert((**a).clone());
            }
            (Node::OrK { ids, root }, Formula::OrSeq(fs)) => {
                let LanguageSpec::OrK(_, inner) = self.spec.as_ref() else {
                    unreachable!()
                };
                let mut node = root;
                for disjunct in fs {
                    let id = ids.intern(disjunct);
                    node.labels.insert(disjunct.clone());
                    node = node
                        .children
                        .entry(id)
                        .or_insert_with(|| TrieNode::new(Arc::clone(inner)));
                }
                node.terminal = true;
            }
            (
                Node::AndW {
                    ids,
                    conjuncts,
                    counts,
                    owners,
                },
                Formula::AndSeq(fs),
            ) => {
                for conjunct in fs {
                    let id = ids.intern(conjunct);
                    let count = counts.entry(id).or_insert(0);
                    *count += 1;
                    owners.entry(id).or_default().insert(f.clone());
                    if *count == 1 {
                        conjuncts.insert(conjunct.clone());
                    }
                }
            }
            (Node::Quant { bodies }, Formula::Quant(_, body)) => {
                bodies.insert((**body).clone());
            }
            (Node::Ef { foralls, exists }, Formula::Quant(kind, _)) => {
                match kind {
                    QuantKind::Forall => foralls.insert(f.clone()),
                    QuantKind::Exists => exists.insert(f.clone()),
                };
            }
            _ => unreachable!("formula shape does not match language spec"),
        }
        true
    }

    /// Removes a formula, pruning emptied index entries. Returns whether it
    /// was present.
    pub fn remove(&mut self, f: &Formula) -> bool {
        if !self.members.remove(f) {
            return false;
        }
        match (&mut self.node, f) {
            (Node::Atoms, _) => {}
            (Node::Or2 { ids, left, map }, Formula::Or(a, b)) => {
                let id = ids.get(a).expect("indexed first disjunct");
                let sub = map.get_mut(&id).expect("indexed second-disjunct set");
                sub.remove(b);
                if sub.is_empty() {
                    map.remove(&id);
                    left.remove(a);
                }
            }
            (
                Node::And2 {
                    ids1,
                    ids2,
                    left,
                    right,
                    map1,
                    map2,
                },
                Formula::And(a, b),
            ) => {
                let id1 = ids1.get(a).expect("indexed first conjunct");
                let sub = map1.get_mut(&id1).expect("indexed second-conjunct set");
                sub.remove(b);
                if sub.is_empty() {
                    map1.remove(&id1);
                    left.remove(a);
                }
                let id2 = ids2.get(b).expect("indexed second conjunct");
                let sub = map2.get_mut(&id2).expect("indexed first-conjunct set");
                sub.remove(a);
                if sub.is_empty() {
                    map2.remove(&id2);
                    right.remove(b);
                }
            }
            (Node::OrK { ids, root }, Formula::OrSeq(fs)) => {
                trie_remove(root, fs, ids);
            }
            (
                Node::AndW {
                    ids,
                    conjuncts,
                    counts,
                    owners,
                },
                Formula::AndSeq(fs),
            ) => {
                for conjunct in fs {
                    let id = ids.get(conjunct).expect("indexed conjunct");
                    let count = counts.get_mut(&id).expect("conjunct count");
                    *count -= 1;
                    let own = owners.get_mut(&id).expect("conjunct owners");
                    own.remove(f);
                    if *count == 0 {
                        counts.remove(&id);
                        owners.remove(&id);
                        conjuncts.remove(conjunct);
                    }
                }
            }
            (Node::Quant { bodies }, Formula::Quant(_, body)) => {
                bodies.remove(body);
            }
            (Node::Ef { foralls, exists }, Formula::Quant(kind, _)) => {
                match kind {
                    QuantKind::Forall => foralls.remove(f),
                    QuantKind::Exists => exists.remove(f),
                };
            }
            _ => unreachable!("formula shape does not match language spec"),
        }
        true
    }

    /// The members not satisfied by the state, in ascending total order.
    pub fn unsat(&self, s: &State) -> Result<Vec<Formula>, EvalError> {
        let mut out = self.unsat_unordered(s)?;
        out.sort_by(|a, b| compare(&self.spec, a, b));
        Ok(out)
    }

    fn unsat_unordered(&self, s: &State) -> Result<Vec<Formula>, EvalError> {
        match &self.node {
            Node::Atoms => {
                let mut out = Vec::new();
                for f in &self.members {
                    let holds = match f {
                        Formula::Bottom => false,
                        Formula::Lit(lit) => s.holds(lit)?,
                        _ => unreachable!(),
                    };
                    if !holds {
                        out.push(f.clone());
                    }
                }
                Ok(out)
            }
            Node::Or2 { ids, left, map } => {
                // both disjuncts must fail
                let mut out = Vec::new();
                for a in left.unsat_unordered(s)? {
                    let id = ids.get(&a).expect("indexed first disjunct");
                    for b in map[&id].unsat_unordered(s)? {
                        out.push(Formula::Or(Box::new(a.clone()), Box::new(b)));
                    }
                }
                Ok(out)
            }
            Node::And2 {
                ids1,
                ids2,
                left,
                right,
                map1,
                map2,
            } => {
                // either conjunct failing suffices; the two passes overlap
                let mut seen = HashSet::new();
                for a in left.unsat_unordered(s)? {
                    let id = ids1.get(&a).expect("indexed first conjunct");
                    for b in map1[&id].members.iter() {
                        seen.insert(Formula::And(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
                for b in right.unsat_unordered(s)? {
                    let id = ids2.get(&b).expect("indexed second conjunct");
                    for a in map2[&id].members.iter() {
                        seen.insert(Formula::And(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
                Ok(seen.into_iter().collect())
            }
            Node::OrK { ids, root } => {
                let mut out = Vec::new();
                let mut path = Vec::new();
                trie_unsat(root, ids, s, &mut path, &mut out)?;
                Ok(out)
            }
            Node::AndW {
                ids,
                conjuncts,
                owners,
                ..
            } => {
                // a conjunction fails iff some conjunct fails
                let mut seen = HashSet::new();
                for conjunct in conjuncts.unsat_unordered(s)? {
                    let id = ids.get(&conjunct).expect("indexed conjunct");
                    for owner in &owners[&id] {
                        seen.insert(owner.clone());
                    }
                }
                Ok(seen.into_iter().collect())
            }
            Node::Quant { bodies } => {
                let (block, kind) = match self.spec.as_ref() {
                    LanguageSpec::Exists(b, _) => (b, QuantKind::Exists),
                    LanguageSpec::Forall(b, _) => (b, QuantKind::Forall),
                    _ => unreachable!(),
                };
                let mut acc: Option<HashSet<Formula>> = None;
                for nu in assignments(block.vars(), &s.structure) {
                    let here: HashSet<Formula> = bodies
                        .unsat_unordered(&s.updated(&nu))?
                        .into_iter()
                        .collect();
                    acc = Some(match (acc, kind) {
                        // an existential fails when the body fails under
                        // every assignment
                        (None, _) => here,
                        (Some(a), QuantKind::Exists) => {
                            a.intersection(&here).cloned().collect()
                        }
                        // a universal fails when the body fails under some
                        // assignment
                        (Some(mut a), QuantKind::Forall) => {
                            a.extend(here);
                            a
                        }
                    });
                    if kind == QuantKind::Exists && acc.as_ref().is_some_and(|a| a.is_empty()) {
                        break;
                    }
                }
                Ok(acc
                    .unwrap_or_default()
                    .into_iter()
                    .map(|body| Formula::Quant(kind, Box::new(body)))
                    .collect())
            }
            Node::Ef { foralls, exists } => {
                let mut out = foralls.unsat_unordered(s)?;
                out.extend(exists.unsat_unordered(s)?);
                Ok(out)
            }
        }
    }

    /// The members subsuming the given canonical formula, in ascending total
    /// order.
    pub fn subsuming(&self, psi: &Formula) -> Vec<Formula> {
        let mut out = self.subsuming_unordered(psi);
        out.sort_by(|a, b| compare(&self.spec, a, b));
        out.dedup();
        out
    }

    fn subsuming_unordered(&self, psi: &Formula) -> Vec<Formula> {
        match (&self.node, psi) {
            (Node::Atoms, _) => {
                let mut out = Vec::new();
                if self.members.contains(&Formula::Bottom) {
                    out.push(Formula::Bottom);
                }
                if psi != &Formula::Bottom && self.members.contains(psi) {
                    out.push(psi.clone());
                }
                out
            }
            (Node::Or2 { ids, left, map }, Formula::Or(a, b)) => {
                let mut out = Vec::new();
                for phi1 in left.subsuming_unordered(a) {
                    let id = ids.get(&phi1).expect("indexed first disjunct");
                    for phi2 in map[&id].subsuming_unordered(b) {
                        out.push(Formula::Or(Box::new(phi1.clone()), Box::new(phi2)));
                    }
                }
                out
            }
            (Node::And2 { ids1, left, map1, .. }, Formula::And(a, b)) => {
                // subsumption is pointwise, so the first-position index
                // suffices
                let mut out = Vec::new();
                for phi1 in left.subsuming_unordered(a) {
                    let id = ids1.get(&phi1).expect("indexed first conjunct");
                    for phi2 in map1[&id].subsuming_unordered(b) {
                        out.push(Formula::And(Box::new(phi1.clone()), Box::new(phi2)));
                    }
                }
                out
            }
            (Node::OrK { ids, root }, Formula::OrSeq(gs)) => {
                let LanguageSpec::OrK(_, inner) = self.spec.as_ref() else {
                    unreachable!()
                };
                let mut found = HashSet::new();
                let mut path = Vec::new();
                trie_subsuming(root, ids, inner, gs, &mut path, &mut found);
                found.into_iter().collect()
            }
            (
                Node::AndW {
                    ids,
                    conjuncts,
                    owners,
                    ..
                },
                Formula::AndSeq(gs),
            ) => {
                // a stored conjunction subsumes psi iff every conjunct of psi
                // has a stored conjunct subsuming it
                let mut candidates: Option<BTreeSet<Formula>> = None;
                for g in gs {
                    let mut here = BTreeSet::new();
                    for phi in conjuncts.subsuming_unordered(g) {
                        let id = ids.get(&phi).expect("indexed conjunct");
                        here.extend(owners[&id].iter().cloned());
                    }
                    candidates = Some(match candidates {
                        None => here,
                        Some(acc) => acc.intersection(&here).cloned().collect(),
                    });
                    if candidates.as_ref().is_some_and(|c| c.is_empty()) {
                        return Vec::new();
                    }
                }
                candidates.unwrap_or_default().into_iter().collect()
            }
            (Node::Quant { bodies }, Formula::Quant(_, psi_body)) => {
                let (block, inner, kind) = match self.spec.as_ref() {
                    LanguageSpec::Exists(b, i) => (b, i, QuantKind::Exists),
                    LanguageSpec::Forall(b, i) => (b, i, QuantKind::Forall),
                    _ => unreachable!(),
                };
                let mut out = HashSet::new();
                for body in self.quant_subsuming_bodies(bodies, block, inner, psi_body) {
                    out.insert(Formula::Quant(kind, Box::new(body)));
                }
                out.into_iter().collect()
            }
            (Node::Ef { foralls, exists }, Formula::Quant(kind, body)) => {
                // universals can subsume either quantifier; existentials only
                // subsume existentials
                let mut out =
                    foralls.subsuming_unordered(&Formula::Quant(QuantKind::Forall, body.clone()));
                if *kind == QuantKind::Exists {
                    out.extend(
                        exists.subsuming_unordered(&Formula::Quant(
                            QuantKind::Exists,
                            body.clone(),
                        )),
                    );
                }
                out
            }
            _ => panic!("query formula shape does not match language spec"),
        }
    }

    fn quant_subsuming_bodies(
        &self,
        bodies: &LSet,
        block: &VarBlock,
        inner: &Arc<LanguageSpec>,
        psi_body: &Formula,
    ) -> Vec<Formula> {
        let mut out = Vec::new();
        for pi in fol::sort_permutations(block.vars()) {
            let permuted = canonicalize(inner, &apply_permutation(psi_body, &pi));
            out.extend(bodies.subsuming_unordered(&permuted));
        }
        out
    }

    /// Is some member subsuming `psi`? Stops at the first witness.
    pub fn is_subsumed(&self, psi: &Formula) -> bool {
        match (&self.node, psi) {
            (Node::Atoms, _) => {
                self.members.contains(&Formula::Bottom) || self.members.contains(psi)
            }
            (Node::Or2 { ids, left, map }, Formula::Or(a, b)) => left
                .subsuming_unordered(a)
                .into_iter()
                .any(|phi1| {
                    let id = ids.get(&phi1).expect("indexed first disjunct");
                    map[&id].is_subsumed(b)
                }),
            (Node::And2 { ids1, left, map1, .. }, Formula::And(a, b)) => left
                .subsuming_unordered(a)
                .into_iter()
                .any(|phi1| {
                    let id = ids1.get(&phi1).expect("indexed first conjunct");
                    map1[&id].is_subsumed(b)
                }),
            (Node::OrK { ids, root }, Formula::OrSeq(gs)) => {
                let LanguageSpec::OrK(_, inner) = self.spec.as_ref() else {
                    unreachable!()
                };
                trie_any_subsuming(root, ids, inner, gs)
            }
            (Node::AndW { .. }, Formula::AndSeq(_)) => !self.subsuming_unordered(psi).is_empty(),
            (Node::Quant { bodies }, Formula::Quant(_, psi_body)) => {
                let (block, inner) = match self.spec.as_ref() {
                    LanguageSpec::Exists(b, i) | LanguageSpec::Forall(b, i) => (b, i),
                    _ => unreachable!(),
                };
                fol::sort_permutations(block.vars()).iter().any(|pi| {
                    let permuted = canonicalize(inner, &apply_permutation(psi_body, pi));
                    bodies.is_subsumed(&permuted)
                })
            }
            (Node::Ef { foralls, exists }, Formula::Quant(kind, body)) => {
                foralls.is_subsumed(&Formula::Quant(QuantKind::Forall, body.clone()))
                    || (*kind == QuantKind::Exists
                        && exists.is_subsumed(&Formula::Quant(QuantKind::Exists, body.clone())))
            }
            _ => panic!("query formula shape does not match language spec"),
        }
    }

    /// Verifies every structural invariant of the indexes against the member
    /// set, recursively. Panics on violation; meant for tests.
    pub fn check_invariants(&self) {
        for f in &self.members {
            assert!(shape_check(&self.spec, f).is_ok(), "ill-shaped member");
        }
        match &self.node {
            Node::Atoms => {}
            Node::Or2 { ids, left, map } => {
                let mut firsts: HashMap<Formula, HashSet<Formula>> = HashMap::new();
                for f in &self.members {
                    let Formula::Or(a, b) = f else { panic!() };
                    firsts
                        .entry((**a).clone())
                        .or_default()
                        .insert((**b).clone());
                }
                assert_eq!(left.members, firsts.keys().cloned().collect::<HashSet<_>>());
                assert_eq!(map.len(), firsts.len());
                for (a, bs) in &firsts {
                    let id = ids.get(a).expect("first disjunct interned");
                    assert_eq!(ids.formula(id), a, "intern round trip");
                    assert_eq!(&map[&id].members, bs);
                    map[&id].check_invariants();
                }
                left.check_invariants();
            }
            Node::And2 {
                ids1,
                ids2,
                left,
                right,
                map1,
                map2,
            } => {
                let mut firsts: HashMap<Formula, HashSet<Formula>> = HashMap::new();
                let mut seconds: HashMap<Formula, HashSet<Formula>> = HashMap::new();
                for f in &self.members {
                    let Formula::And(a, b) = f else { panic!() };
                    firsts
                        .entry((**a).clone())
                        .or_default()
                        .insert((**b).clone());
                    seconds
                        .entry((**b).clone())
                        .or_default()
                        .insert((**a).clone());
                }
                assert_eq!(left.members, firsts.keys().cloned().collect::<HashSet<_>>());
                assert_eq!(
                    right.members,
                    seconds.keys().cloned().collect::<HashSet<_>>()
                );
                for (a, bs) in &firsts {
                    assert_eq!(&map1[&ids1.get(a).unwrap()].members, bs);
                }
                for (b, aas) in &seconds {
                    assert_eq!(&map2[&ids2.get(b).unwrap()].members, aas);
                }
                left.check_invariants();
                right.check_invariants();
            }
            Node::OrK { ids, root } => {
                let LanguageSpec::OrK(_, inner) = self.spec.as_ref() else {
                    unreachable!()
                };
                // collected terminal paths are exactly the members, collected
                // paths are exactly the stored prefixes, labels match child
                // keys, and labels are non-decreasing along paths
                let mut terminals = HashSet::new();
                let mut prefixes = HashSet::new();
                collect_paths(root, ids, inner, &mut Vec::new(), &mut terminals, &mut prefixes);
                assert_eq!(
                    terminals,
                    self.members
                        .iter()
                        .map(|f| match f {
                            Formula::OrSeq(fs) => fs.clone(),
                            _ => panic!(),
                        })
                        .collect::<HashSet<_>>()
                );
                let mut expected_prefixes: HashSet<Vec<Formula>> = HashSet::new();
                for f in &self.members {
                    let Formula::OrSeq(fs) = f else { panic!() };
                    for i in 0..=fs.len() {
                        expected_prefixes.insert(fs[..i].to_vec());
                    }
                }
                expected_prefixes.insert(Vec::new());
                assert_eq!(prefixes, expected_prefixes);
            }
            Node::AndW {
                ids,
                conjuncts,
                counts,
                owners,
            } => {
                let mut expected_counts: HashMap<Formula, usize> = HashMap::new();
                let mut expected_owners: HashMap<Formula, BTreeSet<Formula>> = HashMap::new();
                for f in &self.members {
                    let Formula::AndSeq(fs) = f else { panic!() };
                    for c in fs {
                        *expected_counts.entry(c.clone()).or_default() += 1;
                        expected_owners.entry(c.clone()).or_default().insert(f.clone());
                    }
                }
                assert_eq!(
                    conjuncts.members,
                    expected_counts.keys().cloned().collect::<HashSet<_>>()
                );
                for (c, n) in &expected_counts {
                    let id = ids.get(c).expect("conjunct interned");
                    assert_eq!(counts[&id], *n);
                    assert_eq!(&owners[&id], &expected_owners[c]);
                }
                conjuncts.check_invariants();
            }
            Node::Quant { bodies } => {
                let expected: HashSet<Formula> = self
                    .members
                    .iter()
                    .map(|f| match f {
                        Formula::Quant(_, body) => (**body).clone(),
                        _ => panic!(),
                    })
                    .collect();
                assert_eq!(bodies.members, expected);
                bodies.check_invariants();
            }
            Node::Ef { foralls, exists } => {
                let expected_all: HashSet<Formula> = self
                    .members
                    .iter()
                    .filter(|f| matches!(f, Formula::Quant(QuantKind::Forall, _)))
                    .cloned()
                    .collect();
                let expected_ex: HashSet<Formula> = self
                    .members
                    .iter()
                    .filter(|f| matches!(f, Formula::Quant(QuantKind::Exists, _)))
                    .cloned()
                    .collect();
                assert_eq!(foralls.members, expected_all);
                assert_eq!(exists.members, expected_ex);
                foralls.check_invariants();
                exists.check_invariants();
            }
        }
    }
}

fn trie_remove(node: &mut TrieNode, seq: &[Formula], ids: &Interner) -> bool {
    match seq.first() {
        None => node.terminal = false,
        Some(label) => {
            let id = ids.get(label).expect("indexed edge label");
            let child = node.children.get_mut(&id).expect("indexed trie child");
            if trie_remove(child, &seq[1..], ids) {
                node.children.remove(&id);
                node.labels.remove(label);
            }
        }
    }
    node.is_empty()
}

fn trie_unsat(
    node: &TrieNode,
    ids: &Interner,
    s: &State,
    path: &mut Vec<Formula>,
    out: &mut Vec<Formula>,
) -> Result<(), EvalError> {
    if node.terminal {
        out.push(Formula::OrSeq(path.clone()));
    }
    // only follow edges whose label the state falsifies: any satisfied
    // disjunct satisfies the whole disjunction
    for label in node.labels.unsat_unordered(s)? {
        let id = ids.get(&label).expect("indexed edge label");
        let child = &node.children[&id];
        path.push(label);
        trie_unsat(child, ids, s, path, out)?;
        path.pop();
    }
    Ok(())
}

fn trie_subsuming(
    node: &TrieNode,
    ids: &Interner,
    inner: &LanguageSpec,
    targets: &[Formula],
    path: &mut Vec<Formula>,
    found: &mut HashSet<Formula>,
) {
    if node.terminal {
        found.insert(Formula::OrSeq(path.clone()));
    }
    for (i, target) in targets.iter().enumerate() {
        // equal targets map to identical subtrees
        if targets[..i].contains(target) {
            continue;
        }
        for label in node.labels.subsuming_unordered(target) {
            let id = ids.get(&label).expect("indexed edge label");
            let child = &node.children[&id];
            // each disjunct must subsume a distinct target, and targets below
            // the edge label cannot be subsumed deeper down the ordered trie
            let remaining: Vec<Formula> = targets
                .iter()
                .enumerate()
                .filter(|(j, t)| {
                    *j != i && compare(inner, t, &label) != std::cmp::Ordering::Less
                })
                .map(|(_, t)| t.clone())
                .collect();
            path.push(label);
            trie_subsuming(child, ids, inner, &remaining, path, found);
            path.pop();
        }
    }
}

fn trie_any_subsuming(
    node: &TrieNode,
    ids: &Interner,
    inner: &LanguageSpec,
    targets: &[Formula],
) -> bool {
    if node.terminal {
        return true;
    }
    for (i, target) in targets.iter().enumerate() {
        if targets[..i].contains(target) {
            continue;
        }
        for label in node.labels.subsuming_unordered(target) {
            let id = ids.get(&label).expect("indexed edge label");
            let child = &node.children[&id];
            let remaining: Vec<Formula> = targets
                .iter()
                .enumerate()
                .filter(|(j, t)| {
                    *j != i && compare(inner, t, &label) != std::cmp::Ordering::Less
                })
                .map(|(_, t)| t.clone())
                .collect();
            if trie_any_subsuming(child, ids, inner, &remaining) {
                return true;
            }
        }
    }
    false
}

fn collect_paths(
    node: &TrieNode,
    ids: &Interner,
    inner: &LanguageSpec,
    path: &mut Vec<Formula>,
    terminals: &mut HashSet<Vec<Formula>>,
    prefixes: &mut HashSet<Vec<Formula>>,
) {
    prefixes.insert(path.clone());
    if node.terminal {
        terminals.insert(path.clone());
    }
    let child_labels: HashSet<Formula> = node
        .children
        .keys()
        .map(|&id| ids.formula(id).clone())
        .collect();
    assert_eq!(node.labels.members, child_labels, "labels match children");
    for (&id, child) in &node.children {
        let label = ids.formula(id).clone();
        if let Some(prev) = path.last() {
            assert_ne!(
                compare(inner, &label, prev),
                std::cmp::Ordering::Less,
                "labels non-decreasing along trie paths"
            );
        }
        path.push(label);
        collect_paths(child, ids, inner, path, terminals, prefixes);
        path.pop();
    }
}
