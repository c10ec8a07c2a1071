//! Exhaustive enumeration of bounded structures.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::sig::{Signature, Sort};
use crate::structure::Structure;

/// Number of structures with exactly the given per-sort sizes:
/// the product over constants of their sort size, times the product over
/// relations of `2^(tuple-space size)`. `None` on overflow.
pub fn count_exact(sig: &Signature, sizes: &BTreeMap<Sort, usize>) -> Option<u128> {
    let mut count: u128 = 1;
    for c in &sig.constants {
        count = count.checked_mul(*sizes.get(&c.sort)? as u128)?;
    }
    for r in &sig.relations {
        let mut tuples: u128 = 1;
        for s in &r.args {
            tuples = tuples.checked_mul(*sizes.get(s)? as u128)?;
        }
        if tuples >= 128 {
            return None;
        }
        count = count.checked_mul(1u128.checked_shl(tuples as u32)?)?;
    }
    Some(count)
}

/// All tuples over the given per-argument domain sizes, in lexicographic
/// order.
fn tuple_space(arg_sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut tuples = vec![Vec::new()];
    for &n in arg_sizes {
        let mut next = Vec::with_capacity(tuples.len() * n);
        for t in &tuples {
            for e in 0..n {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        tuples = next;
    }
    tuples
}

/// Iterator over every structure with fixed per-sort universe sizes, in a
/// deterministic order: constants advance as a mixed-radix counter (slowest),
/// relation tables as subset bitmasks over the lexicographic tuple space.
pub struct StructureIter {
    sig: Arc<Signature>,
    sizes: BTreeMap<Sort, usize>,
    // one counter per constant (value < sort size), one bitmask per relation
    const_counters: Vec<usize>,
    rel_masks: Vec<u128>,
    rel_tuples: Vec<Vec<Vec<usize>>>,
    done: bool,
}

impl StructureIter {
    fn new(sig: Arc<Signature>, sizes: BTreeMap<Sort, usize>) -> Self {
        let rel_tuples: Vec<Vec<Vec<usize>>> = sig
            .relations
            .iter()
            .map(|r| {
                let arg_sizes: Vec<usize> =
                    r.args.iter().map(|s| sizes.get(s).copied().unwrap_or(0)).collect();
                tuple_space(&arg_sizes)
            })
            .collect();
        let done = sig.sorts.iter().any(|s| sizes.get(s).copied().unwrap_or(0) == 0)
            || rel_tuples.iter().any(|t| t.len() >= 128);
        StructureIter {
            const_counters: vec![0; sig.constants.len()],
            rel_masks: vec![0; sig.relations.len()],
            rel_tuples,
            sig,
            sizes,
            done,
        }
    }

    fn current(&self) -> Structure {
        let constants: BTreeMap<String, usize> = self
            .sig
            .constants
            .iter()
            .zip(&self.const_counters)
            .map(|(c, &v)| (c.name.clone(), v))
            .collect();
        let relations: BTreeMap<String, BTreeSet<Vec<usize>>> = self
            .sig
            .relations
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let table: BTreeSet<Vec<usize>> = self.rel_tuples[i]
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| self.rel_masks[i] & (1u128 << j) != 0)
                    .map(|(_, t)| t.clone())
                    .collect();
                (r.name.clone(), table)
            })
            .collect();
        Structure {
            signature: Arc::clone(&self.sig),
            universe: self.sizes.clone(),
            constants,
            relations,
        }
    }

    fn advance(&mut self) {
        // relation masks are the fastest-moving digits, last relation first
        for i in (0..self.rel_masks.len()).rev() {
            self.rel_masks[i] += 1;
            if self.rel_masks[i] < (1u128 << self.rel_tuples[i].len()) {
                return;
            }
            self.rel_masks[i] = 0;
        }
        for i in (0..self.const_counters.len()).rev() {
            self.const_counters[i] += 1;
            let size = self.sizes.get(&self.sig.constants[i].sort).copied().unwrap_or(0);
            if self.const_counters[i] < size {
                return;
            }
            self.const_counters[i] = 0;
        }
        self.done = true;
    }
}

impl Iterator for StructureIter {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        if self.done {
            return None;
        }
        let s = self.current();
        self.advance();
        Some(s)
    }
}

/// Every structure whose per-sort universe size equals the given size exactly.
/// All bounds must be at least one.
pub fn structures_exact(
    sig: &Arc<Signature>,
    sizes: &BTreeMap<Sort, usize>,
) -> Result<StructureIter, BoundsError> {
    check_bounds(sig, sizes)?;
    Ok(StructureIter::new(Arc::clone(sig), sizes.clone()))
}

fn check_bounds(sig: &Signature, bounds: &BTreeMap<Sort, usize>) -> Result<(), BoundsError> {
    for s in &sig.sorts {
        if bounds.get(s).copied().unwrap_or(0) == 0 {
            return Err(BoundsError::ZeroBound(s.name().to_string()));
        }
    }
    for r in &sig.relations {
        let tuples: u128 = r
            .args
            .iter()
            .map(|s| bounds.get(s).copied().unwrap_or(0) as u128)
            .product();
        if tuples >= 128 {
            return Err(BoundsError::TupleSpaceTooLarge(r.name.clone()));
        }
    }
    Ok(())
}

/// Every structure whose per-sort universe sizes are between one and the
/// given bounds, enumerated stratum by stratum in lexicographic size order.
pub fn structures_up_to(
    sig: &Arc<Signature>,
    bounds: &BTreeMap<Sort, usize>,
) -> Result<impl Iterator<Item = Structure>, BoundsError> {
    check_bounds(sig, bounds)?;
    let mut size_combos = vec![BTreeMap::new()];
    for sort in &sig.sorts {
        let bound = bounds[sort];
        let mut next = Vec::with_capacity(size_combos.len() * bound);
        for combo in &size_combos {
            for n in 1..=bound {
                let mut c: BTreeMap<Sort, usize> = combo.clone();
                c.insert(sort.clone(), n);
                next.push(c);
            }
        }
        size_combos = next;
    }
    let sig = Arc::clone(sig);
    Ok(size_combos
        .into_iter()
        .flat_map(move |sizes| StructureIter::new(Arc::clone(&sig), sizes)))
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("sort {0} has bound 0; bounds must be at least 1")]
    ZeroBound(String),
    #[error("relation {0} has a tuple space too large to enumerate (>= 2^128 tables)")]
    TupleSpaceTooLarge(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::{ConstDecl, RelationDecl};

    fn sig(constants: usize, unary_relations: usize) -> Arc<Signature> {
        let node = Sort::new("node");
        Signature {
            sorts: vec![node.clone()],
            constants: (0..constants)
                .map(|i| ConstDecl {
                    name: format!("c{i}"),
                    sort: node.clone(),
                })
                .collect(),
            relations: (0..unary_relations)
                .map(|i| RelationDecl {
                    name: format!("p{i}"),
                    args: vec![node.clone()],
                })
                .collect(),
        }
        .into_arc()
    }

    #[test]
    fn unary_relation_bound_two_gives_four() {
        let sig = sig(0, 1);
        let sizes = [(Sort::new("node"), 2)].into();
        let all: Vec<_> = structures_exact(&sig, &sizes).unwrap().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(count_exact(&sig, &sizes), Some(4));
    }

    #[test]
    fn constant_bound_three_gives_three() {
        let sig = sig(1, 0);
        let sizes = [(Sort::new("node"), 3)].into();
        let all: Vec<_> = structures_exact(&sig, &sizes).unwrap().collect();
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn empty_signature_has_unique_structure() {
        let sig = Signature::default().into_arc();
        let all: Vec<_> = structures_exact(&sig, &BTreeMap::new()).unwrap().collect();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn zero_bound_is_rejected() {
        let sig = sig(0, 1);
        let sizes = [(Sort::new("node"), 0)].into();
        assert!(structures_exact(&sig, &sizes).is_err());
    }

    #[test]
    fn no_duplicates_and_count_matches_prediction() {
        let node = Sort::new("node");
        let value = Sort::new("value");
        let sig = Signature {
            sorts: vec![node.clone(), value.clone()],
            constants: vec![ConstDecl {
                name: "c".to_string(),
                sort: node.clone(),
            }],
            relations: vec![
                RelationDecl {
                    name: "r".to_string(),
                    args: vec![node.clone(), value.clone()],
                },
                RelationDecl {
                    name: "q".to_string(),
                    args: vec![value.clone()],
                },
            ],
        }
        .into_arc();
        let sizes: BTreeMap<Sort, usize> = [(node, 2), (value, 2)].into();
        let all: Vec<_> = structures_exact(&sig, &sizes).unwrap().collect();
        let expected = count_exact(&sig, &sizes).unwrap() as usize;
        assert_eq!(all.len(), expected); // 2 * 2^4 * 2^2 = 128
        let unique: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
        for s in &all {
            s.validate().unwrap();
        }
    }

    #[test]
    fn up_to_enumerates_all_strata() {
        let sig = sig(0, 1);
        let bounds = [(Sort::new("node"), 2)].into();
        let all: Vec<_> = structures_up_to(&sig, &bounds).unwrap().collect();
        assert_eq!(all.len(), 2 + 4); // size 1: 2 structures, size 2: 4
    }
}
