//! Sort-preserving permutations of variable sets.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::sig::{Sort, Var};
use crate::term::{Atom, Literal, Term};

/// A sort-preserving bijection on a set of variables, keyed by variable name.
/// Identity entries are stored too, so the domain is explicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(BTreeMap<String, Var>);

impl Permutation {
    pub fn identity(vars: &[Var]) -> Self {
        Permutation(vars.iter().map(|v| (v.name.clone(), v.clone())).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|(name, v)| name == &v.name)
    }

    pub fn image(&self, name: &str) -> Option<&Var> {
        self.0.get(name)
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.0.get(&v.name) {
                Some(w) => Term::Var(w.clone()),
                None => t.clone(),
            },
            Term::Const { .. } => t.clone(),
        }
    }

    pub fn apply_literal(&self, lit: &Literal) -> Literal {
        let atom = match &lit.atom {
            Atom::Relation { name, args } => Atom::Relation {
                name: name.clone(),
                args: args.iter().map(|t| self.apply_term(t)).collect(),
            },
            // re-normalize the operand order after substitution
            Atom::Equal(a, b) => Atom::equal(self.apply_term(a), self.apply_term(b)),
        };
        Literal {
            atom,
            positive: lit.positive,
        }
    }
}

/// All sort-preserving bijections of `vars` onto itself, in a deterministic
/// order with the identity first.
pub fn sort_permutations(vars: &[Var]) -> Vec<Permutation> {
    // group variable positions by sort, preserving input order within groups
    let mut groups: BTreeMap<&Sort, Vec<usize>> = BTreeMap::new();
    for (i, v) in vars.iter().enumerate() {
        groups.entry(&v.sort).or_default().push(i);
    }
    // build all combinations of per-group permutations; the per-group
    // permutations come out in lexicographic order, so the identity is first
    let mut maps: Vec<BTreeMap<String, Var>> = vec![BTreeMap::new()];
    for idxs in groups.values() {
        let mut next = Vec::new();
        for map in &maps {
            for targets in idxs.iter().copied().permutations(idxs.len()) {
                let mut m = map.clone();
                for (&src, &tgt) in idxs.iter().zip(&targets) {
                    m.insert(vars[src].name.clone(), vars[tgt].clone());
                }
                next.push(m);
            }
        }
        maps = next;
    }
    maps.into_iter().map(Permutation).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_sort_pair_has_two_permutations() {
        let node = Sort::new("node");
        let vars = vec![Var::new("x", node.clone()), Var::new("y", node)];
        let perms = sort_permutations(&vars);
        assert_eq!(perms.len(), 2);
        assert!(perms[0].is_identity());
        assert_eq!(perms[1].image("x").unwrap().name, "y");
    }

    #[test]
    fn cross_sort_swap_is_forbidden() {
        let vars = vec![
            Var::new("x", Sort::new("node")),
            Var::new("y", Sort::new("value")),
        ];
        let perms = sort_permutations(&vars);
        assert_eq!(perms.len(), 1);
        assert!(perms[0].is_identity());
    }

    #[test]
    fn empty_set_has_identity_only() {
        let perms = sort_permutations(&[]);
        assert_eq!(perms.len(), 1);
        assert!(perms[0].is_identity());
    }

    #[test]
    fn mixed_sorts_multiply_group_counts() {
        let node = Sort::new("node");
        let value = Sort::new("value");
        let vars = vec![
            Var::new("x", node.clone()),
            Var::new("y", node),
            Var::new("u", value.clone()),
            Var::new("v", value),
        ];
        assert_eq!(sort_permutations(&vars).len(), 4);
    }

    #[test]
    fn apply_substitutes_and_renormalizes_equalities() {
        let node = Sort::new("node");
        let vars = vec![Var::new("x", node.clone()), Var::new("y", node.clone())];
        let swap = sort_permutations(&vars).into_iter().nth(1).unwrap();
        let x = Term::var("x", node.clone());
        let y = Term::var("y", node.clone());
        assert_eq!(
            swap.apply_literal(&Literal::relation("p", vec![x.clone()], true)),
            Literal::relation("p", vec![y.clone()], true)
        );
        // x = y swaps to y = x which normalizes back to x = y
        assert_eq!(
            swap.apply_literal(&Literal::equality(x, y, true)).to_string(),
            "x = y"
        );
    }
}
