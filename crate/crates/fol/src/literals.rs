//! Generation of literal bases over a signature and variable set.

use itertools::Itertools;

use crate::sig::{Signature, Sort, Var};
use crate::term::{Literal, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LitOptions {
    /// Include equality literals between distinct terms of the same sort.
    pub equality: bool,
    /// Emit only positive literals.
    pub positive_only: bool,
}

impl Default for LitOptions {
    fn default() -> Self {
        LitOptions {
            equality: true,
            positive_only: false,
        }
    }
}

/// All well-sorted literals over the given variables and the signature's
/// constants, in the deterministic base order. The result is closed under
/// sort-preserving variable permutations. Reflexive equalities are excluded,
/// and equalities are orientation-normalized so each unordered pair appears
/// once.
pub fn generate_literals(sig: &Signature, vars: &[Var], opts: LitOptions) -> Vec<Literal> {
    let terms_of = |sort: &Sort| -> Vec<Term> {
        vars.iter()
            .filter(|v| &v.sort == sort)
            .map(|v| Term::Var(v.clone()))
            .chain(
                sig.constants_of(sort)
                    .map(|c| Term::constant(c.name.clone(), c.sort.clone())),
            )
            .collect()
    };

    let mut literals = Vec::new();
    for rel in &sig.relations {
        let arg_terms: Vec<Vec<Term>> = rel.args.iter().map(terms_of).collect();
        if arg_terms.iter().any(|ts| ts.is_empty()) && !rel.args.is_empty() {
            continue;
        }
        let tuples: Vec<Vec<Term>> = if rel.args.is_empty() {
            vec![Vec::new()]
        } else {
            arg_terms
                .into_iter()
                .multi_cartesian_product()
                .collect()
        };
        for args in tuples {
            literals.push(Literal::relation(rel.name.clone(), args.clone(), true));
            if !opts.positive_only {
                literals.push(Literal::relation(rel.name.clone(), args, false));
            }
        }
    }
    if opts.equality {
        for sort in &sig.sorts {
            let terms = terms_of(sort);
            for i in 0..terms.len() {
                for j in i + 1..terms.len() {
                    literals.push(Literal::equality(terms[i].clone(), terms[j].clone(), true));
                    if !opts.positive_only {
                        literals.push(Literal::equality(
                            terms[i].clone(),
                            terms[j].clone(),
                            false,
                        ));
                    }
                }
            }
        }
    }
    literals.sort_by_key(|l| l.order_key());
    literals.dedup();
    literals
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::sort_permutations;
    use crate::sig::RelationDecl;
    use std::collections::HashSet;

    fn p_sig() -> Signature {
        Signature {
            sorts: vec![Sort::new("node")],
            constants: vec![],
            relations: vec![RelationDecl {
                name: "p".to_string(),
                args: vec![Sort::new("node")],
            }],
        }
    }

    fn xy() -> Vec<Var> {
        let node = Sort::new("node");
        vec![Var::new("x", node.clone()), Var::new("y", node)]
    }

    #[test]
    fn running_example_literals() {
        let lits = generate_literals(
            &p_sig(),
            &xy(),
            LitOptions {
                equality: false,
                positive_only: false,
            },
        );
        let rendered: Vec<String> = lits.iter().map(|l| l.to_string()).collect();
        assert_eq!(rendered, vec!["p(x)", "!p(x)", "p(y)", "!p(y)"]);
    }

    #[test]
    fn equality_only_signature() {
        let sig = Signature {
            sorts: vec![Sort::new("node")],
            constants: vec![],
            relations: vec![],
        };
        let lits = generate_literals(&sig, &xy(), LitOptions::default());
        let rendered: Vec<String> = lits.iter().map(|l| l.to_string()).collect();
        assert_eq!(rendered, vec!["x = y", "x != y"]);
    }

    #[test]
    fn empty_signature_no_equality_is_empty() {
        let sig = Signature::default();
        let lits = generate_literals(
            &sig,
            &xy(),
            LitOptions {
                equality: false,
                positive_only: false,
            },
        );
        assert!(lits.is_empty());
    }

    #[test]
    fn result_is_permutation_closed() {
        let lits = generate_literals(&p_sig(), &xy(), LitOptions::default());
        let set: HashSet<_> = lits.iter().cloned().collect();
        for pi in sort_permutations(&xy()) {
            for lit in &lits {
                assert!(set.contains(&pi.apply_literal(lit)));
            }
        }
    }

    #[test]
    fn positive_only_halves_relation_literals() {
        let lits = generate_literals(
            &p_sig(),
            &xy(),
            LitOptions {
                equality: false,
                positive_only: true,
            },
        );
        assert_eq!(lits.len(), 2);
        assert!(lits.iter().all(|l| l.positive));
    }
}
