//! The syntactic subsumption preorder.
//!
//! Subsumption is defined inductively over the language constructors and
//! under-approximates semantic entailment: whenever `phi` subsumes `psi`,
//! `phi` entails `psi`. The bottom element subsumes everything.

use fol::{sort_permutations, QuantKind};

use crate::formula::{apply_permutation, Formula};
use crate::spec::LanguageSpec;

/// Does `phi` subsume `psi` in the given language?
///
/// Panics when the formula shapes do not match the spec.
pub fn subsumes(spec: &LanguageSpec, phi: &Formula, psi: &Formula) -> bool {
    match (spec, phi, psi) {
        (LanguageSpec::Atoms(_), _, _) => phi == &Formula::Bottom || phi == psi,
        (LanguageSpec::Or2(l, r), Formula::Or(a1, a2), Formula::Or(b1, b2)) => {
            subsumes(l, a1, b1) && subsumes(r, a2, b2)
        }
        (LanguageSpec::And2(l, r), Formula::And(a1, a2), Formula::And(b1, b2)) => {
            subsumes(l, a1, b1) && subsumes(r, a2, b2)
        }
        (LanguageSpec::OrK(_, inner), Formula::OrSeq(fs), Formula::OrSeq(gs)) => {
            // an injective mapping sends every disjunct of phi to a distinct
            // disjunct of psi that it subsumes
            let mut used = vec![false; gs.len()];
            injective_match(inner, fs, gs, 0, &mut used)
        }
        (LanguageSpec::AndW(inner), Formula::AndSeq(fs), Formula::AndSeq(gs)) => {
            // every conjunct of psi is subsumed by some conjunct of phi
            gs.iter().all(|g| fs.iter().any(|f| subsumes(inner, f, g)))
        }
        (
            LanguageSpec::Exists(block, inner) | LanguageSpec::Forall(block, inner),
            Formula::Quant(q1, a),
            Formula::Quant(q2, b),
        ) => {
            debug_assert_eq!(q1, q2);
            exists_permutation(inner, block.vars(), a, b)
        }
        (LanguageSpec::Ef(block, inner), Formula::Quant(q1, a), Formula::Quant(q2, b)) => {
            (*q1 == QuantKind::Forall || *q2 == QuantKind::Exists)
                && exists_permutation(inner, block.vars(), a, b)
        }
        _ => panic!("formula shapes do not match language spec"),
    }
}

fn exists_permutation(
    inner: &LanguageSpec,
    vars: &[fol::Var],
    phi: &Formula,
    psi: &Formula,
) -> bool {
    sort_permutations(vars)
        .iter()
        .any(|pi| subsumes(inner, phi, &apply_permutation(psi, pi)))
}

fn injective_match(
    inner: &LanguageSpec,
    fs: &[Formula],
    gs: &[Formula],
    i: usize,
    used: &mut [bool],
) -> bool {
    if i == fs.len() {
        return true;
    }
    for j in 0..gs.len() {
        if !used[j] && subsumes(inner, &fs[i], &gs[j]) {
            used[j] = true;
            if injective_match(inner, fs, gs, i + 1, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::bottom;
    use crate::spec::fixtures::{ex1_spec, p_literals};
    use crate::spec::AtomsSpec;
    use std::sync::Arc;

    fn lit(i: usize) -> Formula {
        Formula::Lit(p_literals()[i].clone())
    }

    fn forall(f: Formula) -> Formula {
        Formula::Quant(QuantKind::Forall, Box::new(f))
    }

    #[test]
    fn quantifier_permutation_enables_subsumption() {
        let spec = ex1_spec();
        // forall {x,y}. or[p(x)]  subsumes  forall {x,y}. or[p(y)]
        let px = forall(Formula::OrSeq(vec![lit(0)]));
        let py = forall(Formula::OrSeq(vec![lit(2)]));
        assert!(subsumes(&spec, &px, &py));
        assert!(subsumes(&spec, &py, &px));
    }

    #[test]
    fn atoms_are_only_subsumed_by_self_or_bottom() {
        let atoms = LanguageSpec::Atoms(AtomsSpec::new(p_literals()));
        assert!(!subsumes(&atoms, &lit(0), &lit(2))); // p(x) vs p(y)
        assert!(subsumes(&atoms, &lit(0), &lit(0)));
        assert!(subsumes(&atoms, &Formula::Bottom, &lit(2)));
    }

    #[test]
    fn injectivity_forbids_merging_disjuncts() {
        // over Atoms the only nontrivial subsumption source is bottom:
        // or[false, psi] does not subsume or[psi] because the mapping must be
        // injective
        let atoms = Arc::new(LanguageSpec::Atoms(AtomsSpec::new(p_literals())));
        let ork = LanguageSpec::OrK(2, atoms);
        let two = Formula::OrSeq(vec![Formula::Bottom, lit(0)]);
        let one = Formula::OrSeq(vec![lit(0)]);
        assert!(!subsumes(&ork, &two, &one));
        assert!(subsumes(&ork, &one, &two));
    }

    #[test]
    fn bottom_subsumes_everything_in_ex1() {
        let spec = ex1_spec();
        let bot = bottom(&spec);
        for f in [
            bot.clone(),
            forall(Formula::OrSeq(vec![lit(1)])),
            forall(Formula::OrSeq(vec![lit(2), lit(0)])),
        ] {
            assert!(subsumes(&spec, &bot, &f));
        }
    }

    #[test]
    fn homogeneous_disjunction_allows_reordering() {
        let atoms = Arc::new(LanguageSpec::Atoms(AtomsSpec::new(p_literals())));
        let ork = LanguageSpec::OrK(2, atoms);
        let ab = Formula::OrSeq(vec![lit(0), lit(2)]);
        let ba = Formula::OrSeq(vec![lit(2), lit(0)]);
        assert!(subsumes(&ork, &ab, &ba));
        assert!(subsumes(&ork, &ba, &ab));
    }

    #[test]
    fn conjunction_subsumption_is_covering() {
        let atoms = Arc::new(LanguageSpec::Atoms(AtomsSpec::new(p_literals())));
        let andw = LanguageSpec::AndW(atoms);
        let strong = Formula::AndSeq(vec![lit(0), lit(2)]);
        let weak = Formula::AndSeq(vec![lit(0)]);
        assert!(subsumes(&andw, &strong, &weak));
        assert!(!subsumes(&andw, &weak, &strong));
        // non-injective covering: and[p(x)] subsumes and[p(x), p(x)]
        let dup = Formula::AndSeq(vec![lit(0), lit(0)]);
        assert!(subsumes(&andw, &weak, &dup));
    }

    #[test]
    fn ef_universal_subsumes_existential() {
        let node = fol::Sort::new("node");
        let block = crate::spec::VarBlock::new(vec![
            fol::Var::new("x", node.clone()),
            fol::Var::new("y", node),
        ])
        .unwrap();
        let atoms = Arc::new(LanguageSpec::Atoms(AtomsSpec::new(p_literals())));
        let ef = LanguageSpec::Ef(block, LanguageSpec::OrK(2, atoms).into_arc());
        let all = Formula::Quant(QuantKind::Forall, Box::new(Formula::OrSeq(vec![lit(0)])));
        let some = Formula::Quant(QuantKind::Exists, Box::new(Formula::OrSeq(vec![lit(0)])));
        assert!(subsumes(&ef, &all, &some));
        assert!(!subsumes(&ef, &some, &all));
        assert!(subsumes(&ef, &some, &some));
    }
}
