//! Canonicalization and the total order over canonical formulas.
//!
//! The two are defined by mutual induction. Canonicalization picks one
//! representative per subsumption-equivalence class; the total order extends
//! subsumption on canonical formulas and is what makes antichain maintenance
//! by sorted insertion possible.

use std::cmp::Ordering;

use fol::{sort_permutations, QuantKind};

use crate::formula::{apply_permutation, Formula};
use crate::spec::LanguageSpec;
use crate::subsume::subsumes;

/// The total order over canonical formulas. Behavior on non-canonical input
/// is unspecified; callers must canonicalize first. Panics when the formula
/// shapes do not match the spec.
pub fn compare(spec: &LanguageSpec, a: &Formula, b: &Formula) -> Ordering {
    match (spec, a, b) {
        (LanguageSpec::Atoms(atoms), _, _) => {
            let pos = |f: &Formula| match f {
                Formula::Bottom => 0usize,
                Formula::Lit(lit) => {
                    1 + atoms
                        .position(lit)
                        .expect("literal outside the atoms base")
                }
                _ => panic!("formula shape does not match atoms spec"),
            };
            pos(a).cmp(&pos(b))
        }
        (LanguageSpec::Or2(l, r), Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (LanguageSpec::And2(l, r), Formula::And(a1, a2), Formula::And(b1, b2)) => {
            compare(l, a1, b1).then_with(|| compare(r, a2, b2))
        }
        (LanguageSpec::OrK(_, inner), Formula::OrSeq(fs), Formula::OrSeq(gs)) => {
            // right-to-left positional comparison; a strict suffix is least
            for i in 1..=fs.len().min(gs.len()) {
                match compare(inner, &fs[fs.len() - i], &gs[gs.len() - i]) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            fs.len().cmp(&gs.len())
        }
        (LanguageSpec::AndW(inner), Formula::AndSeq(fs), Formula::AndSeq(gs)) => {
            // left-to-right positional comparison; a strict prefix is
            // greater, so extending a conjunction moves it down the order
            for i in 0..fs.len().min(gs.len()) {
                match compare(inner, &fs[i], &gs[i]) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            gs.len().cmp(&fs.len())
        }
        (
            LanguageSpec::Exists(_, inner) | LanguageSpec::Forall(_, inner),
            Formula::Quant(q1, a),
            Formula::Quant(q2, b),
        ) => {
            debug_assert_eq!(q1, q2);
            compare(inner, a, b)
        }
        (LanguageSpec::Ef(_, inner), Formula::Quant(q1, a), Formula::Quant(q2, b)) => {
            // all universals precede all existentials
            let rank = |q: &QuantKind| match q {
                QuantKind::Forall => 0,
                QuantKind::Exists => 1,
            };
            rank(q1).cmp(&rank(q2)).then_with(|| compare(inner, a, b))
        }
        _ => panic!("formula shapes do not match language spec"),
    }
}

/// The canonicalization function: representative and decisive with respect to
/// subsumption-equivalence. Panics when the formula shapes do not match the
/// spec.
pub fn canonicalize(spec: &LanguageSpec, f: &Formula) -> Formula {
    match (spec, f) {
        (LanguageSpec::Atoms(_), _) => f.clone(),
        (LanguageSpec::Or2(l, r), Formula::Or(a, b)) => Formula::Or(
            Box::new(canonicalize(l, a)),
            Box::new(canonicalize(r, b)),
        ),
        (LanguageSpec::And2(l, r), Formula::And(a, b)) => Formula::And(
            Box::new(canonicalize(l, a)),
            Box::new(canonicalize(r, b)),
        ),
        (LanguageSpec::OrK(_, inner), Formula::OrSeq(fs)) => {
            let mut canon: Vec<Formula> = fs.iter().map(|f| canonicalize(inner, f)).collect();
            canon.sort_by(|a, b| compare(inner, a, b));
            Formula::OrSeq(canon)
        }
        (LanguageSpec::AndW(inner), Formula::AndSeq(fs)) => {
            let canon: Vec<Formula> = fs.iter().map(|f| canonicalize(inner, f)).collect();
            Formula::AndSeq(minimize(inner, canon))
        }
        (
            LanguageSpec::Exists(block, inner)
            | LanguageSpec::Forall(block, inner)
            | LanguageSpec::Ef(block, inner),
            Formula::Quant(q, body),
        ) => {
            // least canonicalized body over all sort-preserving permutations
            let least = sort_permutations(block.vars())
                .iter()
                .map(|pi| canonicalize(inner, &apply_permutation(body, pi)))
                .min_by(|a, b| compare(inner, a, b))
                .expect("permutation set is never empty");
            Formula::Quant(*q, Box::new(least))
        }
        _ => panic!("formula shape does not match language spec"),
    }
}

pub fn is_canonical(spec: &LanguageSpec, f: &Formula) -> bool {
    canonicalize(spec, f) == *f
}

/// The subsumption-minimal elements of a collection of canonical formulas,
/// deduplicated and sorted by the total order.
pub fn minimize(spec: &LanguageSpec, mut formulas: Vec<Formula>) -> Vec<Formula> {
    formulas.sort_by(|a, b| compare(spec, a, b));
    formulas.dedup();
    // the total order extends subsumption, so a formula can only be subsumed
    // by one sorted in front of it, and checking against kept formulas
    // suffices by transitivity
    let mut kept: Vec<Formula> = Vec::with_capacity(formulas.len());
    for f in formulas {
        if !kept.iter().any(|g| subsumes(spec, g, &f)) {
            kept.push(f);
        }
    }
    kept
}
