//! Exhaustive enumeration of bounded languages, for oracles and the CLI.
//!
//! Homogeneous disjunctions are enumerated as all sequences of non-bottom
//! inner formulas up to the length bound: bottom disjuncts add nothing (a
//! sequence containing bottom is subsumed by the same sequence without it)
//! and weakening never produces them. Homogeneous conjunctions have
//! syntactically unbounded repetition, so they are enumerated as the finite
//! core of distinct non-bottom subsets plus the bottom conjunction; every
//! conjunction is subsumption-equivalent to a member of that core.

use thiserror::Error;

use fol::QuantKind;

use crate::canon::is_canonical;
use crate::formula::{bottom, Formula};
use crate::spec::LanguageSpec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumError {
    #[error("language too large: more than {limit} formulas")]
    TooLarge { limit: usize },
}

/// Number of formulas `enumerate_formulas` would yield, or `None` on
/// overflow.
pub fn count_formulas(spec: &LanguageSpec) -> Option<u128> {
    match spec {
        LanguageSpec::Atoms(atoms) => Some(1 + atoms.len() as u128),
        LanguageSpec::Or2(l, r) | LanguageSpec::And2(l, r) => {
            count_formulas(l)?.checked_mul(count_formulas(r)?)
        }
        LanguageSpec::OrK(k, inner) => {
            let base = count_formulas(inner)? - 1; // bottom excluded
            let mut total: u128 = 0;
            let mut power: u128 = 1;
            for _ in 0..=*k {
                total = total.checked_add(power)?;
                power = power.checked_mul(base)?;
            }
            Some(total)
        }
        LanguageSpec::AndW(inner) => {
            let base = count_formulas(inner)? - 1;
            if base >= 127 {
                return None;
            }
            // non-empty subsets of non-bottom formulas, plus the bottom
            // conjunction
            Some(1u128 << base)
        }
        LanguageSpec::Exists(_, inner) | LanguageSpec::Forall(_, inner) => count_formulas(inner),
        LanguageSpec::Ef(_, inner) => count_formulas(inner)?.checked_mul(2),
    }
}

/// Every formula of the language, in a deterministic structural order. Fails
/// when the language holds more than `limit` formulas.
pub fn enumerate_formulas(spec: &LanguageSpec, limit: usize) -> Result<Vec<Formula>, EnumError> {
    match count_formulas(spec) {
        Some(n) if n <= limit as u128 => {}
        _ => return Err(EnumError::TooLarge { limit }),
    }
    Ok(enumerate_rec(spec))
}

/// The canonical formulas of the language, in the same structural order.
pub fn enumerate_canonical(spec: &LanguageSpec, limit: usize) -> Result<Vec<Formula>, EnumError> {
    let mut all = enumerate_formulas(spec, limit)?;
    all.retain(|f| is_canonical(spec, f));
    Ok(all)
}

fn enumerate_rec(spec: &LanguageSpec) -> Vec<Formula> {
    match spec {
        LanguageSpec::Atoms(atoms) => std::iter::once(Formula::Bottom)
            .chain(atoms.literals().iter().cloned().map(Formula::Lit))
            .collect(),
        LanguageSpec::Or2(l, r) => {
            let left = enumerate_rec(l);
            let right = enumerate_rec(r);
            left.iter()
                .flat_map(|a| {
                    right
                        .iter()
                        .map(|b| Formula::Or(Box::new(a.clone()), Box::new(b.clone())))
                })
                .collect()
        }
        LanguageSpec::And2(l, r) => {
            let left = enumerate_rec(l);
            let right = enumerate_rec(r);
            left.iter()
                .flat_map(|a| {
                    right
                        .iter()
                        .map(|b| Formula::And(Box::new(a.clone()), Box::new(b.clone())))
                })
                .collect()
        }
        LanguageSpec::OrK(k, inner) => {
            let base = non_bottom(inner);
            let mut result = Vec::new();
            let mut seqs: Vec<Vec<Formula>> = vec![Vec::new()];
            for len in 0..=*k {
                if len > 0 {
                    let mut next = Vec::with_capacity(seqs.len() * base.len());
                    for seq in &seqs {
                        for f in &base {
                            let mut s = seq.clone();
                            s.push(f.clone());
                            next.push(s);
                        }
                    }
                    seqs = next;
                }
                result.extend(seqs.iter().cloned().map(Formula::OrSeq));
            }
            result
        }
        LanguageSpec::AndW(inner) => {
            let base = non_bottom(inner);
            let mut result = vec![bottom(spec)];
            for mask in 1u64..(1u64 << base.len()) {
                let seq: Vec<Formula> = base
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, f)| f.clone())
                    .collect();
                result.push(Formula::AndSeq(seq));
            }
            result
        }
        LanguageSpec::Exists(_, inner) => enumerate_rec(inner)
            .into_iter()
            .map(|f| Formula::Quant(QuantKind::Exists, Box::new(f)))
            .collect(),
        LanguageSpec::Forall(_, inner) => enumerate_rec(inner)
            .into_iter()
            .map(|f| Formula::Quant(QuantKind::Forall, Box::new(f)))
            .collect(),
        LanguageSpec::Ef(_, inner) => {
            let body = enumerate_rec(inner);
            body.iter()
                .map(|f| Formula::Quant(QuantKind::Forall, Box::new(f.clone())))
                .chain(
                    body.iter()
                        .map(|f| Formula::Quant(QuantKind::Exists, Box::new(f.clone()))),
                )
                .collect()
        }
    }
}

fn non_bottom(inner: &LanguageSpec) -> Vec<Formula> {
    let bot = bottom(inner);
    enumerate_rec(inner).into_iter().filter(|f| f != &bot).collect()
}
