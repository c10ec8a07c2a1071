//! Formulas of bounded languages.

use thiserror::Error;

use fol::{Literal, Permutation, QuantKind};

use crate::spec::LanguageSpec;

/// A formula whose shape mirrors a [`LanguageSpec`] node. Quantified
/// variables live in the spec, so a quantifier node stores only its kind and
/// body.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// The bottom literal of an atoms base.
    Bottom,
    Lit(Literal),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Homogeneous disjunction; the empty sequence is the bottom of its
    /// language.
    OrSeq(Vec<Formula>),
    /// Homogeneous conjunction; never empty.
    AndSeq(Vec<Formula>),
    Quant(QuantKind, Box<Formula>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShapeError {
    #[error("formula shape {found} does not match language constructor {expected}")]
    Mismatch { expected: String, found: String },
    #[error("literal {0} is not in the atoms base")]
    UnknownLiteral(String),
    #[error("homogeneous disjunction of length {len} exceeds the bound {k}")]
    TooManyDisjuncts { len: usize, k: usize },
    #[error("empty homogeneous conjunction")]
    EmptyConjunction,
    #[error("quantifier {found} under a fixed {expected} block")]
    WrongQuantifier { expected: String, found: String },
}

/// The bottom element of a language.
pub fn bottom(spec: &LanguageSpec) -> Formula {
    match spec {
        LanguageSpec::Atoms(_) => Formula::Bottom,
        LanguageSpec::Or2(l, r) => Formula::Or(Box::new(bottom(l)), Box::new(bottom(r))),
        LanguageSpec::And2(l, r) => Formula::And(Box::new(bottom(l)), Box::new(bottom(r))),
        LanguageSpec::OrK(_, _) => Formula::OrSeq(Vec::new()),
        LanguageSpec::AndW(inner) => Formula::AndSeq(vec![bottom(inner)]),
        LanguageSpec::Exists(_, inner) => {
            Formula::Quant(QuantKind::Exists, Box::new(bottom(inner)))
        }
        LanguageSpec::Forall(_, inner) | LanguageSpec::Ef(_, inner) => {
            Formula::Quant(QuantKind::Forall, Box::new(bottom(inner)))
        }
    }
}

/// Checks that a formula has the shape prescribed by the spec.
pub fn shape_check(spec: &LanguageSpec, f: &Formula) -> Result<(), ShapeError> {
    match (spec, f) {
        (LanguageSpec::Atoms(_), Formula::Bottom) => Ok(()),
        (LanguageSpec::Atoms(atoms), Formula::Lit(lit)) => {
            if atoms.position(lit).is_some() {
                Ok(())
            } else {
                Err(ShapeError::UnknownLiteral(lit.to_string()))
            }
        }
        (LanguageSpec::Or2(l, r), Formula::Or(a, b)) => {
            shape_check(l, a)?;
            shape_check(r, b)
        }
        (LanguageSpec::And2(l, r), Formula::And(a, b)) => {
            shape_check(l, a)?;
            shape_check(r, b)
        }
        (LanguageSpec::OrK(k, inner), Formula::OrSeq(fs)) => {
            if fs.len() > *k {
                return Err(ShapeError::TooManyDisjuncts {
                    len: fs.len(),
                    k: *k,
                });
            }
            fs.iter().try_for_each(|f| shape_check(inner, f))
        }
        (LanguageSpec::AndW(inner), Formula::AndSeq(fs)) => {
            if fs.is_empty() {
                return Err(ShapeError::EmptyConjunction);
            }
            fs.iter().try_for_each(|f| shape_check(inner, f))
        }
        (LanguageSpec::Exists(_, inner), Formula::Quant(QuantKind::Exists, body)) => {
            shape_check(inner, body)
        }
        (LanguageSpec::Forall(_, inner), Formula::Quant(QuantKind::Forall, body)) => {
            shape_check(inner, body)
        }
        (LanguageSpec::Exists(..), Formula::Quant(q, _)) => Err(ShapeError::WrongQuantifier {
            expected: "exists".to_string(),
            found: q.to_string(),
        }),
        (LanguageSpec::Forall(..), Formula::Quant(q, _)) => Err(ShapeError::WrongQuantifier {
            expected: "forall".to_string(),
            found: q.to_string(),
        }),
        (LanguageSpec::Ef(_, inner), Formula::Quant(_, body)) => shape_check(inner, body),
        _ => Err(ShapeError::Mismatch {
            expected: constructor_name(spec).to_string(),
            found: formula_name(f).to_string(),
        }),
    }
}

fn constructor_name(spec: &LanguageSpec) -> &'static str {
    match spec {
        LanguageSpec::Atoms(_) => "atoms",
        LanguageSpec::Or2(..) => "or2",
        LanguageSpec::And2(..) => "and2",
        LanguageSpec::OrK(..) => "or",
        LanguageSpec::AndW(_) => "and",
        LanguageSpec::Exists(..) => "exists",
        LanguageSpec::Forall(..) => "forall",
        LanguageSpec::Ef(..) => "ef",
    }
}

fn formula_name(f: &Formula) -> &'static str {
    match f {
        Formula::Bottom => "bottom",
        Formula::Lit(_) => "literal",
        Formula::Or(..) => "binary or",
        Formula::And(..) => "binary and",
        Formula::OrSeq(_) => "or-sequence",
        Formula::AndSeq(_) => "and-sequence",
        Formula::Quant(..) => "quantified",
    }
}

/// Substitutes free variables according to a permutation. The substitution
/// descends through quantifiers: block variables are disjoint from the
/// permuted set by the spec invariants, so capture is impossible.
pub fn apply_permutation(f: &Formula, pi: &Permutation) -> Formula {
    match f {
        Formula::Bottom => Formula::Bottom,
        Formula::Lit(lit) => Formula::Lit(pi.apply_literal(lit)),
        Formula::Or(a, b) => Formula::Or(
            Box::new(apply_permutation(a, pi)),
            Box::new(apply_permutation(b, pi)),
        ),
        Formula::And(a, b) => Formula::And(
            Box::new(apply_permutation(a, pi)),
            Box::new(apply_permutation(b, pi)),
        ),
        Formula::OrSeq(fs) => Formula::OrSeq(fs.iter().map(|f| apply_permutation(f, pi)).collect()),
        Formula::AndSeq(fs) => {
            Formula::AndSeq(fs.iter().map(|f| apply_permutation(f, pi)).collect())
        }
        Formula::Quant(q, body) => Formula::Quant(*q, Box::new(apply_permutation(body, pi))),
    }
}
