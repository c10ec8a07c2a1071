//! Builder for quantified k-pDNF languages.
//!
//! A k-pDNF formula has the shape `c1 -> (c2 | ... | ck)` with cubes `ci`,
//! realized as the disjunction of a literal clause of at most `n` literals
//! and at most `k-1` cubes. Literals whose variables all come from the
//! leading universal block are omitted from the cube base: a cube containing
//! such a literal can be decomposed into a conjunction of cube-free k-pDNF
//! formulas of the same language, so they add no expressive power.

use std::sync::Arc;

use thiserror::Error;

use fol::{Signature, Var};

use fol::literals::{generate_literals, LitOptions};
use crate::spec::{AtomsSpec, LanguageSpec, SpecError, VarBlock};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixKind {
    Forall,
    Exists,
    /// Either quantifier, chosen per formula.
    Ef,
}

/// One quantified variable of the prefix, outermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixItem {
    pub kind: PrefixKind,
    pub var: Var,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KpdnfOptions {
    pub equality: bool,
}

impl Default for KpdnfOptions {
    fn default() -> Self {
        KpdnfOptions { equality: true }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KpdnfError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("n must be at least 1")]
    ZeroN,
    #[error("{0}")]
    Spec(#[from] SpecError),
}

/// Builds the bounded language for a quantifier prefix over a k-pDNF matrix.
pub fn build_kpdnf(
    sig: &Signature,
    prefix: &[PrefixItem],
    k: usize,
    n: usize,
    opts: KpdnfOptions,
) -> Result<Arc<LanguageSpec>, KpdnfError> {
    if k == 0 {
        return Err(KpdnfError::ZeroK);
    }
    if n == 0 {
        return Err(KpdnfError::ZeroN);
    }
    let mut names = std::collections::HashSet::new();
    for item in prefix {
        if !names.insert(item.var.name.as_str()) {
            return Err(KpdnfError::Spec(SpecError::DuplicateVar(
                item.var.name.clone(),
            )));
        }
    }

    // group consecutive prefix entries of the same kind into blocks
    let mut blocks: Vec<(PrefixKind, Vec<Var>)> = Vec::new();
    for item in prefix {
        match blocks.last_mut() {
            Some((kind, vars)) if *kind == item.kind => vars.push(item.var.clone()),
            _ => blocks.push((item.kind, vec![item.var.clone()])),
        }
    }

    let all_vars: Vec<Var> = prefix.iter().map(|p| p.var.clone()).collect();
    let lit_opts = LitOptions {
        equality: opts.equality,
        positive_only: false,
    };
    let clause_lits = generate_literals(sig, &all_vars, lit_opts);

    // the leading universal block; cube literals over only these variables
    // (or over no variables at all) are redundant
    let leading: Vec<&Var> = match blocks.first() {
        Some((PrefixKind::Forall, vars)) => vars.iter().collect(),
        _ => Vec::new(),
    };
    let cube_lits: Vec<_> = clause_lits
        .iter()
        .filter(|lit| {
            lit.vars()
                .iter()
                .any(|v| !leading.iter().any(|l| l.name == v.name))
        })
        .cloned()
        .collect();

    let clause = LanguageSpec::OrK(
        n,
        LanguageSpec::Atoms(AtomsSpec::new(clause_lits)).into_arc(),
    );
    let mut spec = if k == 1 || cube_lits.is_empty() {
        clause.into_arc()
    } else {
        let cubes = LanguageSpec::OrK(
            k - 1,
            LanguageSpec::AndW(LanguageSpec::Atoms(AtomsSpec::new(cube_lits)).into_arc())
                .into_arc(),
        );
        LanguageSpec::Or2(clause.into_arc(), cubes.into_arc()).into_arc()
    };

    for (kind, vars) in blocks.into_iter().rev() {
        let block = VarBlock::new(vars)?;
        spec = match kind {
            PrefixKind::Forall => LanguageSpec::Forall(block, spec),
            PrefixKind::Exists => LanguageSpec::Exists(block, spec),
            PrefixKind::Ef => LanguageSpec::Ef(block, spec),
        }
        .into_arc();
    }
    Ok(spec)
}
