//! Transition-system types.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use fol::{Fo, Signature, Sort, Var};

/// Per-sort maximum universe sizes for bounded-model reasoning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds(pub BTreeMap<Sort, usize>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsParseError {
    #[error("invalid bound entry {0:?}, expected sort=N")]
    BadEntry(String),
    #[error("unknown sort {0}")]
    UnknownSort(String),
    #[error("duplicate bound for sort {0}")]
    DuplicateSort(String),
    #[error("sort {0} has no bound")]
    MissingSort(String),
    #[error("sort {0} has bound 0; bounds must be at least 1")]
    ZeroBound(String),
}

impl Bounds {
    /// Parses `sort=N,sort=N` against a signature; every sort must be
    /// covered with a positive bound.
    pub fn parse(text: &str, sig: &Signature) -> Result<Bounds, BoundsParseError> {
        let mut map = BTreeMap::new();
        for entry in text.split(',').filter(|e| !e.trim().is_empty()) {
            let (name, value) = entry
                .split_once('=')
                .ok_or_else(|| BoundsParseError::BadEntry(entry.to_string()))?;
            let sort = sig
                .sort(name.trim())
                .ok_or_else(|| BoundsParseError::UnknownSort(name.trim().to_string()))?;
            let n: usize = value
                .trim()
                .parse()
                .map_err(|_| BoundsParseError::BadEntry(entry.to_string()))?;
            if map.insert(sort.clone(), n).is_some() {
                return Err(BoundsParseError::DuplicateSort(sort.name().to_string()));
            }
        }
        let bounds = Bounds(map);
        bounds.validate(sig)?;
        Ok(bounds)
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), BoundsParseError> {
        for sort in &sig.sorts {
            match self.0.get(sort) {
                None => return Err(BoundsParseError::MissingSort(sort.name().to_string())),
                Some(0) => return Err(BoundsParseError::ZeroBound(sort.name().to_string())),
                Some(_) => {}
            }
        }
        Ok(())
    }

    pub fn get(&self, sort: &Sort) -> usize {
        self.0.get(sort).copied().unwrap_or(0)
    }
}

/// A pointwise relation update: `relation(vars) := formula` evaluated in the
/// pre-state for every argument tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Update {
    pub relation: String,
    pub vars: Vec<Var>,
    pub formula: Fo,
}

/// A guarded action with typed parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub name: String,
    pub params: Vec<Var>,
    pub guard: Fo,
    pub updates: Vec<Update>,
}

impl Action {
    /// The update rule for a relation, if the action changes it.
    pub fn update_for(&self, relation: &str) -> Option<&Update> {
        self.updates.iter().find(|u| u.relation == relation)
    }
}

/// A transition system: initial-state formula, guarded-update actions and an
/// optional safety formula, all closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolModel {
    pub signature: Arc<Signature>,
    pub init: Fo,
    pub safety: Option<Fo>,
    pub actions: Vec<Action>,
}
