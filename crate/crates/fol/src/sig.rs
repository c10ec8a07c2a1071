//! Sorts, variables and relational signatures.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An uninterpreted sort, identified by name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort(pub String);

impl Sort {
    pub fn new(name: impl Into<String>) -> Self {
        Sort(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A sorted variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Var {
            name: name.into(),
            sort,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

/// A constant symbol declaration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstDecl {
    pub name: String,
    pub sort: Sort,
}

/// A relation symbol declaration with its argument sorts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationDecl {
    pub name: String,
    pub args: Vec<Sort>,
}

/// A relational signature: sorts, constant symbols and relation symbols.
///
/// Function symbols are deliberately not supported; constants can express the
/// nullary case and the finite-structure enumeration stays simple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    pub sorts: Vec<Sort>,
    pub constants: Vec<ConstDecl>,
    pub relations: Vec<RelationDecl>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("duplicate sort {0}")]
    DuplicateSort(String),
    #[error("duplicate symbol {0}")]
    DuplicateSymbol(String),
    #[error("symbol {symbol} refers to undeclared sort {sort}")]
    UnknownSort { symbol: String, sort: String },
}

impl Signature {
    /// Checks the signature invariants: unique names, declared sorts.
    pub fn validate(&self) -> Result<(), SignatureError> {
        let mut sorts = std::collections::HashSet::new();
        for s in &self.sorts {
            if !sorts.insert(s.name().to_string()) {
                return Err(SignatureError::DuplicateSort(s.name().to_string()));
            }
        }
        let mut symbols = std::collections::HashSet::new();
        for c in &self.constants {
            if !symbols.insert(c.name.clone()) {
                return Err(SignatureError::DuplicateSymbol(c.name.clone()));
            }
            if !sorts.contains(c.sort.name()) {
                return Err(SignatureError::UnknownSort {
                    symbol: c.name.clone(),
                    sort: c.sort.name().to_string(),
                });
            }
        }
        for r in &self.relations {
            if !symbols.insert(r.name.clone()) {
                return Err(SignatureError::DuplicateSymbol(r.name.clone()));
            }
            for s in &r.args {
                if !sorts.contains(s.name()) {
                    return Err(SignatureError::UnknownSort {
                        symbol: r.name.clone(),
                        sort: s.name().to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn sort(&self, name: &str) -> Option<&Sort> {
        self.sorts.iter().find(|s| s.name() == name)
    }

    pub fn constant(&self, name: &str) -> Option<&ConstDecl> {
        self.constants.iter().find(|c| c.name == name)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationDecl> {
        self.relations.iter().find(|r| r.name == name)
    }

    /// Constants of the given sort, in declaration order.
    pub fn constants_of<'a>(&'a self, sort: &'a Sort) -> impl Iterator<Item = &'a ConstDecl> + 'a {
        self.constants.iter().filter(move |c| &c.sort == sort)
    }

    pub fn into_arc(self) -> Arc<Signature> {
        Arc::new(self)
    }
}
