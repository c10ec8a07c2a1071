//! Language descriptors: the recursive constructor tree of a bounded
//! first-order language.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use fol::{sort_permutations, Literal, Signature, Sort, Var};

/// A quantifier block: a set of distinct variables, kept sorted by
/// (sort, name) for deterministic iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarBlock {
    vars: Vec<Var>,
}

impl VarBlock {
    pub fn new(mut vars: Vec<Var>) -> Result<Self, SpecError> {
        vars.sort_by(|a, b| (&a.sort, &a.name).cmp(&(&b.sort, &b.name)));
        let mut names = HashSet::new();
        for v in &vars {
            if !names.insert(v.name.clone()) {
                return Err(SpecError::DuplicateVar(v.name.clone()));
            }
        }
        Ok(VarBlock { vars })
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn contains(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v.name == name)
    }
}

/// The base case of a bounded language: an ordered set of literals, with the
/// implicit bottom formula as least element. The order is the fixed total
/// order used by canonicalization.
#[derive(Debug, Clone)]
pub struct AtomsSpec {
    literals: Vec<Literal>,
    index: HashMap<Literal, usize>,
}

impl PartialEq for AtomsSpec {
    fn eq(&self, other: &Self) -> bool {
        self.literals == other.literals
    }
}

impl Eq for AtomsSpec {}

impl AtomsSpec {
    /// Builds the base set, sorting literals into the deterministic base
    /// order (relation name, rendered argument tuple, positive before
    /// negative) and dropping duplicates.
    pub fn new(mut literals: Vec<Literal>) -> Self {
        literals.sort_by_key(|l| l.order_key());
        literals.dedup();
        let index = literals
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        AtomsSpec { literals, index }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn position(&self, lit: &Literal) -> Option<usize> {
        self.index.get(lit).copied()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

/// A bounded first-order language, given by its constructor tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LanguageSpec {
    /// A finite permutation-closed literal set, plus bottom.
    Atoms(AtomsSpec),
    /// Binary disjunction of two languages.
    Or2(Arc<LanguageSpec>, Arc<LanguageSpec>),
    /// Binary conjunction of two languages.
    And2(Arc<LanguageSpec>, Arc<LanguageSpec>),
    /// Homogeneous disjunction of at most `k` formulas.
    OrK(usize, Arc<LanguageSpec>),
    /// Homogeneous non-empty conjunction, unbounded width.
    AndW(Arc<LanguageSpec>),
    /// Existential quantification over a variable block.
    Exists(VarBlock, Arc<LanguageSpec>),
    /// Universal quantification over a variable block.
    Forall(VarBlock, Arc<LanguageSpec>),
    /// Either quantifier over a variable block, per formula.
    Ef(VarBlock, Arc<LanguageSpec>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("duplicate variable {0} in a quantifier block")]
    DuplicateVar(String),
    #[error("variable {0} shadows an enclosing quantifier block")]
    ShadowedVar(String),
    #[error("literal {0} is not well-sorted for the signature")]
    IllSorted(String),
    #[error("literal set is not closed under permutations of block variables: missing {0}")]
    NotPermutationClosed(String),
    #[error("variable {name} is used with conflicting sorts {sort1} and {sort2}")]
    ConflictingSorts {
        name: String,
        sort1: String,
        sort2: String,
    },
}

impl LanguageSpec {
    pub fn into_arc(self) -> Arc<LanguageSpec> {
        Arc::new(self)
    }

    /// Checks the spec invariants against a signature: well-sorted literals,
    /// disjoint quantifier blocks, consistent variable sorts, and closure of
    /// every literal base under sort-preserving permutations of each
    /// enclosing block.
    pub fn validate(&self, sig: &Signature) -> Result<(), SpecError> {
        let mut blocks: Vec<&VarBlock> = Vec::new();
        let mut sorts_seen: BTreeMap<String, Sort> = BTreeMap::new();
        self.validate_rec(sig, &mut blocks, &mut sorts_seen)
    }

    fn validate_rec<'a>(
        &'a self,
        sig: &Signature,
        blocks: &mut Vec<&'a VarBlock>,
        sorts_seen: &mut BTreeMap<String, Sort>,
    ) -> Result<(), SpecError> {
        match self {
            LanguageSpec::Atoms(atoms) => {
                let lits: HashSet<&Literal> = atoms.literals.iter().collect();
                for lit in &atoms.literals {
                    if !lit.well_sorted(sig) {
                        return Err(SpecError::IllSorted(lit.to_string()));
                    }
                    for v in lit.vars() {
                        check_sort(sorts_seen, v)?;
                    }
                    for block in blocks.iter() {
                        for pi in sort_permutations(block.vars()) {
                            let image = pi.apply_literal(lit);
                            if !lits.contains(&image) {
                                return Err(SpecError::NotPermutationClosed(image.to_string()));
                            }
                        }
                    }
                }
                Ok(())
            }
            LanguageSpec::Or2(l, r) | LanguageSpec::And2(l, r) => {
                l.validate_rec(sig, blocks, sorts_seen)?;
                r.validate_rec(sig, blocks, sorts_seen)
            }
            LanguageSpec::OrK(_, inner) | LanguageSpec::AndW(inner) => {
                inner.validate_rec(sig, blocks, sorts_seen)
            }
            LanguageSpec::Exists(block, inner)
            | LanguageSpec::Forall(block, inner)
            | LanguageSpec::Ef(block, inner) => {
                for v in block.vars() {
                    if blocks.iter().any(|b| b.contains(&v.name)) {
                        return Err(SpecError::ShadowedVar(v.name.clone()));
                    }
                    check_sort(sorts_seen, v)?;
                }
                blocks.push(block);
                let result = inner.validate_rec(sig, blocks, sorts_seen);
                blocks.pop();
                result
            }
        }
    }

    /// Variables appearing in literal bases that are not bound by any
    /// enclosing quantifier block, mapped to their sorts.
    pub fn free_vars(&self) -> BTreeMap<String, Sort> {
        let mut free = BTreeMap::new();
        let mut blocks: Vec<&VarBlock> = Vec::new();
        self.free_vars_rec(&mut blocks, &mut free);
        free
    }

    fn free_vars_rec<'a>(
        &'a self,
        blocks: &mut Vec<&'a VarBlock>,
        free: &mut BTreeMap<String, Sort>,
    ) {
        match self {
            LanguageSpec::Atoms(atoms) => {
                for lit in &atoms.literals {
                    for v in lit.vars() {
                        if !blocks.iter().any(|b| b.contains(&v.name)) {
                            free.entry(v.name.clone()).or_insert_with(|| v.sort.clone());
                        }
                    }
                }
            }
            LanguageSpec::Or2(l, r) | LanguageSpec::And2(l, r) => {
                l.free_vars_rec(blocks, free);
                r.free_vars_rec(blocks, free);
            }
            LanguageSpec::OrK(_, inner) | LanguageSpec::AndW(inner) => {
                inner.free_vars_rec(blocks, free)
            }
            LanguageSpec::Exists(block, inner)
            | LanguageSpec::Forall(block, inner)
            | LanguageSpec::Ef(block, inner) => {
                blocks.push(block);
                inner.free_vars_rec(blocks, free);
                blocks.pop();
            }
        }
    }

    /// All variables declared by quantifier blocks, outermost first.
    pub fn block_vars(&self) -> Vec<Var> {
        let mut vars = Vec::new();
        let mut spec = self;
        loop {
            match spec {
                LanguageSpec::Exists(block, inner)
                | LanguageSpec::Forall(block, inner)
                | LanguageSpec::Ef(block, inner) => {
                    vars.extend(block.vars().iter().cloned());
                    spec = inner;
                }
                LanguageSpec::Or2(l, r) | LanguageSpec::And2(l, r) => {
                    vars.extend(l.block_vars());
                    vars.extend(r.block_vars());
                    break;
                }
                LanguageSpec::OrK(_, inner) | LanguageSpec::AndW(inner) => {
                    spec = inner;
                }
                LanguageSpec::Atoms(_) => break,
            }
        }
        vars
    }

    /// True when the language has no free variables.
    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

fn check_sort(sorts_seen: &mut BTreeMap<String, Sort>, v: &Var) -> Result<(), SpecError> {
    match sorts_seen.get(&v.name) {
        Some(sort) if sort != &v.sort => Err(SpecError::ConflictingSorts {
            name: v.name.clone(),
            sort1: sort.name().to_string(),
            sort2: v.sort.name().to_string(),
        }),
        Some(_) => Ok(()),
        None => {
            sorts_seen.insert(v.name.clone(), v.sort.clone());
            Ok(())
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use fol::{RelationDecl, Term};

    /// Signature with one unary predicate `p` over sort `node`.
    pub fn p_sig() -> Arc<Signature> {
        Signature {
            sorts: vec![Sort::new("node")],
            constants: vec![],
            relations: vec![RelationDecl {
                name: "p".to_string(),
                args: vec![Sort::new("node")],
            }],
        }
        .into_arc()
    }

    /// The literal set { p(x), !p(x), p(y), !p(y) }.
    pub fn p_literals() -> Vec<Literal> {
        let node = Sort::new("node");
        let x = Term::var("x", node.clone());
        let y = Term::var("y", node);
        vec![
            Literal::relation("p", vec![x.clone()], true),
            Literal::relation("p", vec![x], false),
            Literal::relation("p", vec![y.clone()], true),
            Literal::relation("p", vec![y], false),
        ]
    }

    /// The running-example language: forall {x,y}. or-up-to-2 over the four
    /// `p` literals.
    pub fn ex1_spec() -> Arc<LanguageSpec> {
        let node = Sort::new("node");
        let block = VarBlock::new(vec![Var::new("x", node.clone()), Var::new("y", node)]).unwrap();
        LanguageSpec::Forall(
            block,
            LanguageSpec::OrK(2, LanguageSpec::Atoms(AtomsSpec::new(p_literals())).into_arc())
                .into_arc(),
        )
        .into_arc()
    }
}
