//! Finite first-order structures, assignments and states.

use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::sig::{Signature, Sort, Var};
use crate::term::{Atom, Literal, Term};

/// Universe elements are dense indices `0..n` per sort.
pub type Element = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    UnboundVar(String),
    #[error("unknown constant {0}")]
    UnknownConstant(String),
    #[error("unknown relation {0}")]
    UnknownRelation(String),
    #[error("unknown sort {0}")]
    UnknownSort(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("sort {0} has an empty or missing universe")]
    EmptyUniverse(String),
    #[error("constant {0} is not interpreted")]
    MissingConstant(String),
    #[error("constant {name} maps to element {element} outside its universe")]
    ConstantOutOfRange { name: String, element: Element },
    #[error("relation {0} is not interpreted")]
    MissingRelation(String),
    #[error("relation {name} holds a tuple of wrong arity or out-of-range element")]
    BadTuple { name: String },
    #[error("interpretation mentions unknown symbol {0}")]
    UnknownSymbol(String),
}

/// A finite structure: per-sort universe sizes and an interpretation for
/// every constant and relation of the signature.
#[derive(Debug, Clone)]
pub struct Structure {
    pub signature: Arc<Signature>,
    /// Number of elements per sort; elements are `0..n`.
    pub universe: BTreeMap<Sort, usize>,
    pub constants: BTreeMap<String, Element>,
    pub relations: BTreeMap<String, BTreeSet<Vec<Element>>>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe
            && self.constants == other.constants
            && self.relations == other.relations
    }
}

impl Eq for Structure {}

impl Hash for Structure {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.universe.hash(state);
        self.constants.hash(state);
        self.relations.hash(state);
    }
}

impl Structure {
    /// An empty-interpretation structure: all relations empty, constants all
    /// mapped to element 0. Universe sizes must be positive.
    pub fn new(signature: Arc<Signature>, universe: BTreeMap<Sort, usize>) -> Self {
        let constants = signature
            .constants
            .iter()
            .map(|c| (c.name.clone(), 0))
            .collect();
        let relations = signature
            .relations
            .iter()
            .map(|r| (r.name.clone(), BTreeSet::new()))
            .collect();
        Structure {
            signature,
            universe,
            constants,
            relations,
        }
    }

    pub fn size(&self, sort: &Sort) -> usize {
        self.universe.get(sort).copied().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        for sort in &self.signature.sorts {
            if self.size(sort) == 0 {
                return Err(StructureError::EmptyUniverse(sort.name().to_string()));
            }
        }
        for name in self.constants.keys() {
            if self.signature.constant(name).is_none() {
                return Err(StructureError::UnknownSymbol(name.clone()));
            }
        }
        for c in &self.signature.constants {
            match self.constants.get(&c.name) {
                None => return Err(StructureError::MissingConstant(c.name.clone())),
                Some(&e) if e >= self.size(&c.sort) => {
                    return Err(StructureError::ConstantOutOfRange {
                        name: c.name.clone(),
                        element: e,
                    })
                }
                Some(_) => {}
            }
        }
        for name in self.relations.keys() {
            if self.signature.relation(name).is_none() {
                return Err(StructureError::UnknownSymbol(name.clone()));
            }
        }
        for r in &self.signature.relations {
            let table = self
                .relations
                .get(&r.name)
                .ok_or_else(|| StructureError::MissingRelation(r.name.clone()))?;
            for tuple in table {
                let ok = tuple.len() == r.args.len()
                    && tuple.iter().zip(&r.args).all(|(&e, s)| e < self.size(s));
                if !ok {
                    return Err(StructureError::BadTuple {
                        name: r.name.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A partial map from variable names to universe elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Assignment(pub BTreeMap<String, Element>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    pub fn get(&self, name: &str) -> Option<Element> {
        self.0.get(name).copied()
    }

    pub fn set(&mut self, name: impl Into<String>, e: Element) {
        self.0.insert(name.into(), e);
    }

    /// `self[other]`: agrees with `other` where defined, with `self`
    /// elsewhere.
    pub fn updated(&self, other: &Assignment) -> Assignment {
        let mut map = self.0.clone();
        for (k, v) in &other.0 {
            map.insert(k.clone(), *v);
        }
        Assignment(map)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(String, Element)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (String, Element)>>(iter: T) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// A structure together with an assignment to free variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    pub structure: Arc<Structure>,
    pub assignment: Assignment,
}

impl State {
    pub fn new(structure: Arc<Structure>) -> Self {
        State {
            structure,
            assignment: Assignment::new(),
        }
    }

    pub fn with_assignment(structure: Arc<Structure>, assignment: Assignment) -> Self {
        State {
            structure,
            assignment,
        }
    }

    /// The state with the assignment updated (possibly extended) by `nu`.
    pub fn updated(&self, nu: &Assignment) -> State {
        State {
            structure: Arc::clone(&self.structure),
            assignment: self.assignment.updated(nu),
        }
    }

    /// Evaluates a term to a universe element.
    pub fn eval_term(&self, t: &Term) -> Result<Element, EvalError> {
        match t {
            Term::Var(Var { name, .. }) => self
                .assignment
                .get(name)
                .ok_or_else(|| EvalError::UnboundVar(name.clone())),
            Term::Const { name, .. } => self
                .structure
                .constants
                .get(name)
                .copied()
                .ok_or_else(|| EvalError::UnknownConstant(name.clone())),
        }
    }

    /// Truth of a literal under standard first-order semantics.
    pub fn holds(&self, lit: &Literal) -> Result<bool, EvalError> {
        let truth = match &lit.atom {
            Atom::Relation { name, args } => {
                let tuple: Vec<Element> = args
                    .iter()
                    .map(|t| self.eval_term(t))
                    .collect::<Result<_, _>>()?;
                self.structure
                    .relations
                    .get(name)
                    .ok_or_else(|| EvalError::UnknownRelation(name.clone()))?
                    .contains(&tuple)
            }
            Atom::Equal(a, b) => self.eval_term(a)? == self.eval_term(b)?,
        };
        Ok(if lit.positive { truth } else { !truth })
    }
}

/// All assignments of the given variables into the structure's universes, in
/// lexicographic order (first variable slowest). The empty variable list
/// yields the single empty assignment.
pub fn assignments(vars: &[Var], structure: &Structure) -> Vec<Assignment> {
    let mut result = vec![Assignment::new()];
    for v in vars {
        let n = structure.size(&v.sort);
        let mut next = Vec::with_capacity(result.len() * n);
        for partial in &result {
            for e in 0..n {
                let mut a = partial.clone();
                a.set(v.name.clone(), e);
                next.push(a);
            }
        }
        result = next;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::RelationDecl;

    fn sig() -> Arc<Signature> {
        Signature {
            sorts: vec![Sort::new("node")],
            constants: vec![crate::sig::ConstDecl {
                name: "c".to_string(),
                sort: Sort::new("node"),
            }],
            relations: vec![RelationDecl {
                name: "p".to_string(),
                args: vec![Sort::new("node")],
            }],
        }
        .into_arc()
    }

    fn state() -> State {
        let mut s = Structure::new(sig(), [(Sort::new("node"), 2)].into());
        s.relations.get_mut("p").unwrap().insert(vec![0]);
        let mut a = Assignment::new();
        a.set("x", 0);
        a.set("y", 1);
        State::with_assignment(Arc::new(s), a)
    }

    #[test]
    fn eval_term_constant_and_var() {
        let s = state();
        let node = Sort::new("node");
        assert_eq!(s.eval_term(&Term::constant("c", node.clone())), Ok(0));
        assert_eq!(s.eval_term(&Term::var("x", node.clone())), Ok(0));
        assert_eq!(s.eval_term(&Term::var("y", node.clone())), Ok(1));
        assert_eq!(
            s.eval_term(&Term::var("z", node)),
            Err(EvalError::UnboundVar("z".to_string()))
        );
    }

    #[test]
    fn holds_relation_and_equality() {
        let s = state();
        let node = Sort::new("node");
        let x = Term::var("x", node.clone());
        let y = Term::var("y", node.clone());
        assert_eq!(s.holds(&Literal::relation("p", vec![x.clone()], true)), Ok(true));
        assert_eq!(s.holds(&Literal::relation("p", vec![y.clone()], true)), Ok(false));
        assert_eq!(s.holds(&Literal::relation("p", vec![y.clone()], false)), Ok(true));
        assert_eq!(s.holds(&Literal::equality(x, y, true)), Ok(false));
    }

    #[test]
    fn assignment_update_semantics() {
        let mut mu = Assignment::new();
        mu.set("x", 0);
        let mut nu = Assignment::new();
        nu.set("y", 1);
        let both = mu.updated(&nu);
        assert_eq!(both.get("x"), Some(0));
        assert_eq!(both.get("y"), Some(1));

        let mut nu2 = Assignment::new();
        nu2.set("x", 1);
        assert_eq!(mu.updated(&nu2).get("x"), Some(1));
        assert_eq!(Assignment::new().updated(&Assignment::new()), Assignment::new());
    }

    #[test]
    fn assignments_enumerate_lexicographically() {
        let s = state();
        let node = Sort::new("node");
        let vars = vec![Var::new("a", node.clone()), Var::new("b", node)];
        let all = assignments(&vars, &s.structure);
        assert_eq!(all.len(), 4);
        assert_eq!(all[0].get("a"), Some(0));
        assert_eq!(all[0].get("b"), Some(0));
        assert_eq!(all[1].get("b"), Some(1));
        assert_eq!(all[3].get("a"), Some(1));
    }
}
