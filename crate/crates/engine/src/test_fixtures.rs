// Shared fixtures for the engine's unit tests: the running-example language
// (one unary predicate p over sort node, forall {x,y} over disjunctions of at
// most two literals) and the worked-example states.

use std::sync::Arc;

use fol::{RelationDecl, Signature, Sort, State, Structure};
use lang::{parse_formula, parse_language_file, Formula, LanguageSpec};

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

pub fn ex1_spec() -> Arc<LanguageSpec> {
    let text = "(sort node)\n(relation p (node))\n(forall ((x node) (y node)) (or 2 (atoms (literals :equality false))))";
    let parsed = parse_language_file(text).unwrap();
    let sig = parsed.signature().unwrap().clone();
    parsed.resolve(&sig).unwrap()
}

pub fn parse(spec: &LanguageSpec, text: &str) -> Formula {
    parse_formula(text, spec, &p_sig()).unwrap()
}

/// Universe {a,b} with p = {a,b}: the worked-example state.
pub fn full_p_state() -> State {
    p_state(2, &[0, 1])
}

/// A p-signature state with the given universe size and p table.
pub fn p_state(universe: usize, p: &[usize]) -> State {
    let mut s = Structure::new(p_sig(), [(Sort::new("node"), universe)].into());
    for &e in p {
        s.relations.get_mut("p").unwrap().insert(vec![e]);
    }
    State::new(Arc::new(s))
}
