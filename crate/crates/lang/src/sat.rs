//! Satisfaction of bounded-language formulas by states.

use fol::structure::assignments;
use fol::{EvalError, QuantKind, State};

use crate::formula::Formula;
use crate::spec::LanguageSpec;

/// Standard first-order truth. The empty disjunction is false; quantifiers
/// range over all assignments of their block into the state's universes.
/// Panics when the formula shapes do not match the spec.
pub fn satisfies(state: &State, spec: &LanguageSpec, f: &Formula) -> Result<bool, EvalError> {
    match (spec, f) {
        (LanguageSpec::Atoms(_), Formula::Bottom) => Ok(false),
        (LanguageSpec::Atoms(_), Formula::Lit(lit)) => state.holds(lit),
        (LanguageSpec::Or2(l, r), Formula::Or(a, b)) => {
            Ok(satisfies(state, l, a)? || satisfies(state, r, b)?)
        }
        (LanguageSpec::And2(l, r), Formula::And(a, b)) => {
            Ok(satisfies(state, l, a)? && satisfies(state, r, b)?)
        }
        (LanguageSpec::OrK(_, inner), Formula::OrSeq(fs)) => {
            for f in fs {
                if satisfies(state, inner, f)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        (LanguageSpec::AndW(inner), Formula::AndSeq(fs)) => {
            for f in fs {
                if !satisfies(state, inner, f)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (
            LanguageSpec::Exists(block, inner)
            | LanguageSpec::Forall(block, inner)
            | LanguageSpec::Ef(block, inner),
            Formula::Quant(kind, body),
        ) => {
            for nu in assignments(block.vars(), &state.structure) {
                let truth = satisfies(&state.updated(&nu), inner, body)?;
                match kind {
                    QuantKind::Forall if !truth => return Ok(false),
                    QuantKind::Exists if truth => return Ok(true),
                    _ => {}
                }
            }
            Ok(matches!(kind, QuantKind::Forall))
        }
        _ => panic!("formula shape does not match language spec"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::bottom;
    use crate::spec::fixtures::{ex1_spec, p_literals, p_sig};
    use crate::spec::{AtomsSpec, VarBlock};
    use fol::{Sort, Structure, Var};
    use std::sync::Arc;

    /// The worked-example state: universe {a,b}, p interpreted as {a,b}.
    pub(crate) fn full_p_state() -> State {
        let mut s = Structure::new(p_sig(), [(Sort::new("node"), 2)].into());
        let table = s.relations.get_mut("p").unwrap();
        table.insert(vec![0]);
        table.insert(vec![1]);
        State::new(Arc::new(s))
    }

    fn empty_p_state(universe: usize) -> State {
        let s = Structure::new(p_sig(), [(Sort::new("node"), universe)].into());
        State::new(Arc::new(s))
    }

    #[test]
    fn worked_example_formula_is_satisfied() {
        // forall {x,y}. or[p(x)] holds when p is total
        let spec = ex1_spec();
        let f = Formula::Quant(
            fol::QuantKind::Forall,
            Box::new(Formula::OrSeq(vec![Formula::Lit(p_literals()[0].clone())])),
        );
        assert_eq!(satisfies(&full_p_state(), &spec, &f), Ok(true));
    }

    #[test]
    fn empty_disjunction_is_false() {
        let spec = ex1_spec();
        assert_eq!(satisfies(&full_p_state(), &spec, &bottom(&spec)), Ok(false));
    }

    #[test]
    fn exists_fails_on_empty_relation() {
        let node = Sort::new("node");
        let block = VarBlock::new(vec![Var::new("x", node.clone())]).unwrap();
        let lit = fol::Literal::relation("p", vec![fol::Term::var("x", node)], true);
        let spec = LanguageSpec::Exists(
            block,
            LanguageSpec::OrK(
                1,
                LanguageSpec::Atoms(AtomsSpec::new(vec![lit.clone()])).into_arc(),
            )
            .into_arc(),
        );
        let f = Formula::Quant(
            fol::QuantKind::Exists,
            Box::new(Formula::OrSeq(vec![Formula::Lit(lit)])),
        );
        assert_eq!(satisfies(&empty_p_state(1), &spec, &f), Ok(false));
    }
}
