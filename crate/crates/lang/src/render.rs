//! The normative textual form of formulas.
//!
//! `false` renders bottom and the empty disjunction; binary connectives are
//! parenthesized; homogeneous connectives use `or[a; b]` / `and[a; b]`;
//! quantifiers list their block as `forall x:node, y:node. body`. Literals
//! render as `p(x)`, `!p(x)`, `x = y`, `x != y`.

use crate::formula::Formula;
use crate::spec::LanguageSpec;
use fol::QuantKind;

pub fn render(spec: &LanguageSpec, f: &Formula) -> String {
    match (spec, f) {
        (LanguageSpec::Atoms(_), Formula::Bottom) => "false".to_string(),
        (LanguageSpec::Atoms(_), Formula::Lit(lit)) => lit.to_string(),
        (LanguageSpec::Or2(l, r), Formula::Or(a, b)) => {
            format!("({} | {})", render(l, a), render(r, b))
        }
        (LanguageSpec::And2(l, r), Formula::And(a, b)) => {
            format!("({} & {})", render(l, a), render(r, b))
        }
        (LanguageSpec::OrK(_, inner), Formula::OrSeq(fs)) => {
            if fs.is_empty() {
                "false".to_string()
            } else {
                let parts: Vec<String> = fs.iter().map(|f| render(inner, f)).collect();
                format!("or[{}]", parts.join("; "))
            }
        }
        (LanguageSpec::AndW(inner), Formula::AndSeq(fs)) => {
            let parts: Vec<String> = fs.iter().map(|f| render(inner, f)).collect();
            format!("and[{}]", parts.join("; "))
        }
        (
            LanguageSpec::Exists(block, inner)
            | LanguageSpec::Forall(block, inner)
            | LanguageSpec::Ef(block, inner),
            Formula::Quant(kind, body),
        ) => {
            let keyword = match kind {
                QuantKind::Forall => "forall",
                QuantKind::Exists => "exists",
            };
            let vars: Vec<String> = block.vars().iter().map(|v| v.to_string()).collect();
            format!("{} {}. {}", keyword, vars.join(", "), render(inner, body))
        }
        _ => panic!("formula shape does not match language spec"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::bottom;
    use crate::spec::fixtures::{ex1_spec, p_literals};

    #[test]
    fn worked_example_rendering() {
        let spec = ex1_spec();
        let f = Formula::Quant(
            QuantKind::Forall,
            Box::new(Formula::OrSeq(vec![Formula::Lit(p_literals()[0].clone())])),
        );
        assert_eq!(render(&spec, &f), "forall x:node, y:node. or[p(x)]");
        assert_eq!(render(&spec, &bottom(&spec)), "forall x:node, y:node. false");
    }

    #[test]
    fn sequence_and_literal_forms() {
        let spec = ex1_spec();
        let f = Formula::Quant(
            QuantKind::Forall,
            Box::new(Formula::OrSeq(vec![
                Formula::Lit(p_literals()[0].clone()),
                Formula::Lit(p_literals()[3].clone()),
            ])),
        );
        assert_eq!(render(&spec, &f), "forall x:node, y:node. or[p(x); !p(y)]");
    }
}
