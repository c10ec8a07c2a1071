//! Antichains of canonical formulas as set representations.

use std::sync::Arc;

use lang::{canonicalize, compare, minimize, subsumes, Formula, LanguageSpec};

/// A set of canonical formulas none of which subsumes another, kept sorted by
/// the total order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Antichain {
    spec: Arc<LanguageSpec>,
    formulas: Vec<Formula>,
}

impl Antichain {
    pub fn empty(spec: Arc<LanguageSpec>) -> Self {
        Antichain {
            spec,
            formulas: Vec::new(),
        }
    }

    /// Wraps formulas already known to be canonical, minimizing and sorting.
    pub fn from_canonical(spec: Arc<LanguageSpec>, formulas: Vec<Formula>) -> Self {
        let formulas = minimize(&spec, formulas);
        Antichain { spec, formulas }
    }

    pub fn spec(&self) -> &Arc<LanguageSpec> {
        &self.spec
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.formulas
            .binary_search_by(|g| compare(&self.spec, g, f))
            .is_ok()
    }

    /// Checks the antichain invariant; meant for tests.
    pub fn is_antichain(&self) -> bool {
        let fs = &self.formulas;
        fs.iter().enumerate().all(|(i, f)| {
            fs.iter()
                .enumerate()
                .all(|(j, g)| i == j || !subsumes(&self.spec, f, g))
        })
    }
}

impl IntoIterator for Antichain {
    type Item = Formula;
    type IntoIter = std::vec::IntoIter<Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.formulas.into_iter()
    }
}

/// The subsumption-minimal elements of a collection of canonical formulas.
pub fn min_antichain(spec: &Arc<LanguageSpec>, formulas: Vec<Formula>) -> Antichain {
    Antichain::from_canonical(Arc::clone(spec), formulas)
}

/// The representation of an arbitrary formula collection: canonicalize
/// everything, then keep the subsumption-minimal elements.
pub fn represent(
    spec: &Arc<LanguageSpec>,
    formulas: impl IntoIterator<Item = Formula>,
) -> Antichain {
    let canonical: Vec<Formula> = formulas
        .into_iter()
        .map(|f| canonicalize(spec, &f))
        .collect();
    Antichain::from_canonical(Arc::clone(spec), canonical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lang::{bottom, enumerate_formulas};

    #[allow(dead_code)]
    mod fixtures {
        include!("test_fixtures.rs");
    }
    use fixtures::ex1_spec;

    #[test]
    fn bottom_collapses_everything() {
        let spec = ex1_spec();
        let all = enumerate_formulas(&spec, 100).unwrap();
        let rep = represent(&spec, all);
        assert_eq!(rep.formulas(), &[bottom(&spec)]);
    }

    #[test]
    fn antichain_input_is_fixed_point() {
        let spec = ex1_spec();
        let all = enumerate_formulas(&spec, 100).unwrap();
        let rep = represent(&spec, all.clone());
        let again = min_antichain(&spec, rep.formulas().to_vec());
        assert_eq!(rep, again);
        assert!(rep.is_antichain());
    }

    #[test]
    fn equivalent_formulas_merge() {
        // forall {x,y}. or[p(x)] and forall {x,y}. or[p(y)] are
        // subsumption-equivalent; their representation is the canonical one
        let spec = ex1_spec();
        let all = enumerate_formulas(&spec, 100).unwrap();
        let px = fixtures::parse(&spec, "forall x:node, y:node. or[p(x)]");
        let py = fixtures::parse(&spec, "forall x:node, y:node. or[p(y)]");
        assert!(all.contains(&px) && all.contains(&py));
        let rep = represent(&spec, vec![px.clone(), py]);
        assert_eq!(rep.formulas(), &[px]);
    }
}
