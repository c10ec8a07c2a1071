//! Property tests for the subsumption preorder, the total order and the
//! canonicalization function, over the battery of language shapes. Formulas
//! are drawn from full language enumerations, so every constructor's code
//! path is exercised.

use std::cmp::Ordering;
use std::sync::OnceLock;

use proptest::prelude::*;

use fol::QuantKind;
use lang::{bottom, canonicalize, compare, is_canonical, subsumes, Formula, LanguageSpec};
use testkit::{spec_battery, SpecCase};

fn battery() -> &'static Vec<SpecCase> {
    static BATTERY: OnceLock<Vec<SpecCase>> = OnceLock::new();
    BATTERY.get_or_init(spec_battery)
}

/// A case index plus three formula indices, mapped into the case's
/// enumeration.
fn triple() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<prop::sample::Index>())
        .prop_map(|(c, a, b, d)| {
            let cases = battery();
            let ci = c.index(cases.len());
            let n = cases[ci].all.len();
            (ci, a.index(n), b.index(n), d.index(n))
        })
}

fn mutually_subsume(spec: &LanguageSpec, a: &Formula, b: &Formula) -> bool {
    subsumes(spec, a, b) && subsumes(spec, b, a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn subsumption_is_reflexive((ci, i, _, _) in triple()) {
        let case = &battery()[ci];
        let f = &case.all[i];
        prop_assert!(subsumes(&case.spec, f, f));
    }

    #[test]
    fn subsumption_is_transitive((ci, i, j, k) in triple()) {
        let case = &battery()[ci];
        let (a, b, c) = (&case.all[i], &case.all[j], &case.all[k]);
        if subsumes(&case.spec, a, b) && subsumes(&case.spec, b, c) {
            prop_assert!(subsumes(&case.spec, a, c));
        }
    }

    #[test]
    fn bottom_is_least((ci, i, _, _) in triple()) {
        let case = &battery()[ci];
        prop_assert!(subsumes(&case.spec, &bottom(&case.spec), &case.all[i]));
    }

    #[test]
    fn canonicalization_is_representative_and_idempotent((ci, i, _, _) in triple()) {
        let case = &battery()[ci];
        let f = &case.all[i];
        let c = canonicalize(&case.spec, f);
        prop_assert!(mutually_subsume(&case.spec, f, &c));
        prop_assert_eq!(&canonicalize(&case.spec, &c), &c);
    }

    #[test]
    fn canonicalization_is_decisive((ci, i, j, _) in triple()) {
        let case = &battery()[ci];
        let (a, b) = (&case.all[i], &case.all[j]);
        let equivalent = mutually_subsume(&case.spec, a, b);
        let merged = canonicalize(&case.spec, a) == canonicalize(&case.spec, b);
        prop_assert_eq!(equivalent, merged);
    }

    #[test]
    fn total_order_is_total_and_antisymmetric_on_canonicals((ci, i, j, _) in triple()) {
        let case = &battery()[ci];
        let a = canonicalize(&case.spec, &case.all[i]);
        let b = canonicalize(&case.spec, &case.all[j]);
        let ab = compare(&case.spec, &a, &b);
        let ba = compare(&case.spec, &b, &a);
        prop_assert_eq!(ab, ba.reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
    }

    #[test]
    fn total_order_extends_subsumption((ci, i, j, _) in triple()) {
        let case = &battery()[ci];
        let (a, b) = (&case.all[i], &case.all[j]);
        if subsumes(&case.spec, a, b) {
            let ca = canonicalize(&case.spec, a);
            let cb = canonicalize(&case.spec, b);
            prop_assert_ne!(compare(&case.spec, &ca, &cb), Ordering::Greater);
        }
    }

    #[test]
    fn or_sequence_swap_is_subsumption_equivalent((ci, i, _, _) in triple()) {
        let case = &battery()[ci];
        if let Formula::OrSeq(fs) = &case.all[i] {
            if fs.len() >= 2 {
                let mut swapped = fs.clone();
                swapped.swap(0, fs.len() - 1);
                let g = Formula::OrSeq(swapped);
                prop_assert!(mutually_subsume(&case.spec, &case.all[i], &g));
            }
        }
    }

    #[test]
    fn quantified_formulas_are_permutation_equivalent((ci, i, _, _) in triple()) {
        let case = &battery()[ci];
        let f = &case.all[i];
        if let (
            LanguageSpec::Exists(block, _)
            | LanguageSpec::Forall(block, _)
            | LanguageSpec::Ef(block, _),
            Formula::Quant(q, body),
        ) = (case.spec.as_ref(), f)
        {
            for pi in fol::sort_permutations(block.vars()) {
                let permuted =
                    Formula::Quant(*q, Box::new(lang::apply_permutation(body, &pi)));
                prop_assert!(mutually_subsume(&case.spec, f, &permuted));
            }
        }
    }
}

#[test]
fn canonical_enumeration_is_exactly_the_canonical_subset() {
    for case in battery() {
        for f in &case.canonical {
            assert!(is_canonical(&case.spec, f));
        }
        let fixpoints = case
            .all
            .iter()
            .filter(|f| is_canonical(&case.spec, f))
            .count();
        assert_eq!(fixpoints, case.canonical.len(), "case {}", case.name);
    }
}

#[test]
fn ef_universal_before_existential_in_the_order() {
    for case in battery() {
        if !matches!(case.spec.as_ref(), LanguageSpec::Ef(..)) {
            continue;
        }
        for a in &case.canonical {
            for b in &case.canonical {
                if let (Formula::Quant(QuantKind::Forall, _), Formula::Quant(QuantKind::Exists, _)) =
                    (a, b)
                {
                    assert_eq!(compare(&case.spec, a, b), Ordering::Less);
                }
            }
        }
    }
}
