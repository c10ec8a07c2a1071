#![no_main]

use std::sync::{Arc, OnceLock};

use libfuzzer_sys::fuzz_target;

use fol::Signature;
use lang::LanguageSpec;

fn context() -> &'static (Arc<Signature>, Arc<LanguageSpec>) {
    static CTX: OnceLock<(Arc<Signature>, Arc<LanguageSpec>)> = OnceLock::new();
    CTX.get_or_init(|| {
        let text = "(sort node)\n(relation p (node))\n(relation q (node node))\n\
                    (forall ((x node) (y node)) (or2 (or 2 (atoms (literals :equality true))) \
                     (or 1 (and (atoms (literals :equality true))))))";
        let parsed = lang::parse_language_file(text).expect("fixed language parses");
        let sig = Arc::new(parsed.signature().unwrap().clone());
        let spec = parsed.resolve(&sig).expect("fixed language resolves");
        (sig, spec)
    })
}

// Rendered-formula parsing must never panic, and an accepted formula must be
// shape-valid and survive a render/parse round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (sig, spec) = context();
    if let Ok(formula) = lang::parse_formula(text, spec, sig) {
        lang::shape_check(spec, &formula).expect("accepted formulas are shape-valid");
        let rendered = lang::render(spec, &formula);
        let reparsed = lang::parse_formula(&rendered, spec, sig).expect("rendered formula reparses");
        assert_eq!(formula, reparsed, "formula round trip");
    }
});
