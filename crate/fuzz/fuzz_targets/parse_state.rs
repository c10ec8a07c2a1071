#![no_main]

use std::sync::{Arc, OnceLock};

use libfuzzer_sys::fuzz_target;

use fol::{RelationDecl, Signature, Sort};

fn sig() -> &'static Arc<Signature> {
    static SIG: OnceLock<Arc<Signature>> = OnceLock::new();
    SIG.get_or_init(|| {
        Signature {
            sorts: vec![Sort::new("node"), Sort::new("value")],
            constants: vec![fol::ConstDecl {
                name: "c".to_string(),
                sort: Sort::new("node"),
            }],
            relations: vec![
                RelationDecl {
                    name: "p".to_string(),
                    args: vec![Sort::new("node")],
                },
                RelationDecl {
                    name: "r".to_string(),
                    args: vec![Sort::new("node"), Sort::new("value")],
                },
            ],
        }
        .into_arc()
    })
}

// State files are untrusted JSON; parsing must never panic, accepted states
// must validate, and rendering must round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(state) = fol::parse_state(text, sig()) {
        state.structure.validate().expect("accepted states validate");
        let rendered = fol::render_state(&state);
        let reparsed = fol::parse_state(&rendered, sig()).expect("rendered state reparses");
        assert_eq!(state, reparsed, "state round trip");
    }
});
