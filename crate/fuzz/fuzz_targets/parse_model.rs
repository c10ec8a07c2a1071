#![no_main]

use libfuzzer_sys::fuzz_target;

// Model files are untrusted input; the parser must never panic, and an
// accepted model must render and reparse to the same value.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(model) = tsys::parse_model(text) {
        let rendered = tsys::render_model(&model);
        let reparsed = tsys::parse_model(&rendered).expect("rendered model reparses");
        assert_eq!(model, reparsed, "model round trip");
    }
});
