#![no_main]

use libfuzzer_sys::fuzz_target;

// Parsing a language file must never panic, and resolving it against its own
// declared signature must only fail through the error paths.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(parsed) = lang::parse_language_file(text) else {
        return;
    };
    if let Some(sig) = parsed.signature() {
        let sig = sig.clone();
        let _ = parsed.resolve(&sig);
    }
});
