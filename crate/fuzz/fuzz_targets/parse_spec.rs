#![no_main]

use libfuzzer_sys::fuzz_target;

// Parsing must never panic, and serialization must be a fixpoint: whatever
// parses once reparses from its canonical form to an equal value.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = ietwfa::format::parse_spec(text) {
        let canonical = doc.serialize();
        let again = ietwfa::format::parse_spec(&canonical)
            .expect("canonical form must parse");
        assert_eq!(again, doc);
        assert_eq!(again.serialize(), canonical);
    }
});
