#![no_main]

use libfuzzer_sys::fuzz_target;

use ietwfa::format::{parse_spec, Parsed};
use ietwfa::oracle::oracle_language;
use ietwfa::simulation::{enumerate_language, Mode};

// Machines parsed from arbitrary text drive the configuration-graph search
// against the independent string oracle at a small bound; the two must
// agree in every mode and neither may panic or diverge.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(Parsed::Machine(m)) = parse_spec(text) else {
        return;
    };
    if !m.validate().is_empty() {
        return;
    }
    let eps_rules = m.rules.iter().filter(|r| r.is_epsilon()).count();
    if m.states.len() > 5 || m.rules.len() > 8 || m.alphabet.len() > 3 || eps_rules > 3 {
        return;
    }
    for mode in [Mode::General, Mode::Alternating, Mode::Even, Mode::InitEven] {
        assert_eq!(
            enumerate_language(&m, mode, 3),
            oracle_language(&m, mode, 3),
            "mode {:?} diverged on:\n{}",
            mode,
            text
        );
    }
});
