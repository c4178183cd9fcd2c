//! Slow, wide differential runs; excluded from the default suite.
//! Run with `cargo test --test deep -- --ignored`.

use ietwfa::convert::{even_to_efree_sfa, init_even_to_sfa, lift_even_to_init_even};
use ietwfa::oracle::{equiv_up_to, oracle_language, random_gfa, GenConfig};
use ietwfa::simulation::{enumerate_language, Mode};

const MODES: [Mode; 4] = [Mode::General, Mode::Alternating, Mode::Even, Mode::InitEven];

#[test]
#[ignore]
fn big_differential() {
    for seed in 0..1000 {
        let m = random_gfa(&GenConfig {
            max_states: 4,
            max_rules: 6,
            max_segment_len: 2,
            alphabet_size: 3,
            seed,
        });
        for mode in MODES {
            assert_eq!(
                enumerate_language(&m, mode, 4),
                oracle_language(&m, mode, 4),
                "seed {} mode {:?}",
                seed,
                mode
            );
        }
    }
    // longer reads, tighter alphabet: stresses chain generation and pairing
    for seed in 0..300 {
        let m = random_gfa(&GenConfig {
            max_states: 3,
            max_rules: 5,
            max_segment_len: 3,
            alphabet_size: 2,
            seed,
        });
        for mode in MODES {
            assert_eq!(
                enumerate_language(&m, mode, 5),
                oracle_language(&m, mode, 5),
                "long-read seed {} mode {:?}",
                seed,
                mode
            );
        }
    }
}

#[test]
#[ignore]
fn even_and_init_even_constructions_deep() {
    for seed in 0..200 {
        let m = random_gfa(&GenConfig {
            max_states: 3,
            max_rules: 5,
            max_segment_len: 3,
            alphabet_size: 2,
            seed,
        });
        let out = even_to_efree_sfa(&m);
        let c = out.classify();
        assert!(c.simple && c.epsilon_free, "seed {}", seed);
        let gen_lang = enumerate_language(&out, Mode::General, 6);
        let even_out = enumerate_language(&out, Mode::Even, 6);
        let even_m = enumerate_language(&m, Mode::Even, 6);
        assert_eq!(gen_lang, even_out, "seed {} L(out) != L(out)_even", seed);
        assert_eq!(even_out, even_m, "seed {} L(out)_even != L(m)_even", seed);

        let lifted = lift_even_to_init_even(&m);
        let r = equiv_up_to(
            &enumerate_language(&lifted, Mode::InitEven, 5),
            &enumerate_language(&m, Mode::Even, 5),
            5,
        );
        assert!(r.equal, "lift seed {}: {:?}", seed, r.counterexample);

        let out = init_even_to_sfa(&m);
        assert!(out.classify().simple, "seed {}", seed);
        for rule in &out.rules {
            assert_ne!(rule.target(), &out.start);
            if rule.is_epsilon() {
                assert_eq!(rule.source(), &out.start);
            }
        }
        let gen_lang = enumerate_language(&out, Mode::General, 6);
        let ie_out = enumerate_language(&out, Mode::InitEven, 6);
        let ie_m = enumerate_language(&m, Mode::InitEven, 6);
        assert_eq!(gen_lang, ie_out, "seed {} L(out) != L(out)_ie", seed);
        assert_eq!(ie_out, ie_m, "seed {} L(out)_ie != L(m)_ie", seed);
    }
}
