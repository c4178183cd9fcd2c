//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines and timings.

use std::collections::BTreeSet;
use std::time::Instant;

use ietwfa::automata::{words_up_to, Ietwgfa, Nfa, Symbol, Word};
use ietwfa::convert::{
    elg_to_gfa_init_even, even_to_efree_sfa, gfa_to_lg, gfa_to_sfa, init_even_to_elg,
    init_even_to_sfa, lg_to_gfa, remove_epsilon,
};
use ietwfa::format::{parse_spec, Parsed};
use ietwfa::grammar::lg_enumerate;
use ietwfa::oracle::{
    equiv_up_to, oracle_language, random_efree_sfa, random_elg, random_gfa, random_lg, random_nfa,
    GenConfig,
};
use ietwfa::restrict::{restrict_finite_prefix, restrict_middle, restrict_sides, restrict_whole};
use ietwfa::simulation::{accepts, accepts_with_split, enumerate_language, Mode};
use ietwfa_cli::run_command;

const MODES: [Mode; 4] = [Mode::General, Mode::Alternating, Mode::Even, Mode::InitEven];

fn cfg(seed: u64) -> GenConfig {
    GenConfig {
        max_states: 4,
        max_rules: 6,
        max_segment_len: 2,
        alphabet_size: 3,
        seed,
    }
}

/// Smaller instances for the restriction products, over a two-letter
/// alphabet so the decomposition oracles stay exhaustive.
fn restrict_cfg(seed: u64) -> GenConfig {
    GenConfig {
        max_states: 3,
        max_rules: 6,
        max_segment_len: 1,
        alphabet_size: 2,
        seed,
    }
}

fn report(criterion: &str, started: Instant, failures: &[String]) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "criterion {}: {} ({:.1}s)",
        criterion,
        verdict,
        started.elapsed().as_secs_f64()
    );
    assert!(
        failures.is_empty(),
        "criterion {}: {} failure(s):\n{}",
        criterion,
        failures.len(),
        failures.join("\n")
    );
}

fn word(s: &str) -> Word {
    s.chars().map(|c| Symbol::new(c.to_string())).collect()
}

fn machine(text: &str) -> Ietwgfa {
    match parse_spec(text).unwrap() {
        Parsed::Machine(m) => m,
        _ => panic!("expected machine"),
    }
}

fn m_ab() -> Ietwgfa {
    machine(
        "type: ietwgfa\nstates: s q\nalphabet: a b\nstart: s\nfinal: s\n\
         rule: a s -> q\nrule: q b -> s\n",
    )
}

#[test]
fn criterion_1_differential_semantics() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..100 {
        let m = random_gfa(&cfg(seed));
        for mode in MODES {
            let fast = enumerate_language(&m, mode, 5);
            let slow = oracle_language(&m, mode, 5);
            if fast != slow {
                let r = equiv_up_to(&fast, &slow, 5);
                failures.push(format!(
                    "seed {} mode {:?}: counterexample {:?}",
                    seed, mode, r.counterexample
                ));
            }
        }
    }
    report("1 (differential semantics)", started, &failures);
}

#[test]
fn criterion_2_linear_round_trips() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..50 {
        let g = random_lg(&cfg(seed));
        let m = lg_to_gfa(&g);
        let r = equiv_up_to(
            &lg_enumerate(&g, 6),
            &enumerate_language(&m, Mode::General, 6),
            6,
        );
        if !r.equal {
            failures.push(format!("grammar seed {}: {:?}", seed, r.counterexample));
        }
    }
    for seed in 0..50 {
        let m = random_gfa(&cfg(seed));
        let g = gfa_to_lg(&m);
        let r = equiv_up_to(
            &enumerate_language(&m, Mode::General, 6),
            &lg_enumerate(&g, 6),
            6,
        );
        if !r.equal {
            failures.push(format!("machine seed {}: {:?}", seed, r.counterexample));
        }
    }
    report("2 (linear-language round trips)", started, &failures);
}

#[test]
fn criterion_3_normalization_chain() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..50 {
        let m = random_gfa(&cfg(seed));
        let out = remove_epsilon(&gfa_to_sfa(&m));
        let c = out.classify();
        if !c.simple || !c.epsilon_free {
            failures.push(format!("seed {}: classification {:?}", seed, c));
            continue;
        }
        let r = equiv_up_to(
            &enumerate_language(&m, Mode::General, 6),
            &enumerate_language(&out, Mode::General, 6),
            6,
        );
        if !r.equal {
            failures.push(format!("seed {}: {:?}", seed, r.counterexample));
        }
    }
    report("3 (simple + ε-free normalization)", started, &failures);
}

#[test]
fn criterion_4_even_construction() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..30 {
        let m = random_gfa(&cfg(seed));
        let out = even_to_efree_sfa(&m);
        let c = out.classify();
        if !c.simple || !c.epsilon_free {
            failures.push(format!("seed {}: classification {:?}", seed, c));
            continue;
        }
        let out_general = enumerate_language(&out, Mode::General, 6);
        let out_even = enumerate_language(&out, Mode::Even, 6);
        let m_even = enumerate_language(&m, Mode::Even, 6);
        if out_general != out_even {
            let r = equiv_up_to(&out_general, &out_even, 6);
            failures.push(format!(
                "seed {}: L(out) != L(out)_even at {:?}",
                seed, r.counterexample
            ));
        }
        if out_even != m_even {
            let r = equiv_up_to(&out_even, &m_even, 6);
            failures.push(format!(
                "seed {}: L(out)_even != L(m)_even at {:?}",
                seed, r.counterexample
            ));
        }
    }
    report("4 (even construction)", started, &failures);
}

#[test]
fn criterion_5_even_lengths_only() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..30 {
        let m = random_gfa(&cfg(seed));
        let out = even_to_efree_sfa(&m);
        for w in enumerate_language(&out, Mode::General, 7) {
            if w.len() % 2 != 0 {
                failures.push(format!("seed {}: odd-length word {:?}", seed, w));
            }
        }
    }
    report("5 (even language has even lengths)", started, &failures);
}

#[test]
fn criterion_6_init_even_pipeline() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..30 {
        let m = random_gfa(&cfg(seed));
        let g = init_even_to_elg(&m);
        if !g.is_even_linear().even {
            failures.push(format!("seed {}: grammar is not even linear", seed));
        }
        let r = equiv_up_to(
            &lg_enumerate(&g, 6),
            &enumerate_language(&m, Mode::InitEven, 6),
            6,
        );
        if !r.equal {
            failures.push(format!("elg seed {}: {:?}", seed, r.counterexample));
        }
        let out = init_even_to_sfa(&m);
        for rule in &out.rules {
            if rule.target() == &out.start {
                failures.push(format!("seed {}: rule targets start state", seed));
            }
            if rule.is_epsilon() && rule.source() != &out.start {
                failures.push(format!("seed {}: ε-rule away from start state", seed));
            }
        }
    }
    for seed in 0..30 {
        let g = random_elg(&cfg(seed));
        let m = elg_to_gfa_init_even(&g).expect("generated grammar is even");
        let r = equiv_up_to(
            &enumerate_language(&m, Mode::InitEven, 6),
            &lg_enumerate(&g, 6),
            6,
        );
        if !r.equal {
            failures.push(format!("even grammar seed {}: {:?}", seed, r.counterexample));
        }
    }
    report("6 (initialized-even pipeline)", started, &failures);
}

#[test]
fn criterion_7_witness_languages() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let anbn: BTreeSet<Word> = (0..=3)
        .map(|n| {
            let mut w = vec![Symbol::new("a"); n];
            w.extend(vec![Symbol::new("b"); n]);
            w
        })
        .collect();
    for mode in [Mode::General, Mode::Alternating, Mode::Even] {
        let lang = enumerate_language(&m_ab(), mode, 6);
        if lang != anbn {
            failures.push(format!("m_ab {:?}: {:?}", mode, lang));
        }
    }

    let m_abc = machine(
        "type: ietwgfa\nstates: s q v w\nalphabet: a b c\nstart: s\nfinal: s v\n\
         rule: a s -> q\nrule: q b -> s\nrule: s -> v\nrule: v c -> w\nrule: w -> v\n",
    );
    let mut anbncm = BTreeSet::new();
    for n in 0..=3usize {
        for m in 0..=6usize {
            if 2 * n + m <= 6 {
                let mut w = vec![Symbol::new("a"); n];
                w.extend(vec![Symbol::new("b"); n]);
                w.extend(vec![Symbol::new("c"); m]);
                anbncm.insert(w);
            }
        }
    }
    let alt = enumerate_language(&m_abc, Mode::Alternating, 6);
    if alt != anbncm {
        let r = equiv_up_to(&alt, &anbncm, 6);
        failures.push(format!("m_abc alternating: {:?}", r.counterexample));
    }

    let m_a = machine(
        "type: ietwgfa\nstates: s f\nalphabet: a\nstart: s\nfinal: f\nrule: s a -> f\n",
    );
    if !accepts(&m_a, &word("a"), Mode::InitEven).unwrap() {
        failures.push("m_a does not init-even-accept a".into());
    }
    if enumerate_language(&m_a, Mode::InitEven, 3) != [word("a")].into_iter().collect() {
        failures.push("m_a init-even language is not {a}".into());
    }

    let m_aa = machine(
        "type: ietwgfa\nstates: s q f\nalphabet: a\nstart: s\nfinal: f\n\
         rule: a s -> q\nrule: q a -> f\n",
    );
    if !accepts(&m_aa, &word("aa"), Mode::Even).unwrap() {
        failures.push("m_aa does not even-accept aa".into());
    }
    if enumerate_language(&m_aa, Mode::Even, 6) != [word("aa")].into_iter().collect() {
        failures.push("m_aa even language is not {aa}".into());
    }

    report("7 (witness languages)", started, &failures);
}

/// The finite prefix sets used by criterion 8: subsets of the words of
/// length at most 2 selected by the seed's bits.
fn finite_set(seed: u64, alphabet: &[Symbol]) -> Vec<Word> {
    words_up_to(alphabet, 2)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| (seed >> (i % 7)) & 1 == 1)
        .map(|(_, w)| w)
        .collect()
}

#[test]
fn criterion_8_restriction_constructions() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..30 {
        let m = random_efree_sfa(&restrict_cfg(seed));
        let a = random_nfa(&restrict_cfg(1000 + seed));
        let b = random_nfa(&restrict_cfg(2000 + seed));
        let c = random_nfa(&restrict_cfg(3000 + seed));
        let all_words = words_up_to(&m.alphabet, 6);

        let out = restrict_sides(&m, &a, &b).expect("preconditions hold");
        let got = enumerate_language(&out, Mode::General, 6);
        let mut expect = BTreeSet::new();
        for w in &all_words {
            for split in 0..=w.len() {
                if a.accepts(&w[..split]).unwrap()
                    && b.accepts(&w[split..]).unwrap()
                    && accepts_with_split(&m, w, split, Mode::General).unwrap()
                {
                    expect.insert(w.clone());
                    break;
                }
            }
        }
        if got != expect {
            let r = equiv_up_to(&got, &expect, 6);
            failures.push(format!("sides seed {}: {:?}", seed, r.counterexample));
        }

        let out = restrict_whole(&m, &a).expect("preconditions hold");
        let got = enumerate_language(&out, Mode::General, 6);
        let expect: BTreeSet<Word> = all_words
            .iter()
            .filter(|w| a.accepts(w).unwrap() && accepts(&m, w, Mode::General).unwrap())
            .cloned()
            .collect();
        if got != expect {
            let r = equiv_up_to(&got, &expect, 6);
            failures.push(format!("whole seed {}: {:?}", seed, r.counterexample));
        }

        let prefix_set = finite_set(seed, &m.alphabet);
        let out = restrict_finite_prefix(&m, &prefix_set, &b).expect("preconditions hold");
        if !out.validate().is_empty() {
            failures.push(format!("finite-prefix seed {}: invalid NFA output", seed));
        }
        let got = out.enumerate(6);
        let mut expect = BTreeSet::new();
        for w in &all_words {
            for u in &prefix_set {
                if w.len() >= u.len()
                    && &w[..u.len()] == u.as_slice()
                    && b.accepts(&w[u.len()..]).unwrap()
                    && accepts_with_split(&m, w, u.len(), Mode::General).unwrap()
                {
                    expect.insert(w.clone());
                    break;
                }
            }
        }
        if got != expect {
            let r = equiv_up_to(&got, &expect, 6);
            failures.push(format!("finite-prefix seed {}: {:?}", seed, r.counterexample));
        }

        let out = restrict_middle(&m, &a, &b, &c).expect("preconditions hold");
        if !out.validate().is_empty() {
            failures.push(format!("middle seed {}: invalid NFA output", seed));
        }
        let got = out.enumerate(6);
        // the outer parts u and w come from unbounded languages, so the
        // decomposition search deepens its witness bound when the base
        // bound of 6 finds none
        let has_witness = |v: &Word, bound: usize| -> bool {
            if !b.accepts(v).unwrap() {
                return false;
            }
            for u in a.enumerate(bound) {
                for tail in c.enumerate(bound) {
                    let mut whole = u.clone();
                    whole.extend(v.iter().cloned());
                    whole.extend(tail.iter().cloned());
                    if accepts_with_split(&m, &whole, u.len(), Mode::General).unwrap() {
                        return true;
                    }
                }
            }
            false
        };
        for v in &all_words {
            let justified = has_witness(v, 6);
            if justified && !got.contains(v) {
                failures.push(format!(
                    "middle seed {}: construction misses {:?}",
                    seed, v
                ));
            }
            if !justified
                && got.contains(v)
                && !(7..=12).step_by(2).any(|bound| has_witness(v, bound))
            {
                failures.push(format!(
                    "middle seed {}: no decomposition justifies {:?}",
                    seed, v
                ));
            }
        }
    }
    report("8 (restriction constructions)", started, &failures);
}

#[test]
fn criterion_9_cli_contract() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let dir = std::env::temp_dir().join("ietwfa-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let m_ab_path = dir.join("m_ab.txt");
    let g_ab_path = dir.join("g_ab.txt");
    std::fs::write(
        &m_ab_path,
        "type: ietwgfa\nstates: s q\nalphabet: a b\nstart: s\nfinal: s\n\
         rule: a s -> q\nrule: q b -> s\n",
    )
    .unwrap();
    std::fs::write(
        &g_ab_path,
        "type: lg\nnonterminals: S\nterminals: a b\nstart: S\n\
         rule: S -> a S b\nrule: S -> _\n",
    )
    .unwrap();
    let run = |args: &[&str]| {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        run_command(&args)
    };

    let out = run(&["accept", m_ab_path.to_str().unwrap(), "aabb"]);
    if out.code != 0 {
        failures.push(format!("accept exit code {} (stderr: {})", out.code, out.stderr));
    }

    let out = run(&[
        "equiv",
        m_ab_path.to_str().unwrap(),
        g_ab_path.to_str().unwrap(),
        "--max-len",
        "6",
    ]);
    if out.code != 0 || out.stdout != "equal up to 6\n" {
        failures.push(format!("equiv: code {} stdout {:?}", out.code, out.stdout));
    }

    let out = run(&[
        "enumerate",
        m_ab_path.to_str().unwrap(),
        "--max-len",
        "4",
        "--mode",
        "even",
        "--json",
    ]);
    if out.code != 0 || out.stdout != "{\"words\":[\"\",\"ab\",\"aabb\"]}\n" {
        failures.push(format!("enumerate: code {} stdout {:?}", out.code, out.stdout));
    }

    // parse/serialize round trip over every construction output the other
    // criteria exercise
    let mut docs: Vec<Parsed> = Vec::new();
    for seed in 0..50 {
        let m = random_gfa(&cfg(seed));
        let g = random_lg(&cfg(seed));
        docs.push(Parsed::Grammar(gfa_to_lg(&m)));
        docs.push(Parsed::Machine(lg_to_gfa(&g)));
        docs.push(Parsed::Machine(remove_epsilon(&gfa_to_sfa(&m))));
    }
    for seed in 0..30 {
        let m = random_gfa(&cfg(seed));
        docs.push(Parsed::Machine(even_to_efree_sfa(&m)));
        docs.push(Parsed::Machine(init_even_to_sfa(&m)));
        docs.push(Parsed::Grammar(init_even_to_elg(&m)));
        let g = random_elg(&cfg(seed));
        docs.push(Parsed::Machine(elg_to_gfa_init_even(&g).unwrap()));
        let m = random_efree_sfa(&restrict_cfg(seed));
        let a = random_nfa(&restrict_cfg(1000 + seed));
        let b = random_nfa(&restrict_cfg(2000 + seed));
        let c = random_nfa(&restrict_cfg(3000 + seed));
        docs.push(Parsed::Machine(restrict_sides(&m, &a, &b).unwrap()));
        docs.push(Parsed::Machine(restrict_whole(&m, &a).unwrap()));
        docs.push(Parsed::Nfa(
            restrict_finite_prefix(&m, &finite_set(seed, &m.alphabet), &b).unwrap(),
        ));
        docs.push(Parsed::Nfa(restrict_middle(&m, &a, &b, &c).unwrap()));
    }
    for (i, doc) in docs.iter().enumerate() {
        let text = doc.serialize();
        match parse_spec(&text) {
            Ok(back) if &back == doc => {}
            Ok(_) => failures.push(format!("doc {}: round trip changed the value", i)),
            Err(e) => failures.push(format!("doc {}: serialized form fails to parse: {}", i, e)),
        }
    }

    report("9 (CLI contract and round trips)", started, &failures);
}
