//! End-to-end command tests: exit codes, text output, and the restriction
//! and conversion surfaces.

use ietwfa_cli::run_command;

struct Files {
    dir: std::path::PathBuf,
}

impl Files {
    fn new(tag: &str) -> Files {
        let dir = std::env::temp_dir().join(format!("ietwfa-cli-{}", tag));
        std::fs::create_dir_all(&dir).unwrap();
        Files { dir }
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.dir.join(name);
        std::fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }
}

fn run(args: &[&str]) -> ietwfa_cli::Outcome {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    run_command(&args)
}

const M_AB: &str = "type: ietwgfa\nstates: s q\nalphabet: a b\nstart: s\nfinal: s\n\
                    rule: a s -> q\nrule: q b -> s\n";

#[test]
fn accept_and_reject_exit_codes() {
    let files = Files::new("accept");
    let m = files.write("m.txt", M_AB);
    assert_eq!(run(&["accept", &m, "aabb"]).code, 0);
    let out = run(&["accept", &m, "aab"]);
    assert_eq!(out.code, 1);
    assert_eq!(out.stdout, "rejected\n");
    // empty word via the `_` token
    assert_eq!(run(&["accept", &m, "_"]).code, 0);
    // mode flag
    assert_eq!(run(&["accept", &m, "aabb", "--mode", "even"]).code, 0);
    assert_eq!(run(&["accept", &m, "aabb", "--mode", "init-even"]).code, 1);
    // token words
    assert_eq!(run(&["accept", &m, "a a b b", "--tokens"]).code, 0);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let files = Files::new("errors");
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["accept"]).code, 2);
    assert_eq!(run(&["accept", "missing-file.txt", "ab"]).code, 2);
    let bad = files.write("bad.txt", "type: ietwgfa\nstates: s\n");
    let out = run(&["accept", &bad, "ab"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line"), "stderr: {}", out.stderr);
    // foreign symbol in the word
    let m = files.write("m.txt", M_AB);
    assert_eq!(run(&["accept", &m, "az"]).code, 2);
}

#[test]
fn validate_reports_violations() {
    let files = Files::new("validate");
    let m = files.write("m.txt", M_AB);
    let out = run(&["validate", &m]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "valid\n"));
    // parseable but ill-formed: a final state that is never declared
    let bad = files.write(
        "bad.txt",
        "type: lg\nnonterminals: S S\nterminals: a\nstart: S\nrule: S -> a\n",
    );
    let out = run(&["validate", &bad]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("violation: duplicate nonterminal S"));
}

#[test]
fn trace_output() {
    let files = Files::new("trace");
    let m = files.write("m.txt", M_AB);
    let out = run(&["trace", &m, "ab"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout,
        "split: 1\n\
         move 1: rule 0 [a s -> q] left reads a\n\
         move 2: rule 1 [q b -> s] right reads b\n"
    );
    let out = run(&["trace", &m, "ba"]);
    assert_eq!(out.code, 1);
    assert_eq!(out.stdout, "no accepting computation\n");
}

#[test]
fn enumerate_text_output() {
    let files = Files::new("enumerate");
    let m = files.write("m.txt", M_AB);
    let out = run(&["enumerate", &m, "--max-len", "4"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "_\nab\naabb\n");
}

#[test]
fn convert_and_reparse() {
    let files = Files::new("convert");
    let m = files.write("m.txt", M_AB);
    let out = run(&["convert", &m, "--to", "lg"]);
    assert_eq!(out.code, 0);
    let g = files.write("g.txt", &out.stdout);
    let out = run(&["equiv", &m, &g, "--max-len", "6"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);

    let out = run(&["convert", &m, "--to", "even-sfa"]);
    assert_eq!(out.code, 0);
    let even = files.write("even.txt", &out.stdout);
    let out = run(&[
        "equiv", &m, &even, "--max-len", "6", "--modes", "even,general",
    ]);
    assert_eq!(out.code, 0, "stdout: {}", out.stdout);

    // non-even grammar under an init-even context is a precondition error
    let uneven = files.write(
        "uneven.txt",
        "type: lg\nnonterminals: S\nterminals: a b\nstart: S\nrule: S -> a a S b\nrule: S -> _\n",
    );
    let out = run(&["convert", &uneven, "--to", "gfa", "--mode-context", "init-even"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("not even linear"));
    // without the context the plain conversion goes through
    assert_eq!(run(&["convert", &uneven, "--to", "gfa"]).code, 0);
}

#[test]
fn equiv_inequal_prints_counterexample() {
    let files = Files::new("equiv");
    let m = files.write("m.txt", M_AB);
    let just_ab = files.write(
        "ab.txt",
        "type: lg\nnonterminals: S\nterminals: a b\nstart: S\nrule: S -> a b\n",
    );
    let out = run(&["equiv", &m, &just_ab, "--max-len", "4"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("not equal up to 4\n"));
    assert!(out.stdout.contains("counterexample: _"));
    let out = run(&["equiv", &m, &just_ab, "--max-len", "4", "--json"]);
    assert_eq!(out.code, 1);
    assert_eq!(out.stdout, "{\"equal\":false,\"counterexample\":\"\"}\n");
}

#[test]
fn restrict_commands() {
    let files = Files::new("restrict");
    let m = files.write("m.txt", M_AB);
    let a_star = files.write(
        "a.txt",
        "type: nfa\nstates: n\nalphabet: a b\nstart: n\nfinal: n\nrule: n a -> n\n",
    );
    let b_star = files.write(
        "b.txt",
        "type: nfa\nstates: n\nalphabet: a b\nstart: n\nfinal: n\nrule: n b -> n\n",
    );
    let out = run(&["restrict", &m, "--op", "sides", "--with", &a_star, &b_star]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let sides = files.write("sides.txt", &out.stdout);
    assert_eq!(run(&["equiv", &m, &sides, "--max-len", "5"]).code, 0);

    let out = run(&["restrict", &m, "--op", "whole", "--with", &a_star]);
    assert_eq!(out.code, 0);
    let whole = files.write("whole.txt", &out.stdout);
    let out = run(&["enumerate", &whole, "--max-len", "4", "--json"]);
    assert_eq!(out.stdout, "{\"words\":[\"\"]}\n");

    let words = files.write("words.txt", "type: words\nword: a\nword: a a\n");
    let b_plus = files.write(
        "bplus.txt",
        "type: nfa\nstates: n f\nalphabet: a b\nstart: n\nfinal: f\n\
         rule: n b -> f\nrule: f b -> f\n",
    );
    let out = run(&["restrict", &m, "--op", "finite-prefix", "--with", &words, &b_plus]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(out.stdout.starts_with("type: nfa\n"));
    let fp = files.write("fp.txt", &out.stdout);
    let out = run(&["enumerate", &fp, "--max-len", "4", "--json"]);
    assert_eq!(out.stdout, "{\"words\":[\"ab\",\"aabb\"]}\n");

    let out = run(&[
        "restrict", &m, "--op", "middle", "--with", &a_star, &b_star, &b_star,
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("type: nfa\n"));

    // a machine with ε-rules fails the precondition
    let eps = files.write(
        "eps.txt",
        "type: ietwgfa\nstates: s q\nalphabet: a b\nstart: s\nfinal: s\nrule: s -> q\n",
    );
    let out = run(&["restrict", &eps, "--op", "whole", "--with", &a_star]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("epsilon-free"));
}

#[test]
fn fuzz_command_runs_clean() {
    let out = run(&["fuzz", "--rounds", "15", "--config", "seed=42"]);
    assert_eq!(out.code, 0, "stdout: {}\nstderr: {}", out.stdout, out.stderr);
    assert_eq!(out.stdout, "fuzz: 15 rounds ok\n");
}

#[test]
fn compiled_binary_end_to_end() {
    let files = Files::new("binary");
    let m = files.write("m.txt", M_AB);
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_ietwfa"))
        .args(["enumerate", &m, "--max-len", "4", "--mode", "even", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, b"{\"words\":[\"\",\"ab\",\"aabb\"]}\n");
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_ietwfa"))
        .args(["accept", &m, "ba"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn commands_are_deterministic() {
    let files = Files::new("determinism");
    let m = files.write("m.txt", M_AB);
    let first = run(&["convert", &m, "--to", "even-sfa"]);
    let second = run(&["convert", &m, "--to", "even-sfa"]);
    assert_eq!(first.stdout, second.stdout);
    let first = run(&["trace", &m, "aabb"]);
    let second = run(&["trace", &m, "aabb"]);
    assert_eq!(first.stdout, second.stdout);
}
