//! Command implementations for the `ietwfa` binary.
//!
//! Exit codes: 0 for success or a true answer, 1 for a false answer
//! (rejection, inequivalence, failed validation), 2 for usage, parse, or
//! precondition errors.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use ietwfa::automata::{Ietwgfa, Nfa, Symbol, Word};
use ietwfa::convert;
use ietwfa::format::{parse_spec, Parsed};
use ietwfa::grammar::{lg_enumerate, LinearGrammar};
use ietwfa::oracle::{self, equiv_up_to, GenConfig};
use ietwfa::restrict;
use ietwfa::simulation::{accepts, enumerate_language, trace, Dir, Mode};

/// Captured result of one command invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

const USAGE: &str = "usage: ietwfa <command> [args]
commands:
  validate FILE
  accept FILE WORD [--mode general|alt|even|init-even] [--tokens]
  trace FILE WORD [--mode MODE] [--tokens]
  enumerate FILE --max-len N [--mode MODE] [--json]
  convert FILE --to lg|gfa|sfa|efree|even-sfa|init-even-sfa|elg [--mode-context MODE]
  restrict FILE --op sides|whole|finite-prefix|middle --with FILES...
  equiv FILE1 FILE2 --max-len N [--modes M1,M2] [--json]
  fuzz [--config KEY=VALUE]... [--rounds N]
";

/// A failure that maps to exit code 2.
struct CliError(String);

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        let msg = msg.into();
        CliError(format!("{}\n{}", msg, USAGE))
    }
}

type CliResult = Result<i32, CliError>;

/// Run one command; `args` excludes the binary name.
pub fn run_command(args: &[String]) -> Outcome {
    let mut stdout = String::new();
    let mut stderr = String::new();
    let code = match dispatch(args, &mut stdout) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            let _ = writeln!(stderr, "{}", msg.trim_end());
            2
        }
    };
    Outcome {
        code,
        stdout,
        stderr,
    }
}

struct Args<'a> {
    positional: Vec<&'a str>,
    mode: Mode,
    modes: Vec<Mode>,
    mode_context: Option<Mode>,
    max_len: Option<usize>,
    tokens: bool,
    json: bool,
    to: Option<&'a str>,
    op: Option<&'a str>,
    with: Vec<&'a str>,
    config: Vec<(&'a str, &'a str)>,
    rounds: usize,
}

fn parse_mode(s: &str) -> Result<Mode, CliError> {
    match s {
        "general" => Ok(Mode::General),
        "alt" => Ok(Mode::Alternating),
        "even" => Ok(Mode::Even),
        "init-even" => Ok(Mode::InitEven),
        other => Err(CliError::usage(format!("unknown mode `{}`", other))),
    }
}

fn parse_args(rest: &[String]) -> Result<Args<'_>, CliError> {
    let mut args = Args {
        positional: Vec::new(),
        mode: Mode::General,
        modes: Vec::new(),
        mode_context: None,
        max_len: None,
        tokens: false,
        json: false,
        to: None,
        op: None,
        with: Vec::new(),
        config: Vec::new(),
        rounds: 50,
    };
    let mut i = 0;
    while i < rest.len() {
        let flag = rest[i].as_str();
        let mut value = || -> Result<&str, CliError> {
            i += 1;
            rest.get(i)
                .map(String::as_str)
                .ok_or_else(|| CliError::usage(format!("{} needs a value", flag)))
        };
        match flag {
            "--mode" => args.mode = parse_mode(value()?)?,
            "--modes" => {
                for part in value()?.split(',') {
                    args.modes.push(parse_mode(part)?);
                }
            }
            "--mode-context" => args.mode_context = Some(parse_mode(value()?)?),
            "--max-len" => {
                let v = value()?;
                args.max_len = Some(
                    v.parse()
                        .map_err(|_| CliError::usage(format!("bad --max-len `{}`", v)))?,
                );
            }
            "--tokens" => args.tokens = true,
            "--json" => args.json = true,
            "--to" => args.to = Some(value()?),
            "--op" => args.op = Some(value()?),
            "--with" => {
                while i + 1 < rest.len() && !rest[i + 1].starts_with("--") {
                    i += 1;
                    args.with.push(rest[i].as_str());
                }
            }
            "--config" => {
                let v = value()?;
                let (k, val) = v
                    .split_once('=')
                    .ok_or_else(|| CliError::usage(format!("bad --config `{}`", v)))?;
                args.config.push((k, val));
            }
            "--rounds" => {
                let v = value()?;
                args.rounds = v
                    .parse()
                    .map_err(|_| CliError::usage(format!("bad --rounds `{}`", v)))?;
            }
            other if other.starts_with("--") => {
                return Err(CliError::usage(format!("unknown flag `{}`", other)))
            }
            positional => args.positional.push(positional),
        }
        i += 1;
    }
    Ok(args)
}

fn load(path: &str) -> Result<Parsed, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {}", path, e)))?;
    parse_spec(&text).map_err(|e| CliError(format!("{}: {}", path, e)))
}

fn load_machine(path: &str) -> Result<Ietwgfa, CliError> {
    match load(path)? {
        Parsed::Machine(m) => Ok(m),
        other => Err(CliError(format!(
            "{}: expected an ietwgfa, found {}",
            path,
            other.kind()
        ))),
    }
}

fn load_nfa(path: &str) -> Result<Nfa, CliError> {
    match load(path)? {
        Parsed::Nfa(n) => Ok(n),
        other => Err(CliError(format!(
            "{}: expected an nfa, found {}",
            path,
            other.kind()
        ))),
    }
}

fn load_grammar(path: &str) -> Result<LinearGrammar, CliError> {
    match load(path)? {
        Parsed::Grammar(g) => Ok(g),
        other => Err(CliError(format!(
            "{}: expected an lg, found {}",
            path,
            other.kind()
        ))),
    }
}

fn load_words(path: &str) -> Result<Vec<Word>, CliError> {
    match load(path)? {
        Parsed::Words(w) => Ok(w),
        other => Err(CliError(format!(
            "{}: expected a words file, found {}",
            path,
            other.kind()
        ))),
    }
}

fn parse_word(text: &str, tokens: bool) -> Word {
    if text == "_" {
        return Word::new();
    }
    if tokens {
        text.split_whitespace().map(Symbol::new).collect()
    } else {
        text.chars().map(|c| Symbol::new(c.to_string())).collect()
    }
}

/// Words print with their symbols run together when every alphabet symbol
/// is a single character, and space-separated otherwise.
fn render_word(w: &[Symbol], alphabet: &[Symbol]) -> String {
    let single = alphabet.iter().all(|s| s.as_str().chars().count() == 1);
    let sep = if single { "" } else { " " };
    w.iter().map(Symbol::as_str).collect::<Vec<_>>().join(sep)
}

fn json_string(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn dispatch(args: &[String], out: &mut String) -> CliResult {
    let Some(command) = args.first() else {
        return Err(CliError::usage("missing command"));
    };
    let parsed = parse_args(&args[1..])?;
    match command.as_str() {
        "validate" => cmd_validate(&parsed, out),
        "accept" => cmd_accept(&parsed, out),
        "trace" => cmd_trace(&parsed, out),
        "enumerate" => cmd_enumerate(&parsed, out),
        "convert" => cmd_convert(&parsed, out),
        "restrict" => cmd_restrict(&parsed, out),
        "equiv" => cmd_equiv(&parsed, out),
        "fuzz" => cmd_fuzz(&parsed, out),
        other => Err(CliError::usage(format!("unknown command `{}`", other))),
    }
}

fn one_file<'a>(args: &Args<'a>) -> Result<&'a str, CliError> {
    match args.positional.as_slice() {
        [f] => Ok(f),
        _ => Err(CliError::usage("expected exactly one FILE argument")),
    }
}

fn cmd_validate(args: &Args, out: &mut String) -> CliResult {
    let doc = load(one_file(args)?)?;
    let report = match &doc {
        Parsed::Machine(m) => m.validate(),
        Parsed::Nfa(n) => n.validate(),
        Parsed::Grammar(g) => g.validate(),
        Parsed::Words(_) => Vec::new(),
    };
    if report.is_empty() {
        let _ = writeln!(out, "valid");
        Ok(0)
    } else {
        for v in report {
            let _ = writeln!(out, "violation: {}", v);
        }
        Ok(1)
    }
}

fn file_and_word<'a>(args: &Args<'a>) -> Result<(&'a str, Word), CliError> {
    match args.positional.as_slice() {
        [f, w] => Ok((f, parse_word(w, args.tokens))),
        _ => Err(CliError::usage("expected FILE and WORD arguments")),
    }
}

fn cmd_accept(args: &Args, out: &mut String) -> CliResult {
    let (path, word) = file_and_word(args)?;
    let m = load_machine(path)?;
    let accepted = accepts(&m, &word, args.mode).map_err(|e| CliError(e.to_string()))?;
    let _ = writeln!(out, "{}", if accepted { "accepted" } else { "rejected" });
    Ok(if accepted { 0 } else { 1 })
}

fn cmd_trace(args: &Args, out: &mut String) -> CliResult {
    let (path, word) = file_and_word(args)?;
    let m = load_machine(path)?;
    let found = trace(&m, &word, args.mode).map_err(|e| CliError(e.to_string()))?;
    match found {
        None => {
            let _ = writeln!(out, "no accepting computation");
            Ok(1)
        }
        Some(t) => {
            let _ = writeln!(out, "split: {}", t.split);
            for (i, step) in t.steps.iter().enumerate() {
                let dir = match step.dir {
                    Dir::Left => "left",
                    Dir::Right => "right",
                };
                let read = if step.read.is_empty() {
                    "_".to_string()
                } else {
                    render_word(&step.read, &m.alphabet)
                };
                let _ = writeln!(
                    out,
                    "move {}: rule {} [{}] {} reads {}",
                    i + 1,
                    step.rule_index,
                    m.rules[step.rule_index],
                    dir,
                    read
                );
            }
            Ok(0)
        }
    }
}

fn bounded_language(doc: &Parsed, mode: Mode, max_len: usize) -> BTreeSet<Word> {
    match doc {
        Parsed::Machine(m) => enumerate_language(m, mode, max_len),
        Parsed::Nfa(n) => n.enumerate(max_len),
        Parsed::Grammar(g) => lg_enumerate(g, max_len),
        Parsed::Words(w) => w.iter().filter(|w| w.len() <= max_len).cloned().collect(),
    }
}

fn doc_alphabet(doc: &Parsed) -> Vec<Symbol> {
    match doc {
        Parsed::Machine(m) => m.alphabet.clone(),
        Parsed::Nfa(n) => n.alphabet.clone(),
        Parsed::Grammar(g) => g.terminals.clone(),
        Parsed::Words(w) => {
            let mut alphabet: Vec<Symbol> = Vec::new();
            for s in w.iter().flatten() {
                if !alphabet.contains(s) {
                    alphabet.push(s.clone());
                }
            }
            alphabet
        }
    }
}

fn cmd_enumerate(args: &Args, out: &mut String) -> CliResult {
    let doc = load(one_file(args)?)?;
    let max_len = args
        .max_len
        .ok_or_else(|| CliError::usage("enumerate needs --max-len"))?;
    let words = bounded_language(&doc, args.mode, max_len);
    let alphabet = doc_alphabet(&doc);
    // shortest first, then lexicographic
    let mut words: Vec<&Word> = words.iter().collect();
    words.sort_by_key(|w| (w.len(), (*w).clone()));
    if args.json {
        let items: Vec<String> = words
            .iter()
            .map(|w| json_string(&render_word(w, &alphabet)))
            .collect();
        let _ = writeln!(out, "{{\"words\":[{}]}}", items.join(","));
    } else {
        for w in &words {
            if w.is_empty() {
                let _ = writeln!(out, "_");
            } else {
                let _ = writeln!(out, "{}", render_word(w, &alphabet));
            }
        }
    }
    Ok(0)
}

fn cmd_convert(args: &Args, out: &mut String) -> CliResult {
    let path = one_file(args)?;
    let target = args.to.ok_or_else(|| CliError::usage("convert needs --to"))?;
    let doc = match target {
        "lg" => Parsed::Grammar(convert::gfa_to_lg(&load_machine(path)?)),
        "gfa" => {
            let g = load_grammar(path)?;
            // under an init-even context the grammar must be even linear,
            // and the output then carries the stronger guarantee
            if args.mode_context == Some(Mode::InitEven) {
                Parsed::Machine(
                    convert::elg_to_gfa_init_even(&g).map_err(|e| CliError(e.to_string()))?,
                )
            } else {
                Parsed::Machine(convert::lg_to_gfa(&g))
            }
        }
        "sfa" => Parsed::Machine(convert::gfa_to_sfa(&load_machine(path)?)),
        "efree" => Parsed::Machine(convert::remove_epsilon(&load_machine(path)?)),
        "even-sfa" => Parsed::Machine(convert::even_to_efree_sfa(&load_machine(path)?)),
        "init-even-sfa" => Parsed::Machine(convert::init_even_to_sfa(&load_machine(path)?)),
        "elg" => Parsed::Grammar(convert::init_even_to_elg(&load_machine(path)?)),
        other => return Err(CliError::usage(format!("unknown --to target `{}`", other))),
    };
    out.push_str(&doc.serialize());
    Ok(0)
}

fn cmd_restrict(args: &Args, out: &mut String) -> CliResult {
    let path = one_file(args)?;
    let m = load_machine(path)?;
    let op = args.op.ok_or_else(|| CliError::usage("restrict needs --op"))?;
    let wrong_count = |n: usize| CliError::usage(format!("--op {} needs {} --with file(s)", op, n));
    let doc = match op {
        "sides" => {
            let [a, b] = args.with.as_slice() else {
                return Err(wrong_count(2));
            };
            Parsed::Machine(
                restrict::restrict_sides(&m, &load_nfa(a)?, &load_nfa(b)?)
                    .map_err(|e| CliError(e.to_string()))?,
            )
        }
        "whole" => {
            let [a] = args.with.as_slice() else {
                return Err(wrong_count(1));
            };
            Parsed::Machine(
                restrict::restrict_whole(&m, &load_nfa(a)?).map_err(|e| CliError(e.to_string()))?,
            )
        }
        "finite-prefix" => {
            let [a, b] = args.with.as_slice() else {
                return Err(wrong_count(2));
            };
            Parsed::Nfa(
                restrict::restrict_finite_prefix(&m, &load_words(a)?, &load_nfa(b)?)
                    .map_err(|e| CliError(e.to_string()))?,
            )
        }
        "middle" => {
            let [a, b, c] = args.with.as_slice() else {
                return Err(wrong_count(3));
            };
            Parsed::Nfa(
                restrict::restrict_middle(&m, &load_nfa(a)?, &load_nfa(b)?, &load_nfa(c)?)
                    .map_err(|e| CliError(e.to_string()))?,
            )
        }
        other => return Err(CliError::usage(format!("unknown --op `{}`", other))),
    };
    out.push_str(&doc.serialize());
    Ok(0)
}

fn cmd_equiv(args: &Args, out: &mut String) -> CliResult {
    let [f1, f2] = args.positional.as_slice() else {
        return Err(CliError::usage("equiv needs two FILE arguments"));
    };
    let max_len = args
        .max_len
        .ok_or_else(|| CliError::usage("equiv needs --max-len"))?;
    let docs = [load(f1)?, load(f2)?];
    let mode_for = |i: usize| args.modes.get(i).copied().unwrap_or(Mode::General);
    let l1 = bounded_language(&docs[0], mode_for(0), max_len);
    let l2 = bounded_language(&docs[1], mode_for(1), max_len);
    let result = equiv_up_to(&l1, &l2, max_len);
    let alphabet = doc_alphabet(&docs[0]);
    if args.json {
        let ce = match &result.counterexample {
            Some(w) => json_string(&render_word(w, &alphabet)),
            None => "null".to_string(),
        };
        let _ = writeln!(out, "{{\"equal\":{},\"counterexample\":{}}}", result.equal, ce);
    } else if result.equal {
        let _ = writeln!(out, "equal up to {}", max_len);
    } else {
        let w = result.counterexample.as_ref().unwrap();
        let shown = if w.is_empty() {
            "_".to_string()
        } else {
            render_word(w, &alphabet)
        };
        let side = if l1.contains(w) { f1 } else { f2 };
        let _ = writeln!(out, "not equal up to {}", max_len);
        let _ = writeln!(out, "counterexample: {} (in {} only)", shown, side);
    }
    Ok(if result.equal { 0 } else { 1 })
}

fn cmd_fuzz(args: &Args, out: &mut String) -> CliResult {
    let mut cfg = GenConfig::default();
    for (k, v) in &args.config {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::usage(format!("bad --config value `{}`", v)))?;
        match *k {
            "max_states" => cfg.max_states = n,
            "max_rules" => cfg.max_rules = n,
            "max_segment_len" => cfg.max_segment_len = n,
            "alphabet_size" => cfg.alphabet_size = n,
            "seed" => cfg.seed = n as u64,
            other => return Err(CliError::usage(format!("unknown --config key `{}`", other))),
        }
    }
    let bound = 4;
    let modes = [Mode::General, Mode::Alternating, Mode::Even, Mode::InitEven];
    for round in 0..args.rounds {
        let round_cfg = GenConfig {
            seed: cfg.seed.wrapping_add(round as u64),
            ..cfg
        };
        let m = oracle::random_gfa(&round_cfg);
        for mode in modes {
            let fast = enumerate_language(&m, mode, bound);
            let slow = oracle::oracle_language(&m, mode, bound);
            let r = equiv_up_to(&fast, &slow, bound);
            if !r.equal {
                let _ = writeln!(out, "mismatch in round {} mode {:?}", round, mode);
                let _ = writeln!(
                    out,
                    "counterexample: {}",
                    render_word(r.counterexample.as_ref().unwrap(), &m.alphabet)
                );
                out.push_str(&ietwfa::format::serialize_machine(&m));
                return Ok(1);
            }
        }
        let g = oracle::random_lg(&round_cfg);
        let grammar_lang = lg_enumerate(&g, bound);
        let machine_lang = enumerate_language(&convert::lg_to_gfa(&g), Mode::General, bound);
        if !equiv_up_to(&grammar_lang, &machine_lang, bound).equal {
            let _ = writeln!(out, "grammar round-trip mismatch in round {}", round);
            out.push_str(&ietwfa::format::serialize_grammar(&g));
            return Ok(1);
        }
        let back = lg_enumerate(&convert::gfa_to_lg(&m), bound);
        let forward = enumerate_language(&m, Mode::General, bound);
        if !equiv_up_to(&forward, &back, bound).equal {
            let _ = writeln!(out, "machine round-trip mismatch in round {}", round);
            out.push_str(&ietwfa::format::serialize_machine(&m));
            return Ok(1);
        }
    }
    let _ = writeln!(out, "fuzz: {} rounds ok", args.rounds);
    Ok(0)
}
