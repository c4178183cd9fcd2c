//! Product constructions that restrict parts of a machine's input with
//! regular or finite languages: both sides separately, the whole input, a
//! finite prefix, or only the middle part being read. The first two stay
//! two-way machines; the last two collapse to classical NFAs.
//!
//! Every operation wants an ε-free simple machine (each move reads exactly
//! one symbol) and ε-free NFA restrictors. Backward runs of a restrictor
//! are simulated by pairing moves against its transitions indexed by target
//! state; no explicit reversal is built.

use std::fmt;

use crate::automata::{Direction, Ietwgfa, Nfa, NfaRule, Rule, StateId, Symbol, Word};

/// A restriction operand failed its classification precondition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RestrictError {
    MachineNotSimple,
    MachineNotEpsilonFree,
    RestrictorNotEpsilonFree { which: &'static str },
    ForeignSymbols { which: &'static str },
}

impl fmt::Display for RestrictError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RestrictError::MachineNotSimple => write!(f, "machine is not simple"),
            RestrictError::MachineNotEpsilonFree => write!(f, "machine is not epsilon-free"),
            RestrictError::RestrictorNotEpsilonFree { which } => {
                write!(f, "restrictor {} is not epsilon-free", which)
            }
            RestrictError::ForeignSymbols { which } => {
                write!(f, "restrictor {} uses symbols outside the machine's alphabet", which)
            }
        }
    }
}

impl std::error::Error for RestrictError {}

fn require_efree_simple(m: &Ietwgfa) -> Result<(), RestrictError> {
    let c = m.classify();
    if !c.simple {
        return Err(RestrictError::MachineNotSimple);
    }
    if !c.epsilon_free {
        return Err(RestrictError::MachineNotEpsilonFree);
    }
    Ok(())
}

fn require_efree_nfa(n: &Nfa, which: &'static str) -> Result<(), RestrictError> {
    if !n.is_epsilon_free() {
        return Err(RestrictError::RestrictorNotEpsilonFree { which });
    }
    Ok(())
}

fn triple(parts: &[&str]) -> StateId {
    StateId::new(format!("<{}>", parts.join(".")))
}

/// Machine rules split by direction, with the single read symbol exposed.
fn split_rules(m: &Ietwgfa) -> (Vec<(Symbol, StateId, StateId)>, Vec<(StateId, Symbol, StateId)>) {
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    for r in &m.rules {
        let sym = r.read()[0].clone();
        match r.direction() {
            Direction::Left => lefts.push((sym, r.source().clone(), r.target().clone())),
            Direction::Right => rights.push((r.source().clone(), sym, r.target().clone())),
            Direction::Neutral => unreachable!("checked ε-free"),
        }
    }
    (lefts, rights)
}

fn nfa_transitions(n: &Nfa) -> Vec<(StateId, Symbol, StateId)> {
    n.rules
        .iter()
        .map(|r| (r.from.clone(), r.symbol.clone().expect("ε-free"), r.to.clone()))
        .collect()
}

fn finish_machine(
    alphabet: Vec<Symbol>,
    rules: Vec<Rule>,
    start: StateId,
    finals: Vec<StateId>,
) -> Ietwgfa {
    let mut states = vec![start.clone()];
    let declare = |q: &StateId, states: &mut Vec<StateId>| {
        if !states.contains(q) {
            states.push(q.clone());
        }
    };
    for r in &rules {
        declare(r.source(), &mut states);
        declare(r.target(), &mut states);
    }
    for f in &finals {
        declare(f, &mut states);
    }
    Ietwgfa {
        states,
        alphabet,
        rules,
        start,
        finals,
    }
}

fn finish_nfa(
    alphabet: Vec<Symbol>,
    rules: Vec<NfaRule>,
    start: StateId,
    finals: Vec<StateId>,
) -> Nfa {
    let mut states = vec![start.clone()];
    let declare = |q: &StateId, states: &mut Vec<StateId>| {
        if !states.contains(q) {
            states.push(q.clone());
        }
    };
    for r in &rules {
        declare(&r.from, &mut states);
        declare(&r.to, &mut states);
    }
    for f in &finals {
        declare(f, &mut states);
    }
    Nfa {
        states,
        alphabet,
        rules,
        start,
        finals,
    }
}

/// Restrict the part left of the split to `L(a)` and the part right of it
/// to `L(b)`: the product machine runs `a` backwards on left moves and `b`
/// forwards on right moves, starting from a guessed final state of `a`.
///
/// Bounded guarantee: the result accepts `{uv : u s v ⇒* f in m, u ∈ L(a),
/// v ∈ L(b)}`.
pub fn restrict_sides(m: &Ietwgfa, a: &Nfa, b: &Nfa) -> Result<Ietwgfa, RestrictError> {
    require_efree_simple(m)?;
    require_efree_nfa(a, "a")?;
    require_efree_nfa(b, "b")?;
    let (lefts, rights) = split_rules(m);
    let a_rules = nfa_transitions(a);
    let b_rules = nfa_transitions(b);
    let start = StateId::new("s'");
    let mut rules = Vec::new();
    for f1 in &a.finals {
        rules.push(Rule::epsilon(
            start.clone(),
            triple(&[m.start.as_str(), f1.as_str(), b.start.as_str()]),
        ));
    }
    for (sym, p, q) in &lefts {
        for (q1, s1, p1) in &a_rules {
            if s1 != sym {
                continue;
            }
            for q2 in &b.states {
                rules.push(Rule::left(
                    vec![sym.clone()],
                    triple(&[p.as_str(), p1.as_str(), q2.as_str()]),
                    triple(&[q.as_str(), q1.as_str(), q2.as_str()]),
                ));
            }
        }
    }
    for (p, sym, q) in &rights {
        for (p2, s2, q2) in &b_rules {
            if s2 != sym {
                continue;
            }
            for q1 in &a.states {
                rules.push(Rule::right(
                    triple(&[p.as_str(), q1.as_str(), p2.as_str()]),
                    vec![sym.clone()],
                    triple(&[q.as_str(), q1.as_str(), q2.as_str()]),
                ));
            }
        }
    }
    let mut finals = Vec::new();
    for f in &m.finals {
        for f2 in &b.finals {
            finals.push(triple(&[f.as_str(), a.start.as_str(), f2.as_str()]));
        }
    }
    Ok(finish_machine(m.alphabet.clone(), rules, start, finals))
}

/// Restrict the whole input to `L(a)`: the product guesses the state of
/// `a`'s run at the split, then extends it backwards over left moves and
/// forwards over right moves.
///
/// Bounded guarantee: accepts `{uv : u s v ⇒* f in m, uv ∈ L(a)}`.
pub fn restrict_whole(m: &Ietwgfa, a: &Nfa) -> Result<Ietwgfa, RestrictError> {
    require_efree_simple(m)?;
    require_efree_nfa(a, "a")?;
    let (lefts, rights) = split_rules(m);
    let a_rules = nfa_transitions(a);
    let start = StateId::new("s'");
    let mut rules = Vec::new();
    for q_hat in &a.states {
        rules.push(Rule::epsilon(
            start.clone(),
            triple(&[m.start.as_str(), q_hat.as_str(), q_hat.as_str()]),
        ));
    }
    for (sym, p, q) in &lefts {
        for (q1, s1, p1) in &a_rules {
            if s1 != sym {
                continue;
            }
            for other in &a.states {
                rules.push(Rule::left(
                    vec![sym.clone()],
                    triple(&[p.as_str(), p1.as_str(), other.as_str()]),
                    triple(&[q.as_str(), q1.as_str(), other.as_str()]),
                ));
            }
        }
    }
    for (p, sym, q) in &rights {
        for (p1, s1, q1) in &a_rules {
            if s1 != sym {
                continue;
            }
            for other in &a.states {
                rules.push(Rule::right(
                    triple(&[p.as_str(), other.as_str(), p1.as_str()]),
                    vec![sym.clone()],
                    triple(&[q.as_str(), other.as_str(), q1.as_str()]),
                ));
            }
        }
    }
    let mut finals = Vec::new();
    for f in &m.finals {
        for f_hat in &a.finals {
            finals.push(triple(&[f.as_str(), a.start.as_str(), f_hat.as_str()]));
        }
    }
    Ok(finish_machine(m.alphabet.clone(), rules, start, finals))
}

/// Restrict the left part to a finite language `a` and the right part to
/// `L(b)`; the result is a classical NFA. It first reads and records a
/// prefix from `a`, then simulates the machine: left moves erase recorded
/// symbols (ε-moves of the NFA), right moves read input jointly with `b`.
///
/// Bounded guarantee: accepts `{uv : u s v ⇒* f in m, u ∈ a, v ∈ L(b)}`.
pub fn restrict_finite_prefix(m: &Ietwgfa, a: &[Word], b: &Nfa) -> Result<Nfa, RestrictError> {
    require_efree_simple(m)?;
    require_efree_nfa(b, "b")?;
    if a.iter().flatten().any(|s| !m.alphabet.contains(s)) {
        return Err(RestrictError::ForeignSymbols { which: "a" });
    }
    let (lefts, rights) = split_rules(m);
    let b_rules = nfa_transitions(b);
    let n = a.iter().map(Word::len).max().unwrap_or(0);
    let rec = |x: &[Symbol]| -> String {
        if x.is_empty() {
            "_".to_string()
        } else {
            x.iter().map(Symbol::as_str).collect()
        }
    };
    let plain = |x: &[Symbol]| StateId::new(format!("<{}>", rec(x)));
    let sim = |x: &[Symbol], q: &StateId, q_hat: &StateId| {
        triple(&[&rec(x), q.as_str(), q_hat.as_str()])
    };
    // prefixes of members of a, the strings the first phase may record
    let mut prefixes: Vec<Word> = vec![Word::new()];
    for w in a {
        for i in 1..=w.len() {
            let p = w[..i].to_vec();
            if !prefixes.contains(&p) {
                prefixes.push(p);
            }
        }
    }
    let mut rules = Vec::new();
    for x in &prefixes {
        if x.len() >= n {
            continue;
        }
        for sym in &m.alphabet {
            let mut xa = x.clone();
            xa.push(sym.clone());
            if prefixes.contains(&xa) {
                rules.push(NfaRule {
                    from: plain(x),
                    symbol: Some(sym.clone()),
                    to: plain(&xa),
                });
            }
        }
    }
    for x in a {
        rules.push(NfaRule {
            from: plain(x),
            symbol: None,
            to: sim(x, &m.start, &b.start),
        });
    }
    // left moves of m erase the recorded string from its right end
    for (sym, p, q) in &lefts {
        for x in &prefixes {
            if x.last() != Some(sym) {
                continue;
            }
            let shorter = &x[..x.len() - 1];
            for q_hat in &b.states {
                rules.push(NfaRule {
                    from: sim(x, p, q_hat),
                    symbol: None,
                    to: sim(shorter, q, q_hat),
                });
            }
        }
    }
    // right moves of m run jointly with b on the remaining input
    for (p, sym, q) in &rights {
        for (p_hat, s_hat, q_hat) in &b_rules {
            if s_hat != sym {
                continue;
            }
            for x in &prefixes {
                rules.push(NfaRule {
                    from: sim(x, p, p_hat),
                    symbol: Some(sym.clone()),
                    to: sim(x, q, q_hat),
                });
            }
        }
    }
    let mut finals = Vec::new();
    for f in &m.finals {
        for f_hat in &b.finals {
            finals.push(sim(&[], f, f_hat));
        }
    }
    Ok(finish_nfa(m.alphabet.clone(), rules, plain(&[]), finals))
}

/// Restrict a three-way split `u s v w` with `u ∈ L(a)`, `v ∈ L(b)`,
/// `w ∈ L(c)` and keep only the middle part `v` as the result's input; the
/// result is a classical NFA over two phases. Phase 1 reads `v` while
/// simulating the machine's right moves with `b` and its left moves with a
/// reversed `a`; once `b` is final the phase may switch, and phase 2 runs
/// the remaining left moves with `a` and right moves with `c` silently.
///
/// Bounded guarantee: accepts `{v : u s v w ⇒* f in m, u ∈ L(a),
/// v ∈ L(b), w ∈ L(c)}`.
pub fn restrict_middle(m: &Ietwgfa, a: &Nfa, b: &Nfa, c: &Nfa) -> Result<Nfa, RestrictError> {
    require_efree_simple(m)?;
    require_efree_nfa(a, "a")?;
    require_efree_nfa(b, "b")?;
    require_efree_nfa(c, "c")?;
    let (lefts, rights) = split_rules(m);
    let a_rules = nfa_transitions(a);
    let b_rules = nfa_transitions(b);
    let c_rules = nfa_transitions(c);
    let start = StateId::new("s'");
    let ph1 = |q: &StateId, q1: &StateId, q2: &StateId| {
        triple(&[q.as_str(), q1.as_str(), q2.as_str(), c.start.as_str(), "1"])
    };
    let ph2 = |q: &StateId, q1: &StateId, f2: &StateId, q3: &StateId| {
        triple(&[q.as_str(), q1.as_str(), f2.as_str(), q3.as_str(), "2"])
    };
    let mut rules = Vec::new();
    for f1 in &a.finals {
        rules.push(NfaRule {
            from: start.clone(),
            symbol: None,
            to: ph1(&m.start, f1, &b.start),
        });
    }
    // phase switch once b has accepted the middle part
    for q in &m.states {
        for q1 in &a.states {
            for f2 in &b.finals {
                rules.push(NfaRule {
                    from: ph1(q, q1, f2),
                    symbol: None,
                    to: ph2(q, q1, f2, &c.start),
                });
            }
        }
    }
    // left moves with reversed a, in both phases, silent
    for (sym, p, q) in &lefts {
        for (q1, s1, p1) in &a_rules {
            if s1 != sym {
                continue;
            }
            for q2 in &b.states {
                rules.push(NfaRule {
                    from: ph1(p, p1, q2),
                    symbol: None,
                    to: ph1(q, q1, q2),
                });
            }
            for f2 in &b.finals {
                for q3 in &c.states {
                    rules.push(NfaRule {
                        from: ph2(p, p1, f2, q3),
                        symbol: None,
                        to: ph2(q, q1, f2, q3),
                    });
                }
            }
        }
    }
    // phase-1 right moves read the middle part jointly with b
    for (p, sym, q) in &rights {
        for (p2, s2, q2) in &b_rules {
            if s2 != sym {
                continue;
            }
            for q1 in &a.states {
                rules.push(NfaRule {
                    from: ph1(p, q1, p2),
                    symbol: Some(sym.clone()),
                    to: ph1(q, q1, q2),
                });
            }
        }
    }
    // phase-2 right moves consume w jointly with c, silent
    for (p, sym, q) in &rights {
        for (p3, s3, q3) in &c_rules {
            if s3 != sym {
                continue;
            }
            for q1 in &a.states {
                for f2 in &b.finals {
                    rules.push(NfaRule {
                        from: ph2(p, q1, f2, p3),
                        symbol: None,
                        to: ph2(q, q1, f2, q3),
                    });
                }
            }
        }
    }
    let mut finals = Vec::new();
    for f in &m.finals {
        for f2 in &b.finals {
            for f3 in &c.finals {
                finals.push(ph2(f, &a.start, f2, f3));
            }
        }
    }
    Ok(finish_nfa(m.alphabet.clone(), rules, start, finals))
}
