//! Constructions between machines, linear grammars, and their normal forms:
//! machine/grammar conversions in both directions, the simple and ε-free
//! normalizations, the even-computation construction and its lift to
//! initialized-even form, and the even-linear-grammar correspondence.
//!
//! Composite states render as bracketed dot-joined tokens (`<a.q.b.L>`).
//! Fresh names take apostrophes until collision-free; name generation never
//! fails. All outputs declare only states that occur in rules, plus the
//! start state and finals.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::automata::{Direction, Ietwgfa, Rule, StateId, Symbol, Word};
use crate::grammar::{LgRule, LinearGrammar, NonterminalId};
use crate::simulation::Dir;

/// Precondition failure of a conversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvertError {
    /// The grammar is not even linear; carries the offending rule index.
    NotEvenLinear { rule: usize },
}

impl fmt::Display for ConvertError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvertError::NotEvenLinear { rule } => {
                write!(f, "grammar is not even linear (rule {})", rule)
            }
        }
    }
}

impl std::error::Error for ConvertError {}

fn syms(w: &[Symbol]) -> String {
    if w.is_empty() {
        "_".to_string()
    } else {
        w.iter().map(Symbol::as_str).collect()
    }
}

fn bracket(parts: &[&str]) -> String {
    format!("<{}>", parts.join("."))
}

fn dir_tag(d: Dir) -> &'static str {
    match d {
        Dir::Left => "L",
        Dir::Right => "R",
    }
}

/// Allocates collision-free names and interns composite states by a
/// structural key, so semantically equal states share one name.
struct Namer {
    taken: HashSet<String>,
    by_key: HashMap<Vec<String>, StateId>,
    created: Vec<StateId>,
}

impl Namer {
    fn with_reserved<'a>(reserved: impl IntoIterator<Item = &'a str>) -> Self {
        Namer {
            taken: reserved.into_iter().map(str::to_string).collect(),
            by_key: HashMap::new(),
            created: Vec::new(),
        }
    }

    fn fresh(&mut self, pretty: &str) -> StateId {
        let mut name = pretty.to_string();
        while self.taken.contains(&name) {
            name.push('\'');
        }
        self.taken.insert(name.clone());
        let id = StateId::new(&name);
        self.created.push(id.clone());
        id
    }

    fn keyed(&mut self, key: Vec<String>, pretty: &str) -> StateId {
        if let Some(id) = self.by_key.get(&key) {
            return id.clone();
        }
        let id = self.fresh(pretty);
        self.by_key.insert(key, id.clone());
        id
    }
}

fn word_key(w: &[Symbol]) -> Vec<String> {
    let mut parts = vec![w.len().to_string()];
    parts.extend(w.iter().map(|s| s.as_str().to_string()));
    parts
}

/// The grammar that simulates the machine's general computations in
/// reverse: a fresh start nonterminal derives each final state, left rules
/// `xq -> p` become `p -> xq`, right rules `qx -> p` become `p -> qx`, and
/// the machine's start state derives ε.
pub fn gfa_to_lg(m: &Ietwgfa) -> LinearGrammar {
    let mut namer = Namer::with_reserved(
        m.states
            .iter()
            .map(StateId::as_str)
            .chain(m.alphabet.iter().map(Symbol::as_str)),
    );
    let start = NonterminalId::new(namer.fresh("S").as_str());
    let nt = |q: &StateId| NonterminalId::new(q.as_str());
    let mut rules = Vec::new();
    for f in &m.finals {
        rules.push(LgRule::nonterminal(start.clone(), Word::new(), nt(f), Word::new()));
    }
    rules.push(LgRule::terminal(nt(&m.start), Word::new()));
    for r in &m.rules {
        let (prefix, suffix) = match r.direction() {
            Direction::Left | Direction::Neutral => (r.read().to_vec(), Word::new()),
            Direction::Right => (Word::new(), r.read().to_vec()),
        };
        rules.push(LgRule::nonterminal(nt(r.target()), prefix, nt(r.source()), suffix));
    }
    let mut nonterminals = vec![start.clone()];
    for q in &m.states {
        let id = nt(q);
        if rules.iter().any(|r| r.lhs == id || r.mid.as_ref() == Some(&id)) {
            nonterminals.push(id);
        }
    }
    LinearGrammar {
        nonterminals,
        terminals: m.alphabet.clone(),
        rules,
        start,
    }
}

/// The machine that simulates the grammar's derivations in reverse: each
/// rule `A -> xBy` becomes the pair `xB -> <A.x.B.y>`, `<A.x.B.y> y -> A`,
/// each terminal rule `A -> x` becomes `s x -> A` from a fresh start state,
/// and the grammar's start nonterminal is the one final state.
pub fn lg_to_gfa(g: &LinearGrammar) -> Ietwgfa {
    let mut namer = Namer::with_reserved(
        g.nonterminals
            .iter()
            .map(NonterminalId::as_str)
            .chain(g.terminals.iter().map(Symbol::as_str)),
    );
    let start = namer.fresh("s");
    let st = |n: &NonterminalId| StateId::new(n.as_str());
    let mut rules = Vec::new();
    let mut composites = Vec::new();
    for r in &g.rules {
        match &r.mid {
            None => rules.push(Rule::right(start.clone(), r.prefix.clone(), st(&r.lhs))),
            Some(mid) => {
                let mut key = vec!["lgr".to_string(), r.lhs.as_str().to_string()];
                key.extend(word_key(&r.prefix));
                key.push(mid.as_str().to_string());
                key.extend(word_key(&r.suffix));
                let pretty = bracket(&[
                    r.lhs.as_str(),
                    &syms(&r.prefix),
                    mid.as_str(),
                    &syms(&r.suffix),
                ]);
                let record = namer.keyed(key, &pretty);
                if !composites.contains(&record) {
                    composites.push(record.clone());
                }
                rules.push(Rule::left(r.prefix.clone(), st(mid), record.clone()));
                rules.push(Rule::right(record, r.suffix.clone(), st(&r.lhs)));
            }
        }
    }
    let finals = vec![st(&g.start)];
    let mut states = vec![start.clone()];
    for n in &g.nonterminals {
        let q = st(n);
        if finals.contains(&q) || rules.iter().any(|r| r.source() == &q || r.target() == &q) {
            states.push(q);
        }
    }
    states.extend(composites);
    Ietwgfa {
        states,
        alphabet: g.terminals.clone(),
        rules,
        start,
        finals,
    }
}

/// Split every rule that reads two or more symbols into a chain of
/// single-symbol moves through states that record the pending part of the
/// read. Left rules consume the symbol adjacent to the head first.
pub fn gfa_to_sfa(m: &Ietwgfa) -> Ietwgfa {
    if m.classify().simple {
        return m.clone();
    }
    let mut namer = Namer::with_reserved(
        m.states
            .iter()
            .map(StateId::as_str)
            .chain(m.alphabet.iter().map(Symbol::as_str)),
    );
    let mut rules = Vec::new();
    let mut chain_states = Vec::new();
    for (ri, r) in m.rules.iter().enumerate() {
        if r.lhs_len() <= 2 {
            rules.push(r.clone());
            continue;
        }
        let read = r.read();
        let dir = r.direction();
        let mut current = r.source().clone();
        let mut pending: Word = read.to_vec();
        for step in 0..read.len() {
            let sym = match dir {
                Direction::Left => pending.pop().unwrap(),
                Direction::Right => pending.remove(0),
                Direction::Neutral => unreachable!("neutral rules are already simple"),
            };
            let next = if pending.is_empty() {
                r.target().clone()
            } else {
                let key = vec!["sfa".to_string(), ri.to_string(), step.to_string()];
                let tag = if dir == Direction::Left { "L" } else { "R" };
                let pretty = bracket(&[r.source().as_str(), &syms(&pending), tag]);
                let s = namer.keyed(key, &pretty);
                if !chain_states.contains(&s) {
                    chain_states.push(s.clone());
                }
                s
            };
            rules.push(match dir {
                Direction::Left => Rule::left(vec![sym], current, next.clone()),
                _ => Rule::right(current, vec![sym], next.clone()),
            });
            current = next;
        }
    }
    let mut states = m.states.clone();
    states.extend(chain_states);
    Ietwgfa {
        states,
        alphabet: m.alphabet.clone(),
        rules,
        start: m.start.clone(),
        finals: m.finals.clone(),
    }
}

fn epsilon_closure(m: &Ietwgfa, from: &StateId) -> Vec<StateId> {
    let mut closure = vec![from.clone()];
    let mut i = 0;
    while i < closure.len() {
        for r in &m.rules {
            if r.is_epsilon() && r.source() == &closure[i] && !closure.contains(r.target()) {
                closure.push(r.target().clone());
            }
        }
        i += 1;
    }
    closure
}

/// Standard ε-elimination: re-source every reading rule at each state whose
/// ε-closure contains the rule's source, make every state final whose
/// ε-closure meets the final set, then drop rules from states that the rule
/// graph cannot reach from the start. Preserves simplicity.
pub fn remove_epsilon(m: &Ietwgfa) -> Ietwgfa {
    let closures: HashMap<&StateId, Vec<StateId>> =
        m.states.iter().map(|q| (q, epsilon_closure(m, q))).collect();
    let mut rules = Vec::new();
    let mut seen = HashSet::new();
    for q in &m.states {
        for r in &m.rules {
            if r.is_epsilon() || !closures[q].contains(r.source()) {
                continue;
            }
            let resourced = match r.direction() {
                Direction::Left => Rule::left(r.read().to_vec(), q.clone(), r.target().clone()),
                _ => Rule::right(q.clone(), r.read().to_vec(), r.target().clone()),
            };
            if seen.insert(resourced.clone()) {
                rules.push(resourced);
            }
        }
    }
    let finals: Vec<StateId> = m
        .states
        .iter()
        .filter(|q| closures[*q].iter().any(|p| m.finals.contains(p)))
        .cloned()
        .collect();
    // forward reachability over the rule graph
    let mut reachable = vec![m.start.clone()];
    let mut i = 0;
    while i < reachable.len() {
        for r in &rules {
            if r.source() == &reachable[i] && !reachable.contains(r.target()) {
                reachable.push(r.target().clone());
            }
        }
        i += 1;
    }
    let rules: Vec<Rule> = rules
        .into_iter()
        .filter(|r| reachable.contains(r.source()))
        .collect();
    let states: Vec<StateId> = m
        .states
        .iter()
        .filter(|q| {
            **q == m.start
                || finals.contains(q)
                || rules.iter().any(|r| r.source() == *q || r.target() == *q)
        })
        .cloned()
        .collect();
    Ietwgfa {
        states,
        alphabet: m.alphabet.clone(),
        rules,
        start: m.start.clone(),
        finals,
    }
}

/// Intermediate data the initialized-even construction builds on.
struct EvenParts {
    machine: Ietwgfa,
    start: StateId,
    bare: HashMap<(StateId, Dir), StateId>,
}

fn even_construction(m: &Ietwgfa) -> EvenParts {
    let mut namer = Namer::with_reserved(m.alphabet.iter().map(Symbol::as_str));
    let mut bare: HashMap<(StateId, Dir), StateId> = HashMap::new();
    for q in &m.states {
        for d in [Dir::Left, Dir::Right] {
            let key = vec!["bare".to_string(), q.as_str().to_string(), dir_tag(d).to_string()];
            let id = namer.keyed(key, &bracket(&[q.as_str(), dir_tag(d)]));
            bare.insert((q.clone(), d), id);
        }
    }
    let start = namer.fresh("s'");

    let mut rules: BTreeSet<Rule> = BTreeSet::new();

    // one strictly alternating chain of 2n single-symbol moves per pair
    // of opposite-direction rules that read the same number of symbols and
    // share the middle state
    let chain = |namer: &mut Namer,
                     rules: &mut BTreeSet<Rule>,
                     entries: Vec<StateId>,
                     o: &StateId,
                     mut left_pending: Word,
                     mut right_pending: Word,
                     tag: Dir| {
        let total = left_pending.len() + right_pending.len();
        let mut current = entries;
        for step in 0..total {
            let dir = if (step % 2 == 0) == (tag == Dir::Left) {
                Dir::Left
            } else {
                Dir::Right
            };
            let sym = match dir {
                Dir::Left => left_pending.pop().unwrap(),
                Dir::Right => right_pending.remove(0),
            };
            let next = if left_pending.is_empty() && right_pending.is_empty() {
                bare[&(o.clone(), tag)].clone()
            } else {
                let mut key = vec!["mid".to_string(), dir_tag(tag).to_string()];
                key.extend(word_key(&left_pending));
                key.push(o.as_str().to_string());
                key.extend(word_key(&right_pending));
                let pretty = bracket(&[
                    &syms(&left_pending),
                    o.as_str(),
                    &syms(&right_pending),
                    dir_tag(tag),
                ]);
                namer.keyed(key, &pretty)
            };
            for c in &current {
                rules.insert(match dir {
                    Dir::Left => Rule::left(vec![sym.clone()], c.clone(), next.clone()),
                    Dir::Right => Rule::right(c.clone(), vec![sym.clone()], next.clone()),
                });
            }
            current = vec![next];
        }
    };

    for r1 in &m.rules {
        for r2 in &m.rules {
            if r2.source() != r1.target()
                || r1.read().is_empty()
                || r1.read().len() != r2.read().len()
            {
                continue;
            }
            if r1.direction() == Direction::Left && r2.direction() == Direction::Right {
                let mut entries = vec![bare[&(r1.source().clone(), Dir::Left)].clone()];
                if r1.source() == &m.start {
                    entries.push(start.clone());
                }
                chain(
                    &mut namer,
                    &mut rules,
                    entries,
                    r2.target(),
                    r1.read().to_vec(),
                    r2.read().to_vec(),
                    Dir::Left,
                );
            }
            if r1.direction() == Direction::Right && r2.direction() == Direction::Left {
                let mut entries = vec![bare[&(r1.source().clone(), Dir::Right)].clone()];
                if r1.source() == &m.start {
                    entries.push(start.clone());
                }
                chain(
                    &mut namer,
                    &mut rules,
                    entries,
                    r2.target(),
                    r2.read().to_vec(),
                    r1.read().to_vec(),
                    Dir::Right,
                );
            }
        }
    }

    // ε-pairs of the source machine: p -> q -> o by two neutral rules
    let eps_pairs: Vec<(StateId, StateId)> = m
        .rules
        .iter()
        .filter(|r| r.is_epsilon())
        .flat_map(|r1| {
            m.rules
                .iter()
                .filter(|r2| r2.is_epsilon() && r2.source() == r1.target())
                .map(|r2| (r1.source().clone(), r2.target().clone()))
        })
        .collect();

    // let the state before an ε-pair act like the state after it,
    // iterated to a fixpoint
    loop {
        let mut additions: Vec<Rule> = Vec::new();
        for (p, o) in &eps_pairs {
            for r in &rules {
                match r.direction() {
                    Direction::Left if r.source() == &bare[&(o.clone(), Dir::Left)] => {
                        additions.push(Rule::left(
                            r.read().to_vec(),
                            bare[&(p.clone(), Dir::Left)].clone(),
                            r.target().clone(),
                        ));
                        if p == &m.start {
                            additions.push(Rule::left(
                                r.read().to_vec(),
                                start.clone(),
                                r.target().clone(),
                            ));
                        }
                    }
                    Direction::Right if r.source() == &bare[&(o.clone(), Dir::Right)] => {
                        additions.push(Rule::right(
                            bare[&(p.clone(), Dir::Right)].clone(),
                            r.read().to_vec(),
                            r.target().clone(),
                        ));
                        if p == &m.start {
                            additions.push(Rule::right(
                                start.clone(),
                                r.read().to_vec(),
                                r.target().clone(),
                            ));
                        }
                    }
                    _ => {}
                }
            }
        }
        let before = rules.len();
        rules.extend(additions);
        if rules.len() == before {
            break;
        }
    }

    // close the final set over ε-pairs
    let mut finals: Vec<StateId> = Vec::new();
    for f in &m.finals {
        for d in [Dir::Left, Dir::Right] {
            finals.push(bare[&(f.clone(), d)].clone());
        }
    }
    if m.finals.contains(&m.start) {
        finals.push(start.clone());
    }
    loop {
        let mut grew = false;
        for (p, o) in &eps_pairs {
            let o_l = &bare[&(o.clone(), Dir::Left)];
            let o_r = &bare[&(o.clone(), Dir::Right)];
            if finals.contains(o_l) && finals.contains(o_r) {
                for d in [Dir::Left, Dir::Right] {
                    let p_d = bare[&(p.clone(), d)].clone();
                    if !finals.contains(&p_d) {
                        finals.push(p_d);
                        grew = true;
                    }
                }
                if p == &m.start && !finals.contains(&start) {
                    finals.push(start.clone());
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }

    let rules: Vec<Rule> = rules.into_iter().collect();
    let mut states = vec![start.clone()];
    for q in &namer.created {
        if *q == start {
            continue;
        }
        let used =
            finals.contains(q) || rules.iter().any(|r| r.source() == q || r.target() == q);
        if used {
            states.push(q.clone());
        }
    }
    EvenParts {
        machine: Ietwgfa {
            states,
            alphabet: m.alphabet.clone(),
            rules,
            start: start.clone(),
            finals,
        },
        start,
        bare,
    }
}

/// The ε-free simple machine whose even computations (and in fact all of
/// its computations) accept exactly the even-computation language of `m`.
/// Every pair of opposite moves of equal read length becomes a strictly
/// alternating chain of single-symbol moves; ε-pairs are bypassed and the
/// final set is closed over them.
pub fn even_to_efree_sfa(m: &Ietwgfa) -> Ietwgfa {
    even_construction(m).machine
}

/// Adds a fresh start state with a single ε-rule into the old one, so the
/// initialized-even language of the result is the even language of `m`.
pub fn lift_even_to_init_even(m: &Ietwgfa) -> Ietwgfa {
    let mut namer = Namer::with_reserved(
        m.states
            .iter()
            .map(StateId::as_str)
            .chain(m.alphabet.iter().map(Symbol::as_str)),
    );
    let start = namer.fresh("s'");
    let mut states = vec![start.clone()];
    states.extend(m.states.iter().cloned());
    let mut rules = m.rules.clone();
    rules.push(Rule::epsilon(start.clone(), m.start.clone()));
    Ietwgfa {
        states,
        alphabet: m.alphabet.clone(),
        rules,
        start,
        finals: m.finals.clone(),
    }
}

/// The simple machine for the initialized-even language of `m`, built on
/// the even construction: the start rules are replaced so that the first
/// move reads at most one symbol, longer first reads being unrolled into
/// alternating outward chains entered by an ε-move (even read length) or a
/// single-symbol move (odd read length). The result has no rule targeting
/// the start state, and its only ε-rules sit on the start state.
pub fn init_even_to_sfa(m: &Ietwgfa) -> Ietwgfa {
    let parts = even_construction(m);
    let hat = &parts.machine;
    let mut rules: BTreeSet<Rule> = hat
        .rules
        .iter()
        .filter(|r| r.source() != &parts.start)
        .cloned()
        .collect();
    let finals: Vec<StateId> = hat
        .finals
        .iter()
        .filter(|f| **f != parts.start)
        .cloned()
        .collect();
    let reserved: Vec<&str> = hat
        .states
        .iter()
        .filter(|q| **q != parts.start)
        .map(StateId::as_str)
        .chain(m.alphabet.iter().map(Symbol::as_str))
        .collect();
    let mut namer = Namer::with_reserved(reserved);
    let start = namer.fresh("s'");

    let bare = |q: &StateId, d: Dir| parts.bare[&(q.clone(), d)].clone();

    // outward alternating reads of a recorded string, switching direction
    // freely whenever the two pending halves are balanced
    let tree = |namer: &mut Namer,
                    rules: &mut BTreeSet<Rule>,
                    q: &StateId,
                    x: Word,
                    y: Word|
     -> StateId {
        let state_for = |namer: &mut Namer, x: &Word, y: &Word| -> StateId {
            let mut key = vec!["first".to_string()];
            key.extend(word_key(x));
            key.push(q.as_str().to_string());
            key.extend(word_key(y));
            namer.keyed(key, &bracket(&[&syms(x), q.as_str(), &syms(y)]))
        };
        let top = state_for(namer, &x, &y);
        let mut queue = vec![(x, y)];
        let mut visited = HashSet::new();
        while let Some((x, y)) = queue.pop() {
            if !visited.insert((x.clone(), y.clone())) {
                continue;
            }
            let here = state_for(namer, &x, &y);
            if x.len() >= y.len() && !x.is_empty() {
                let mut nx = x.clone();
                let sym = nx.pop().unwrap();
                let next = if nx.is_empty() && y.is_empty() {
                    bare(q, Dir::Right)
                } else {
                    state_for(namer, &nx, &y)
                };
                rules.insert(Rule::left(vec![sym], here.clone(), next));
                if !(nx.is_empty() && y.is_empty()) {
                    queue.push((nx, y.clone()));
                }
            }
            if y.len() >= x.len() && !y.is_empty() {
                let mut ny = y.clone();
                let sym = ny.remove(0);
                let next = if x.is_empty() && ny.is_empty() {
                    bare(q, Dir::Left)
                } else {
                    state_for(namer, &x, &ny)
                };
                rules.insert(Rule::right(here.clone(), vec![sym], next));
                if !(x.is_empty() && ny.is_empty()) {
                    queue.push((x.clone(), ny));
                }
            }
        }
        top
    };

    for r in &m.rules {
        if r.source() != &m.start {
            continue;
        }
        let read = r.read();
        match read.len() {
            0 | 1 => {
                for d in [Dir::Left, Dir::Right] {
                    rules.insert(Rule::right(start.clone(), read.to_vec(), bare(r.target(), d)));
                }
            }
            len if len % 2 == 0 => {
                let n = len / 2;
                let top = tree(
                    &mut namer,
                    &mut rules,
                    r.target(),
                    read[..n].to_vec(),
                    read[n..].to_vec(),
                );
                rules.insert(Rule::epsilon(start.clone(), top));
            }
            len => {
                let n = len / 2;
                let top = tree(
                    &mut namer,
                    &mut rules,
                    r.target(),
                    read[..n].to_vec(),
                    read[n + 1..].to_vec(),
                );
                rules.insert(Rule::right(start.clone(), vec![read[n].clone()], top));
            }
        }
    }

    let rules: Vec<Rule> = rules.into_iter().collect();
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
        alphabet: m.alphabet.clone(),
        rules,
        start,
        finals,
    }
}

/// The even linear grammar for the initialized-even language of `m`: it
/// simulates those computations in reverse, pairing a left rule with a
/// right rule of equal read length per derivation step and closing with the
/// string read by the unconstrained first move.
pub fn init_even_to_elg(m: &Ietwgfa) -> LinearGrammar {
    let mut namer = Namer::with_reserved(m.alphabet.iter().map(Symbol::as_str));
    let mut bare: HashMap<(StateId, Dir), NonterminalId> = HashMap::new();
    for q in &m.states {
        for d in [Dir::Left, Dir::Right] {
            let key = vec!["nt".to_string(), q.as_str().to_string(), dir_tag(d).to_string()];
            let id = namer.keyed(key, &bracket(&[q.as_str(), dir_tag(d)]));
            bare.insert((q.clone(), d), NonterminalId::new(id.as_str()));
        }
    }
    let start = NonterminalId::new(namer.fresh("S").as_str());

    let mut rules: Vec<LgRule> = Vec::new();
    let push = |rules: &mut Vec<LgRule>, r: LgRule| {
        if !rules.contains(&r) {
            rules.push(r);
        }
    };
    for f in &m.finals {
        for d in [Dir::Left, Dir::Right] {
            push(
                &mut rules,
                LgRule::nonterminal(
                    start.clone(),
                    Word::new(),
                    bare[&(f.clone(), d)].clone(),
                    Word::new(),
                ),
            );
        }
    }
    for r in &m.rules {
        if r.source() == &m.start {
            for d in [Dir::Left, Dir::Right] {
                push(
                    &mut rules,
                    LgRule::terminal(bare[&(r.target().clone(), d)].clone(), r.read().to_vec()),
                );
            }
        }
    }
    let left_like = |r: &Rule| matches!(r.direction(), Direction::Left | Direction::Neutral);
    let right_like = |r: &Rule| matches!(r.direction(), Direction::Right | Direction::Neutral);
    for r1 in &m.rules {
        for r2 in &m.rules {
            if r2.source() != r1.target() || r1.read().len() != r2.read().len() {
                continue;
            }
            // x r1.source -> p, p y -> o gives <o.L> -> x <r1.source.L> y
            if left_like(r1) && right_like(r2) {
                push(
                    &mut rules,
                    LgRule::nonterminal(
                        bare[&(r2.target().clone(), Dir::Left)].clone(),
                        r1.read().to_vec(),
                        bare[&(r1.source().clone(), Dir::Left)].clone(),
                        r2.read().to_vec(),
                    ),
                );
            }
            // r1.source y -> p, x p -> o gives <o.R> -> x <r1.source.R> y
            if right_like(r1) && left_like(r2) {
                push(
                    &mut rules,
                    LgRule::nonterminal(
                        bare[&(r2.target().clone(), Dir::Right)].clone(),
                        r2.read().to_vec(),
                        bare[&(r1.source().clone(), Dir::Right)].clone(),
                        r1.read().to_vec(),
                    ),
                );
            }
        }
    }
    let mut nonterminals = vec![start.clone()];
    for q in &namer.created {
        let id = NonterminalId::new(q.as_str());
        if id == start {
            continue;
        }
        let used = rules
            .iter()
            .any(|r| r.lhs == id || r.mid.as_ref() == Some(&id));
        if used {
            nonterminals.push(id);
        }
    }
    LinearGrammar {
        nonterminals,
        terminals: m.alphabet.clone(),
        rules,
        start,
    }
}

/// The reverse-derivation machine of an even linear grammar; because the
/// grammar is even, the result accepts the grammar's language under the
/// initialized-even mode, not just the general one.
pub fn elg_to_gfa_init_even(g: &LinearGrammar) -> Result<Ietwgfa, ConvertError> {
    let witness = g.is_even_linear();
    if !witness.even {
        return Err(ConvertError::NotEvenLinear {
            rule: witness.offending_rule.unwrap_or(0),
        });
    }
    Ok(lg_to_gfa(g))
}
