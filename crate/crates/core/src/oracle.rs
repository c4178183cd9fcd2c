//! Independent brute-force recognizers, bounded-language equivalence with
//! counterexamples, and seeded random instance generators.
//!
//! The recognizers here deliberately share no code with the simulation
//! module's configuration-graph search: they explore computation trees over
//! explicit strings and validate complete move sequences afterwards, so
//! differential runs compare two genuinely different implementations.

use std::collections::{BTreeSet, HashSet};

use crate::automata::{
    words_up_to, Direction, Ietwgfa, Nfa, NfaRule, Rule, StateId, Symbol, Word,
};
use crate::grammar::{LgRule, LinearGrammar, NonterminalId};
use crate::simulation::Mode;

/// Tag recorded for one move of an explored computation. Neutral moves keep
/// their ambiguity; legality checks try both readings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MoveTag {
    L,
    R,
    N,
}

/// Can the recorded directions be read as a strictly alternating sequence?
/// Tracks the set of feasible previous directions; neutral moves may take
/// either one.
fn alternation_feasible(moves: &[(MoveTag, usize)]) -> bool {
    let mut can_l = true;
    let mut can_r = true;
    let mut first = true;
    for (tag, _) in moves {
        let (next_l, next_r) = match tag {
            MoveTag::L => ((first || can_r), false),
            MoveTag::R => (false, first || can_l),
            MoveTag::N => ((first || can_r), first || can_l),
        };
        can_l = next_l;
        can_r = next_r;
        first = false;
        if !can_l && !can_r {
            return false;
        }
    }
    true
}

fn even_legal(moves: &[(MoveTag, usize)]) -> bool {
    if moves.len() % 2 != 0 {
        return false;
    }
    for pair in moves.chunks(2) {
        if pair[0].1 != pair[1].1 {
            return false;
        }
    }
    alternation_feasible(moves)
}

fn mode_legal(moves: &[(MoveTag, usize)], mode: Mode) -> bool {
    match mode {
        Mode::General => true,
        Mode::Alternating => alternation_feasible(moves),
        Mode::Even => even_legal(moves),
        Mode::InitEven => !moves.is_empty() && even_legal(&moves[1..]),
    }
}

fn phase_count(mode: Mode) -> usize {
    match mode {
        Mode::General => 1,
        Mode::Alternating => 3,
        Mode::Even => 8,
        Mode::InitEven => 9,
    }
}

struct TreeSearch<'m> {
    m: &'m Ietwgfa,
    mode: Mode,
    /// cap on consecutive neutral moves per erasure plateau; any longer
    /// chain revisits a configuration and is prunable
    eps_cap: usize,
}

impl<'m> TreeSearch<'m> {
    fn new(m: &'m Ietwgfa, mode: Mode) -> Self {
        TreeSearch {
            m,
            mode,
            eps_cap: m.states.len() * phase_count(mode),
        }
    }

    fn accepts_here(&self, left: &[Symbol], state: &StateId, right: &[Symbol], seq: &[(MoveTag, usize)]) -> bool {
        left.is_empty()
            && right.is_empty()
            && self.m.finals.contains(state)
            && mode_legal(seq, self.mode)
    }

    #[allow(clippy::too_many_arguments)]
    fn explore(
        &self,
        left: &mut Word,
        state: &StateId,
        right: &mut Word,
        seq: &mut Vec<(MoveTag, usize)>,
        run_seen: &mut Vec<(StateId, bool)>,
        run_len: usize,
    ) -> bool {
        if self.accepts_here(left, state, right, seq) {
            return true;
        }
        for rule in &self.m.rules {
            if rule.source() != state {
                continue;
            }
            let read = rule.read();
            match rule.direction() {
                Direction::Neutral => {
                    if run_len + 1 > self.eps_cap {
                        continue;
                    }
                    // within one plateau a repeat of (state, move parity)
                    // closes an excisable cycle
                    let point = (rule.target().clone(), (seq.len() + 1) % 2 == 0);
                    let repeat = match self.mode {
                        Mode::General => run_seen.iter().any(|(q, _)| *q == point.0),
                        _ => run_seen.contains(&point),
                    };
                    if repeat {
                        continue;
                    }
                    seq.push((MoveTag::N, 0));
                    run_seen.push(point);
                    let hit = self.explore(left, rule.target(), right, seq, run_seen, run_len + 1);
                    run_seen.pop();
                    seq.pop();
                    if hit {
                        return true;
                    }
                }
                Direction::Left => {
                    if left.len() < read.len() || !left.ends_with(read) {
                        continue;
                    }
                    let keep = left.split_off(left.len() - read.len());
                    seq.push((MoveTag::L, read.len()));
                    let mut fresh = vec![(rule.target().clone(), seq.len() % 2 == 0)];
                    let hit = self.explore(left, rule.target(), right, seq, &mut fresh, 0);
                    seq.pop();
                    left.extend(keep);
                    if hit {
                        return true;
                    }
                }
                Direction::Right => {
                    if right.len() < read.len() || !right.starts_with(read) {
                        continue;
                    }
                    let rest = right.split_off(read.len());
                    let eaten = std::mem::replace(right, rest);
                    seq.push((MoveTag::R, read.len()));
                    let mut fresh = vec![(rule.target().clone(), seq.len() % 2 == 0)];
                    let hit = self.explore(left, rule.target(), right, seq, &mut fresh, 0);
                    seq.pop();
                    let tail = std::mem::take(right);
                    *right = eaten;
                    right.extend(tail);
                    if hit {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Does some computation tree rooted at any split accept `word`?
pub fn oracle_accepts(m: &Ietwgfa, word: &[Symbol], mode: Mode) -> bool {
    let search = TreeSearch::new(m, mode);
    for split in 0..=word.len() {
        let mut left: Word = word[..split].to_vec();
        let mut right: Word = word[split..].to_vec();
        let mut seq = Vec::new();
        let mut run_seen = vec![(m.start.clone(), true)];
        if search.explore(
            &mut left,
            &m.start,
            &mut right,
            &mut seq,
            &mut run_seen,
            0,
        ) {
            return true;
        }
    }
    false
}

/// The bounded language of `m` under `mode`, computed by direct
/// computation-tree exploration over explicit strings.
pub fn oracle_language(m: &Ietwgfa, mode: Mode, max_len: usize) -> BTreeSet<Word> {
    words_up_to(&m.alphabet, max_len)
        .into_iter()
        .filter(|w| oracle_accepts(m, w, mode))
        .collect()
}

/// Breadth-first derivation enumeration over sentential forms; independent
/// check of the grammar membership path.
pub fn derivation_language(g: &LinearGrammar, max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut visited: HashSet<(Word, NonterminalId, Word)> = HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    let root = (Word::new(), g.start.clone(), Word::new());
    visited.insert(root.clone());
    queue.push_back(root);
    while let Some((prefix, nt, suffix)) = queue.pop_front() {
        for rule in &g.rules {
            if rule.lhs != nt {
                continue;
            }
            match &rule.mid {
                Some(mid) => {
                    let mut p = prefix.clone();
                    p.extend(rule.prefix.iter().cloned());
                    let mut s = rule.suffix.clone();
                    s.extend(suffix.iter().cloned());
                    if p.len() + s.len() > max_len {
                        continue;
                    }
                    let form = (p, mid.clone(), s);
                    if visited.insert(form.clone()) {
                        queue.push_back(form);
                    }
                }
                None => {
                    if prefix.len() + rule.prefix.len() + suffix.len() > max_len {
                        continue;
                    }
                    let mut w = prefix.clone();
                    w.extend(rule.prefix.iter().cloned());
                    w.extend(suffix.iter().cloned());
                    out.insert(w);
                }
            }
        }
    }
    out
}

/// Path enumeration over an NFA, independent of the subset construction in
/// `Nfa::accepts`.
pub fn nfa_path_accepts(n: &Nfa, word: &[Symbol]) -> bool {
    fn walk(n: &Nfa, state: &StateId, word: &[Symbol], eps_seen: &mut Vec<StateId>) -> bool {
        if word.is_empty() && n.finals.contains(state) {
            return true;
        }
        for r in &n.rules {
            if &r.from != state {
                continue;
            }
            match &r.symbol {
                Some(a) => {
                    if word.first() == Some(a) {
                        let mut fresh = vec![r.to.clone()];
                        if walk(n, &r.to, &word[1..], &mut fresh) {
                            return true;
                        }
                    }
                }
                None => {
                    if eps_seen.contains(&r.to) {
                        continue;
                    }
                    eps_seen.push(r.to.clone());
                    let hit = walk(n, &r.to, word, eps_seen);
                    eps_seen.pop();
                    if hit {
                        return true;
                    }
                }
            }
        }
        false
    }
    let mut eps_seen = vec![n.start.clone()];
    walk(n, &n.start, word, &mut eps_seen)
}

/// Outcome of a bounded-language comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivResult {
    pub equal: bool,
    /// Length-lexicographically smallest word in exactly one language.
    pub counterexample: Option<Word>,
    pub bound: usize,
}

/// Compare two bounded languages; both sides must already be restricted to
/// words of length at most `bound`.
pub fn equiv_up_to(a: &BTreeSet<Word>, b: &BTreeSet<Word>, bound: usize) -> EquivResult {
    let counterexample = a
        .symmetric_difference(b)
        .min_by_key(|w| (w.len(), (*w).clone()))
        .cloned();
    EquivResult {
        equal: counterexample.is_none(),
        counterexample,
        bound,
    }
}

/// Configuration for the seeded generators. Generation is a pure function
/// of the configuration, including the seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub max_states: usize,
    pub max_rules: usize,
    pub max_segment_len: usize,
    pub alphabet_size: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_states: 4,
            max_rules: 6,
            max_segment_len: 2,
            alphabet_size: 3,
            seed: 0,
        }
    }
}

/// splitmix64; tiny, stable, and dependency-free
struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(seed.wrapping_add(0x9e3779b97f4a7c15))
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n.max(1) as u64) as usize
    }
}

fn gen_states(rng: &mut Rng, cfg: &GenConfig) -> Vec<StateId> {
    let count = 1 + rng.below(cfg.max_states.max(1));
    (0..count).map(|i| StateId::new(format!("q{}", i))).collect()
}

fn gen_alphabet(cfg: &GenConfig) -> Vec<Symbol> {
    (0..cfg.alphabet_size.max(1))
        .map(|i| Symbol::new(((b'a' + (i % 26) as u8) as char).to_string()))
        .collect()
}

fn gen_word(rng: &mut Rng, alphabet: &[Symbol], len: usize) -> Word {
    (0..len).map(|_| alphabet[rng.below(alphabet.len())].clone()).collect()
}

/// A random machine: rule patterns sampled uniformly over the left, right,
/// and neutral forms with segment lengths up to the configured maximum. At
/// least one final state is always included.
pub fn random_gfa(cfg: &GenConfig) -> Ietwgfa {
    let mut rng = Rng::new(cfg.seed);
    let states = gen_states(&mut rng, cfg);
    let alphabet = gen_alphabet(cfg);
    let rule_count = rng.below(cfg.max_rules + 1);
    let mut rules = Vec::new();
    for _ in 0..rule_count {
        let source = states[rng.below(states.len())].clone();
        let target = states[rng.below(states.len())].clone();
        match rng.below(3) {
            0 => rules.push(Rule::epsilon(source, target)),
            1 => {
                let len = 1 + rng.below(cfg.max_segment_len.max(1));
                rules.push(Rule::left(gen_word(&mut rng, &alphabet, len), source, target));
            }
            _ => {
                let len = 1 + rng.below(cfg.max_segment_len.max(1));
                rules.push(Rule::right(source, gen_word(&mut rng, &alphabet, len), target));
            }
        }
    }
    let mut finals = vec![states[rng.below(states.len())].clone()];
    for q in &states {
        if rng.below(4) == 0 && !finals.contains(q) {
            finals.push(q.clone());
        }
    }
    Ietwgfa {
        start: states[0].clone(),
        states,
        alphabet,
        rules,
        finals,
    }
}

/// A random ε-free simple machine: every rule reads exactly one symbol.
pub fn random_efree_sfa(cfg: &GenConfig) -> Ietwgfa {
    let mut rng = Rng::new(cfg.seed ^ 0x5f5f_5f5f);
    let states = gen_states(&mut rng, cfg);
    let alphabet = gen_alphabet(cfg);
    let rule_count = rng.below(cfg.max_rules + 1);
    let mut rules = Vec::new();
    for _ in 0..rule_count {
        let source = states[rng.below(states.len())].clone();
        let target = states[rng.below(states.len())].clone();
        let read = gen_word(&mut rng, &alphabet, 1);
        if rng.below(2) == 0 {
            rules.push(Rule::left(read, source, target));
        } else {
            rules.push(Rule::right(source, read, target));
        }
    }
    let finals = vec![states[rng.below(states.len())].clone()];
    Ietwgfa {
        start: states[0].clone(),
        states,
        alphabet,
        rules,
        finals,
    }
}

fn gen_grammar(cfg: &GenConfig, even: bool) -> LinearGrammar {
    let mut rng = Rng::new(cfg.seed ^ if even { 0xe4e4_e4e4 } else { 0x1111_2222 });
    let count = 1 + rng.below(cfg.max_states.max(1));
    let nonterminals: Vec<NonterminalId> = (0..count)
        .map(|i| NonterminalId::new(format!("N{}", i)))
        .collect();
    let terminals = gen_alphabet(cfg);
    let rule_count = rng.below(cfg.max_rules + 1);
    let mut rules = Vec::new();
    for _ in 0..rule_count {
        let lhs = nonterminals[rng.below(nonterminals.len())].clone();
        if rng.below(3) == 0 {
            let len = rng.below(cfg.max_segment_len + 1);
            rules.push(LgRule::terminal(lhs, gen_word(&mut rng, &terminals, len)));
        } else {
            let mid = nonterminals[rng.below(nonterminals.len())].clone();
            let x = rng.below(cfg.max_segment_len + 1);
            let y = if even { x } else { rng.below(cfg.max_segment_len + 1) };
            let prefix = gen_word(&mut rng, &terminals, x);
            let suffix = gen_word(&mut rng, &terminals, y);
            rules.push(LgRule::nonterminal(lhs, prefix, mid, suffix));
        }
    }
    LinearGrammar {
        start: nonterminals[0].clone(),
        nonterminals,
        terminals,
        rules,
    }
}

/// A random linear grammar.
pub fn random_lg(cfg: &GenConfig) -> LinearGrammar {
    gen_grammar(cfg, false)
}

/// A random even linear grammar.
pub fn random_elg(cfg: &GenConfig) -> LinearGrammar {
    gen_grammar(cfg, true)
}

/// A random ε-free NFA with at least one final state.
pub fn random_nfa(cfg: &GenConfig) -> Nfa {
    let mut rng = Rng::new(cfg.seed ^ 0xabcd_ef01);
    let states = gen_states(&mut rng, cfg);
    let alphabet = gen_alphabet(cfg);
    let rule_count = rng.below(cfg.max_rules + 1);
    let mut rules = Vec::new();
    for _ in 0..rule_count {
        rules.push(NfaRule {
            from: states[rng.below(states.len())].clone(),
            symbol: Some(alphabet[rng.below(alphabet.len())].clone()),
            to: states[rng.below(states.len())].clone(),
        });
    }
    let finals = vec![states[rng.below(states.len())].clone()];
    Nfa {
        start: states[0].clone(),
        states,
        alphabet,
        rules,
        finals,
    }
}
