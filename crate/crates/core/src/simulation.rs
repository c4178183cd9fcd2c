//! Membership, witness traces, and bounded language enumeration for
//! input-erasing two-way automata under the four computation modes.
//!
//! A run on a word `w` starts at some split `k` with the whole word unread:
//! the configuration keeps the unread prefix `w[0..left_end)` and unread
//! suffix `w[right_start..)`; the erased middle grows outward move by move.
//! Acceptance means the whole word is erased and a final state is reached in
//! an accepting phase. Membership is breadth-first reachability over the
//! finite configuration/phase graph; the visited set makes ε-cycles finite.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::automata::{Direction, ForeignSymbol, Ietwgfa, Rule, StateId, Symbol, Word};

/// The four computation modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    General,
    Alternating,
    Even,
    InitEven,
}

/// A direction assigned to a move. Rules that read symbols carry their own
/// direction; neutral rules may be assigned either one, and both assignments
/// are explored where the mode distinguishes them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Left,
    Right,
}

impl Dir {
    pub fn opposite(self) -> Dir {
        match self {
            Dir::Left => Dir::Right,
            Dir::Right => Dir::Left,
        }
    }
}

/// Position within the even-mode pairing discipline: either between pairs or
/// mid-pair, remembering how many symbols the opening move read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairPos {
    Between,
    Mid(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EvenPhase {
    pub pos: PairPos,
    pub last: Option<Dir>,
}

impl EvenPhase {
    fn fresh() -> Self {
        EvenPhase {
            pos: PairPos::Between,
            last: None,
        }
    }

    fn step(self, dir: Dir, read: usize) -> Option<EvenPhase> {
        if self.last == Some(dir) {
            return None;
        }
        let pos = match self.pos {
            PairPos::Between => PairPos::Mid(read),
            PairPos::Mid(n) if n == read => PairPos::Between,
            PairPos::Mid(_) => return None,
        };
        Some(EvenPhase {
            pos,
            last: Some(dir),
        })
    }
}

/// Mode bookkeeping carried by a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    General,
    Alternating(Option<Dir>),
    Even(EvenPhase),
    /// `None` until the unconstrained first move has been made.
    InitEven(Option<EvenPhase>),
}

impl Phase {
    pub fn initial(mode: Mode) -> Phase {
        match mode {
            Mode::General => Phase::General,
            Mode::Alternating => Phase::Alternating(None),
            Mode::Even => Phase::Even(EvenPhase::fresh()),
            Mode::InitEven => Phase::InitEven(None),
        }
    }

    /// Advance the phase by one move of assigned direction `dir` reading
    /// `read` symbols; `None` if the move violates the mode.
    pub fn step(self, dir: Dir, read: usize) -> Option<Phase> {
        match self {
            Phase::General => Some(Phase::General),
            Phase::Alternating(last) => {
                if last == Some(dir) {
                    None
                } else {
                    Some(Phase::Alternating(Some(dir)))
                }
            }
            Phase::Even(e) => e.step(dir, read).map(Phase::Even),
            // The first move of an initialized even computation is free; the
            // even part that follows starts with a fresh direction history.
            Phase::InitEven(None) => Some(Phase::InitEven(Some(EvenPhase::fresh()))),
            Phase::InitEven(Some(e)) => e.step(dir, read).map(|e| Phase::InitEven(Some(e))),
        }
    }

    /// Whether a computation may stop and accept in this phase.
    pub fn accepting(self) -> bool {
        match self {
            Phase::General | Phase::Alternating(_) => true,
            Phase::Even(e) => e.pos == PairPos::Between,
            Phase::InitEven(Some(e)) => e.pos == PairPos::Between,
            Phase::InitEven(None) => false,
        }
    }
}

/// A configuration of a run over a fixed word: the unread tape is
/// `word[0..left_end)` followed by `word[right_start..)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration<'w> {
    pub word: &'w [Symbol],
    pub left_end: usize,
    pub right_start: usize,
    pub state: StateId,
    pub phase: Phase,
}

impl<'w> Configuration<'w> {
    pub fn at_split(word: &'w [Symbol], split: usize, start: StateId, mode: Mode) -> Self {
        assert!(split <= word.len());
        Configuration {
            word,
            left_end: split,
            right_start: split,
            state: start,
            phase: Phase::initial(mode),
        }
    }

    /// Whole word erased.
    pub fn tape_empty(&self) -> bool {
        self.left_end == 0 && self.right_start == self.word.len()
    }
}

/// Why a single move application was rejected. Rejections are ordinary
/// outcomes during exploration, not failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    StateMismatch,
    DirectionMismatch,
    PatternMismatch,
    PhaseViolation,
}

/// Apply one rule to a configuration with an assigned direction.
pub fn apply_rule<'w>(
    c: &Configuration<'w>,
    rule: &Rule,
    dir: Dir,
) -> Result<Configuration<'w>, Rejection> {
    if rule.source() != &c.state {
        return Err(Rejection::StateMismatch);
    }
    match (rule.direction(), dir) {
        (Direction::Left, Dir::Right) | (Direction::Right, Dir::Left) => {
            return Err(Rejection::DirectionMismatch)
        }
        _ => {}
    }
    let read = rule.read();
    let (left_end, right_start) = if read.is_empty() {
        (c.left_end, c.right_start)
    } else {
        match dir {
            Dir::Left => {
                if c.left_end < read.len() || &c.word[c.left_end - read.len()..c.left_end] != read
                {
                    return Err(Rejection::PatternMismatch);
                }
                (c.left_end - read.len(), c.right_start)
            }
            Dir::Right => {
                if c.right_start + read.len() > c.word.len()
                    || &c.word[c.right_start..c.right_start + read.len()] != read
                {
                    return Err(Rejection::PatternMismatch);
                }
                (c.left_end, c.right_start + read.len())
            }
        }
    };
    let phase = c.phase.step(dir, read.len()).ok_or(Rejection::PhaseViolation)?;
    Ok(Configuration {
        word: c.word,
        left_end,
        right_start,
        state: rule.target().clone(),
        phase,
    })
}

/// One replayable move of a witness trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule_index: usize,
    pub dir: Dir,
    pub read: Word,
}

/// A witness for acceptance: the initial split plus the moves taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub split: usize,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    /// Replay through `apply_rule`; returns the final configuration.
    pub fn replay<'w>(
        &self,
        m: &Ietwgfa,
        word: &'w [Symbol],
        mode: Mode,
    ) -> Result<Configuration<'w>, Rejection> {
        let mut c = Configuration::at_split(word, self.split, m.start.clone(), mode);
        for step in &self.steps {
            c = apply_rule(&c, &m.rules[step.rule_index], step.dir)?;
        }
        Ok(c)
    }
}

fn check_word(m: &Ietwgfa, word: &[Symbol]) -> Result<(), ForeignSymbol> {
    for a in word {
        if !m.alphabet.contains(a) {
            return Err(ForeignSymbol(a.clone()));
        }
    }
    Ok(())
}

fn candidate_dirs(rule: &Rule) -> &'static [Dir] {
    match rule.direction() {
        Direction::Left => &[Dir::Left],
        Direction::Right => &[Dir::Right],
        Direction::Neutral => &[Dir::Left, Dir::Right],
    }
}

type Key = (usize, usize, usize, Phase);

struct Search<'m, 'w> {
    m: &'m Ietwgfa,
    word: &'w [Symbol],
    state_index: HashMap<&'m str, usize>,
    /// rule indices grouped by source state index
    by_source: Vec<Vec<usize>>,
}

impl<'m, 'w> Search<'m, 'w> {
    fn new(m: &'m Ietwgfa, word: &'w [Symbol]) -> Self {
        let state_index: HashMap<&str, usize> = m
            .states
            .iter()
            .enumerate()
            .map(|(i, q)| (q.as_str(), i))
            .collect();
        let mut by_source = vec![Vec::new(); m.states.len()];
        for (i, r) in m.rules.iter().enumerate() {
            by_source[state_index[r.source().as_str()]].push(i);
        }
        Search {
            m,
            word,
            state_index,
            by_source,
        }
    }

    fn key(&self, c: &Configuration) -> Key {
        (
            c.left_end,
            c.right_start,
            self.state_index[c.state.as_str()],
            c.phase,
        )
    }

    fn accepting(&self, c: &Configuration) -> bool {
        c.tape_empty() && c.phase.accepting() && self.m.is_final(&c.state)
    }

    /// Breadth-first search from every split, in split order. Returns the
    /// first accepting configuration's key and the parent links needed to
    /// rebuild the move sequence.
    fn run(&self, mode: Mode) -> Option<(Key, HashMap<Key, (Key, usize, Dir)>, HashMap<Key, usize>)> {
        let mut parents: HashMap<Key, (Key, usize, Dir)> = HashMap::new();
        let mut seed_split: HashMap<Key, usize> = HashMap::new();
        let mut visited: HashSet<Key> = HashSet::new();
        let mut queue: VecDeque<Configuration> = VecDeque::new();
        for split in 0..=self.word.len() {
            let c = Configuration::at_split(self.word, split, self.m.start.clone(), mode);
            let k = self.key(&c);
            if visited.insert(k) {
                seed_split.insert(k, split);
                if self.accepting(&c) {
                    return Some((k, parents, seed_split));
                }
                queue.push_back(c);
            }
        }
        while let Some(c) = queue.pop_front() {
            let ck = self.key(&c);
            for &ri in &self.by_source[ck.2] {
                let rule = &self.m.rules[ri];
                for &dir in candidate_dirs(rule) {
                    if let Ok(next) = apply_rule(&c, rule, dir) {
                        let nk = self.key(&next);
                        if visited.insert(nk) {
                            parents.insert(nk, (ck, ri, dir));
                            if self.accepting(&next) {
                                return Some((nk, parents, seed_split));
                            }
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        None
    }
}

/// Decide membership of `word` in the machine's language under `mode`.
pub fn accepts(m: &Ietwgfa, word: &[Symbol], mode: Mode) -> Result<bool, ForeignSymbol> {
    check_word(m, word)?;
    Ok(Search::new(m, word).run(mode).is_some())
}

/// Membership with the initial split fixed: decides `u s v ⇒* f` for
/// `u = word[..split]`, `v = word[split..]`.
pub fn accepts_with_split(
    m: &Ietwgfa,
    word: &[Symbol],
    split: usize,
    mode: Mode,
) -> Result<bool, ForeignSymbol> {
    check_word(m, word)?;
    assert!(split <= word.len());
    let search = Search::new(m, word);
    let mut visited: HashSet<Key> = HashSet::new();
    let mut queue = VecDeque::new();
    let c = Configuration::at_split(word, split, m.start.clone(), mode);
    visited.insert(search.key(&c));
    if search.accepting(&c) {
        return Ok(true);
    }
    queue.push_back(c);
    while let Some(c) = queue.pop_front() {
        let ck = search.key(&c);
        for &ri in &search.by_source[ck.2] {
            let rule = &m.rules[ri];
            for &dir in candidate_dirs(rule) {
                if let Ok(next) = apply_rule(&c, rule, dir) {
                    if visited.insert(search.key(&next)) {
                        if search.accepting(&next) {
                            return Ok(true);
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// A shortest accepting trace, if the word is accepted. Between equally
/// short computations, discovery order favors smaller splits, then smaller
/// rule indices, then Left assignments for neutral moves.
pub fn trace(m: &Ietwgfa, word: &[Symbol], mode: Mode) -> Result<Option<Trace>, ForeignSymbol> {
    check_word(m, word)?;
    let search = Search::new(m, word);
    let Some((accept_key, parents, seed_split)) = search.run(mode) else {
        return Ok(None);
    };
    let mut steps = Vec::new();
    let mut k = accept_key;
    while let Some(&(prev, ri, dir)) = parents.get(&k) {
        let rule = &m.rules[ri];
        steps.push(TraceStep {
            rule_index: ri,
            dir,
            read: rule.read().to_vec(),
        });
        k = prev;
    }
    steps.reverse();
    let split = seed_split[&k];
    Ok(Some(Trace { split, steps }))
}

/// Exactly the words over the machine's alphabet of length at most
/// `max_len` accepted under `mode`.
pub fn enumerate_language(m: &Ietwgfa, mode: Mode, max_len: usize) -> BTreeSet<Word> {
    crate::automata::words_up_to(&m.alphabet, max_len)
        .into_iter()
        .filter(|w| accepts(m, w, mode).expect("words drawn from the machine's alphabet"))
        .collect()
}
