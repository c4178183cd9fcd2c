//! Value types for symbols, rules, input-erasing two-way automata, and
//! classical one-way NFAs, plus structural validation and classification.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

/// An input symbol. Distinct names denote distinct symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: impl AsRef<str>) -> Self {
        Symbol(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", self.0)
    }
}

/// A state name. Composite states produced by constructions render as
/// bracketed strings such as `<a.q.b.L>` so they stay printable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(Arc<str>);

impl StateId {
    pub fn new(name: impl AsRef<str>) -> Self {
        StateId(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateId({})", self.0)
    }
}

/// A word over some alphabet.
pub type Word = Vec<Symbol>;

/// Renders a word with symbols joined by nothing; the empty word prints `_`.
pub fn display_word(w: &[Symbol]) -> String {
    if w.is_empty() {
        "_".to_string()
    } else {
        w.iter().map(Symbol::as_str).collect()
    }
}

/// All words over `alphabet` of length at most `max_len`, shortest first.
pub fn words_up_to(alphabet: &[Symbol], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::new()];
    let mut layer: Vec<Word> = vec![Word::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in alphabet {
                let mut v = w.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Reading direction of a rule. Rules that read nothing are neutral: the
/// defining left and right forms coincide when the read string is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Left,
    Right,
    Neutral,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum RuleForm {
    /// `x q -> target`: erases `x` immediately left of the head.
    Left { read: Word, from: StateId },
    /// `q x -> target`: erases `x` immediately right of the head.
    Right { from: StateId, read: Word },
    /// `q -> target`: reads nothing.
    Epsilon { from: StateId },
}

/// A rule of an input-erasing two-way automaton. Construction canonicalizes
/// the two empty-read forms to a single neutral representation, so
/// `Rule::left(ε, q, p)` and `Rule::right(q, ε, p)` compare and hash equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rule {
    form: RuleForm,
    target: StateId,
}

impl Rule {
    pub fn left(read: Word, from: StateId, target: StateId) -> Self {
        let form = if read.is_empty() {
            RuleForm::Epsilon { from }
        } else {
            RuleForm::Left { read, from }
        };
        Rule { form, target }
    }

    pub fn right(from: StateId, read: Word, target: StateId) -> Self {
        let form = if read.is_empty() {
            RuleForm::Epsilon { from }
        } else {
            RuleForm::Right { from, read }
        };
        Rule { form, target }
    }

    pub fn epsilon(from: StateId, target: StateId) -> Self {
        Rule {
            form: RuleForm::Epsilon { from },
            target,
        }
    }

    /// The state on the pattern side of the rule.
    pub fn source(&self) -> &StateId {
        match &self.form {
            RuleForm::Left { from, .. }
            | RuleForm::Right { from, .. }
            | RuleForm::Epsilon { from } => from,
        }
    }

    /// The state the rule rewrites to.
    pub fn target(&self) -> &StateId {
        &self.target
    }

    /// The symbols the rule erases; empty for neutral rules.
    pub fn read(&self) -> &[Symbol] {
        match &self.form {
            RuleForm::Left { read, .. } | RuleForm::Right { read, .. } => read,
            RuleForm::Epsilon { .. } => &[],
        }
    }

    pub fn direction(&self) -> Direction {
        match &self.form {
            RuleForm::Left { .. } => Direction::Left,
            RuleForm::Right { .. } => Direction::Right,
            RuleForm::Epsilon { .. } => Direction::Neutral,
        }
    }

    /// Length of the whole left-hand side (read string plus the state).
    pub fn lhs_len(&self) -> usize {
        self.read().len() + 1
    }

    pub fn is_epsilon(&self) -> bool {
        matches!(self.form, RuleForm::Epsilon { .. })
    }

    /// A rule is simple when its left-hand side has length at most two,
    /// i.e. it reads at most one symbol.
    pub fn is_simple(&self) -> bool {
        self.lhs_len() <= 2
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            RuleForm::Left { read, from } => {
                for s in read {
                    write!(f, "{} ", s)?;
                }
                write!(f, "{} -> {}", from, self.target)
            }
            RuleForm::Right { from, read } => {
                write!(f, "{}", from)?;
                for s in read {
                    write!(f, " {}", s)?;
                }
                write!(f, " -> {}", self.target)
            }
            RuleForm::Epsilon { from } => write!(f, "{} -> {}", from, self.target),
        }
    }
}

/// An input-erasing two-way general finite automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ietwgfa {
    pub states: Vec<StateId>,
    pub alphabet: Vec<Symbol>,
    pub rules: Vec<Rule>,
    pub start: StateId,
    pub finals: Vec<StateId>,
}

/// Structural facts about a machine's rule set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub simple: bool,
    pub epsilon_free: bool,
    /// Maximum left-hand-side length over all rules; 0 for an empty rule set.
    pub max_lhs_len: usize,
}

/// A structural violation found by validation. Violations are data, not
/// failures; an empty report means the object is well formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Names must be non-empty and whitespace-free so they print as single
/// tokens and survive a format round trip. `_` is reserved for the empty
/// word.
pub(crate) fn is_token(name: &str) -> bool {
    !name.is_empty() && name != "_" && !name.chars().any(char::is_whitespace)
}

fn check_name_sets(
    states: &[StateId],
    symbols: &[Symbol],
    report: &mut Vec<Violation>,
    state_word: &str,
) {
    if states.is_empty() {
        report.push(Violation(format!("{} set is empty", state_word)));
    }
    if symbols.is_empty() {
        report.push(Violation("alphabet is empty".into()));
    }
    let mut seen = HashSet::new();
    for q in states {
        if !seen.insert(q.as_str()) {
            report.push(Violation(format!("duplicate {} {}", state_word, q)));
        }
        if !is_token(q.as_str()) {
            report.push(Violation(format!(
                "{} {:?} is not a printable token",
                state_word,
                q.as_str()
            )));
        }
    }
    let mut seen = HashSet::new();
    for a in symbols {
        if !seen.insert(a.as_str()) {
            report.push(Violation(format!("duplicate symbol {}", a)));
        }
        if !is_token(a.as_str()) {
            report.push(Violation(format!("symbol {:?} is not a printable token", a.as_str())));
        }
    }
    for q in states {
        if symbols.iter().any(|a| a.as_str() == q.as_str()) {
            report.push(Violation(format!(
                "disjointness: {} is declared as both {} and symbol",
                q, state_word
            )));
        }
    }
}

impl Ietwgfa {
    pub fn classify(&self) -> Classification {
        Classification {
            simple: self.rules.iter().all(Rule::is_simple),
            epsilon_free: !self.rules.iter().any(Rule::is_epsilon),
            max_lhs_len: self.rules.iter().map(Rule::lhs_len).max().unwrap_or(0),
        }
    }

    pub fn is_final(&self, q: &StateId) -> bool {
        self.finals.contains(q)
    }

    /// Checks every definitional constraint; an empty report means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        check_name_sets(&self.states, &self.alphabet, &mut report, "state");
        let declared: HashSet<&str> = self.states.iter().map(StateId::as_str).collect();
        let symbols: HashSet<&str> = self.alphabet.iter().map(Symbol::as_str).collect();
        if !declared.contains(self.start.as_str()) {
            report.push(Violation(format!("start state {} is not declared", self.start)));
        }
        for f in &self.finals {
            if !declared.contains(f.as_str()) {
                report.push(Violation(format!("final state {} is not declared", f)));
            }
        }
        for (i, r) in self.rules.iter().enumerate() {
            for q in [r.source(), r.target()] {
                if !declared.contains(q.as_str()) {
                    report.push(Violation(format!("rule {}: undeclared state {}", i, q)));
                }
            }
            for a in r.read() {
                if !symbols.contains(a.as_str()) {
                    report.push(Violation(format!("rule {}: undeclared symbol {}", i, a)));
                }
            }
        }
        report
    }
}

/// One transition of a classical NFA; `symbol: None` is an ε-transition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NfaRule {
    pub from: StateId,
    pub symbol: Option<Symbol>,
    pub to: StateId,
}

/// A classical one-way nondeterministic finite automaton with optional
/// ε-transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    pub states: Vec<StateId>,
    pub alphabet: Vec<Symbol>,
    pub rules: Vec<NfaRule>,
    pub start: StateId,
    pub finals: Vec<StateId>,
}

/// A word contained a symbol outside the automaton's alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForeignSymbol(pub Symbol);

impl fmt::Display for ForeignSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "symbol {} is not in the alphabet", self.0)
    }
}

impl std::error::Error for ForeignSymbol {}

impl Nfa {
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        check_name_sets(&self.states, &self.alphabet, &mut report, "state");
        let declared: HashSet<&str> = self.states.iter().map(StateId::as_str).collect();
        let symbols: HashSet<&str> = self.alphabet.iter().map(Symbol::as_str).collect();
        if !declared.contains(self.start.as_str()) {
            report.push(Violation(format!("start state {} is not declared", self.start)));
        }
        for f in &self.finals {
            if !declared.contains(f.as_str()) {
                report.push(Violation(format!("final state {} is not declared", f)));
            }
        }
        for (i, r) in self.rules.iter().enumerate() {
            for q in [&r.from, &r.to] {
                if !declared.contains(q.as_str()) {
                    report.push(Violation(format!("rule {}: undeclared state {}", i, q)));
                }
            }
            if let Some(a) = &r.symbol {
                if !symbols.contains(a.as_str()) {
                    report.push(Violation(format!("rule {}: undeclared symbol {}", i, a)));
                }
            }
        }
        report
    }

    pub fn is_epsilon_free(&self) -> bool {
        self.rules.iter().all(|r| r.symbol.is_some())
    }

    fn state_index(&self, q: &StateId) -> usize {
        self.states.iter().position(|s| s == q).expect("declared state")
    }

    fn closure(&self, set: &mut HashSet<usize>) {
        let mut queue: VecDeque<usize> = set.iter().copied().collect();
        while let Some(i) = queue.pop_front() {
            for r in &self.rules {
                if r.symbol.is_none() && self.state_index(&r.from) == i {
                    let j = self.state_index(&r.to);
                    if set.insert(j) {
                        queue.push_back(j);
                    }
                }
            }
        }
    }

    /// Standard subset stepping with ε-closure.
    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, ForeignSymbol> {
        for a in word {
            if !self.alphabet.contains(a) {
                return Err(ForeignSymbol(a.clone()));
            }
        }
        let mut current: HashSet<usize> = HashSet::new();
        current.insert(self.state_index(&self.start));
        self.closure(&mut current);
        for a in word {
            let mut next = HashSet::new();
            for r in &self.rules {
                if r.symbol.as_ref() == Some(a) && current.contains(&self.state_index(&r.from)) {
                    next.insert(self.state_index(&r.to));
                }
            }
            self.closure(&mut next);
            current = next;
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(self
            .finals
            .iter()
            .any(|f| current.contains(&self.state_index(f))))
    }

    /// Exactly the accepted words of length at most `max_len`.
    pub fn enumerate(&self, max_len: usize) -> BTreeSet<Word> {
        words_up_to(&self.alphabet, max_len)
            .into_iter()
            .filter(|w| self.accepts(w).unwrap_or(false))
            .collect()
    }
}
