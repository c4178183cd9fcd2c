//! Linear and even-linear grammars, membership by substring dynamic
//! programming, and bounded enumeration.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::automata::{words_up_to, ForeignSymbol, Symbol, Violation, Word};

/// A nonterminal name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonterminalId(Arc<str>);

impl NonterminalId {
    pub fn new(name: impl AsRef<str>) -> Self {
        NonterminalId(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NonterminalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NonterminalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NonterminalId({})", self.0)
    }
}

/// A linear rule `lhs -> prefix mid suffix`. Terminal rules `A -> x` store
/// the whole terminal string in `prefix` with `mid = None` and empty suffix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LgRule {
    pub lhs: NonterminalId,
    pub prefix: Word,
    pub mid: Option<NonterminalId>,
    pub suffix: Word,
}

impl LgRule {
    pub fn terminal(lhs: NonterminalId, word: Word) -> Self {
        LgRule {
            lhs,
            prefix: word,
            mid: None,
            suffix: Vec::new(),
        }
    }

    pub fn nonterminal(lhs: NonterminalId, prefix: Word, mid: NonterminalId, suffix: Word) -> Self {
        LgRule {
            lhs,
            prefix,
            mid: Some(mid),
            suffix,
        }
    }
}

impl fmt::Display for LgRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for s in &self.prefix {
            write!(f, " {}", s)?;
        }
        if let Some(mid) = &self.mid {
            write!(f, " {}", mid)?;
            for s in &self.suffix {
                write!(f, " {}", s)?;
            }
        } else if self.prefix.is_empty() {
            write!(f, " _")?;
        }
        Ok(())
    }
}

/// A linear grammar: at most one nonterminal on any right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearGrammar {
    pub nonterminals: Vec<NonterminalId>,
    pub terminals: Vec<Symbol>,
    pub rules: Vec<LgRule>,
    pub start: NonterminalId,
}

/// Result of the even-linear check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLinearWitness {
    pub even: bool,
    /// Index of a rule with `mid` present and unequal flank lengths.
    pub offending_rule: Option<usize>,
}

impl LinearGrammar {
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        if self.nonterminals.is_empty() {
            report.push(Violation("nonterminal set is empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in &self.nonterminals {
            if !seen.insert(n.as_str()) {
                report.push(Violation(format!("duplicate nonterminal {}", n)));
            }
            if !crate::automata::is_token(n.as_str()) {
                report.push(Violation(format!(
                    "nonterminal {:?} is not a printable token",
                    n.as_str()
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for t in &self.terminals {
            if !seen.insert(t.as_str()) {
                report.push(Violation(format!("duplicate terminal {}", t)));
            }
            if !crate::automata::is_token(t.as_str()) {
                report.push(Violation(format!(
                    "terminal {:?} is not a printable token",
                    t.as_str()
                )));
            }
        }
        for n in &self.nonterminals {
            if self.terminals.iter().any(|t| t.as_str() == n.as_str()) {
                report.push(Violation(format!(
                    "disjointness: {} is declared as both nonterminal and terminal",
                    n
                )));
            }
        }
        let declared: std::collections::HashSet<&str> =
            self.nonterminals.iter().map(NonterminalId::as_str).collect();
        let terminals: std::collections::HashSet<&str> =
            self.terminals.iter().map(Symbol::as_str).collect();
        if !declared.contains(self.start.as_str()) {
            report.push(Violation(format!("start nonterminal {} is not declared", self.start)));
        }
        for (i, r) in self.rules.iter().enumerate() {
            if !declared.contains(r.lhs.as_str()) {
                report.push(Violation(format!("rule {}: undeclared nonterminal {}", i, r.lhs)));
            }
            if let Some(mid) = &r.mid {
                if !declared.contains(mid.as_str()) {
                    report.push(Violation(format!("rule {}: undeclared nonterminal {}", i, mid)));
                }
            } else if !r.suffix.is_empty() {
                report.push(Violation(format!(
                    "rule {}: terminal rule carries a suffix",
                    i
                )));
            }
            for t in r.prefix.iter().chain(r.suffix.iter()) {
                if !terminals.contains(t.as_str()) {
                    report.push(Violation(format!("rule {}: undeclared terminal {}", i, t)));
                }
            }
        }
        report
    }

    /// Even-linear: every rule with a middle nonterminal has flanking
    /// terminal strings of equal length.
    pub fn is_even_linear(&self) -> EvenLinearWitness {
        for (i, r) in self.rules.iter().enumerate() {
            if r.mid.is_some() && r.prefix.len() != r.suffix.len() {
                return EvenLinearWitness {
                    even: false,
                    offending_rule: Some(i),
                };
            }
        }
        EvenLinearWitness {
            even: true,
            offending_rule: None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cell {
    InProgress,
    Proved(bool),
}

struct Membership<'g, 'w> {
    g: &'g LinearGrammar,
    word: &'w [Symbol],
    nt_index: HashMap<&'g str, usize>,
    memo: HashMap<(usize, usize, usize), Cell>,
}

impl<'g, 'w> Membership<'g, 'w> {
    /// Does `nt` derive `word[i..j)`? Cells that conclude while one of their
    /// dependencies is still in progress contribute `false` at that point and
    /// are left uncached, so other rule paths can re-derive them; cells
    /// proved true are cached unconditionally. This realizes the least
    /// fixpoint of the derivation relation and terminates on unit cycles.
    fn derives(&mut self, i: usize, j: usize, nt: usize) -> (bool, bool) {
        match self.memo.get(&(i, j, nt)) {
            Some(Cell::Proved(v)) => return (*v, false),
            Some(Cell::InProgress) => return (false, true),
            None => {}
        }
        self.memo.insert((i, j, nt), Cell::InProgress);
        let mut tainted = false;
        let mut result = false;
        for rule in self.g.rules.iter() {
            if self.nt_index[rule.lhs.as_str()] != nt {
                continue;
            }
            let span = &self.word[i..j];
            if let Some(mid) = &rule.mid {
                if rule.prefix.len() + rule.suffix.len() > span.len() {
                    continue;
                }
                if !span.starts_with(&rule.prefix) || !span.ends_with(&rule.suffix) {
                    continue;
                }
                let mid = self.nt_index[mid.as_str()];
                let (inner, t) =
                    self.derives(i + rule.prefix.len(), j - rule.suffix.len(), mid);
                tainted |= t;
                if inner {
                    result = true;
                    break;
                }
            } else if span == rule.prefix.as_slice() {
                result = true;
                break;
            }
        }
        if result {
            self.memo.insert((i, j, nt), Cell::Proved(true));
            (true, false)
        } else if tainted {
            self.memo.remove(&(i, j, nt));
            (false, true)
        } else {
            self.memo.insert((i, j, nt), Cell::Proved(false));
            (false, false)
        }
    }
}

/// Does the start nonterminal derive `word`?
pub fn lg_accepts(g: &LinearGrammar, word: &[Symbol]) -> Result<bool, ForeignSymbol> {
    for a in word {
        if !g.terminals.contains(a) {
            return Err(ForeignSymbol(a.clone()));
        }
    }
    let nt_index: HashMap<&str, usize> = g
        .nonterminals
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let start = nt_index[g.start.as_str()];
    let mut search = Membership {
        g,
        word,
        nt_index,
        memo: HashMap::new(),
    };
    Ok(search.derives(0, word.len(), start).0)
}

/// Exactly the generated words of length at most `max_len`.
pub fn lg_enumerate(g: &LinearGrammar, max_len: usize) -> BTreeSet<Word> {
    words_up_to(&g.terminals, max_len)
        .into_iter()
        .filter(|w| lg_accepts(g, w).expect("words drawn from the grammar's terminals"))
        .collect()
}
