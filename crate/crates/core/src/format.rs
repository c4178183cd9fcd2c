//! Line-based text format for machines, NFAs, grammars, and word lists.
//!
//! Documents open with a `type:` line followed by fixed header lines and
//! `rule:` lines. Rule patterns mirror the written notation: a left rule
//! `x… q -> p` lists its symbols before the state, a right rule `q x… -> p`
//! after it, and `q -> p` reads nothing. The parser tells the forms apart by
//! which token is a declared state. The token `_` denotes the empty string
//! where a word may be empty; composite construction states such as
//! `<a.q.b.L>` are single tokens and survive a round trip.
//!
//! Serialization is canonical: headers in a fixed order, rules in
//! declaration order, single spaces, trailing newline. `parse(serialize(x))`
//! is identity on every value this library produces.

use std::fmt;

use crate::automata::{Ietwgfa, Nfa, NfaRule, Rule, StateId, Symbol, Word};
use crate::grammar::{LgRule, LinearGrammar, NonterminalId};

/// A parse failure with a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Any document the format can hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Machine(Ietwgfa),
    Nfa(Nfa),
    Grammar(LinearGrammar),
    /// An explicit finite language, used as a restriction operand.
    Words(Vec<Word>),
}

impl Parsed {
    pub fn kind(&self) -> &'static str {
        match self {
            Parsed::Machine(_) => "ietwgfa",
            Parsed::Nfa(_) => "nfa",
            Parsed::Grammar(_) => "lg",
            Parsed::Words(_) => "words",
        }
    }

    pub fn serialize(&self) -> String {
        match self {
            Parsed::Machine(m) => serialize_machine(m),
            Parsed::Nfa(n) => serialize_nfa(n),
            Parsed::Grammar(g) => serialize_grammar(g),
            Parsed::Words(w) => serialize_words(w),
        }
    }
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    rest: &'a str,
    /// column where `rest` begins, for diagnostics
    rest_col: usize,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        message: message.into(),
    }
}

fn split_lines(text: &str) -> Result<Vec<Line<'_>>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let Some(colon) = line.find(':') else {
            return Err(err(number, 1, "expected `key: values`"));
        };
        let key = line[..colon].trim();
        if key.is_empty() || key.chars().any(char::is_whitespace) {
            return Err(err(number, 1, "expected `key: values`"));
        }
        out.push(Line {
            number,
            key,
            rest: &line[colon + 1..],
            rest_col: colon + 2,
        });
    }
    Ok(out)
}

fn tokens<'a>(line: &Line<'a>) -> Vec<(&'a str, usize)> {
    let mut out = Vec::new();
    let col = line.rest_col;
    let mut start = None;
    for (i, c) in line.rest.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((&line.rest[s..i], col + s));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((&line.rest[s..], col + s));
    }
    out
}

struct Parser<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    fn expect_key(&mut self, key: &str) -> Result<&Line<'a>, ParseError> {
        match self.lines.get(self.pos) {
            Some(line) if line.key == key => {
                self.pos += 1;
                Ok(&self.lines[self.pos - 1])
            }
            Some(line) => Err(err(
                line.number,
                1,
                format!("expected `{}:`, found `{}:`", key, line.key),
            )),
            None => Err(err(
                self.lines.last().map_or(1, |l| l.number + 1),
                1,
                format!("expected `{}:`", key),
            )),
        }
    }

    fn names(&mut self, key: &str) -> Result<Vec<(String, usize, usize)>, ParseError> {
        let line = self.expect_key(key)?;
        let number = line.number;
        let toks = tokens(line);
        let mut out = Vec::new();
        for (t, col) in toks {
            if t == "_" {
                return Err(err(number, col, "`_` is reserved for the empty word"));
            }
            out.push((t.to_string(), number, col));
        }
        Ok(out)
    }

    fn single_name(&mut self, key: &str) -> Result<String, ParseError> {
        let names = self.names(key)?;
        let line = self.lines[self.pos - 1].number;
        if names.len() != 1 {
            return Err(err(line, 1, format!("`{}:` takes exactly one name", key)));
        }
        Ok(names.into_iter().next().unwrap().0)
    }
}

fn check_declared(
    names: &[(String, usize, usize)],
    states: &std::collections::HashSet<&str>,
    what: &str,
) -> Result<(), ParseError> {
    for (name, line, col) in names {
        if !states.contains(name.as_str()) {
            return Err(err(*line, *col, format!("undeclared {} {}", what, name)));
        }
    }
    Ok(())
}

/// Parse a document. The `type:` line selects the kind.
pub fn parse_spec(text: &str) -> Result<Parsed, ParseError> {
    let lines = split_lines(text)?;
    if lines.is_empty() {
        return Err(err(1, 1, "empty document"));
    }
    let mut p = Parser { lines, pos: 0 };
    let kind = p.single_name("type")?;
    match kind.as_str() {
        "ietwgfa" => parse_machine(&mut p).map(Parsed::Machine),
        "nfa" => parse_nfa(&mut p).map(Parsed::Nfa),
        "lg" => parse_grammar(&mut p).map(Parsed::Grammar),
        "words" => parse_words(&mut p).map(Parsed::Words),
        other => Err(err(
            p.lines[0].number,
            p.lines[0].rest_col,
            format!("unknown kind `{}`", other),
        )),
    }
}

struct MachineHeader {
    states: Vec<StateId>,
    alphabet: Vec<Symbol>,
    start: StateId,
    finals: Vec<StateId>,
}

fn parse_machine_header(p: &mut Parser) -> Result<MachineHeader, ParseError> {
    let states = p.names("states")?;
    let alphabet = p.names("alphabet")?;
    let state_set: std::collections::HashSet<&str> =
        states.iter().map(|(n, _, _)| n.as_str()).collect();
    for (name, line, col) in &alphabet {
        if state_set.contains(name.as_str()) {
            return Err(err(
                *line,
                *col,
                format!("{} is declared as both state and symbol", name),
            ));
        }
    }
    let start = p.names("start")?;
    if start.len() != 1 {
        let line = p.lines[p.pos - 1].number;
        return Err(err(line, 1, "`start:` takes exactly one state"));
    }
    check_declared(&start, &state_set, "state")?;
    let finals = p.names("final")?;
    check_declared(&finals, &state_set, "state")?;
    Ok(MachineHeader {
        states: states.into_iter().map(|(n, _, _)| StateId::new(n)).collect(),
        alphabet: alphabet.into_iter().map(|(n, _, _)| Symbol::new(n)).collect(),
        start: StateId::new(start.into_iter().next().unwrap().0),
        finals: finals.into_iter().map(|(n, _, _)| StateId::new(n)).collect(),
    })
}

fn split_arrow<'a>(
    line: &Line<'a>,
) -> Result<(Vec<(&'a str, usize)>, Vec<(&'a str, usize)>), ParseError> {
    let toks = tokens(line);
    let Some(arrow) = toks.iter().position(|(t, _)| *t == "->") else {
        return Err(err(line.number, line.rest_col, "rule needs `->`"));
    };
    let lhs = toks[..arrow].to_vec();
    let rhs = toks[arrow + 1..].to_vec();
    Ok((lhs, rhs))
}

fn parse_machine(p: &mut Parser) -> Result<Ietwgfa, ParseError> {
    let header = parse_machine_header(p)?;
    let state_set: std::collections::HashSet<&str> =
        header.states.iter().map(StateId::as_str).collect();
    let symbol_set: std::collections::HashSet<&str> =
        header.alphabet.iter().map(Symbol::as_str).collect();
    let mut rules = Vec::new();
    while let Some(line) = p.peek() {
        if line.key != "rule" {
            return Err(err(line.number, 1, format!("unexpected `{}:`", line.key)));
        }
        let (lhs, rhs) = split_arrow(line)?;
        let number = line.number;
        let col = line.rest_col;
        p.pos += 1;
        if rhs.len() != 1 {
            return Err(err(number, col, "rule needs exactly one target state"));
        }
        let (target, tcol) = rhs[0];
        if !state_set.contains(target) {
            return Err(err(number, tcol, format!("undeclared state {}", target)));
        }
        let target = StateId::new(target);
        if lhs.is_empty() {
            return Err(err(number, col, "rule needs a pattern"));
        }
        let word = |toks: &[(&str, usize)]| -> Result<Word, ParseError> {
            let mut w = Word::new();
            for (t, c) in toks {
                if !symbol_set.contains(t) {
                    return Err(err(number, *c, format!("undeclared symbol {}", t)));
                }
                w.push(Symbol::new(*t));
            }
            Ok(w)
        };
        let rule = if lhs.len() == 1 {
            let (q, qcol) = lhs[0];
            if !state_set.contains(q) {
                return Err(err(number, qcol, format!("undeclared state {}", q)));
            }
            Rule::epsilon(StateId::new(q), target)
        } else if state_set.contains(lhs[0].0) {
            Rule::right(StateId::new(lhs[0].0), word(&lhs[1..])?, target)
        } else if state_set.contains(lhs[lhs.len() - 1].0) {
            let q = StateId::new(lhs[lhs.len() - 1].0);
            Rule::left(word(&lhs[..lhs.len() - 1])?, q, target)
        } else {
            return Err(err(
                number,
                col,
                "rule pattern needs a declared state at one end",
            ));
        };
        rules.push(rule);
    }
    Ok(Ietwgfa {
        states: header.states,
        alphabet: header.alphabet,
        rules,
        start: header.start,
        finals: header.finals,
    })
}

fn parse_nfa(p: &mut Parser) -> Result<Nfa, ParseError> {
    let header = parse_machine_header(p)?;
    let state_set: std::collections::HashSet<&str> =
        header.states.iter().map(StateId::as_str).collect();
    let symbol_set: std::collections::HashSet<&str> =
        header.alphabet.iter().map(Symbol::as_str).collect();
    let mut rules = Vec::new();
    while let Some(line) = p.peek() {
        if line.key != "rule" {
            return Err(err(line.number, 1, format!("unexpected `{}:`", line.key)));
        }
        let (lhs, rhs) = split_arrow(line)?;
        let number = line.number;
        let col = line.rest_col;
        p.pos += 1;
        if rhs.len() != 1 || !state_set.contains(rhs[0].0) {
            return Err(err(number, col, "rule needs exactly one declared target state"));
        }
        let to = StateId::new(rhs[0].0);
        match lhs.as_slice() {
            [(q, qcol)] => {
                if !state_set.contains(q) {
                    return Err(err(number, *qcol, format!("undeclared state {}", q)));
                }
                rules.push(NfaRule {
                    from: StateId::new(*q),
                    symbol: None,
                    to,
                });
            }
            [(q, qcol), (a, acol)] => {
                if !state_set.contains(q) {
                    return Err(err(number, *qcol, format!("undeclared state {}", q)));
                }
                if !symbol_set.contains(a) {
                    return Err(err(number, *acol, format!("undeclared symbol {}", a)));
                }
                rules.push(NfaRule {
                    from: StateId::new(*q),
                    symbol: Some(Symbol::new(*a)),
                    to,
                });
            }
            _ => return Err(err(number, col, "nfa rule pattern is `state [symbol]`")),
        }
    }
    Ok(Nfa {
        states: header.states,
        alphabet: header.alphabet,
        rules,
        start: header.start,
        finals: header.finals,
    })
}

fn parse_grammar(p: &mut Parser) -> Result<LinearGrammar, ParseError> {
    let nonterminals = p.names("nonterminals")?;
    let terminals = p.names("terminals")?;
    let nt_set: std::collections::HashSet<&str> =
        nonterminals.iter().map(|(n, _, _)| n.as_str()).collect();
    for (name, line, col) in &terminals {
        if nt_set.contains(name.as_str()) {
            return Err(err(
                *line,
                *col,
                format!("{} is declared as both nonterminal and terminal", name),
            ));
        }
    }
    let t_set: std::collections::HashSet<&str> =
        terminals.iter().map(|(n, _, _)| n.as_str()).collect();
    let start = p.single_name("start")?;
    if !nt_set.contains(start.as_str()) {
        let line = p.lines[p.pos - 1].number;
        return Err(err(line, 1, format!("undeclared nonterminal {}", start)));
    }
    let mut rules = Vec::new();
    while let Some(line) = p.peek() {
        if line.key != "rule" {
            return Err(err(line.number, 1, format!("unexpected `{}:`", line.key)));
        }
        let (lhs, rhs) = split_arrow(line)?;
        let number = line.number;
        let col = line.rest_col;
        p.pos += 1;
        if lhs.len() != 1 || !nt_set.contains(lhs[0].0) {
            return Err(err(number, col, "rule needs one declared nonterminal on the left"));
        }
        let lhs = NonterminalId::new(lhs[0].0);
        if rhs.len() == 1 && rhs[0].0 == "_" {
            rules.push(LgRule::terminal(lhs, Word::new()));
            continue;
        }
        let mut mid = None;
        let mut prefix = Word::new();
        let mut suffix = Word::new();
        for (t, c) in &rhs {
            if nt_set.contains(t) {
                if mid.is_some() {
                    return Err(err(number, *c, "more than one nonterminal on the right"));
                }
                mid = Some(NonterminalId::new(*t));
            } else if t_set.contains(t) {
                let part = if mid.is_some() { &mut suffix } else { &mut prefix };
                part.push(Symbol::new(*t));
            } else {
                return Err(err(number, *c, format!("undeclared identifier {}", t)));
            }
        }
        rules.push(match mid {
            Some(mid) => LgRule::nonterminal(lhs, prefix, mid, suffix),
            None => LgRule::terminal(lhs, prefix),
        });
    }
    Ok(LinearGrammar {
        nonterminals: nonterminals
            .into_iter()
            .map(|(n, _, _)| NonterminalId::new(n))
            .collect(),
        terminals: terminals.into_iter().map(|(n, _, _)| Symbol::new(n)).collect(),
        rules,
        start: NonterminalId::new(start),
    })
}

fn parse_words(p: &mut Parser) -> Result<Vec<Word>, ParseError> {
    let mut out = Vec::new();
    while let Some(line) = p.peek() {
        if line.key != "word" {
            return Err(err(line.number, 1, format!("unexpected `{}:`", line.key)));
        }
        let toks = tokens(line);
        let number = line.number;
        p.pos += 1;
        if toks.len() == 1 && toks[0].0 == "_" {
            out.push(Word::new());
            continue;
        }
        if toks.is_empty() {
            return Err(err(number, 1, "word line needs tokens or `_`"));
        }
        let mut w = Word::new();
        for (t, c) in toks {
            if t == "_" {
                return Err(err(number, c, "`_` must stand alone"));
            }
            w.push(Symbol::new(t));
        }
        out.push(w);
    }
    Ok(out)
}

fn push_names<T: AsRef<str>>(out: &mut String, key: &str, names: impl Iterator<Item = T>) {
    out.push_str(key);
    out.push(':');
    for n in names {
        out.push(' ');
        out.push_str(n.as_ref());
    }
    out.push('\n');
}

pub fn serialize_machine(m: &Ietwgfa) -> String {
    let mut out = String::new();
    push_names(&mut out, "type", ["ietwgfa"].into_iter());
    push_names(&mut out, "states", m.states.iter().map(StateId::as_str));
    push_names(&mut out, "alphabet", m.alphabet.iter().map(Symbol::as_str));
    push_names(&mut out, "start", [m.start.as_str()].into_iter());
    push_names(&mut out, "final", m.finals.iter().map(StateId::as_str));
    for r in &m.rules {
        out.push_str(&format!("rule: {}\n", r));
    }
    out
}

pub fn serialize_nfa(n: &Nfa) -> String {
    let mut out = String::new();
    push_names(&mut out, "type", ["nfa"].into_iter());
    push_names(&mut out, "states", n.states.iter().map(StateId::as_str));
    push_names(&mut out, "alphabet", n.alphabet.iter().map(Symbol::as_str));
    push_names(&mut out, "start", [n.start.as_str()].into_iter());
    push_names(&mut out, "final", n.finals.iter().map(StateId::as_str));
    for r in &n.rules {
        match &r.symbol {
            Some(a) => out.push_str(&format!("rule: {} {} -> {}\n", r.from, a, r.to)),
            None => out.push_str(&format!("rule: {} -> {}\n", r.from, r.to)),
        }
    }
    out
}

pub fn serialize_grammar(g: &LinearGrammar) -> String {
    let mut out = String::new();
    push_names(&mut out, "type", ["lg"].into_iter());
    push_names(
        &mut out,
        "nonterminals",
        g.nonterminals.iter().map(NonterminalId::as_str),
    );
    push_names(&mut out, "terminals", g.terminals.iter().map(Symbol::as_str));
    push_names(&mut out, "start", [g.start.as_str()].into_iter());
    for r in &g.rules {
        out.push_str(&format!("rule: {}\n", r));
    }
    out
}

pub fn serialize_words(words: &[Word]) -> String {
    let mut out = String::new();
    push_names(&mut out, "type", ["words"].into_iter());
    for w in words {
        if w.is_empty() {
            out.push_str("word: _\n");
        } else {
            push_names(&mut out, "word", w.iter().map(Symbol::as_str));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Direction;

    const M_AB: &str = "type: ietwgfa\nstates: s q\nalphabet: a b\nstart: s\nfinal: s\n\
                        rule: a s -> q\nrule: q b -> s\n";

    #[test]
    fn parse_m_ab() {
        let Parsed::Machine(m) = parse_spec(M_AB).unwrap() else {
            panic!("expected machine");
        };
        assert_eq!(m.states.len(), 2);
        assert_eq!(m.rules.len(), 2);
        assert_eq!(m.rules[0].direction(), Direction::Left);
        assert_eq!(m.rules[1].direction(), Direction::Right);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn parse_epsilon_rule_is_neutral() {
        let text = "type: ietwgfa\nstates: s q\nalphabet: a\nstart: s\nfinal: q\nrule: s -> q\n";
        let Parsed::Machine(m) = parse_spec(text).unwrap() else {
            panic!();
        };
        assert_eq!(m.rules[0].direction(), Direction::Neutral);
    }

    #[test]
    fn parse_grammar_rule_splits_on_mid() {
        let text = "type: lg\nnonterminals: S\nterminals: a b\nstart: S\nrule: S -> a S b\nrule: S -> _\n";
        let Parsed::Grammar(g) = parse_spec(text).unwrap() else {
            panic!();
        };
        assert_eq!(g.rules[0].prefix.len(), 1);
        assert_eq!(g.rules[0].mid.as_ref().unwrap().as_str(), "S");
        assert_eq!(g.rules[0].suffix.len(), 1);
        assert!(g.rules[1].mid.is_none());
        assert!(g.rules[1].prefix.is_empty());
    }

    #[test]
    fn parse_error_locations() {
        let text = "type: ietwgfa\nstates: s\nalphabet: a\nstart: s\nfinal: s\nrule: a z -> s\n";
        let e = parse_spec(text).unwrap_err();
        assert_eq!(e.line, 6);
        assert!(e.message.contains("declared state"));

        let e = parse_spec("type: blob\n").unwrap_err();
        assert!(e.message.contains("unknown kind"));
    }

    #[test]
    fn roundtrip_machine() {
        let doc = parse_spec(M_AB).unwrap();
        let text = doc.serialize();
        assert_eq!(text, M_AB);
        assert_eq!(parse_spec(&text).unwrap(), doc);
    }

    #[test]
    fn roundtrip_nfa_and_words() {
        let nfa_text = "type: nfa\nstates: s f\nalphabet: a\nstart: s\nfinal: f\n\
                        rule: s a -> f\nrule: s -> f\n";
        let doc = parse_spec(nfa_text).unwrap();
        assert_eq!(doc.serialize(), nfa_text);

        let words_text = "type: words\nword: _\nword: a a\n";
        let doc = parse_spec(words_text).unwrap();
        assert_eq!(doc.serialize(), words_text);
        let Parsed::Words(w) = doc else { panic!() };
        assert_eq!(w.len(), 2);
        assert!(w[0].is_empty());
    }

    #[test]
    fn roundtrip_composite_state_tokens() {
        let text = "type: ietwgfa\nstates: s' <a.q.b.L>\nalphabet: a b\nstart: s'\nfinal: <a.q.b.L>\n\
                    rule: a s' -> <a.q.b.L>\n";
        let doc = parse_spec(text).unwrap();
        assert_eq!(doc.serialize(), text);
    }

    #[test]
    fn empty_final_set_roundtrips() {
        let text = "type: ietwgfa\nstates: s\nalphabet: a\nstart: s\nfinal:\n";
        let doc = parse_spec(text).unwrap();
        assert_eq!(doc.serialize(), text);
    }
}
