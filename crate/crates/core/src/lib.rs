//! Input-erasing two-way finite automata: these machines move the reading
//! head left or right on the tape but erase every symbol they read, starting
//! from an arbitrary split point in the input. The crate provides the
//! machine and grammar value types, membership and bounded enumeration
//! under the general, alternating, even, and initialized-even computation
//! modes, the constructions between machines, linear grammars, and their
//! normal forms, the regular-restriction product constructions, independent
//! brute-force oracles for differential testing, and a text format.
//!
//! ```
//! use ietwfa::format::{parse_spec, Parsed};
//! use ietwfa::simulation::{accepts, enumerate_language, Mode};
//! use ietwfa::Symbol;
//!
//! // erases one `a` leftwards, one `b` rightwards, and repeats: {aⁿbⁿ}
//! let text = "type: ietwgfa\n\
//!             states: s q\n\
//!             alphabet: a b\n\
//!             start: s\n\
//!             final: s\n\
//!             rule: a s -> q\n\
//!             rule: q b -> s\n";
//! let Parsed::Machine(m) = parse_spec(text).unwrap() else { unreachable!() };
//!
//! let word: Vec<Symbol> = "aabb".chars().map(|c| Symbol::new(c.to_string())).collect();
//! assert!(accepts(&m, &word, Mode::General).unwrap());
//! assert!(accepts(&m, &word, Mode::Even).unwrap());
//! assert_eq!(enumerate_language(&m, Mode::General, 4).len(), 3); // ε, ab, aabb
//! ```

pub mod automata;
pub mod convert;
pub mod format;
pub mod grammar;
pub mod oracle;
pub mod restrict;
pub mod simulation;

pub use automata::{
    Classification, Direction, ForeignSymbol, Ietwgfa, Nfa, NfaRule, Rule, StateId, Symbol,
    Violation, Word,
};
pub use grammar::{EvenLinearWitness, LgRule, LinearGrammar, NonterminalId};
pub use oracle::{EquivResult, GenConfig};
pub use simulation::{Configuration, Dir, Mode, Phase, Trace, TraceStep};
