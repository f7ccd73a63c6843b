//! First-order LTL over tree-structured event traces, compiled to
//! alternating Büchi automata.
//!
//! - [`formula`]: syntax, parser, negation normal form, subformula closure
//! - [`events`]: messages, the path domain function, finite and lasso traces
//! - [`automaton`]: states, accepting set, and the transition function
//! - [`monitor`]: on-the-fly three-valued monitoring of finite traces
//! - [`acceptance`]: exact acceptance on lasso traces and a reference
//!   evaluator to cross-check it
//! - [`cli`]: the command-line front end used by the `ltlfo` binary

pub mod acceptance;
pub mod automaton;
pub mod cli;
pub mod events;
pub mod formula;
pub mod monitor;

pub use automaton::{build_automaton, Automaton};
pub use events::{LassoTrace, Message, Trace};
pub use formula::{negate, parse, to_nnf, Formula};
pub use monitor::{monitor_trace, Monitor, Verdict};
