//! Finite-trace monitoring with three-valued verdicts.
//!
//! A [`Configuration`] is the disjunction of all obligation sets that some
//! run of the automaton can still be in after the consumed prefix. Stepping
//! replaces every obligation by its transition and renormalizes. The
//! verdict is `True` once some disjunct has no obligations left, `False`
//! once no disjunct survives, and `Inconclusive` otherwise.

use std::collections::HashMap;
use std::fmt;

use crate::automaton::{Automaton, Dnf};
use crate::events::{Message, Trace};
use crate::formula::{to_nnf, Formula, FormulaError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    pub fn is_final(self) -> bool {
        self != Verdict::Inconclusive
    }

    /// Process exit status for this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::True => 0,
            Verdict::False => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "TRUE",
            Verdict::False => "FALSE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration(Dnf);

impl Configuration {
    /// `{{(∅, φ)}}`
    pub fn init(automaton: &Automaton) -> Self {
        Configuration(Dnf::single(automaton.initial()))
    }

    pub fn from_dnf(dnf: Dnf) -> Self {
        Configuration(dnf)
    }

    pub fn dnf(&self) -> &Dnf {
        &self.0
    }

    pub fn step(&self, automaton: &Automaton, m: &Message) -> Self {
        if self.0.is_top() || self.0.is_bottom() {
            return self.clone();
        }
        let mut cache = HashMap::new();
        let mut next = Dnf::bottom();
        for conjunct in self.0.conjuncts() {
            let d = automaton.delta_all(conjunct.obligations(), m, &mut cache);
            next = next.or(&d);
            if next.is_top() {
                break;
            }
        }
        Configuration(next)
    }

    pub fn verdict(&self) -> Verdict {
        if self.0.is_bottom() {
            Verdict::False
        } else if self.0.conjuncts().iter().any(|c| c.is_empty()) {
            Verdict::True
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Incremental monitor holding only the current configuration.
#[derive(Debug, Clone)]
pub struct Monitor {
    automaton: Automaton,
    config: Configuration,
    consumed: usize,
}

impl Monitor {
    /// Compiles `phi` (normalized to NNF first).
    pub fn new(phi: &Formula) -> Result<Self, FormulaError> {
        Ok(Monitor::from_automaton(Automaton::build(&to_nnf(phi))?))
    }

    pub fn from_automaton(automaton: Automaton) -> Self {
        let config = Configuration::init(&automaton);
        Monitor {
            automaton,
            config,
            consumed: 0,
        }
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn configuration(&self) -> &Configuration {
        &self.config
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn verdict(&self) -> Verdict {
        self.config.verdict()
    }

    pub fn step(&mut self, m: &Message) -> Verdict {
        self.config = self.config.step(&self.automaton, m);
        self.consumed += 1;
        self.verdict()
    }

    pub fn reset(&mut self) {
        self.config = Configuration::init(&self.automaton);
        self.consumed = 0;
    }
}

/// One verdict per message of `trace`.
pub fn monitor_trace(phi: &Formula, trace: &Trace) -> Result<Vec<Verdict>, FormulaError> {
    let mut monitor = Monitor::new(phi)?;
    Ok(trace.messages.iter().map(|m| monitor.step(m)).collect())
}
