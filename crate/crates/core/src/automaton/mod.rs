//! The alternating Büchi automaton of a formula.
//!
//! States are the subformula closure of an NNF formula plus the two pit
//! states `⊤` and `⊥`. A run configuration pairs a state with a
//! [`Valuation`] of the variables bound so far. The transition function
//! reads one message and yields a positive boolean combination of
//! `(valuation, state)` obligations for the next position, which is kept in
//! [`Dnf`] form.

mod dnf;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::events::Message;
use crate::formula::{
    check_well_formed, subformulas, temporal_depth, Formula, FormulaError, Path, Term,
};

pub use dnf::{to_dnf, Conjunct, Dnf, PosBool};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("variable `{0}` is not assigned by the current valuation")]
    UndefinedVariable(String),
}

/// Partial assignment of variables to values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(Arc<BTreeMap<String, String>>);

impl Valuation {
    pub fn empty() -> Self {
        Valuation::default()
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.0.get(var).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// `self ∪ {(var, value)}`; `var` is unbound in `self` for well-formed
    /// formulas.
    pub fn extend(&self, var: &str, value: &str) -> Self {
        debug_assert!(!self.0.contains_key(var), "rebinding `{var}`");
        let mut map = (*self.0).clone();
        map.insert(var.to_string(), value.to_string());
        Valuation(Arc::new(map))
    }

    /// Value of a term; constants evaluate to themselves.
    pub fn resolve<'a>(&'a self, term: &'a Term) -> Result<&'a str, AutomatonError> {
        match term {
            Term::Const(c) => Ok(c),
            Term::Var(v) => self
                .get(v)
                .ok_or_else(|| AutomatonError::UndefinedVariable(v.clone())),
        }
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        Valuation(Arc::new(
            iter.into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
        ))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}↦{v:?}")?;
        }
        f.write_str("}")
    }
}

/// Index into an automaton's state table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateRef(pub u32);

impl StateRef {
    pub const TOP: StateRef = StateRef(0);
    pub const BOTTOM: StateRef = StateRef(1);

    pub fn is_pit(self) -> bool {
        self == StateRef::TOP || self == StateRef::BOTTOM
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StateRef::TOP => f.write_str("⊤"),
            StateRef::BOTTOM => f.write_str("⊥"),
            StateRef(i) => write!(f, "s{i}"),
        }
    }
}

/// A pending `(valuation, state)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obligation {
    pub valuation: Valuation,
    pub state: StateRef,
}

impl Obligation {
    pub fn new(valuation: Valuation, state: StateRef) -> Self {
        Obligation { valuation, state }
    }
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.valuation, self.state)
    }
}

// Compiled shape of a state, with operands resolved to state references.
#[derive(Debug, Clone)]
enum Shape {
    Top,
    Bottom,
    Eq(Term, Term),
    Neq(Term, Term),
    Or(StateRef, StateRef),
    And(StateRef, StateRef),
    Next(StateRef),
    Until(StateRef, StateRef),
    Release(StateRef, StateRef),
    Exists {
        var: String,
        path: Path,
        body: StateRef,
    },
    Forall {
        var: String,
        path: Path,
        body: StateRef,
    },
}

#[derive(Debug, Clone)]
struct State {
    formula: Option<Formula>,
    shape: Shape,
    depth: usize,
}

/// Release subformulas collected by the recursive accepting-set rules:
/// atoms contribute nothing beyond `⊤`, unary and binary connectives take the
/// union over their operands, and `μ R η` adds itself.
pub fn accepting_formulas(psi: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    fn walk(f: &Formula, out: &mut BTreeSet<Formula>) {
        if let Formula::Release(..) = f {
            out.insert(f.clone());
        }
        for c in f.children() {
            walk(c, out);
        }
    }
    walk(psi, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct Automaton {
    source: Formula,
    states: Vec<State>,
    index: HashMap<Formula, StateRef>,
    accepting: BTreeSet<StateRef>,
    variables: BTreeSet<String>,
}

impl Automaton {
    /// Builds `A_φ` for a well-formed formula in negation normal form.
    pub fn build(phi: &Formula) -> Result<Self, FormulaError> {
        check_well_formed(phi)?;
        if !phi.is_nnf() {
            return Err(FormulaError::NotNnf);
        }
        let closure = subformulas(phi);
        let mut index = HashMap::with_capacity(closure.len());
        for (i, f) in closure.iter().enumerate() {
            index.insert(f.clone(), StateRef(i as u32 + 2));
        }
        let r = |f: &Formula| index[f];
        let mut states = vec![
            State {
                formula: None,
                shape: Shape::Top,
                depth: 0,
            },
            State {
                formula: None,
                shape: Shape::Bottom,
                depth: 0,
            },
        ];
        for f in &closure {
            let shape = match f {
                Formula::Eq(a, b) => Shape::Eq(a.clone(), b.clone()),
                Formula::Neq(a, b) => Shape::Neq(a.clone(), b.clone()),
                Formula::Or(a, b) => Shape::Or(r(a), r(b)),
                Formula::And(a, b) => Shape::And(r(a), r(b)),
                Formula::Next(a) => Shape::Next(r(a)),
                Formula::Until(a, b) => Shape::Until(r(a), r(b)),
                Formula::Release(a, b) => Shape::Release(r(a), r(b)),
                Formula::Exists { var, path, body } => Shape::Exists {
                    var: var.clone(),
                    path: path.clone(),
                    body: r(body),
                },
                Formula::Forall { var, path, body } => Shape::Forall {
                    var: var.clone(),
                    path: path.clone(),
                    body: r(body),
                },
                _ => unreachable!("checked NNF"),
            };
            states.push(State {
                formula: Some(f.clone()),
                shape,
                depth: temporal_depth(f),
            });
        }
        let mut accepting: BTreeSet<StateRef> =
            accepting_formulas(phi).iter().map(|f| index[f]).collect();
        accepting.insert(StateRef::TOP);
        Ok(Automaton {
            source: phi.clone(),
            states,
            index,
            accepting,
            variables: phi.variables(),
        })
    }

    pub fn source(&self) -> &Formula {
        &self.source
    }

    /// Total state count, pits included.
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateRef> {
        (0..self.states.len() as u32).map(StateRef)
    }

    pub fn initial_state(&self) -> StateRef {
        StateRef(2)
    }

    /// `(∅, φ)`
    pub fn initial(&self) -> Obligation {
        Obligation::new(Valuation::empty(), self.initial_state())
    }

    pub fn accepting(&self) -> &BTreeSet<StateRef> {
        &self.accepting
    }

    pub fn is_accepting(&self, s: StateRef) -> bool {
        self.accepting.contains(&s)
    }

    pub fn variables(&self) -> &BTreeSet<String> {
        &self.variables
    }

    /// Formula of a non-pit state.
    pub fn formula(&self, s: StateRef) -> Option<&Formula> {
        self.states
            .get(s.index())
            .and_then(|st| st.formula.as_ref())
    }

    pub fn lookup(&self, f: &Formula) -> Option<StateRef> {
        self.index.get(f).copied()
    }

    pub fn temporal_depth(&self, s: StateRef) -> usize {
        self.states[s.index()].depth
    }

    pub fn label(&self, s: StateRef) -> String {
        match self.formula(s) {
            Some(f) => f.to_string(),
            None if s == StateRef::TOP => "TOP".to_string(),
            None => "BOTTOM".to_string(),
        }
    }

    /// Unnormalized transition expression for `(p, s)` on message `m`.
    pub fn delta_raw(
        &self,
        p: &Valuation,
        s: StateRef,
        m: &Message,
    ) -> Result<PosBool, AutomatonError> {
        let pit = |s| PosBool::Atom(Obligation::new(Valuation::empty(), s));
        let truth = |b: bool| pit(if b { StateRef::TOP } else { StateRef::BOTTOM });
        Ok(match &self.states[s.index()].shape {
            Shape::Top => pit(StateRef::TOP),
            Shape::Bottom => pit(StateRef::BOTTOM),
            Shape::Eq(a, b) => truth(p.resolve(a)? == p.resolve(b)?),
            Shape::Neq(a, b) => truth(p.resolve(a)? != p.resolve(b)?),
            Shape::Or(a, b) => {
                PosBool::Or(vec![self.delta_raw(p, *a, m)?, self.delta_raw(p, *b, m)?])
            }
            Shape::And(a, b) => {
                PosBool::And(vec![self.delta_raw(p, *a, m)?, self.delta_raw(p, *b, m)?])
            }
            Shape::Next(body) => PosBool::Atom(Obligation::new(p.clone(), *body)),
            Shape::Until(mu, eta) => PosBool::Or(vec![
                self.delta_raw(p, *eta, m)?,
                PosBool::And(vec![
                    self.delta_raw(p, *mu, m)?,
                    PosBool::Atom(Obligation::new(p.clone(), s)),
                ]),
            ]),
            Shape::Release(mu, eta) => PosBool::Or(vec![
                PosBool::And(vec![
                    self.delta_raw(p, *mu, m)?,
                    self.delta_raw(p, *eta, m)?,
                ]),
                PosBool::And(vec![
                    self.delta_raw(p, *eta, m)?,
                    PosBool::Atom(Obligation::new(p.clone(), s)),
                ]),
            ]),
            Shape::Exists { var, path, body } => {
                let mut parts = m
                    .dom(path)
                    .iter()
                    .map(|v| self.delta_raw(&p.extend(var, v), *body, m))
                    .collect::<Result<Vec<_>, _>>()?;
                parts.push(pit(StateRef::BOTTOM));
                PosBool::Or(parts)
            }
            Shape::Forall { var, path, body } => {
                let mut parts = m
                    .dom(path)
                    .iter()
                    .map(|v| self.delta_raw(&p.extend(var, v), *body, m))
                    .collect::<Result<Vec<_>, _>>()?;
                parts.push(pit(StateRef::TOP));
                PosBool::And(parts)
            }
        })
    }

    /// Transition function in normalized form.
    pub fn delta(&self, p: &Valuation, s: StateRef, m: &Message) -> Result<Dnf, AutomatonError> {
        self.delta_raw(p, s, m).map(|e| to_dnf(&e))
    }

    /// Conjunction of the transitions of every obligation in `obligations`,
    /// memoized in `cache` (which must only hold entries for `m`).
    pub(crate) fn delta_all<'a, I>(
        &self,
        obligations: I,
        m: &Message,
        cache: &mut HashMap<Obligation, Dnf>,
    ) -> Dnf
    where
        I: IntoIterator<Item = &'a Obligation>,
    {
        let mut acc = Dnf::top();
        for ob in obligations {
            let d = cache.entry(ob.clone()).or_insert_with(|| {
                self.delta(&ob.valuation, ob.state, m)
                    .expect("obligations of a well-formed automaton assign their free variables")
            });
            acc = acc.and(d);
            if acc.is_bottom() {
                break;
            }
        }
        acc
    }

    /// Graphviz rendering of the state table. Transitions depend on message
    /// data and are not drawn.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  __init [shape=point];\n");
        for s in self.states() {
            let shape = if self.is_accepting(s) {
                "doublecircle"
            } else {
                "circle"
            };
            let label = self.label(s).replace('\\', "\\\\").replace('"', "\\\"");
            out.push_str(&format!("  s{} [shape={shape}, label=\"{label}\"];\n", s.0));
        }
        out.push_str(&format!("  __init -> s{};\n}}\n", self.initial_state().0));
        out
    }
}

/// `build_automaton(φ)`; `φ` must already be in NNF.
pub fn build_automaton(phi: &Formula) -> Result<Automaton, FormulaError> {
    Automaton::build(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::{Message, Node};
    use crate::formula::{parse, to_nnf};

    fn nnf(text: &str) -> Formula {
        to_nnf(&parse(text).unwrap())
    }

    fn stock() -> Message {
        Message::parse(
            r#"{"message":{"action":"placeBuyOrder","stock":[{"name":"stock-1","amount":"123"},{"name":"stock-2","amount":"456"}]}}"#,
        )
        .unwrap()
    }

    fn any_msg() -> Message {
        Message::new(Node::leaf("m", "z")).unwrap()
    }

    #[test]
    fn atomic_formula_has_three_states() {
        let a = Automaton::build(&nnf(r#""a" = "b""#)).unwrap();
        assert_eq!(a.state_count(), 3);
        assert_eq!(
            a.accepting().iter().copied().collect::<Vec<_>>(),
            vec![StateRef::TOP]
        );
    }

    #[test]
    fn until_of_atoms() {
        let a = Automaton::build(&nnf(r#""a" = "b" U "c" = "d""#)).unwrap();
        assert_eq!(a.state_count(), 5);
        assert_eq!(a.accepting().len(), 1);
        let b = Automaton::build(&nnf(r#"F "a" = "b""#)).unwrap();
        assert_eq!(
            b.accepting().iter().copied().collect::<Vec<_>>(),
            vec![StateRef::TOP]
        );
    }

    #[test]
    fn release_is_accepting() {
        let a = Automaton::build(&nnf(r#""a" = "b" R "c" = "d""#)).unwrap();
        assert_eq!(a.accepting().len(), 2);
        assert!(a.is_accepting(a.initial_state()));
        assert!(!a.is_accepting(StateRef::BOTTOM));
    }

    #[test]
    fn rejects_non_nnf_and_unbound() {
        assert_eq!(
            Automaton::build(&parse(r#"G "a" = "a""#).unwrap()).unwrap_err(),
            FormulaError::NotNnf
        );
        assert!(Automaton::build(&Formula::eq(Term::var("x"), Term::constant("a"))).is_err());
    }

    #[test]
    fn equality_under_valuation_discharges() {
        let phi = Formula::eq(Term::var("x"), Term::var("y"));
        let closed = Formula::exists(
            "x",
            "/m".parse().unwrap(),
            Formula::exists("y", "/m".parse().unwrap(), phi.clone()),
        );
        let a = Automaton::build(&closed).unwrap();
        let s = a.lookup(&phi).unwrap();
        let p: Valuation = [("x", "a"), ("y", "a")].into_iter().collect();
        assert!(a.delta(&p, s, &any_msg()).unwrap().is_top());
        let q: Valuation = [("x", "a"), ("y", "b")].into_iter().collect();
        assert!(a.delta(&q, s, &any_msg()).unwrap().is_bottom());
        assert_eq!(
            a.delta(&Valuation::empty(), s, &any_msg()),
            Err(AutomatonError::UndefinedVariable("x".into()))
        );
    }

    #[test]
    fn forall_over_empty_domain_is_top() {
        let a = Automaton::build(&nnf(r#"forall x in "/absent" : x = "v""#)).unwrap();
        assert!(a
            .delta(&Valuation::empty(), a.initial_state(), &stock())
            .unwrap()
            .is_top());
        let b = Automaton::build(&nnf(r#"exists x in "/absent" : x = "v""#)).unwrap();
        assert!(b
            .delta(&Valuation::empty(), b.initial_state(), &stock())
            .unwrap()
            .is_bottom());
    }

    #[test]
    fn exists_over_stock_names() {
        let a =
            Automaton::build(&nnf(r#"exists x in "/message/stock/name" : x = "stock-2""#)).unwrap();
        let raw = a
            .delta_raw(&Valuation::empty(), a.initial_state(), &stock())
            .unwrap();
        // one disjunct per value plus the trailing ⊥
        let PosBool::Or(parts) = &raw else {
            panic!("{raw:?}")
        };
        assert_eq!(parts.len(), 3);
        assert!(to_dnf(&raw).is_top());
        let b =
            Automaton::build(&nnf(r#"exists x in "/message/stock/name" : x = "stock-3""#)).unwrap();
        assert!(b
            .delta(&Valuation::empty(), b.initial_state(), &stock())
            .unwrap()
            .is_bottom());
    }

    #[test]
    fn until_with_false_operands_dies() {
        let a = Automaton::build(&nnf(r#""a" = "b" U "c" = "d""#)).unwrap();
        assert!(a
            .delta(&Valuation::empty(), a.initial_state(), &any_msg())
            .unwrap()
            .is_bottom());
    }

    #[test]
    fn until_with_true_left_keeps_self_loop() {
        let a = Automaton::build(&nnf(r#"F "c" = "d""#)).unwrap();
        let d = a
            .delta(&Valuation::empty(), a.initial_state(), &any_msg())
            .unwrap();
        assert_eq!(d, Dnf::single(a.initial()));
    }

    #[test]
    fn next_carries_valuation() {
        let phi = nnf(r#"exists x in "/message/action" : X x = "placeBuyOrder""#);
        let a = Automaton::build(&phi).unwrap();
        let d = a
            .delta(&Valuation::empty(), a.initial_state(), &stock())
            .unwrap();
        let body = a
            .lookup(&Formula::eq(
                Term::var("x"),
                Term::constant("placeBuyOrder"),
            ))
            .unwrap();
        let expected: Valuation = [("x", "placeBuyOrder")].into_iter().collect();
        assert_eq!(d, Dnf::single(Obligation::new(expected, body)));
    }

    #[test]
    fn dot_export_marks_accepting_states() {
        let a = Automaton::build(&nnf(r#"G "a" = "a""#)).unwrap();
        let dot = a.to_dot();
        assert_eq!(dot.matches("doublecircle").count(), 2);
        assert!(dot.contains("__init -> s2"));
        assert!(dot.contains(r#"label="\"a\" = \"a\"""#));
    }

    #[test]
    fn state_bound_holds() {
        for text in [
            r#"G (exists x in "/m/a" : X (x = "v" U forall y in "/m/b" : y != x))"#,
            r#"("a" = "a" & "a" = "a") | X "a" = "a""#,
            r#"F G "a" = "b""#,
        ] {
            let f = nnf(text);
            let a = Automaton::build(&f).unwrap();
            assert!(a.state_count() <= f.size() + 2);
        }
    }
}
