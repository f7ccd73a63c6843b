//! Direct evaluation of the satisfaction relation on lasso traces.
//!
//! This evaluator shares nothing with the automaton: it walks the formula
//! tree, memoizes truth values per `(subformula, valuation, position)`, and
//! computes `U` and `R` as least and greatest fixpoints over the finitely
//! many positions of the lasso. It accepts every connective, including the
//! ones removed by NNF.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::events::LassoTrace;
use crate::formula::{Formula, Path, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("variable `{0}` is unassigned")]
    UndefinedVariable(String),
}

type Binding = BTreeMap<String, String>;

#[derive(Debug)]
enum Node {
    Const(bool),
    Eq(Term, Term, bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Next(usize),
    // F a = true U a, G a = false R a
    Until(Option<usize>, usize),
    Release(Option<usize>, usize),
    Quant {
        var: String,
        path: Path,
        body: usize,
        universal: bool,
    },
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OracleStats {
    /// Distinct `(subformula, valuation, position)` keys evaluated.
    pub keys: usize,
    /// Sweeps performed by all fixpoint computations.
    pub sweeps: usize,
}

/// Evaluator bound to one lasso trace.
pub struct Oracle<'t> {
    trace: &'t LassoTrace,
    nodes: Vec<Node>,
    memo: HashMap<(usize, Binding, usize), bool>,
    stats: OracleStats,
}

impl<'t> Oracle<'t> {
    pub fn new(trace: &'t LassoTrace) -> Self {
        Oracle {
            trace,
            nodes: Vec::new(),
            memo: HashMap::new(),
            stats: OracleStats::default(),
        }
    }

    pub fn stats(&self) -> OracleStats {
        self.stats
    }

    fn intern(&mut self, f: &Formula) -> usize {
        let node = match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Eq(a, b) => Node::Eq(a.clone(), b.clone(), true),
            Formula::Neq(a, b) => Node::Eq(a.clone(), b.clone(), false),
            Formula::Not(a) => Node::Not(self.intern(a)),
            Formula::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Formula::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Formula::Implies(a, b) => Node::Implies(self.intern(a), self.intern(b)),
            Formula::Next(a) => Node::Next(self.intern(a)),
            Formula::Finally(a) => Node::Until(None, self.intern(a)),
            Formula::Globally(a) => Node::Release(None, self.intern(a)),
            Formula::Until(a, b) => Node::Until(Some(self.intern(a)), self.intern(b)),
            Formula::Release(a, b) => Node::Release(Some(self.intern(a)), self.intern(b)),
            Formula::Exists { var, path, body } | Formula::Forall { var, path, body } => {
                Node::Quant {
                    var: var.clone(),
                    path: path.clone(),
                    body: self.intern(body),
                    universal: matches!(f, Formula::Forall { .. }),
                }
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Truth of `psi` under `binding` at absolute position `i`.
    pub fn eval(
        &mut self,
        binding: &BTreeMap<String, String>,
        psi: &Formula,
        i: usize,
    ) -> Result<bool, OracleError> {
        let root = self.intern(psi);
        let pos = self.canonical(i);
        self.eval_node(root, binding, pos)
    }

    fn canonical(&self, i: usize) -> usize {
        let k = self.trace.prefix().len();
        if i < k {
            i
        } else {
            k + (i - k) % self.trace.cycle().len()
        }
    }

    fn value(binding: &Binding, t: &Term) -> Result<String, OracleError> {
        match t {
            Term::Const(c) => Ok(c.clone()),
            Term::Var(v) => binding
                .get(v)
                .cloned()
                .ok_or_else(|| OracleError::UndefinedVariable(v.clone())),
        }
    }

    fn eval_node(&mut self, id: usize, binding: &Binding, pos: usize) -> Result<bool, OracleError> {
        let key = (id, binding.clone(), pos);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = match &self.nodes[id] {
            Node::Const(b) => *b,
            Node::Eq(a, b, positive) => {
                let equal = Self::value(binding, a)? == Self::value(binding, b)?;
                equal == *positive
            }
            &Node::Not(a) => !self.eval_node(a, binding, pos)?,
            &Node::And(a, b) => {
                self.eval_node(a, binding, pos)? && self.eval_node(b, binding, pos)?
            }
            &Node::Or(a, b) => {
                self.eval_node(a, binding, pos)? || self.eval_node(b, binding, pos)?
            }
            &Node::Implies(a, b) => {
                !self.eval_node(a, binding, pos)? || self.eval_node(b, binding, pos)?
            }
            &Node::Next(a) => {
                let next = self.trace.successor(pos);
                self.eval_node(a, binding, next)?
            }
            &Node::Until(lhs, rhs) => {
                self.fixpoint(id, lhs, rhs, binding, false)?;
                return Ok(self.memo[&key]);
            }
            &Node::Release(lhs, rhs) => {
                self.fixpoint(id, lhs, rhs, binding, true)?;
                return Ok(self.memo[&key]);
            }
            Node::Quant {
                var,
                path,
                body,
                universal,
            } => {
                let (var, body, universal) = (var.clone(), *body, *universal);
                let values = self.trace.message(pos).dom(path);
                let mut result = universal;
                for value in values {
                    let mut extended = binding.clone();
                    extended.insert(var.clone(), value);
                    if self.eval_node(body, &extended, pos)? != universal {
                        result = !universal;
                        break;
                    }
                }
                result
            }
        };
        self.stats.keys += 1;
        self.memo.insert(key, v);
        Ok(v)
    }

    // Until:   v[j] = η(j) ∨ (μ(j) ∧ v[j+1]), least fixpoint (start false).
    // Release: v[j] = (μ(j) ∧ η(j)) ∨ (η(j) ∧ v[j+1]), greatest (start true).
    fn fixpoint(
        &mut self,
        id: usize,
        lhs: Option<usize>,
        rhs: usize,
        binding: &Binding,
        release: bool,
    ) -> Result<(), OracleError> {
        let n = self.trace.period_end();
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for j in 0..n {
            left.push(match lhs {
                Some(a) => self.eval_node(a, binding, j)?,
                None => !release,
            });
            right.push(self.eval_node(rhs, binding, j)?);
        }
        let mut vals = vec![release; n];
        loop {
            self.stats.sweeps += 1;
            let mut changed = false;
            for j in (0..n).rev() {
                let next = vals[self.trace.successor(j)];
                let v = if release {
                    right[j] && (left[j] || next)
                } else {
                    right[j] || (left[j] && next)
                };
                if v != vals[j] {
                    vals[j] = v;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for (j, v) in vals.into_iter().enumerate() {
            self.stats.keys += 1;
            self.memo.insert((id, binding.clone(), j), v);
        }
        Ok(())
    }
}

/// `⟦∅, ψ, t^i⟧`
pub fn oracle_eval(psi: &Formula, trace: &LassoTrace, i: usize) -> Result<bool, OracleError> {
    Oracle::new(trace).eval(&BTreeMap::new(), psi, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::{Message, Node as EvNode};
    use crate::formula::{parse, to_nnf};

    fn msg(vals: &[&str]) -> Message {
        Message::new(EvNode::element(
            "m",
            vals.iter().map(|v| EvNode::leaf("a", *v)).collect(),
        ))
        .unwrap()
    }

    fn lasso(prefix: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
        LassoTrace::new(
            prefix.iter().map(|v| msg(v)).collect(),
            cycle.iter().map(|v| msg(v)).collect(),
        )
        .unwrap()
    }

    fn eval(text: &str, t: &LassoTrace) -> bool {
        oracle_eval(&parse(text).unwrap(), t, 0).unwrap()
    }

    #[test]
    fn reflexive_and_irreflexive_constants() {
        let t = lasso(&[&["v"]], &[&[]]);
        assert!(eval(r#""true" = "true""#, &t));
        assert!(!eval(r#"X "a" != "a""#, &t));
    }

    #[test]
    fn infinitely_often_witness_in_loop() {
        let phi = r#"G F exists x in "/m/a" : x = "v""#;
        assert!(eval(phi, &lasso(&[&[]], &[&[], &["v"], &[]])));
        assert!(!eval(phi, &lasso(&[&["v"]], &[&[], &["w"]])));
        // same result on the NNF form
        let nnf = to_nnf(&parse(phi).unwrap());
        assert!(oracle_eval(&nnf, &lasso(&[&[]], &[&[], &["v"], &[]]), 0).unwrap());
    }

    #[test]
    fn empty_domain_conventions() {
        let t = lasso(&[], &[&[]]);
        assert!(eval(r#"forall x in "/m/zz" : x = x"#, &t));
        assert!(!eval(r#"exists x in "/m/zz" : x = x"#, &t));
    }

    #[test]
    fn until_requires_eventual_right_side() {
        let t = lasso(&[], &[&["v"]]);
        assert!(!eval(r#"true U "a" != "a""#, &t));
        assert!(eval(r#"false R "a" = "a""#, &t));
        let u = lasso(&[&["v"], &["v"]], &[&["w"]]);
        assert!(eval(
            r#"(exists x in "/m/a" : x = "v") U (exists x in "/m/a" : x = "w")"#,
            &u
        ));
        assert!(!eval(r#"G exists x in "/m/a" : x = "v""#, &u));
    }

    #[test]
    fn next_shifts_position() {
        let t = lasso(&[&["v"]], &[&["w"], &["u"]]);
        let body = parse(r#"exists x in "/m/a" : x = "u""#).unwrap();
        let next = Formula::next(body.clone());
        for i in 0..8 {
            assert_eq!(
                oracle_eval(&next, &t, i).unwrap(),
                oracle_eval(&body, &t, i + 1).unwrap()
            );
        }
    }

    #[test]
    fn undefined_variable_reported() {
        let f = Formula::eq(Term::var("x"), Term::constant("a"));
        assert_eq!(
            oracle_eval(&f, &lasso(&[], &[&[]]), 0),
            Err(OracleError::UndefinedVariable("x".into()))
        );
    }

    #[test]
    fn fixpoint_sweeps_bounded() {
        let t = lasso(&[&[], &["v"]], &[&["w"], &[], &["v"]]);
        let f = parse(r#"G F (exists x in "/m/a" : x = "v") & F G "a" = "a""#).unwrap();
        let mut o = Oracle::new(&t);
        o.eval(&BTreeMap::new(), &f, 0).unwrap();
        let s = o.stats();
        assert!(s.sweeps <= t.period_end() * s.keys);
    }
}
