//! Seeded random formulas and lassos, and the automaton-vs-oracle
//! comparison over them.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lasso::{lasso_accepts_with_limit, DEFAULT_STATE_LIMIT};
use super::oracle::oracle_eval;
use crate::automaton::Automaton;
use crate::events::{LassoTrace, Message, Node, Trace};
use crate::formula::{to_nnf, Formula, Path, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzBounds {
    pub max_depth: usize,
    pub max_quant: usize,
    pub alphabet: usize,
    pub max_prefix: usize,
    pub max_loop: usize,
    /// Upper bound on AST nodes of a generated formula.
    pub max_size: usize,
    pub state_limit: usize,
}

impl Default for FuzzBounds {
    fn default() -> Self {
        FuzzBounds {
            max_depth: 3,
            max_quant: 2,
            alphabet: 3,
            max_prefix: 4,
            max_loop: 3,
            max_size: 14,
            state_limit: DEFAULT_STATE_LIMIT,
        }
    }
}

const VAR_NAMES: [&str; 3] = ["x", "y", "z"];
const FIELDS: [&str; 2] = ["a", "b"];

/// Deterministic generator for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn value(i: usize) -> String {
    format!("v{i}")
}

fn field_path(field: &str) -> Path {
    Path::new(["m", field]).expect("static path")
}

struct FormulaGen<'r, R> {
    rng: &'r mut R,
    bounds: FuzzBounds,
    quantifiers_left: usize,
    scope: Vec<&'static str>,
}

impl<R: Rng> FormulaGen<'_, R> {
    fn term(&mut self) -> Term {
        if !self.scope.is_empty() && self.rng.gen_bool(0.6) {
            Term::var(*self.scope.choose(self.rng).unwrap())
        } else {
            Term::constant(value(self.rng.gen_range(0..self.bounds.alphabet)))
        }
    }

    fn leaf(&mut self) -> Formula {
        match self.rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            2..=6 => Formula::Eq(self.term(), self.term()),
            _ => Formula::Neq(self.term(), self.term()),
        }
    }

    fn formula(&mut self, depth_left: usize, size: usize) -> Formula {
        if size <= 1 || self.rng.gen_bool(0.2) {
            return self.leaf();
        }
        let quant = self.quantifiers_left > 0 && self.scope.len() < VAR_NAMES.len();
        let temporal = depth_left > 0;
        loop {
            let pick = self.rng.gen_range(0..13);
            let rest = size - 1;
            let split = |rng: &mut R| {
                let l = rng.gen_range(1..=rest.max(2) - 1);
                (l, rest.saturating_sub(l).max(1))
            };
            return match pick {
                0 => Formula::not(self.formula(depth_left, rest)),
                1 => {
                    let (l, r) = split(self.rng);
                    Formula::and(self.formula(depth_left, l), self.formula(depth_left, r))
                }
                2 => {
                    let (l, r) = split(self.rng);
                    Formula::or(self.formula(depth_left, l), self.formula(depth_left, r))
                }
                3 => {
                    let (l, r) = split(self.rng);
                    Formula::implies(self.formula(depth_left, l), self.formula(depth_left, r))
                }
                4 if temporal => Formula::next(self.formula(depth_left - 1, rest)),
                5 if temporal => Formula::finally(self.formula(depth_left - 1, rest)),
                6 if temporal => Formula::globally(self.formula(depth_left - 1, rest)),
                7 | 8 if temporal => {
                    let (l, r) = split(self.rng);
                    let a = self.formula(depth_left - 1, l);
                    let b = self.formula(depth_left - 1, r);
                    if pick == 7 {
                        Formula::until(a, b)
                    } else {
                        Formula::release(a, b)
                    }
                }
                9..=12 if quant => {
                    self.quantifiers_left -= 1;
                    let var = *VAR_NAMES.iter().find(|v| !self.scope.contains(v)).unwrap();
                    let path = field_path(FIELDS.choose(self.rng).unwrap());
                    self.scope.push(var);
                    let body = self.formula(depth_left, rest);
                    self.scope.pop();
                    if pick % 2 == 0 {
                        Formula::exists(var, path, body)
                    } else {
                        Formula::forall(var, path, body)
                    }
                }
                _ => continue,
            };
        }
    }
}

/// Random well-formed formula within `bounds`; may use every connective.
pub fn random_formula<R: Rng>(rng: &mut R, bounds: &FuzzBounds) -> Formula {
    let mut g = FormulaGen {
        rng,
        bounds: *bounds,
        quantifiers_left: bounds.max_quant,
        scope: Vec::new(),
    };
    let size = g.rng.gen_range(1..=bounds.max_size.max(1));
    g.formula(bounds.max_depth, size)
}

/// Random `<m>` message with zero to two `a` and `b` leaves.
pub fn random_message<R: Rng>(rng: &mut R, bounds: &FuzzBounds) -> Message {
    let mut children = Vec::new();
    for field in FIELDS {
        for _ in 0..rng.gen_range(0..=2) {
            children.push(Node::leaf(field, value(rng.gen_range(0..bounds.alphabet))));
        }
    }
    Message::new(Node::element("m", children)).expect("element root")
}

pub fn random_trace<R: Rng>(rng: &mut R, bounds: &FuzzBounds, len: usize) -> Trace {
    Trace::new((0..len).map(|_| random_message(rng, bounds)).collect())
}

pub fn random_lasso<R: Rng>(rng: &mut R, bounds: &FuzzBounds) -> LassoTrace {
    let k = rng.gen_range(0..=bounds.max_prefix);
    let l = rng.gen_range(1..=bounds.max_loop.max(1));
    let prefix = (0..k).map(|_| random_message(rng, bounds)).collect();
    let cycle = (0..l).map(|_| random_message(rng, bounds)).collect();
    LassoTrace::new(prefix, cycle).expect("non-empty loop")
}

#[derive(Debug, Clone)]
pub struct FuzzCase {
    pub index: u64,
    pub formula: Formula,
    pub lasso: LassoTrace,
}

impl FuzzCase {
    pub fn generate(seed: u64, index: u64, bounds: &FuzzBounds) -> Self {
        let mut rng = case_rng(seed, index);
        let formula = random_formula(&mut rng, bounds);
        let lasso = random_lasso(&mut rng, bounds);
        FuzzCase {
            index,
            formula,
            lasso,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzFailure {
    pub index: u64,
    pub formula: Formula,
    pub lasso: LassoTrace,
    /// `None` when the product exceeded the state limit.
    pub automaton: Option<bool>,
    pub oracle: Option<bool>,
}

fn show(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "error",
    }
}

impl fmt::Display for FuzzFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FAIL {} {} {} automaton={} oracle={}",
            self.index,
            self.formula,
            self.lasso.to_json(),
            show(self.automaton),
            show(self.oracle)
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct FuzzReport {
    pub count: usize,
    pub agreements: usize,
    pub failures: Vec<FuzzFailure>,
    pub accepted: usize,
    pub max_states: usize,
    pub total_states: usize,
    pub max_product_states: usize,
    /// Cases where `|S| > |φ| + 2`.
    pub state_bound_violations: usize,
    pub elapsed: Duration,
}

impl FuzzReport {
    pub fn all_agree(&self) -> bool {
        self.agreements == self.count
    }
}

// Timing is left out so the text of a seeded run is reproducible.
impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fail in &self.failures {
            writeln!(f, "{fail}")?;
        }
        if self.count > 0 {
            writeln!(
                f,
                "STATS accepted={} max-states={} mean-states={:.2} max-product={} bound-violations={}",
                self.accepted,
                self.max_states,
                self.total_states as f64 / self.count as f64,
                self.max_product_states,
                self.state_bound_violations
            )?;
        }
        writeln!(f, "AGREE {}/{}", self.agreements, self.count)
    }
}

/// Compares lasso acceptance of the automaton with the oracle on `count`
/// generated cases.
pub fn fuzz_compare(seed: u64, count: usize, bounds: &FuzzBounds) -> FuzzReport {
    let started = Instant::now();
    let mut report = FuzzReport {
        count,
        ..FuzzReport::default()
    };
    for index in 0..count as u64 {
        let case = FuzzCase::generate(seed, index, bounds);
        let nnf = to_nnf(&case.formula);
        let automaton = Automaton::build(&nnf).expect("generated formulas are well formed");
        let states = automaton.state_count();
        report.max_states = report.max_states.max(states);
        report.total_states += states;
        if states > nnf.size() + 2 {
            report.state_bound_violations += 1;
        }
        let by_automaton =
            match lasso_accepts_with_limit(&automaton, &case.lasso, bounds.state_limit) {
                Ok(outcome) => {
                    report.max_product_states =
                        report.max_product_states.max(outcome.stats.product_states);
                    Some(outcome.accepted)
                }
                Err(_) => None,
            };
        let by_oracle = oracle_eval(&nnf, &case.lasso, 0).ok();
        if by_automaton.is_some() && by_automaton == by_oracle {
            report.agreements += 1;
            report.accepted += usize::from(by_automaton == Some(true));
        } else {
            report.failures.push(FuzzFailure {
                index,
                formula: case.formula,
                lasso: case.lasso,
                automaton: by_automaton,
                oracle: by_oracle,
            });
        }
    }
    report.elapsed = started.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{check_well_formed, temporal_depth};

    #[test]
    fn generated_formulas_respect_bounds() {
        let bounds = FuzzBounds::default();
        for i in 0..300 {
            let case = FuzzCase::generate(7, i, &bounds);
            check_well_formed(&case.formula).unwrap();
            assert!(temporal_depth(&case.formula) <= bounds.max_depth);
            assert!(case.formula.quantifier_count() <= bounds.max_quant);
            assert!(case.lasso.prefix().len() <= bounds.max_prefix);
            assert!((1..=bounds.max_loop).contains(&case.lasso.cycle().len()));
        }
    }

    #[test]
    fn empty_run_succeeds() {
        let r = fuzz_compare(42, 0, &FuzzBounds::default());
        assert!(r.all_agree());
        assert_eq!(r.to_string(), "AGREE 0/0\n");
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let a = fuzz_compare(3, 25, &FuzzBounds::default());
        let b = fuzz_compare(3, 25, &FuzzBounds::default());
        assert_eq!(a.to_string(), b.to_string());
        assert!(a.all_agree(), "{a}");
    }
}
