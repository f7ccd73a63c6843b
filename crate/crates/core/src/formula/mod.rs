//! Abstract syntax of first-order LTL with path-bounded quantifiers.
//!
//! Formulas are plain immutable trees. [`parse`] turns text into a
//! well-formed [`Formula`], [`to_nnf`] pushes negations down to the
//! (in)equalities and removes `F`, `G`, `->` and the boolean literals, and
//! [`subformulas`] computes the closure that becomes the automaton's state
//! set.

mod nnf;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

pub use nnf::{negate, to_nnf};
pub use parser::parse;

/// Constant used to lower the `true` literal (`"true" = "true"`).
pub const TRUE_CONST: &str = "true";
/// Constant used to lower the `false` literal (`"false" != "false"`).
pub const FALSE_CONST: &str = "false";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("variable `{0}` is not bound by any enclosing quantifier")]
    UnboundVariable(String),
    #[error("quantifier on `{0}` shadows an enclosing binding of the same name")]
    ShadowedVariable(String),
    #[error("invalid path `{0}`")]
    InvalidPath(String),
    #[error("formula is not in negation normal form")]
    NotNnf,
}

/// Either side of an (in)equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(value: impl Into<String>) -> Self {
        Term::Const(value.into())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) => f.write_str(name),
            Term::Const(value) => write_quoted(f, value),
        }
    }
}

fn write_quoted(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    f.write_str("\"")?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            c => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}

/// A child-axis path anchored at the message root, e.g. `/message/stock/name`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    segments: Vec<String>,
}

impl Path {
    pub fn new<I, S>(segments: I) -> Result<Self, FormulaError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let segments: Vec<String> = segments.into_iter().map(Into::into).collect();
        if segments.is_empty() || segments.iter().any(|s| !is_valid_segment(s)) {
            return Err(FormulaError::InvalidPath(format!(
                "/{}",
                segments.join("/")
            )));
        }
        Ok(Path { segments })
    }

    pub fn segments(&self) -> &[String] {
        &self.segments
    }
}

fn is_valid_segment(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| matches!(c, '/' | '[' | ']' | '*' | '@' | ':' | '"'))
        && s != "."
        && s != ".."
}

impl std::str::FromStr for Path {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rest = s
            .strip_prefix('/')
            .ok_or_else(|| FormulaError::InvalidPath(s.to_string()))?;
        Path::new(rest.split('/')).map_err(|_| FormulaError::InvalidPath(s.to_string()))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for seg in &self.segments {
            write!(f, "/{seg}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Neq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Exists {
        var: String,
        path: Path,
        body: Box<Formula>,
    },
    Forall {
        var: String,
        path: Path,
        body: Box<Formula>,
    },
}

// Small constructors; they keep tests and generators readable.
impl Formula {
    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Eq(a, b)
    }

    pub fn neq(a: Term, b: Term) -> Self {
        Formula::Neq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn finally(f: Formula) -> Self {
        Formula::Finally(Box::new(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn exists(var: impl Into<String>, path: Path, body: Formula) -> Self {
        Formula::Exists {
            var: var.into(),
            path,
            body: Box::new(body),
        }
    }

    pub fn forall(var: impl Into<String>, path: Path, body: Formula) -> Self {
        Formula::Forall {
            var: var.into(),
            path,
            body: Box::new(body),
        }
    }

    /// Lowered form of `true`.
    pub fn top() -> Self {
        Formula::Eq(Term::constant(TRUE_CONST), Term::constant(TRUE_CONST))
    }

    /// Lowered form of `false`.
    pub fn bottom() -> Self {
        Formula::Neq(Term::constant(FALSE_CONST), Term::constant(FALSE_CONST))
    }

    /// Direct children in left-to-right order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Neq(..) => vec![],
            Formula::Not(a)
            | Formula::Next(a)
            | Formula::Finally(a)
            | Formula::Globally(a)
            | Formula::Exists { body: a, .. }
            | Formula::Forall { body: a, .. } => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => vec![a, b],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    pub fn is_temporal(&self) -> bool {
        matches!(
            self,
            Formula::Next(_)
                | Formula::Finally(_)
                | Formula::Globally(_)
                | Formula::Until(..)
                | Formula::Release(..)
        )
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Neq(..))
    }

    /// True when the formula only uses `=`, `!=`, `&`, `|`, `X`, `U`, `R`
    /// and the two quantifiers.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::True
            | Formula::False
            | Formula::Not(_)
            | Formula::Implies(..)
            | Formula::Finally(_)
            | Formula::Globally(_) => false,
            Formula::Eq(..) | Formula::Neq(..) => true,
            _ => self.children().into_iter().all(Formula::is_nnf),
        }
    }

    /// Variables occurring free in the formula.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name mentioned by a quantifier or a term.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Eq(a, b) | Formula::Neq(a, b) => {
                    for t in [a, b] {
                        if let Term::Var(v) = t {
                            out.insert(v.clone());
                        }
                    }
                }
                Formula::Exists { var, .. } | Formula::Forall { var, .. } => {
                    out.insert(var.clone());
                }
                _ => {}
            }
            stack.extend(f.children());
        }
        out
    }

    pub fn quantifier_count(&self) -> usize {
        let own = usize::from(matches!(
            self,
            Formula::Exists { .. } | Formula::Forall { .. }
        ));
        own + self
            .children()
            .into_iter()
            .map(Formula::quantifier_count)
            .sum::<usize>()
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match f {
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            for t in [a, b] {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
        }
        Formula::Exists { var, body, .. } | Formula::Forall { var, body, .. } => {
            bound.push(var.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        _ => {
            for c in f.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

/// Checks that every variable is bound by exactly one enclosing quantifier.
pub fn check_well_formed(f: &Formula) -> Result<(), FormulaError> {
    fn walk(f: &Formula, scope: &mut Vec<String>) -> Result<(), FormulaError> {
        match f {
            Formula::Eq(a, b) | Formula::Neq(a, b) => {
                for t in [a, b] {
                    if let Term::Var(v) = t {
                        if !scope.contains(v) {
                            return Err(FormulaError::UnboundVariable(v.clone()));
                        }
                    }
                }
                Ok(())
            }
            Formula::Exists { var, body, .. } | Formula::Forall { var, body, .. } => {
                if scope.contains(var) {
                    return Err(FormulaError::ShadowedVariable(var.clone()));
                }
                scope.push(var.clone());
                let res = walk(body, scope);
                scope.pop();
                res
            }
            _ => f.children().into_iter().try_for_each(|c| walk(c, scope)),
        }
    }
    walk(f, &mut Vec::new())
}

/// Maximum number of temporal-operator nodes on a root-to-leaf branch.
pub fn temporal_depth(f: &Formula) -> usize {
    let below = f
        .children()
        .into_iter()
        .map(temporal_depth)
        .max()
        .unwrap_or(0);
    below + usize::from(f.is_temporal())
}

/// Subformula closure in depth-first pre-order. Structurally equal
/// subformulas are kept once.
pub fn subformulas(f: &Formula) -> IndexSet<Formula> {
    let mut out = IndexSet::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if !out.insert(g.clone()) {
            continue;
        }
        // reversed so the left operand is visited first
        stack.extend(g.children().into_iter().rev());
    }
    out
}

// Binary operators are always parenthesized so that the output parses back
// to the same tree regardless of precedence.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Neq(a, b) => write!(f, "{a} != {b}"),
            Formula::Not(a) => write!(f, "!{}", Unary(a)),
            Formula::Next(a) => write!(f, "X {}", Unary(a)),
            Formula::Finally(a) => write!(f, "F {}", Unary(a)),
            Formula::Globally(a) => write!(f, "G {}", Unary(a)),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::Release(a, b) => write!(f, "({a} R {b})"),
            Formula::Exists { var, path, body } => {
                write!(f, "exists {var} in \"{path}\" : {}", Unary(body))
            }
            Formula::Forall { var, path, body } => {
                write!(f, "forall {var} in \"{path}\" : {}", Unary(body))
            }
        }
    }
}

/// Operand of a prefix operator; atoms get parentheses.
struct Unary<'a>(&'a Formula);

impl fmt::Display for Unary<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_atomic() {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}
