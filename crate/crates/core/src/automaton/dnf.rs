//! Positive boolean transition expressions and their disjunctive normal form.

use std::fmt;

use super::{Obligation, StateRef};

/// Raw output of the transition rules before normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosBool {
    True,
    False,
    Atom(Obligation),
    And(Vec<PosBool>),
    Or(Vec<PosBool>),
}

/// A set of obligations that must all be met. Sorted and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conjunct(Vec<Obligation>);

impl Conjunct {
    pub fn new(mut obligations: Vec<Obligation>) -> Self {
        obligations.sort();
        obligations.dedup();
        Conjunct(obligations)
    }

    pub fn obligations(&self) -> &[Obligation] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Set inclusion over sorted slices.
    pub fn is_subset(&self, other: &Conjunct) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for ob in &self.0 {
            for cand in it.by_ref() {
                match cand.cmp(ob) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &Conjunct) -> Conjunct {
        let mut merged = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.cmp(y) {
                    std::cmp::Ordering::Less => merged.push(a.next().unwrap().clone()),
                    std::cmp::Ordering::Greater => merged.push(b.next().unwrap().clone()),
                    std::cmp::Ordering::Equal => {
                        merged.push(a.next().unwrap().clone());
                        b.next();
                    }
                },
                (Some(_), None) => merged.push(a.next().unwrap().clone()),
                (None, Some(_)) => merged.push(b.next().unwrap().clone()),
                (None, None) => break,
            }
        }
        Conjunct(merged)
    }
}

impl fmt::Display for Conjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, ob) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{ob}")?;
        }
        f.write_str("}")
    }
}

/// Disjunction of conjuncts.
///
/// Normalized values are antichains under set inclusion: no conjunct
/// contains `⊥`, `⊤` atoms are dropped, and no conjunct is a superset of
/// another. `{∅}` is true and `{}` is false.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Dnf(Vec<Conjunct>);

impl Dnf {
    pub fn top() -> Self {
        Dnf(vec![Conjunct::default()])
    }

    pub fn bottom() -> Self {
        Dnf(Vec::new())
    }

    pub fn single(ob: Obligation) -> Self {
        Dnf::from_conjuncts(vec![Conjunct::new(vec![ob])])
    }

    /// Normalizes arbitrary conjuncts.
    pub fn from_conjuncts(conjuncts: Vec<Conjunct>) -> Self {
        let cleaned = conjuncts
            .into_iter()
            .filter_map(|c| {
                if c.0.iter().any(|ob| ob.state == StateRef::BOTTOM) {
                    return None;
                }
                Some(Conjunct(
                    c.0.into_iter()
                        .filter(|ob| ob.state != StateRef::TOP)
                        .collect(),
                ))
            })
            .collect();
        minimize(cleaned)
    }

    pub fn conjuncts(&self) -> &[Conjunct] {
        &self.0
    }

    pub fn is_top(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_empty()
    }

    pub fn is_bottom(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn or(&self, other: &Dnf) -> Dnf {
        let mut all = self.0.clone();
        all.extend(other.0.iter().cloned());
        minimize(all)
    }

    pub fn and(&self, other: &Dnf) -> Dnf {
        if self.is_top() {
            return other.clone();
        }
        if other.is_top() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() * other.0.len());
        for a in &self.0 {
            for b in &other.0 {
                out.push(a.union(b));
            }
        }
        minimize(out)
    }
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bottom() {
            return f.write_str("⊥");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∨ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Sorts, removes duplicates, and drops every conjunct that strictly
/// contains another.
fn minimize(mut conjuncts: Vec<Conjunct>) -> Dnf {
    conjuncts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    conjuncts.dedup();
    let mut kept: Vec<Conjunct> = Vec::with_capacity(conjuncts.len());
    for c in conjuncts {
        if c.is_empty() {
            return Dnf::top();
        }
        if !kept.iter().any(|k| k.is_subset(&c)) {
            kept.push(c);
        }
    }
    kept.sort();
    Dnf(kept)
}

/// Distributes `&` over `|`, drops `⊤` atoms, deletes conjuncts holding a
/// `⊥` atom, and removes subsumed conjuncts.
pub fn to_dnf(expr: &PosBool) -> Dnf {
    match expr {
        PosBool::True => Dnf::top(),
        PosBool::False => Dnf::bottom(),
        PosBool::Atom(ob) if ob.state == StateRef::TOP => Dnf::top(),
        PosBool::Atom(ob) if ob.state == StateRef::BOTTOM => Dnf::bottom(),
        PosBool::Atom(ob) => Dnf(vec![Conjunct(vec![ob.clone()])]),
        PosBool::And(parts) => {
            let mut acc = Dnf::top();
            for p in parts {
                if acc.is_bottom() {
                    break;
                }
                acc = acc.and(&to_dnf(p));
            }
            acc
        }
        PosBool::Or(parts) => {
            let mut acc = Dnf::bottom();
            for p in parts {
                if acc.is_top() {
                    break;
                }
                acc = acc.or(&to_dnf(p));
            }
            acc
        }
    }
}
