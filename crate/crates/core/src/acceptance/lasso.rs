//! Büchi acceptance of the automaton on an ultimately periodic trace.
//!
//! Alternation is removed with a breakpoint construction. A derived state
//! is a pair `(all, owing)` of obligation sets; `owing` holds the
//! descendants of obligations that have not yet passed through an
//! accepting state since the last breakpoint. When `owing` is empty the
//! derived state is accepting and `owing` is refilled from the
//! non-accepting members of the successor. The product of derived states
//! with lasso positions is finite, so acceptance reduces to finding a
//! reachable cycle through an accepting product node.

use std::collections::HashMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::automaton::{Automaton, Conjunct, Dnf, Obligation};
use crate::events::LassoTrace;

/// Default bound on explored product states.
pub const DEFAULT_STATE_LIMIT: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AcceptanceError {
    #[error("product graph exceeded {0} states")]
    ResourceLimit(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BreakpointState {
    pub all_obligations: Conjunct,
    pub owing: Conjunct,
}

impl BreakpointState {
    pub fn is_breakpoint(&self) -> bool {
        self.owing.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LassoStats {
    pub product_states: usize,
    pub product_edges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LassoOutcome {
    pub accepted: bool,
    pub stats: LassoStats,
}

fn without_accepting(a: &Automaton, c: &Conjunct) -> Conjunct {
    Conjunct::new(
        c.obligations()
            .iter()
            .filter(|ob| !a.is_accepting(ob.state))
            .cloned()
            .collect(),
    )
}

/// Decides whether `automaton` accepts `trace`, exploring at most `limit`
/// product states.
pub fn lasso_accepts_with_limit(
    automaton: &Automaton,
    trace: &LassoTrace,
    limit: usize,
) -> Result<LassoOutcome, AcceptanceError> {
    let n = trace.period_end();
    let mut caches: Vec<HashMap<Obligation, Dnf>> = vec![HashMap::new(); n];
    let mut graph: DiGraph<(usize, BreakpointState), ()> = DiGraph::new();
    let mut ids: HashMap<(usize, BreakpointState), NodeIndex> = HashMap::new();
    let mut work = Vec::new();

    let start = (
        0,
        BreakpointState {
            all_obligations: Conjunct::new(vec![automaton.initial()]),
            owing: Conjunct::default(),
        },
    );
    let root = graph.add_node(start.clone());
    ids.insert(start, root);
    work.push(root);

    while let Some(node) = work.pop() {
        let (pos, state) = graph[node].clone();
        let m = trace.message(pos);
        let cache = &mut caches[pos];
        let mut successors = Vec::new();
        if state.owing.is_empty() {
            let all = automaton.delta_all(state.all_obligations.obligations(), m, cache);
            for c in all.conjuncts() {
                successors.push(BreakpointState {
                    owing: without_accepting(automaton, c),
                    all_obligations: c.clone(),
                });
            }
        } else {
            let owing = automaton.delta_all(state.owing.obligations(), m, cache);
            if !owing.is_bottom() {
                let rest: Vec<Obligation> = state
                    .all_obligations
                    .obligations()
                    .iter()
                    .filter(|ob| state.owing.obligations().binary_search(ob).is_err())
                    .cloned()
                    .collect();
                let others = automaton.delta_all(&rest, m, cache);
                for o in owing.conjuncts() {
                    for r in others.conjuncts() {
                        successors.push(BreakpointState {
                            all_obligations: o.union(r),
                            owing: without_accepting(automaton, o),
                        });
                    }
                }
            }
        }
        let next_pos = trace.successor(pos);
        for succ in successors {
            let key = (next_pos, succ);
            let target = match ids.get(&key) {
                Some(&t) => t,
                None => {
                    if graph.node_count() >= limit {
                        return Err(AcceptanceError::ResourceLimit(limit));
                    }
                    let t = graph.add_node(key.clone());
                    ids.insert(key, t);
                    work.push(t);
                    t
                }
            };
            graph.update_edge(node, target, ());
        }
    }

    let accepted = tarjan_scc(&graph).into_iter().any(|scc| {
        let cyclic = scc.len() > 1 || graph.contains_edge(scc[0], scc[0]);
        cyclic && scc.iter().any(|&v| graph[v].1.is_breakpoint())
    });
    Ok(LassoOutcome {
        accepted,
        stats: LassoStats {
            product_states: graph.node_count(),
            product_edges: graph.edge_count(),
        },
    })
}

/// Whether the automaton has an accepting run on `prefix · loop^ω`.
pub fn lasso_accepts(automaton: &Automaton, trace: &LassoTrace) -> Result<bool, AcceptanceError> {
    lasso_accepts_with_limit(automaton, trace, DEFAULT_STATE_LIMIT).map(|o| o.accepted)
}
