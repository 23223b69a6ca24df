//! Empirical check that the saturated set semantics agrees with the exact
//! multiset semantics on weak traces up to a given depth.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::explore::{Explorer, Label, Lts, SemanticsError};
use super::net::{compile, Net};
use super::options::{CapPolicy, ExploreOptions, Semantics};
use crate::lang::Process;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "result")]
pub enum Inclusion {
    Holds,
    /// A weak trace of the left system that the right system cannot perform.
    Fails { trace: Vec<Label> },
}

impl Inclusion {
    pub fn holds(&self) -> bool {
        matches!(self, Inclusion::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractionReport {
    pub depth: usize,
    /// Weak traces of the exact system (with the caller's options) are set traces.
    pub exact_in_set: Inclusion,
    /// Weak traces of the set system are traces of the exact system with
    /// unbounded duplication, clamped at multiplicity `depth`.
    pub set_in_exact: Inclusion,
    pub exact_states: usize,
    pub set_states: usize,
    pub reference_states: usize,
    /// Exact and set LTSs coincide once multiplicities are read as presence.
    pub isomorphic: bool,
    pub notes: Vec<String>,
}

impl AbstractionReport {
    pub fn passed(&self) -> bool {
        self.exact_in_set.holds() && self.set_in_exact.holds()
    }
}

/// Searches for a weak trace of `left` of at most `depth` visible labels
/// that `right` cannot perform. Both systems are determinized on the fly.
pub fn weak_trace_counterexample(left: &Lts, right: &Lts, depth: usize) -> Option<Vec<Label>> {
    let ls = left.successors();
    let rs = right.successors();
    let right_ids: HashMap<&Label, u32> =
        right.labels.iter().enumerate().map(|(i, l)| (l, i as u32)).collect();

    let closure = |succ: &[Vec<(u32, u32)>], seed: Vec<u32>| -> Vec<u32> {
        let mut seen: HashSet<u32> = seed.iter().copied().collect();
        let mut stack = seed;
        while let Some(s) = stack.pop() {
            for &(l, t) in &succ[s as usize] {
                if l == 0 && seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        let mut v: Vec<u32> = seen.into_iter().collect();
        v.sort_unstable();
        v
    };
    let step = |succ: &[Vec<(u32, u32)>], from: &[u32], label: u32| -> Vec<u32> {
        let mut next: Vec<u32> = from
            .iter()
            .flat_map(|&s| succ[s as usize].iter().filter(|(l, _)| *l == label).map(|&(_, t)| t))
            .collect();
        next.sort_unstable();
        next.dedup();
        closure(succ, next)
    };

    let start = (closure(&ls, vec![left.initial as u32]), closure(&rs, vec![right.initial as u32]));
    let mut visited: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::from([start.clone()]);
    let mut frontier = vec![(start, Vec::<Label>::new())];
    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for ((lset, rset), trace) in frontier {
            let mut by_label: BTreeMap<&Label, u32> = BTreeMap::new();
            for &s in &lset {
                for &(l, _) in &ls[s as usize] {
                    if l != 0 {
                        by_label.insert(left.label(l), l);
                    }
                }
            }
            for (label, lid) in by_label {
                let lnext = step(&ls, &lset, lid);
                let rnext = match right_ids.get(label) {
                    Some(&rid) => step(&rs, &rset, rid),
                    None => Vec::new(),
                };
                let mut t = trace.clone();
                t.push(label.clone());
                if rnext.is_empty() {
                    return Some(t);
                }
                let key = (lnext, rnext);
                if visited.insert(key.clone()) {
                    next_frontier.push((key, t));
                }
            }
        }
        frontier = next_frontier;
    }
    None
}

/// Structural correspondence between an exact and a set LTS when every
/// exact multiplicity is at most one.
fn presence_isomorphic(exact: &Lts, set: &Lts) -> bool {
    if exact.num_states() != set.num_states() || exact.num_transitions() != set.num_transitions() {
        return false;
    }
    if exact.states.iter().any(|c| c.tokens().iter().any(|&t| t > 1)) {
        return false;
    }
    let index: HashMap<(&[u8], &[u8]), usize> =
        set.states.iter().enumerate().map(|(i, c)| ((c.tokens(), c.budgets()), i)).collect();
    let mut map = Vec::with_capacity(exact.num_states());
    for c in &exact.states {
        match index.get(&(c.tokens(), c.budgets())) {
            Some(&i) => map.push(i),
            None => return false,
        }
    }
    let mut mapped_back = map.clone();
    mapped_back.sort_unstable();
    mapped_back.dedup();
    if mapped_back.len() != map.len() {
        return false;
    }
    let set_edges: HashSet<(usize, &Label, usize)> =
        set.transitions.iter().map(|&(s, l, t)| (s as usize, set.label(l), t as usize)).collect();
    exact
        .transitions
        .iter()
        .all(|&(s, l, t)| set_edges.contains(&(map[s as usize], exact.label(l), map[t as usize])))
}

/// Compares the exact and set semantics of `p` on weak traces up to `depth`.
pub fn validate_abstraction(
    p: &Process,
    opts_exact: &ExploreOptions,
    opts_set: &ExploreOptions,
    depth: usize,
) -> Result<AbstractionReport, SemanticsError> {
    if opts_exact.alphabet != opts_set.alphabet
        || opts_exact.injection_budget != opts_set.injection_budget
        || opts_exact.injection != opts_set.injection
    {
        return Err(SemanticsError::InvalidOptions(
            "exact and set options must share alphabet, budget and injection scope".into(),
        ));
    }
    let net = compile(p);
    let exact_opts = ExploreOptions { semantics: Semantics::Exact, ..opts_exact.clone() };
    let set_opts = ExploreOptions { semantics: Semantics::Set, ..opts_set.clone() };
    let reference_opts = ExploreOptions {
        semantics: Semantics::Exact,
        dup_budget: None,
        capacity_cap: Some(depth.clamp(1, u8::MAX as usize) as u8),
        cap_policy: CapPolicy::Clamp,
        ..opts_exact.clone()
    };
    let exact = Explorer::new(&net, &exact_opts)?.explore()?;
    let set = Explorer::new(&net, &set_opts)?.explore()?;
    let reference = Explorer::new(&net, &reference_opts)?.explore()?;

    let exact_in_set = match weak_trace_counterexample(&exact, &set, depth) {
        None => Inclusion::Holds,
        Some(trace) => Inclusion::Fails { trace },
    };
    let set_in_exact = match weak_trace_counterexample(&set, &reference, depth) {
        None => Inclusion::Holds,
        Some(trace) => Inclusion::Fails { trace },
    };
    Ok(AbstractionReport {
        depth,
        exact_in_set,
        set_in_exact,
        exact_states: exact.num_states(),
        set_states: set.num_states(),
        reference_states: reference.num_states(),
        isomorphic: presence_isomorphic(&exact, &set),
        notes: notes_for(&net, depth),
    })
}

fn notes_for(net: &Net, depth: usize) -> Vec<String> {
    let mut notes = Vec::new();
    for t in net.transitions.iter().filter(|t| t.is_duplicator()) {
        notes.push(format!(
            "set semantics elides the duplicator self-loop on {}",
            net.places[t.source].channel
        ));
    }
    let duplicated = net.duplicated();
    for (i, place) in net.places.iter().enumerate() {
        if duplicated[i] && !place.local {
            notes.push(format!("observing duplicated global channel {} may keep the packet in set semantics", place.channel));
        }
    }
    notes.push(format!(
        "reference exact system: unbounded duplication, multiplicities clamped at {}",
        depth.max(1)
    ));
    notes
}
