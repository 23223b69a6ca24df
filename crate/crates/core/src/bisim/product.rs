//! Quotients and asynchronous products of explored systems.
//!
//! Under the set semantics the packets of the alphabet never interact, so
//! the system over `{p, q}` is the interleaving of the systems over `{p}`
//! and `{q}`. Weak bisimilarity is preserved by quotienting and by
//! interleaving, which lets large alphabets be checked factor by factor.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::semantics::{Config, Label, Layout, Lts};

/// Collapses `lts` along `block_of`. The representative of a block is its
/// first state; tau self-loops are dropped. Blocks are renumbered in order
/// of first occurrence, so the initial state stays 0 when it is 0.
pub fn quotient(lts: &Lts, block_of: &[u32]) -> Lts {
    let mut renumber: HashMap<u32, u32> = HashMap::new();
    let mut reps = Vec::new();
    let mut local = Vec::with_capacity(lts.num_states());
    for (s, &b) in block_of.iter().enumerate().take(lts.num_states()) {
        let id = *renumber.entry(b).or_insert_with(|| {
            reps.push(s);
            (reps.len() - 1) as u32
        });
        local.push(id);
    }
    let mut transitions: Vec<(u32, u32, u32)> = lts
        .transitions
        .iter()
        .map(|&(s, l, t)| (local[s as usize], l, local[t as usize]))
        .filter(|&(s, l, t)| !(l == 0 && s == t))
        .collect();
    transitions.sort_unstable();
    transitions.dedup();
    Lts {
        states: reps.iter().map(|&s| lts.states[s].clone()).collect(),
        initial: local[lts.initial] as usize,
        labels: lts.labels.clone(),
        transitions,
        layout: lts.layout.clone(),
    }
}

/// Interleaving product of systems over the same places and injectable
/// channels but disjoint alphabets. States are explored breadth-first from
/// the tuple of initial states; the configuration of a product state merges
/// the factor configurations packet by packet.
///
/// Panics if the factors disagree on places or injectable channels.
pub fn interleave(factors: &[Lts]) -> Lts {
    assert!(!factors.is_empty(), "at least one factor");
    let first = &factors[0].layout;
    for f in factors {
        assert_eq!(f.layout.places, first.places, "factors must share places");
        assert_eq!(f.layout.injectable, first.injectable, "factors must share injectable channels");
    }
    let alphabet: Vec<_> = factors.iter().flat_map(|f| f.layout.alphabet.iter().cloned()).collect();
    let layout = Arc::new(Layout { places: first.places.clone(), alphabet, injectable: first.injectable.clone() });
    let offsets: Vec<usize> = factors
        .iter()
        .scan(0, |acc, f| {
            let o = *acc;
            *acc += f.layout.alphabet.len();
            Some(o)
        })
        .collect();

    let mut labels = vec![Label::Tau];
    let mut label_ids: HashMap<Label, u32> = HashMap::from([(Label::Tau, 0)]);
    let maps: Vec<Vec<u32>> = factors
        .iter()
        .map(|f| {
            f.labels
                .iter()
                .map(|l| {
                    *label_ids.entry(l.clone()).or_insert_with(|| {
                        labels.push(l.clone());
                        (labels.len() - 1) as u32
                    })
                })
                .collect()
        })
        .collect();
    let succ: Vec<Vec<Vec<(u32, u32)>>> = factors.iter().map(|f| f.successors()).collect();

    let merge = |tuple: &[u32]| -> Config {
        let a = layout.alphabet.len();
        let mut tokens = vec![0u8; layout.places.len() * a];
        let mut budgets = vec![0u8; layout.injectable.len() * a];
        for (k, f) in factors.iter().enumerate() {
            let c = &f.states[tuple[k] as usize];
            let fa = f.layout.alphabet.len();
            for place in 0..layout.places.len() {
                for j in 0..fa {
                    tokens[place * a + offsets[k] + j] = c.tokens()[place * fa + j];
                }
            }
            for slot in 0..layout.injectable.len() {
                for j in 0..fa {
                    budgets[slot * a + offsets[k] + j] = c.budgets()[slot * fa + j];
                }
            }
        }
        Config::from_parts(tokens, budgets, None)
    };

    let init: Vec<u32> = factors.iter().map(|f| f.initial as u32).collect();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(init.clone(), 0)]);
    let mut tuples = vec![init];
    let mut transitions = Vec::new();
    let mut queue = VecDeque::from([0u32]);
    while let Some(s) = queue.pop_front() {
        let tuple = tuples[s as usize].clone();
        for k in 0..factors.len() {
            for &(l, t) in &succ[k][tuple[k] as usize] {
                let mut next = tuple.clone();
                next[k] = t;
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = tuples.len() as u32;
                        index.insert(next.clone(), id);
                        tuples.push(next);
                        queue.push_back(id);
                        id
                    }
                };
                transitions.push((s, maps[k][l as usize], id));
            }
        }
    }
    transitions.sort_unstable();
    transitions.dedup();
    let states = tuples.iter().map(|t| merge(t)).collect();
    Lts { states, initial: 0, labels, transitions, layout }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::partition::{refine, Combined};
    use crate::lang::parse;
    use crate::semantics::{compile, explore, ExploreOptions};

    fn lts(text: &str, opts: &ExploreOptions) -> Lts {
        explore(&compile(&parse(text).unwrap()), opts).unwrap()
    }

    #[test]
    fn interleaving_matches_direct_exploration() {
        let text = "*m || s -> m || m => [r1, r2] || ?r1";
        let direct = lts(text, &ExploreOptions::set(2));
        let p = lts(text, &ExploreOptions::set(1));
        let q = lts(text, &ExploreOptions::set(1).with_alphabet(vec!["q".into()]));
        let prod = interleave(&[p.clone(), q]);
        assert_eq!(prod.num_states(), direct.num_states());
        assert_eq!(prod.num_transitions(), direct.num_transitions());
        assert_eq!(prod.num_states(), p.num_states() * p.num_states());
        let mut a: Vec<_> = prod.states.clone();
        let mut b: Vec<_> = direct.states.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_is_weakly_bisimilar() {
        let l = lts("*m || s -> m || m -> r || ?r", &ExploreOptions::set(1));
        let g = Combined::from_single(&l);
        let r = refine(&g);
        let blocks: Vec<u32> = (0..l.num_states()).map(|s| r.final_block(s)).collect();
        let q = quotient(&l, &blocks);
        assert!(q.num_states() < l.num_states());
        assert_eq!(q.initial, 0);
        let both = Combined::new(&l, &q);
        assert!(refine(&both).equivalent(l.initial, both.left_len + q.initial));
    }
}
