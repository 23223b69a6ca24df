use std::collections::HashSet;

use crate::semantics::{Label, Lts};

/// Weak transition relation of an [`Lts`]: `s => s'` and `s =a=> s'`.
#[derive(Clone, Debug)]
pub struct WeakLts {
    pub labels: Vec<Label>,
    /// Sorted tau-star successors, including the state itself.
    pub tau_star: Vec<Vec<u32>>,
    /// Sorted `(visible label index, target)` pairs.
    pub weak: Vec<Vec<(u32, u32)>>,
}

impl WeakLts {
    pub fn num_states(&self) -> usize {
        self.tau_star.len()
    }

    /// Targets of `s =label=> _`; for `Tau` this is the tau-star closure.
    pub fn targets(&self, s: usize, label: &Label) -> Vec<u32> {
        if label.is_tau() {
            return self.tau_star[s].clone();
        }
        let Some(id) = self.labels.iter().position(|l| l == label) else {
            return Vec::new();
        };
        self.weak[s].iter().filter(|(l, _)| *l as usize == id).map(|&(_, t)| t).collect()
    }

    pub fn has(&self, s: usize, label: &Label, t: usize) -> bool {
        self.targets(s, label).binary_search(&(t as u32)).is_ok()
    }
}

pub(crate) fn tau_closure(succ: &[Vec<(u32, u32)>], s: u32) -> Vec<u32> {
    let mut seen: HashSet<u32> = HashSet::from([s]);
    let mut stack = vec![s];
    while let Some(x) = stack.pop() {
        for &(l, t) in &succ[x as usize] {
            if l == 0 && seen.insert(t) {
                stack.push(t);
            }
        }
    }
    let mut v: Vec<u32> = seen.into_iter().collect();
    v.sort_unstable();
    v
}

/// All weak moves from `s`: `(0, t)` for `s => t` and `(a, t)` for `s =a=> t`.
/// Sorted and deduplicated.
pub(crate) fn weak_moves(succ: &[Vec<(u32, u32)>], s: u32) -> Vec<(u32, u32)> {
    let before = tau_closure(succ, s);
    let mut out: Vec<(u32, u32)> = before.iter().map(|&t| (0, t)).collect();
    let mut mids: Vec<(u32, u32)> = Vec::new();
    for &x in &before {
        for &(l, t) in &succ[x as usize] {
            if l != 0 {
                mids.push((l, t));
            }
        }
    }
    mids.sort_unstable();
    mids.dedup();
    for (l, t) in mids {
        out.extend(tau_closure(succ, t).into_iter().map(|u| (l, u)));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Saturates every state. Quadratic in the worst case; meant for small
/// systems and for inspection.
pub fn saturate(lts: &Lts) -> WeakLts {
    let succ = lts.successors();
    let n = lts.num_states();
    let mut tau_star = Vec::with_capacity(n);
    let mut weak = Vec::with_capacity(n);
    for s in 0..n as u32 {
        let moves = weak_moves(&succ, s);
        tau_star.push(moves.iter().filter(|(l, _)| *l == 0).map(|&(_, t)| t).collect());
        weak.push(moves.into_iter().filter(|(l, _)| *l != 0).collect());
    }
    WeakLts { labels: lts.labels.clone(), tau_star, weak }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;
    use crate::semantics::{compile, explore, ExploreOptions};

    fn lts(text: &str) -> Lts {
        explore(&compile(&parse(text).unwrap()), &ExploreOptions::set(1)).unwrap()
    }

    #[test]
    fn single_state_is_only_reflexive() {
        let w = saturate(&lts("0"));
        assert_eq!(w.tau_star, vec![vec![0]]);
        assert!(w.weak[0].is_empty());
    }

    #[test]
    fn chain_closure() {
        // In(a) then tau into b, then Out(b)
        let l = lts("a -> b");
        let w = saturate(&l);
        let out_b = Label::Out("b".into(), "p".into());
        // state 1 holds p in a; 3 holds p in b; 2 is empty and spent
        assert!(w.has(1, &out_b, 2));
        assert!(w.has(1, &Label::Tau, 3));
        assert!(w.has(1, &Label::Tau, 1));
        assert!(!w.has(0, &out_b, 2));
        assert!(w.has(0, &Label::In("a".into(), "p".into()), 3));
    }

    #[test]
    fn strong_moves_are_weak_moves() {
        let l = lts("*m || s -> m || m => [r1, r2]");
        let w = saturate(&l);
        for &(s, lab, t) in &l.transitions {
            assert!(w.has(s as usize, l.label(lab), t as usize));
        }
    }
}
