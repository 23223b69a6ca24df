//! Weak bisimulation by signature refinement.
//!
//! States on a tau-cycle are weakly bisimilar, so the tau graph is first
//! condensed into its strongly connected components. Each round then
//! computes, for every component `C`, the set of blocks reachable by `=>`
//! and, per visible label `a`, the set of blocks reachable by `=>a=>`, by
//! dynamic programming over the condensed tau DAG. Components with equal
//! (old block, signature) stay together. The partition of every round is
//! kept so that distinguishing games can be reconstructed afterwards.

use std::collections::HashMap;

use crate::semantics::{Label, Lts};

/// Two systems side by side with a shared label table (index 0 is `Tau`).
#[derive(Clone, Debug)]
pub struct Combined {
    pub labels: Vec<Label>,
    pub left_len: usize,
    /// Outgoing `(label, target)` per combined state, deduplicated.
    pub succ: Vec<Vec<(u32, u32)>>,
}

impl Combined {
    pub fn new(left: &Lts, right: &Lts) -> Combined {
        let mut labels = vec![Label::Tau];
        let mut ids: HashMap<Label, u32> = HashMap::from([(Label::Tau, 0)]);
        let mut intern = |l: &Label| -> u32 {
            *ids.entry(l.clone()).or_insert_with(|| {
                labels.push(l.clone());
                (labels.len() - 1) as u32
            })
        };
        let left_map: Vec<u32> = left.labels.iter().map(&mut intern).collect();
        let right_map: Vec<u32> = right.labels.iter().map(&mut intern).collect();
        let left_len = left.num_states();
        let mut succ = vec![Vec::new(); left_len + right.num_states()];
        for &(s, l, t) in &left.transitions {
            succ[s as usize].push((left_map[l as usize], t));
        }
        let off = left_len as u32;
        for &(s, l, t) in &right.transitions {
            succ[(s + off) as usize].push((right_map[l as usize], t + off));
        }
        for edges in &mut succ {
            edges.sort_unstable();
            edges.dedup();
        }
        Combined { labels, left_len, succ }
    }

    pub fn from_single(lts: &Lts) -> Combined {
        let mut succ = vec![Vec::new(); lts.num_states()];
        for &(s, l, t) in &lts.transitions {
            succ[s as usize].push((l, t));
        }
        for edges in &mut succ {
            edges.sort_unstable();
            edges.dedup();
        }
        Combined { labels: lts.labels.clone(), left_len: lts.num_states(), succ }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }
}

/// Result of refinement: the partition after every round.
#[derive(Clone, Debug)]
pub struct Refinement {
    /// Tau-SCC of every combined state.
    pub scc_of: Vec<u32>,
    /// `levels[k][scc]` = block at round `k`; round 0 is the trivial partition.
    pub levels: Vec<Vec<u32>>,
}

impl Refinement {
    pub fn final_block(&self, state: usize) -> u32 {
        self.levels.last().expect("at least one level")[self.scc_of[state] as usize]
    }

    pub fn block_at(&self, level: usize, state: usize) -> u32 {
        self.levels[level][self.scc_of[state] as usize]
    }

    pub fn num_blocks(&self) -> usize {
        self.levels.last().map(|l| l.iter().copied().max().map_or(0, |m| m as usize + 1)).unwrap_or(0)
    }

    pub fn rounds(&self) -> usize {
        self.levels.len() - 1
    }

    /// First round at which `x` and `y` are split, or `None` if they end up
    /// weakly bisimilar.
    pub fn separation(&self, x: usize, y: usize) -> Option<usize> {
        let (cx, cy) = (self.scc_of[x] as usize, self.scc_of[y] as usize);
        self.levels.iter().position(|level| level[cx] != level[cy])
    }

    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        self.final_block(x) == self.final_block(y)
    }
}

/// Tarjan's algorithm on the tau edges, iteratively. Components come out
/// sinks first, i.e. in reverse topological order.
fn tau_sccs(graph: &Combined) -> (Vec<u32>, usize) {
    let n = graph.len();
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut scc_of = vec![UNSEEN; n];
    let mut next_index = 0u32;
    let mut count = 0usize;
    let tau_adj: Vec<Vec<u32>> = graph
        .succ
        .iter()
        .map(|edges| edges.iter().filter(|(l, _)| *l == 0).map(|&(_, t)| t).collect())
        .collect();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (node, position in its tau successor list)
        let mut call: Vec<(u32, usize)> = vec![(root as u32, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0 as usize;
            let next = tau_adj[v].get(top.1).copied();
            top.1 += 1;
            match next {
                Some(w) => {
                    let w = w as usize;
                    if index[w] == UNSEEN {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w as u32);
                        on_stack[w] = true;
                        call.push((w as u32, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                }
                None => {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        let parent = parent as usize;
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().expect("tarjan stack") as usize;
                            on_stack[w] = false;
                            scc_of[w] = count as u32;
                            if w == v {
                                break;
                            }
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    (scc_of, count)
}

fn merge_into<T: Ord + Copy>(dst: &mut Vec<T>, src: &[T]) {
    if src.is_empty() {
        return;
    }
    if dst.is_empty() {
        dst.extend_from_slice(src);
        return;
    }
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() && j < src.len() {
        match dst[i].cmp(&src[j]) {
            std::cmp::Ordering::Less => {
                out.push(dst[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(src[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(dst[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&dst[i..]);
    out.extend_from_slice(&src[j..]);
    *dst = out;
}

/// Computes the coarsest weak bisimulation on `graph`.
pub fn refine(graph: &Combined) -> Refinement {
    let (scc_of, nscc) = tau_sccs(graph);

    // condensed structure
    let mut tau_succ: Vec<Vec<u32>> = vec![Vec::new(); nscc];
    let mut vis_succ: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nscc];
    for (s, edges) in graph.succ.iter().enumerate() {
        let c = scc_of[s] as usize;
        for &(l, t) in edges {
            let ct = scc_of[t as usize];
            if l == 0 {
                if ct as usize != c {
                    tau_succ[c].push(ct);
                }
            } else {
                vis_succ[c].push((l, ct));
            }
        }
    }
    for v in tau_succ.iter_mut() {
        v.sort_unstable();
        v.dedup();
    }
    for v in vis_succ.iter_mut() {
        v.sort_unstable();
        v.dedup();
    }

    let mut levels = vec![vec![0u32; nscc]];
    let mut blocks = usize::from(nscc > 0);
    loop {
        let current = levels.last().expect("level");
        // reach[c]: blocks reachable by tau*; components come sinks first,
        // so every tau successor is finished before its predecessors
        let mut reach: Vec<Vec<u32>> = Vec::with_capacity(nscc);
        for c in 0..nscc {
            let mut set = vec![current[c]];
            for &d in &tau_succ[c] {
                merge_into(&mut set, &reach[d as usize]);
            }
            reach.push(set);
        }
        // weak[c]: (label, block) pairs reachable by tau* a tau*
        let mut weak: Vec<Vec<u64>> = Vec::with_capacity(nscc);
        let mut scratch: Vec<u64> = Vec::new();
        for c in 0..nscc {
            scratch.clear();
            for &(l, t) in &vis_succ[c] {
                scratch.extend(reach[t as usize].iter().map(|&b| (l as u64) << 32 | b as u64));
            }
            scratch.sort_unstable();
            scratch.dedup();
            let mut set = scratch.clone();
            for &d in &tau_succ[c] {
                merge_into(&mut set, &weak[d as usize]);
            }
            weak.push(set);
        }
        let mut ids: HashMap<(u32, Vec<u32>, Vec<u64>), u32> = HashMap::new();
        let mut next = vec![0u32; nscc];
        for (c, (r, w)) in reach.into_iter().zip(weak).enumerate() {
            let fresh = ids.len() as u32;
            next[c] = *ids.entry((current[c], r, w)).or_insert(fresh);
        }
        let next_blocks = ids.len();
        if next_blocks == blocks {
            break;
        }
        blocks = next_blocks;
        levels.push(next);
    }
    Refinement { scc_of, levels }
}
