//! Builders for broadcast networks over arbitrary node sets and topologies.
//!
//! Node `i` talks to the outside world through a send channel `s{i}` and a
//! receive channel `r{i}`. [`direct_broadcast`] connects all nodes to one
//! lossy, duplicating medium; [`multicast`] floods packets along the edges
//! of a digraph, with one lossy, duplicating link channel per edge.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::lang::{Channel, Process};

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("node list is empty")]
    NoNodes,
    #[error("node {0} is listed twice")]
    DuplicateNode(NodeId),
    #[error("edge mentions undeclared node {0}")]
    UnknownNode(NodeId),
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown builder `{0}`; expected `direct:<ids>` or `multicast:<edges>|@<file>`")]
    UnknownBuilder(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Directed graph without self-loops. Nodes and edges are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    nodes: Vec<NodeId>,
    edges: Vec<(NodeId, NodeId)>,
}

impl Digraph {
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Digraph, NetworkError> {
        let mut seen = BTreeSet::new();
        for n in nodes {
            if !seen.insert(n) {
                return Err(NetworkError::DuplicateNode(n));
            }
        }
        let mut edge_set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(NetworkError::SelfLoop(i));
            }
            for n in [i, j] {
                if !seen.contains(&n) {
                    return Err(NetworkError::UnknownNode(n));
                }
            }
            edge_set.insert((i, j));
        }
        Ok(Digraph { nodes: seen.into_iter().collect(), edges: edge_set.into_iter().collect() })
    }

    /// Nodes are the endpoints of the edges.
    pub fn from_edges(edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Digraph, NetworkError> {
        let edges: Vec<_> = edges.into_iter().collect();
        let nodes: BTreeSet<NodeId> = edges.iter().flat_map(|&(i, j)| [i, j]).collect();
        Digraph::new(nodes, edges)
    }

    /// Four nodes: `0 -> 1, 0 -> 2, 1 -> 3, 2 -> 3, 3 -> 0`.
    pub fn diamond_ring() -> Digraph {
        Digraph::from_edges([(0, 1), (0, 2), (1, 3), (2, 3), (3, 0)]).expect("valid digraph")
    }

    /// Edge list text: one `i -> j` per line (or separated by `;`), an
    /// optional `nodes: 0, 1, 2` line declaring isolated nodes, `#` comments.
    pub fn parse(text: &str) -> Result<Digraph, NetworkError> {
        let mut nodes: Option<Vec<NodeId>> = None;
        let mut edges = Vec::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            for item in line.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let syntax = |message: String| NetworkError::Syntax { line: line_no + 1, message };
                let number = |s: &str| -> Result<NodeId, NetworkError> {
                    s.trim().parse().map_err(|_| syntax(format!("`{}` is not a node id", s.trim())))
                };
                if let Some(list) = item.strip_prefix("nodes:") {
                    let ids = list
                        .split([',', ' '])
                        .filter(|s| !s.trim().is_empty())
                        .map(number)
                        .collect::<Result<Vec<_>, _>>()?;
                    nodes.get_or_insert_with(Vec::new).extend(ids);
                } else if let Some((i, j)) = item.split_once("->") {
                    edges.push((number(i)?, number(j)?));
                } else {
                    return Err(syntax(format!("expected `i -> j` or `nodes:`, found `{item}`")));
                }
            }
        }
        // edge endpoints are nodes whether declared or not
        let mut all = nodes.unwrap_or_default();
        for n in edges.iter().flat_map(|&(i, j)| [i, j]) {
            if !all.contains(&n) {
                all.push(n);
            }
        }
        Digraph::new(all, edges)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn successors(&self, i: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.edges.iter().filter(move |(a, _)| *a == i).map(|&(_, b)| b)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let touched: BTreeSet<NodeId> = self.edges.iter().flat_map(|&(i, j)| [i, j]).collect();
        if self.nodes.iter().any(|n| !touched.contains(n)) {
            let ids: Vec<String> = self.nodes.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(out, "nodes: {}", ids.join(", "));
        }
        for (i, j) in &self.edges {
            let _ = writeln!(out, "{i} -> {j}");
        }
        out
    }
}

fn tag(prefix: &str, ids: &[NodeId]) -> Channel {
    if ids.iter().all(|&i| i < 10) {
        let digits: String = ids.iter().map(|i| i.to_string()).collect();
        Channel::new(format!("{prefix}{digits}"))
    } else {
        let parts: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
        Channel::new(format!("{prefix}_{}", parts.join("_")))
    }
}

/// `s{i}`, or `s_{i}` for multi-digit ids.
pub fn send_channel(i: NodeId) -> Channel {
    tag("s", &[i])
}

/// `r{i}`, or `r_{i}` for multi-digit ids.
pub fn receive_channel(i: NodeId) -> Channel {
    tag("r", &[i])
}

/// `l{i}{j}`, or `l_{i}_{j}` when either id has several digits.
pub fn link_channel(i: NodeId, j: NodeId) -> Channel {
    tag("l", &[i, j])
}

pub fn receive_channels(nodes: &[NodeId]) -> Vec<Channel> {
    nodes.iter().map(|&i| receive_channel(i)).collect()
}

/// `new m. (*m || s_i -> m ... || m -> r_i ...)`.
pub fn direct_broadcast(nodes: &[NodeId]) -> Result<Process, NetworkError> {
    if nodes.is_empty() {
        return Err(NetworkError::NoNodes);
    }
    let mut seen = BTreeSet::new();
    for &n in nodes {
        if !seen.insert(n) {
            return Err(NetworkError::DuplicateNode(n));
        }
    }
    let m = Channel::new("m");
    let mut children = vec![Process::duplose(m.clone())];
    children.extend(nodes.iter().map(|&i| Process::bridge(send_channel(i), m.clone())));
    children.extend(nodes.iter().map(|&i| Process::bridge(m.clone(), receive_channel(i))));
    Ok(Process::new_channel(m, Process::par(children)))
}

/// Flooding over `g`: a duplosing link per edge, `s_i => [l_ij ...]` per
/// node and `l_ij => [r_j, l_jk ...]` per edge, all links restricted.
pub fn multicast(g: &Digraph) -> Process {
    let out: BTreeMap<NodeId, Vec<NodeId>> =
        g.nodes.iter().map(|&i| (i, g.successors(i).collect())).collect();
    let links: Vec<Channel> = g.edges.iter().map(|&(i, j)| link_channel(i, j)).collect();
    let mut children: Vec<Process> = links.iter().cloned().map(Process::duplose).collect();
    for &i in &g.nodes {
        let targets: Vec<Channel> = out[&i].iter().map(|&j| link_channel(i, j)).collect();
        children.push(Process::distribute(send_channel(i), targets));
    }
    for &(i, j) in &g.edges {
        let mut targets = vec![receive_channel(j)];
        targets.extend(out[&j].iter().map(|&k| link_channel(j, k)));
        children.push(Process::distribute(link_channel(i, j), targets));
    }
    Process::restrict_all(links, Process::par(children))
}

/// Nodes without out-edges. Their send distributors have no targets, so
/// whatever they send is dropped.
pub fn isolated_senders(g: &Digraph) -> Vec<NodeId> {
    g.nodes.iter().copied().filter(|&i| g.successors(i).next().is_none()).collect()
}

pub fn is_strongly_connected(g: &Digraph) -> bool {
    let Some(&root) = g.nodes.first() else {
        return true;
    };
    let reach = |forward: bool| -> usize {
        let mut seen = BTreeSet::from([root]);
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &(a, b) in &g.edges {
                let (from, to) = if forward { (a, b) } else { (b, a) };
                if from == x && seen.insert(to) {
                    stack.push(to);
                }
            }
        }
        seen.len()
    };
    reach(true) == g.nodes.len() && reach(false) == g.nodes.len()
}

/// Builds a process from a short spec: `direct:0,1,2,3`,
/// `multicast:0->1;1->0` or `multicast:@edges.graph` (relative to `base`).
pub fn from_spec(spec: &str, base: &Path) -> Result<Process, NetworkError> {
    let (kind, arg) = spec.split_once(':').ok_or_else(|| NetworkError::UnknownBuilder(spec.into()))?;
    match kind.trim() {
        "direct" => {
            let ids = arg
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<NodeId>().map_err(|_| NetworkError::Syntax {
                        line: 1,
                        message: format!("`{s}` is not a node id"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            direct_broadcast(&ids)
        }
        "multicast" => {
            let text = match arg.trim().strip_prefix('@') {
                Some(file) => {
                    let path = base.join(file);
                    std::fs::read_to_string(&path).map_err(|e| NetworkError::Io {
                        path: path.display().to_string(),
                        message: e.to_string(),
                    })?
                }
                None => arg.to_string(),
            };
            Ok(multicast(&Digraph::parse(&text)?))
        }
        _ => Err(NetworkError::UnknownBuilder(spec.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{free_channels, parse};

    #[test]
    fn four_node_direct_broadcast() {
        let d = direct_broadcast(&[0, 1, 2, 3]).unwrap();
        let text = "new m. (*m || s0 -> m || s1 -> m || s2 -> m || s3 -> m \
                    || m -> r0 || m -> r1 || m -> r2 || m -> r3)";
        assert_eq!(d, parse(text).unwrap());
    }

    #[test]
    fn small_direct_broadcasts() {
        assert_eq!(direct_broadcast(&[0]).unwrap(), parse("new m. (*m || s0 -> m || m -> r0)").unwrap());
        let two = direct_broadcast(&[0, 1]).unwrap();
        assert_eq!(free_channels(&two).len(), 4);
        assert_eq!(direct_broadcast(&[]), Err(NetworkError::NoNodes));
        assert_eq!(direct_broadcast(&[1, 1]), Err(NetworkError::DuplicateNode(1)));
    }

    #[test]
    fn four_node_multicast() {
        let m = multicast(&Digraph::diamond_ring());
        let text = "new l01. new l02. new l13. new l23. new l30. (\
            *l01 || *l02 || *l13 || *l23 || *l30 \
            || s0 => [l01, l02] || s1 => [l13] || s2 => [l23] || s3 => [l30] \
            || l01 => [r1, l13] || l02 => [r2, l23] || l13 => [r3, l30] || l23 => [r3, l30] \
            || l30 => [r0, l01, l02])";
        assert_eq!(m, parse(text).unwrap());
    }

    #[test]
    fn degenerate_topologies() {
        let ring = multicast(&Digraph::from_edges([(0, 1), (1, 0)]).unwrap());
        let text = "new l01. new l10. (*l01 || *l10 || s0 => [l01] || s1 => [l10] \
                    || l01 => [r1, l10] || l10 => [r0, l01])";
        assert_eq!(ring, parse(text).unwrap());
        let line = Digraph::from_edges([(0, 1)]).unwrap();
        let p = multicast(&line);
        assert!(p.to_string().contains("l01 => [r1]"));
        assert!(p.to_string().contains("s1 => []"));
        assert_eq!(isolated_senders(&line), vec![1]);
    }

    #[test]
    fn interfaces() {
        let g = Digraph::diamond_ring();
        let expected: BTreeSet<Channel> =
            (0..4).flat_map(|i| [send_channel(i), receive_channel(i)]).collect();
        assert_eq!(free_channels(&multicast(&g)), expected);
        assert_eq!(free_channels(&direct_broadcast(g.nodes()).unwrap()), expected);
    }

    #[test]
    fn strong_connectivity() {
        assert!(is_strongly_connected(&Digraph::diamond_ring()));
        assert!(!is_strongly_connected(&Digraph::from_edges([(0, 1)]).unwrap()));
        assert!(is_strongly_connected(&Digraph::new([7], []).unwrap()));
    }

    #[test]
    fn builder_specs() {
        let here = Path::new(".");
        assert_eq!(from_spec("direct:0,1,2,3", here).unwrap(), direct_broadcast(&[0, 1, 2, 3]).unwrap());
        let inline = from_spec("multicast:0->1;0->2;1->3;2->3;3->0", here).unwrap();
        assert_eq!(inline, multicast(&Digraph::diamond_ring()));
        assert!(matches!(from_spec("ring:3", here), Err(NetworkError::UnknownBuilder(_))));
        assert!(matches!(from_spec("multicast:@missing.graph", here), Err(NetworkError::Io { .. })));
    }

    #[test]
    fn multi_digit_names() {
        assert_eq!(send_channel(10).as_str(), "s_10");
        assert_eq!(link_channel(10, 2).as_str(), "l_10_2");
        assert_eq!(link_channel(3, 0).as_str(), "l30");
    }

    #[test]
    fn graph_text_round_trip() {
        let g = Digraph::parse("# four nodes\n0 -> 1\n0 -> 2\n1 -> 3\n2 -> 3\n3 -> 0\n").unwrap();
        assert_eq!(g, Digraph::diamond_ring());
        assert_eq!(Digraph::parse(&g.to_text()).unwrap(), g);
        let h = Digraph::parse("nodes: 0, 1, 5\n0 -> 1").unwrap();
        assert_eq!(h.nodes(), &[0, 1, 5]);
        assert_eq!(Digraph::parse(&h.to_text()).unwrap(), h);
        assert_eq!(Digraph::parse("0->1; 1->0").unwrap().edges().len(), 2);
        assert!(matches!(Digraph::parse("0 => 1"), Err(NetworkError::Syntax { line: 1, .. })));
        assert_eq!(Digraph::parse("2 -> 2"), Err(NetworkError::SelfLoop(2)));
        assert_eq!(Digraph::parse("nodes: 0\n0 -> 3").unwrap().nodes(), &[0, 3]);
        assert_eq!(Digraph::parse("nodes: 1, 1"), Err(NetworkError::DuplicateNode(1)));
        assert_eq!(Digraph::new([0], [(0, 4)]), Err(NetworkError::UnknownNode(4)));
    }
}
