//! Graphviz output for nets and explored systems.
//!
//! Channels are circles labelled with their name; local channels are
//! dashed. An attached loser, duplicator or duploser is drawn as `?`, `+`
//! or `*` inside the circle instead of as a transition. Every other
//! forwarding rule is a filled box with one arc in and one arc per target.

use std::fmt::Write as _;

use crate::lang::Process;
use crate::semantics::{compile, Lts, Net};

/// What gets drawn, independent of DOT syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Drawing {
    /// `(name, local, attached mark)` per place, in net order.
    pub circles: Vec<(String, bool, Option<char>)>,
    /// `(source place, target places)` per drawn transition.
    pub boxes: Vec<(usize, Vec<usize>)>,
}

impl Drawing {
    pub fn of(net: &Net) -> Drawing {
        let mut loser = vec![false; net.places.len()];
        let mut dup = vec![false; net.places.len()];
        let mut boxes = Vec::new();
        for t in &net.transitions {
            if t.is_loser() {
                loser[t.source] = true;
            } else if t.is_duplicator() {
                dup[t.source] = true;
            } else {
                boxes.push((t.source, t.targets.clone()));
            }
        }
        let circles = net
            .places
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mark = match (loser[i], dup[i]) {
                    (true, true) => Some('*'),
                    (true, false) => Some('?'),
                    (false, true) => Some('+'),
                    (false, false) => None,
                };
                (p.channel.to_string(), p.local, mark)
            })
            .collect();
        Drawing { circles, boxes }
    }

    /// Arcs as `(from, to)` name pairs, boxes named after their source and
    /// targets. Useful for comparing drawings as multisets.
    pub fn arcs(&self) -> Vec<(String, String)> {
        let mut arcs = Vec::new();
        for (source, targets) in &self.boxes {
            let name = self.box_name(*source, targets);
            arcs.push((self.circles[*source].0.clone(), name.clone()));
            for &t in targets {
                arcs.push((name.clone(), self.circles[t].0.clone()));
            }
        }
        arcs
    }

    fn box_name(&self, source: usize, targets: &[usize]) -> String {
        let names: Vec<&str> = targets.iter().map(|&t| self.circles[t].0.as_str()).collect();
        format!("{}=>[{}]", self.circles[source].0, names.join(","))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph net {\n");
        if !self.circles.is_empty() {
            out.push_str("  node [shape=circle, fixedsize=false];\n");
        }
        for (i, (name, local, mark)) in self.circles.iter().enumerate() {
            let label = match mark {
                Some(m) => format!("{name}\\n{m}"),
                None => name.clone(),
            };
            let style = if *local { ", style=dashed" } else { "" };
            let _ = writeln!(out, "  c{i} [label=\"{label}\"{style}];");
        }
        for (k, (source, targets)) in self.boxes.iter().enumerate() {
            let _ = writeln!(
                out,
                "  t{k} [shape=box, style=filled, fillcolor=black, label=\"\", width=0.3, height=0.1];"
            );
            let _ = writeln!(out, "  c{source} -> t{k};");
            for t in targets {
                let _ = writeln!(out, "  t{k} -> c{t};");
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn net_to_dot(net: &Net) -> String {
    Drawing::of(net).to_dot()
}

pub fn process_to_dot(p: &Process) -> String {
    net_to_dot(&compile(p))
}

/// The explored system as a DOT digraph; states are labelled with their
/// markings.
pub fn lts_to_dot(lts: &Lts) -> String {
    let mut out = String::from("digraph lts {\n  node [shape=box];\n");
    for s in 0..lts.num_states() {
        let peripheries = if s == lts.initial { ", peripheries=2" } else { "" };
        let label = lts.describe_state(s).replace('"', "\\\"");
        let _ = writeln!(out, "  s{s} [label=\"{label}\"{peripheries}];");
    }
    for &(s, l, t) in &lts.transitions {
        let _ = writeln!(out, "  s{s} -> s{t} [label=\"{}\"];", lts.label(l));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    #[test]
    fn stop_is_an_empty_graph() {
        assert_eq!(process_to_dot(&Process::Stop), "digraph net {\n}\n");
    }

    #[test]
    fn marks_and_locality() {
        let d = Drawing::of(&compile(&parse("new m. (*m || s -> m || +a || ?b || a => [b, m])").unwrap()));
        assert_eq!(
            d.circles,
            vec![
                ("m".into(), true, Some('*')),
                ("s".into(), false, None),
                ("a".into(), false, Some('+')),
                ("b".into(), false, Some('?')),
            ]
        );
        assert_eq!(d.boxes, vec![(1, vec![0]), (2, vec![3, 0])]);
        let dot = d.to_dot();
        assert!(dot.contains("c0 [label=\"m\\n*\", style=dashed];"));
        assert!(dot.contains("t1 -> c3;"));
    }

    #[test]
    fn output_is_stable() {
        let p = parse("a => [b, c] || *b || c -> a").unwrap();
        assert_eq!(process_to_dot(&p), process_to_dot(&p.clone()));
    }
}
