use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A channel name. Names are compared by exact string equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Channel(String);

impl Channel {
    pub fn new(name: impl Into<String>) -> Self {
        Channel(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Whether `name` is usable as a channel identifier (`[a-zA-Z0-9_]+`, not a keyword).
    pub fn is_valid_name(name: &str) -> bool {
        !name.is_empty()
            && name != "new"
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Channel {
    fn from(s: &str) -> Self {
        Channel::new(s)
    }
}

impl From<String> for Channel {
    fn from(s: String) -> Self {
        Channel::new(s)
    }
}

/// An opaque packet symbol drawn from the exploration alphabet.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Packet(String);

impl Packet {
    pub fn new(symbol: impl Into<String>) -> Self {
        Packet(symbol.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Packet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Packet {
    fn from(s: &str) -> Self {
        Packet::new(s)
    }
}

impl From<String> for Packet {
    fn from(s: String) -> Self {
        Packet::new(s)
    }
}

/// Abstract syntax of communication processes.
///
/// Only `Stop`, `Par`, `New` and `Distribute` are semantic primitives; the
/// remaining variants are sugar removed by [`desugar`](crate::lang::desugar).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Process {
    Stop,
    Par(Vec<Process>),
    New(Channel, Box<Process>),
    Distribute(Channel, Vec<Channel>),
    Bridge(Channel, Channel),
    Lose(Channel),
    Dup(Channel),
    Duplose(Channel),
}

impl Process {
    pub fn par(children: impl IntoIterator<Item = Process>) -> Process {
        Process::Par(children.into_iter().collect())
    }

    pub fn new_channel(channel: impl Into<Channel>, body: Process) -> Process {
        Process::New(channel.into(), Box::new(body))
    }

    pub fn distribute<C: Into<Channel>>(
        source: impl Into<Channel>,
        targets: impl IntoIterator<Item = C>,
    ) -> Process {
        Process::Distribute(source.into(), targets.into_iter().map(Into::into).collect())
    }

    pub fn bridge(source: impl Into<Channel>, target: impl Into<Channel>) -> Process {
        Process::Bridge(source.into(), target.into())
    }

    pub fn lose(channel: impl Into<Channel>) -> Process {
        Process::Lose(channel.into())
    }

    pub fn dup(channel: impl Into<Channel>) -> Process {
        Process::Dup(channel.into())
    }

    pub fn duplose(channel: impl Into<Channel>) -> Process {
        Process::Duplose(channel.into())
    }

    /// Wraps `body` in one restriction per channel, outermost first.
    pub fn restrict_all<C: Into<Channel>>(channels: impl IntoIterator<Item = C>, body: Process) -> Process {
        let channels: Vec<Channel> = channels.into_iter().map(Into::into).collect();
        channels
            .into_iter()
            .rev()
            .fold(body, |acc, c| Process::New(c, Box::new(acc)))
    }

    /// Number of AST nodes, used to bound random generation and report sizes.
    pub fn size(&self) -> usize {
        match self {
            Process::Par(children) => 1 + children.iter().map(Process::size).sum::<usize>(),
            Process::New(_, body) => 1 + body.size(),
            _ => 1,
        }
    }
}

/// Channels occurring in `p` that are not bound by an enclosing restriction.
pub fn free_channels(p: &Process) -> BTreeSet<Channel> {
    fn walk(p: &Process, bound: &mut Vec<Channel>, out: &mut BTreeSet<Channel>) {
        let note = |c: &Channel, bound: &Vec<Channel>, out: &mut BTreeSet<Channel>| {
            if !bound.contains(c) {
                out.insert(c.clone());
            }
        };
        match p {
            Process::Stop => {}
            Process::Par(children) => {
                for child in children {
                    walk(child, bound, out);
                }
            }
            Process::New(c, body) => {
                bound.push(c.clone());
                walk(body, bound, out);
                bound.pop();
            }
            Process::Distribute(a, targets) => {
                note(a, bound, out);
                for t in targets {
                    note(t, bound, out);
                }
            }
            Process::Bridge(a, b) => {
                note(a, bound, out);
                note(b, bound, out);
            }
            Process::Lose(a) | Process::Dup(a) | Process::Duplose(a) => note(a, bound, out),
        }
    }
    let mut out = BTreeSet::new();
    walk(p, &mut Vec::new(), &mut out);
    out
}

/// Rewrites sugar into the `Stop`/`Par`/`New`/`Distribute` core.
pub fn desugar(p: &Process) -> Process {
    match p {
        Process::Stop => Process::Stop,
        Process::Par(children) => Process::Par(children.iter().map(desugar).collect()),
        Process::New(c, body) => Process::New(c.clone(), Box::new(desugar(body))),
        Process::Distribute(a, targets) => Process::Distribute(a.clone(), targets.clone()),
        Process::Bridge(a, b) => Process::Distribute(a.clone(), vec![b.clone()]),
        Process::Lose(a) => Process::Distribute(a.clone(), vec![]),
        Process::Dup(a) => Process::Distribute(a.clone(), vec![a.clone(), a.clone()]),
        Process::Duplose(a) => Process::Par(vec![
            Process::Distribute(a.clone(), vec![]),
            Process::Distribute(a.clone(), vec![a.clone(), a.clone()]),
        ]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> BTreeSet<Channel> {
        names.iter().map(|n| Channel::new(*n)).collect()
    }

    #[test]
    fn free_channels_examples() {
        assert!(free_channels(&Process::Stop).is_empty());
        let p = Process::new_channel(
            "m",
            Process::par([Process::bridge("s0", "m"), Process::bridge("m", "r0")]),
        );
        assert_eq!(free_channels(&p), set(&["s0", "r0"]));
        assert_eq!(free_channels(&Process::distribute("a", ["a", "a"])), set(&["a"]));
    }

    #[test]
    fn shadowing_hides_only_inner_occurrences() {
        // a is free in the left component, bound on the right
        let p = Process::par([
            Process::bridge("a", "b"),
            Process::new_channel("a", Process::bridge("a", "c")),
        ]);
        assert_eq!(free_channels(&p), set(&["a", "b", "c"]));
        let q = Process::new_channel("a", Process::new_channel("a", Process::lose("a")));
        assert!(free_channels(&q).is_empty());
    }

    #[test]
    fn desugar_examples() {
        assert_eq!(desugar(&Process::bridge("a", "b")), Process::distribute("a", ["b"]));
        assert_eq!(
            desugar(&Process::duplose("m")),
            Process::par([
                Process::distribute("m", Vec::<Channel>::new()),
                Process::distribute("m", ["m", "m"]),
            ])
        );
        assert_eq!(desugar(&Process::Stop), Process::Stop);
        assert_eq!(desugar(&Process::lose("a")), Process::distribute("a", Vec::<Channel>::new()));
        assert_eq!(desugar(&Process::dup("a")), Process::distribute("a", ["a", "a"]));
    }

    #[test]
    fn channel_name_validity() {
        assert!(Channel::is_valid_name("l_10_2"));
        assert!(!Channel::is_valid_name(""));
        assert!(!Channel::is_valid_name("new"));
        assert!(!Channel::is_valid_name("a-b"));
    }
}
