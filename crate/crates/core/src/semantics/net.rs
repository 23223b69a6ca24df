use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::lang::{desugar, Channel, Process};

pub type PlaceId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Place {
    pub channel: Channel,
    pub local: bool,
}

/// A forwarding rule: consumes one packet from `source` and emits one copy
/// into every entry of `targets` (a multiset).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetTransition {
    pub source: PlaceId,
    pub targets: Vec<PlaceId>,
}

impl NetTransition {
    /// `a => [a, a, ...]`: nothing but copies of the source.
    pub fn is_duplicator(&self) -> bool {
        self.targets.len() >= 2 && self.targets.iter().all(|&t| t == self.source)
    }

    pub fn is_loser(&self) -> bool {
        self.targets.is_empty()
    }

    /// Fires change the token count by `targets.len() - 1`.
    pub fn is_increasing(&self) -> bool {
        self.targets.len() > 1
    }
}

/// Place/transition structure of a process. Every transition has exactly
/// one input place; restriction survives only as the locality flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Net {
    pub places: Vec<Place>,
    pub transitions: Vec<NetTransition>,
}

impl Net {
    pub fn global_place(&self, channel: &Channel) -> Option<PlaceId> {
        self.places.iter().position(|p| !p.local && p.channel == *channel)
    }

    pub fn global_places(&self) -> impl Iterator<Item = PlaceId> + '_ {
        self.places.iter().enumerate().filter(|(_, p)| !p.local).map(|(i, _)| i)
    }

    pub fn local_count(&self) -> usize {
        self.places.iter().filter(|p| p.local).count()
    }

    /// A place is duplicated iff some transition reads it and emits it back
    /// at least twice.
    pub fn duplicated(&self) -> Vec<bool> {
        let mut dup = vec![false; self.places.len()];
        for t in &self.transitions {
            if t.targets.iter().filter(|&&x| x == t.source).count() >= 2 {
                dup[t.source] = true;
            }
        }
        dup
    }

    /// Global places fed by no transition other than ones reading the place
    /// itself. These form the input interface of the net.
    pub fn input_channels(&self) -> BTreeSet<Channel> {
        let mut fed = vec![false; self.places.len()];
        for t in &self.transitions {
            for &target in &t.targets {
                if target != t.source {
                    fed[target] = true;
                }
            }
        }
        self.global_places()
            .filter(|&g| !fed[g])
            .map(|g| self.places[g].channel.clone())
            .collect()
    }

    pub fn global_channels(&self) -> BTreeSet<Channel> {
        self.global_places().map(|g| self.places[g].channel.clone()).collect()
    }

    /// Adds isolated global places for any channel in `channels` that the
    /// net does not mention yet.
    pub fn with_globals<'a>(mut self, channels: impl IntoIterator<Item = &'a Channel>) -> Net {
        for c in channels {
            if self.global_place(c).is_none() {
                self.places.push(Place { channel: c.clone(), local: false });
            }
        }
        self
    }
}

/// Compiles a process into its net, desugaring first.
pub fn compile(p: &Process) -> Net {
    fn walk(
        p: &Process,
        env: &mut Vec<(Channel, PlaceId)>,
        globals: &mut HashMap<Channel, PlaceId>,
        net: &mut Net,
    ) {
        match p {
            Process::Stop => {}
            Process::Par(children) => children.iter().for_each(|c| walk(c, env, globals, net)),
            Process::New(c, body) => {
                net.places.push(Place { channel: c.clone(), local: true });
                env.push((c.clone(), net.places.len() - 1));
                walk(body, env, globals, net);
                env.pop();
            }
            Process::Distribute(a, targets) => {
                let mut place_of = |c: &Channel, net: &mut Net| -> PlaceId {
                    if let Some((_, id)) = env.iter().rev().find(|(name, _)| name == c) {
                        return *id;
                    }
                    *globals.entry(c.clone()).or_insert_with(|| {
                        net.places.push(Place { channel: c.clone(), local: false });
                        net.places.len() - 1
                    })
                };
                let source = place_of(a, net);
                let targets = targets.iter().map(|t| place_of(t, net)).collect();
                net.transitions.push(NetTransition { source, targets });
            }
            _ => unreachable!("input is desugared"),
        }
    }
    let mut net = Net { places: Vec::new(), transitions: Vec::new() };
    walk(&desugar(p), &mut Vec::new(), &mut HashMap::new(), &mut net);
    net
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    #[test]
    fn distributor_is_one_transition() {
        let net = compile(&Process::distribute("a", ["b", "c"]));
        assert_eq!(net.places.len(), 3);
        assert!(net.places.iter().all(|p| !p.local));
        assert_eq!(net.transitions, vec![NetTransition { source: 0, targets: vec![1, 2] }]);
    }

    #[test]
    fn locality_is_the_residue_of_restriction() {
        let net = compile(&parse("(new a. (a -> b || new a. a -> c)) || a -> d").unwrap());
        let names: Vec<(String, bool)> =
            net.places.iter().map(|p| (p.channel.to_string(), p.local)).collect();
        assert_eq!(
            names,
            vec![
                ("a".into(), true),
                ("b".into(), false),
                ("a".into(), true),
                ("c".into(), false),
                ("a".into(), false),
                ("d".into(), false),
            ]
        );
        assert_eq!(net.transitions.len(), 3);
    }

    #[test]
    fn input_channels_ignore_self_feeding() {
        let net = compile(&parse("+a || a => [b1, b2] || ?b1 || ?b2").unwrap());
        assert_eq!(net.input_channels(), [Channel::new("a")].into_iter().collect());
        let dup = net.duplicated();
        assert!(dup[net.global_place(&"a".into()).unwrap()]);
        assert!(!dup[net.global_place(&"b1".into()).unwrap()]);
    }

    #[test]
    fn with_globals_adds_isolated_places() {
        let net = compile(&Process::Stop).with_globals(&[Channel::new("x")]);
        assert_eq!(net.places.len(), 1);
        assert!(net.transitions.is_empty());
    }
}
