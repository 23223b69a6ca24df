use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::net::{Net, PlaceId};
use super::options::{CapPolicy, ExploreOptions, Injection, Semantics};
use crate::lang::{Channel, Packet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("capacity exceeded: channel {channel} would hold more than {cap} copies of packet {packet}")]
    CapacityExceeded { channel: Channel, packet: Packet, cap: u8 },
    #[error("state limit of {limit} states exceeded")]
    StateLimitExceeded { limit: usize },
    #[error("invalid exploration options: {0}")]
    InvalidOptions(String),
}

/// Observable interaction with a global channel, or an internal step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Tau,
    In(Channel, Packet),
    Out(Channel, Packet),
}

impl Label {
    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }

    pub fn channel(&self) -> Option<&Channel> {
        match self {
            Label::Tau => None,
            Label::In(c, _) | Label::Out(c, _) => Some(c),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tau => f.write_str("tau"),
            Label::In(c, p) => write!(f, "In({c},{p})"),
            Label::Out(c, p) => write!(f, "Out({c},{p})"),
        }
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "tau" {
            return Ok(Label::Tau);
        }
        let (kind, rest) = s.split_once('(').ok_or_else(|| format!("malformed label `{s}`"))?;
        let inner = rest.strip_suffix(')').ok_or_else(|| format!("malformed label `{s}`"))?;
        let (c, p) = inner.split_once(',').ok_or_else(|| format!("malformed label `{s}`"))?;
        let (c, p) = (Channel::new(c.trim()), Packet::new(p.trim()));
        match kind.trim() {
            "In" => Ok(Label::In(c, p)),
            "Out" => Ok(Label::Out(c, p)),
            other => Err(format!("unknown label kind `{other}`")),
        }
    }
}

/// Dynamic state: packet multiplicities per (place, packet), remaining
/// injections per (injectable channel, packet) and the remaining budget of
/// net-increasing firings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    tokens: Box<[u8]>,
    budgets: Box<[u8]>,
    dups_left: Option<u32>,
}

impl Config {
    pub fn tokens(&self) -> &[u8] {
        &self.tokens
    }

    pub fn budgets(&self) -> &[u8] {
        &self.budgets
    }

    pub fn dups_left(&self) -> Option<u32> {
        self.dups_left
    }

    pub fn total_tokens(&self) -> usize {
        self.tokens.iter().map(|&t| t as usize).sum()
    }

    pub(crate) fn from_parts(tokens: Vec<u8>, budgets: Vec<u8>, dups_left: Option<u32>) -> Config {
        Config { tokens: tokens.into(), budgets: budgets.into(), dups_left }
    }
}

/// How to read a [`Config`]: place names, locality, alphabet and the
/// injectable places, in slot order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub places: Vec<(Channel, bool)>,
    pub alphabet: Vec<Packet>,
    pub injectable: Vec<PlaceId>,
}

impl Layout {
    pub fn tokens_of(&self, c: &Config, channel: &Channel, packet: &Packet) -> u8 {
        let Some(place) = self.places.iter().position(|(name, local)| !local && name == channel) else {
            return 0;
        };
        let Some(k) = self.alphabet.iter().position(|p| p == packet) else {
            return 0;
        };
        c.tokens[place * self.alphabet.len() + k]
    }

    pub fn budget_of(&self, c: &Config, channel: &Channel, packet: &Packet) -> u8 {
        let a = self.alphabet.len();
        let slot = self.injectable.iter().position(|&g| self.places[g].0 == *channel);
        let k = self.alphabet.iter().position(|p| p == packet);
        match (slot, k) {
            (Some(s), Some(k)) => c.budgets[s * a + k],
            _ => 0,
        }
    }

    /// Human-readable marking, e.g. `{s0:p, l01:q*2} budgets[s1:p]`.
    pub fn describe(&self, c: &Config) -> String {
        let a = self.alphabet.len();
        let mut marks = Vec::new();
        for (pi, (name, local)) in self.places.iter().enumerate() {
            for (k, packet) in self.alphabet.iter().enumerate() {
                let n = c.tokens[pi * a + k];
                if n > 0 {
                    let tag = if *local { "~" } else { "" };
                    if n == 1 {
                        marks.push(format!("{tag}{name}:{packet}"));
                    } else {
                        marks.push(format!("{tag}{name}:{packet}*{n}"));
                    }
                }
            }
        }
        let mut budgets = Vec::new();
        for (s, &g) in self.injectable.iter().enumerate() {
            for (k, packet) in self.alphabet.iter().enumerate() {
                let n = c.budgets[s * a + k];
                if n == 1 {
                    budgets.push(format!("{}:{packet}", self.places[g].0));
                } else if n > 1 {
                    budgets.push(format!("{}:{packet}*{n}", self.places[g].0));
                }
            }
        }
        let mut out = format!("{{{}}} budgets[{}]", marks.join(", "), budgets.join(", "));
        if let Some(d) = c.dups_left {
            out.push_str(&format!(" dups={d}"));
        }
        out
    }
}

/// An explored labelled transition system. Labels are interned; index 0 is
/// always `Tau`. Every state is reachable from `initial`.
#[derive(Clone, Debug)]
pub struct Lts {
    pub states: Vec<Config>,
    pub initial: usize,
    pub labels: Vec<Label>,
    /// `(source, label index, target)`, grouped by source in BFS order.
    pub transitions: Vec<(u32, u32, u32)>,
    pub layout: Arc<Layout>,
}

impl Lts {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn label(&self, id: u32) -> &Label {
        &self.labels[id as usize]
    }

    pub fn label_id(&self, label: &Label) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    pub fn describe_state(&self, s: usize) -> String {
        self.layout.describe(&self.states[s])
    }

    /// Outgoing edges per state: `(label index, target)`.
    pub fn successors(&self) -> Vec<Vec<(u32, u32)>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for &(s, l, t) in &self.transitions {
            out[s as usize].push((l, t));
        }
        out
    }

    pub fn visible_labels(&self) -> BTreeSet<Label> {
        self.labels.iter().filter(|l| !l.is_tau()).cloned().collect()
    }
}

/// Firing rules of one net under fixed options.
#[derive(Clone, Debug)]
pub struct Explorer<'a> {
    net: &'a Net,
    opts: &'a ExploreOptions,
    layout: Arc<Layout>,
    duplicated: Vec<bool>,
}

impl<'a> Explorer<'a> {
    pub fn new(net: &'a Net, opts: &'a ExploreOptions) -> Result<Self, SemanticsError> {
        opts.validate().map_err(SemanticsError::InvalidOptions)?;
        if opts.alphabet.len() * net.places.len() > u32::MAX as usize {
            return Err(SemanticsError::InvalidOptions("net too large".into()));
        }
        let injectable: Vec<PlaceId> = match &opts.injection {
            Injection::All => net.global_places().collect(),
            Injection::Inputs => {
                let inputs = net.input_channels();
                net.global_places().filter(|&g| inputs.contains(&net.places[g].channel)).collect()
            }
            Injection::Channels(list) => {
                let wanted: BTreeSet<&Channel> = list.iter().collect();
                net.global_places().filter(|&g| wanted.contains(&net.places[g].channel)).collect()
            }
        };
        let layout = Layout {
            places: net.places.iter().map(|p| (p.channel.clone(), p.local)).collect(),
            alphabet: opts.alphabet.clone(),
            injectable,
        };
        Ok(Explorer { net, opts, layout: Arc::new(layout), duplicated: net.duplicated() })
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    /// Empty marking with full injection and duplication budgets.
    pub fn initial(&self) -> Config {
        let a = self.opts.alphabet.len();
        let dups_left = match self.opts.semantics {
            Semantics::Exact => self.opts.dup_budget,
            Semantics::Set => None,
        };
        Config {
            tokens: vec![0; self.net.places.len() * a].into(),
            budgets: vec![self.opts.injection_budget; self.layout.injectable.len() * a].into(),
            dups_left,
        }
    }

    fn bump(&self, tokens: &mut [u8], place: PlaceId, k: usize) -> Result<(), SemanticsError> {
        let idx = place * self.opts.alphabet.len() + k;
        let next = tokens[idx].saturating_add(1);
        match self.opts.capacity_cap {
            Some(cap) if next > cap => match self.opts.cap_policy {
                CapPolicy::Error => Err(SemanticsError::CapacityExceeded {
                    channel: self.net.places[place].channel.clone(),
                    packet: self.opts.alphabet[k].clone(),
                    cap,
                }),
                CapPolicy::Clamp => {
                    tokens[idx] = cap;
                    Ok(())
                }
            },
            _ => {
                tokens[idx] = next;
                Ok(())
            }
        }
    }

    /// All moves from `c`, in a fixed order: injections, observations, then
    /// internal firings by transition.
    pub fn enabled(&self, c: &Config) -> Result<Vec<(Label, Config)>, SemanticsError> {
        let a = self.opts.alphabet.len();
        let set = self.opts.semantics == Semantics::Set;
        let mut moves = Vec::new();

        for (slot, &g) in self.layout.injectable.iter().enumerate() {
            for k in 0..a {
                if c.budgets[slot * a + k] == 0 {
                    continue;
                }
                let mut next = c.clone();
                next.budgets[slot * a + k] -= 1;
                if set {
                    next.tokens[g * a + k] = 1;
                } else {
                    self.bump(&mut next.tokens, g, k)?;
                }
                let label = Label::In(self.net.places[g].channel.clone(), self.opts.alphabet[k].clone());
                moves.push((label, next));
            }
        }

        for g in self.net.global_places() {
            for k in 0..a {
                if c.tokens[g * a + k] == 0 {
                    continue;
                }
                let label = Label::Out(self.net.places[g].channel.clone(), self.opts.alphabet[k].clone());
                if set && self.duplicated[g] {
                    // the observed copy may or may not have been the last one
                    moves.push((label.clone(), c.clone()));
                }
                let mut next = c.clone();
                next.tokens[g * a + k] -= 1;
                moves.push((label, next));
            }
        }

        for t in &self.net.transitions {
            for k in 0..a {
                if c.tokens[t.source * a + k] == 0 {
                    continue;
                }
                let mut next = c.clone();
                if set {
                    for &target in &t.targets {
                        next.tokens[target * a + k] = 1;
                    }
                    // a duplicated source keeps a copy or runs dry
                    if self.duplicated[t.source] && next != *c {
                        moves.push((Label::Tau, next.clone()));
                    }
                    if !t.targets.contains(&t.source) {
                        next.tokens[t.source * a + k] = 0;
                    }
                    if next == *c {
                        continue;
                    }
                } else {
                    if t.is_increasing() {
                        match next.dups_left {
                            Some(0) => continue,
                            Some(d) => next.dups_left = Some(d - 1),
                            None => {}
                        }
                    }
                    next.tokens[t.source * a + k] -= 1;
                    for &target in &t.targets {
                        self.bump(&mut next.tokens, target, k)?;
                    }
                }
                moves.push((Label::Tau, next));
            }
        }
        Ok(moves)
    }

    /// Exhaustive breadth-first exploration from [`initial`](Self::initial).
    pub fn explore(&self) -> Result<Lts, SemanticsError> {
        let init = self.initial();
        let mut index: HashMap<Config, u32> = HashMap::new();
        let mut states = vec![init.clone()];
        index.insert(init, 0);
        let mut labels = vec![Label::Tau];
        let mut label_index: HashMap<Label, u32> = HashMap::from([(Label::Tau, 0)]);
        let mut transitions = Vec::new();
        let mut queue = VecDeque::from([0u32]);
        let mut seen_edges: Vec<(u32, u32)> = Vec::new();

        while let Some(s) = queue.pop_front() {
            let moves = self.enabled(&states[s as usize])?;
            seen_edges.clear();
            for (label, next) in moves {
                let lid = *label_index.entry(label.clone()).or_insert_with(|| {
                    labels.push(label);
                    (labels.len() - 1) as u32
                });
                let target = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        if states.len() >= self.opts.state_limit {
                            return Err(SemanticsError::StateLimitExceeded { limit: self.opts.state_limit });
                        }
                        let t = states.len() as u32;
                        states.push(next.clone());
                        index.insert(next, t);
                        queue.push_back(t);
                        t
                    }
                };
                if !seen_edges.contains(&(lid, target)) {
                    seen_edges.push((lid, target));
                    transitions.push((s, lid, target));
                }
            }
        }
        Ok(Lts { states, initial: 0, labels, transitions, layout: self.layout.clone() })
    }
}

/// Moves enabled in `c`; see [`Explorer::enabled`].
pub fn enabled(net: &Net, c: &Config, opts: &ExploreOptions) -> Result<Vec<(Label, Config)>, SemanticsError> {
    Explorer::new(net, opts)?.enabled(c)
}

/// Explores the reachable part of `net` under `opts`.
pub fn explore(net: &Net, opts: &ExploreOptions) -> Result<Lts, SemanticsError> {
    Explorer::new(net, opts)?.explore()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, Process};
    use crate::semantics::compile;

    fn lts_of(text: &str, opts: &ExploreOptions) -> Lts {
        explore(&compile(&parse(text).unwrap()), opts).unwrap()
    }

    fn edges(lts: &Lts) -> Vec<(u32, String, u32)> {
        lts.transitions.iter().map(|&(s, l, t)| (s, lts.label(l).to_string(), t)).collect()
    }

    #[test]
    fn bridge_set_semantics_hand_enumeration() {
        let lts = lts_of("a -> b", &ExploreOptions::set(1));
        assert_eq!(lts.num_states(), 4);
        // s0 -In-> s1, s1 -Out(a)-> s2 (spent), s1 -tau-> s3 (p in b), s3 -Out(b)-> s2
        assert_eq!(
            edges(&lts),
            vec![
                (0, "In(a,p)".to_string(), 1),
                (1, "Out(a,p)".to_string(), 2),
                (1, "tau".to_string(), 3),
                (3, "Out(b,p)".to_string(), 2),
            ]
        );
        let empty = lts.describe_state(2);
        assert_eq!(empty, "{} budgets[]");
        assert_eq!(lts.describe_state(3), "{b:p} budgets[]");
    }

    #[test]
    fn stop_has_one_state() {
        let lts = lts_of("0", &ExploreOptions::set(1));
        assert_eq!((lts.num_states(), lts.num_transitions()), (1, 0));
    }

    #[test]
    fn loser_hand_enumeration() {
        let lts = lts_of("?a", &ExploreOptions::set(1));
        assert_eq!(lts.num_states(), 3);
        assert_eq!(
            edges(&lts),
            vec![(0, "In(a,p)".to_string(), 1), (1, "Out(a,p)".to_string(), 2), (1, "tau".to_string(), 2)]
        );
    }

    #[test]
    fn enabled_examples() {
        let net = compile(&Process::bridge("a", "b"));
        let opts = ExploreOptions::set(1);
        let ex = Explorer::new(&net, &opts).unwrap();
        // a:{p}, budget spent
        let c = Config::from_parts(vec![1, 0], vec![0], None);
        let moves = ex.enabled(&c).unwrap();
        assert_eq!(moves.len(), 2);
        assert_eq!(moves[0], (Label::Out("a".into(), "p".into()), Config::from_parts(vec![0, 0], vec![0], None)));
        assert_eq!(moves[1], (Label::Tau, Config::from_parts(vec![0, 1], vec![0], None)));

        let net = compile(&Process::lose("a"));
        let ex = Explorer::new(&net, &opts).unwrap();
        let moves = ex.enabled(&Config::from_parts(vec![1], vec![0], None)).unwrap();
        let labels: Vec<String> = moves.iter().map(|(l, _)| l.to_string()).collect();
        assert_eq!(labels, ["Out(a,p)", "tau"]);
        assert!(moves.iter().all(|(_, c)| c.total_tokens() == 0));

        let dead = Config::from_parts(vec![0], vec![0], None);
        assert!(ex.enabled(&dead).unwrap().is_empty());
    }

    #[test]
    fn set_semantics_may_keep_or_drain_duplicated_sources() {
        let lts = lts_of("+a || a -> b", &ExploreOptions::set(1));
        let full = lts.states.iter().position(|c| lts.layout.describe(c) == "{a:p} budgets[]").unwrap();
        let mut moves: Vec<String> = lts
            .transitions
            .iter()
            .filter(|t| t.0 as usize == full)
            .map(|&(_, l, t)| format!("{} {}", lts.label(l), lts.describe_state(t as usize)))
            .collect();
        moves.sort();
        assert_eq!(
            moves,
            [
                "Out(a,p) {a:p} budgets[]",
                "Out(a,p) {} budgets[]",
                "tau {a:p, b:p} budgets[]",
                "tau {b:p} budgets[]",
            ]
        );
        assert_eq!(lts.num_states(), 5);
    }

    #[test]
    fn exact_capacity_error_and_clamp() {
        let net = compile(&parse("+a").unwrap());
        let err = explore(&net, &ExploreOptions::exact(1).with_cap(Some(2), CapPolicy::Error)).unwrap_err();
        assert!(matches!(err, SemanticsError::CapacityExceeded { cap: 2, .. }));
        let lts = explore(&net, &ExploreOptions::exact(1).with_cap(Some(2), CapPolicy::Clamp)).unwrap();
        // empty/full, a*1, a*2 (clamped dup is a self-loop), then Out back down
        assert_eq!(lts.num_states(), 4);
        let lts = explore(&net, &ExploreOptions::exact(1).with_cap(None, CapPolicy::Error).with_dup_budget(Some(2)))
            .unwrap();
        assert!(lts.states.iter().all(|c| c.total_tokens() <= 3));
    }

    #[test]
    fn exact_token_accounting_per_step() {
        let net = compile(&parse("*m || s -> m || m => [r1, r2] || ?r1").unwrap());
        let opts = ExploreOptions::exact(2).with_dup_budget(Some(2)).with_cap(Some(8), CapPolicy::Error);
        let lts = explore(&net, &opts).unwrap();
        for &(s, l, t) in &lts.transitions {
            let before = lts.states[s as usize].total_tokens() as i64;
            let after = lts.states[t as usize].total_tokens() as i64;
            let delta = after - before;
            match lts.label(l) {
                Label::In(..) => assert_eq!(delta, 1),
                Label::Out(..) => assert_eq!(delta, -1),
                Label::Tau => assert!([-1, 0, 1].contains(&delta)),
            }
        }
    }

    #[test]
    fn state_limit() {
        let net = compile(&parse("a -> b").unwrap());
        let opts = ExploreOptions { state_limit: 2, ..ExploreOptions::set(1) };
        assert_eq!(explore(&net, &opts).unwrap_err(), SemanticsError::StateLimitExceeded { limit: 2 });
    }

    #[test]
    fn label_round_trip() {
        for l in [Label::Tau, Label::In("s0".into(), "p".into()), Label::Out("r_10".into(), "q".into())] {
            assert_eq!(l.to_string().parse::<Label>().unwrap(), l);
        }
        assert!("Foo(a,p)".parse::<Label>().is_err());
    }
}
