use serde::{Deserialize, Serialize};

use crate::lang::{Channel, Packet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Multisets of packets per channel, bounded by caps and budgets.
    Exact,
    /// Sets of packets per channel; duplicated channels may be read without consuming.
    Set,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapPolicy {
    /// Exceeding the capacity cap aborts exploration.
    Error,
    /// Multiplicities are truncated at the cap. Over-approximates loss.
    Clamp,
}

/// Which global channels the environment may inject packets into.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Injection {
    /// Global channels not fed by any other channel (see [`Net::input_channels`](super::Net::input_channels)).
    Inputs,
    /// Every global channel.
    All,
    /// Exactly these channels.
    Channels(Vec<Channel>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExploreOptions {
    pub alphabet: Vec<Packet>,
    /// Injections allowed per (injectable channel, packet).
    pub injection_budget: u8,
    pub injection: Injection,
    pub semantics: Semantics,
    /// Maximal multiplicity of a packet in a channel (exact semantics).
    pub capacity_cap: Option<u8>,
    pub cap_policy: CapPolicy,
    /// Remaining firings of net-increasing transitions (exact semantics).
    pub dup_budget: Option<u32>,
    pub state_limit: usize,
}

pub const DEFAULT_STATE_LIMIT: usize = 10_000_000;

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            alphabet: alphabet_of_size(1),
            injection_budget: 1,
            injection: Injection::Inputs,
            semantics: Semantics::Set,
            capacity_cap: Some(4),
            cap_policy: CapPolicy::Error,
            dup_budget: None,
            state_limit: DEFAULT_STATE_LIMIT,
        }
    }
}

impl ExploreOptions {
    pub fn set(alphabet_size: usize) -> Self {
        ExploreOptions { alphabet: alphabet_of_size(alphabet_size), ..Default::default() }
    }

    pub fn exact(alphabet_size: usize) -> Self {
        ExploreOptions {
            alphabet: alphabet_of_size(alphabet_size),
            semantics: Semantics::Exact,
            ..Default::default()
        }
    }

    pub fn with_budget(mut self, budget: u8) -> Self {
        self.injection_budget = budget;
        self
    }

    pub fn with_dup_budget(mut self, dups: Option<u32>) -> Self {
        self.dup_budget = dups;
        self
    }

    pub fn with_cap(mut self, cap: Option<u8>, policy: CapPolicy) -> Self {
        self.capacity_cap = cap;
        self.cap_policy = policy;
        self
    }

    pub fn with_injection(mut self, injection: Injection) -> Self {
        self.injection = injection;
        self
    }

    pub fn with_alphabet(mut self, alphabet: Vec<Packet>) -> Self {
        self.alphabet = alphabet;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.alphabet.is_empty() {
            return Err("alphabet must not be empty".into());
        }
        let mut sorted = self.alphabet.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.alphabet.len() {
            return Err("alphabet contains duplicate packets".into());
        }
        if self.capacity_cap == Some(0) {
            return Err("capacity cap must be at least 1".into());
        }
        if self.state_limit == 0 {
            return Err("state limit must be at least 1".into());
        }
        Ok(())
    }
}

/// `p`, `q`, then `p2`, `p3`, ...
pub fn alphabet_of_size(n: usize) -> Vec<Packet> {
    (0..n)
        .map(|i| match i {
            0 => Packet::new("p"),
            1 => Packet::new("q"),
            k => Packet::new(format!("p{k}")),
        })
        .collect()
}
