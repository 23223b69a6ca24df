//! Operational semantics: compilation to nets and state-space exploration.
//!
//! Channels are unordered asynchronous bags. The environment injects
//! packets into injectable global channels (`In`, limited by per-channel
//! budgets), observes global channels by consuming a packet (`Out`), and
//! every forwarding rule fires internally (`Tau`).
//!
//! Two semantics are available. [`Semantics::Exact`] tracks multiplicities and
//! needs a capacity cap or a duplication budget to stay finite.
//! [`Semantics::Set`] tracks only presence: reading a channel with an
//! attached duplicator may leave the packet in place (a duplication could
//! have been interleaved first) or drain it, losers remove, and pure
//! duplications are elided.
//! [`validate_abstraction`] checks the two against each other on weak traces.

mod abstraction;
mod explore;
mod net;
mod options;

pub use abstraction::{validate_abstraction, weak_trace_counterexample, AbstractionReport, Inclusion};
pub use explore::{enabled, explore, Config, Explorer, Label, Layout, Lts, SemanticsError};
pub use net::{compile, Net, NetTransition, Place, PlaceId};
pub use options::{alphabet_of_size, CapPolicy, ExploreOptions, Injection, Semantics, DEFAULT_STATE_LIMIT};
