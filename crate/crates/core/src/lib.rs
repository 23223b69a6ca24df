//! Communication nets and their behavioural equivalence.
//!
//! A small process language describes networks of asynchronous channels
//! connected by forwarding rules (bridges and distributors) and made
//! unreliable by losers, duplicators and duplosers. This crate
//!
//! * parses, prints and normalizes processes ([`lang`]),
//! * compiles them to place/transition nets and explores their labelled
//!   transition systems under exact or saturated set semantics ([`semantics`]),
//! * decides weak bisimilarity, plain and up to loss, with replayable
//!   distinguishing game transcripts ([`bisim`]),
//! * rewrites terms with validated lemmas such as distributor splitting ([`rewrite`]),
//! * builds direct-broadcast and multicast-flooding networks ([`networks`]),
//! * renders nets to Graphviz DOT ([`render`]) and drives everything from a
//!   small command-line front end ([`cli`]).
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod bisim;
pub mod cli;
pub mod lang;
pub mod networks;
pub mod render;
pub mod rewrite;
pub mod semantics;

pub use bisim::{check_up_to_loss, check_weak_bisim, Verdict, Witness};
pub use lang::{normalize, parse, Channel, Packet, Process};
pub use semantics::{compile, explore, ExploreOptions, Label, Lts, Net, Semantics};
