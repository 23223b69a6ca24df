//! Weak bisimilarity, plain and up to loss.
//!
//! Both systems are explored under the same options, placed side by side
//! and refined by signatures until stable (see [`refine`]). When the
//! initial states end up in different blocks, the recorded partition
//! history is replayed as an attacker/defender game to produce a
//! [`Witness`] that can be checked against the explored systems.

mod check;
mod partition;
mod product;
mod saturate;
mod witness;

pub use check::{attach_losers, check_up_to_loss, check_weak_bisim, Checked, Checker, Stats, Strategy, Verdict, RECOMBINE_LIMIT};
pub use partition::{refine, Combined, Refinement};
pub use product::{interleave, quotient};
pub use saturate::{saturate, WeakLts};
pub use witness::{distinguishing_game, ReplayError, Round, Side, Witness};
