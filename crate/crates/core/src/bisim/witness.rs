//! Distinguishing games.
//!
//! At a position `(x, y)` first separated in round `k`, one side has a weak
//! move whose target lies in a block of round `k - 1` that no matching weak
//! move of the other side reaches. The attacker plays it, the defender
//! answers with the response that survives longest, and the game continues
//! from the new position at a strictly smaller level. It ends when the
//! attacker plays a visible move that has no response at all.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::partition::{Combined, Refinement};
use super::saturate::weak_moves;
use crate::semantics::{Label, Lts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// One round of the game. State indices refer to the left and right
/// systems separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub left: usize,
    pub right: usize,
    /// Partition round at which `left` and `right` were first separated.
    pub level: usize,
    pub attacker: Side,
    pub label: Label,
    /// Attacker's state after the weak move.
    pub target: usize,
    /// Every state the defender reaches by the same weak move.
    pub responses: Vec<usize>,
    /// The response the game continues with; `None` in the final round.
    pub continuation: Option<usize>,
}

impl Round {
    fn state_of(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub rounds: Vec<Round>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("witness has no rounds")]
    Empty,
    #[error("round {round}: position ({left}, {right}) does not follow from the previous round")]
    Position { round: usize, left: usize, right: usize },
    #[error("round {round}: {side} state {from} has no weak move {label} to {to}")]
    MissingMove { round: usize, side: Side, from: usize, label: Label, to: usize },
    #[error("round {round}: listed responses differ from the weak {label} moves of the defender")]
    Responses { round: usize, label: Label },
    #[error("round {round}: continuation is not among the responses")]
    Continuation { round: usize },
    #[error("final round must be a visible move without responses")]
    Unfinished,
}

impl Witness {
    /// Visible labels along the game, in order.
    pub fn trace(&self) -> Vec<Label> {
        self.rounds.iter().filter(|r| !r.label.is_tau()).map(|r| r.label.clone()).collect()
    }

    /// States the given side visits, starting with its initial state.
    pub fn states_of(&self, side: Side) -> Vec<usize> {
        let mut v: Vec<usize> = self.rounds.iter().map(|r| r.state_of(side)).collect();
        if let Some(last) = self.rounds.last() {
            if last.attacker == side {
                v.push(last.target);
            }
        }
        v
    }

    /// Checks every move against the systems: attacker moves exist, the
    /// responses are exactly the defender's matching weak moves, the game
    /// starts at the initial states and ends with an unanswerable move.
    pub fn replay(&self, left: &Lts, right: &Lts) -> Result<(), ReplayError> {
        if self.rounds.is_empty() {
            return Err(ReplayError::Empty);
        }
        let succ = [left.successors(), right.successors()];
        let labels = [&left.labels, &right.labels];
        let side_ix = |s: Side| match s {
            Side::Left => 0,
            Side::Right => 1,
        };
        let weak_targets = |i: usize, from: usize, label: &Label| -> Vec<usize> {
            let Some(id) = labels[i].iter().position(|l| l == label) else {
                return Vec::new();
            };
            weak_moves(&succ[i], from as u32)
                .into_iter()
                .filter(|(l, _)| *l as usize == id)
                .map(|(_, t)| t as usize)
                .collect()
        };

        let mut expected = (left.initial, right.initial);
        for (round, r) in self.rounds.iter().enumerate() {
            if (r.left, r.right) != expected {
                return Err(ReplayError::Position { round, left: r.left, right: r.right });
            }
            let a = side_ix(r.attacker);
            let from = r.state_of(r.attacker);
            if !weak_targets(a, from, &r.label).contains(&r.target) {
                return Err(ReplayError::MissingMove {
                    round,
                    side: r.attacker,
                    from,
                    label: r.label.clone(),
                    to: r.target,
                });
            }
            let d = 1 - a;
            let responses = weak_targets(d, r.state_of(r.attacker.other()), &r.label);
            if responses != r.responses {
                return Err(ReplayError::Responses { round, label: r.label.clone() });
            }
            match r.continuation {
                Some(c) if !responses.contains(&c) => return Err(ReplayError::Continuation { round }),
                Some(c) => {
                    expected = match r.attacker {
                        Side::Left => (r.target, c),
                        Side::Right => (c, r.target),
                    }
                }
                None if round + 1 == self.rounds.len() => {}
                None => return Err(ReplayError::Continuation { round }),
            }
        }
        let last = self.rounds.last().expect("nonempty");
        if last.continuation.is_some() || !last.responses.is_empty() || last.label.is_tau() {
            return Err(ReplayError::Unfinished);
        }
        Ok(())
    }

    /// Multi-line human-readable transcript.
    pub fn render(&self, left: &Lts, right: &Lts) -> String {
        let mut out = String::new();
        for (i, r) in self.rounds.iter().enumerate() {
            let (mover, other) = match r.attacker {
                Side::Left => (left, right),
                Side::Right => (right, left),
            };
            out.push_str(&format!(
                "round {i}: left {} | right {}\n  {} plays {} to {}\n",
                left.describe_state(r.left),
                right.describe_state(r.right),
                r.attacker,
                r.label,
                mover.describe_state(r.target),
            ));
            match r.continuation {
                Some(c) => out.push_str(&format!(
                    "  {} answers with {} of {} responses: {}\n",
                    r.attacker.other(),
                    r.label,
                    r.responses.len(),
                    other.describe_state(c)
                )),
                None => out.push_str(&format!("  {} cannot answer\n", r.attacker.other())),
            }
        }
        out
    }
}

/// Preference order of attacks: defence, tau last, side, label, target.
type AttackKey = (usize, bool, Side, Label, usize);

struct Attack {
    side: Side,
    label: u32,
    target: usize,
    /// Defender responses with their separation level.
    scored: Vec<(usize, usize)>,
}

impl Attack {
    fn defence(&self) -> usize {
        self.scored.iter().map(|&(_, lvl)| lvl).max().unwrap_or(0)
    }

    /// The response that survives longest; ties go to the lower index.
    fn continuation(&self) -> Option<usize> {
        self.scored.iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))).map(|&(u, _)| u)
    }

    fn next_position(&self) -> Option<(usize, usize)> {
        self.continuation().map(|c| match self.side {
            Side::Left => (self.target, c),
            Side::Right => (c, self.target),
        })
    }
}

struct Game<'a> {
    graph: &'a Combined,
    refinement: &'a Refinement,
    cache: BTreeMap<usize, Vec<(u32, u32)>>,
}

impl Game<'_> {
    fn moves(&mut self, s: usize) -> Vec<(u32, u32)> {
        let graph = self.graph;
        self.cache.entry(s).or_insert_with(|| weak_moves(&graph.succ, s as u32)).clone()
    }

    /// Attacks by `side` from `(x, y)`. With `level = Some(k)` the target
    /// must escape every response in the partition of round `k - 1`;
    /// with `None` every response must merely be inequivalent.
    fn attacks(&mut self, x: usize, y: usize, side: Side, level: Option<usize>) -> Vec<Attack> {
        let (a, d) = match side {
            Side::Left => (x, y),
            Side::Right => (y, x),
        };
        let attacker_moves = self.moves(a);
        let defender_moves = self.moves(d);
        let r = self.refinement;
        let mut out = Vec::new();
        for &(l, t) in &attacker_moves {
            let t = t as usize;
            let responses = defender_moves.iter().filter(|(dl, _)| *dl == l).map(|&(_, u)| u as usize);
            let pair = |u: usize| if side == Side::Left { (t, u) } else { (u, t) };
            let mut scored = Vec::new();
            let mut winning = true;
            for u in responses {
                let (lx, ry) = pair(u);
                let escapes = match level {
                    Some(k) => r.block_at(k - 1, lx) != r.block_at(k - 1, ry),
                    None => !r.equivalent(lx, ry),
                };
                if !escapes {
                    winning = false;
                    break;
                }
                scored.push((u, r.separation(lx, ry).expect("inequivalent")));
            }
            if winning {
                out.push(Attack { side, label: l, target: t, scored });
            }
        }
        out
    }
}

/// Builds the game transcript for two inequivalent initial states of
/// `graph`.
///
/// `opening` is a list of attacker moves to try first, in order. Each is
/// played if it leads only to inequivalent positions, preferring targets
/// from which the next opening move is again playable; the first move
/// that is not playable ends the opening. The rest of the game descends
/// through the partition levels, choosing the shortest win.
pub fn distinguishing_game(
    graph: &Combined,
    refinement: &Refinement,
    left_initial: usize,
    right_initial: usize,
    opening: &[(Side, Label)],
) -> Witness {
    let off = graph.left_len;
    let local = |s: usize| if s >= off { s - off } else { s };
    let mut game = Game { graph, refinement, cache: BTreeMap::new() };
    let (mut x, mut y) = (left_initial, off + right_initial);
    let mut rounds = Vec::new();
    let label_id = |l: &Label| graph.labels.iter().position(|g| g == l).map(|i| i as u32);

    let record = |rounds: &mut Vec<Round>, x: usize, y: usize, attack: &Attack| {
        rounds.push(Round {
            left: x,
            right: y - off,
            level: refinement.separation(x, y).expect("separated position"),
            attacker: attack.side,
            label: graph.labels[attack.label as usize].clone(),
            target: local(attack.target),
            responses: attack.scored.iter().map(|&(u, _)| local(u)).collect(),
            continuation: attack.continuation().map(local),
        });
    };

    for (i, (side, label)) in opening.iter().enumerate() {
        let Some(lid) = label_id(label) else { break };
        let mut options: Vec<Attack> =
            game.attacks(x, y, *side, None).into_iter().filter(|a| a.label == lid).collect();
        if options.is_empty() {
            break;
        }
        options.sort_by_key(|a| (a.defence(), a.target));
        let chosen = match opening.get(i + 1) {
            Some((next_side, next_label)) => {
                let next_id = label_id(next_label);
                let playable = |game: &mut Game, a: &Attack| -> bool {
                    match (a.next_position(), next_id) {
                        (Some((nx, ny)), Some(nid)) => {
                            game.attacks(nx, ny, *next_side, None).iter().any(|b| b.label == nid)
                        }
                        _ => false,
                    }
                };
                let pick = (0..options.len()).find(|&j| playable(&mut game, &options[j])).unwrap_or(0);
                options.swap_remove(pick)
            }
            None => options.swap_remove(0),
        };
        record(&mut rounds, x, y, &chosen);
        match chosen.next_position() {
            Some((nx, ny)) => (x, y) = (nx, ny),
            None => return Witness { rounds },
        }
    }

    while let Some(k) = refinement.separation(x, y) {
        assert!(k > 0, "round 0 is the trivial partition");
        let mut best: Option<(AttackKey, Attack)> = None;
        for side in [Side::Left, Side::Right] {
            for attack in game.attacks(x, y, side, Some(k)) {
                let label = graph.labels[attack.label as usize].clone();
                let key = (attack.defence(), label.is_tau(), side, label, attack.target);
                if best.as_ref().is_none_or(|(b, _)| key < *b) {
                    best = Some((key, attack));
                }
            }
        }
        let (_, attack) = best.expect("separated positions have a winning move");
        record(&mut rounds, x, y, &attack);
        match attack.next_position() {
            Some((nx, ny)) => (x, y) = (nx, ny),
            None => break,
        }
    }
    Witness { rounds }
}
