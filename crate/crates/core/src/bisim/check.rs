use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::partition::{refine, Combined, Refinement};
use super::product::{interleave, quotient};
use super::witness::{distinguishing_game, Side, Witness};
use crate::lang::{free_channels, resugar, tidy, Channel, Process};
use crate::semantics::{
    compile, Explorer, ExploreOptions, Injection, Label, Lts, Net, Semantics, SemanticsError,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Per-packet under the set semantics with more than one packet, direct otherwise.
    #[default]
    Auto,
    /// Explore both systems over the whole alphabet.
    Direct,
    /// Explore and decide one packet at a time. Under the set semantics
    /// packets never interact, so the system over the whole alphabet is the
    /// interleaving of the single-packet systems, and it is equivalent iff
    /// every factor is. Small factor quotients are recombined and rechecked.
    PerPacket,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    /// Explored states of the left system (summed over factors).
    pub left_states: usize,
    pub left_transitions: usize,
    pub right_states: usize,
    pub right_transitions: usize,
    /// Blocks of the final partition of the checked pair.
    pub blocks: usize,
    pub rounds: usize,
    /// Number of single-packet factors; 0 for a direct check.
    pub factors: usize,
    /// States of the interleaved factor quotients, when they were small
    /// enough to be rechecked as a whole.
    pub recombined_states: Option<(usize, usize)>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub equivalent: bool,
    pub witness: Option<Witness>,
    pub stats: Stats,
}

/// A verdict together with the systems it was decided on. With the
/// per-packet strategy these are the single-packet factor that decided the
/// verdict (the last factor when all are equivalent), or the recombined
/// product when it was rechecked.
#[derive(Clone, Debug)]
pub struct Checked {
    pub verdict: Verdict,
    pub left: Lts,
    pub right: Lts,
}

impl Checked {
    /// Replays the witness, if any, against the stored systems.
    pub fn replay(&self) -> Result<(), super::witness::ReplayError> {
        match &self.verdict.witness {
            Some(w) => w.replay(&self.left, &self.right),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Checker {
    pub opts: ExploreOptions,
    pub strategy: Strategy,
    /// Attacker moves tried first when building witnesses.
    pub opening: Vec<(Side, Label)>,
}

impl Checker {
    pub fn new(opts: ExploreOptions) -> Self {
        Checker { opts, ..Default::default() }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_opening(mut self, opening: Vec<(Side, Label)>) -> Self {
        self.opening = opening;
        self
    }

    /// Nets of both processes over the union of their free channels, and
    /// the options with the injection scope resolved to a shared list.
    fn prepare(&self, p: &Process, q: &Process) -> (Net, Net, ExploreOptions) {
        let mut names: BTreeSet<Channel> = free_channels(p);
        names.extend(free_channels(q));
        let left = compile(p).with_globals(&names);
        let right = compile(q).with_globals(&names);
        let mut opts = self.opts.clone();
        if opts.injection == Injection::Inputs {
            let mut inputs = left.input_channels();
            inputs.extend(right.input_channels());
            opts.injection = Injection::Channels(inputs.into_iter().collect());
        }
        (left, right, opts)
    }

    pub fn check(&self, p: &Process, q: &Process) -> Result<Checked, SemanticsError> {
        let started = Instant::now();
        let (left_net, right_net, opts) = self.prepare(p, q);
        opts.validate().map_err(SemanticsError::InvalidOptions)?;
        let per_packet = match self.strategy {
            Strategy::Auto => opts.semantics == Semantics::Set && opts.alphabet.len() > 1,
            Strategy::Direct => false,
            Strategy::PerPacket => {
                if opts.semantics != Semantics::Set {
                    return Err(SemanticsError::InvalidOptions(
                        "the per-packet strategy requires the set semantics".into(),
                    ));
                }
                true
            }
        };
        let mut checked = if per_packet {
            self.per_packet(&left_net, &right_net, &opts)?
        } else {
            let left = Explorer::new(&left_net, &opts)?.explore()?;
            let right = Explorer::new(&right_net, &opts)?.explore()?;
            let mut stats = Stats {
                left_states: left.num_states(),
                left_transitions: left.num_transitions(),
                right_states: right.num_states(),
                right_transitions: right.num_transitions(),
                ..Default::default()
            };
            let verdict = self.decide(&left, &right, &mut stats);
            Checked { verdict, left, right }
        };
        checked.verdict.stats.elapsed = started.elapsed();
        Ok(checked)
    }

    fn decide(&self, left: &Lts, right: &Lts, stats: &mut Stats) -> Verdict {
        let graph = Combined::new(left, right);
        let refinement = refine(&graph);
        stats.blocks = stats.blocks.max(refinement.num_blocks());
        stats.rounds = stats.rounds.max(refinement.rounds());
        let equivalent = refinement.equivalent(left.initial, graph.left_len + right.initial);
        let witness = (!equivalent).then(|| {
            distinguishing_game(&graph, &refinement, left.initial, right.initial, &self.opening)
        });
        Verdict { equivalent, witness, stats: stats.clone() }
    }

    fn per_packet(&self, left_net: &Net, right_net: &Net, opts: &ExploreOptions) -> Result<Checked, SemanticsError> {
        let mut stats = Stats { factors: opts.alphabet.len(), ..Default::default() };
        let mut quotients = (Vec::new(), Vec::new());
        let mut last = None;
        for packet in &opts.alphabet {
            let single = opts.clone().with_alphabet(vec![packet.clone()]);
            let left = Explorer::new(left_net, &single)?.explore()?;
            let right = Explorer::new(right_net, &single)?.explore()?;
            stats.left_states += left.num_states();
            stats.left_transitions += left.num_transitions();
            stats.right_states += right.num_states();
            stats.right_transitions += right.num_transitions();

            let graph = Combined::new(&left, &right);
            let refinement = refine(&graph);
            stats.blocks = stats.blocks.max(refinement.num_blocks());
            stats.rounds = stats.rounds.max(refinement.rounds());
            if !refinement.equivalent(left.initial, graph.left_len + right.initial) {
                let witness =
                    distinguishing_game(&graph, &refinement, left.initial, right.initial, &self.opening);
                let verdict = Verdict { equivalent: false, witness: Some(witness), stats };
                return Ok(Checked { verdict, left, right });
            }
            let (lq, rq) = split_quotients(&left, &right, &graph, &refinement);
            quotients.0.push(lq);
            quotients.1.push(rq);
            last = Some((left, right));
        }
        let (left, right) = last.expect("nonempty alphabet");
        let size = |qs: &[Lts]| qs.iter().try_fold(1usize, |acc, q| acc.checked_mul(q.num_states()));
        let small = |n: Option<usize>| n.is_some_and(|n| n <= RECOMBINE_LIMIT);
        if !(small(size(&quotients.0)) && small(size(&quotients.1))) {
            let verdict = Verdict { equivalent: true, witness: None, stats };
            return Ok(Checked { verdict, left, right });
        }
        let left = interleave(&quotients.0);
        let right = interleave(&quotients.1);
        stats.recombined_states = Some((left.num_states(), right.num_states()));
        let verdict = self.decide(&left, &right, &mut stats);
        Ok(Checked { verdict, left, right })
    }
}

/// Largest interleaving of factor quotients that is rechecked as a whole.
pub const RECOMBINE_LIMIT: usize = 20_000;

fn split_quotients(left: &Lts, right: &Lts, graph: &Combined, refinement: &Refinement) -> (Lts, Lts) {
    let blocks: Vec<u32> = (0..graph.len()).map(|s| refinement.final_block(s)).collect();
    let (lb, rb) = blocks.split_at(graph.left_len);
    (quotient(left, lb), quotient(right, rb))
}

/// Decides `p ≈ q` under `opts`.
pub fn check_weak_bisim(p: &Process, q: &Process, opts: &ExploreOptions) -> Result<Verdict, SemanticsError> {
    Ok(Checker::new(opts.clone()).check(p, q)?.verdict)
}

/// `?c1 || ... || ?cn || p`, in name-preserving prenex form.
pub fn attach_losers(p: &Process, channels: &[Channel]) -> Process {
    let mut children: Vec<Process> = channels.iter().cloned().map(Process::lose).collect();
    children.push(p.clone());
    resugar(&tidy(&Process::par(children)))
}

/// Decides weak bisimilarity up to loss in `channels`.
pub fn check_up_to_loss(
    p: &Process,
    q: &Process,
    channels: &[Channel],
    opts: &ExploreOptions,
) -> Result<Verdict, SemanticsError> {
    check_weak_bisim(&attach_losers(p, channels), &attach_losers(q, channels), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{desugar, parse};

    fn opts() -> ExploreOptions {
        ExploreOptions::set(1)
    }

    fn check(p: &str, q: &str) -> Verdict {
        check_weak_bisim(&parse(p).unwrap(), &parse(q).unwrap(), &opts()).unwrap()
    }

    #[test]
    fn stop_stop() {
        let v = check("0", "0");
        assert!(v.equivalent);
        assert!(v.witness.is_none());
    }

    #[test]
    fn loss_on_an_interface_channel_is_observable() {
        let v = check("?a", "0");
        assert!(!v.equivalent);
        let w = v.witness.unwrap();
        assert_eq!(w.rounds[0].label, Label::In("a".into(), "p".into()));
    }

    #[test]
    fn unary_distributor_is_a_bridge() {
        assert!(check("a => [b]", "a -> b").equivalent);
    }

    #[test]
    fn verdicts_are_symmetric() {
        for (p, q) in [("?a", "0"), ("a -> b", "a => [b, b]"), ("*a || a -> b", "*a || a -> b || ?b")] {
            assert_eq!(check(p, q).equivalent, check(q, p).equivalent, "{p} vs {q}");
        }
    }

    #[test]
    fn attach_losers_shapes() {
        let p = parse("new m. (m -> r || s -> m)").unwrap();
        assert_eq!(attach_losers(&p, &[]), resugar(&tidy(&p)));
        assert_eq!(attach_losers(&Process::Stop, &["a".into()]), Process::lose("a"));
        let d = attach_losers(&p, &["r".into()]);
        assert_eq!(d.to_string(), "new m. m -> r || ?r || s -> m");
    }

    #[test]
    fn up_to_loss_with_no_channels_is_plain() {
        let (p, q) = (parse("?a").unwrap(), Process::Stop);
        assert_eq!(
            check_up_to_loss(&p, &q, &[], &opts()).unwrap().equivalent,
            check_weak_bisim(&p, &q, &opts()).unwrap().equivalent
        );
        assert!(check_up_to_loss(&p, &q, &["a".into()], &opts()).unwrap().equivalent);
    }

    #[test]
    fn strategies_agree() {
        let cases = [
            ("*m || s -> m || m => [r1, r2] || ?r1 || ?r2", "*m || s -> m || m -> r1 || m -> r2 || ?r1 || ?r2"),
            ("s => [r1, r2]", "s -> r1 || s -> r2"),
            ("*a || a -> b", "*a || a -> b || ?b"),
        ];
        for (p, q) in cases {
            let (p, q) = (parse(p).unwrap(), parse(q).unwrap());
            let o = ExploreOptions::set(2);
            let direct = Checker::new(o.clone()).with_strategy(Strategy::Direct).check(&p, &q).unwrap();
            let factored = Checker::new(o).with_strategy(Strategy::PerPacket).check(&p, &q).unwrap();
            assert_eq!(direct.verdict.equivalent, factored.verdict.equivalent);
            direct.replay().unwrap();
            factored.replay().unwrap();
        }
    }

    #[test]
    fn per_packet_rejects_exact_semantics() {
        let p = desugar(&Process::Stop);
        let err = Checker::new(ExploreOptions::exact(2)).with_strategy(Strategy::PerPacket).check(&p, &p).unwrap_err();
        assert!(matches!(err, SemanticsError::InvalidOptions(_)));
    }
}
