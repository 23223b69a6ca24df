//! Random processes for the property and acceptance tests.

#![allow(dead_code)]

use netbisim::lang::{Channel, Process};
use rand::seq::SliceRandom;
use rand::Rng;

pub const CHANNELS: [&str; 4] = ["a", "b", "c", "d"];

fn channel(rng: &mut impl Rng, pool: &[&str]) -> Channel {
    Channel::new(*pool.choose(rng).expect("nonempty pool"))
}

/// One component over `pool`: a bridge, a distributor, or a loser,
/// duplicator or duploser.
pub fn component(rng: &mut impl Rng, pool: &[&str]) -> Process {
    let a = channel(rng, pool);
    match rng.gen_range(0..6) {
        0 | 1 => Process::bridge(a, channel(rng, pool)),
        2 => {
            let n = rng.gen_range(0..=3);
            let targets: Vec<Channel> = (0..n).map(|_| channel(rng, pool)).collect();
            Process::Distribute(a, targets)
        }
        3 => Process::lose(a),
        4 => Process::dup(a),
        _ => Process::duplose(a),
    }
}

/// At most `max_components` components over at most 4 channels, possibly
/// with one restricted channel.
pub fn process(rng: &mut impl Rng, max_components: usize) -> Process {
    let width = rng.gen_range(1..=CHANNELS.len());
    let pool = &CHANNELS[..width];
    let n = rng.gen_range(1..=max_components);
    let body = Process::par((0..n).map(|_| component(rng, pool)));
    if rng.gen_bool(0.3) {
        Process::new_channel(channel(rng, pool), body)
    } else {
        body
    }
}

/// A random regrouping of the same syntax: children shuffled and split
/// into nested groups, with `0` units sprinkled in.
pub fn reassociate(rng: &mut impl Rng, p: &Process) -> Process {
    match p {
        Process::Par(children) => {
            let mut kids: Vec<Process> = children.iter().map(|c| reassociate(rng, c)).collect();
            kids.shuffle(rng);
            if rng.gen_bool(0.3) {
                kids.push(Process::Stop);
            }
            if kids.len() > 2 && rng.gen_bool(0.5) {
                let cut = rng.gen_range(1..kids.len());
                let tail = kids.split_off(cut);
                kids.push(Process::Par(tail));
            }
            Process::Par(kids)
        }
        Process::New(c, body) => Process::New(c.clone(), Box::new(reassociate(rng, body))),
        other => other.clone(),
    }
}

/// Renames every restricted channel to a fresh name.
pub fn rename_bound(p: &Process, counter: &mut usize) -> Process {
    fn subst(p: &Process, from: &Channel, to: &Channel) -> Process {
        let s = |c: &Channel| if c == from { to.clone() } else { c.clone() };
        match p {
            Process::Stop => Process::Stop,
            Process::Par(cs) => Process::Par(cs.iter().map(|c| subst(c, from, to)).collect()),
            Process::New(c, body) if c == from => Process::New(c.clone(), body.clone()),
            Process::New(c, body) => Process::New(c.clone(), Box::new(subst(body, from, to))),
            Process::Distribute(a, ts) => Process::Distribute(s(a), ts.iter().map(s).collect()),
            Process::Bridge(a, b) => Process::Bridge(s(a), s(b)),
            Process::Lose(a) => Process::Lose(s(a)),
            Process::Dup(a) => Process::Dup(s(a)),
            Process::Duplose(a) => Process::Duplose(s(a)),
        }
    }
    match p {
        Process::Par(cs) => Process::Par(cs.iter().map(|c| rename_bound(c, counter)).collect()),
        Process::New(c, body) => {
            *counter += 1;
            let fresh = Channel::new(format!("fresh{counter}"));
            let body = rename_bound(body, counter);
            Process::New(fresh.clone(), Box::new(subst(&body, c, &fresh)))
        }
        other => other.clone(),
    }
}
