//! Structural normal forms.
//!
//! Every process is structurally congruent to a prenex form
//! `new x1. ... new xk. (A1 || ... || An)` where each `Ai` is a distributor:
//! restrictions can always be extruded because the language has no prefixes.
//! [`tidy`] computes that form while keeping channel names readable;
//! [`normalize`] additionally renames the bound channels canonically so that
//! alpha-equivalent and AC-equivalent terms get identical results.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ast::{desugar, free_channels, Channel, Process};

/// A core distributor `source => [targets]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub source: Channel,
    pub targets: Vec<Channel>,
}

impl Atom {
    pub fn new(source: Channel, mut targets: Vec<Channel>) -> Self {
        targets.sort();
        Atom { source, targets }
    }

    pub fn to_process(&self) -> Process {
        Process::Distribute(self.source.clone(), self.targets.clone())
    }

    pub fn mentions(&self, c: &Channel) -> bool {
        self.source == *c || self.targets.contains(c)
    }

    fn key(&self) -> String {
        self.to_process().to_string()
    }
}

/// Restriction-prenex form: binders (outermost first) over a sorted multiset of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prenex {
    pub binders: Vec<Channel>,
    pub atoms: Vec<Atom>,
}

impl Prenex {
    /// Extrudes all restrictions of `p`, renaming binders only where they
    /// would clash, and drops binders that no atom uses.
    pub fn of(p: &Process) -> Prenex {
        let core = desugar(p);
        let mut all_names = BTreeSet::new();
        collect_names(&core, &mut all_names);
        let mut taken: BTreeSet<Channel> = free_channels(&core);
        let mut binders = Vec::new();
        let mut atoms = Vec::new();
        let mut env: Vec<(Channel, Channel)> = Vec::new();
        extrude(&core, &mut env, &mut taken, &all_names, &mut binders, &mut atoms);
        let mut prenex = Prenex { binders, atoms };
        prenex.retain_used_binders();
        prenex.sort();
        prenex
    }

    pub fn to_process(&self) -> Process {
        let body = match self.atoms.len() {
            0 => Process::Stop,
            1 => self.atoms[0].to_process(),
            _ => Process::Par(self.atoms.iter().map(Atom::to_process).collect()),
        };
        Process::restrict_all(self.binders.iter().cloned(), body)
    }

    pub fn is_bound(&self, c: &Channel) -> bool {
        self.binders.contains(c)
    }

    pub fn retain_used_binders(&mut self) {
        let atoms = &self.atoms;
        self.binders.retain(|b| atoms.iter().any(|a| a.mentions(b)));
    }

    pub fn sort(&mut self) {
        for a in &mut self.atoms {
            a.targets.sort();
        }
        self.atoms.sort_by_cached_key(Atom::key);
    }
}

fn collect_names(p: &Process, out: &mut BTreeSet<Channel>) {
    match p {
        Process::Stop => {}
        Process::Par(children) => children.iter().for_each(|c| collect_names(c, out)),
        Process::New(c, body) => {
            out.insert(c.clone());
            collect_names(body, out);
        }
        Process::Distribute(a, ts) => {
            out.insert(a.clone());
            out.extend(ts.iter().cloned());
        }
        Process::Bridge(a, b) => {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        Process::Lose(a) | Process::Dup(a) | Process::Duplose(a) => {
            out.insert(a.clone());
        }
    }
}

fn fresh_name(base: &Channel, taken: &BTreeSet<Channel>, all: &BTreeSet<Channel>) -> Channel {
    if !taken.contains(base) {
        return base.clone();
    }
    (1..)
        .map(|k| Channel::new(format!("{}_{k}", base.as_str())))
        .find(|c| !taken.contains(c) && !all.contains(c))
        .expect("unbounded supply of names")
}

fn extrude(
    p: &Process,
    env: &mut Vec<(Channel, Channel)>,
    taken: &mut BTreeSet<Channel>,
    all: &BTreeSet<Channel>,
    binders: &mut Vec<Channel>,
    atoms: &mut Vec<Atom>,
) {
    let resolve = |c: &Channel, env: &Vec<(Channel, Channel)>| {
        env.iter()
            .rev()
            .find(|(from, _)| from == c)
            .map(|(_, to)| to.clone())
            .unwrap_or_else(|| c.clone())
    };
    match p {
        Process::Stop => {}
        Process::Par(children) => {
            for child in children {
                extrude(child, env, taken, all, binders, atoms);
            }
        }
        Process::New(c, body) => {
            let name = fresh_name(c, taken, all);
            taken.insert(name.clone());
            binders.push(name.clone());
            env.push((c.clone(), name));
            extrude(body, env, taken, all, binders, atoms);
            env.pop();
        }
        Process::Distribute(a, ts) => {
            let source = resolve(a, env);
            let targets = ts.iter().map(|t| resolve(t, env)).collect();
            atoms.push(Atom::new(source, targets));
        }
        _ => unreachable!("input is desugared"),
    }
}

/// Name-preserving structural normal form: desugared, prenex, flattened,
/// without `Stop` components or unused binders, atoms sorted.
pub fn tidy(p: &Process) -> Process {
    Prenex::of(p).to_process()
}

/// Canonical normal form; `normalize(p) == normalize(q)` whenever `p` and `q`
/// differ only by AC of `||`, units, scope extrusion, target order or
/// renaming of restricted channels.
pub fn normalize(p: &Process) -> Process {
    canonical_prenex(&Prenex::of(p)).to_process()
}

/// Upper bound on bound-channel orderings tried when breaking symmetric ties.
const ORDERING_LIMIT: usize = 40_320;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Ref {
    Free(String),
    Bound(usize),
}

/// Renames the binders of `prenex` to canonical names.
pub fn canonical_prenex(prenex: &Prenex) -> Prenex {
    let index: HashMap<&Channel, usize> =
        prenex.binders.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let to_ref = |c: &Channel| match index.get(c) {
        Some(&i) => Ref::Bound(i),
        None => Ref::Free(c.as_str().to_string()),
    };
    let atoms: Vec<(Ref, Vec<Ref>)> = prenex
        .atoms
        .iter()
        .map(|a| (to_ref(&a.source), a.targets.iter().map(to_ref).collect()))
        .collect();
    let n = prenex.binders.len();

    let free: BTreeSet<&str> = atoms
        .iter()
        .flat_map(|(s, ts)| std::iter::once(s).chain(ts.iter()))
        .filter_map(|r| match r {
            Ref::Free(name) => Some(name.as_str()),
            Ref::Bound(_) => None,
        })
        .collect();
    let mut prefix = String::from("_");
    while free.iter().any(|f| {
        f.strip_prefix(prefix.as_str())
            .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
    }) {
        prefix.push('_');
    }
    let names: Vec<Channel> = (0..n).map(|i| Channel::new(format!("{prefix}{i}"))).collect();

    let cells = refine_colours(&atoms, n);
    let mut best: Option<(Vec<String>, Vec<usize>)> = None;
    let total: usize = cells
        .iter()
        .map(|cell| (1..=cell.len()).product::<usize>())
        .try_fold(1usize, |acc, f| acc.checked_mul(f))
        .unwrap_or(usize::MAX);

    let mut consider = |order: &[usize]| {
        // order[k] = binder index that receives canonical name k
        let mut rank = vec![0usize; n];
        for (k, &b) in order.iter().enumerate() {
            rank[b] = k;
        }
        let key = printed_atoms(&atoms, &rank, &names);
        if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
            best = Some((key, order.to_vec()));
        }
    };

    if total <= ORDERING_LIMIT {
        let mut cells_perm: Vec<Vec<usize>> = cells.clone();
        enumerate_cell_orders(&mut cells_perm, 0, &mut Vec::new(), &mut consider);
    } else {
        // TODO: individualization-refinement search for highly symmetric
        // restriction structures; until then ties fall back to binder order.
        let order: Vec<usize> = cells.iter().flatten().copied().collect();
        consider(&order);
    }
    let (_, order) = best.unwrap_or_default();
    let mut rank = vec![0usize; n];
    for (k, &b) in order.iter().enumerate() {
        rank[b] = k;
    }
    let name_of = |r: &Ref| match r {
        Ref::Free(s) => Channel::new(s.clone()),
        Ref::Bound(i) => names[rank[*i]].clone(),
    };
    let mut out = Prenex {
        binders: names.clone(),
        atoms: atoms
            .iter()
            .map(|(s, ts)| Atom::new(name_of(s), ts.iter().map(name_of).collect()))
            .collect(),
    };
    out.sort();
    out
}

fn printed_atoms(atoms: &[(Ref, Vec<Ref>)], rank: &[usize], names: &[Channel]) -> Vec<String> {
    let name_of = |r: &Ref| match r {
        Ref::Free(s) => Channel::new(s.clone()),
        Ref::Bound(i) => names[rank[*i]].clone(),
    };
    let mut keys: Vec<String> = atoms
        .iter()
        .map(|(s, ts)| Atom::new(name_of(s), ts.iter().map(name_of).collect()).key())
        .collect();
    keys.sort();
    keys
}

fn enumerate_cell_orders(
    cells: &mut [Vec<usize>],
    idx: usize,
    prefix: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if idx == cells.len() {
        visit(prefix);
        return;
    }
    let cell = cells[idx].clone();
    permute(&cell, &mut Vec::new(), &mut vec![false; cell.len()], &mut |perm| {
        let len = prefix.len();
        prefix.extend_from_slice(perm);
        enumerate_cell_orders(cells, idx + 1, prefix, visit);
        prefix.truncate(len);
    });
}

fn permute(items: &[usize], acc: &mut Vec<usize>, used: &mut Vec<bool>, visit: &mut dyn FnMut(&[usize])) {
    if acc.len() == items.len() {
        visit(acc);
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            acc.push(items[i]);
            permute(items, acc, used, visit);
            acc.pop();
            used[i] = false;
        }
    }
}

/// Colour refinement of bound channels by their structural role. Returns
/// the ordered cells; the order depends only on structure, never on names
/// of bound channels.
fn refine_colours(atoms: &[(Ref, Vec<Ref>)], n: usize) -> Vec<Vec<usize>> {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum Slot {
        Me,
        Free(String),
        Col(usize),
    }
    let mut colour = vec![0usize; n];
    let mut classes = if n == 0 { 0 } else { 1 };
    loop {
        let slot = |r: &Ref, me: usize, colour: &[usize]| match r {
            Ref::Bound(i) if *i == me => Slot::Me,
            Ref::Bound(i) => Slot::Col(colour[*i]),
            Ref::Free(s) => Slot::Free(s.clone()),
        };
        type Roles = Vec<(Slot, Vec<Slot>)>;
        let sigs: Vec<(usize, Roles)> = (0..n)
            .map(|x| {
                let mut roles: Vec<(Slot, Vec<Slot>)> = atoms
                    .iter()
                    .filter(|(s, ts)| *s == Ref::Bound(x) || ts.contains(&Ref::Bound(x)))
                    .map(|(s, ts)| {
                        let mut t: Vec<Slot> = ts.iter().map(|r| slot(r, x, &colour)).collect();
                        t.sort();
                        (slot(s, x, &colour), t)
                    })
                    .collect();
                roles.sort();
                (colour[x], roles)
            })
            .collect();
        let distinct: BTreeMap<_, usize> = {
            let mut sorted: Vec<_> = sigs.iter().collect();
            sorted.sort();
            sorted.dedup();
            sorted.into_iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()
        };
        let next: Vec<usize> = sigs.iter().map(|s| distinct[s]).collect();
        let next_classes = distinct.len();
        colour = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (x, &c) in colour.iter().enumerate() {
        cells[c].push(x);
    }
    cells.retain(|c| !c.is_empty());
    cells
}
