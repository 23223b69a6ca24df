use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::lemma::{Binding, Component, Instantiation, Lemma, Target};
use crate::bisim::{Checked, Checker, Verdict};
use crate::lang::{resugar, Atom, Channel, Prenex, Process};
use crate::semantics::{ExploreOptions, SemanticsError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Replace an instance of the left-hand side by the right-hand side.
    #[default]
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewriteError {
    #[error("{lemma} ({direction}) does not match: {}", near_misses.join("; "))]
    NoMatch { lemma: String, direction: Direction, near_misses: Vec<String> },
    #[error("{lemma}: occurrence {occurrence} requested but there are only {found} matches")]
    NoSuchOccurrence { lemma: String, occurrence: usize, found: usize },
    #[error("{lemma}: side condition unmet, missing {}", missing.join(", "))]
    SideConditionUnmet { lemma: String, missing: Vec<String> },
    #[error("{0}")]
    Instantiation(String),
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
    #[error("lemma instance {lemma} {instantiation} is not a bisimilarity")]
    InvalidInstance { lemma: String, instantiation: String, verdict: Box<Verdict> },
    #[error("rewriting changed the behaviour: before and after step are not bisimilar")]
    NotPreserved { verdict: Box<Verdict> },
    #[error("result differs from the expected end term; only in result: [{}], only in expected: [{}]",
        only_in_result.join(", "), only_in_expected.join(", "))]
    EndMismatch { result: String, expected: String, only_in_result: Vec<String>, only_in_expected: Vec<String> },
    #[error("step {index} ({lemma}): {source}")]
    Step { index: usize, lemma: String, source: Box<RewriteError> },
    #[error("proof script: {0}")]
    Script(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

impl RewriteError {
    /// The error without step context.
    pub fn root(&self) -> &RewriteError {
        match self {
            RewriteError::Step { source, .. } => source.root(),
            other => other,
        }
    }
}

/// Outcome of one rewriting step.
#[derive(Clone, Debug, PartialEq)]
pub struct Applied {
    pub result: Process,
    /// The full instantiation found by matching.
    pub instantiation: Instantiation,
    pub removed: Vec<Process>,
    pub added: Vec<Process>,
}

/// A match: the completed instantiation and the atoms it consumes.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Match {
    inst: Instantiation,
    used: Vec<usize>,
}

fn bind(inst: &mut Instantiation, var: &str, c: &Channel) -> bool {
    match inst.bindings.get(var) {
        Some(Binding::One(b)) => b == c,
        Some(Binding::Many(_)) => false,
        None => {
            inst.bindings.insert(var.to_string(), Binding::One(c.clone()));
            true
        }
    }
}

/// All ways `Dist { source, targets }` matches `atom` extending `inst`.
/// A duplicator only matches a pattern that copies its source back.
fn match_dist(source: &str, targets: &[Target], atom: &Atom, inst: &Instantiation) -> Vec<Instantiation> {
    let duplicator = atom.targets.len() >= 2 && atom.targets.iter().all(|t| *t == atom.source);
    if duplicator && !targets.iter().any(|t| matches!(t, Target::Var(v) if v == source)) {
        return Vec::new();
    }
    let mut base = inst.clone();
    if !bind(&mut base, source, &atom.source) {
        return Vec::new();
    }
    let mut remaining = atom.targets.clone();
    let mut free_vars = Vec::new();
    let mut splice = None;
    for t in targets {
        match t {
            Target::Var(v) => match base.bindings.get(v) {
                Some(Binding::One(c)) => match remaining.iter().position(|r| r == c) {
                    Some(i) => {
                        remaining.remove(i);
                    }
                    None => return Vec::new(),
                },
                Some(Binding::Many(_)) => return Vec::new(),
                None => free_vars.push(v.clone()),
            },
            Target::Splice(l) => splice = Some(l.clone()),
        }
    }
    let mut results = Vec::new();
    fn assign(
        vars: &[String],
        remaining: Vec<Channel>,
        inst: Instantiation,
        splice: &Option<String>,
        out: &mut Vec<Instantiation>,
    ) {
        let Some((v, rest)) = vars.split_first() else {
            let mut inst = inst;
            match splice {
                Some(l) => match inst.bindings.get(l) {
                    Some(Binding::Many(cs)) => {
                        let mut want = cs.clone();
                        want.sort();
                        if want == remaining {
                            out.push(inst);
                        }
                    }
                    Some(Binding::One(_)) => {}
                    None if remaining.is_empty() => {}
                    None => {
                        inst.bindings.insert(l.clone(), Binding::Many(remaining));
                        out.push(inst);
                    }
                },
                None if remaining.is_empty() => out.push(inst),
                None => {}
            }
            return;
        };
        let mut tried: Vec<&Channel> = Vec::new();
        for (i, c) in remaining.iter().enumerate() {
            if tried.contains(&c) {
                continue;
            }
            tried.push(c);
            let mut next = inst.clone();
            if !bind(&mut next, v, c) {
                continue;
            }
            let mut rem = remaining.clone();
            rem.remove(i);
            assign(rest, rem, next, splice, out);
        }
    }
    assign(&free_vars, remaining, base, &splice, &mut results);
    results
}

fn match_components(components: &[Component], atoms: &[Atom], m: Match, out: &mut Vec<Match>) {
    let Some((first, rest)) = components.split_first() else {
        out.push(m);
        return;
    };
    match first {
        Component::Dist { source, targets } => {
            for (i, atom) in atoms.iter().enumerate() {
                if m.used.contains(&i) {
                    continue;
                }
                for inst in match_dist(source, targets, atom, &m.inst) {
                    let mut used = m.used.clone();
                    used.push(i);
                    match_components(rest, atoms, Match { inst, used }, out);
                }
            }
        }
        Component::Each { list, elem, body } => match m.inst.bindings.get(list).cloned() {
            Some(Binding::Many(elems)) => {
                // one body instance per element, in order
                let mut partial = vec![m.clone()];
                for c in &elems {
                    let mut next = Vec::new();
                    for pm in partial {
                        let mut inst = pm.inst.clone();
                        inst.bindings.insert(elem.clone(), Binding::One(c.clone()));
                        let mut found = Vec::new();
                        match_components(std::slice::from_ref(body), atoms, Match { inst, used: pm.used.clone() }, &mut found);
                        for mut f in found {
                            f.inst.bindings.remove(elem);
                            f.inst.bindings.extend(
                                pm.inst.bindings.get(elem).map(|b| (elem.clone(), b.clone())),
                            );
                            next.push(f);
                        }
                    }
                    partial = next;
                }
                for pm in partial {
                    match_components(rest, atoms, pm, out);
                }
            }
            Some(Binding::One(_)) => {}
            None => {
                // maximal: every unused atom that fits the body
                let mut m = m;
                let mut elems = Vec::new();
                for (i, _) in atoms.iter().enumerate() {
                    if m.used.contains(&i) {
                        continue;
                    }
                    let mut found = Vec::new();
                    let probe = Match { inst: m.inst.clone(), used: Vec::new() };
                    match_components(std::slice::from_ref(body), std::slice::from_ref(&atoms[i]), probe, &mut found);
                    if let Some(f) = found.into_iter().next() {
                        if let Ok(c) = f.inst.chan(elem) {
                            elems.push(c.clone());
                            m.used.push(i);
                        }
                    }
                }
                if !elems.is_empty() {
                    m.inst.bindings.insert(list.clone(), Binding::Many(elems));
                    match_components(rest, atoms, m, out);
                }
            }
        },
    }
}

fn sides(lemma: &Lemma, direction: Direction) -> (&[Component], &[Component]) {
    match direction {
        Direction::Forward => (&lemma.lhs, &lemma.rhs),
        Direction::Backward => (&lemma.rhs, &lemma.lhs),
    }
}

fn find(prenex: &Prenex, pattern: &[Component], inst: &Instantiation) -> Vec<Match> {
    let mut out = Vec::new();
    match_components(pattern, &prenex.atoms, Match { inst: inst.clone(), used: Vec::new() }, &mut out);
    let mut unique: Vec<Match> = Vec::new();
    for mut m in out {
        m.used.sort_unstable();
        if !unique.contains(&m) {
            unique.push(m);
        }
    }
    unique
}

fn first_dist(components: &[Component]) -> Option<(&str, &[Target])> {
    components.iter().find_map(|c| match c {
        Component::Dist { source, targets } => Some((source.as_str(), targets.as_slice())),
        Component::Each { body, .. } => first_dist(std::slice::from_ref(body)),
    })
}

fn near_misses(prenex: &Prenex, pattern: &[Component], inst: &Instantiation) -> Vec<String> {
    let Some((source, _)) = first_dist(pattern) else {
        return vec!["empty pattern".into()];
    };
    let wanted = pattern.iter().map(|c| format!("`{c}`")).collect::<Vec<_>>().join(" || ");
    let show = |a: &Atom| resugar(&a.to_process()).to_string();
    match inst.chan(source) {
        Ok(c) => {
            let reading: Vec<&Atom> = prenex.atoms.iter().filter(|a| a.source == *c).collect();
            if reading.is_empty() {
                vec![format!("no component reads from `{c}`")]
            } else {
                reading.iter().map(|a| format!("`{}` does not fit {wanted}", show(a))).collect()
            }
        }
        Err(_) => {
            let mut v: Vec<String> =
                prenex.atoms.iter().take(5).map(|a| format!("`{}` does not fit {wanted}", show(a))).collect();
            if v.is_empty() {
                v.push("the term has no components".into());
            }
            v
        }
    }
}

/// Components required by the side conditions that are missing, given the
/// atoms consumed by the match.
fn missing_side_components(
    prenex: &Prenex,
    lemma: &Lemma,
    m: &Match,
) -> Result<Vec<String>, RewriteError> {
    let pool: Vec<&Atom> =
        prenex.atoms.iter().enumerate().filter(|(i, _)| !m.used.contains(i)).map(|(_, a)| a).collect();
    let mut missing = Vec::new();
    for c in &lemma.side {
        for atom in c.instantiate(&m.inst).map_err(RewriteError::Instantiation)? {
            // required, not consumed: one component may serve several conditions
            if !pool.contains(&&atom) {
                missing.push(resugar(&atom.to_process()).to_string());
            }
        }
    }
    Ok(missing)
}

/// Instantiations of the matched side of `lemma` in `p`, in a fixed order.
pub fn find_matches(p: &Process, lemma: &Lemma, inst: &Instantiation, direction: Direction) -> Vec<Instantiation> {
    let prenex = Prenex::of(p);
    find(&prenex, sides(lemma, direction).0, inst).into_iter().map(|m| m.inst).collect()
}

/// Rewrites the `occurrence`-th match of the lemma's left-hand side (or
/// right-hand side, backwards) in the prenex form of `p`, consistent with
/// the partial instantiation `inst`.
pub fn match_and_apply(
    p: &Process,
    lemma: &Lemma,
    inst: &Instantiation,
    occurrence: usize,
    direction: Direction,
) -> Result<Applied, RewriteError> {
    let prenex = Prenex::of(p);
    let (from, to) = sides(lemma, direction);
    let matches = find(&prenex, from, inst);
    if matches.is_empty() {
        return Err(RewriteError::NoMatch {
            lemma: lemma.name.clone(),
            direction,
            near_misses: near_misses(&prenex, from, inst),
        });
    }
    // a match counts as an occurrence only if its side conditions hold;
    // otherwise the closest failing match explains the refusal
    let mut applicable = Vec::new();
    let mut closest: Option<RewriteError> = None;
    let mut closest_len = usize::MAX;
    for m in matches {
        let mut problem = None;
        for list in lemma.lists() {
            if m.inst.list(&list).map_err(RewriteError::Instantiation)?.is_empty() {
                problem = Some((0, RewriteError::Instantiation(format!("list metavariable `{list}` matched nothing"))));
            }
        }
        if problem.is_none() {
            let missing = missing_side_components(&prenex, lemma, &m)?;
            if !missing.is_empty() {
                problem =
                    Some((missing.len(), RewriteError::SideConditionUnmet { lemma: lemma.name.clone(), missing }));
            }
        }
        match problem {
            None => applicable.push(m),
            Some((n, e)) if n < closest_len || closest.is_none() => {
                closest_len = n;
                closest = Some(e);
            }
            Some(_) => {}
        }
    }
    if applicable.is_empty() {
        return Err(closest.expect("some match failed"));
    }
    let found = applicable.len();
    let m = applicable.into_iter().nth(occurrence).ok_or_else(|| RewriteError::NoSuchOccurrence {
        lemma: lemma.name.clone(),
        occurrence,
        found,
    })?;
    let mut added_atoms = Vec::new();
    for c in to {
        added_atoms.extend(c.instantiate(&m.inst).map_err(RewriteError::Instantiation)?);
    }
    let removed = m.used.iter().map(|&i| resugar(&prenex.atoms[i].to_process())).collect();
    let added = added_atoms.iter().map(|a| resugar(&a.to_process())).collect();
    let mut atoms: Vec<Atom> =
        prenex.atoms.iter().enumerate().filter(|(i, _)| !m.used.contains(i)).map(|(_, a)| a.clone()).collect();
    atoms.extend(added_atoms);
    let mut next = Prenex { binders: prenex.binders.clone(), atoms };
    next.retain_used_binders();
    next.sort();
    Ok(Applied { result: resugar(&next.to_process()), instantiation: m.inst, removed, added })
}

/// Model-checks the closed instance of `lemma`: both sides, each composed
/// with the side-condition components.
pub fn check_lemma_instance(
    lemma: &Lemma,
    inst: &Instantiation,
    opts: &ExploreOptions,
) -> Result<Checked, RewriteError> {
    let (lhs, rhs) = lemma.instantiate(inst).map_err(RewriteError::Instantiation)?;
    Ok(Checker::new(opts.clone()).check(&lhs, &rhs)?)
}

pub fn validate_lemma_instance(
    lemma: &Lemma,
    inst: &Instantiation,
    opts: &ExploreOptions,
) -> Result<Verdict, RewriteError> {
    Ok(check_lemma_instance(lemma, inst, opts)?.verdict)
}
