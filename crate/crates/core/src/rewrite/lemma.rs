use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lang::{Atom, Channel, Process};

/// A target position in a distributor pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Var(String),
    /// A list metavariable standing for the remaining targets.
    Splice(String),
}

/// One parallel component of a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    /// `source => [targets]`, with channel metavariables.
    Dist { source: String, targets: Vec<Target> },
    /// `body` once per element of the list metavariable `list`, with `elem` bound
    /// to that element.
    Each { list: String, elem: String, body: Box<Component> },
}

impl Component {
    pub fn dist(source: &str, targets: &[&str]) -> Component {
        let targets = targets
            .iter()
            .map(|t| match t.strip_suffix("..") {
                Some(list) => Target::Splice(list.to_string()),
                None => Target::Var(t.to_string()),
            })
            .collect();
        Component::Dist { source: source.into(), targets }
    }

    pub fn each(list: &str, elem: &str, body: Component) -> Component {
        Component::Each { list: list.into(), elem: elem.into(), body: Box::new(body) }
    }

    /// Channel and list metavariables that occur free.
    fn metavars(&self, chans: &mut BTreeSet<String>, lists: &mut BTreeSet<String>) {
        match self {
            Component::Dist { source, targets } => {
                chans.insert(source.clone());
                for t in targets {
                    match t {
                        Target::Var(v) => chans.insert(v.clone()),
                        Target::Splice(l) => lists.insert(l.clone()),
                    };
                }
            }
            Component::Each { list, elem, body } => {
                let mut inner = BTreeSet::new();
                body.metavars(&mut inner, lists);
                inner.remove(elem);
                chans.extend(inner);
                lists.insert(list.clone());
            }
        }
    }

    /// The atoms this component denotes under `inst`.
    pub fn instantiate(&self, inst: &Instantiation) -> Result<Vec<Atom>, String> {
        match self {
            Component::Dist { source, targets } => {
                let mut ts = Vec::new();
                for t in targets {
                    match t {
                        Target::Var(v) => ts.push(inst.chan(v)?.clone()),
                        Target::Splice(l) => ts.extend(inst.list(l)?.iter().cloned()),
                    }
                }
                Ok(vec![Atom::new(inst.chan(source)?.clone(), ts)])
            }
            Component::Each { list, elem, body } => {
                let mut out = Vec::new();
                for c in inst.list(list)? {
                    let mut local = inst.clone();
                    local.bindings.insert(elem.clone(), Binding::One(c.clone()));
                    out.extend(body.instantiate(&local)?);
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Dist { source, targets } => match targets.as_slice() {
                [] => write!(f, "?{source}"),
                [Target::Var(b)] => write!(f, "{source} -> {b}"),
                [Target::Var(x), Target::Var(y)] if x == source && y == source => write!(f, "+{source}"),
                _ => {
                    let parts: Vec<String> = targets
                        .iter()
                        .map(|t| match t {
                            Target::Var(v) => v.clone(),
                            Target::Splice(l) => format!("{l}.."),
                        })
                        .collect();
                    write!(f, "{source} => [{}]", parts.join(", "))
                }
            },
            Component::Each { list, elem, body } => write!(f, "({body} for {elem} in {list})"),
        }
    }
}

/// Value of a metavariable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Binding {
    One(Channel),
    Many(Vec<Channel>),
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::One(c) => write!(f, "{c}"),
            Binding::Many(cs) => {
                let names: Vec<&str> = cs.iter().map(Channel::as_str).collect();
                write!(f, "[{}]", names.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Instantiation {
    pub bindings: BTreeMap<String, Binding>,
}

impl Instantiation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, c: impl Into<Channel>) -> Self {
        self.bindings.insert(var.into(), Binding::One(c.into()));
        self
    }

    pub fn with_list<C: Into<Channel>>(mut self, var: &str, cs: impl IntoIterator<Item = C>) -> Self {
        self.bindings.insert(var.into(), Binding::Many(cs.into_iter().map(Into::into).collect()));
        self
    }

    pub fn chan(&self, var: &str) -> Result<&Channel, String> {
        match self.bindings.get(var) {
            Some(Binding::One(c)) => Ok(c),
            Some(Binding::Many(_)) => Err(format!("metavariable `{var}` is a channel, not a list")),
            None => Err(format!("metavariable `{var}` is not instantiated")),
        }
    }

    pub fn list(&self, var: &str) -> Result<&[Channel], String> {
        match self.bindings.get(var) {
            Some(Binding::Many(cs)) => Ok(cs),
            Some(Binding::One(_)) => Err(format!("metavariable `{var}` is a list, not a channel")),
            None => Err(format!("metavariable `{var}` is not instantiated")),
        }
    }
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bindings.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A named bisimilarity `lhs ≈ rhs`, valid in any context that also
/// contains the `side` components. List metavariables range over nonempty lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma {
    pub name: String,
    pub lhs: Vec<Component>,
    pub rhs: Vec<Component>,
    pub side: Vec<Component>,
}

impl Lemma {
    /// Free channel and list metavariables of one side.
    fn vars(components: &[Component]) -> (BTreeSet<String>, BTreeSet<String>) {
        let (mut chans, mut lists) = (BTreeSet::new(), BTreeSet::new());
        for c in components {
            c.metavars(&mut chans, &mut lists);
        }
        (chans, lists)
    }

    /// Both sides mention the same metavariables and side conditions no others.
    pub fn check_well_formed(&self) -> Result<(), String> {
        let lhs = Self::vars(&self.lhs);
        let rhs = Self::vars(&self.rhs);
        if lhs != rhs {
            return Err(format!("{}: sides use different metavariables", self.name));
        }
        let side = Self::vars(&self.side);
        if !side.0.is_subset(&lhs.0) || !side.1.is_subset(&lhs.1) {
            return Err(format!("{}: side condition mentions unknown metavariables", self.name));
        }
        if lhs.0.intersection(&lhs.1).next().is_some() {
            return Err(format!("{}: a name is used both as channel and list", self.name));
        }
        Ok(())
    }

    pub fn lists(&self) -> BTreeSet<String> {
        Self::vars(&self.lhs).1
    }

    /// The same lemma with side condition `index` removed.
    pub fn without_side_condition(&self, index: usize) -> Lemma {
        let mut l = self.clone();
        let dropped = l.side.remove(index);
        l.name = format!("{} without {dropped}", self.name);
        l
    }

    /// Closed left and right instances, each composed with the side components.
    pub fn instantiate(&self, inst: &Instantiation) -> Result<(Process, Process), String> {
        for list in self.lists() {
            if inst.list(&list)?.is_empty() {
                return Err(format!("list metavariable `{list}` must not be empty"));
            }
        }
        let atoms = |cs: &[Component]| -> Result<Vec<Atom>, String> {
            let mut out = Vec::new();
            for c in cs {
                out.extend(c.instantiate(inst)?);
            }
            Ok(out)
        };
        let side = atoms(&self.side)?;
        let close = |main: Vec<Atom>| Process::par(side.iter().chain(&main).map(Atom::to_process));
        Ok((close(atoms(&self.lhs)?), close(atoms(&self.rhs)?)))
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |cs: &[Component]| {
            if cs.is_empty() {
                "0".to_string()
            } else {
                cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" || ")
            }
        };
        write!(f, "{}: {} ~ {}", self.name, join(&self.lhs), join(&self.rhs))?;
        if !self.side.is_empty() {
            write!(f, "  given {}", join(&self.side))?;
        }
        Ok(())
    }
}

/// `a => [b] ~ a -> b`. Both sides have the same core form.
pub fn bridge_is_unary_distributor() -> Lemma {
    Lemma {
        name: "bridge_is_unary_distributor".into(),
        lhs: vec![Component::dist("a", &["b"])],
        rhs: vec![Component::dist("a", &["b"])],
        side: vec![],
    }
}

/// `*a ~ ?a || +a`. Both sides have the same core form.
pub fn duploser_decomposition() -> Lemma {
    Lemma {
        name: "duploser_decomposition".into(),
        lhs: vec![Component::dist("a", &[]), Component::dist("a", &["a", "a"])],
        rhs: vec![Component::dist("a", &[]), Component::dist("a", &["a", "a"])],
        side: vec![],
    }
}

/// `a => [bs..] ~ (a -> b for b in bs)` given `+a` and `?b` for every `b`.
pub fn distributor_splitting() -> Lemma {
    Lemma {
        name: "distributor_splitting".into(),
        lhs: vec![Component::dist("a", &["bs.."])],
        rhs: vec![Component::each("bs", "b", Component::dist("a", &["b"]))],
        side: vec![
            Component::dist("a", &["a", "a"]),
            Component::each("bs", "b", Component::dist("b", &[])),
        ],
    }
}

pub fn catalog() -> Vec<Lemma> {
    vec![bridge_is_unary_distributor(), duploser_decomposition(), distributor_splitting()]
}

pub fn lookup(name: &str) -> Option<Lemma> {
    catalog().into_iter().find(|l| l.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{normalize, parse};

    #[test]
    fn catalog_is_well_formed() {
        for l in catalog() {
            l.check_well_formed().unwrap();
        }
        let bad = Lemma {
            name: "bad".into(),
            lhs: vec![Component::dist("a", &["b"])],
            rhs: vec![Component::dist("a", &["c"])],
            side: vec![],
        };
        assert!(bad.check_well_formed().is_err());
    }

    #[test]
    fn splitting_display() {
        assert_eq!(
            distributor_splitting().to_string(),
            "distributor_splitting: a => [bs..] ~ (a -> b for b in bs)  given +a || (?b for b in bs)"
        );
    }

    #[test]
    fn splitting_instance() {
        let inst = Instantiation::new().with("a", "a").with_list("bs", ["b1", "b2"]);
        let (l, r) = distributor_splitting().instantiate(&inst).unwrap();
        assert_eq!(normalize(&l), normalize(&parse("+a || ?b1 || ?b2 || a => [b1, b2]").unwrap()));
        assert_eq!(normalize(&r), normalize(&parse("+a || ?b1 || ?b2 || a -> b1 || a -> b2").unwrap()));
        let empty = Instantiation::new().with("a", "a").with_list("bs", Vec::<Channel>::new());
        assert!(distributor_splitting().instantiate(&empty).is_err());
        let weaker = distributor_splitting().without_side_condition(0);
        let (l, _) = weaker.instantiate(&inst).unwrap();
        assert_eq!(normalize(&l), normalize(&parse("?b1 || ?b2 || a => [b1, b2]").unwrap()));
    }

    #[test]
    fn instantiation_toml_shape() {
        let inst: Instantiation = toml::from_str("a = \"l01\"\nbs = [\"r1\", \"l13\"]").unwrap();
        assert_eq!(inst, Instantiation::new().with("a", "l01").with_list("bs", ["r1", "l13"]));
    }
}
