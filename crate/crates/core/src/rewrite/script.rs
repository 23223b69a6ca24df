//! Proof scripts: a start term, an expected end term and a list of lemma
//! applications, in TOML.
//!
//! ```toml
//! [start]
//! builder = "multicast:@diamond_ring.graph"   # or file = "x.proc", or proc = "a -> b"
//! losers = ["r0", "r1", "r2", "r3"]
//!
//! [end]
//! file = "split.proc"
//!
//! [options]
//! semantics = "set"     # or "exact"
//! alphabet = 1
//! budget = 1
//! validate = true       # model-check every lemma instance
//! whole_term = false    # also check each step and the whole script on the full terms
//!
//! [[steps]]
//! lemma = "distributor_splitting"
//! direction = "forward"  # default
//! occurrence = 0         # default: first match
//! instantiation = { a = "l01" }
//! ```
//!
//! Paths are relative to the directory of the script.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::apply::{match_and_apply, validate_lemma_instance, Direction, RewriteError};
use super::lemma::{lookup, Instantiation};
use crate::bisim::{attach_losers, check_weak_bisim, Verdict};
use crate::lang::{normalize, parse, tidy, Channel, Process};
use crate::networks;
use crate::semantics::{alphabet_of_size, CapPolicy, ExploreOptions, Semantics};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub builder: Option<String>,
    pub file: Option<String>,
    pub proc: Option<String>,
    #[serde(default)]
    pub losers: Vec<Channel>,
}

impl TermSpec {
    pub fn resolve(&self, base: &Path) -> Result<Process, RewriteError> {
        let bad = |m: String| RewriteError::Script(m);
        let p = match (&self.builder, &self.file, &self.proc) {
            (Some(b), None, None) => networks::from_spec(b, base).map_err(|e| bad(e.to_string()))?,
            (None, Some(f), None) => {
                let path = base.join(f);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
                parse(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?
            }
            (None, None, Some(text)) => parse(text).map_err(|e| bad(e.to_string()))?,
            _ => return Err(bad("a term needs exactly one of `builder`, `file` or `proc`".into())),
        };
        Ok(attach_losers(&p, &self.losers))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScriptOptions {
    pub semantics: Semantics,
    pub alphabet: usize,
    pub budget: u8,
    pub cap: Option<u8>,
    pub dup_budget: Option<u32>,
    pub validate: bool,
    pub whole_term: bool,
}

impl Default for ScriptOptions {
    fn default() -> Self {
        ScriptOptions {
            semantics: Semantics::Set,
            alphabet: 1,
            budget: 1,
            cap: Some(4),
            dup_budget: None,
            validate: true,
            whole_term: false,
        }
    }
}

impl ScriptOptions {
    pub fn explore_options(&self) -> ExploreOptions {
        ExploreOptions {
            alphabet: alphabet_of_size(self.alphabet),
            injection_budget: self.budget,
            semantics: self.semantics,
            dup_budget: self.dup_budget,
            ..ExploreOptions::default()
        }
        .with_cap(self.cap, CapPolicy::Error)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    pub lemma: String,
    #[serde(default)]
    pub direction: Direction,
    #[serde(default)]
    pub occurrence: usize,
    #[serde(default)]
    pub instantiation: Instantiation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofScript {
    pub start: TermSpec,
    pub end: TermSpec,
    #[serde(default)]
    pub options: ScriptOptions,
    #[serde(default)]
    pub steps: Vec<StepSpec>,
}

impl ProofScript {
    pub fn from_toml(text: &str) -> Result<ProofScript, RewriteError> {
        toml::from_str(text).map_err(|e| RewriteError::Script(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scripts serialize")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub lemma: String,
    pub direction: Direction,
    pub occurrence: usize,
    /// Complete instantiation found by matching.
    pub instantiation: Instantiation,
    pub before: Process,
    pub after: Process,
    pub removed: Vec<Process>,
    pub added: Vec<Process>,
    /// Closed check of the lemma instance.
    pub validation: Option<Verdict>,
    /// Check of `before` against `after`.
    pub whole_term: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofTrace {
    pub start: Process,
    pub end: Process,
    pub steps: Vec<TraceStep>,
    /// Check of `start` against `end`, when whole-term validation is on.
    pub whole_term: Option<Verdict>,
}

fn atom_keys(p: &Process) -> BTreeSet<(String, usize)> {
    // count duplicates so the diff is a multiset difference
    let mut seen: Vec<String> = Vec::new();
    let tidy_form = crate::lang::Prenex::of(p);
    let mut out = BTreeSet::new();
    for a in &tidy_form.atoms {
        let key = crate::lang::resugar(&a.to_process()).to_string();
        let n = seen.iter().filter(|k| **k == key).count();
        seen.push(key.clone());
        out.insert((key, n));
    }
    out
}

/// Replays `script`, failing on the first step that does not apply or
/// does not validate, and compares the result with the declared end term.
pub fn run_script(script: &ProofScript, base: &Path) -> Result<ProofTrace, RewriteError> {
    let start = script.start.resolve(base)?;
    let expected = script.end.resolve(base)?;
    let opts = script.options.explore_options();
    opts.validate().map_err(RewriteError::Script)?;

    let mut current = start.clone();
    let mut steps = Vec::new();
    for (index, spec) in script.steps.iter().enumerate() {
        let step_error = |e: RewriteError| RewriteError::Step { index, lemma: spec.lemma.clone(), source: Box::new(e) };
        let lemma = lookup(&spec.lemma).ok_or_else(|| step_error(RewriteError::UnknownLemma(spec.lemma.clone())))?;
        let applied = match_and_apply(&current, &lemma, &spec.instantiation, spec.occurrence, spec.direction)
            .map_err(step_error)?;
        let validation = if script.options.validate {
            let v = validate_lemma_instance(&lemma, &applied.instantiation, &opts).map_err(step_error)?;
            if !v.equivalent {
                return Err(step_error(RewriteError::InvalidInstance {
                    lemma: lemma.name.clone(),
                    instantiation: applied.instantiation.to_string(),
                    verdict: Box::new(v),
                }));
            }
            Some(v)
        } else {
            None
        };
        let whole_term = if script.options.whole_term {
            let v = check_weak_bisim(&current, &applied.result, &opts).map_err(|e| step_error(e.into()))?;
            if !v.equivalent {
                return Err(step_error(RewriteError::NotPreserved { verdict: Box::new(v) }));
            }
            Some(v)
        } else {
            None
        };
        steps.push(TraceStep {
            lemma: lemma.name.clone(),
            direction: spec.direction,
            occurrence: spec.occurrence,
            instantiation: applied.instantiation,
            before: current.clone(),
            after: applied.result.clone(),
            removed: applied.removed,
            added: applied.added,
            validation,
            whole_term,
        });
        current = applied.result;
    }

    if normalize(&current) != normalize(&expected) {
        let (got, want) = (atom_keys(&current), atom_keys(&expected));
        return Err(RewriteError::EndMismatch {
            result: current.to_string(),
            expected: tidy(&expected).to_string(),
            only_in_result: got.difference(&want).map(|(k, _)| k.clone()).collect(),
            only_in_expected: want.difference(&got).map(|(k, _)| k.clone()).collect(),
        });
    }
    let whole_term = if script.options.whole_term {
        let v = check_weak_bisim(&start, &current, &opts)?;
        if !v.equivalent {
            return Err(RewriteError::NotPreserved { verdict: Box::new(v) });
        }
        Some(v)
    } else {
        None
    };
    Ok(ProofTrace { start, end: current, steps, whole_term })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Result<ProofTrace, RewriteError> {
        run_script(&ProofScript::from_toml(text).unwrap(), Path::new("."))
    }

    #[test]
    fn empty_script() {
        let t = run("[start]\nproc = \"a -> b\"\n[end]\nproc = \"a => [b]\"\n").unwrap();
        assert!(t.steps.is_empty());
    }

    #[test]
    fn one_split() {
        let text = r#"
            [start]
            proc = "+a || ?b || ?c || a => [b, c]"
            [end]
            proc = "+a || ?b || ?c || a -> b || a -> c"
            [options]
            whole_term = true
            [[steps]]
            lemma = "distributor_splitting"
            instantiation = { a = "a" }
        "#;
        let t = run(text).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert!(t.steps[0].validation.as_ref().unwrap().equivalent);
        assert!(t.whole_term.unwrap().equivalent);
    }

    #[test]
    fn end_mismatch_shows_the_difference() {
        let text = "[start]\nproc = \"a -> b || c -> d\"\n[end]\nproc = \"a -> b || c -> e\"\n";
        match run(text).unwrap_err() {
            RewriteError::EndMismatch { only_in_result, only_in_expected, .. } => {
                assert_eq!(only_in_result, vec!["c -> d".to_string()]);
                assert_eq!(only_in_expected, vec!["c -> e".to_string()]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn failing_step_is_identified() {
        let text = r#"
            [start]
            proc = "?b || ?c || a => [b, c]"
            [end]
            proc = "?b || ?c || a -> b || a -> c"
            [[steps]]
            lemma = "distributor_splitting"
        "#;
        let err = run(text).unwrap_err();
        assert!(matches!(&err, RewriteError::Step { index: 0, .. }));
        assert!(matches!(err.root(), RewriteError::SideConditionUnmet { .. }));
    }

    #[test]
    fn script_errors() {
        assert!(ProofScript::from_toml("[start]\nbuilder = 1").is_err());
        let both = "[start]\nproc = \"0\"\nfile = \"x\"\n[end]\nproc = \"0\"\n";
        assert!(matches!(run(both), Err(RewriteError::Script(_))));
        let unknown = "[start]\nproc = \"0\"\n[end]\nproc = \"0\"\n[[steps]]\nlemma = \"magic\"\n";
        assert!(matches!(run(unknown).unwrap_err().root(), RewriteError::UnknownLemma(_)));
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
            [start]
            builder = "direct:0,1"
            losers = ["r0"]
            [end]
            file = "x.proc"
            [[steps]]
            lemma = "distributor_splitting"
            direction = "backward"
            instantiation = { a = "m", bs = ["r0", "r1"] }
        "#;
        let s = ProofScript::from_toml(text).unwrap();
        assert_eq!(ProofScript::from_toml(&s.to_toml()).unwrap(), s);
    }
}
