//! Command-line front end.
//!
//! ```text
//! netbisim check   [INPUT]... [--builder SPEC]... [--up-to-loss r0,r1] [exploration options]
//! netbisim explore [INPUT | --builder SPEC] [--stats-only] [--dot] [exploration options]
//! netbisim render  [INPUT | --builder SPEC | --proof SCRIPT] [--losers r0,r1]
//! netbisim prove   SCRIPT [--whole-term] [--no-validate]
//! ```
//!
//! Inputs are `.proc` files in the process grammar; `-` reads standard
//! input. Builders are `direct:0,1,2,3`, `multicast:0->1;1->0` or
//! `multicast:@file.graph`. `check`, `explore` and `prove` print a JSON
//! [`Report`] on standard output (or to `--output`); `render` prints DOT.
//!
//! Exit codes: 0 equivalent / success, 1 not equivalent / proof step
//! failed, 2 usage, input or exploration error.
//!
//! The environment variable `NETBISIM_STATE_LIMIT` overrides the maximal
//! number of explored states per system.

use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bisim::{attach_losers, Checker, Stats, Strategy, Verdict, Witness};
use crate::lang::{parse, Channel, Process};
use crate::networks;
use crate::render::{lts_to_dot, process_to_dot};
use crate::rewrite::{run_script, ProofScript, ProofTrace, RewriteError};
use crate::semantics::{
    alphabet_of_size, compile, explore, CapPolicy, ExploreOptions, Injection, Label, Lts, Semantics,
    SemanticsError,
};

pub const STATE_LIMIT_VAR: &str = "NETBISIM_STATE_LIMIT";

#[derive(Parser, Debug)]
#[command(name = "netbisim", version, about = "Communication nets and weak bisimilarity up to loss")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide weak bisimilarity of two processes.
    Check(CheckArgs),
    /// Explore the transition system of one process.
    Explore(ExploreArgs),
    /// Draw the communication net of a process as DOT.
    Render(RenderArgs),
    /// Replay and validate a proof script.
    Prove(ProveArgs),
}

#[derive(Args, Debug, Clone)]
struct ExplorationArgs {
    #[arg(long, value_enum, default_value = "set")]
    semantics: SemanticsArg,
    /// Number of distinct packets.
    #[arg(long, default_value_t = 1)]
    alphabet: usize,
    /// Injections per input channel and packet.
    #[arg(long, default_value_t = 1)]
    budget: u8,
    /// `inputs`, `all` or a comma-separated channel list.
    #[arg(long, default_value = "inputs")]
    inject: String,
    /// Capacity cap per channel and packet (exact semantics); `none` disables it.
    #[arg(long, default_value = "4")]
    cap: String,
    /// Truncate multiplicities at the cap instead of failing.
    #[arg(long)]
    clamp: bool,
    /// Firings of duplicating transitions allowed (exact semantics).
    #[arg(long)]
    dup_budget: Option<u32>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SemanticsArg {
    Set,
    Exact,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum StrategyArg {
    Auto,
    Direct,
    PerPacket,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Process files.
    inputs: Vec<PathBuf>,
    /// Builder specs, taken in command-line order together with the files.
    #[arg(long = "builder")]
    builders: Vec<String>,
    /// Attach losers to these channels on both sides.
    #[arg(long, value_delimiter = ',')]
    up_to_loss: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
    #[command(flatten)]
    exploration: ExplorationArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Print wall time on standard error.
    #[arg(long)]
    time: bool,
}

#[derive(Args, Debug)]
struct ExploreArgs {
    input: Option<PathBuf>,
    #[arg(long = "builder")]
    builder: Option<String>,
    #[arg(long, value_delimiter = ',')]
    losers: Vec<String>,
    /// Only report state and transition counts.
    #[arg(long)]
    stats_only: bool,
    /// Print the transition system as DOT instead of a report.
    #[arg(long)]
    dot: bool,
    #[command(flatten)]
    exploration: ExplorationArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    input: Option<PathBuf>,
    #[arg(long = "builder")]
    builder: Option<String>,
    /// Render the end term of a proof script.
    #[arg(long)]
    proof: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    losers: Vec<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProveArgs {
    script: PathBuf,
    /// Also check every step and the whole script on the full terms.
    #[arg(long)]
    whole_term: bool,
    /// Skip the model check of lemma instances.
    #[arg(long)]
    no_validate: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Machine-readable result of one invocation. Contains no timing, so equal
/// inputs give byte-identical reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    pub exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub options: Option<ExploreOptions>,
    /// Processes as checked, in the concrete syntax.
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub check: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub explore: Option<ExploreReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prove: Option<ProveReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub equivalent: bool,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessReport>,
}

/// A witness with the markings of the states it mentions. `rounds` index
/// the systems obtained by exploring `inputs` with `options`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub trace: Vec<String>,
    pub game: Witness,
    pub left_states: Vec<(usize, String)>,
    pub right_states: Vec<(usize, String)>,
    pub replayed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreReport {
    pub states: usize,
    pub transitions: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lts: Option<LtsDump>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LtsDump {
    pub initial: usize,
    /// Marking of every state.
    pub states: Vec<String>,
    /// `(source, label, target)`.
    pub transitions: Vec<(usize, String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProveReport {
    pub start: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub end: Option<String>,
    pub steps: Vec<StepReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub whole_term: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failed_step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<FailureReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub index: usize,
    pub lemma: String,
    pub direction: String,
    pub occurrence: usize,
    pub instantiation: String,
    pub removed: Vec<String>,
    pub added: Vec<String>,
    pub after: String,
    pub validation: Option<Verdict>,
    pub whole_term: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureReport {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<Verdict>,
    #[serde(default)]
    pub details: Vec<String>,
}

impl Report {
    fn new(command: &str, args: &[String]) -> Report {
        Report {
            command: command.into(),
            args: args.to_vec(),
            exit_code: 0,
            options: None,
            inputs: Vec::new(),
            check: None,
            explore: None,
            prove: None,
            error: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Captured result of [`run`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn channels(names: &[String]) -> Result<Vec<Channel>, Failure> {
    names
        .iter()
        .map(|n| n.trim())
        .filter(|n| !n.is_empty())
        .map(|n| {
            if Channel::is_valid_name(n) {
                Ok(Channel::new(n))
            } else {
                Err(usage(format!("`{n}` is not a channel name")))
            }
        })
        .collect()
}

fn read_process(path: &Path) -> Result<Process, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?
    };
    parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn build(spec: &str) -> Result<Process, Failure> {
    networks::from_spec(spec, Path::new(".")).map_err(|e| usage(format!("builder `{spec}`: {e}")))
}

fn single_input(input: &Option<PathBuf>, builder: &Option<String>) -> Result<Process, Failure> {
    match (input, builder) {
        (Some(path), None) => read_process(path),
        (None, Some(spec)) => build(spec),
        _ => Err(usage("give exactly one input file or --builder")),
    }
}

impl ExplorationArgs {
    fn options(&self) -> Result<ExploreOptions, Failure> {
        let injection = match self.inject.as_str() {
            "inputs" => Injection::Inputs,
            "all" => Injection::All,
            list => Injection::Channels(channels(&list.split(',').map(String::from).collect::<Vec<_>>())?),
        };
        let cap = match self.cap.as_str() {
            "none" => None,
            n => Some(n.parse::<u8>().map_err(|_| usage(format!("--cap expects a number or `none`, got `{n}`")))?),
        };
        let policy = if self.clamp { CapPolicy::Clamp } else { CapPolicy::Error };
        let mut opts = ExploreOptions {
            alphabet: alphabet_of_size(self.alphabet),
            injection_budget: self.budget,
            injection,
            semantics: match self.semantics {
                SemanticsArg::Set => Semantics::Set,
                SemanticsArg::Exact => Semantics::Exact,
            },
            dup_budget: self.dup_budget,
            ..ExploreOptions::default()
        }
        .with_cap(cap, policy);
        if let Ok(v) = std::env::var(STATE_LIMIT_VAR) {
            opts.state_limit =
                v.trim().parse().map_err(|_| usage(format!("{STATE_LIMIT_VAR} must be a number, got `{v}`")))?;
        }
        opts.validate().map_err(usage)?;
        Ok(opts)
    }
}

fn exploration_failure(e: SemanticsError) -> Failure {
    usage(e.to_string())
}

fn describe(lts: &Lts, states: impl IntoIterator<Item = usize>) -> Vec<(usize, String)> {
    let mut v: Vec<usize> = states.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v.into_iter().map(|s| (s, lts.describe_state(s))).collect()
}

fn cmd_check(args: &CheckArgs, ordered: Vec<Process>, report: &mut Report) -> Result<(), Failure> {
    let opts = args.exploration.options()?;
    report.options = Some(opts.clone());
    if ordered.len() != 2 {
        return Err(usage(format!("check needs two processes, got {}", ordered.len())));
    }
    let losers = channels(args.up_to_loss.as_deref().unwrap_or(&[]))?;
    let (p, q) = (attach_losers(&ordered[0], &losers), attach_losers(&ordered[1], &losers));
    report.inputs = vec![p.to_string(), q.to_string()];
    let strategy = match args.strategy {
        StrategyArg::Auto => Strategy::Auto,
        StrategyArg::Direct => Strategy::Direct,
        StrategyArg::PerPacket => Strategy::PerPacket,
    };
    let start = Instant::now();
    let checked = Checker::new(opts).with_strategy(strategy).check(&p, &q).map_err(exploration_failure)?;
    if args.time {
        eprintln!("elapsed {:.3?}", start.elapsed());
    }
    let v = &checked.verdict;
    let witness = v.witness.as_ref().map(|w| {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for r in &w.rounds {
            left.push(r.left);
            right.push(r.right);
            let (mine, theirs) = match r.attacker {
                crate::bisim::Side::Left => (&mut left, &mut right),
                crate::bisim::Side::Right => (&mut right, &mut left),
            };
            mine.push(r.target);
            theirs.extend(r.responses.iter().copied());
        }
        WitnessReport {
            trace: w.trace().iter().map(Label::to_string).collect(),
            game: w.clone(),
            left_states: describe(&checked.left, left),
            right_states: describe(&checked.right, right),
            replayed: checked.replay().is_ok(),
        }
    });
    report.exit_code = if v.equivalent { 0 } else { 1 };
    report.check = Some(CheckReport { equivalent: v.equivalent, stats: v.stats.clone(), witness });
    Ok(())
}

fn cmd_explore(args: &ExploreArgs, report: &mut Report) -> Result<Option<String>, Failure> {
    let opts = args.exploration.options()?;
    report.options = Some(opts.clone());
    let p = attach_losers(&single_input(&args.input, &args.builder)?, &channels(&args.losers)?);
    report.inputs = vec![p.to_string()];
    let lts = explore(&compile(&p), &opts).map_err(exploration_failure)?;
    if args.dot {
        return Ok(Some(lts_to_dot(&lts)));
    }
    let dump = (!args.stats_only).then(|| LtsDump {
        initial: lts.initial,
        states: (0..lts.num_states()).map(|s| lts.describe_state(s)).collect(),
        transitions: lts
            .transitions
            .iter()
            .map(|&(s, l, t)| (s as usize, lts.label(l).to_string(), t as usize))
            .collect(),
    });
    report.explore = Some(ExploreReport { states: lts.num_states(), transitions: lts.num_transitions(), lts: dump });
    Ok(None)
}

fn load_script(path: &Path) -> Result<(ProofScript, PathBuf), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let script = ProofScript::from_toml(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((script, base))
}

fn cmd_render(args: &RenderArgs) -> Result<String, Failure> {
    let p = match &args.proof {
        Some(path) if args.input.is_none() && args.builder.is_none() => {
            let (script, base) = load_script(path)?;
            run_script(&script, &base).map_err(|e| Failure { code: 1, message: e.to_string() })?.end
        }
        Some(_) => return Err(usage("--proof excludes other inputs")),
        None => single_input(&args.input, &args.builder)?,
    };
    Ok(process_to_dot(&attach_losers(&p, &channels(&args.losers)?)))
}

fn step_report(index: usize, s: &crate::rewrite::TraceStep) -> StepReport {
    StepReport {
        index,
        lemma: s.lemma.clone(),
        direction: s.direction.to_string(),
        occurrence: s.occurrence,
        instantiation: s.instantiation.to_string(),
        removed: s.removed.iter().map(Process::to_string).collect(),
        added: s.added.iter().map(Process::to_string).collect(),
        after: s.after.to_string(),
        validation: s.validation.clone(),
        whole_term: s.whole_term.clone(),
    }
}

fn failure_report(e: &RewriteError) -> FailureReport {
    let root = e.root();
    let (kind, verdict, details) = match root {
        RewriteError::NoMatch { near_misses, .. } => ("no_match", None, near_misses.clone()),
        RewriteError::NoSuchOccurrence { .. } => ("no_such_occurrence", None, vec![]),
        RewriteError::SideConditionUnmet { missing, .. } => ("side_condition_unmet", None, missing.clone()),
        RewriteError::Instantiation(_) => ("instantiation", None, vec![]),
        RewriteError::UnknownLemma(_) => ("unknown_lemma", None, vec![]),
        RewriteError::InvalidInstance { verdict, .. } => ("invalid_instance", Some((**verdict).clone()), vec![]),
        RewriteError::NotPreserved { verdict } => ("not_preserved", Some((**verdict).clone()), vec![]),
        RewriteError::EndMismatch { only_in_result, only_in_expected, .. } => (
            "end_mismatch",
            None,
            only_in_result
                .iter()
                .map(|k| format!("only in result: {k}"))
                .chain(only_in_expected.iter().map(|k| format!("only in expected: {k}")))
                .collect(),
        ),
        RewriteError::Step { .. } => ("step", None, vec![]),
        RewriteError::Script(_) => ("script", None, vec![]),
        RewriteError::Semantics(_) => ("exploration", None, vec![]),
    };
    FailureReport { kind: kind.into(), message: e.to_string(), verdict, details }
}

fn cmd_prove(args: &ProveArgs, report: &mut Report) -> Result<(), Failure> {
    let (mut script, base) = load_script(&args.script)?;
    script.options.whole_term |= args.whole_term;
    if args.no_validate {
        script.options.validate = false;
    }
    report.options = Some(script.options.explore_options());
    let start = script.start.resolve(&base).map_err(|e| usage(e.to_string()))?;
    report.inputs = vec![start.to_string()];
    match run_script(&script, &base) {
        Ok(trace) => {
            report.prove = Some(prove_report(&trace));
            Ok(())
        }
        Err(e) => {
            let code = match e.root() {
                RewriteError::Script(_) | RewriteError::Semantics(_) => 2,
                _ => 1,
            };
            report.exit_code = code;
            report.error = Some(e.to_string());
            report.prove = Some(ProveReport {
                start: start.to_string(),
                end: None,
                steps: Vec::new(),
                whole_term: None,
                failed_step: match &e {
                    RewriteError::Step { index, .. } => Some(*index),
                    _ => None,
                },
                failure: Some(failure_report(&e)),
            });
            Ok(())
        }
    }
}

fn prove_report(trace: &ProofTrace) -> ProveReport {
    ProveReport {
        start: trace.start.to_string(),
        end: Some(trace.end.to_string()),
        steps: trace.steps.iter().enumerate().map(|(i, s)| step_report(i, s)).collect(),
        whole_term: trace.whole_term.clone(),
        failed_step: None,
        failure: None,
    }
}

fn write_output(output: &Option<PathBuf>, text: String, out: &mut Outcome) -> Result<(), Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            out.stdout.push_str(&text);
            Ok(())
        }
    }
}

/// Processes in the order their files and `--builder` flags appeared.
fn ordered_inputs(matches: &clap::ArgMatches, args: &CheckArgs) -> Result<Vec<Process>, Failure> {
    let mut items: Vec<(usize, Result<Process, Failure>)> = Vec::new();
    if let Some(idx) = matches.indices_of("inputs") {
        for (i, path) in idx.zip(&args.inputs) {
            items.push((i, read_process(path)));
        }
    }
    if let Some(idx) = matches.indices_of("builders") {
        for (i, spec) in idx.zip(&args.builders) {
            items.push((i, build(spec)));
        }
    }
    items.sort_by_key(|(i, _)| *i);
    items.into_iter().map(|(_, p)| p).collect()
}

/// Runs one invocation; `args` excludes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut out = Outcome { code: 0, stdout: String::new(), stderr: String::new() };
    let full = std::iter::once(OsString::from("netbisim")).chain(argv);
    let matches = match Cli::command().try_get_matches_from(full) {
        Ok(m) => m,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                out.stderr = rendered;
                out.code = 2;
            } else {
                out.stdout = rendered;
            }
            return out;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            out.stderr = e.to_string();
            out.code = 2;
            return out;
        }
    };

    let (name, result, output) = match &cli.command {
        Command::Check(a) => {
            let mut report = Report::new("check", &echo);
            let sub = matches.subcommand_matches("check").expect("check matches");
            let r = ordered_inputs(sub, a).and_then(|ps| cmd_check(a, ps, &mut report));
            ("check", r.map(|_| Some(report)), &a.output)
        }
        Command::Explore(a) => {
            let mut report = Report::new("explore", &echo);
            match cmd_explore(a, &mut report) {
                Ok(Some(dot)) => {
                    return finish(write_output(&a.output, dot, &mut out).map(|_| 0), out);
                }
                r => ("explore", r.map(|_| Some(report)), &a.output),
            }
        }
        Command::Render(a) => {
            let r = cmd_render(a).and_then(|dot| write_output(&a.output, dot, &mut out));
            return finish(r.map(|_| 0), out);
        }
        Command::Prove(a) => {
            let mut report = Report::new("prove", &echo);
            ("prove", cmd_prove(a, &mut report).map(|_| Some(report)), &a.output)
        }
    };
    match result {
        Ok(Some(report)) => {
            let code = report.exit_code;
            if let Some(e) = &report.error {
                out.stderr.push_str(&format!("netbisim {name}: {e}\n"));
            }
            finish(write_output(output, report.to_json(), &mut out).map(|_| code), out)
        }
        Ok(None) => out,
        Err(f) => {
            // errors still produce a report so scripts can parse every run
            let mut report = Report::new(name, &echo);
            report.exit_code = f.code;
            report.error = Some(f.message.clone());
            out.stderr.push_str(&format!("netbisim {name}: {}\n", f.message));
            let _ = write_output(output, report.to_json(), &mut out);
            out.code = f.code;
            out
        }
    }
}

fn finish(r: Result<u8, Failure>, mut out: Outcome) -> Outcome {
    match r {
        Ok(code) => out.code = code,
        Err(f) => {
            out.stderr.push_str(&format!("netbisim: {}\n", f.message));
            out.code = f.code;
        }
    }
    out
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let out = run(std::env::args_os().skip(1));
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["frobnicate"]).code, 2);
        assert_eq!(run(["check", "--alphabet", "0", "--builder", "direct:0", "--builder", "direct:0"]).code, 2);
        assert_eq!(run(["check", "--builder", "direct:0"]).code, 2);
        assert_eq!(run(["--help"]).code, 0);
    }

    #[test]
    fn builders_are_checked_in_order() {
        let out = run(["check", "--builder", "direct:0", "--builder", "multicast:0->0"]);
        assert_eq!(out.code, 2, "{}", out.stderr);
        let out = run(["check", "--builder", "direct:0,1", "--builder", "direct:1,0"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let report = Report::from_json(&out.stdout).unwrap();
        assert!(report.check.unwrap().equivalent);
        assert_eq!(report.inputs.len(), 2);
    }

    #[test]
    fn render_stop() {
        let out = run(["render", "--builder", "direct:0"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.starts_with("digraph net {"));
    }
}
