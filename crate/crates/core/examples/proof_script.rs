//! Replays the shipped proof script that splits the relays of the
//! multicast network.
//!
//! ```text
//! cargo run --release --example proof_script -- [script.proof]
//! ```

use std::path::PathBuf;

use netbisim::rewrite::{run_script, ProofScript};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/first_step.proof"));
    let text = std::fs::read_to_string(&path).expect("readable script");
    let mut script = ProofScript::from_toml(&text).expect("valid script");
    script.options.whole_term = true;
    match run_script(&script, path.parent().unwrap()) {
        Ok(trace) => {
            println!("start {}", trace.start);
            for (i, step) in trace.steps.iter().enumerate() {
                let ok = step.validation.as_ref().is_none_or(|v| v.equivalent);
                println!("step {i}: {} {} {} (validated: {ok})", step.lemma, step.direction, step.instantiation);
                for (old, new) in step.removed.iter().zip(std::iter::repeat(&step.added)) {
                    let added: Vec<String> = new.iter().map(|p| p.to_string()).collect();
                    println!("  {old}  becomes  {}", added.join(" || "));
                }
            }
            println!("end   {}", trace.end);
            println!("whole script preserves bisimilarity: {:?}", trace.whole_term.map(|v| v.equivalent));
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
