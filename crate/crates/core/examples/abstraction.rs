//! Compares the saturated set semantics with the exact multiset semantics
//! on weak traces.
//!
//! ```text
//! cargo run --example abstraction -- "*a || a -> b" 5
//! ```

use netbisim::semantics::{validate_abstraction, ExploreOptions, Inclusion};
use netbisim::parse;

fn main() {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "*a || a => [b, c] || b -> c".to_string());
    let depth: usize = args.next().and_then(|d| d.parse().ok()).unwrap_or(5);
    let p = parse(&text).expect("valid process");
    let exact = ExploreOptions::exact(1).with_dup_budget(Some(2));
    let report = validate_abstraction(&p, &exact, &ExploreOptions::set(1), depth).expect("exploration succeeds");
    println!("depth {depth}: exact {} states, set {} states", report.exact_states, report.set_states);
    println!("exact traces in set: {}", show(&report.exact_in_set));
    println!("set traces in exact: {}", show(&report.set_in_exact));
    for note in &report.notes {
        println!("note: {note}");
    }
    // a repeated target is where the two semantics part ways
    let r = validate_abstraction(&parse("a => [d, d]").unwrap(), &exact, &ExploreOptions::set(1), 3).unwrap();
    println!("a => [d, d]: exact traces in set: {}", show(&r.exact_in_set));
}

fn show(i: &Inclusion) -> String {
    match i {
        Inclusion::Holds => "holds".into(),
        Inclusion::Fails { trace } => {
            let t: Vec<String> = trace.iter().map(|l| l.to_string()).collect();
            format!("fails on {}", t.join(" . "))
        }
    }
}
