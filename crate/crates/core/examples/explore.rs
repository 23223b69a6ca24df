//! Transition systems of a bridge under both semantics.
//!
//! ```text
//! cargo run --example explore -- "*a || a -> b"
//! ```

use netbisim::semantics::{compile, explore, ExploreOptions};
use netbisim::parse;

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "a -> b".to_string());
    let p = parse(&text).expect("valid process");
    let net = compile(&p);
    println!("{} places, {} transitions, inputs {:?}", net.places.len(), net.transitions.len(), net.input_channels());
    for (name, opts) in [
        ("set", ExploreOptions::set(1)),
        ("exact", ExploreOptions::exact(1).with_dup_budget(Some(2))),
    ] {
        match explore(&net, &opts) {
            Ok(lts) => {
                println!("{name}: {} states, {} transitions", lts.num_states(), lts.num_transitions());
                for &(s, l, t) in &lts.transitions {
                    println!("  {} --{}--> {}", lts.describe_state(s as usize), lts.label(l), lts.describe_state(t as usize));
                }
            }
            Err(e) => println!("{name}: {e}"),
        }
    }
}
