//! Weak saturation and a distinguishing game between a loser and a bridge.
//!
//! ```text
//! cargo run --example witness
//! ```

use netbisim::bisim::{saturate, Checker};
use netbisim::semantics::{compile, explore, ExploreOptions};
use netbisim::{parse, Label};

fn main() {
    let opts = ExploreOptions::set(1);
    let p = parse("new m. (a -> m || m -> b)").unwrap();
    let lts = explore(&compile(&p), &opts).unwrap();
    let weak = saturate(&lts);
    let out_b = Label::Out("b".into(), "p".into());
    for s in 0..weak.num_states() {
        println!("{}: weak {out_b} to {:?}", lts.describe_state(s), weak.targets(s, &out_b));
    }

    // the relay is weakly bisimilar to a bridge, but not to a lossy bridge
    let bridge = parse("a -> b").unwrap();
    let lossy = parse("a -> b || ?b").unwrap();
    let checker = Checker::new(opts);
    println!("relay ~ bridge: {}", checker.check(&p, &bridge).unwrap().verdict.equivalent);
    let checked = checker.check(&bridge, &lossy).unwrap();
    let w = checked.verdict.witness.as_ref().expect("a witness");
    checked.replay().expect("the witness replays");
    println!("bridge vs lossy bridge, trace {:?}", w.trace().iter().map(|l| l.to_string()).collect::<Vec<_>>());
    print!("{}", w.render(&checked.left, &checked.right));
}
