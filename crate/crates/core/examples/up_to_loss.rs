//! Direct broadcast against flooding over a four-node ring with shortcuts,
//! with and without losers on the receive channels.
//!
//! ```text
//! cargo run --release --example up_to_loss [alphabet-size]
//! ```

use netbisim::bisim::{Checker, Side};
use netbisim::networks::{direct_broadcast, multicast, receive_channels, Digraph};
use netbisim::{bisim::attach_losers, ExploreOptions, Label};

fn main() {
    let size: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    let g = Digraph::diamond_ring();
    let m = multicast(&g);
    let d = direct_broadcast(g.nodes()).expect("distinct nodes");
    let receivers = receive_channels(g.nodes());
    // steer the witness: the medium delivers to node 3 first and then drops the packet
    let opening = vec![
        (Side::Right, Label::In("s0".into(), "p".into())),
        (Side::Right, Label::Out("r3".into(), "p".into())),
    ];
    let checker = Checker::new(ExploreOptions::set(size)).with_opening(opening);

    for (title, losers) in [("up to loss", receivers.clone()), ("plain", Vec::new())] {
        let checked = checker
            .check(&attach_losers(&m, &losers), &attach_losers(&d, &losers))
            .expect("exploration succeeds");
        let v = &checked.verdict;
        println!(
            "{title}: equivalent={} states={}+{} blocks={} in {:.2?}",
            v.equivalent, v.stats.left_states, v.stats.right_states, v.stats.blocks, v.stats.elapsed
        );
        if let Some(w) = &v.witness {
            checked.replay().expect("witness replays");
            print!("{}", w.render(&checked.left, &checked.right));
        }
    }
}
