//! Flooding against direct broadcast on several small topologies.
//!
//! ```text
//! cargo run --release --example topologies
//! ```

use netbisim::bisim::check_up_to_loss;
use netbisim::networks::{direct_broadcast, is_strongly_connected, isolated_senders, multicast, receive_channels, Digraph};
use netbisim::ExploreOptions;

fn main() {
    let graphs = [
        ("ring of two", "0 -> 1\n1 -> 0"),
        ("ring of three", "0 -> 1\n1 -> 2\n2 -> 0"),
        ("line", "0 -> 1\n1 -> 2"),
        ("star", "0 -> 1\n1 -> 0\n0 -> 2\n2 -> 0"),
        ("diamond ring", "0 -> 1\n0 -> 2\n1 -> 3\n2 -> 3\n3 -> 0"),
    ];
    for (name, text) in graphs {
        let g = Digraph::parse(text).unwrap();
        let m = multicast(&g);
        let d = direct_broadcast(g.nodes()).unwrap();
        let v = check_up_to_loss(&m, &d, &receive_channels(g.nodes()), &ExploreOptions::set(1)).unwrap();
        println!(
            "{name:14} strongly connected {:5}  isolated senders {:?}  equivalent up to loss {}",
            is_strongly_connected(&g),
            isolated_senders(&g),
            v.equivalent
        );
    }
}
