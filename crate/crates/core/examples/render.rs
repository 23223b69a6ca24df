//! Draws the direct-broadcast network as DOT.
//!
//! ```text
//! cargo run --example render | dot -Tsvg > direct.svg
//! ```

use netbisim::networks::{direct_broadcast, multicast, Digraph};
use netbisim::render::process_to_dot;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "direct".to_string());
    let g = Digraph::diamond_ring();
    let p = match which.as_str() {
        "multicast" => multicast(&g),
        _ => direct_broadcast(g.nodes()).unwrap(),
    };
    print!("{}", process_to_dot(&p));
}
