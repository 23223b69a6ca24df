//! Parsing, desugaring and normal forms.
//!
//! ```text
//! cargo run --example normalize -- "(new x. x -> b || *x) || 0 || a -> x"
//! ```

use netbisim::lang::{desugar, free_channels, normalize, parse, tidy};

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "(new x. x -> b || *x) || 0 || (a -> x || new y. y -> b)".to_string());
    let p = match parse(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let free: Vec<String> = free_channels(&p).iter().map(|c| c.to_string()).collect();
    println!("parsed     {p}");
    println!("free       {{{}}}", free.join(", "));
    println!("desugared  {}", desugar(&p));
    println!("tidy       {}", tidy(&p));
    println!("normal     {}", normalize(&p));
    assert_eq!(normalize(&normalize(&p)), normalize(&p));
}
