//! The lemma catalog and model checks of distributor splitting.
//!
//! ```text
//! cargo run --release --example lemmas
//! ```

use netbisim::rewrite::{catalog, check_lemma_instance, distributor_splitting, Instantiation};
use netbisim::ExploreOptions;

fn main() {
    for lemma in catalog() {
        println!("{lemma}");
    }
    let lemma = distributor_splitting();
    for alphabet in [1, 2] {
        for n in 1..=3 {
            let targets: Vec<String> = (1..=n).map(|i| format!("b{i}")).collect();
            let inst = Instantiation::new().with("a", "a").with_list("bs", targets);
            let opts = ExploreOptions::set(alphabet);
            let full = check_lemma_instance(&lemma, &inst, &opts).unwrap();
            let bare = check_lemma_instance(&lemma.without_side_condition(0), &inst, &opts).unwrap();
            println!(
                "alphabet {alphabet}, n = {n}: with +a {}, without +a {}",
                full.verdict.equivalent, bare.verdict.equivalent
            );
        }
    }
}
