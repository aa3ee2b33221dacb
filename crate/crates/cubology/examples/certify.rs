//! Certify the exact group order of small cubes two independent ways: the
//! condition-counting formulas and a verified stabilizer chain over the raw
//! facet generators.
//!
//! ```sh
//! cargo run --release --example certify -- 3 4 5 6 7
//! ```

use cubology::bsgs::{build_chain, class_major_base};
use cubology::counting;
use cubology::engine::generator_permutation;
use cubology::geometry::build_layout;

fn main() {
    let sizes: Vec<u32> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("cube size"))
        .collect();
    let sizes = if sizes.is_empty() { vec![3, 4, 5] } else { sizes };
    for n in sizes {
        let layout = build_layout(n).expect("supported size");
        let gens: Vec<_> = layout
            .generators()
            .into_iter()
            .map(|g| generator_permutation(&layout, g).unwrap())
            .collect();
        let started = std::time::Instant::now();
        let chain = build_chain(&gens, Some(&class_major_base(&layout)), 0).unwrap();
        let elapsed = started.elapsed();
        let counted = counting::group_order(n).unwrap();
        println!(
            "n={n}: |G| = {} = {}",
            counting::group_order_factored(n).unwrap().render(),
            counted
        );
        println!(
            "      chain: {} ({} strong generators, {elapsed:.2?}) — {}",
            chain.order(),
            chain.strong_generator_count(),
            if chain.order() == counted {
                "certified"
            } else {
                "MISMATCH"
            }
        );
    }
}
