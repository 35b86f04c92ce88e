//! Decide n-colorability by the even-2-face criterion and find colorings.
//!
//! Usage:
//!   cargo run --example coloring_search

use quasitoric::coloring::{find_n_coloring, odd_two_face, parity_criterion};
use quasitoric::polytope::parse_expression;

fn main() {
    for expr in [
        "cube:4",
        "simplex:3",
        "perm:3",
        "polygon:5",
        "polygon:6",
        "cube:2 x perm:3",
    ] {
        let p = parse_expression(expr).unwrap();
        let feasible = parity_criterion(&p);
        match find_n_coloring(&p).unwrap() {
            Some(c) => {
                println!("{expr}: n-colorable (criterion: {feasible})");
                println!("  colors {:?}", c.colors());
            }
            None => {
                let witness = odd_two_face(&p).unwrap();
                println!(
                    "{expr}: NOT n-colorable, witness 2-face {} with {} edges",
                    witness.facet_set,
                    witness.vertex_count()
                );
            }
        }
    }
}
