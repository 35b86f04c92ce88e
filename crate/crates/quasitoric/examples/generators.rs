//! Build the stock polytopes and inspect their combinatorics.
//!
//! Usage:
//!   cargo run --example generators
//!   cargo run --example generators -- "cube:2 x perm:3"

use quasitoric::polytope::parse_expression;

fn main() {
    let exprs: Vec<String> = match std::env::args().nth(1) {
        Some(e) => vec![e],
        None => ["cube:3", "simplex:3", "perm:3", "polygon:6", "cube:2 x perm:3"]
            .map(String::from)
            .to_vec(),
    };
    for expr in exprs {
        let p = parse_expression(&expr).expect("valid generator expression");
        let report = p.validate();
        println!(
            "{expr}: n={}, m={}, vertices={}, valid={}",
            p.dim(),
            p.num_facets(),
            p.num_vertices(),
            report.is_ok()
        );
        println!("  f-vector {:?}", p.f_vector());
        println!("  h-vector {:?}", p.h_vector());
        let mut edge_counts: Vec<usize> =
            p.two_faces().iter().map(|f| f.vertex_count()).collect();
        edge_counts.sort_unstable();
        println!("  2-face edge counts {edge_counts:?}");
        println!(
            "  minimal non-faces: {}",
            p.minimal_nonfaces()
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
}
