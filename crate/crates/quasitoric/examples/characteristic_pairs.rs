//! Construct characteristic matrices and inspect the vertex determinants.
//!
//! The staircase assignment anchors at the lexicographically smallest vertex
//! and is unimodular at every vertex; with its columns taken in color order
//! every determinant is exactly +1.

use quasitoric::charpair::{
    plain_matrix, staircase_matrix, validate_char_pair, vertex_det_color_ordered,
};
use quasitoric::coloring::find_n_coloring;
use quasitoric::polytope::parse_expression;

fn main() {
    let p = parse_expression("perm:3").unwrap();
    let c = find_n_coloring(&p).unwrap().unwrap();

    for (name, lambda) in [
        ("staircase", staircase_matrix(&p, &c, 2).unwrap()),
        ("plain", plain_matrix(&p, &c, 2).unwrap()),
    ] {
        println!("{name} matrix ({} x {}):", lambda.n, lambda.m);
        for i in 0..lambda.n {
            let row: Vec<String> = (0..lambda.m).map(|j| lambda.entry(i, j).to_string()).collect();
            println!("  [{}]", row.join(" "));
        }
        let verdict = validate_char_pair(&p, &lambda).unwrap();
        let plus = verdict.vertex_dets.iter().filter(|v| v.det == 1).count();
        let minus = verdict.vertex_dets.iter().filter(|v| v.det == -1).count();
        println!(
            "  valid: {} ({} vertices with det +1, {} with det -1)",
            verdict.is_ok(),
            plus,
            minus
        );
        if let Some(base) = lambda.base_vertex {
            println!("  base vertex {base}");
            let color_ordered: Vec<i128> = p
                .vertices()
                .iter()
                .map(|&v| vertex_det_color_ordered(&p, &c, &lambda, v).unwrap())
                .collect();
            println!(
                "  color-ordered determinants all +1: {}",
                color_ordered.iter().all(|&d| d == 1)
            );
        }
    }
}
