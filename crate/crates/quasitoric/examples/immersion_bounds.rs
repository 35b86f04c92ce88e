//! Full pipeline for one polytope: classes, rank, and the immersion,
//! embedding and totally-skew-embedding bounds for both coefficient choices.
//!
//! Usage:
//!   cargo run --example immersion_bounds
//!   cargo run --example immersion_bounds -- "cube:4 x perm:3"

use quasitoric::charpair::ManifoldSpec;
use quasitoric::classes::{bounds, compute_classes};
use quasitoric::coloring::find_n_coloring;
use quasitoric::face_ring::FaceRing;
use quasitoric::polytope::parse_expression;

fn main() {
    let expr = std::env::args().nth(1).unwrap_or_else(|| "cube:4".into());
    let p = parse_expression(&expr).expect("valid expression");
    let Some(c) = find_n_coloring(&p).unwrap() else {
        eprintln!("{expr} admits no proper coloring in {} colors", p.dim());
        std::process::exit(3);
    };

    let spec = ManifoldSpec::staircase(p, c, 1).unwrap();
    let ring = FaceRing::build(&spec).unwrap();
    let sw = compute_classes(&ring, &spec).unwrap();

    println!("{expr}: n = {}, rank of dual class = {}", sw.n, sw.rank_dual);
    for k in 0..=sw.n {
        println!("  wbar[{k}] = {}", ring.render(&sw.wbar[k]));
    }
    for d in [1u8, 2] {
        let spec_d = spec.with_d(d);
        let sw_d = compute_classes(&ring, &spec_d).unwrap();
        let b = bounds(&sw_d);
        println!(
            "d={d} (manifold dimension {}): imm >= {}, em >= {}, N >= {} | Whitney: imm <= {}, em <= {} | Cohen: imm <= {}",
            b.real_dim,
            b.imm_lower,
            b.em_lower,
            b.skew_lower,
            b.whitney_imm_upper,
            b.whitney_em_upper,
            b.cohen_imm_upper
        );
    }
}
