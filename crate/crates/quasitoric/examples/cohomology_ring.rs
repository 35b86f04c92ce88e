//! Build the mod-2 cohomology ring and play with normal forms.
//!
//! Usage:
//!   cargo run --example cohomology_ring

use quasitoric::charpair::ManifoldSpec;
use quasitoric::coloring::find_n_coloring;
use quasitoric::face_ring::{FaceRing, VPoly};
use quasitoric::polytope::parse_expression;

fn main() {
    let p = parse_expression("cube:3").unwrap();
    let c = find_n_coloring(&p).unwrap().unwrap();
    let spec = ManifoldSpec::staircase(p, c, 1).unwrap();
    let ring = FaceRing::build(&spec).unwrap();

    println!("graded dimensions: {:?}", ring.betti());
    println!(
        "minimal non-faces: {}",
        ring.sr_nonfaces()
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );

    // The base classes u_i and their squares.
    for i in 1..=3usize {
        let u = ring.u_vpoly(i).unwrap();
        let square = ring.normal_form(&u.mul(&u)).unwrap();
        println!("u{i}^2 = {}", ring.render(&square));
    }

    // Every vertex monomial is the same nonzero top class.
    let top = ring.fundamental_class();
    println!("fundamental class: {}", ring.render(&top));
    let verified = spec.polytope.vertices().iter().all(|&v| {
        let mono = VPoly::from_monomials([quasitoric::VMonomial::from_mask(v.0)]);
        ring.normal_form(&mono).unwrap() == top
    });
    println!("all vertex monomials equal the fundamental class: {verified}");

    // Anything of degree above the dimension collapses to zero.
    let overflow = ring.normal_form(&VPoly::var(0).pow(4)).unwrap();
    println!("v1^4 = {}", ring.render(&overflow));
}
