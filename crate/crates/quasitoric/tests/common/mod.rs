use quasitoric::charpair::ManifoldSpec;
use quasitoric::coloring::find_n_coloring;
use quasitoric::polytope::{parse_expression, SimplePolytope};

/// The desk-scale family used by the cross-oracle and audit criteria.
pub fn family() -> Vec<(&'static str, SimplePolytope)> {
    [
        "cube:2",
        "cube:3",
        "cube:4",
        "cube:5",
        "polygon:4",
        "polygon:6",
        "polygon:8",
        "perm:3",
        "cube:2 x perm:3",
    ]
    .into_iter()
    .map(|expr| (expr, parse_expression(expr).unwrap()))
    .collect()
}

pub fn staircase_spec(p: SimplePolytope, d: u8) -> ManifoldSpec {
    let c = find_n_coloring(&p).unwrap().expect("polytope is n-colorable");
    ManifoldSpec::staircase(p, c, d).unwrap()
}

pub fn plain_spec(p: SimplePolytope, d: u8) -> ManifoldSpec {
    let c = find_n_coloring(&p).unwrap().expect("polytope is n-colorable");
    ManifoldSpec::plain(p, c, d).unwrap()
}
