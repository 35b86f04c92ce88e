//! Acceptance suite. Each test prints one pass/fail line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

mod common;

use std::process::Command;
use std::time::Instant;

use common::{family, plain_spec, staircase_spec};
use quasitoric::charpair::ManifoldSpec;
use quasitoric::classes::{bounds, compute_classes, convolution_vanishes, product_sw};
use quasitoric::face_ring::{FaceRing, VPoly};
use quasitoric::polytope::parse_expression;
use quasitoric::t_ring::{dual_total_class, embed_to_face_ring, lucas_binom, sigma_table, TPoly};

fn pass(name: &str, started: Instant) {
    println!(
        "acceptance {name}: PASS ({} ms)",
        started.elapsed().as_millis()
    );
}

fn tpoly_of(n: usize, monos: &[&[usize]]) -> TPoly {
    monos.iter().fold(TPoly::zero(n), |acc, gens| {
        let mut one = TPoly::one(n);
        for &g in gens.iter() {
            one = one.mul(&TPoly::gen(n, g));
        }
        acc.add(&one)
    })
}

#[test]
fn criterion_1_low_dimensional_dual_classes() {
    let start = Instant::now();
    assert_eq!(dual_total_class(2), tpoly_of(2, &[&[], &[1]]));
    assert_eq!(dual_total_class(3), tpoly_of(3, &[&[], &[1], &[2]]));
    assert_eq!(
        dual_total_class(4),
        tpoly_of(4, &[&[], &[1], &[2], &[3], &[1, 3], &[1, 2, 3]])
    );
    assert_eq!(
        dual_total_class(5),
        tpoly_of(
            5,
            &[
                &[],
                &[1],
                &[2],
                &[3],
                &[4],
                &[1, 3],
                &[1, 4],
                &[2, 4],
                &[1, 2, 3],
                &[2, 3, 4],
            ]
        )
    );
    assert!(start.elapsed().as_secs() < 1, "must finish under 1 s");
    pass("criterion 1 (dual classes n=2..5)", start);
}

#[test]
fn criterion_2_rank_and_bounds_in_dimension_4() {
    let start = Instant::now();
    for expr in ["cube:4", "cube:2 x polygon:4", "cube:1 x cube:1 x cube:1 x cube:1"] {
        let spec1 = staircase_spec(parse_expression(expr).unwrap(), 1);
        let ring = FaceRing::build(&spec1).unwrap();
        let sw1 = compute_classes(&ring, &spec1).unwrap();
        assert_eq!(sw1.rank_dual, 3, "{expr}");

        let b1 = bounds(&sw1);
        assert_eq!((b1.imm_lower, b1.em_lower, b1.skew_lower), (7, 8, 15), "{expr} d=1");

        let spec2 = spec1.with_d(2);
        let sw2 = compute_classes(&ring, &spec2).unwrap();
        let b2 = bounds(&sw2);
        assert_eq!(
            (b2.imm_lower, b2.em_lower, b2.skew_lower),
            (14, 15, 29),
            "{expr} d=2"
        );
    }
    assert!(start.elapsed().as_secs() < 5, "must finish under 5 s");
    pass("criterion 2 (dimension-4 ranks and bounds)", start);
}

#[test]
fn criterion_3_face_ring_inversion_matches_t_ring_oracle() {
    let start = Instant::now();
    for (name, p) in family() {
        let n = p.dim();
        let spec = staircase_spec(p, 1);
        let ring = FaceRing::build(&spec).unwrap();
        let sw = compute_classes(&ring, &spec).unwrap();
        let dual = dual_total_class(n);
        for k in 0..=n {
            let oracle = embed_to_face_ring(&ring, &dual.degree_part(k)).unwrap();
            assert_eq!(sw.wbar[k], oracle, "{name} degree {k}");
        }
    }
    pass("criterion 3 (cross-oracle dual classes)", start);
}

#[test]
fn criterion_4_h_vector_audit() {
    let start = Instant::now();
    for (name, p) in family() {
        let h = p.h_vector();
        let vertices = p.num_vertices();
        for d in [1u8, 2] {
            for spec in [staircase_spec(p.clone(), d), plain_spec(p.clone(), d)] {
                let ring = FaceRing::build(&spec).unwrap();
                assert_eq!(ring.betti(), &h[..], "{name} d={d} {:?}", spec.kind);
                assert_eq!(
                    ring.betti().iter().sum::<usize>(),
                    vertices,
                    "{name} total dimension"
                );
            }
        }
    }
    pass("criterion 4 (h-vector audit)", start);
}

#[test]
fn criterion_5_sigma_recurrence_equals_binomial_parity() {
    let start = Instant::now();
    let mut checked = 0;
    let mut prev: Option<Vec<u8>> = None;
    for n in 1..=16usize {
        let table = sigma_table(n);
        for k in 0..n {
            assert_eq!(
                table.sigma[k],
                lucas_binom((n + k) as u64, k as u64),
                "n={n} k={k}"
            );
            checked += 1;
        }
        if let Some(prev) = &prev {
            for k in 0..n - 1 {
                let rec = prev[..=k.min(prev.len() - 1)].iter().fold(0u8, |a, &b| a ^ b);
                assert_eq!(table.sigma[k], rec, "recurrence n={n} k={k}");
            }
        }
        prev = Some(table.sigma.clone());
    }
    assert_eq!(checked, 136);
    assert!(start.elapsed().as_secs() < 1, "must finish under 1 s");
    pass("criterion 5 (sigma vs binomial parity, 136 values)", start);
}

#[test]
fn criterion_6_structural_identities() {
    let start = Instant::now();
    for (name, p) in family() {
        let n = p.dim();
        let spec = staircase_spec(p.clone(), 1);
        let ring = FaceRing::build(&spec).unwrap();
        let sw = compute_classes(&ring, &spec).unwrap();

        // w * wbar = 1: convolutions vanish in degrees 1..n.
        assert!(convolution_vanishes(&ring, &sw).unwrap(), "{name}");
        // top dual class vanishes
        assert!(sw.wbar[n].is_zero(), "{name}");
        // the product of the base classes is the nonzero top class
        let mut top = VPoly::one();
        for i in 1..=n {
            top = top.mul(&ring.u_vpoly(i).unwrap());
        }
        let top = ring.normal_form(&top).unwrap();
        assert!(!top.is_zero(), "{name}");
        assert_eq!(top, ring.fundamental_class(), "{name}");
        assert_eq!(ring.betti()[n], 1, "{name}");

        // same-color products vanish, including with the base class
        let colors = spec.coloring.colors();
        let base = ring.base_facets().unwrap().to_vec();
        for a in 0..colors.len() {
            for b in a + 1..colors.len() {
                if colors[a] == colors[b] {
                    let prod = VPoly::var(a).mul(&VPoly::var(b));
                    assert!(ring.normal_form(&prod).unwrap().is_zero(), "{name}");
                }
            }
        }
        for (i, &h) in base.iter().enumerate() {
            for f in 0..colors.len() {
                if f != h && colors[f] as usize == i + 1 {
                    let prod = VPoly::var(h).mul(&VPoly::var(f));
                    assert!(ring.normal_form(&prod).unwrap().is_zero(), "{name}");
                }
            }
        }

        // nilpotence of the accumulated classes inside the face ring
        for k in 1..n {
            let tk = ring.normal_form(&ring.t_vpoly(k).unwrap()).unwrap();
            assert!(ring.power(&tk, k + 1).unwrap().is_zero(), "{name} t_{k}");
        }

        // plain pairs have trivial total class
        let plain = plain_spec(p, 1);
        let plain_ring = FaceRing::build(&plain).unwrap();
        let plain_sw = compute_classes(&plain_ring, &plain).unwrap();
        for k in 1..=n {
            assert!(plain_sw.w[k].is_zero(), "{name} plain degree {k}");
        }
    }
    pass("criterion 6 (structural identities)", start);
}

#[test]
fn criterion_7_product_rank_arithmetic() {
    let start = Instant::now();

    // n = 5 = 101b: the staircase pair over the product reaches n - alpha(n).
    let spec5 = staircase_spec(parse_expression("cube:2 x perm:3").unwrap(), 1);
    let ring5 = FaceRing::build(&spec5).unwrap();
    let sw5 = compute_classes(&ring5, &spec5).unwrap();
    assert_eq!(sw5.rank_dual, 3);
    assert_eq!(sw5.rank_dual, 5 - 5u32.count_ones() as usize);

    // Product manifold route: factor ranks add, and the tensor result equals
    // the direct computation over the block pair.
    let sa = staircase_spec(parse_expression("cube:2").unwrap(), 1);
    let sb = staircase_spec(parse_expression("perm:3").unwrap(), 1);
    let ra = FaceRing::build(&sa).unwrap();
    let rb = FaceRing::build(&sb).unwrap();
    let swa = compute_classes(&ra, &sa).unwrap();
    let swb = compute_classes(&rb, &sb).unwrap();
    let tensor = product_sw(&swa, &swb).unwrap();
    assert_eq!(tensor.rank_dual, swa.rank_dual + swb.rank_dual);
    let block = ManifoldSpec::block_product(&sa, &sb).unwrap();
    let block_ring = FaceRing::build(&block).unwrap();
    let block_sw = compute_classes(&block_ring, &block).unwrap();
    assert_eq!(block_sw.rank_dual, tensor.rank_dual);

    // n = 7 = 111b within the stated budget.
    let spec7 = staircase_spec(parse_expression("cube:4 x perm:3").unwrap(), 1);
    let ring7 = FaceRing::build(&spec7).unwrap();
    let sw7 = compute_classes(&ring7, &spec7).unwrap();
    assert_eq!(sw7.rank_dual, 4);
    assert_eq!(sw7.rank_dual, 7 - 7u32.count_ones() as usize);
    assert!(start.elapsed().as_secs() < 60, "must finish under 60 s");
    pass("criterion 7 (product rank arithmetic)", start);
}

#[test]
fn criterion_8_negative_controls() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_quasitoric");

    for k in 2..=4 {
        let output = Command::new(bin)
            .args([
                "compute",
                "--polytope",
                &format!("simplex:{k}"),
                "--coloring",
                "auto",
            ])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(3), "simplex:{k}");
        let stderr = String::from_utf8_lossy(&output.stderr);
        assert!(stderr.contains("2-face"), "simplex:{k}: {stderr}");
        assert!(stderr.contains("odd"), "simplex:{k}: {stderr}");
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("all_e1.json");
    std::fs::write(
        &path,
        r#"{"d": 1, "columns": [[1,0],[1,0],[1,0],[1,0]], "base_vertex": null}"#,
    )
    .unwrap();
    let output = Command::new(bin)
        .args([
            "compute",
            "--polytope",
            "cube:2",
            "--coloring",
            "auto",
            "--pair",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("vertex"), "{stderr}");
    assert!(stderr.contains("determinant"), "{stderr}");

    pass("criterion 8 (negative controls)", start);
}
