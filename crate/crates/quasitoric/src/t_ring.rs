//! The abstract subring on generators t_1..t_n subject to t_1^2 = 0 and
//! t_k^2 = t_{k-1} t_k. Every element reduces to a GF(2) combination of
//! square-free monomials, stored as n-bit masks. This ring is the
//! independent oracle for the dual class computations in the face ring.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::face_ring::{FaceRing, RingElement, VPoly};

/// GF(2) polynomial in t_1..t_n, kept reduced: all monomials square-free.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TPoly {
    n: usize,
    terms: BTreeSet<u32>,
}

impl TPoly {
    pub fn zero(n: usize) -> Self {
        TPoly {
            n,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(0);
        TPoly { n, terms }
    }

    /// The generator t_i (1-based).
    pub fn gen(n: usize, i: usize) -> Self {
        debug_assert!(1 <= i && i <= n);
        let mut terms = BTreeSet::new();
        terms.insert(1 << (i - 1));
        TPoly { n, terms }
    }

    pub fn num_gens(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for &t in &other.terms {
            if !out.terms.remove(&t) {
                out.terms.insert(t);
            }
        }
        out
    }

    /// Multiplies by the generator t_i. On a monomial already containing t_i
    /// the rewrite t_i^2 -> t_{i-1} t_i walks down until a free slot is
    /// found; running past t_1 kills the term.
    pub fn mul_gen(&self, i: usize) -> TPoly {
        let mut out = TPoly::zero(self.n);
        for &mask in &self.terms {
            if let Some(m) = mono_times_gen(mask, i) {
                if !out.terms.remove(&m) {
                    out.terms.insert(m);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &TPoly) -> TPoly {
        debug_assert_eq!(self.n, other.n);
        let mut out = TPoly::zero(self.n);
        for &b in &other.terms {
            let mut part = self.clone();
            let mut gens = b;
            while gens != 0 {
                let i = gens.trailing_zeros() as usize + 1;
                gens &= gens - 1;
                part = part.mul_gen(i);
            }
            out = out.add(&part);
        }
        out
    }

    pub fn pow(&self, k: usize) -> TPoly {
        let mut out = TPoly::one(self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Homogeneous part of the given degree.
    pub fn degree_part(&self, k: usize) -> TPoly {
        TPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|m| m.count_ones() as usize == k)
                .collect(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|m| m.count_ones());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Renders as `1 + t1 + t1*t3`, monomials sorted by degree then by the
    /// index sequence. Used verbatim in reports and golden tests.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut monos: Vec<Vec<usize>> = self
            .terms
            .iter()
            .map(|&m| (0..self.n).filter(|&i| m >> i & 1 == 1).map(|i| i + 1).collect())
            .collect();
        monos.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        monos
            .iter()
            .map(|m| {
                if m.is_empty() {
                    "1".to_string()
                } else {
                    m.iter()
                        .map(|i| format!("t{i}"))
                        .collect::<Vec<_>>()
                        .join("*")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

// t_i * t_S as a single monomial or nothing: find the largest free index
// at most i, walking down through occupied slots.
fn mono_times_gen(mask: u32, i: usize) -> Option<u32> {
    let mut i = i;
    while i >= 1 {
        if mask >> (i - 1) & 1 == 0 {
            return Some(mask | 1 << (i - 1));
        }
        i -= 1;
    }
    None
}

/// A formal monomial in t_1..t_n given by exponents (index 0 is t_1).
#[derive(Clone, Debug)]
pub struct TMono {
    pub exps: Vec<u32>,
}

/// Reduces a formal polynomial (sum of exponent monomials) to square-free
/// form. The result does not depend on the order the rewrites are applied.
pub fn t_reduce(n: usize, monos: &[TMono]) -> TPoly {
    let mut out = TPoly::zero(n);
    for mono in monos {
        let mut part = TPoly::one(n);
        for (idx, &e) in mono.exps.iter().enumerate() {
            for _ in 0..e {
                part = part.mul_gen(idx + 1);
            }
        }
        out = out.add(&part);
    }
    out
}

/// Total tangent class analogue: (1 + t_1)(1 + t_2) ... (1 + t_{n-1}).
pub fn total_class(n: usize) -> TPoly {
    let mut acc = TPoly::one(n);
    for k in 1..n {
        let factor = TPoly::one(n).add(&TPoly::gen(n, k));
        acc = acc.mul(&factor);
    }
    acc
}

/// Dual total class: the reduced product of the truncated geometric series
/// (1 + t_k + ... + t_k^k) for k = 1..n-1.
pub fn dual_total_class(n: usize) -> TPoly {
    let mut acc = TPoly::one(n);
    for k in 1..n {
        let t = TPoly::gen(n, k);
        let mut factor = TPoly::one(n);
        let mut power = TPoly::one(n);
        for _ in 1..=k {
            power = power.mul(&t);
            factor = factor.add(&power);
        }
        acc = acc.mul(&factor);
    }
    acc
}

/// Alternative construction of the dual class by the degree recurrence
/// dual_k(n+1) = sum_j t_n^j dual_{k-j}(n). Must agree with the product
/// form; the two routes cross-check each other.
pub fn dual_total_class_incremental(n: usize) -> TPoly {
    let mut current = TPoly::one(n); // n = 1: empty product
    for step in 2..=n {
        // pass from step-1 generators to step generators; masks embed as-is
        let t = TPoly::gen(n, step - 1);
        let mut parts: Vec<TPoly> = Vec::with_capacity(step);
        for k in 0..step {
            // sum_{j=0..k} t_{step-1}^j * dual_{k-j}(previous)
            let mut piece = TPoly::zero(n);
            let mut tpow = TPoly::one(n);
            for j in 0..=k {
                piece = piece.add(&tpow.mul(&current.degree_part(k - j)));
                tpow = tpow.mul(&t);
            }
            parts.push(piece.degree_part(k));
        }
        current = parts
            .into_iter()
            .fold(TPoly::zero(n), |acc, p| acc.add(&p));
    }
    current
}

/// Parity of the monomial counts of the dual class parts: sigma[k] is the
/// degree-k coefficient count mod 2 (evaluation at all ones).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTable {
    pub n: usize,
    pub sigma: Vec<u8>,
}

pub fn sigma_table(n: usize) -> SigmaTable {
    let dual = dual_total_class(n);
    let sigma = (0..n)
        .map(|k| (dual.degree_part(k).num_terms() % 2) as u8)
        .collect();
    SigmaTable { n, sigma }
}

/// Parity of the binomial coefficient C(a, b): odd iff the binary digits of
/// b are dominated by those of a.
pub fn lucas_binom(a: u64, b: u64) -> u8 {
    debug_assert!(a >= b);
    (a & b == b) as u8
}

/// Sigma tables for 1..=n_max, cross-checked against the binomial parity
/// closed form and the row-to-row recurrence. Any mismatch is an internal
/// error.
pub fn sigma_tables_checked(n_max: usize) -> Result<Vec<SigmaTable>> {
    let mut tables = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let table = sigma_table(n);
        for (k, &s) in table.sigma.iter().enumerate() {
            let closed = lucas_binom((n + k) as u64, k as u64);
            if s != closed {
                return Err(Error::Internal(format!(
                    "sigma({n}, {k}) = {s} disagrees with binomial parity {closed}"
                )));
            }
        }
        if n >= 2 {
            let prev: &SigmaTable = &tables[n - 2];
            for k in 0..n - 1 {
                let rec: u8 = prev.sigma[..=k.min(prev.sigma.len() - 1)]
                    .iter()
                    .fold(0, |a, &b| a ^ b);
                if table.sigma[k] != rec {
                    return Err(Error::Internal(format!(
                        "sigma recurrence fails at n = {n}, k = {k}"
                    )));
                }
            }
        }
        tables.push(table);
    }
    Ok(tables)
}

/// Substitutes t_i -> u_1 + ... + u_i into a homogeneous polynomial and
/// reduces in the given staircase ring. The substitution is a ring map, so
/// products of degree-one images are taken inside the ring.
pub fn embed_to_face_ring(ring: &FaceRing, x: &TPoly) -> Result<RingElement> {
    if x.num_gens() != ring.dim() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial has {} generators, ring dimension is {}",
            x.num_gens(),
            ring.dim()
        )));
    }
    if !x.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    let degree = x.max_degree();
    let mut acc = ring.zero_element(degree);
    for mask in x.terms() {
        let mut prod = ring.one();
        for i in 0..ring.dim() {
            if mask >> i & 1 == 1 {
                let ti = ring.normal_form(&ring.t_vpoly(i + 1)?)?;
                prod = ring.multiply(&prod, &ti)?;
            }
        }
        acc = acc.add(&prod)?;
    }
    Ok(acc)
}

/// Fully formal route for the same substitution, expanding the product of
/// linear forms before reduction. Used to cross-check multiplicativity.
pub fn embed_formal(ring: &FaceRing, x: &TPoly) -> Result<RingElement> {
    if x.num_gens() != ring.dim() {
        return Err(Error::DimensionMismatch("generator count".into()));
    }
    if !x.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    let degree = x.max_degree();
    let mut acc = ring.zero_element(degree);
    for mask in x.terms() {
        let mut poly = VPoly::one();
        for i in 0..ring.dim() {
            if mask >> i & 1 == 1 {
                poly = poly.mul(&ring.t_vpoly(i + 1)?);
            }
        }
        acc = acc.add(&ring.normal_form(&poly)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpair::ManifoldSpec;
    use crate::coloring::find_n_coloring;
    use crate::gf2::{BitRow, Echelon};
    use crate::polytope::SimplePolytope;
    use proptest::prelude::*;

    fn mask_of(gens: &[usize]) -> u32 {
        gens.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    fn tpoly_of(n: usize, monos: &[&[usize]]) -> TPoly {
        let mut t = TPoly::zero(n);
        for &m in monos {
            t = t.add(&TPoly {
                n,
                terms: [mask_of(m)].into_iter().collect(),
            });
        }
        t
    }

    #[test]
    fn basic_rewrites() {
        // t_2^2 -> t_1 t_2
        let t2 = TPoly::gen(3, 2);
        assert_eq!(t2.mul(&t2), tpoly_of(3, &[&[1, 2]]));
        // t_1^2 -> 0
        let t1 = TPoly::gen(3, 1);
        assert!(t1.mul(&t1).is_zero());
        // t_3^4 -> 0
        let t3 = TPoly::gen(3, 3);
        assert!(t3.pow(4).is_zero());
    }

    #[test]
    fn t_reduce_on_formal_monomials() {
        let reduced = t_reduce(3, &[TMono { exps: vec![0, 2, 0] }]);
        assert_eq!(reduced, tpoly_of(3, &[&[1, 2]]));
        let reduced = t_reduce(4, &[TMono { exps: vec![0, 0, 4, 0] }]);
        assert!(reduced.is_zero());
    }

    #[test]
    fn dual_classes_for_small_dimensions() {
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
    }

    #[test]
    fn product_of_class_and_dual_is_one() {
        for n in 1..=9 {
            let prod = total_class(n).mul(&dual_total_class(n));
            assert_eq!(prod, TPoly::one(n), "n = {n}");
        }
    }

    #[test]
    fn incremental_construction_matches_product_form() {
        for n in 1..=10 {
            assert_eq!(dual_total_class_incremental(n), dual_total_class(n));
        }
    }

    #[test]
    fn nilpotence_of_generators() {
        for n in 2..=8usize {
            for k in 1..n {
                assert!(TPoly::gen(n, k).pow(k + 1).is_zero());
            }
        }
    }

    #[test]
    fn sigma_tables_for_4_and_5() {
        assert_eq!(sigma_table(4).sigma, vec![1, 1, 1, 1]);
        assert_eq!(sigma_table(5).sigma, vec![1, 0, 1, 0, 0]);
    }

    #[test]
    fn sigma_checked_up_to_16() {
        let tables = sigma_tables_checked(16).unwrap();
        assert_eq!(tables.len(), 16);
        // Power-of-two rows end in 1.
        for n in [2usize, 4, 8, 16] {
            assert_eq!(tables[n - 1].sigma[n - 1], 1);
        }
    }

    #[test]
    fn top_class_dichotomy() {
        for n in 2..=16usize {
            let dual = dual_total_class(n);
            let top = dual.degree_part(n - 1);
            if n.is_power_of_two() {
                let full: u32 = (1 << (n - 1)) - 1;
                assert_eq!(
                    top.terms().collect::<Vec<_>>(),
                    vec![full],
                    "top dual part at n = {n} is the full square-free monomial"
                );
            } else {
                assert_eq!(
                    (top.num_terms() % 2) as u8,
                    lucas_binom(2 * n as u64 - 1, n as u64 - 1)
                );
            }
        }
    }

    #[test]
    fn rank_is_dimension_minus_alpha_for_5_and_7() {
        for (n, expected) in [(5usize, 3usize), (7, 4)] {
            let dual = dual_total_class(n);
            let rank = (1..n).rev().find(|&k| !dual.degree_part(k).is_zero());
            assert_eq!(rank, Some(expected));
            assert_eq!(expected, n - (n as u32).count_ones() as usize);
        }
    }

    #[test]
    fn rank_never_exceeds_dimension_minus_alpha() {
        for n in 1..=16usize {
            let dual = dual_total_class(n);
            let rank = (1..n).rev().find(|&k| !dual.degree_part(k).is_zero());
            let alpha = (n as u32).count_ones() as usize;
            assert!(rank.unwrap_or(0) <= n - alpha, "n = {n}");
        }
    }

    #[test]
    fn rendering() {
        assert_eq!(dual_total_class(2).render(), "1 + t1");
        assert_eq!(
            dual_total_class(4).render(),
            "1 + t1 + t2 + t3 + t1*t3 + t1*t2*t3"
        );
        assert_eq!(TPoly::zero(3).render(), "0");
    }

    fn staircase_ring(p: SimplePolytope) -> FaceRing {
        let c = find_n_coloring(&p).unwrap().unwrap();
        FaceRing::build(&ManifoldSpec::staircase(p, c, 1).unwrap()).unwrap()
    }

    #[test]
    fn embed_t1_is_u1() {
        let ring = staircase_ring(SimplePolytope::cube(3).unwrap());
        let img = embed_to_face_ring(&ring, &TPoly::gen(3, 1)).unwrap();
        let u1 = ring.normal_form(&ring.u_vpoly(1).unwrap()).unwrap();
        assert_eq!(img, u1);
    }

    #[test]
    fn embed_of_full_monomial_is_fundamental_class() {
        for p in [
            SimplePolytope::cube(3).unwrap(),
            SimplePolytope::permutahedron(3).unwrap(),
            SimplePolytope::polygon(8).unwrap(),
        ] {
            let n = p.dim();
            let ring = staircase_ring(p);
            let full = TPoly {
                n,
                terms: [(1u32 << n) - 1].into_iter().collect(),
            };
            let img = embed_to_face_ring(&ring, &full).unwrap();
            assert_eq!(img, ring.fundamental_class());
        }
    }

    #[test]
    fn embed_agrees_with_formal_expansion() {
        let ring = staircase_ring(SimplePolytope::cube(4).unwrap());
        for k in 0..=3usize {
            let part = dual_total_class(4).degree_part(k);
            assert_eq!(
                embed_to_face_ring(&ring, &part).unwrap(),
                embed_formal(&ring, &part).unwrap()
            );
        }
    }

    #[test]
    fn squarefree_monomial_images_are_independent() {
        // The square-free monomials inject into the cohomology ring: their
        // images are linearly independent degree by degree.
        for p in [
            SimplePolytope::cube(2).unwrap(),
            SimplePolytope::cube(4).unwrap(),
            SimplePolytope::polygon(6).unwrap(),
            SimplePolytope::permutahedron(3).unwrap(),
            SimplePolytope::cube(2)
                .unwrap()
                .product(&SimplePolytope::permutahedron(3).unwrap())
                .unwrap(),
        ] {
            let n = p.dim();
            let ring = staircase_ring(p);
            for k in 0..=n {
                let masks: Vec<u32> =
                    (0..1u32 << n).filter(|m| m.count_ones() as usize == k).collect();
                let mut ech = Echelon::new(ring.betti()[k]);
                let mut independent = 0;
                for mask in masks {
                    let poly = TPoly {
                        n,
                        terms: [mask].into_iter().collect(),
                    };
                    let img = embed_to_face_ring(&ring, &poly).unwrap();
                    let mut row = BitRow::zero(ring.betti()[k]);
                    for b in img.coords().ones() {
                        row.flip(b);
                    }
                    if ech.insert(row) {
                        independent += 1;
                    }
                }
                let expected = binom(n, k);
                assert_eq!(independent, expected, "degree {k}");
            }
        }
    }

    fn binom(n: usize, k: usize) -> usize {
        let mut r = 1usize;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    proptest! {
        #[test]
        fn reduction_is_confluent(
            exps in prop::collection::vec(0u32..4, 1..6),
            seed in any::<u64>(),
        ) {
            // Multiply the generator powers into the accumulator in two
            // different orders; the reduced result must be identical.
            let n = exps.len();
            let mut steps: Vec<usize> = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    steps.push(i + 1);
                }
            }
            let forward = steps.iter().fold(TPoly::one(n), |acc, &i| acc.mul_gen(i));
            // deterministic shuffle from the seed
            let mut shuffled = steps.clone();
            let mut state = seed | 1;
            for i in (1..shuffled.len()).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                shuffled.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let backward = shuffled.iter().fold(TPoly::one(n), |acc, &i| acc.mul_gen(i));
            prop_assert_eq!(forward, backward);
        }

        #[test]
        fn mul_is_commutative_and_associative(
            a in prop::collection::vec(any::<bool>(), 8),
            b in prop::collection::vec(any::<bool>(), 8),
            c in prop::collection::vec(any::<bool>(), 8),
        ) {
            let n = 4;
            let lift = |bits: &[bool]| {
                let mut t = TPoly::zero(n);
                for (i, &x) in bits.iter().enumerate() {
                    if x {
                        t = t.add(&TPoly { n, terms: [(i as u32) & 0xF].into_iter().collect() });
                    }
                }
                t
            };
            let (a, b, c) = (lift(&a), lift(&b), lift(&c));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}
