//! The graded GF(2) quotient ring of a characteristic pair: polynomial ring
//! on one generator per facet, modulo the Stanley-Reisner ideal of the
//! polytope and the linear forms cut out by the matrix rows.
//!
//! Two interchangeable kernels sit behind the same contract:
//!
//! * `FaceBasis`: monomials are rewritten to square-free monomials supported
//!   on faces. A squared generator `v_j^2` rewrites to `v_j * (sum of
//!   strictly lower-colored partners)`, which exists for every matrix built
//!   by the staircase, plain or block constructions. Face monomials are tiny
//!   in number, so the per-degree linear algebra stays small even at n = 7.
//! * `Reduced`: the n generators at a base vertex are eliminated through the
//!   linear forms and the quotient is computed degree by degree in the
//!   remaining m - n variables. This makes no assumption on the matrix and
//!   serves as the reference kernel for externally supplied pairs.
//!
//! Both kernels are audited against the h-vector: the dimension of every
//! graded piece must equal h_k and the total must equal the vertex count.
//! The audit failing is an internal error, never silently accepted.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::charpair::{ManifoldSpec, PairKind};
use crate::error::{Error, Result};
use crate::gf2::{solve_masked, BitRow, Echelon, Rref};
use crate::polytope::FacetSet;

/// Formal monomial in the facet generators: sorted (facet, exponent) pairs,
/// facets 0-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VMonomial {
    exps: Vec<(u16, u8)>,
}

impl VMonomial {
    pub fn one() -> Self {
        VMonomial { exps: Vec::new() }
    }

    pub fn var(facet: usize) -> Self {
        VMonomial {
            exps: vec![(facet as u16, 1)],
        }
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut exps = Vec::new();
        let mut m = mask;
        while m != 0 {
            let b = m.trailing_zeros() as u16;
            exps.push((b, 1));
            m &= m - 1;
        }
        VMonomial { exps }
    }

    pub fn mul(&self, other: &VMonomial) -> VMonomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut a, mut b) = (self.exps.iter().peekable(), other.exps.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(fa, ea)), Some(&&(fb, eb))) => {
                    if fa == fb {
                        exps.push((fa, ea + eb));
                        a.next();
                        b.next();
                    } else if fa < fb {
                        exps.push((fa, ea));
                        a.next();
                    } else {
                        exps.push((fb, eb));
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    exps.push(x);
                    a.next();
                }
                (None, Some(&&x)) => {
                    exps.push(x);
                    b.next();
                }
                (None, None) => break,
            }
        }
        VMonomial { exps }
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn support_mask(&self) -> u64 {
        self.exps.iter().fold(0u64, |m, &(f, _)| m | 1 << f)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&(_, e)| e == 1)
    }

    fn bump(&self, facet: u16, delta: i16) -> VMonomial {
        let mut exps = self.exps.clone();
        match exps.binary_search_by_key(&facet, |&(f, _)| f) {
            Ok(pos) => {
                let e = exps[pos].1 as i16 + delta;
                debug_assert!(e >= 0);
                if e == 0 {
                    exps.remove(pos);
                } else {
                    exps[pos].1 = e as u8;
                }
            }
            Err(pos) => {
                debug_assert!(delta > 0);
                exps.insert(pos, (facet, delta as u8));
            }
        }
        VMonomial { exps }
    }
}

/// Formal GF(2) polynomial in the facet generators.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VPoly {
    terms: BTreeSet<VMonomial>,
}

impl VPoly {
    pub fn zero() -> Self {
        VPoly::default()
    }

    pub fn one() -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(VMonomial::one());
        VPoly { terms }
    }

    pub fn var(facet: usize) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(VMonomial::var(facet));
        VPoly { terms }
    }

    pub fn from_monomials(monos: impl IntoIterator<Item = VMonomial>) -> Self {
        let mut p = VPoly::zero();
        for m in monos {
            p.toggle(m);
        }
        p
    }

    /// GF(2) addition of a single monomial.
    pub fn toggle(&mut self, m: VMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &VPoly) -> VPoly {
        let mut out = self.clone();
        for t in &other.terms {
            out.toggle(t.clone());
        }
        out
    }

    pub fn mul(&self, other: &VPoly) -> VPoly {
        let mut out = VPoly::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> VPoly {
        let mut out = VPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = &VMonomial> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree if homogeneous (zero counts as degree 0).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut iter = self.terms.iter();
        let Some(first) = iter.next() else {
            return Some(0);
        };
        let d = first.degree();
        iter.all(|t| t.degree() == d).then_some(d)
    }
}

/// Element of a [`FaceRing`], stored as coordinates over the canonical basis
/// of its degree.
#[derive(Clone, Debug)]
pub struct RingElement {
    ring_id: u64,
    degree: usize,
    coords: BitRow,
}

// Zero is the same element in every degree.
impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() && other.is_zero() {
            return self.ring_id == other.ring_id;
        }
        self.ring_id == other.ring_id
            && self.degree == other.degree
            && self.coords == other.coords
    }
}

impl Eq for RingElement {}

impl RingElement {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        if self.ring_id != other.ring_id {
            return Err(Error::RingMismatch);
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!(
                "adding degree {} to degree {}",
                self.degree, other.degree
            )));
        }
        let mut coords = self.coords.clone();
        coords.xor_assign(&other.coords);
        Ok(RingElement {
            ring_id: self.ring_id,
            degree: self.degree,
            coords,
        })
    }

    pub fn coords(&self) -> &BitRow {
        &self.coords
    }
}

static RING_COUNTER: AtomicU64 = AtomicU64::new(1);

enum Kernel {
    FaceBasis {
        /// Per facet: strictly lower-colored rewrite partners for squares.
        partners: Vec<Vec<u16>>,
    },
    Reduced(ReducedKernel),
}

type ExpVec = Vec<u8>;

struct ReducedKernel {
    /// Facets kept as variables, ascending.
    reduced_vars: Vec<u16>,
    /// Per facet: positions (into `reduced_vars`) whose sum replaces it, or
    /// None when the facet is itself a variable.
    subst: Vec<Option<Vec<usize>>>,
    var_pos: Vec<usize>,
    /// Per degree, monomials in descending graded-lex order.
    monomials: Vec<Vec<ExpVec>>,
    mono_index: Vec<HashMap<ExpVec, usize>>,
}

struct DegreeData {
    rref: Rref,
}

/// Which kernel [`FaceRing::build_with_kernel`] should use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KernelChoice {
    /// Face-basis for constructed pairs, reduced for external ones.
    Auto,
    FaceBasis,
    Reduced,
}

pub struct FaceRing {
    ring_id: u64,
    n: usize,
    m: usize,
    kind: PairKind,
    colors: Vec<u8>,
    face_set: HashSet<u64>,
    /// Per codimension, face masks in lexicographic order.
    faces: Vec<Vec<u64>>,
    face_index: Vec<HashMap<u64, usize>>,
    sr_nonfaces: Vec<FacetSet>,
    /// Staircase pairs: base facet for color i at index i-1.
    base_facets: Option<Vec<usize>>,
    kernel: Kernel,
    degrees: Vec<DegreeData>,
    betti: Vec<usize>,
    rewrite_memo: Mutex<HashMap<VMonomial, Vec<u64>>>,
}

impl FaceRing {
    pub fn build(spec: &ManifoldSpec) -> Result<FaceRing> {
        Self::build_with_kernel(spec, KernelChoice::Auto)
    }

    pub fn build_with_kernel(spec: &ManifoldSpec, choice: KernelChoice) -> Result<FaceRing> {
        let p = &spec.polytope;
        let n = p.dim();
        let m = p.num_facets();
        let colors = spec.coloring.colors().to_vec();
        let h = p.h_vector();
        let col_masks = spec.lambda.column_masks_mod2();
        let theta_masks: Vec<u64> = (0..n)
            .map(|i| {
                (0..m).fold(0u64, |acc, j| acc | ((col_masks[j] >> i & 1) << j))
            })
            .collect();

        let face_set = p.all_face_masks();
        let mut faces: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
        {
            let mut per_codim: Vec<BTreeSet<FacetSet>> = vec![BTreeSet::new(); n + 1];
            for &mask in &face_set {
                per_codim[mask.count_ones() as usize].insert(FacetSet(mask));
            }
            for (c, set) in per_codim.into_iter().enumerate() {
                faces[c] = set.into_iter().map(|s| s.0).collect();
            }
        }
        let face_index: Vec<HashMap<u64, usize>> = faces
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, &f)| (f, i)).collect())
            .collect();
        let sr_nonfaces = p.minimal_nonfaces();

        let base_facets = spec.lambda.base_vertex.map(|base| {
            let mut by_color = vec![usize::MAX; n];
            for f in base.iter() {
                by_color[colors[f] as usize - 1] = f;
            }
            by_color
        });

        let use_face_basis = match choice {
            KernelChoice::FaceBasis => true,
            KernelChoice::Reduced => false,
            KernelChoice::Auto => spec.kind != PairKind::External,
        };

        let kernel = if use_face_basis {
            Kernel::FaceBasis {
                partners: solve_partners(n, m, &colors, &col_masks)?,
            }
        } else {
            Kernel::Reduced(build_reduced_kernel(spec, &col_masks, &sr_nonfaces)?)
        };

        let mut ring = FaceRing {
            ring_id: RING_COUNTER.fetch_add(1, Ordering::Relaxed),
            n,
            m,
            kind: spec.kind,
            colors,
            face_set,
            faces,
            face_index,
            sr_nonfaces,
            base_facets,
            kernel,
            degrees: Vec::new(),
            betti: Vec::new(),
            rewrite_memo: Mutex::new(HashMap::new()),
        };
        ring.build_degrees(&theta_masks)?;

        // h-vector audit: graded dimensions must match and sum to the vertex
        // count.
        for (k, &expected) in h.iter().enumerate() {
            let got = ring.betti[k];
            if got != expected {
                return Err(Error::RingAudit {
                    degree: k,
                    got,
                    expected,
                });
            }
        }
        if ring.betti.iter().sum::<usize>() != p.num_vertices() {
            return Err(Error::Internal(
                "graded dimensions do not sum to the vertex count".into(),
            ));
        }
        Ok(ring)
    }

    fn build_degrees(&mut self, theta_masks: &[u64]) -> Result<()> {
        let mut memo: HashMap<VMonomial, Vec<u64>> = HashMap::new();
        for k in 0..=self.n {
            let rref = match &self.kernel {
                Kernel::FaceBasis { partners } => {
                    let width = self.faces[k].len();
                    let mut ech = Echelon::new(width);
                    if k >= 1 {
                        for &t_mask in &self.faces[k - 1] {
                            for theta in theta_masks.iter() {
                                let mut row = BitRow::zero(width);
                                let mut js = *theta;
                                while js != 0 {
                                    let j = js.trailing_zeros() as usize;
                                    js &= js - 1;
                                    if t_mask >> j & 1 == 0 {
                                        let prod = t_mask | 1 << j;
                                        if self.face_set.contains(&prod) {
                                            row.flip(self.face_index[k][&prod]);
                                        }
                                    } else {
                                        let mono =
                                            VMonomial::from_mask(t_mask).bump(j as u16, 1);
                                        for mask in rewrite_nf(
                                            &mono,
                                            partners,
                                            &self.face_set,
                                            &self.colors,
                                            &mut memo,
                                        ) {
                                            row.flip(self.face_index[k][&mask]);
                                        }
                                    }
                                }
                                ech.insert(row);
                            }
                        }
                    }
                    ech.into_rref()
                }
                Kernel::Reduced(rk) => {
                    let width = rk.monomials[k].len();
                    let mut ech = Echelon::new(width);
                    let gens: Vec<(usize, BTreeSet<ExpVec>)> = self
                        .sr_nonfaces
                        .iter()
                        .map(|nf| {
                            let poly = rk.substitute_monomial(&VMonomial::from_mask(nf.0));
                            (nf.len(), poly)
                        })
                        .collect();
                    for (deg_g, poly) in &gens {
                        if *deg_g > k || poly.is_empty() {
                            continue;
                        }
                        for mu in &rk.monomials[k - deg_g] {
                            let mut row = BitRow::zero(width);
                            for tau in poly {
                                let prod: ExpVec =
                                    mu.iter().zip(tau).map(|(a, b)| a + b).collect();
                                row.flip(rk.mono_index[k][&prod]);
                            }
                            ech.insert(row);
                        }
                    }
                    ech.into_rref()
                }
            };
            self.betti.push(rref.basis().len());
            self.degrees.push(DegreeData { rref });
        }
        *self.rewrite_memo.get_mut().unwrap() = memo;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_facets(&self) -> usize {
        self.m
    }

    pub fn pair_kind(&self) -> PairKind {
        self.kind
    }

    /// Graded dimensions for degrees 0..=n.
    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    pub fn sr_nonfaces(&self) -> &[FacetSet] {
        &self.sr_nonfaces
    }

    /// Face masks of the given codimension, canonical order.
    pub fn face_masks(&self, codim: usize) -> &[u64] {
        &self.faces[codim]
    }

    /// Base facets by color for staircase pairs.
    pub fn base_facets(&self) -> Option<&[usize]> {
        self.base_facets.as_deref()
    }

    /// The distinguished degree-one classes of a staircase pair: the class of
    /// the base facet with color i (1-based).
    pub fn u_vpoly(&self, i: usize) -> Result<VPoly> {
        let base = self
            .base_facets
            .as_ref()
            .ok_or_else(|| Error::Unsupported("ring has no base vertex classes".into()))?;
        if i == 0 || i > base.len() {
            return Err(Error::DimensionMismatch(format!(
                "u index {i} out of 1..={}",
                base.len()
            )));
        }
        Ok(VPoly::var(base[i - 1]))
    }

    /// t_i = u_1 + ... + u_i.
    pub fn t_vpoly(&self, i: usize) -> Result<VPoly> {
        let mut acc = VPoly::zero();
        for j in 1..=i {
            acc = acc.add(&self.u_vpoly(j)?);
        }
        Ok(acc)
    }

    pub fn zero_element(&self, degree: usize) -> RingElement {
        let width = if degree <= self.n { self.betti[degree] } else { 0 };
        RingElement {
            ring_id: self.ring_id,
            degree,
            coords: BitRow::zero(width),
        }
    }

    pub fn one(&self) -> RingElement {
        self.normal_form(&VPoly::one()).expect("1 is homogeneous")
    }

    /// Unique basis expansion of a homogeneous polynomial. Degrees above n
    /// reduce to zero; non-homogeneous input is rejected.
    pub fn normal_form(&self, poly: &VPoly) -> Result<RingElement> {
        let degree = poly.homogeneous_degree().ok_or(Error::NonHomogeneous)?;
        if degree > self.n {
            return Ok(self.zero_element(degree));
        }
        let full = self.reduce_to_row(poly, degree);
        Ok(RingElement {
            ring_id: self.ring_id,
            degree,
            coords: self.degrees[degree].rref.coords(&full),
        })
    }

    fn reduce_to_row(&self, poly: &VPoly, degree: usize) -> BitRow {
        match &self.kernel {
            Kernel::FaceBasis { partners } => {
                let mut row = BitRow::zero(self.faces[degree].len());
                let mut memo = self.rewrite_memo.lock().unwrap();
                for mono in poly.terms() {
                    for mask in
                        rewrite_nf(mono, partners, &self.face_set, &self.colors, &mut memo)
                    {
                        row.flip(self.face_index[degree][&mask]);
                    }
                }
                row
            }
            Kernel::Reduced(rk) => {
                let mut row = BitRow::zero(rk.monomials[degree].len());
                for mono in poly.terms() {
                    for term in rk.substitute_monomial(mono) {
                        row.flip(rk.mono_index[degree][&term]);
                    }
                }
                row
            }
        }
    }

    pub fn multiply(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        if a.ring_id != self.ring_id || b.ring_id != self.ring_id {
            return Err(Error::RingMismatch);
        }
        let degree = a.degree + b.degree;
        if degree > self.n || a.is_zero() || b.is_zero() {
            return Ok(self.zero_element(degree));
        }
        let mut formal = VPoly::zero();
        for ia in a.coords.ones() {
            let ma = self.basis_vmonomial(a.degree, ia);
            for ib in b.coords.ones() {
                formal.toggle(ma.mul(&self.basis_vmonomial(b.degree, ib)));
            }
        }
        self.normal_form(&formal)
    }

    pub fn power(&self, a: &RingElement, k: usize) -> Result<RingElement> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    fn basis_vmonomial(&self, degree: usize, basis_idx: usize) -> VMonomial {
        match &self.kernel {
            Kernel::FaceBasis { .. } => {
                let pos = self.degrees[degree].rref.basis()[basis_idx];
                VMonomial::from_mask(self.faces[degree][pos])
            }
            Kernel::Reduced(rk) => {
                let pos = self.degrees[degree].rref.basis()[basis_idx];
                let exps = &rk.monomials[degree][pos];
                let mut mono = VMonomial::one();
                for (p, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        mono = mono.mul(&VMonomial {
                            exps: vec![(rk.reduced_vars[p], e)],
                        })
                    }
                }
                mono
            }
        }
    }

    /// The unique nonzero class in the top degree.
    pub fn fundamental_class(&self) -> RingElement {
        debug_assert_eq!(self.betti[self.n], 1);
        let mut coords = BitRow::zero(1);
        coords.flip(0);
        RingElement {
            ring_id: self.ring_id,
            degree: self.n,
            coords,
        }
    }

    /// Renders an element as a sum of basis monomials (`v3*v7`, `v2^2*v5`).
    pub fn render(&self, elem: &RingElement) -> String {
        if elem.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = elem
            .coords
            .ones()
            .map(|i| {
                let mono = self.basis_vmonomial(elem.degree, i);
                if mono.exps.is_empty() {
                    "1".into()
                } else {
                    mono.exps
                        .iter()
                        .map(|&(f, e)| {
                            if e == 1 {
                                format!("v{}", f + 1)
                            } else {
                                format!("v{}^{}", f + 1, e)
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("*")
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Graded bases as exponent arrays over the full generator list, for
    /// cross-implementation diffs.
    pub fn bases_json(&self) -> serde_json::Value {
        let degrees: Vec<Vec<Vec<u8>>> = (0..=self.n)
            .map(|k| {
                (0..self.betti[k])
                    .map(|i| {
                        let mono = self.basis_vmonomial(k, i);
                        let mut exps = vec![0u8; self.m];
                        for &(f, e) in &mono.exps {
                            exps[f as usize] = e;
                        }
                        exps
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "graded_bases": degrees })
    }
}

/// For each facet j, finds the facets of strictly smaller color that appear
/// in some linear combination of the matrix rows having coefficient one at j
/// and zero at every facet of larger color. Such a combination exists for
/// all constructed pair kinds; its existence is exactly what makes the
/// square-rewriting terminate.
fn solve_partners(
    n: usize,
    m: usize,
    colors: &[u8],
    col_masks: &[u64],
) -> Result<Vec<Vec<u16>>> {
    let mut partners = Vec::with_capacity(m);
    for j in 0..m {
        let mut eqs: Vec<(u64, bool)> = vec![(col_masks[j], true)];
        for g in 0..m {
            if colors[g] > colors[j] {
                eqs.push((col_masks[g], false));
            }
        }
        let eps = solve_masked(&eqs, n).ok_or_else(|| {
            Error::Internal(format!(
                "no admissible rewrite combination for facet {}",
                j + 1
            ))
        })?;
        let mut list = Vec::new();
        for g in 0..m {
            if g == j {
                continue;
            }
            let coeff = (eps & col_masks[g]).count_ones() % 2 == 1;
            if coeff {
                debug_assert!(colors[g] <= colors[j]);
                // Same-color partners drop out: two distinct facets of one
                // color never share a vertex, so their product is zero.
                if colors[g] < colors[j] {
                    list.push(g as u16);
                }
            }
        }
        partners.push(list);
    }
    Ok(partners)
}

/// Rewrites a monomial to a GF(2) sum of square-free face monomials.
/// Support only ever grows, so anything supported outside the face set stays
/// zero; each rewrite step moves one exponent to a strictly smaller color,
/// which bounds the recursion.
fn rewrite_nf(
    mono: &VMonomial,
    partners: &[Vec<u16>],
    face_set: &HashSet<u64>,
    colors: &[u8],
    memo: &mut HashMap<VMonomial, Vec<u64>>,
) -> Vec<u64> {
    if let Some(hit) = memo.get(mono) {
        return hit.clone();
    }
    let result = (|| {
        let supp = mono.support_mask();
        if !face_set.contains(&supp) {
            return Vec::new();
        }
        if mono.is_squarefree() {
            return vec![supp];
        }
        let &(j, _) = mono
            .exps
            .iter()
            .filter(|&&(_, e)| e >= 2)
            .max_by_key(|&&(f, _)| (colors[f as usize], f))
            .unwrap();
        let mut acc: BTreeSet<u64> = BTreeSet::new();
        let lowered = mono.bump(j, -1);
        for &g in &partners[j as usize] {
            let term = lowered.bump(g, 1);
            for mask in rewrite_nf(&term, partners, face_set, colors, memo) {
                if !acc.remove(&mask) {
                    acc.insert(mask);
                }
            }
        }
        acc.into_iter().collect()
    })();
    memo.insert(mono.clone(), result.clone());
    result
}

fn build_reduced_kernel(
    spec: &ManifoldSpec,
    col_masks: &[u64],
    sr_nonfaces: &[FacetSet],
) -> Result<ReducedKernel> {
    let p = &spec.polytope;
    let n = p.dim();
    let m = p.num_facets();
    let base = spec
        .lambda
        .base_vertex
        .or_else(|| p.base_vertex())
        .ok_or_else(|| Error::InvalidPolytope("no vertices".into()))?;
    let base_facets: Vec<usize> = base.iter().collect();
    if base_facets.len() != n {
        return Err(Error::DimensionMismatch(
            "base vertex does not have n facets".into(),
        ));
    }
    // Invert the base vertex submatrix over GF(2). Validation guarantees it
    // is invertible.
    let mut rows: Vec<u64> = (0..n)
        .map(|i| {
            base_facets
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, &j)| acc | ((col_masks[j] >> i & 1) << k))
        })
        .collect();
    let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| rows[r] >> col & 1 == 1)
            .ok_or_else(|| Error::Internal("base vertex submatrix is singular".into()))?;
        rows.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..n {
            if r != col && rows[r] >> col & 1 == 1 {
                rows[r] ^= rows[col];
                inv[r] ^= inv[col];
            }
        }
    }
    let reduced_vars: Vec<u16> = (0..m as u16)
        .filter(|&f| !base.contains(f as usize))
        .collect();
    let r = reduced_vars.len();
    let mut var_pos = vec![usize::MAX; m];
    for (pos, &f) in reduced_vars.iter().enumerate() {
        var_pos[f as usize] = pos;
    }
    // Eliminated facet b_k = sum over reduced facets g of
    // (row k of inv * column g) v_g.
    let mut subst: Vec<Option<Vec<usize>>> = vec![None; m];
    for (k, &b) in base_facets.iter().enumerate() {
        let mut positions = Vec::new();
        for (pos, &g) in reduced_vars.iter().enumerate() {
            let col = col_masks[g as usize];
            // entry of Lambda_B^{-1} * Lambda_rest at (k, g)
            let mut bit = 0u64;
            for i in 0..n {
                bit ^= (inv[k] >> i & 1) & (col >> i & 1);
            }
            if bit == 1 {
                positions.push(pos);
            }
        }
        subst[b] = Some(positions);
    }

    // Degree enumeration with a size guard; this kernel is for desk-scale
    // external inputs.
    let mut monomials: Vec<Vec<ExpVec>> = Vec::with_capacity(n + 1);
    let mut mono_index: Vec<HashMap<ExpVec, usize>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let count = compositions_count(r, k);
        if count > 400_000 {
            return Err(Error::Unsupported(format!(
                "reduced kernel would need {count} monomials at degree {k}"
            )));
        }
        let mut list = Vec::with_capacity(count);
        enumerate_compositions(r, k, &mut |e| list.push(e.to_vec()));
        list.sort();
        list.reverse(); // descending graded-lex, largest first
        let index: HashMap<ExpVec, usize> =
            list.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        monomials.push(list);
        mono_index.push(index);
    }
    let _ = sr_nonfaces;
    Ok(ReducedKernel {
        reduced_vars,
        subst,
        var_pos,
        monomials,
        mono_index,
    })
}

impl ReducedKernel {
    /// Substitutes eliminated facets and expands to exponent vectors over
    /// the reduced variables.
    fn substitute_monomial(&self, mono: &VMonomial) -> BTreeSet<ExpVec> {
        let r = self.reduced_vars.len();
        let mut acc: BTreeSet<ExpVec> = BTreeSet::new();
        acc.insert(vec![0u8; r]);
        for &(f, e) in &mono.exps {
            for _ in 0..e {
                let mut next: BTreeSet<ExpVec> = BTreeSet::new();
                match &self.subst[f as usize] {
                    None => {
                        let pos = self.var_pos[f as usize];
                        for term in &acc {
                            let mut t = term.clone();
                            t[pos] += 1;
                            if !next.remove(&t) {
                                next.insert(t);
                            }
                        }
                    }
                    Some(positions) => {
                        for term in &acc {
                            for &pos in positions {
                                let mut t = term.clone();
                                t[pos] += 1;
                                if !next.remove(&t) {
                                    next.insert(t);
                                }
                            }
                        }
                    }
                }
                acc = next;
            }
        }
        acc
    }
}

fn compositions_count(r: usize, k: usize) -> usize {
    // C(r + k - 1, k), saturating.
    if r == 0 {
        return if k == 0 { 1 } else { 0 };
    }
    let mut num: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul((r + i) as u128) / (i as u128 + 1);
    }
    num.min(usize::MAX as u128) as usize
}

fn enumerate_compositions(r: usize, k: usize, visit: &mut impl FnMut(&[u8])) {
    fn rec(e: &mut Vec<u8>, pos: usize, left: usize, visit: &mut impl FnMut(&[u8])) {
        if pos + 1 == e.len() {
            e[pos] = left as u8;
            visit(e);
            return;
        }
        for x in 0..=left {
            e[pos] = x as u8;
            rec(e, pos + 1, left - x, visit);
        }
        e[pos] = 0;
    }
    if r == 0 {
        if k == 0 {
            visit(&[]);
        }
        return;
    }
    let mut e = vec![0u8; r];
    rec(&mut e, 0, k, visit);
}
