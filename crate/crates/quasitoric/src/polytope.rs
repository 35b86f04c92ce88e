//! Combinatorial simple polytopes given by vertex-facet incidence.
//!
//! A polytope is stored with no geometry at all: `n` is the dimension, `m`
//! the number of facets, and each vertex is the set of facets through it.
//! Everything downstream (faces, colorings, cohomology) is derived from this
//! incidence data. Facet indices are 1-based in every external format and
//! 0-based in [`FacetSet`] bit positions.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Subset of facets as a bitmask (facet `i` (1-based) lives at bit `i-1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct FacetSet(pub u64);

impl FacetSet {
    pub fn empty() -> Self {
        FacetSet(0)
    }

    pub fn from_indices_0based(indices: &[usize]) -> Self {
        let mut mask = 0u64;
        for &i in indices {
            debug_assert!(i < 64);
            mask |= 1 << i;
        }
        FacetSet(mask)
    }

    /// Parses 1-based facet indices. Indices must fit in the 64-bit mask.
    pub fn from_indices_1based(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            if i == 0 || i > 64 {
                return Err(Error::InvalidPolytope(format!(
                    "facet index {i} out of representable range 1..=64"
                )));
            }
            mask |= 1 << (i - 1);
        }
        Ok(FacetSet(mask))
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, facet_0based: usize) -> bool {
        self.0 >> facet_0based & 1 == 1
    }

    pub fn insert(&self, facet_0based: usize) -> Self {
        FacetSet(self.0 | 1 << facet_0based)
    }

    pub fn remove(&self, facet_0based: usize) -> Self {
        FacetSet(self.0 & !(1 << facet_0based))
    }

    pub fn union(&self, other: FacetSet) -> Self {
        FacetSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: FacetSet) -> Self {
        FacetSet(self.0 & other.0)
    }

    pub fn is_subset_of(&self, other: FacetSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// 0-based members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let b = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(b)
            }
        })
    }

    pub fn to_1based(&self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

// Lexicographic order on the ascending index sequence, not numeric order on
// the mask: {1,4} must sort before {2,3}.
impl Ord for FacetSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let mut a = self.0;
        let mut b = other.0;
        loop {
            match (a, b) {
                (0, 0) => return std::cmp::Ordering::Equal,
                (0, _) => return std::cmp::Ordering::Less,
                (_, 0) => return std::cmp::Ordering::Greater,
                _ => {
                    let ia = a.trailing_zeros();
                    let ib = b.trailing_zeros();
                    if ia != ib {
                        return ia.cmp(&ib);
                    }
                    a &= a - 1;
                    b &= b - 1;
                }
            }
        }
    }
}

impl PartialOrd for FacetSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FacetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// Simple polytope as pure vertex-facet incidence.
#[derive(Clone, Debug)]
pub struct SimplePolytope {
    n: usize,
    m: usize,
    vertices: Vec<FacetSet>,
    facet_labels: Option<Vec<String>>,
}

/// A face, identified by the facets containing it.
#[derive(Clone, Debug)]
pub struct Face {
    pub facet_set: FacetSet,
    pub dim: usize,
    /// Indices into the polytope's vertex list.
    pub vertex_list: Vec<usize>,
}

impl Face {
    /// For a 2-face this is its number of edges (the face is a polygon).
    pub fn vertex_count(&self) -> usize {
        self.vertex_list.len()
    }
}

/// One broken invariant found by [`SimplePolytope::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Simplicity { vertex: FacetSet, size: usize },
    IndexOutOfRange { vertex: FacetSet },
    DuplicateVertex { vertex: FacetSet },
    UnusedFacet { facet: usize },
    NoVertices,
    TooFewFacets { m: usize, n: usize },
    NotEdgeConnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Simplicity { vertex, size } => {
                write!(f, "simplicity: vertex {vertex} has {size} facets")
            }
            Violation::IndexOutOfRange { vertex } => {
                write!(f, "facet index out of range in vertex {vertex}")
            }
            Violation::DuplicateVertex { vertex } => write!(f, "duplicate vertex {vertex}"),
            Violation::UnusedFacet { facet } => {
                write!(f, "facet {facet} appears in no vertex")
            }
            Violation::NoVertices => write!(f, "no vertices"),
            Violation::TooFewFacets { m, n } => {
                write!(f, "m = {m} facets but dimension {n} needs at least {}", n + 1)
            }
            Violation::NotEdgeConnected => write!(f, "vertex graph is not edge-connected"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl SimplePolytope {
    /// Builds a polytope from raw incidence data. Only representability is
    /// enforced here (`m <= 64`); combinatorial invariants are checked by
    /// [`validate`](Self::validate) so that malformed inputs can be reported
    /// as data rather than rejected outright.
    pub fn new(
        n: usize,
        m: usize,
        vertices: Vec<FacetSet>,
        facet_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if m > 64 {
            return Err(Error::Unsupported(format!(
                "this build supports at most 64 facets, got {m}"
            )));
        }
        if let Some(labels) = &facet_labels {
            if labels.len() != m {
                return Err(Error::InvalidPolytope(format!(
                    "{} facet labels for {m} facets",
                    labels.len()
                )));
            }
        }
        let mut vertices = vertices;
        vertices.sort();
        Ok(SimplePolytope {
            n,
            m,
            vertices,
            facet_labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_facets(&self) -> usize {
        self.m
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Vertices in lexicographic order of their facet sets.
    pub fn vertices(&self) -> &[FacetSet] {
        &self.vertices
    }

    pub fn facet_labels(&self) -> Option<&[String]> {
        self.facet_labels.as_deref()
    }

    /// The lexicographically smallest vertex.
    pub fn base_vertex(&self) -> Option<FacetSet> {
        self.vertices.first().copied()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.vertices.is_empty() {
            violations.push(Violation::NoVertices);
        }
        if self.n > 0 && self.m < self.n + 1 {
            violations.push(Violation::TooFewFacets { m: self.m, n: self.n });
        }
        let mut well_formed = true;
        for &v in &self.vertices {
            if v.iter().any(|i| i >= self.m) {
                violations.push(Violation::IndexOutOfRange { vertex: v });
                well_formed = false;
            }
            if v.len() != self.n {
                violations.push(Violation::Simplicity { vertex: v, size: v.len() });
                well_formed = false;
            }
        }
        for w in self.vertices.windows(2) {
            if w[0] == w[1] {
                violations.push(Violation::DuplicateVertex { vertex: w[0] });
                well_formed = false;
            }
        }
        if well_formed {
            let mut used = FacetSet::empty();
            for &v in &self.vertices {
                used = used.union(v);
            }
            for facet in 0..self.m {
                if !used.contains(facet) {
                    violations.push(Violation::UnusedFacet { facet: facet + 1 });
                }
            }
            if !self.vertices.is_empty() && !self.is_edge_connected() {
                violations.push(Violation::NotEdgeConnected);
            }
        }
        ValidationReport { violations }
    }

    // Two vertices are adjacent iff their facet sets differ in exactly one
    // index, i.e. share n-1 facets.
    fn is_edge_connected(&self) -> bool {
        let count = self.vertices.len();
        if count <= 1 {
            return true;
        }
        let mut seen = vec![false; count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            for j in 0..count {
                if !seen[j]
                    && (self.vertices[i].0 & self.vertices[j].0).count_ones() as usize
                        == self.n.saturating_sub(1)
                {
                    seen[j] = true;
                    reached += 1;
                    queue.push_back(j);
                }
            }
        }
        reached == count
    }

    /// All faces of codimension `c`: the `c`-subsets of facets with a common
    /// vertex. `c = 0` gives the whole polytope, `c = n` the vertices.
    pub fn faces_of_codim(&self, c: usize) -> Vec<Face> {
        let mut masks: BTreeSet<FacetSet> = BTreeSet::new();
        for &v in &self.vertices {
            let members: Vec<usize> = v.iter().collect();
            subsets_of_size(&members, c, &mut |subset| {
                masks.insert(FacetSet::from_indices_0based(subset));
            });
        }
        masks
            .into_iter()
            .map(|mask| Face {
                facet_set: mask,
                dim: self.n - c,
                vertex_list: self
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| mask.is_subset_of(**v))
                    .map(|(i, _)| i)
                    .collect(),
            })
            .collect()
    }

    /// The 2-dimensional faces; each is a polygon whose edge count equals its
    /// vertex count.
    pub fn two_faces(&self) -> Vec<Face> {
        if self.n < 2 {
            return Vec::new();
        }
        self.faces_of_codim(self.n - 2)
    }

    /// Set of all face masks, every codimension. Used as the fast
    /// "is this monomial support a face" test.
    pub fn all_face_masks(&self) -> HashSet<u64> {
        let mut set = HashSet::new();
        for c in 0..=self.n {
            for &v in &self.vertices {
                let members: Vec<usize> = v.iter().collect();
                subsets_of_size(&members, c, &mut |subset| {
                    set.insert(FacetSet::from_indices_0based(subset).0);
                });
            }
        }
        set
    }

    /// Inclusion-minimal facet sets with empty intersection (the generators
    /// of the Stanley-Reisner ideal).
    pub fn minimal_nonfaces(&self) -> Vec<FacetSet> {
        let faces = self.all_face_masks();
        let mut out: BTreeSet<FacetSet> = BTreeSet::new();
        // Grow each face by one facet; the result is a minimal non-face iff
        // it is not a face but all its codimension-one subsets are.
        let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); self.n + 1];
        for &mask in &faces {
            by_size[mask.count_ones() as usize].push(mask);
        }
        for s in 1..=self.n.min(self.m) {
            for &face in &by_size[s] {
                for g in 0..self.m {
                    if face >> g & 1 == 1 {
                        continue;
                    }
                    let cand = face | 1 << g;
                    if faces.contains(&cand) {
                        continue;
                    }
                    let minimal = (0..64)
                        .filter(|&x| cand >> x & 1 == 1)
                        .all(|x| faces.contains(&(cand & !(1 << x))));
                    if minimal {
                        out.insert(FacetSet(cand));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Number of k-dimensional faces for k = 0..n-1.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.n)
            .map(|k| self.faces_of_codim(self.n - k).len())
            .collect()
    }

    /// h-vector via the standard transform of the face counts.
    pub fn h_vector(&self) -> Vec<usize> {
        let f = self.f_vector();
        // sum_{j=0..n} f_j (t-1)^j with f_n = 1; h_k is the t^k coefficient.
        let mut coeffs = vec![0i128; self.n + 1];
        for j in 0..=self.n {
            let fj = if j == self.n { 1 } else { f[j] as i128 };
            // (t-1)^j expanded via binomials.
            let mut binom: i128 = 1;
            for i in 0..=j {
                // coefficient of t^i in (t-1)^j is C(j,i) * (-1)^(j-i)
                let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
                coeffs[i] += fj * binom * sign;
                binom = binom * (j as i128 - i as i128) / (i as i128 + 1);
            }
        }
        coeffs
            .into_iter()
            .map(|c| {
                debug_assert!(c >= 0, "negative h-vector entry");
                c as usize
            })
            .collect()
    }

    /// Cartesian product; the right factor's facets are shifted past the
    /// left factor's.
    pub fn product(&self, other: &SimplePolytope) -> Result<SimplePolytope> {
        let m = self.m + other.m;
        if m > 64 {
            return Err(Error::Unsupported(format!(
                "product would have {m} facets, at most 64 supported"
            )));
        }
        let mut vertices = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for &a in &self.vertices {
            for &b in &other.vertices {
                vertices.push(FacetSet(a.0 | b.0 << self.m));
            }
        }
        let labels = match (&self.facet_labels, &other.facet_labels) {
            (Some(l), Some(r)) => {
                let mut all = l.clone();
                all.extend(r.iter().cloned());
                Some(all)
            }
            _ => None,
        };
        SimplePolytope::new(self.n + other.n, m, vertices, labels)
    }

    /// The 0-dimensional polytope (one vertex, no facets). Only used as the
    /// unit for products.
    pub fn point() -> SimplePolytope {
        SimplePolytope {
            n: 0,
            m: 0,
            vertices: vec![FacetSet::empty()],
            facet_labels: Some(Vec::new()),
        }
    }

    /// k-cube: facets 2i-1 and 2i are the opposite pair in direction i.
    pub fn cube(k: usize) -> Result<SimplePolytope> {
        if k == 0 {
            return Err(Error::Parse("cube parameter must be at least 1".into()));
        }
        if 2 * k > 64 {
            return Err(Error::Unsupported(format!("cube:{k} needs {} facets", 2 * k)));
        }
        let mut vertices = Vec::with_capacity(1 << k);
        for choice in 0u64..(1 << k) {
            let mut mask = 0u64;
            for i in 0..k {
                mask |= 1 << (2 * i + (choice >> i & 1) as usize);
            }
            vertices.push(FacetSet(mask));
        }
        let labels = (0..k)
            .flat_map(|i| [format!("x{}-", i + 1), format!("x{}+", i + 1)])
            .collect();
        SimplePolytope::new(k, 2 * k, vertices, Some(labels))
    }

    /// k-simplex: m = k+1 facets, vertices are all k-subsets.
    pub fn simplex(k: usize) -> Result<SimplePolytope> {
        if k == 0 {
            return Err(Error::Parse("simplex parameter must be at least 1".into()));
        }
        if k + 1 > 64 {
            return Err(Error::Unsupported(format!("simplex:{k} needs {} facets", k + 1)));
        }
        let full = (1u64 << (k + 1)) - 1;
        let vertices = (0..=k).map(|drop| FacetSet(full & !(1 << drop))).collect();
        let labels = (0..=k).map(|i| format!("F{}", i + 1)).collect();
        SimplePolytope::new(k, k + 1, vertices, Some(labels))
    }

    /// k-permutahedron: facets are the proper nonempty subsets of {1..k+1}
    /// ordered by (size, lexicographic), vertices are permutations, and a
    /// vertex lies on a facet iff the subset is one of its prefix sets.
    pub fn permutahedron(k: usize) -> Result<SimplePolytope> {
        if k == 0 {
            return Err(Error::Parse("perm parameter must be at least 1".into()));
        }
        let ground = k + 1;
        let m = (1usize << ground) - 2;
        if m > 64 {
            return Err(Error::Unsupported(format!("perm:{k} needs {m} facets")));
        }
        let mut subsets: Vec<Vec<usize>> = (1u32..(1 << ground) - 1)
            .map(|mask| (0..ground).filter(|&i| mask >> i & 1 == 1).collect())
            .collect();
        subsets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let mut index_of = std::collections::HashMap::new();
        for (i, s) in subsets.iter().enumerate() {
            index_of.insert(s.clone(), i);
        }
        let mut vertices = Vec::new();
        let mut perm: Vec<usize> = (0..ground).collect();
        permutations(&mut perm, 0, &mut |p| {
            let mut mask = 0u64;
            let mut prefix: Vec<usize> = Vec::with_capacity(ground - 1);
            for &x in &p[..ground - 1] {
                prefix.push(x);
                let mut key = prefix.clone();
                key.sort_unstable();
                mask |= 1 << index_of[&key];
            }
            vertices.push(FacetSet(mask));
        });
        let labels = subsets
            .iter()
            .map(|s| {
                let inner: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        SimplePolytope::new(k, m, vertices, Some(labels))
    }

    /// j-gon: facets are the edges in cyclic order, vertices join
    /// consecutive edges.
    pub fn polygon(j: usize) -> Result<SimplePolytope> {
        if j < 3 {
            return Err(Error::Parse("polygon parameter must be at least 3".into()));
        }
        if j > 64 {
            return Err(Error::Unsupported(format!("polygon:{j} needs {j} facets")));
        }
        let vertices = (0..j)
            .map(|i| FacetSet::from_indices_0based(&[i, (i + 1) % j]))
            .collect();
        let labels = (0..j).map(|i| format!("E{}", i + 1)).collect();
        SimplePolytope::new(2, j, vertices, Some(labels))
    }
}

fn subsets_of_size(members: &[usize], size: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(
        members: &[usize],
        size: usize,
        start: usize,
        current: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if current.len() == size {
            visit(current);
            return;
        }
        let needed = size - current.len();
        for i in start..=members.len().saturating_sub(needed) {
            current.push(members[i]);
            rec(members, size, i + 1, current, visit);
            current.pop();
        }
    }
    if size > members.len() {
        return;
    }
    rec(members, size, 0, &mut Vec::new(), visit);
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Generator expression: `cube:4`, `simplex:3`, `perm:3`, `polygon:6`, and
/// products joined with `x`, e.g. `cube:2 x perm:3`.
pub fn parse_expression(expr: &str) -> Result<SimplePolytope> {
    let tokens: Vec<&str> = expr.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(Error::Parse("empty polytope expression".into()));
    }
    let mut factors = Vec::new();
    let mut expect_factor = true;
    for t in tokens {
        if expect_factor {
            factors.push(parse_generator(t)?);
        } else if t != "x" {
            return Err(Error::Parse(format!("expected `x` between factors, got `{t}`")));
        }
        expect_factor = !expect_factor;
    }
    if expect_factor {
        return Err(Error::Parse("trailing `x` in polytope expression".into()));
    }
    let mut iter = factors.into_iter();
    let mut acc = iter.next().unwrap();
    for f in iter {
        acc = acc.product(&f)?;
    }
    Ok(acc)
}

/// Whether the string looks like a generator expression rather than a path.
pub fn looks_like_expression(s: &str) -> bool {
    s.split_whitespace().all(|t| t == "x" || t.contains(':')) && s.contains(':')
}

fn parse_generator(token: &str) -> Result<SimplePolytope> {
    let (name, arg) = token
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("generator `{token}` must be name:k")))?;
    let k: usize = arg
        .parse()
        .map_err(|_| Error::Parse(format!("bad generator parameter `{arg}`")))?;
    match name {
        "cube" => SimplePolytope::cube(k),
        "simplex" => SimplePolytope::simplex(k),
        "perm" | "permutahedron" => SimplePolytope::permutahedron(k),
        "polygon" => SimplePolytope::polygon(k),
        other => Err(Error::Parse(format!("unknown generator `{other}`"))),
    }
}

/// JSON wire format for polytopes.
#[derive(Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub num_facets: usize,
    pub vertices: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facet_labels: Option<Vec<String>>,
}

impl SimplePolytope {
    pub fn from_json_str(s: &str) -> Result<SimplePolytope> {
        let raw: PolytopeJson = serde_json::from_str(s)?;
        let vertices = raw
            .vertices
            .iter()
            .map(|v| FacetSet::from_indices_1based(v))
            .collect::<Result<Vec<_>>>()?;
        SimplePolytope::new(raw.dim, raw.num_facets, vertices, raw.facet_labels)
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dim: self.n,
            num_facets: self.m,
            vertices: self.vertices.iter().map(|v| v.to_1based()).collect(),
            facet_labels: self.facet_labels.clone(),
        }
    }
}
