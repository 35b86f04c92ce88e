//! Characteristic matrices over a colored simple polytope.
//!
//! A characteristic matrix assigns a column vector to every facet such that
//! the n columns meeting at any vertex form a unimodular matrix (determinant
//! 1 over GF(2) for d = 1, determinant +-1 over the integers for d = 2).
//! Two constructions are provided: the staircase assignment anchored at a
//! base vertex, and the plain one-basis-vector-per-color assignment.

use serde::{Deserialize, Serialize};

use crate::coloring::{is_proper, Coloring};
use crate::error::{Error, Result};
use crate::polytope::{FacetSet, SimplePolytope};

/// How the characteristic matrix was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairKind {
    /// Staircase columns at the base vertex, basis vectors elsewhere.
    /// Selected on the command line as `paper`.
    Staircase,
    /// Every facet of color i gets the basis vector e_i. Selected as `plain`.
    Plain,
    /// Block-diagonal combination of two factor matrices.
    Block,
    /// Supplied from the outside and only validated.
    External,
}

impl PairKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairKind::Staircase => "paper",
            PairKind::Plain => "plain",
            PairKind::Block => "block",
            PairKind::External => "external",
        }
    }
}

/// n x m integer matrix, one column per facet.
#[derive(Clone, Debug)]
pub struct CharMatrix {
    pub d: u8,
    pub n: usize,
    pub m: usize,
    /// Column vectors, each of length n.
    pub columns: Vec<Vec<i64>>,
    /// Distinguished vertex of the staircase construction.
    pub base_vertex: Option<FacetSet>,
}

impl CharMatrix {
    /// Entry in row i, column (facet) j, both 0-based.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.columns[j][i]
    }

    /// Column masks mod 2: bit i of `mask[j]` is the parity of entry (i, j).
    pub fn column_masks_mod2(&self) -> Vec<u64> {
        self.columns
            .iter()
            .map(|col| {
                col.iter()
                    .enumerate()
                    .fold(0u64, |m, (i, &x)| m | (((x & 1) as u64) << i))
            })
            .collect()
    }
}

/// Staircase construction: pick the lexicographically smallest vertex V and
/// let H_i be its facet of color i. H_i gets the column with i-1 zeros
/// followed by ones; any other facet of color i gets e_i.
pub fn staircase_matrix(p: &SimplePolytope, c: &Coloring, d: u8) -> Result<CharMatrix> {
    check_d(d)?;
    require_proper(p, c)?;
    let n = p.dim();
    let base = p
        .base_vertex()
        .ok_or_else(|| Error::InvalidPolytope("polytope has no vertices".into()))?;
    // Facet of the base vertex carrying each color.
    let mut base_facet_of_color = vec![usize::MAX; n + 1];
    for f in base.iter() {
        base_facet_of_color[c.color(f) as usize] = f;
    }
    let columns = (0..p.num_facets())
        .map(|f| {
            let i = c.color(f) as usize;
            if base_facet_of_color[i] == f {
                (0..n).map(|row| if row + 1 >= i { 1 } else { 0 }).collect()
            } else {
                (0..n).map(|row| if row + 1 == i { 1 } else { 0 }).collect()
            }
        })
        .collect();
    Ok(CharMatrix {
        d,
        n,
        m: p.num_facets(),
        columns,
        base_vertex: Some(base),
    })
}

/// Plain construction: facet of color i gets the basis vector e_i.
pub fn plain_matrix(p: &SimplePolytope, c: &Coloring, d: u8) -> Result<CharMatrix> {
    check_d(d)?;
    require_proper(p, c)?;
    let n = p.dim();
    let columns = (0..p.num_facets())
        .map(|f| {
            let i = c.color(f) as usize;
            (0..n).map(|row| if row + 1 == i { 1 } else { 0 }).collect()
        })
        .collect();
    Ok(CharMatrix {
        d,
        n,
        m: p.num_facets(),
        columns,
        base_vertex: None,
    })
}

/// Block-diagonal matrix of two factors, matching the product polytope's
/// facet order (left facets first, then right facets shifted).
pub fn block_matrix(left: &CharMatrix, right: &CharMatrix) -> Result<CharMatrix> {
    if left.d != right.d {
        return Err(Error::DimensionMismatch(format!(
            "block factors have d = {} and d = {}",
            left.d, right.d
        )));
    }
    let n = left.n + right.n;
    let mut columns = Vec::with_capacity(left.m + right.m);
    for col in &left.columns {
        let mut c = col.clone();
        c.resize(n, 0);
        columns.push(c);
    }
    for col in &right.columns {
        let mut c = vec![0; left.n];
        c.extend_from_slice(col);
        columns.push(c);
    }
    Ok(CharMatrix {
        d: left.d,
        n,
        m: left.m + right.m,
        columns,
        base_vertex: None,
    })
}

fn check_d(d: u8) -> Result<()> {
    if d == 1 || d == 2 {
        Ok(())
    } else {
        Err(Error::Parse(format!("d must be 1 or 2, got {d}")))
    }
}

fn require_proper(p: &SimplePolytope, c: &Coloring) -> Result<()> {
    match is_proper(p, c)? {
        crate::coloring::Properness::Proper => Ok(()),
        crate::coloring::Properness::Improper {
            facet_a,
            facet_b,
            vertex,
        } => Err(Error::ImproperColoring {
            facet_a: facet_a + 1,
            facet_b: facet_b + 1,
            vertex: vertex.to_string(),
            color: c.color(facet_a) as usize,
        }),
    }
}

/// Per-vertex determinant data from validation.
#[derive(Clone, Debug)]
pub struct VertexDet {
    pub vertex: FacetSet,
    /// Integer determinant for d = 2, GF(2) determinant (0 or 1) for d = 1.
    pub det: i128,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct PairVerdict {
    pub vertex_dets: Vec<VertexDet>,
    pub column_issues: Vec<String>,
}

impl PairVerdict {
    pub fn is_ok(&self) -> bool {
        self.column_issues.is_empty() && self.vertex_dets.iter().all(|v| v.ok)
    }

    pub fn failures(&self) -> Vec<&VertexDet> {
        self.vertex_dets.iter().filter(|v| !v.ok).collect()
    }
}

/// Checks the unimodularity contract at every vertex, plus column
/// primitivity. Dimension mismatches are errors; bad determinants are data.
pub fn validate_char_pair(p: &SimplePolytope, lambda: &CharMatrix) -> Result<PairVerdict> {
    if lambda.n != p.dim() || lambda.m != p.num_facets() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but polytope needs {}x{}",
            lambda.n,
            lambda.m,
            p.dim(),
            p.num_facets()
        )));
    }
    for col in &lambda.columns {
        if col.len() != lambda.n {
            return Err(Error::DimensionMismatch(format!(
                "column of length {} in an {}-row matrix",
                col.len(),
                lambda.n
            )));
        }
    }
    let mut column_issues = Vec::new();
    for (j, col) in lambda.columns.iter().enumerate() {
        if lambda.d == 1 {
            if col.iter().all(|&x| x & 1 == 0) {
                column_issues.push(format!("column {} is zero over GF(2)", j + 1));
            }
        } else {
            let g = col.iter().fold(0i64, |g, &x| gcd(g, x.abs()));
            if g != 1 {
                column_issues.push(format!(
                    "column {} is not primitive (gcd of entries is {g})",
                    j + 1
                ));
            }
        }
    }
    let mut vertex_dets = Vec::with_capacity(p.num_vertices());
    for &v in p.vertices() {
        let facets: Vec<usize> = v.iter().collect();
        let det = if lambda.d == 1 {
            det_gf2(lambda, &facets) as i128
        } else {
            det_bareiss(lambda, &facets)?
        };
        let ok = if lambda.d == 1 { det == 1 } else { det.abs() == 1 };
        vertex_dets.push(VertexDet { vertex: v, det, ok });
    }
    Ok(PairVerdict {
        vertex_dets,
        column_issues,
    })
}

/// Determinant of the vertex submatrix with columns reordered by color.
/// For the staircase construction this is +1 at every vertex, a stronger
/// statement than unimodularity.
pub fn vertex_det_color_ordered(
    p: &SimplePolytope,
    c: &Coloring,
    lambda: &CharMatrix,
    vertex: FacetSet,
) -> Result<i128> {
    let mut facets: Vec<usize> = vertex.iter().collect();
    facets.sort_by_key(|&f| c.color(f));
    if facets.len() != p.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vertex {vertex} has {} facets in a {}-polytope",
            facets.len(),
            p.dim()
        )));
    }
    det_bareiss(lambda, &facets)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// GF(2) determinant of the submatrix on the given facet columns.
fn det_gf2(lambda: &CharMatrix, facets: &[usize]) -> u8 {
    let n = facets.len();
    let mut rows: Vec<u64> = (0..lambda.n)
        .map(|i| {
            facets
                .iter()
                .enumerate()
                .fold(0u64, |m, (k, &j)| m | (((lambda.entry(i, j) & 1) as u64) << k))
        })
        .collect();
    if lambda.n != n {
        return 0;
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| rows[r] >> col & 1 == 1);
        let Some(pivot) = pivot else { return 0 };
        rows.swap(col, pivot);
        for r in 0..n {
            if r != col && rows[r] >> col & 1 == 1 {
                rows[r] ^= rows[col];
            }
        }
    }
    1
}

// Fraction-free Gaussian elimination on i128 with overflow checks. Exactness
// is what makes a +-1 test meaningful.
fn det_bareiss(lambda: &CharMatrix, facets: &[usize]) -> Result<i128> {
    let n = facets.len();
    if lambda.n != n {
        return Ok(0);
    }
    let mut a: Vec<Vec<i128>> = (0..n)
        .map(|i| facets.iter().map(|&j| lambda.entry(i, j) as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Ok(0);
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = a[i][j].checked_mul(a[k][k]).ok_or(Error::DetOverflow)?;
                let t2 = a[i][k].checked_mul(a[k][j]).ok_or(Error::DetOverflow)?;
                a[i][j] = t1.checked_sub(t2).ok_or(Error::DetOverflow)? / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// A polytope with a coloring, a validated characteristic matrix and the
/// coefficient selector d. This is the full input to the cohomology engine;
/// the encoded manifold has real dimension d * n.
#[derive(Clone, Debug)]
pub struct ManifoldSpec {
    pub polytope: SimplePolytope,
    pub coloring: Coloring,
    pub lambda: CharMatrix,
    pub d: u8,
    pub kind: PairKind,
}

impl ManifoldSpec {
    pub fn staircase(p: SimplePolytope, c: Coloring, d: u8) -> Result<ManifoldSpec> {
        let lambda = staircase_matrix(&p, &c, d)?;
        Self::finish(p, c, lambda, d, PairKind::Staircase)
    }

    pub fn plain(p: SimplePolytope, c: Coloring, d: u8) -> Result<ManifoldSpec> {
        let lambda = plain_matrix(&p, &c, d)?;
        Self::finish(p, c, lambda, d, PairKind::Plain)
    }

    pub fn external(p: SimplePolytope, c: Coloring, lambda: CharMatrix, d: u8) -> Result<ManifoldSpec> {
        let mut lambda = lambda;
        lambda.d = d;
        Self::finish(p, c, lambda, d, PairKind::External)
    }

    /// Product spec with the block-diagonal matrix; this is the manifold
    /// product of the two factors.
    pub fn block_product(left: &ManifoldSpec, right: &ManifoldSpec) -> Result<ManifoldSpec> {
        if left.d != right.d {
            return Err(Error::DimensionMismatch("factors have different d".into()));
        }
        let p = left.polytope.product(&right.polytope)?;
        let c = left.coloring.product(left.polytope.dim(), &right.coloring);
        let lambda = block_matrix(&left.lambda, &right.lambda)?;
        Self::finish(p, c, lambda, left.d, PairKind::Block)
    }

    /// The one-point spec, the unit for products.
    pub fn point(d: u8) -> ManifoldSpec {
        ManifoldSpec {
            polytope: SimplePolytope::point(),
            coloring: Coloring::new(Vec::new()),
            lambda: CharMatrix {
                d,
                n: 0,
                m: 0,
                columns: Vec::new(),
                base_vertex: None,
            },
            d,
            kind: PairKind::Staircase,
        }
    }

    /// Same data reinterpreted with the other coefficient selector. The
    /// GF(2) cohomology is shared; only the bound scaling changes.
    pub fn with_d(&self, d: u8) -> ManifoldSpec {
        let mut spec = self.clone();
        spec.d = d;
        spec.lambda.d = d;
        spec
    }

    fn finish(
        p: SimplePolytope,
        c: Coloring,
        lambda: CharMatrix,
        d: u8,
        kind: PairKind,
    ) -> Result<ManifoldSpec> {
        check_d(d)?;
        let verdict = validate_char_pair(&p, &lambda)?;
        if !verdict.is_ok() {
            let mut msgs = verdict.column_issues.clone();
            for f in verdict.failures() {
                msgs.push(format!("vertex {} has determinant {}", f.vertex, f.det));
            }
            return Err(Error::InvalidCharPair(msgs.join("; ")));
        }
        Ok(ManifoldSpec {
            polytope: p,
            coloring: c,
            lambda,
            d,
            kind,
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct CharMatrixJson {
    pub d: u8,
    pub columns: Vec<Vec<i64>>,
    pub base_vertex: Option<Vec<usize>>,
}

impl CharMatrix {
    pub fn from_json_str(s: &str, n: usize, m: usize) -> Result<CharMatrix> {
        let raw: CharMatrixJson = serde_json::from_str(s)?;
        if raw.columns.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns for {m} facets",
                raw.columns.len()
            )));
        }
        let base_vertex = match raw.base_vertex {
            Some(v) => Some(FacetSet::from_indices_1based(&v)?),
            None => None,
        };
        Ok(CharMatrix {
            d: raw.d,
            n,
            m,
            columns: raw.columns,
            base_vertex,
        })
    }

    pub fn to_json(&self) -> CharMatrixJson {
        CharMatrixJson {
            d: self.d,
            columns: self.columns.clone(),
            base_vertex: self.base_vertex.map(|v| v.to_1based()),
        }
    }
}
