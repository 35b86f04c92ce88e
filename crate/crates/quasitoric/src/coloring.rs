//! Proper facet colorings: verification, deterministic search, and the
//! even-2-face feasibility criterion.
//!
//! A simple n-polytope admits a proper n-coloring of its facets exactly when
//! every 2-face has an even number of edges. The search below is plain
//! backtracking on the facet adjacency graph (facets are adjacent when they
//! share a vertex); both routes are always run and compared, and a
//! disagreement is an internal error rather than something to trust silently.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{Face, SimplePolytope};

/// A facet coloring with values in 1..=n (indexed by 0-based facet).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u8>,
}

impl Coloring {
    pub fn new(colors: Vec<u8>) -> Self {
        Coloring { colors }
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Color of a facet (0-based index), 1-based value.
    pub fn color(&self, facet: usize) -> u8 {
        self.colors[facet]
    }

    pub fn num_facets(&self) -> usize {
        self.colors.len()
    }

    /// Facets (0-based) in color class `color`.
    pub fn class(&self, color: u8) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&f| self.colors[f] == color)
            .collect()
    }

    /// Concatenation for a product polytope: the right factor's colors are
    /// offset by the left factor's dimension. Properness is preserved.
    pub fn product(&self, left_n: usize, right: &Coloring) -> Coloring {
        let mut colors = self.colors.clone();
        colors.extend(right.colors.iter().map(|&c| c + left_n as u8));
        Coloring { colors }
    }
}

#[derive(Clone, Debug)]
pub enum Properness {
    Proper,
    /// Two equally colored facets meeting in a vertex (0-based facets).
    Improper {
        facet_a: usize,
        facet_b: usize,
        vertex: crate::polytope::FacetSet,
    },
}

impl Properness {
    pub fn is_proper(&self) -> bool {
        matches!(self, Properness::Proper)
    }
}

/// Checks a candidate color map. Colors outside 1..=n are rejected as errors;
/// an improper coloring is a verdict, not an error.
pub fn is_proper(p: &SimplePolytope, c: &Coloring) -> Result<Properness> {
    if c.num_facets() != p.num_facets() {
        return Err(Error::DimensionMismatch(format!(
            "coloring has {} entries for {} facets",
            c.num_facets(),
            p.num_facets()
        )));
    }
    for f in 0..p.num_facets() {
        let color = c.color(f) as usize;
        if color == 0 || color > p.dim() {
            return Err(Error::ColorOutOfRange {
                facet: f + 1,
                color,
                max: p.dim(),
            });
        }
    }
    for &v in p.vertices() {
        let members: Vec<usize> = v.iter().collect();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if c.color(members[i]) == c.color(members[j]) {
                    return Ok(Properness::Improper {
                        facet_a: members[i],
                        facet_b: members[j],
                        vertex: v,
                    });
                }
            }
        }
    }
    Ok(Properness::Proper)
}

/// True iff every 2-face has an even number of edges.
pub fn parity_criterion(p: &SimplePolytope) -> bool {
    p.two_faces().iter().all(|f| f.vertex_count() % 2 == 0)
}

/// Some 2-face with an odd edge count, if one exists.
pub fn odd_two_face(p: &SimplePolytope) -> Option<Face> {
    p.two_faces().into_iter().find(|f| f.vertex_count() % 2 == 1)
}

/// Deterministic search for a proper n-coloring: facets in index order,
/// colors tried in ascending order. Returns `None` when no coloring exists.
/// The result is cross-checked against the parity criterion.
pub fn find_n_coloring(p: &SimplePolytope) -> Result<Option<Coloring>> {
    let found = backtrack(p);
    let feasible = parity_criterion(p);
    match (&found, feasible) {
        (Some(_), false) => {
            return Err(Error::Internal(
                "search found a coloring but a 2-face has odd edge count".into(),
            ))
        }
        (None, true) => {
            return Err(Error::Internal(
                "all 2-faces are even but the coloring search failed".into(),
            ))
        }
        _ => {}
    }
    if let Some(c) = &found {
        debug_assert!(is_proper(p, c)?.is_proper());
    }
    Ok(found)
}

fn backtrack(p: &SimplePolytope) -> Option<Coloring> {
    let m = p.num_facets();
    let n = p.dim();
    if m == 0 {
        return Some(Coloring::new(Vec::new()));
    }
    // adj[f] = facets sharing a vertex with f.
    let mut adj = vec![0u64; m];
    for &v in p.vertices() {
        for f in v.iter() {
            adj[f] |= v.0;
        }
    }
    for (f, a) in adj.iter_mut().enumerate() {
        *a &= !(1 << f);
    }
    let mut colors = vec![0u8; m];
    fn rec(f: usize, m: usize, n: usize, adj: &[u64], colors: &mut Vec<u8>) -> bool {
        if f == m {
            return true;
        }
        'colors: for c in 1..=n as u8 {
            for g in 0..f {
                if adj[f] >> g & 1 == 1 && colors[g] == c {
                    continue 'colors;
                }
            }
            colors[f] = c;
            if rec(f + 1, m, n, adj, colors) {
                return true;
            }
            colors[f] = 0;
        }
        false
    }
    if rec(0, m, n, &adj, &mut colors) {
        Some(Coloring::new(colors))
    } else {
        None
    }
}

#[derive(Serialize, Deserialize)]
pub struct ColoringJson {
    pub colors: Vec<u8>,
}

impl Coloring {
    pub fn from_json_str(s: &str) -> Result<Coloring> {
        let raw: ColoringJson = serde_json::from_str(s)?;
        Ok(Coloring::new(raw.colors))
    }

    pub fn to_json(&self) -> ColoringJson {
        ColoringJson {
            colors: self.colors.clone(),
        }
    }
}
