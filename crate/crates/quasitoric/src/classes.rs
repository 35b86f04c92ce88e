//! Stiefel-Whitney classes in the face ring, the dual classes obtained by
//! inverting the total class, and the immersion / embedding / totally-skew
//! lower bounds read off the top nonvanishing dual class.
//!
//! Everything runs in combinatorial grading; the coefficient selector d only
//! enters when bounds are scaled to the real dimension d * n.

use serde::{Deserialize, Serialize};

use crate::charpair::{ManifoldSpec, PairKind};
use crate::error::{Error, Result};
use crate::face_ring::{FaceRing, RingElement, VMonomial, VPoly};

/// Total and dual Stiefel-Whitney classes of one spec, graded pieces indexed
/// by combinatorial degree 0..=n.
#[derive(Clone, Debug)]
pub struct SWClasses {
    pub n: usize,
    pub d: u8,
    pub kind: PairKind,
    pub w: Vec<RingElement>,
    pub wbar: Vec<RingElement>,
    /// Largest combinatorial degree with nonzero dual class, 0 when every
    /// positive-degree dual vanishes.
    pub rank_dual: usize,
}

/// Graded parts of the product of (1 + v_j) over all facets. The degree-k
/// part is the sum of all square-free monomials of degree k; monomials whose
/// support is not a face already vanish, so the sum runs over faces.
pub fn total_sw(ring: &FaceRing) -> Result<Vec<RingElement>> {
    let n = ring.dim();
    let mut w = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let poly = VPoly::from_monomials(
            ring.face_masks(k).iter().map(|&mask| VMonomial::from_mask(mask)),
        );
        w.push(ring.normal_form(&poly)?);
    }
    Ok(w)
}

/// Inverts the total class: wbar_0 = 1 and
/// wbar_k = sum_{j=1..k} w_j wbar_{k-j} over GF(2).
pub fn dual_sw(ring: &FaceRing, w: &[RingElement]) -> Result<Vec<RingElement>> {
    let n = ring.dim();
    let mut wbar: Vec<RingElement> = Vec::with_capacity(n + 1);
    wbar.push(ring.one());
    for k in 1..=n {
        let mut acc = ring.zero_element(k);
        for j in 1..=k {
            acc = acc.add(&ring.multiply(&w[j], &wbar[k - j])?)?;
        }
        wbar.push(acc);
    }
    Ok(wbar)
}

pub fn rank_of_dual(wbar: &[RingElement]) -> usize {
    (1..wbar.len()).rev().find(|&k| !wbar[k].is_zero()).unwrap_or(0)
}

/// Computes both class families and the dual rank for a built ring.
pub fn compute_classes(ring: &FaceRing, spec: &ManifoldSpec) -> Result<SWClasses> {
    let w = total_sw(ring)?;
    let wbar = dual_sw(ring, &w)?;
    let rank_dual = rank_of_dual(&wbar);
    Ok(SWClasses {
        n: ring.dim(),
        d: spec.d,
        kind: spec.kind,
        w,
        wbar,
        rank_dual,
    })
}

/// Convolution identity sum_{i+j=k} w_i wbar_j = 0 for k = 1..n.
pub fn convolution_vanishes(ring: &FaceRing, sw: &SWClasses) -> Result<bool> {
    for k in 1..=sw.n {
        let mut acc = ring.zero_element(k);
        for i in 0..=k {
            acc = acc.add(&ring.multiply(&sw.w[i], &sw.wbar[k - i])?)?;
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The product wbar_1 * wbar_{n-1} (real degrees 2 and 2n-2 when d = 2).
pub fn dual_product_vanishes(ring: &FaceRing, sw: &SWClasses) -> Result<bool> {
    if sw.n < 2 {
        return Ok(true);
    }
    Ok(ring.multiply(&sw.wbar[1], &sw.wbar[sw.n - 1])?.is_zero())
}

/// Lower and upper bounds on immersion, embedding and totally skew embedding
/// dimensions, all in the real grading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub d: u8,
    pub n: usize,
    pub real_dim: usize,
    pub k_real: usize,
    pub imm_lower: usize,
    pub em_lower: usize,
    pub skew_lower: usize,
    pub whitney_imm_upper: usize,
    pub whitney_em_upper: usize,
    pub cohen_imm_upper: usize,
    pub alpha: u32,
}

impl BoundsReport {
    pub fn from_rank(n: usize, rank_dual: usize, d: u8) -> BoundsReport {
        let real_dim = d as usize * n;
        let k_real = d as usize * rank_dual;
        let report = BoundsReport {
            d,
            n,
            real_dim,
            k_real,
            imm_lower: real_dim + k_real,
            em_lower: real_dim + k_real + 1,
            skew_lower: 2 * real_dim + 2 * k_real + 1,
            whitney_imm_upper: (2 * real_dim).saturating_sub(1),
            whitney_em_upper: 2 * real_dim,
            cohen_imm_upper: 2 * real_dim - (real_dim as u32).count_ones() as usize,
            alpha: (real_dim as u32).count_ones(),
        };
        debug_assert!(real_dim == 0 || report.imm_lower <= report.whitney_imm_upper);
        report
    }
}

/// Bounds for one class family at its own d.
pub fn bounds(sw: &SWClasses) -> BoundsReport {
    BoundsReport::from_rank(sw.n, sw.rank_dual, sw.d)
}

/// Classes of a product manifold, living in the tensor product of the factor
/// rings. A term records (left degree, left basis index, right basis index);
/// the right degree is the complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub degree: usize,
    pub terms: std::collections::BTreeSet<(usize, usize, usize)>,
}

impl TensorElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct ProductSW {
    pub n: usize,
    pub d: u8,
    pub w: Vec<TensorElement>,
    pub wbar: Vec<TensorElement>,
    pub rank_dual: usize,
}

/// Classes of the product of two specs from the factor classes: total and
/// dual classes multiply across the tensor decomposition, so every graded
/// piece is a convolution and the dual ranks add.
pub fn product_sw(left: &SWClasses, right: &SWClasses) -> Result<ProductSW> {
    if left.d != right.d {
        return Err(Error::DimensionMismatch(
            "product factors have different d".into(),
        ));
    }
    let n = left.n + right.n;
    let tensor = |la: &[RingElement], ra: &[RingElement]| -> Vec<TensorElement> {
        (0..=n)
            .map(|k| {
                let mut terms = std::collections::BTreeSet::new();
                for dl in 0..=k.min(left.n) {
                    let dr = k - dl;
                    if dr > right.n {
                        continue;
                    }
                    for il in la[dl].coords().ones() {
                        for ir in ra[dr].coords().ones() {
                            terms.insert((dl, il, ir));
                        }
                    }
                }
                TensorElement { degree: k, terms }
            })
            .collect()
    };
    let w = tensor(&left.w, &right.w);
    let wbar = tensor(&left.wbar, &right.wbar);
    let rank_dual = (1..=n).rev().find(|&k| !wbar[k].is_zero()).unwrap_or(0);
    Ok(ProductSW {
        n,
        d: left.d,
        w,
        wbar,
        rank_dual,
    })
}
