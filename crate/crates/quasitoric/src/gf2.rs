//! Dense GF(2) linear algebra on bit-packed rows.
//!
//! Rows are `Vec<u64>` with bit `i` of word `i / 64` holding column `i`.
//! [`Echelon`] keeps an incrementally built row-echelon basis keyed by
//! leading column; [`Rref`] is the fully back-substituted form used for
//! normal-form reduction against a fixed pivot set.

use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitRow {
    width: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zero(width: usize) -> Self {
        BitRow {
            width,
            words: vec![0; width.div_ceil(64)],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.width);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.width);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn leading(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + b)
                }
            })
        })
    }
}

/// Incremental row echelon basis over GF(2).
pub struct Echelon {
    width: usize,
    rows: BTreeMap<usize, BitRow>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: BTreeMap::new(),
        }
    }

    /// Reduces `row` against the current basis in place.
    pub fn reduce(&self, row: &mut BitRow) {
        while let Some(lead) = row.leading() {
            match self.rows.get(&lead) {
                Some(basis_row) => row.xor_assign(basis_row),
                None => break,
            }
        }
    }

    /// Inserts `row` if it is independent of the basis. Returns true when the
    /// rank grew.
    pub fn insert(&mut self, mut row: BitRow) -> bool {
        debug_assert_eq!(row.width(), self.width);
        self.reduce(&mut row);
        match row.leading() {
            Some(lead) => {
                self.rows.insert(lead, row);
                true
            }
            None => false,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains(&self, mut row: BitRow) -> bool {
        self.reduce(&mut row);
        row.is_zero()
    }

    /// Back-substitutes into reduced row echelon form.
    pub fn into_rref(self) -> Rref {
        let width = self.width;
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let mut rows: Vec<BitRow> = self.rows.into_values().collect();
        // Clear every pivot column above its own row.
        for i in (0..rows.len()).rev() {
            for j in 0..i {
                if rows[j].get(pivots[i]) {
                    let (head, tail) = rows.split_at_mut(i);
                    head[j].xor_assign(&tail[0]);
                }
            }
        }
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let basis: Vec<usize> = (0..width).filter(|i| !pivot_set.contains(i)).collect();
        let mut pivot_rank = vec![usize::MAX; width];
        for (k, &p) in pivots.iter().enumerate() {
            pivot_rank[p] = k;
        }
        Rref {
            width,
            pivots,
            rows,
            basis,
            pivot_rank,
        }
    }
}

/// Reduced row echelon form with pivot/basis bookkeeping.
pub struct Rref {
    width: usize,
    pivots: Vec<usize>,
    rows: Vec<BitRow>,
    basis: Vec<usize>,
    pivot_rank: Vec<usize>,
}

impl Rref {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` modulo the pivot rows; the result is supported on basis
    /// columns only. Rows are fully reduced, so one pass suffices.
    pub fn reduce_in_place(&self, row: &mut BitRow) {
        debug_assert_eq!(row.width(), self.width);
        for (k, &p) in self.pivots.iter().enumerate() {
            if row.get(p) {
                row.xor_assign(&self.rows[k]);
            }
        }
    }

    /// Coordinates of a (reduced or unreduced) row in the basis columns.
    pub fn coords(&self, row: &BitRow) -> BitRow {
        let mut r = row.clone();
        self.reduce_in_place(&mut r);
        let mut out = BitRow::zero(self.basis.len());
        for (k, &b) in self.basis.iter().enumerate() {
            if r.get(b) {
                out.flip(k);
            }
        }
        out
    }

    /// Expands basis coordinates back to a full-width row.
    pub fn expand(&self, coords: &BitRow) -> BitRow {
        debug_assert_eq!(coords.width(), self.basis.len());
        let mut out = BitRow::zero(self.width);
        for (k, &b) in self.basis.iter().enumerate() {
            if coords.get(k) {
                out.flip(b);
            }
        }
        out
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_rank[col] != usize::MAX
    }
}

/// Solves a small linear system over GF(2). Each equation is a mask over the
/// unknown bits together with its right hand side. Returns any solution.
pub fn solve_masked(eqs: &[(u64, bool)], unknowns: usize) -> Option<u64> {
    debug_assert!(unknowns <= 64);
    // Augmented rows: unknown mask plus rhs in bit `unknowns`.
    let mut rows: Vec<u64> = Vec::new();
    for &(lhs, rhs) in eqs {
        let mut row = lhs | ((rhs as u64) << unknowns);
        for &r in &rows {
            let lead = r.trailing_zeros();
            if lead < unknowns as u32 && row >> lead & 1 == 1 {
                row ^= r;
            }
        }
        if row >> unknowns & 1 == 1 && row & ((1 << unknowns) - 1) == 0 {
            return None; // 0 = 1
        }
        if row & ((1 << unknowns) - 1) != 0 {
            rows.push(row);
            rows.sort_by_key(|r| r.trailing_zeros());
        }
    }
    // Back-substitute, free unknowns set to 0.
    let mut solution: u64 = 0;
    for &r in rows.iter().rev() {
        let lead = r.trailing_zeros() as u64;
        let mut val = r >> unknowns & 1;
        let mut rest = r & ((1 << unknowns) - 1) & !(1 << lead);
        while rest != 0 {
            let b = rest.trailing_zeros() as u64;
            val ^= solution >> b & 1;
            rest &= rest - 1;
        }
        solution |= val << lead;
    }
    Some(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_rank(rows: &[Vec<bool>]) -> usize {
        let mut mat: Vec<Vec<bool>> = rows.to_vec();
        let width = mat.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..width {
            if let Some(p) = (rank..mat.len()).find(|&r| mat[r][col]) {
                mat.swap(rank, p);
                for r in 0..mat.len() {
                    if r != rank && mat[r][col] {
                        for c in 0..width {
                            mat[r][c] ^= mat[rank][c];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn echelon_membership() {
        let mut ech = Echelon::new(4);
        let mut r1 = BitRow::zero(4);
        r1.flip(0);
        r1.flip(1);
        let mut r2 = BitRow::zero(4);
        r2.flip(1);
        r2.flip(2);
        assert!(ech.insert(r1.clone()));
        assert!(ech.insert(r2.clone()));
        let mut sum = r1.clone();
        sum.xor_assign(&r2);
        assert!(ech.contains(sum));
        let mut r3 = BitRow::zero(4);
        r3.flip(3);
        assert!(!ech.contains(r3));
    }

    #[test]
    fn rref_coords_roundtrip() {
        let mut ech = Echelon::new(5);
        for bits in [[0usize, 2], [1, 2]] {
            let mut r = BitRow::zero(5);
            for &b in &bits {
                r.flip(b);
            }
            ech.insert(r);
        }
        let rref = ech.into_rref();
        assert_eq!(rref.rank(), 2);
        assert_eq!(rref.basis().len(), 3);
        // Reduce an arbitrary row and expand its coordinates; the difference
        // must lie in the relation span.
        let mut probe = BitRow::zero(5);
        probe.flip(0);
        probe.flip(1);
        let coords = rref.coords(&probe);
        let back = rref.expand(&coords);
        let mut diff = probe.clone();
        diff.xor_assign(&back);
        let mut check = Echelon::new(5);
        for bits in [[0usize, 2], [1, 2]] {
            let mut r = BitRow::zero(5);
            for &b in &bits {
                r.flip(b);
            }
            check.insert(r);
        }
        assert!(check.contains(diff));
    }

    #[test]
    fn solve_simple_system() {
        // x0 + x1 = 1, x1 = 1  ->  x0 = 0, x1 = 1
        let sol = solve_masked(&[(0b11, true), (0b10, true)], 2).unwrap();
        assert_eq!(sol & 1, 0);
        assert_eq!(sol >> 1 & 1, 1);
        // Inconsistent: x0 = 0 and x0 = 1.
        assert!(solve_masked(&[(0b1, true), (0b1, false)], 1).is_none());
    }

    proptest! {
        #[test]
        fn echelon_rank_matches_naive(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 12), 0..20)) {
            let mut ech = Echelon::new(12);
            for r in &rows {
                let mut br = BitRow::zero(12);
                for (i, &b) in r.iter().enumerate() {
                    if b { br.flip(i); }
                }
                ech.insert(br);
            }
            prop_assert_eq!(ech.rank(), naive_rank(&rows));
        }

        #[test]
        fn solve_masked_satisfies_equations(eqs in prop::collection::vec((0u64..64, any::<bool>()), 0..8)) {
            // Build solvable-or-not systems over 6 unknowns and verify any
            // returned solution actually satisfies every equation.
            if let Some(sol) = solve_masked(&eqs, 6) {
                for &(lhs, rhs) in &eqs {
                    prop_assert_eq!(((sol & lhs).count_ones() % 2 == 1), rhs);
                }
            }
        }
    }
}
