//! Bit-packed GF(2) linear algebra.
//!
//! Vectors are `u64`-word bitsets; elimination uses the lowest available
//! index as pivot so ranks, witnesses and enumeration orders are reproducible.

use crate::{Error, Result};

/// Dense bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the AND with `other` (the GF(2) inner product).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
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

    /// Packs the first 64 bits into a mask. Errors if the vector is longer.
    pub fn to_mask(&self) -> Result<u64> {
        if self.len > 64 {
            return Err(Error::CapExceeded {
                what: "bit vector length for mask packing",
                value: self.len,
                cap: 64,
            });
        }
        Ok(self.words.first().copied().unwrap_or(0))
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Row span in echelon form with combination tracking.
///
/// Each retained row remembers which source rows produced it, so membership
/// tests return witnesses expressed over the original generators.
pub struct Span {
    ncols: usize,
    nsources: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    combos: Vec<BitVec>,
}

impl Span {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            nsources: 0,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
        }
    }

    pub fn from_rows(ncols: usize, rows: &[BitVec]) -> Self {
        let mut span = Self::new(ncols);
        // Reserve combo width up front so every combo has the same length.
        span.nsources = rows.len();
        for (i, r) in rows.iter().enumerate() {
            span.insert_with_source(r.clone(), i, rows.len());
        }
        span
    }

    fn insert_with_source(&mut self, mut row: BitVec, source: usize, nsources: usize) {
        debug_assert_eq!(row.len(), self.ncols);
        let mut combo = BitVec::from_indices(nsources, &[source]);
        for (r, c) in self.rows.iter().zip(&self.combos) {
            let pivot = r.first_one().unwrap();
            if row.get(pivot) {
                row.xor_assign(r);
                combo.xor_assign(c);
            }
        }
        if let Some(p) = row.first_one() {
            // Keep rows sorted by pivot and fully reduced above pivots.
            for (r, c) in self.rows.iter_mut().zip(self.combos.iter_mut()) {
                if r.get(p) {
                    r.xor_assign(&row);
                    c.xor_assign(&combo);
                }
            }
            let at = self.pivots.partition_point(|&q| q < p);
            self.rows.insert(at, row);
            self.pivots.insert(at, p);
            self.combos.insert(at, combo);
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.rows
    }

    /// Reduces `v` by the span. Returns the residual and the source-row
    /// combination used; `v` is in the span iff the residual is zero.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut res = v.clone();
        let mut combo = BitVec::zeros(self.nsources);
        for (r, c) in self.rows.iter().zip(&self.combos) {
            let pivot = r.first_one().unwrap();
            if res.get(pivot) {
                res.xor_assign(r);
                combo.xor_assign(c);
            }
        }
        (res, combo)
    }

    /// Membership test with witness over the source rows.
    pub fn contains(&self, v: &BitVec) -> Option<BitVec> {
        let (res, combo) = self.reduce(v);
        res.is_zero().then_some(combo)
    }

    /// Walks all `2^rank` span members in Gray-code order starting from zero,
    /// invoking `f` on each. One basis row is flipped per step.
    pub fn for_each(&self, mut f: impl FnMut(&BitVec)) {
        let r = self.rank();
        assert!(r < usize::BITS as usize, "span rank too large to walk");
        let mut current = BitVec::zeros(self.ncols);
        let mut gray_prev = 0usize;
        f(&current);
        for k in 1..(1usize << r) {
            let gray = k ^ (k >> 1);
            let flipped = (gray ^ gray_prev).trailing_zeros() as usize;
            current.xor_assign(&self.rows[flipped]);
            gray_prev = gray;
            f(&current);
        }
    }

    /// Collects all span members (small ranks only).
    pub fn members(&self) -> Vec<BitVec> {
        let mut out = Vec::with_capacity(1 << self.rank());
        self.for_each(|v| out.push(v.clone()));
        out
    }
}

/// The linear system `rows * u = rhs` over GF(2), in reduced row echelon form.
pub struct LinearSystem {
    ncols: usize,
    rows: Vec<BitVec>,
    rhs: Vec<bool>,
    pivots: Vec<usize>,
    inconsistent: bool,
}

impl LinearSystem {
    pub fn new(ncols: usize, equations: &[(BitVec, bool)]) -> Self {
        let mut sys = Self {
            ncols,
            rows: Vec::new(),
            rhs: Vec::new(),
            pivots: Vec::new(),
            inconsistent: false,
        };
        for (row, b) in equations {
            sys.insert(row.clone(), *b);
        }
        sys
    }

    fn insert(&mut self, mut row: BitVec, mut b: bool) {
        for (i, r) in self.rows.iter().enumerate() {
            let pivot = self.pivots[i];
            if row.get(pivot) {
                row.xor_assign(r);
                b ^= self.rhs[i];
            }
        }
        if let Some(p) = row.first_one() {
            for (i, r) in self.rows.iter_mut().enumerate() {
                if r.get(p) {
                    r.xor_assign(&row);
                    self.rhs[i] ^= b;
                }
            }
            let at = self.pivots.partition_point(|&q| q < p);
            self.rows.insert(at, row);
            self.pivots.insert(at, p);
            self.rhs.insert(at, b);
        } else if b {
            self.inconsistent = true;
        }
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// One solution with all free variables set to zero, if any exists.
    pub fn particular_solution(&self) -> Option<BitVec> {
        if self.inconsistent {
            return None;
        }
        let mut u = BitVec::zeros(self.ncols);
        for (i, &p) in self.pivots.iter().enumerate() {
            // Rows are fully reduced, so pivot columns decouple.
            if self.rhs[i] {
                u.set(p, true);
            }
        }
        Some(u)
    }

    /// Basis of the homogeneous solution space, one vector per free column.
    pub fn nullspace_basis(&self) -> Vec<BitVec> {
        let pivot_set: std::collections::HashSet<usize> = self.pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for col in 0..self.ncols {
            if pivot_set.contains(&col) {
                continue;
            }
            let mut v = BitVec::zeros(self.ncols);
            v.set(col, true);
            for (i, &p) in self.pivots.iter().enumerate() {
                if self.rows[i].get(col) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }
}
