//! Bit-packed linear algebra over GF(2).
//!
//! Rows are stored as little-endian `u64` words; column j lives at word
//! `j / 64`, bit `j % 64`. Everything here is plain dense elimination, which
//! is ample for systems up to ~100k rows and ~4k columns.

/// Number of 64-bit words needed for `bits` bits.
#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub fn get_bit(row: &[u64], j: usize) -> bool {
    (row[j / 64] >> (j % 64)) & 1 == 1
}

#[inline]
pub fn set_bit(row: &mut [u64], j: usize, value: bool) {
    if value {
        row[j / 64] |= 1 << (j % 64);
    } else {
        row[j / 64] &= !(1 << (j % 64));
    }
}

#[inline]
pub fn flip_bit(row: &mut [u64], j: usize) {
    row[j / 64] ^= 1 << (j % 64);
}

#[inline]
pub fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
pub fn weight(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

/// Dense binary matrix with bit-packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words = words_for(cols);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        get_bit(self.row(i), j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        set_bit(self.row_mut(i), j, value);
    }

    pub fn push_row(&mut self, row: &[u64]) {
        debug_assert_eq!(row.len(), self.words);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * self.words);
            (
                &lo[src * self.words..(src + 1) * self.words],
                &mut hi[..self.words],
            )
        } else {
            let (lo, hi) = self.data.split_at_mut(src * self.words);
            let b = &mut lo[dst * self.words..(dst + 1) * self.words];
            (&hi[..self.words], b)
        };
        for (d, s) in b.iter_mut().zip(a) {
            *d ^= *s;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words {
            self.data.swap(a * self.words + w, b * self.words + w);
        }
    }

    /// Matrix-vector product `A x` with `x` bit-packed over `cols` bits.
    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; words_for(self.rows)];
        for i in 0..self.rows {
            let mut acc = 0u64;
            for (w, xw) in self.row(i).iter().zip(x) {
                acc ^= w & xw;
            }
            if acc.count_ones() & 1 == 1 {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    /// Rank over GF(2), computed on a working copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate().len()
    }

    /// In-place row echelon reduction. Returns the pivot columns; after the
    /// call, row i of the echelon part has its pivot in `pivots[i]`.
    pub fn eliminate(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, j)) else {
                continue;
            };
            self.swap_rows(r, pr);
            for i in 0..self.rows {
                if i != r && self.get(i, j) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(j);
            r += 1;
        }
        pivots
    }

    /// Solves `A x = b`. Returns a particular solution (bit-packed over
    /// `cols`) or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        // augment with b as an extra column
        let mut aug = BitMatrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.row_mut(i)[..self.words].copy_from_slice(self.row(i));
            if get_bit(b, i) {
                aug.set(i, self.cols, true);
            }
        }
        let pivots = aug.eliminate();
        if pivots.last() == Some(&self.cols) {
            return None; // a row reduced to (0...0 | 1)
        }
        let mut x = vec![0u64; words_for(self.cols)];
        for (i, &j) in pivots.iter().enumerate() {
            if aug.get(i, self.cols) {
                set_bit(&mut x, j, true);
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverted(&self) -> Option<BitMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // Gauss-Jordan on [self | I]
        let mut aug = BitMatrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                if self.get(i, j) {
                    aug.set(i, j, true);
                }
            }
            aug.set(i, n + i, true);
        }
        for (r, j) in (0..n).enumerate() {
            let pr = (r..n).find(|&i| aug.get(i, j))?;
            aug.swap_rows(r, pr);
            for i in 0..n {
                if i != r && aug.get(i, j) {
                    aug.xor_row_into(r, i);
                }
            }
        }
        let mut inv = BitMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Transposed copy.
    pub fn transposed(&self) -> BitMatrix {
        let mut t = BitMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            let row = self.row(i);
            for j in 0..self.cols {
                if get_bit(row, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_solve() {
        // x1+x2 = 1, x2+x3 = 0, x1+x3 = 1
        let mut a = BitMatrix::zero(3, 3);
        a.set(0, 0, true);
        a.set(0, 1, true);
        a.set(1, 1, true);
        a.set(1, 2, true);
        a.set(2, 0, true);
        a.set(2, 2, true);
        assert_eq!(a.rank(), 2);
        let b = vec![0b101u64];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        // inconsistent right-hand side: rows sum to 0 but rhs sums to 1
        let bad = vec![0b001u64];
        assert!(a.solve(&bad).is_none());
    }

    #[test]
    fn mul_vec_matches_bits() {
        let mut a = BitMatrix::zero(2, 70);
        a.set(0, 0, true);
        a.set(0, 69, true);
        a.set(1, 69, true);
        let mut x = vec![0u64; 2];
        set_bit(&mut x, 69, true);
        assert_eq!(a.mul_vec(&x), vec![0b11u64]);
    }

    #[test]
    fn inversion() {
        let mut a = BitMatrix::zero(3, 3);
        a.set(0, 0, true);
        a.set(0, 1, true);
        a.set(1, 1, true);
        a.set(2, 0, true);
        a.set(2, 2, true);
        let inv = a.inverted().unwrap();
        // a * inv = I, checked column by column
        for j in 0..3 {
            let mut col = vec![0u64];
            for i in 0..3 {
                if inv.get(i, j) {
                    set_bit(&mut col, i, true);
                }
            }
            let prod = a.mul_vec(&col);
            assert_eq!(prod, vec![1u64 << j]);
        }
        let singular = BitMatrix::zero(2, 2);
        assert!(singular.inverted().is_none());
    }

    #[test]
    fn transpose_round_trip() {
        let mut a = BitMatrix::zero(3, 5);
        a.set(0, 4, true);
        a.set(2, 1, true);
        assert_eq!(a.transposed().transposed(), a);
    }
}
