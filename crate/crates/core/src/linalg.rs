//! Exact rank computation. No floating point anywhere.
//!
//! GF(2) ranks use bit-packed Gaussian elimination. Rational ranks use
//! sparse integer elimination: rows are rescaled by their gcd after every
//! update, which keeps entries small and is rank-preserving; entries
//! escalate to big integers only if they outgrow `i128`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Dense matrix over GF(2), rows packed into 64-bit words.
#[derive(Clone)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = r * self.words + c / 64;
        let bit = 1u64 << (c % 64);
        if v {
            self.data[w] |= bit;
        } else {
            self.data[w] &= !bit;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        let w = r * self.words + c / 64;
        self.data[w] ^= 1u64 << (c % 64);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    /// self * rhs over GF(2).
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = BitMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    let (dst, src) = (r * out.words, c * rhs.words);
                    for w in 0..out.words {
                        out.data[dst + w] ^= rhs.data[src + w];
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Rank by in-place elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (rank..m.rows).find(|&r| m.data[r * m.words + w] & bit != 0) else {
                continue;
            };
            if pivot != rank {
                for k in 0..m.words {
                    m.data.swap(pivot * m.words + k, rank * m.words + k);
                }
            }
            for r in 0..m.rows {
                if r != rank && m.data[r * m.words + w] & bit != 0 {
                    let (pr, rr) = (rank * m.words, r * m.words);
                    for k in w..m.words {
                        m.data[rr + k] ^= m.data[pr + k];
                    }
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Dense naive rank over GF(2) on byte entries; an independent oracle
    /// for the packed elimination.
    pub fn rank_naive(&self) -> usize {
        let mut m: Vec<Vec<u8>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) as u8).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| m[r][col] == 1) else { continue };
            m.swap(p, rank);
            for r in 0..self.rows {
                if r != rank && m[r][col] == 1 {
                    for c in col..self.cols {
                        m[r][c] ^= m[rank][c];
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            for c in 0..self.cols.min(64) {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Sparse GF(2) matrix stored column-major: each column holds its sorted
/// non-zero row indices. Suited to very sparse differentials.
#[derive(Clone, Debug, Default)]
pub struct SparseBitMatrix {
    rows: usize,
    cols: usize,
    col_rows: Vec<Vec<u32>>,
}

impl SparseBitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseBitMatrix { rows, cols, col_rows: vec![Vec::new(); cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        let col = &mut self.col_rows[c];
        match col.binary_search(&(r as u32)) {
            Ok(i) => {
                col.remove(i);
            }
            Err(i) => col.insert(i, r as u32),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.col_rows[c].binary_search(&(r as u32)).is_ok()
    }

    pub fn is_zero(&self) -> bool {
        self.col_rows.iter().all(|c| c.is_empty())
    }

    pub fn entry_count(&self) -> usize {
        self.col_rows.iter().map(|c| c.len()).sum()
    }

    /// self * rhs: column j of the product is the xor of self's columns
    /// selected by rhs's column j.
    pub fn mul(&self, rhs: &SparseBitMatrix) -> SparseBitMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = SparseBitMatrix::zero(self.rows, rhs.cols);
        for (j, picks) in rhs.col_rows.iter().enumerate() {
            let mut acc: Vec<u32> = Vec::new();
            for &i in picks {
                acc = xor_merge(&acc, &self.col_rows[i as usize]);
            }
            out.col_rows[j] = acc;
        }
        out
    }

    /// Rank by structured elimination over the column vectors, pivoting on
    /// the smallest leading row and shortest column first.
    pub fn rank(&self) -> usize {
        let mut groups: std::collections::BTreeMap<u32, Vec<Vec<u32>>> = std::collections::BTreeMap::new();
        for col in &self.col_rows {
            if !col.is_empty() {
                groups.entry(col[0]).or_default().push(col.clone());
            }
        }
        let mut rank = 0;
        while let Some((&lead, _)) = groups.iter().next() {
            let mut group = groups.remove(&lead).unwrap();
            let pivot_idx = (0..group.len()).min_by_key(|&i| group[i].len()).unwrap();
            let pivot = group.swap_remove(pivot_idx);
            rank += 1;
            for col in group {
                let reduced = xor_merge(&col, &pivot);
                if !reduced.is_empty() {
                    groups.entry(reduced[0]).or_default().push(reduced);
                }
            }
        }
        rank
    }

    /// Dense-elimination oracle for tests.
    pub fn rank_naive(&self) -> usize {
        let mut m = BitMatrix::zero(self.rows, self.cols);
        for (c, col) in self.col_rows.iter().enumerate() {
            for &r in col {
                m.set(r as usize, c, true);
            }
        }
        m.rank()
    }
}

fn xor_merge(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sparse integer matrix stored by rows; exact rank over the rationals.
#[derive(Clone, Debug, Default)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(u32, i64)>>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols, entries: vec![Vec::new(); rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        debug_assert!(r < self.rows && c < self.cols);
        if v == 0 {
            return;
        }
        let row = &mut self.entries[r];
        match row.binary_search_by_key(&(c as u32), |&(col, _)| col) {
            Ok(i) => {
                row[i].1 += v;
                if row[i].1 == 0 {
                    row.remove(i);
                }
            }
            Err(i) => row.insert(i, (c as u32, v)),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r]
            .binary_search_by_key(&(c as u32), |&(col, _)| col)
            .map(|i| self.entries[r][i].1)
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.is_empty())
    }

    /// self * rhs, exact.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = SparseIntMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            let mut acc: std::collections::BTreeMap<u32, i64> = std::collections::BTreeMap::new();
            for &(k, v) in &self.entries[r] {
                for &(c, w) in &rhs.entries[k as usize] {
                    let slot = acc.entry(c).or_insert(0);
                    *slot = slot.checked_add(v.checked_mul(w).expect("product fits i64"))
                        .expect("sum fits i64");
                }
            }
            out.entries[r] = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        }
        out
    }

    /// Exact rank over Q via fraction-free row elimination with gcd
    /// rescaling, grouping rows by leading column.
    pub fn rank(&self) -> usize {
        let mut groups: std::collections::BTreeMap<u32, Vec<Vec<(u32, BigInt)>>> =
            std::collections::BTreeMap::new();
        for r in &self.entries {
            if !r.is_empty() {
                let row: Vec<(u32, BigInt)> = r.iter().map(|&(c, v)| (c, BigInt::from(v))).collect();
                groups.entry(row[0].0).or_default().push(row);
            }
        }
        let mut rank = 0;
        while let Some((&lead, _)) = groups.iter().next() {
            let mut group = groups.remove(&lead).unwrap();
            let pivot_idx = (0..group.len()).min_by_key(|&i| group[i].len()).unwrap();
            let pivot = group.swap_remove(pivot_idx);
            let pval = pivot[0].1.clone();
            rank += 1;
            for row in group {
                let rval = row[0].1.clone();
                // row := pval * row - rval * pivot
                let merged = merge_scaled(&row, &pval, &pivot, &(-&rval));
                if !merged.is_empty() {
                    let reduced = normalize(merged);
                    groups.entry(reduced[0].0).or_default().push(reduced);
                }
            }
        }
        rank
    }

    /// Dense naive rank over exact big rationals; an independent oracle.
    pub fn rank_naive(&self) -> usize {
        use num_bigint::BigInt;
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| BigInt::from(self.get(r, c))).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(p, rank);
            let pv = m[rank][col].clone();
            for r in 0..self.rows {
                if r != rank && !m[r][col].is_zero() {
                    let rv = m[r][col].clone();
                    for c in 0..self.cols {
                        let t = &m[r][c] * &pv - &m[rank][c] * &rv;
                        m[r][c] = t;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

fn merge_scaled(
    a: &[(u32, BigInt)],
    ka: &BigInt,
    b: &[(u32, BigInt)],
    kb: &BigInt,
) -> Vec<(u32, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        if ca < cb {
            out.push((ca, &a[i].1 * ka));
            i += 1;
        } else if cb < ca {
            out.push((cb, &b[j].1 * kb));
            j += 1;
        } else {
            let v = &a[i].1 * ka + &b[j].1 * kb;
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize(mut row: Vec<(u32, BigInt)>) -> Vec<(u32, BigInt)> {
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g == BigInt::from(1) {
            return row;
        }
    }
    if !g.is_zero() && g.abs() != BigInt::from(1) {
        for (_, v) in &mut row {
            *v = &*v / &g;
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bit_rank_small() {
        let mut m = BitMatrix::zero(3, 3);
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 1, true);
        m.set(1, 2, true);
        m.set(2, 0, true);
        m.set(2, 2, true); // row2 = row0 + row1
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_naive(), 2);
    }

    #[test]
    fn bit_rank_matches_naive_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let rows = rng.gen_range(1..40);
            let cols = rng.gen_range(1..90);
            let mut m = BitMatrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.3) {
                        m.set(r, c, true);
                    }
                }
            }
            assert_eq!(m.rank(), m.rank_naive());
        }
    }

    #[test]
    fn sparse_bit_rank_matches_naive_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let rows = rng.gen_range(1..60);
            let cols = rng.gen_range(1..60);
            let mut m = SparseBitMatrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.25) {
                        m.flip(r, c);
                    }
                }
            }
            assert_eq!(m.rank(), m.rank_naive());
        }
    }

    #[test]
    fn sparse_bit_mul_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let (a_rows, inner, b_cols) = (rng.gen_range(1..20), rng.gen_range(1..20), rng.gen_range(1..20));
            let mut a = SparseBitMatrix::zero(a_rows, inner);
            let mut b = SparseBitMatrix::zero(inner, b_cols);
            let mut da = BitMatrix::zero(a_rows, inner);
            let mut db = BitMatrix::zero(inner, b_cols);
            for r in 0..a_rows {
                for c in 0..inner {
                    if rng.gen_bool(0.3) {
                        a.flip(r, c);
                        da.set(r, c, true);
                    }
                }
            }
            for r in 0..inner {
                for c in 0..b_cols {
                    if rng.gen_bool(0.3) {
                        b.flip(r, c);
                        db.set(r, c, true);
                    }
                }
            }
            let prod = a.mul(&b);
            let dense = da.mul(&db);
            for r in 0..a_rows {
                for c in 0..b_cols {
                    assert_eq!(prod.get(r, c), dense.get(r, c));
                }
            }
        }
    }

    #[test]
    fn sparse_rank_matches_naive_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let rows = rng.gen_range(1..25);
            let cols = rng.gen_range(1..25);
            let mut m = SparseIntMatrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.35) {
                        m.add(r, c, rng.gen_range(-3i64..=3));
                    }
                }
            }
            assert_eq!(m.rank(), m.rank_naive());
        }
    }

    #[test]
    fn sparse_mul_and_zero() {
        let mut a = SparseIntMatrix::zero(2, 2);
        a.add(0, 0, 1);
        a.add(0, 1, 2);
        a.add(1, 1, -1);
        let mut b = SparseIntMatrix::zero(2, 1);
        b.add(0, 0, 2);
        b.add(1, 0, -1);
        let c = a.mul(&b);
        assert_eq!(c.get(0, 0), 0);
        assert_eq!(c.get(1, 0), 1);
    }

    #[test]
    fn bit_mul() {
        let mut a = BitMatrix::zero(2, 3);
        a.set(0, 0, true);
        a.set(0, 2, true);
        a.set(1, 1, true);
        let mut b = BitMatrix::zero(3, 2);
        b.set(0, 0, true);
        b.set(2, 0, true);
        b.set(1, 1, true);
        let c = a.mul(&b);
        assert!(!c.get(0, 0)); // 1 + 1 = 0
        assert!(c.get(1, 1));
    }
}
