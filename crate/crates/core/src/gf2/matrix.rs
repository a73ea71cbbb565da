use std::fmt;

const WORD: usize = 64;

/// Dense bit matrix over GF(2), rows packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

/// `M = ⊕_i p_i · q_iᵀ` with exactly `rank` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Factorization {
    pub rank: usize,
    /// `row_factors[i][x] = p_i(x)`.
    pub row_factors: Vec<Vec<bool>>,
    /// `col_factors[i][y] = q_i(y)`.
    pub col_factors: Vec<Vec<bool>>,
}

impl Gf2Factorization {
    pub fn reconstruct(&self, rows: usize, cols: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for (p, q) in self.row_factors.iter().zip(&self.col_factors) {
            m.xor_outer(p, q);
        }
        m
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(WORD).max(1);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix whose entry `(r, c)` is bit `r * cols + c` of `bits`.
    pub fn from_index_bits(rows: usize, cols: usize, bits: u64) -> Self {
        Self::from_fn(rows, cols, |r, c| (bits >> (r * cols + c)) & 1 == 1)
    }

    /// Inverse of [`BitMatrix::from_index_bits`]; requires at most 64 entries.
    pub fn index_bits(&self) -> u64 {
        assert!(self.rows * self.cols <= 64);
        let mut bits = 0u64;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    bits |= 1 << (r * self.cols + c);
                }
            }
        }
        bits
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.words + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words + c / WORD];
        let bit = 1u64 << (c % WORD);
        if v {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn col(&self, c: usize) -> Vec<bool> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// `self ^= p · qᵀ`.
    pub fn xor_outer(&mut self, p: &[bool], q: &[bool]) {
        assert_eq!(p.len(), self.rows);
        assert_eq!(q.len(), self.cols);
        let mut packed = vec![0u64; self.words];
        for (c, &b) in q.iter().enumerate() {
            if b {
                packed[c / WORD] |= 1 << (c % WORD);
            }
        }
        for (r, &b) in p.iter().enumerate() {
            if b {
                let row = &mut self.data[r * self.words..(r + 1) * self.words];
                for (w, m) in row.iter_mut().zip(&packed) {
                    *w ^= m;
                }
            }
        }
    }

    /// Rank over GF(2) by word-parallel Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|r| self.row_words(r).to_vec()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, bit) = (c / WORD, 1u64 << (c % WORD));
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let prow = &head[rank];
            for row in tail.iter_mut() {
                if row[w] & bit != 0 {
                    for (a, b) in row.iter_mut().zip(prow) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Rank-revealing factorization. The column factors are rows of `self`
    /// (a maximal independent set, taken greedily top to bottom) and the row
    /// factors express every row in that basis.
    pub fn factorize(&self) -> Gf2Factorization {
        // Reduced echelon rows: (row words, pivot column, combination of
        // basis rows that produces it). Each entry is zero at the pivots of
        // every other entry.
        struct Echelon {
            row: Vec<u64>,
            pivot: usize,
            combo: Vec<u64>,
        }
        let combo_words = self.rows.div_ceil(WORD).max(1);
        let mut echelon: Vec<Echelon> = Vec::new();
        let mut basis: Vec<usize> = Vec::new();
        let mut coeffs: Vec<Vec<u64>> = Vec::with_capacity(self.rows);

        for r in 0..self.rows {
            let mut v = self.row_words(r).to_vec();
            let mut combo = vec![0u64; combo_words];
            for e in &echelon {
                if v[e.pivot / WORD] >> (e.pivot % WORD) & 1 == 1 {
                    xor_into(&mut v, &e.row);
                    xor_into(&mut combo, &e.combo);
                }
            }
            match first_set_bit(&v) {
                None => coeffs.push(combo),
                Some(pivot) => {
                    let idx = basis.len();
                    basis.push(r);
                    combo[idx / WORD] ^= 1 << (idx % WORD);
                    for e in echelon.iter_mut() {
                        if e.row[pivot / WORD] >> (pivot % WORD) & 1 == 1 {
                            xor_into(&mut e.row, &v);
                            xor_into(&mut e.combo, &combo);
                        }
                    }
                    echelon.push(Echelon {
                        row: v,
                        pivot,
                        combo,
                    });
                    let mut unit = vec![0u64; combo_words];
                    unit[idx / WORD] |= 1 << (idx % WORD);
                    coeffs.push(unit);
                }
            }
        }

        let rank = basis.len();
        let row_factors = (0..rank)
            .map(|i| {
                coeffs
                    .iter()
                    .map(|c| c[i / WORD] >> (i % WORD) & 1 == 1)
                    .collect()
            })
            .collect();
        let col_factors = basis.iter().map(|&r| self.row(r)).collect();
        Gf2Factorization {
            rank,
            row_factors,
            col_factors,
        }
    }
}

impl BitMatrix {
    /// A nonempty set of rows XOR-ing to zero, if the rows are dependent.
    /// Returns the first such set found scanning rows top to bottom.
    pub fn first_dependency(&self) -> Option<Vec<usize>> {
        let f = self.factorize();
        if f.rank == self.rows {
            return None;
        }
        let mut basis = Vec::with_capacity(f.rank);
        let mut seen = 0;
        for r in 0..self.rows {
            let coeffs: Vec<usize> = (0..f.rank).filter(|&i| f.row_factors[i][r]).collect();
            if coeffs.len() == 1 && coeffs[0] == seen && seen < f.rank && basis.len() == seen {
                basis.push(r);
                seen += 1;
                continue;
            }
            let mut set: Vec<usize> = coeffs.iter().map(|&i| basis[i]).collect();
            set.push(r);
            return Some(set);
        }
        None
    }
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (a, b) in dst.iter_mut().zip(src) {
        *a ^= b;
    }
}

fn first_set_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Rank by brute force: size of the span of the rows.
    fn span_rank(m: &BitMatrix) -> usize {
        let rows: Vec<u64> = (0..m.rows())
            .map(|r| (0..m.cols()).fold(0u64, |acc, c| acc | (m.get(r, c) as u64) << c))
            .collect();
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let v = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0, |acc, (_, r)| acc ^ r);
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(BitMatrix::zeros(4, 4).rank(), 0);
        assert_eq!(BitMatrix::zeros(4, 4).factorize().rank, 0);
    }

    #[test]
    fn and_matrix_factorizes_to_x_times_y() {
        let m = BitMatrix::from_fn(2, 2, |x, y| x == 1 && y == 1);
        let f = m.factorize();
        assert_eq!(f.rank, 1);
        assert_eq!(f.row_factors[0], vec![false, true]);
        assert_eq!(f.col_factors[0], vec![false, true]);
    }

    #[test]
    fn xor_matrix_has_rank_two() {
        let m = BitMatrix::from_fn(2, 2, |x, y| x != y);
        let f = m.factorize();
        assert_eq!(f.rank, 2);
        assert_eq!(f.reconstruct(2, 2), m);
    }

    #[test]
    fn rank_matches_span_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let rows = rng.gen_range(1..7);
            let cols = rng.gen_range(1..9);
            let m = BitMatrix::from_fn(rows, cols, |_, _| rng.gen());
            assert_eq!(m.rank(), span_rank(&m), "{m:?}");
            assert_eq!(m.factorize().rank, m.rank());
        }
    }

    #[test]
    fn wide_matrices_cross_word_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = BitMatrix::from_fn(70, 130, |_, _| rng.gen_bool(0.3));
        let f = m.factorize();
        assert_eq!(f.rank, m.rank());
        assert_eq!(f.reconstruct(70, 130), m);
        assert_eq!(m.transpose().rank(), m.rank());
    }
}
