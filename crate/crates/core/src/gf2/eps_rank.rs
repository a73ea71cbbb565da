//! ε-approximate rank over GF(2).
//!
//! The smallest `t` such that some convex combination of Boolean matrices of
//! GF(2) rank at most `t` lies within `eps` of the target in max-norm. For
//! each candidate `t` the feasibility question is a linear program over the
//! mixture weights, solved exactly over the rationals.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::BitMatrix;
use crate::lp::{LinearProgram, LpOutcome, Relation};

/// Largest number of entries for which all Boolean matrices are enumerated.
pub const MAX_ENTRIES: usize = 16;

#[derive(Clone, Debug)]
pub struct EpsRankQuery {
    rows: usize,
    cols: usize,
    /// Row-major target entries in `[0, 1]`.
    target: Vec<BigRational>,
    boolean: bool,
    pub eps: BigRational,
    pub tmax: usize,
}

/// A convex combination of Boolean matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Mixture {
    pub components: Vec<(BigRational, BitMatrix)>,
}

impl Mixture {
    /// Entrywise weighted average.
    pub fn average(&self, rows: usize, cols: usize) -> Vec<BigRational> {
        let mut avg = vec![BigRational::zero(); rows * cols];
        for (w, m) in &self.components {
            for r in 0..rows {
                for c in 0..cols {
                    if m.get(r, c) {
                        avg[r * cols + c] += w;
                    }
                }
            }
        }
        avg
    }

    pub fn max_rank(&self) -> usize {
        self.components
            .iter()
            .map(|(_, m)| m.rank())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EpsRank {
    Value { t: usize, witness: Mixture },
    ExceedsTmax,
}

impl EpsRank {
    pub fn value(&self) -> Option<usize> {
        match self {
            EpsRank::Value { t, .. } => Some(*t),
            EpsRank::ExceedsTmax => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EpsRankError {
    #[error("matrix has {entries} entries; enumeration is limited to {MAX_ENTRIES}")]
    DimensionLimit { entries: usize },
    #[error("eps must lie in [0, 1]")]
    InvalidEps,
    #[error("target entry ({row}, {col}) is outside [0, 1]")]
    InvalidEntry { row: usize, col: usize },
}

impl EpsRankQuery {
    pub fn boolean(m: &BitMatrix, eps: BigRational, tmax: usize) -> Self {
        let target = (0..m.rows() * m.cols())
            .map(|i| {
                if m.get(i / m.cols(), i % m.cols()) {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        EpsRankQuery {
            rows: m.rows(),
            cols: m.cols(),
            target,
            boolean: true,
            eps,
            tmax,
        }
    }

    /// Target with `[0,1]`-valued rational entries, row-major.
    pub fn rational(
        rows: usize,
        cols: usize,
        target: Vec<BigRational>,
        eps: BigRational,
        tmax: usize,
    ) -> Self {
        assert_eq!(target.len(), rows * cols);
        let boolean = target.iter().all(|v| v.is_zero() || v.is_one());
        EpsRankQuery {
            rows,
            cols,
            target,
            boolean,
            eps,
            tmax,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn target(&self) -> &[BigRational] {
        &self.target
    }

    fn target_bits(&self) -> u64 {
        self.target
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_one())
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    fn target_matrix(&self) -> BitMatrix {
        BitMatrix::from_index_bits(self.rows, self.cols, self.target_bits())
    }
}

/// Max-norm distance between a mixture and the target, exactly.
pub fn max_norm_distance(q: &EpsRankQuery, w: &Mixture) -> BigRational {
    w.average(q.rows, q.cols)
        .iter()
        .zip(&q.target)
        .map(|(a, b)| (a - b).abs())
        .fold(BigRational::zero(), |m, d| if d > m { d } else { m })
}

pub fn eps_rank(q: &EpsRankQuery) -> Result<EpsRank, EpsRankError> {
    let entries = q.rows * q.cols;
    if entries > MAX_ENTRIES {
        return Err(EpsRankError::DimensionLimit { entries });
    }
    if q.eps.is_negative() || q.eps > BigRational::one() {
        return Err(EpsRankError::InvalidEps);
    }
    if let Some(i) = q
        .target
        .iter()
        .position(|v| v.is_negative() || *v > BigRational::one())
    {
        return Err(EpsRankError::InvalidEntry {
            row: i / q.cols,
            col: i % q.cols,
        });
    }
    for t in 0..=q.tmax {
        if let Some(witness) = feasible(q, t) {
            return Ok(EpsRank::Value { t, witness });
        }
    }
    Ok(EpsRank::ExceedsTmax)
}

/// Finds a witness mixture of rank-≤`t` matrices within `q.eps`, if any.
pub fn feasible(q: &EpsRankQuery, t: usize) -> Option<Mixture> {
    let (rows, cols) = (q.rows, q.cols);
    let full = rows.min(cols);

    // Shortcuts that need no LP: exact matches and the full-rank layer cake.
    if q.boolean {
        let m = q.target_matrix();
        if m.rank() <= t {
            return Some(Mixture {
                components: vec![(BigRational::one(), m)],
            });
        }
    } else if t >= full {
        return Some(threshold_mixture(rows, cols, &q.target));
    }

    let catalogue = rank_catalogue(rows, cols);
    let mut candidates: Vec<u64> = catalogue
        .iter()
        .filter(|(_, r)| *r <= t)
        .map(|(bits, _)| *bits)
        .collect();
    if q.boolean {
        candidates = minimal_disagreements(&candidates, q.target_bits(), rows * cols);
    }
    solve_mixture_lp(q, &candidates)
}

fn solve_mixture_lp(q: &EpsRankQuery, candidates: &[u64]) -> Option<Mixture> {
    let n = candidates.len();
    if n == 0 {
        return None;
    }
    let cells = q.rows * q.cols;
    let one = BigRational::one();
    let mut lp = LinearProgram::new(n);
    lp.add(vec![one.clone(); n], Relation::Eq, one.clone());
    for cell in 0..cells {
        let coeffs: Vec<BigRational> = candidates
            .iter()
            .map(|&b| {
                if b >> cell & 1 == 1 {
                    one.clone()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let hi = &q.target[cell] + &q.eps;
        let lo = &q.target[cell] - &q.eps;
        if hi < one {
            lp.add(coeffs.clone(), Relation::Le, hi);
        }
        if lo.is_positive() {
            lp.add(coeffs, Relation::Ge, lo);
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => Some(Mixture {
            components: x
                .into_iter()
                .zip(candidates)
                .filter(|(w, _)| w.is_positive())
                .map(|(w, &b)| (w, BitMatrix::from_index_bits(q.rows, q.cols, b)))
                .collect(),
        }),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("feasibility program has a zero objective"),
    }
}

/// For a Boolean target, a candidate whose disagreement set contains another
/// candidate's is never needed. Keeps the inclusion-minimal ones.
fn minimal_disagreements(candidates: &[u64], target: u64, cells: usize) -> Vec<u64> {
    let size = 1usize << cells;
    let mut present = vec![false; size];
    for &c in candidates {
        present[(c ^ target) as usize] = true;
    }
    // covered[m]: some present mask is a subset of m.
    let mut covered = present.clone();
    for bit in 0..cells {
        for m in 0..size {
            if m >> bit & 1 == 1 && covered[m ^ (1 << bit)] {
                covered[m] = true;
            }
        }
    }
    let below = |m: usize| (0..cells).any(|b| m >> b & 1 == 1 && covered[m ^ (1 << b)]);
    let mut out: Vec<u64> = (0..size)
        .filter(|&m| present[m] && !below(m))
        .map(|m| m as u64 ^ target)
        .collect();
    out.sort_unstable();
    out
}

/// Threshold ("layer cake") mixture: distinct nonzero levels
/// `0 < u_1 < … < u_k`, component `j` is `[target ≥ u_j]` with weight
/// `u_j − u_{j−1}`, and the zero matrix takes the remaining `1 − u_k`.
pub fn threshold_mixture(rows: usize, cols: usize, target: &[BigRational]) -> Mixture {
    let mut levels: Vec<BigRational> = target.iter().filter(|v| v.is_positive()).cloned().collect();
    levels.sort();
    levels.dedup();
    let mut components = Vec::new();
    let mut prev = BigRational::zero();
    for u in &levels {
        let m = BitMatrix::from_fn(rows, cols, |r, c| target[r * cols + c] >= *u);
        components.push((u - &prev, m));
        prev = u.clone();
    }
    if prev < BigRational::one() {
        components.push((BigRational::one() - prev, BitMatrix::zeros(rows, cols)));
    }
    Mixture { components }
}

type Catalogue = Arc<Vec<(u64, usize)>>;

/// Every Boolean `rows × cols` matrix with its GF(2) rank, cached per shape.
pub fn rank_catalogue(rows: usize, cols: usize) -> Catalogue {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Catalogue>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&(rows, cols)) {
        return c.clone();
    }
    assert!(rows * cols <= MAX_ENTRIES);
    let all: Vec<(u64, usize)> = (0..1u64 << (rows * cols))
        .map(|bits| (bits, BitMatrix::from_index_bits(rows, cols, bits).rank()))
        .collect();
    let all = Arc::new(all);
    cache.lock().unwrap().insert((rows, cols), all.clone());
    all
}

pub fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor2() -> BitMatrix {
        BitMatrix::from_fn(2, 2, |x, y| x != y)
    }

    #[test]
    fn eps_zero_is_plain_rank() {
        for bits in 0..16u64 {
            let m = BitMatrix::from_index_bits(2, 2, bits);
            let q = EpsRankQuery::boolean(&m, BigRational::zero(), 4);
            assert_eq!(eps_rank(&q).unwrap().value(), Some(m.rank()));
        }
    }

    #[test]
    fn xor_at_quarter_needs_full_rank() {
        // Rank-1 mixtures get no closer than 1/3 to XOR.
        let q = EpsRankQuery::boolean(&xor2(), big(1, 4), 4);
        assert_eq!(eps_rank(&q).unwrap().value(), Some(2));
        let q = EpsRankQuery::boolean(&xor2(), big(1, 3), 4);
        assert_eq!(eps_rank(&q).unwrap().value(), Some(1));
    }

    #[test]
    fn half_is_always_within_rank_one() {
        let m = BitMatrix::from_fn(3, 3, |r, c| (r * 3 + c) % 2 == 0 || r == c);
        let q = EpsRankQuery::boolean(&m, big(1, 2), 4);
        let res = eps_rank(&q).unwrap();
        assert!(res.value().unwrap() <= 1);
        if let EpsRank::Value { witness, .. } = res {
            assert!(max_norm_distance(&q, &witness) <= big(1, 2));
        }
    }

    #[test]
    fn exceeds_tmax_and_limits() {
        let id = BitMatrix::from_fn(3, 3, |r, c| r == c);
        let q = EpsRankQuery::boolean(&id, BigRational::zero(), 2);
        assert_eq!(eps_rank(&q).unwrap(), EpsRank::ExceedsTmax);

        let big_m = BitMatrix::zeros(5, 4);
        let q = EpsRankQuery::boolean(&big_m, BigRational::zero(), 2);
        assert!(matches!(
            eps_rank(&q),
            Err(EpsRankError::DimensionLimit { entries: 20 })
        ));

        let q = EpsRankQuery::boolean(&id, big(-1, 2), 2);
        assert_eq!(eps_rank(&q), Err(EpsRankError::InvalidEps));
    }

    #[test]
    fn threshold_mixture_reconstructs() {
        let target = vec![big(1, 2), big(1, 4), big(0, 1), big(1, 1)];
        let m = threshold_mixture(2, 2, &target);
        assert_eq!(m.average(2, 2), target);
        let total: BigRational = m.components.iter().map(|(w, _)| w.clone()).sum();
        assert!(total.is_one());
    }

    #[test]
    fn minimal_disagreements_drop_supersets() {
        // Target 0; candidates 0b01, 0b11, 0b10 → 0b11 is dominated.
        assert_eq!(
            minimal_disagreements(&[0b01, 0b11, 0b10], 0, 2),
            vec![0b01, 0b10]
        );
    }

    #[test]
    fn rational_target() {
        let target = vec![big(1, 2); 4];
        let q = EpsRankQuery::rational(2, 2, target, BigRational::zero(), 4);
        let res = eps_rank(&q).unwrap();
        // ½·J + ½·0 has rank 1.
        assert_eq!(res.value(), Some(1));
    }
}
