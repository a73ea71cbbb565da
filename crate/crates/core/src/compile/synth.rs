use std::collections::HashMap;

use crate::gf2::{BitMatrix, TruthTable};
use crate::protocol::{OneWayProtocol, ParallelXorProtocol};

/// Strict XOR protocol with exactly `rank(M_f)` boxes, one per term of a
/// rank factorization.
pub fn synth_rank(f: &TruthTable) -> ParallelXorProtocol {
    let fac = f.matrix().factorize();
    ParallelXorProtocol::strict(f.x_size(), f.y_size(), fac.row_factors, fac.col_factors)
}

/// One box per nonzero row `z`: Alice inputs `[x = z]`, Bob inputs `f(z, y)`.
pub fn synth_vandam(f: &TruthTable) -> ParallelXorProtocol {
    let (xs, ys) = (f.x_size(), f.y_size());
    let mut p = Vec::new();
    let mut q = Vec::new();
    for z in 0..xs {
        let row = f.row(z);
        if row.iter().any(|&b| b) {
            p.push((0..xs).map(|x| x == z).collect());
            q.push(row);
        }
    }
    ParallelXorProtocol::strict(xs, ys, p, q)
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Row classes of `M_f` in order of first appearance. With `parity` a row
/// and its complement share a class; the flag says whether row `x` is the
/// complement of its class representative.
fn row_classes(m: &BitMatrix, parity: bool) -> (Vec<usize>, Vec<bool>, Vec<Vec<bool>>) {
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut class = Vec::with_capacity(m.rows());
    let mut flip = Vec::with_capacity(m.rows());
    for x in 0..m.rows() {
        let mut row = m.row(x);
        let flipped = parity && row.first() == Some(&true);
        if flipped {
            row.iter_mut().for_each(|b| *b = !*b);
        }
        let next = reps.len();
        let c = *index.entry(row.clone()).or_insert(next);
        if c == next {
            reps.push(row);
        }
        class.push(c);
        flip.push(flipped);
    }
    (class, flip, reps)
}

/// One-way deterministic complexity: `⌈log₂ k⌉` for `k` distinct rows, up
/// to complementation when `parity` is set.
pub fn d_oneway(f: &TruthTable, parity: bool) -> usize {
    ceil_log2(row_classes(f.matrix(), parity).2.len())
}

/// A one-way protocol with exactly `d_oneway(f, parity)` message bits.
/// Alice sends the index of her row class; without `parity` her output is 0.
pub fn synth_oneway(f: &TruthTable, parity: bool) -> OneWayProtocol {
    let (class, flip, reps) = row_classes(f.matrix(), parity);
    let bits = ceil_log2(reps.len());
    let mut out_b = reps;
    out_b.resize(1 << bits, vec![false; f.y_size()]);
    OneWayProtocol {
        x_size: f.x_size(),
        y_size: f.y_size(),
        bits,
        msg: class,
        out_a: flip,
        out_b,
    }
}
