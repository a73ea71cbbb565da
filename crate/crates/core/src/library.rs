//! Named protocols with exact parameterizations.

use thiserror::Error;

use crate::compile::{circuit_to_nlb, disj_circuit, synth_vandam};
use crate::gf2::{input_bit, TruthTable};
use crate::protocol::{
    error_profile, ExecError, OrderedNlbProtocol, ParallelXorProtocol, ProtocolMixture,
};
use crate::rational::{is_probability, Prob};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LibraryError {
    #[error("n = {n} outside 1..={max}")]
    Size { n: usize, max: usize },
    #[error("p = {0} is not a probability")]
    Probability(Prob),
}

fn check_n(n: usize, max: usize) -> Result<(), LibraryError> {
    if (1..=max).contains(&n) {
        Ok(())
    } else {
        Err(LibraryError::Size { n, max })
    }
}

/// Inner product mod 2 on `n`-bit inputs.
pub fn ip_table(n: usize) -> TruthTable {
    TruthTable::from_fn(n as u32, n as u32, |x, y| (x & y).count_ones() & 1 == 1)
}

/// 1 iff the `n`-bit sets intersect.
pub fn disj_table(n: usize) -> TruthTable {
    TruthTable::from_fn(n as u32, n as u32, |x, y| x & y != 0)
}

/// `x_i` as a table over `n`-bit inputs, MSB first.
fn coordinate(n: usize, i: usize) -> Vec<bool> {
    (0..1usize << n).map(|v| input_bit(v, i, n)).collect()
}

/// `n` boxes with inputs `(x_i, y_i)`.
pub fn ip_protocol(n: usize) -> Result<ParallelXorProtocol, LibraryError> {
    check_n(n, 8)?;
    let c: Vec<_> = (0..n).map(|i| coordinate(n, i)).collect();
    Ok(ParallelXorProtocol::strict(1 << n, 1 << n, c.clone(), c))
}

/// Leaf boxes `(x_i, y_i)` combined by a balanced OR tree; `3n − 2` boxes.
pub fn disj_det_protocol(n: usize) -> Result<OrderedNlbProtocol, LibraryError> {
    check_n(n, 6)?;
    Ok(circuit_to_nlb(&disj_circuit(n)).expect("disjointness circuit is well formed"))
}

/// Shared randomness over `r ∈ {0,1}^n` and a lottery: with weight `1 − p`
/// run inner product on `(x ∧ r, y ∧ r)`, otherwise output parity 1 through
/// the local terms, split evenly between `(0, 1)` and `(1, 0)`. Every
/// component has `n` boxes.
pub fn disj_rand_parallel(
    n: usize,
    p: Prob,
) -> Result<ProtocolMixture<ParallelXorProtocol>, LibraryError> {
    check_n(n, 6)?;
    if !is_probability(&p) {
        return Err(LibraryError::Probability(p));
    }
    let size = 1usize << n;
    let one = Prob::from_integer(1);
    let mut components = Vec::new();
    if p != one {
        let w = (one - p) / Prob::from_integer(size as i128);
        for r in 0..size {
            let masked: Vec<Vec<bool>> = (0..n)
                .map(|i| (0..size).map(|v| input_bit(v & r, i, n)).collect())
                .collect();
            components.push((
                w,
                ParallelXorProtocol::strict(size, size, masked.clone(), masked),
            ));
        }
    }
    if p != Prob::from_integer(0) {
        for (la, lb) in [(false, true), (true, false)] {
            components.push((
                p / Prob::from_integer(2),
                ParallelXorProtocol {
                    x_size: size,
                    y_size: size,
                    p: vec![vec![false; size]; n],
                    q: vec![vec![false; size]; n],
                    local_a: vec![la; size],
                    local_b: vec![lb; size],
                },
            ));
        }
    }
    Ok(ProtocolMixture::new(components))
}

/// Van Dam's protocol: one box per nonzero row.
pub fn vandam_protocol(f: &TruthTable) -> ParallelXorProtocol {
    synth_vandam(f)
}

/// A deterministic local strategy for the CHSH game.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChshStrategy {
    pub a_map: [bool; 2],
    pub b_map: [bool; 2],
}

impl ChshStrategy {
    pub fn all() -> impl Iterator<Item = ChshStrategy> {
        (0..16u8).map(|s| ChshStrategy {
            a_map: [s & 1 == 1, s & 2 == 2],
            b_map: [s & 4 == 4, s & 8 == 8],
        })
    }

    /// Winning probability over uniform inputs.
    pub fn success(&self) -> Prob {
        let wins = (0..4usize)
            .filter(|&i| {
                let (x, y) = (i >> 1, i & 1);
                (self.a_map[x] ^ self.b_map[y]) == (x & y == 1)
            })
            .count();
        Prob::new(wins as i128, 4)
    }
}

/// Best classical success over all 16 strategy pairs, with a witness.
pub fn chsh_classical_optimum() -> (Prob, ChshStrategy) {
    ChshStrategy::all()
        .map(|s| (s.success(), s))
        .fold(None, |best: Option<(Prob, ChshStrategy)>, cur| match best {
            Some(b) if b.0 >= cur.0 => Some(b),
            _ => Some(cur),
        })
        .expect("sixteen strategies")
}

/// Winning probability of the one-box strategy, computed by the exact engine.
pub fn chsh_nlb_success() -> Result<Prob, ExecError> {
    let proto = ip_protocol(1).expect("n = 1");
    let f = ip_table(1);
    let profile = error_profile(&proto, &f)?;
    let total: Prob = profile.errors.iter().sum();
    Ok(Prob::from_integer(1) - total / Prob::from_integer(4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chsh_values() {
        let (best, _) = chsh_classical_optimum();
        assert_eq!(best, Prob::new(3, 4));
        let zero = ChshStrategy {
            a_map: [false; 2],
            b_map: [false; 2],
        };
        assert_eq!(zero.success(), Prob::new(3, 4));
        assert_eq!(chsh_nlb_success().unwrap(), Prob::from_integer(1));
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(ip_protocol(0).is_err());
        assert!(disj_rand_parallel(2, Prob::new(3, 2)).is_err());
    }
}
