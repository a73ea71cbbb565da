//! Fourier spectrum of a bipartite Boolean function.

use super::TruthTable;

/// Fourier coefficients of `(-1)^f` over all characters on the joint input.
///
/// The joint input index is `x · 2^ny + y`, so the low `ny` bits of a
/// character mask select Bob's variables and the high `nx` bits Alice's.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub bits: u32,
    /// `coefficients[S] = α_S`.
    pub coefficients: Vec<f64>,
    /// `Σ_S |α_S|`.
    pub l1: f64,
    /// Unnormalised integer Walsh–Hadamard sums; `α_S = raw[S] / 2^bits`.
    pub raw: Vec<i64>,
}

impl SpectrumReport {
    pub fn parseval_sum(&self) -> f64 {
        self.coefficients.iter().map(|a| a * a).sum()
    }

    /// Characters with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.raw
            .iter()
            .enumerate()
            .filter(|(_, &r)| r != 0)
            .map(|(s, _)| s)
            .collect()
    }
}

/// In-place fast Walsh–Hadamard transform on integers.
pub fn walsh_hadamard(v: &mut [i64]) {
    let n = v.len();
    assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for start in (0..n).step_by(2 * h) {
            for i in start..start + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

pub fn fourier_l1(f: &TruthTable) -> SpectrumReport {
    let bits = f.nx() + f.ny();
    let cols = f.y_size();
    let mut raw: Vec<i64> = (0..1usize << bits)
        .map(|i| if f.eval(i / cols, i % cols) { -1 } else { 1 })
        .collect();
    walsh_hadamard(&mut raw);
    let scale = (1u64 << bits) as f64;
    let coefficients: Vec<f64> = raw.iter().map(|&r| r as f64 / scale).collect();
    let l1 = raw.iter().map(|r| r.unsigned_abs()).sum::<u64>() as f64 / scale;
    SpectrumReport {
        bits,
        coefficients,
        l1,
        raw,
    }
}
