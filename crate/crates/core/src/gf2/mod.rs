//! GF(2) linear algebra over communication matrices.

mod anf;
pub mod eps_rank;
mod fourier;
mod matrix;
mod table;

pub use anf::{anf, anf_coefficients, anf_eval};
pub use eps_rank::{eps_rank, EpsRank, EpsRankError, EpsRankQuery, Mixture};
pub use fourier::{fourier_l1, walsh_hadamard, SpectrumReport};
pub use matrix::{BitMatrix, Gf2Factorization};
pub use table::{input_bit, TableError, TruthTable};

pub fn gf2_rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn gf2_factorize(m: &BitMatrix) -> Gf2Factorization {
    m.factorize()
}
