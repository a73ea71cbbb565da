use nlbox_core::compile::{synth_rank, synth_vandam};
use nlbox_core::correlations::{layercake_decompose, CorrelationMatrix};
use nlbox_core::gf2::{anf, anf_coefficients, anf_eval, fourier_l1};
use nlbox_core::protocol::error_profile;
use nlbox_core::{BitMatrix, Prob, TruthTable};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..12, 1usize..12).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c)
            .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
    })
}

fn table() -> impl Strategy<Value = TruthTable> {
    (0u32..=3, 0u32..=3).prop_flat_map(|(nx, ny)| {
        let cells = 1u32 << (nx + ny);
        any::<u64>().prop_map(move |b| {
            let mask = if cells >= 64 {
                u64::MAX
            } else {
                (1u64 << cells) - 1
            };
            TruthTable::from_index(nx, ny, b & mask)
        })
    })
}

proptest! {
    #[test]
    fn factorization_reconstructs(m in matrix()) {
        let f = m.factorize();
        prop_assert_eq!(f.rank, m.rank());
        prop_assert_eq!(f.reconstruct(m.rows(), m.cols()), m);
    }

    #[test]
    fn rank_is_permutation_invariant(m in matrix(), seed in any::<u64>()) {
        let (r, c) = (m.rows(), m.cols());
        let rp: Vec<usize> = (0..r).map(|i| (i + seed as usize) % r).collect();
        let cp: Vec<usize> = (0..c).map(|j| (j * 7 + (seed >> 8) as usize) % c).collect();
        let cp_ok = { let mut s = cp.clone(); s.sort(); s.dedup(); s.len() == c };
        prop_assume!(cp_ok);
        let permuted = BitMatrix::from_fn(r, c, |i, j| m.get(rp[i], cp[j]));
        prop_assert_eq!(permuted.rank(), m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn rank_is_subadditive(a in matrix(), bits in any::<u64>()) {
        let b = BitMatrix::from_fn(a.rows(), a.cols(), |i, j| bits >> ((i * a.cols() + j) % 64) & 1 == 1);
        let sum = BitMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) ^ b.get(i, j));
        prop_assert!(sum.rank() <= a.rank() + b.rank());
    }

    #[test]
    fn anf_round_trip(bits in proptest::collection::vec(any::<bool>(), 1usize << 5)) {
        let monomials = anf(&bits);
        let coeffs = anf_coefficients(&bits);
        prop_assert_eq!(monomials.len(), coeffs.iter().filter(|&&c| c).count());
        for (v, &b) in bits.iter().enumerate() {
            prop_assert_eq!(anf_eval(&monomials, v as u32), b);
        }
    }

    #[test]
    fn synthesis_is_exact(f in table()) {
        let p = synth_rank(&f);
        prop_assert_eq!(p.boxes(), f.rank());
        prop_assert!(error_profile(&p, &f).unwrap().is_exact());
        let v = synth_vandam(&f);
        prop_assert!(v.boxes() >= f.rank());
        prop_assert!(error_profile(&v, &f).unwrap().is_exact());
    }

    #[test]
    fn parseval(f in table()) {
        prop_assert!((fourier_l1(&f).parseval_sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn layercake_averages_back(nums in proptest::collection::vec(0i128..=12, 9)) {
        let entries: Vec<Prob> = nums.iter().map(|&n| Prob::new(n, 12)).collect();
        let c = CorrelationMatrix::new(3, 3, entries.clone()).unwrap();
        let mix = layercake_decompose(&c);
        prop_assert_eq!(mix.total_weight(), Prob::from_integer(1));
        prop_assert_eq!(mix.average(3, 3), entries);
    }

    #[test]
    fn correlation_text_round_trip(nums in proptest::collection::vec(0i128..=7, 6)) {
        let c = CorrelationMatrix::new(2, 3, nums.iter().map(|&n| Prob::new(n, 7)).collect()).unwrap();
        prop_assert_eq!(c.to_text().parse::<CorrelationMatrix>().unwrap(), c);
    }
}
