mod common;

use nlbox_core::compile::{synth_rank, xor_normalize_ordered};
use nlbox_core::library::{disj_det_protocol, disj_rand_parallel, disj_table, ip_protocol};
use nlbox_core::protocol::{
    exec_exact, exec_exact_with, exec_sample, nlb_leaves, sample_with, Exec, ExecError,
    ParallelXorProtocol, Policy, Protocol, ProtocolMixture,
};
use nlbox_core::rational::pow_half;
use nlbox_core::seed::{rng_from_seed, trial_rng};
use nlbox_core::Prob;

fn chsh_box() -> ParallelXorProtocol {
    ParallelXorProtocol::strict(2, 2, vec![vec![false, true]], vec![vec![false, true]])
}

#[test]
fn single_box_law() {
    let p = chsh_box();
    let half = Prob::new(1, 2);
    for x in 0..2 {
        for y in 0..2 {
            let d = exec_exact(&p, x, y).unwrap();
            let xy = x & y == 1;
            for a in [false, true] {
                assert_eq!(d.get(a, a ^ xy), half);
                assert_eq!(d.get(a, !(a ^ xy)), Prob::from_integer(0));
            }
            assert_eq!(d.marginal_a(true), half);
            assert_eq!(d.marginal_b(true), half);
        }
    }
}

#[test]
fn leaves_are_equally_weighted() {
    let p = Protocol::Ordered(disj_det_protocol(2).unwrap());
    for policy in [Policy::AliceFirst, Policy::BobFirst, Policy::Alternate] {
        let leaves = nlb_leaves(&p, 3, 1, policy).unwrap();
        assert_eq!(leaves.len(), 16);
        let mass: Prob = leaves.iter().map(|_| pow_half(4)).sum();
        assert_eq!(mass, Prob::from_integer(1));
        assert!(leaves.iter().all(|l| l.a ^ l.b));
    }
}

#[test]
fn policy_invariance() {
    let mut rng = rng_from_seed(21);
    let mut protocols: Vec<Protocol> = vec![
        disj_det_protocol(3).unwrap().into(),
        ip_protocol(2).unwrap().to_ordered().into(),
        disj_det_protocol(2).unwrap().to_general().into(),
    ];
    for _ in 0..10 {
        let f = common::random_function(2, 2, &mut rng);
        let o = common::obfuscate(&synth_rank(&f), &mut rng);
        protocols.push(o.into());
    }
    protocols.push(
        xor_normalize_ordered(&disj_det_protocol(2).unwrap())
            .unwrap()
            .into(),
    );
    for p in &protocols {
        let (xs, ys) = Exec::domains(p);
        for x in 0..xs {
            for y in 0..ys {
                let d = exec_exact_with(p, x, y, Policy::AliceFirst).unwrap();
                assert_eq!(d, exec_exact_with(p, x, y, Policy::BobFirst).unwrap());
                assert_eq!(d, exec_exact_with(p, x, y, Policy::Alternate).unwrap());
            }
        }
    }
}

#[test]
fn sampling_matches_exact() {
    const N: usize = 20_000;
    let p = disj_rand_parallel(2, Prob::new(1, 3)).unwrap().into_any();
    let tol = 4.0 / (N as f64).sqrt();
    for (x, y) in [(0, 0), (1, 1), (3, 2)] {
        let exact = exec_exact(&p, x, y).unwrap();
        let mut rng = trial_rng(5, (x * 4 + y) as u64);
        let mut counts = [0usize; 4];
        for _ in 0..N {
            let s = sample_with(&p, x, y, &mut rng);
            counts[2 * s.a as usize + s.b as usize] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let want = exact.get(i >= 2, i % 2 == 1);
            let want = *want.numer() as f64 / *want.denom() as f64;
            assert!(
                (c as f64 / N as f64 - want).abs() <= tol,
                "({x},{y}) outcome {i}"
            );
        }
    }
}

#[test]
fn sampling_is_reproducible() {
    let p = disj_det_protocol(3).unwrap();
    let a = exec_sample(&p, 5, 6, 99).unwrap();
    let b = exec_sample(&p, 5, 6, 99).unwrap();
    assert_eq!(a.transcript, b.transcript);
    assert_eq!((a.a, a.b), (b.a, b.b));
    assert_eq!(a.a ^ a.b, disj_table(3).eval(5, 6));
}

#[test]
fn out_of_range_inputs() {
    let p = chsh_box();
    assert!(matches!(
        exec_exact(&p, 2, 0),
        Err(ExecError::Domain { .. })
    ));
    assert!(matches!(
        exec_sample(&p, 0, 9, 1),
        Err(ExecError::Domain { .. })
    ));
}

#[test]
fn mixture_weights_combine() {
    let zero = ParallelXorProtocol::strict(2, 2, vec![vec![false; 2]], vec![vec![false; 2]]);
    let m = ProtocolMixture::new(vec![(Prob::new(1, 4), chsh_box()), (Prob::new(3, 4), zero)])
        .into_any();
    let d = exec_exact(&m, 1, 1).unwrap();
    assert_eq!(d.parity_one(), Prob::new(1, 4));
}
