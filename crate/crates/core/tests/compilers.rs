mod common;

use nlbox_core::compile::{
    and_from_oneway, circuit_to_nlb, compile_any, disj_circuit, independence_reduce,
    oneway_to_parallel, ordered_to_ot, synth_oneway, synth_rank, twoway_to_parallel,
    xor_normalize_general, xor_normalize_ordered, xor_normalize_parallel, CompileError, Compiler,
    DistributedCircuit,
};
use nlbox_core::library::{disj_det_protocol, disj_table, ip_protocol, ip_table};
use nlbox_core::protocol::{
    error_profile, exec_exact, OneWayProtocol, ParallelXorProtocol, Protocol, ProtocolKind,
    ProtocolMixture, StepTable,
};
use nlbox_core::seed::rng_from_seed;
use nlbox_core::TruthTable;
use rand::Rng;

#[test]
fn oneway_boxes_per_nonzero_message() {
    let mut rng = rng_from_seed(31);
    for _ in 0..200 {
        let (nx, ny) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let f = common::random_function(nx, ny, &mut rng);
        let o = synth_oneway(&f, false);
        let p = oneway_to_parallel(&o).unwrap();
        assert!(p.boxes() < 1 << o.bits);
        assert!(error_profile(&p, &f).unwrap().is_exact());
    }
}

#[test]
fn twoway_mixed_directions() {
    let mut rng = rng_from_seed(32);
    for depth in 1..=5 {
        for _ in 0..10 {
            let t = common::random_tree(depth, 4, 8, &mut rng);
            let f = TruthTable::from_fn(2, 3, |x, y| {
                let (a, b) = t.eval(x, y);
                a ^ b
            });
            let p = twoway_to_parallel(&t).unwrap();
            assert!(p.boxes() < 1 << depth);
            if depth == 5 {
                continue;
            }
            assert!(error_profile(&p, &f).unwrap().is_exact(), "depth {depth}");
        }
    }
}

#[test]
fn circuit_text_round_trip_and_compile() {
    let text = "\
circuit nx=1 ny=1
input 1 product p=01 q=01
input 2 local a=01 b=00
input 3 local a=00 b=01
gate 4 xor 2 3
gate 5 or 1 4
gate 6 not 5
output 6
";
    let c: DistributedCircuit = text.parse().unwrap();
    assert_eq!(c.to_text().parse::<DistributedCircuit>().unwrap(), c);
    let f = TruthTable::from_fn(1, 1, |x, y| c.eval(x, y));
    // NOT (x∧y ∨ x⊕y) = NOR.
    assert_eq!(f, TruthTable::from_fn(1, 1, |x, y| x == 0 && y == 0));
    let p = circuit_to_nlb(&c).unwrap();
    assert_eq!(p.boxes(), c.box_count());
    assert!(error_profile(&p, &f).unwrap().is_exact());
}

#[test]
fn malformed_circuits() {
    for bad in [
        "circuit nx=1 ny=1\ninput 1 product p=01 q=01\ngate 2 and 1 3\noutput 2\n",
        "circuit nx=1 ny=1\ninput 1 product p=011 q=01\noutput 1\n",
        "circuit nx=1 ny=1\ninput 1 product p=01 q=01\noutput 4\n",
    ] {
        let r = bad
            .parse::<DistributedCircuit>()
            .and_then(|c| circuit_to_nlb(&c).map(|_| ()));
        assert!(r.is_err(), "{bad}");
    }
}

#[test]
fn disj_circuit_box_accounting() {
    for n in 1..=6 {
        let c = disj_circuit(n);
        let internal = c.gates.len();
        assert_eq!(c.box_count(), n + 2 * internal);
        assert_eq!(c.box_count(), 3 * n - 2);
        assert_eq!(
            TruthTable::from_fn(n as u32, n as u32, |x, y| c.eval(x, y)),
            disj_table(n)
        );
    }
}

/// Output reads every box and is their parity.
fn xor_output(s: &StepTable, domain: usize, t: usize) -> bool {
    s.reads == (0..t).collect::<Vec<_>>()
        && (0..domain).all(|x| (0..1u64 << t).all(|m| s.eval(x, m) == (m.count_ones() % 2 == 1)))
}

#[test]
fn normalize_ordered_and_general() {
    for n in 1..=3 {
        let src = disj_det_protocol(n).unwrap();
        let f = disj_table(n);
        let o = xor_normalize_ordered(&src).unwrap();
        assert_eq!(o.boxes(), src.boxes() + 2);
        assert!(
            xor_output(&o.out_a, o.x_size, o.boxes()) && xor_output(&o.out_b, o.y_size, o.boxes())
        );
        assert!(error_profile(&o, &f).unwrap().is_exact());
        let g = xor_normalize_general(&src.to_general()).unwrap();
        assert_eq!(g.boxes, src.boxes() + 2);
        assert!(xor_output(&g.out_a, g.x_size, g.boxes));
        assert!(error_profile(&g, &f).unwrap().is_exact());
    }
}

#[test]
fn normalize_rejects_inexact() {
    let p = ParallelXorProtocol::strict(2, 2, vec![vec![false, true]], vec![vec![false, true]]);
    let mut par = p.to_parallel();
    // Alice outputs her outcome only when x = 1; the parity then depends on the draw.
    let half = par.out_a.len() / 2;
    for v in &mut par.out_a[..half] {
        *v = false;
    }
    assert!(matches!(
        xor_normalize_parallel(&par),
        Err(CompileError::NotExact | CompileError::ClaimsViolated(_))
    ));
    assert_eq!(
        independence_reduce(&par).unwrap_err(),
        CompileError::NotExact
    );
}

#[test]
fn reduce_keeps_function() {
    let mut rng = rng_from_seed(33);
    for _ in 0..100 {
        let f = common::random_function(2, 2, &mut rng);
        let src = common::obfuscate(&synth_rank(&f), &mut rng);
        let g = TruthTable::from_fn(2, 2, |x, y| {
            let d = exec_exact(&src, x, y).unwrap();
            d.parity_one() == 1.into()
        });
        let r = independence_reduce(&src).unwrap();
        assert!(r.boxes() <= src.boxes());
        assert!(r.boxes() <= g.rank() + 2);
        assert!(error_profile(&r, &g).unwrap().is_exact());
    }
}

#[test]
fn ot_limit() {
    let z = vec![false; 2];
    let wide = ParallelXorProtocol::strict(2, 2, vec![z.clone(); 17], vec![z; 17]).to_ordered();
    assert!(matches!(
        ordered_to_ot(&wide),
        Err(CompileError::TooLarge { .. })
    ));
    assert_eq!(
        ordered_to_ot(&ip_protocol(3).unwrap().to_ordered())
            .unwrap()
            .calls
            .len(),
        3
    );
}

#[test]
fn and_limit() {
    let o = OneWayProtocol {
        x_size: 2,
        y_size: 2,
        bits: 5,
        msg: vec![0, 31],
        out_a: vec![false; 2],
        out_b: vec![vec![false; 2]; 32],
    };
    assert!(matches!(
        and_from_oneway(&o),
        Err(CompileError::TooLarge { .. })
    ));
}

#[test]
fn compile_any_dispatch() {
    let ip = ProtocolMixture::single(Protocol::from(ip_protocol(2).unwrap()));
    assert_eq!(
        compile_any(&ip, Compiler::OrderedToOt).unwrap_err(),
        CompileError::WrongKind("ordered")
    );
    let (out, rep) = compile_any(&ip, Compiler::XorNormalize).unwrap();
    assert_eq!(out.kind(), Some(ProtocolKind::ParallelXor));
    assert!(rep.within_bound());
    assert!(error_profile(&out, &ip_table(2)).unwrap().is_exact());

    let o = ProtocolMixture::single(Protocol::from(ip_protocol(2).unwrap().to_ordered()));
    let (ot, rep) = compile_any(&o, Compiler::OrderedToOt).unwrap();
    assert_eq!(ot.kind(), Some(ProtocolKind::Ot));
    assert_eq!(rep.target_size, 2);
}
