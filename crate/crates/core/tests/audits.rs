use nlbox_core::compile::{and_from_oneway, ordered_to_ot, synth_oneway};
use nlbox_core::library::{disj_det_protocol, disj_rand_parallel, disj_table, ip_table};
use nlbox_core::protocol::{
    error_profile, nonsignaling_audit, privacy_audit_and, privacy_audit_ot, validate, AndProtocol,
    AuditError, OrderedNlbProtocol, OtCall, OtProtocol, Protocol, ProtocolMixture, StepTable,
    ViolationKind,
};
use nlbox_core::{Prob, TruthTable};

fn and_table() -> TruthTable {
    TruthTable::from_fn(1, 1, |x, y| x & y == 1)
}

#[test]
fn leaky_and_is_rejected() {
    // Correct output, but the second gate shows Alice y whatever x is.
    let leaky = AndProtocol {
        x_size: 2,
        y_size: 2,
        p: vec![vec![false, true], vec![true, true]],
        q: vec![vec![false, true], vec![false, true]],
        out_a: (0..8).map(|i| i & 1 == 1).collect(),
    };
    assert!(matches!(
        privacy_audit_and(&leaky, &and_table()),
        Err(AuditError::AndLeak { x: 0, .. })
    ));
}

#[test]
fn incorrect_and_is_rejected() {
    let wrong = AndProtocol {
        x_size: 2,
        y_size: 2,
        p: vec![vec![false, true]],
        q: vec![vec![false, true]],
        out_a: vec![false; 4],
    };
    assert!(matches!(
        privacy_audit_and(&wrong, &and_table()),
        Err(AuditError::AndIncorrect { .. })
    ));
}

#[test]
fn compiled_and_is_private() {
    let f = ip_table(2);
    let p = and_from_oneway(&synth_oneway(&f, true)).unwrap();
    privacy_audit_and(&p, &f).unwrap();
}

#[test]
fn unmasked_ot_is_rejected() {
    // Alice offers x on both wires, so Bob learns x.
    let plain = OtProtocol {
        x_size: 2,
        y_size: 2,
        randomness: vec![Prob::from_integer(1)],
        calls: vec![OtCall {
            s0: vec![false, true],
            s1: vec![false, true],
            choice: vec![false, true],
        }],
        out_a: vec![false; 2],
        out_b: vec![false, true, false, true],
    };
    let any = ProtocolMixture::single(Protocol::Ot(plain));
    assert!(matches!(
        privacy_audit_ot(&any),
        Err(AuditError::OtLeak { .. })
    ));
}

#[test]
fn compiled_ot_is_private() {
    let p = ProtocolMixture::single(Protocol::Ot(
        ordered_to_ot(&disj_det_protocol(2).unwrap()).unwrap(),
    ));
    privacy_audit_ot(&p).unwrap();
}

#[test]
fn nlb_protocols_do_not_signal() {
    nonsignaling_audit(&ProtocolMixture::single(
        disj_det_protocol(3).unwrap().into(),
    ))
    .unwrap();
    nonsignaling_audit(&disj_rand_parallel(2, Prob::new(1, 3)).unwrap().into_any()).unwrap();
    let ot = ProtocolMixture::single(Protocol::Ot(
        ordered_to_ot(&disj_det_protocol(1).unwrap()).unwrap(),
    ));
    assert!(matches!(
        nonsignaling_audit(&ot),
        Err(AuditError::WrongKind(_))
    ));
}

#[test]
fn one_sided_disjointness_error() {
    let f = disj_table(3);
    let e = error_profile(
        &disj_rand_parallel(3, Prob::from_integer(0))
            .unwrap()
            .into_any(),
        &f,
    )
    .unwrap();
    for x in 0..8 {
        for y in 0..8 {
            let want = if f.eval(x, y) {
                Prob::new(1, 2)
            } else {
                Prob::from_integer(0)
            };
            assert_eq!(e.get(x, y), want, "({x},{y})");
        }
    }
}

#[test]
fn disj_rand_success_rates() {
    for (num, den) in [(1, 3), (1, 4), (2, 5)] {
        let p = Prob::new(num, den);
        let f = disj_table(2);
        let e = error_profile(&disj_rand_parallel(2, p).unwrap().into_any(), &f).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                let success = Prob::from_integer(1) - e.get(x, y);
                let want = if f.eval(x, y) {
                    (Prob::from_integer(1) + p) / 2
                } else {
                    Prob::from_integer(1) - p
                };
                assert_eq!(success, want);
            }
        }
    }
}

#[test]
fn future_box_read_is_a_violation() {
    let mut p: OrderedNlbProtocol = disj_det_protocol(2).unwrap();
    p.steps_a[1] = StepTable::from_fn(4, vec![2], |_, _| false);
    let v = validate(&Protocol::Ordered(p)).unwrap_err();
    assert!(v.iter().any(|v| v.kind == ViolationKind::ReadsFutureBox));
}
