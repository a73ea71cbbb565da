mod common;

use nlbox_core::compile::{
    and_from_oneway, ordered_to_ot, synth_oneway, synth_rank, twoway_to_parallel,
};
use nlbox_core::library::{disj_det_protocol, disj_rand_parallel, ip_protocol};
use nlbox_core::protocol::{
    exec_exact, write_any, AnyProtocol, OneWayProtocol, Protocol, ProtocolFile, ProtocolMixture,
};
use nlbox_core::seed::rng_from_seed;
use nlbox_core::Prob;

fn round_trip(p: AnyProtocol) {
    let text = write_any(&p);
    let parsed = ProtocolFile::parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(parsed.protocol, p, "{text}");
    assert_eq!(write_any(&parsed.protocol), text);
}

fn one(p: impl Into<Protocol>) -> AnyProtocol {
    ProtocolMixture::single(p.into())
}

#[test]
fn every_kind_round_trips() {
    let mut rng = rng_from_seed(41);
    let f = common::random_function(2, 2, &mut rng);
    let ow = synth_oneway(&f, true);
    let tree = common::random_tree(3, 4, 2, &mut rng);
    round_trip(one(synth_rank(&f)));
    round_trip(one(common::obfuscate(&synth_rank(&f), &mut rng)));
    round_trip(one(disj_det_protocol(2).unwrap()));
    round_trip(one(disj_det_protocol(2).unwrap().to_general()));
    round_trip(one(ow.clone()));
    round_trip(one(tree.clone()));
    round_trip(one(twoway_to_parallel(&tree).unwrap()));
    round_trip(one(
        ordered_to_ot(&ip_protocol(2).unwrap().to_ordered()).unwrap()
    ));
    round_trip(one(and_from_oneway(&ow).unwrap()));
    round_trip(disj_rand_parallel(3, Prob::new(1, 3)).unwrap().into_any());
}

#[test]
fn odd_domain_sizes() {
    let p = OneWayProtocol {
        x_size: 3,
        y_size: 5,
        bits: 1,
        msg: vec![0, 1, 1],
        out_a: vec![true, false, true],
        out_b: vec![vec![false, true, true, false, true], vec![true; 5]],
    };
    let text = write_any(&one(p.clone()));
    assert!(text.starts_with("protocol oneway xs=3 ys=5"), "{text}");
    round_trip(one(p));
}

#[test]
fn provenance_survives() {
    let f = ProtocolFile::with_provenance(
        one(ip_protocol(1).unwrap()),
        "synth-rank source=sha256:00ff",
    );
    let back = ProtocolFile::parse(&f.to_text()).unwrap();
    assert_eq!(back, f);
}

#[test]
fn parsed_protocol_executes_identically() {
    let src = disj_rand_parallel(2, Prob::new(1, 5)).unwrap().into_any();
    let back = ProtocolFile::parse(&write_any(&src)).unwrap().protocol;
    for x in 0..4 {
        for y in 0..4 {
            assert_eq!(
                exec_exact(&src, x, y).unwrap(),
                exec_exact(&back, x, y).unwrap()
            );
        }
    }
}

#[test]
fn parse_errors_carry_lines() {
    let cases = [
        ("", 0),
        ("protocol martian nx=1 ny=1 t=0\n", 1),
        ("protocol parallel-xor nx=1 ny=1 t=1\npbox 1: 0x\nqbox 1: 01\nlocalA: 00\nlocalB: 00\n", 2),
        ("protocol parallel-xor nx=1 ny=1 t=1\npbox 1: 01\nqbox 1: 01\nlocalA: 00\nlocalB: 00\nbogus: 1\n", 6),
    ];
    for (text, line) in cases {
        let e = ProtocolFile::parse(text).unwrap_err();
        if line > 0 {
            assert_eq!(e.line, line, "{text:?}: {e}");
        }
    }
}

#[test]
fn mixture_weights_must_parse() {
    let text = "mix 1 x/2\nprotocol parallel-xor nx=1 ny=1 t=0\nlocalA: 00\nlocalB: 00\n";
    assert!(ProtocolFile::parse(text).is_err());
}
