use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nlbox_core::protocol::{
    write_any, AndProtocol, Protocol, ProtocolFile, ProtocolMixture, TwoWayTree,
};
use tempfile::TempDir;

fn nlbox(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlbox"))
        .args(args)
        .current_dir(dir)
        .env_remove("NLBOX_LIMIT_T")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(o: &Output, key: &str) -> String {
    let prefix = format!("{key}: ");
    stdout(o)
        .lines()
        .find_map(|l| {
            l.trim_start_matches("# ")
                .strip_prefix(&prefix)
                .map(str::to_string)
        })
        .unwrap_or_else(|| panic!("no {key} in\n{}", stdout(o)))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn tmp() -> TempDir {
    tempfile::tempdir().unwrap()
}

const AND: &str = "1 1\n00\n01\n";

/// Depth-2 tree on 1-bit inputs: Alice sends x, Bob replies x∧y, both output
/// the reply on Alice's side.
fn depth2_tree() -> TwoWayTree {
    TwoWayTree {
        x_size: 2,
        y_size: 2,
        depth: 2,
        alice_speaks: vec![vec![true], vec![false, false]],
        bit: vec![
            vec![vec![false, true]],
            vec![vec![false, false], vec![false, true]],
        ],
        out_a: (0..4).map(|t| vec![t & 1 == 1; 2]).collect(),
        out_b: vec![vec![false; 2]; 4],
    }
}

#[test]
fn rank_of_and_is_one() {
    let d = tmp();
    write(d.path(), "and.tt", AND);
    let o = nlbox(&["rank", "-f", "and.tt"], d.path());
    assert!(o.status.success());
    assert_eq!(value(&o, "rank"), "1");
}

#[test]
fn factorize_reconstructs() {
    let d = tmp();
    write(d.path(), "ip2.tt", "2 2\n0000\n0101\n0011\n0110\n");
    let o = nlbox(&["factorize", "-f", "ip2.tt"], d.path());
    assert!(o.status.success());
    assert_eq!(value(&o, "rank"), "2");
    assert_eq!(value(&o, "reconstructs"), "true");
}

#[test]
fn chsh_values() {
    let d = tmp();
    let o = nlbox(&["lib", "chsh"], d.path());
    assert!(o.status.success());
    assert_eq!(value(&o, "classical_optimum"), "3/4");
    assert_eq!(value(&o, "nlb_success"), "1");
}

#[test]
fn twoway_compile_then_exec() {
    let d = tmp();
    let tree = ProtocolMixture::single(Protocol::TwoWay(depth2_tree()));
    write(d.path(), "t2.tw", &write_any(&tree));
    write(d.path(), "and.tt", AND);
    let o = nlbox(
        &["compile", "--from", "twoway", "-i", "t2.tw", "-o", "t2.nlb"],
        d.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(value(&o, "target_size").parse::<usize>().unwrap() <= 3);
    assert_eq!(value(&o, "within_bound"), "true");
    let o = nlbox(
        &["exec", "-i", "t2.nlb", "-f", "and.tt", "--exact"],
        d.path(),
    );
    assert!(o.status.success());
    assert_eq!(value(&o, "max_error"), "0");
}

#[test]
fn emitted_protocols_round_trip() {
    let d = tmp();
    let o = nlbox(&["lib", "disj-rand", "-n", "2", "-p", "1/3"], d.path());
    assert!(o.status.success());
    let text = stdout(&o);
    let parsed = ProtocolFile::parse(&text).unwrap();
    assert_eq!(
        parsed
            .provenance
            .as_deref()
            .map(|p| p.starts_with("lib-disj-rand")),
        Some(true)
    );
    let again = ProtocolFile::parse(&parsed.to_text()).unwrap();
    assert_eq!(again, parsed);
    assert_eq!(value(&o, "max_error"), "1/3");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let d = tmp();
    let args = ["rt", "--dim", "5", "--trials", "2000", "--seed", "7"];
    let a = nlbox(&args, d.path());
    let b = nlbox(&args, d.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(value(&a, "coupled_violations"), "0");

    nlbox(&["lib", "ip", "-n", "2", "-o", "ip.p"], d.path());
    let s = ["exec", "-i", "ip.p", "--samples", "200", "--seed", "3"];
    let a = nlbox(&s, d.path());
    assert_eq!(a.stdout, nlbox(&s, d.path()).stdout);
    assert_eq!(value(&a, "max_error_estimate"), "0");
}

#[test]
fn sampling_requires_seed() {
    let d = tmp();
    nlbox(&["lib", "ip", "-n", "1", "-o", "ip.p"], d.path());
    let o = nlbox(&["exec", "-i", "ip.p", "--samples", "10"], d.path());
    assert_eq!(o.status.code(), Some(1));
    let o = nlbox(&["rt", "--dim", "3"], d.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ot_pipeline_passes_privacy() {
    let d = tmp();
    nlbox(&["lib", "disj-det", "-n", "2", "-o", "d.p"], d.path());
    let o = nlbox(
        &[
            "compile",
            "--from",
            "ordered-to-ot",
            "-i",
            "d.p",
            "-o",
            "ot.p",
        ],
        d.path(),
    );
    assert!(o.status.success());
    let o = nlbox(&["audit", "-i", "ot.p", "--privacy-ot"], d.path());
    assert!(o.status.success());
    assert_eq!(value(&o, "verdict"), "pass");
    let o = nlbox(&["audit", "-i", "d.p", "--nonsignaling"], d.path());
    assert_eq!(value(&o, "verdict"), "pass");
}

#[test]
fn secure_and_round_trip() {
    let d = tmp();
    let ip = "2 2\n0000\n0101\n0011\n0110\n";
    write(d.path(), "ip.tt", ip);
    let oneway = nlbox_core::compile::synth_oneway(&ip.parse().unwrap(), true);
    write(
        d.path(),
        "ow.p",
        &write_any(&ProtocolMixture::single(Protocol::OneWay(oneway))),
    );
    let o = nlbox(
        &[
            "compile",
            "--from",
            "and-from-oneway",
            "-i",
            "ow.p",
            "-o",
            "and.p",
        ],
        d.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = nlbox(
        &["audit", "-i", "and.p", "-f", "ip.tt", "--privacy-and"],
        d.path(),
    );
    assert_eq!(value(&o, "verdict"), "pass");
    let o = nlbox(
        &[
            "compile",
            "--from",
            "oneway-from-and",
            "-i",
            "and.p",
            "-f",
            "ip.tt",
            "-o",
            "back.p",
        ],
        d.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(value(&o, "target_size"), "2");
}

#[test]
fn leaky_and_exits_3() {
    let d = tmp();
    write(d.path(), "and.tt", AND);
    // The second gate hands Alice y even when x = 0.
    let leaky = AndProtocol {
        x_size: 2,
        y_size: 2,
        p: vec![vec![false, true], vec![true, true]],
        q: vec![vec![false, true], vec![false, true]],
        out_a: (0..8).map(|i| i & 1 == 1).collect(),
    };
    write(
        d.path(),
        "leaky.p",
        &write_any(&ProtocolMixture::single(Protocol::And(leaky))),
    );
    let o = nlbox(
        &["audit", "-i", "leaky.p", "-f", "and.tt", "--privacy-and"],
        d.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(value(&o, "verdict"), "fail");
}

#[test]
fn malformed_protocol_exits_2() {
    let d = tmp();
    write(
        d.path(),
        "bad.p",
        "protocol parallel-xor nx=1 ny=1 t=1\npbox 1: 01\n",
    );
    let o = nlbox(&["exec", "-i", "bad.p", "--exact"], d.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn limit_exits_4() {
    let d = tmp();
    nlbox(&["lib", "disj-det", "-n", "2", "-o", "d.p"], d.path());
    let o = Command::new(env!("CARGO_BIN_EXE_nlbox"))
        .args(["exec", "-i", "d.p", "--exact"])
        .current_dir(d.path())
        .env("NLBOX_LIMIT_T", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    let o = nlbox(&["lib", "ip", "-n", "9"], d.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn unknown_subcommand_exits_1() {
    let d = tmp();
    assert_eq!(nlbox(&["frobnicate"], d.path()).status.code(), Some(1));
}

#[test]
fn synth_and_normalize() {
    let d = tmp();
    write(d.path(), "ip.tt", "2 2\n0000\n0101\n0011\n0110\n");
    let o = nlbox(
        &["synth", "-f", "ip.tt", "--method", "vandam", "-o", "v.p"],
        d.path(),
    );
    assert!(o.status.success());
    assert_eq!(value(&o, "exact"), "true");
    let o = nlbox(
        &[
            "compile",
            "-i",
            "v.p",
            "-f",
            "ip.tt",
            "--independence-reduce",
            "--xor-normalize",
        ],
        d.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(value(&o, "max_error"), "0");
    // Van Dam's boxes are independent product vectors, so nothing is dropped.
    assert_eq!(value(&o, "output_size"), "3");
    assert_eq!(value(&o, "output_kind"), "parallel-xor");
}

#[test]
fn epsrank_values() {
    let d = tmp();
    write(d.path(), "id.tt", "1 1\n10\n01\n");
    let o = nlbox(&["epsrank", "-f", "id.tt", "--eps", "0"], d.path());
    assert_eq!(value(&o, "eps_rank"), "2");
    let o = nlbox(&["epsrank", "-f", "id.tt", "--eps", "1/2"], d.path());
    assert_eq!(value(&o, "eps_rank"), "1");
    write(d.path(), "c.corr", "corr 2 2\n1/2 1/2\n1/2 1/2\n");
    let o = nlbox(&["epsrank", "--corr", "c.corr", "--eps", "0"], d.path());
    assert!(o.status.success());
    assert_eq!(value(&o, "eps_rank"), "1");
}

#[test]
fn sweep_passes() {
    let d = tmp();
    let o = nlbox(&["sweep"], d.path());
    assert!(o.status.success());
    assert_eq!(value(&o, "functions"), "65536");
    assert_eq!(value(&o, "failures"), "0");
}
