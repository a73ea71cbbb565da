use nlbox_core::library::{
    chsh_classical_optimum, chsh_nlb_success, disj_det_protocol, disj_table, ip_protocol, ip_table,
    vandam_protocol, ChshStrategy, LibraryError,
};
use nlbox_core::protocol::error_profile;
use nlbox_core::{Prob, TruthTable};

#[test]
fn ip_uses_n_boxes() {
    for n in 1..=6 {
        let p = ip_protocol(n).unwrap();
        assert_eq!(p.boxes(), n);
        assert_eq!(ip_table(n).rank(), n);
        assert!(error_profile(&p, &ip_table(n)).unwrap().is_exact());
    }
    assert_eq!(
        ip_protocol(9).unwrap_err(),
        LibraryError::Size { n: 9, max: 8 }
    );
}

#[test]
fn disj_rank_is_two_to_n_minus_one() {
    for n in 1..=5 {
        assert_eq!(disj_table(n).rank(), (1 << n) - 1, "n={n}");
    }
}

#[test]
fn disj_det_sizes() {
    let counts: Vec<usize> = (1..=6)
        .map(|n| disj_det_protocol(n).unwrap().boxes())
        .collect();
    assert_eq!(counts, [1, 4, 7, 10, 13, 16]);
    assert!(disj_det_protocol(7).is_err());
}

#[test]
fn vandam_uses_one_box_per_nonzero_row() {
    let f: TruthTable = "2 1\n00\n01\n11\n10\n".parse().unwrap();
    let p = vandam_protocol(&f);
    assert_eq!(p.boxes(), 3);
    assert!(error_profile(&p, &f).unwrap().is_exact());
}

#[test]
fn chsh() {
    let (best, _) = chsh_classical_optimum();
    assert_eq!(best, Prob::new(3, 4));
    assert!(ChshStrategy::all().all(|s| s.success() <= best));
    assert_eq!(ChshStrategy::all().count(), 16);
    assert_eq!(chsh_nlb_success().unwrap(), Prob::from_integer(1));
}
