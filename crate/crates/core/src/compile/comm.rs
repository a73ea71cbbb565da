use super::error::{ensure, CompileError};
use crate::protocol::{validate, OneWayProtocol, ParallelXorProtocol, Protocol, Table, TwoWayTree};

/// Largest tree depth accepted by [`twoway_to_parallel`].
pub const MAX_TREE_DEPTH: usize = 8;

/// One box per nonzero message `m`: Alice inputs `[msg(x) = m]`, Bob inputs
/// `B(m, y) ⊕ B(0, y)`; local terms `A(x)` and `B(0, y)`. Uses `2^t − 1`
/// boxes for `t`-bit messages.
pub fn oneway_to_parallel(p: &OneWayProtocol) -> Result<ParallelXorProtocol, CompileError> {
    validate(&Protocol::OneWay(p.clone())).map_err(CompileError::Invalid)?;
    ensure("message bits", p.bits, 20)?;
    let base = &p.out_b[0];
    let mut pa = Vec::new();
    let mut qb = Vec::new();
    for m in 1..1usize << p.bits {
        pa.push(p.msg.iter().map(|&mx| mx == m).collect());
        qb.push(p.out_b[m].iter().zip(base).map(|(a, b)| a ^ b).collect());
    }
    Ok(ParallelXorProtocol {
        x_size: p.x_size,
        y_size: p.y_size,
        p: pa,
        q: qb,
        local_a: p.out_a.clone(),
        local_b: base.clone(),
    })
}

/// Families `A_i(T, ·)` for one level, stored as `fam[i][T · size + input]`.
struct Level {
    prefixes: usize,
    a: Vec<Table>,
    b: Vec<Table>,
}

fn speaker_split(
    speak: &[Table],
    listen: &[Table],
    bit: impl Fn(usize, usize) -> bool,
    prefixes: usize,
    speak_size: usize,
    listen_size: usize,
) -> (Vec<Table>, Vec<Table>) {
    // `speak` and `listen` are the level-k families; the result is level k−1.
    let n = speak.len();
    let mut s2 = vec![vec![false; prefixes * speak_size]; 2 * n];
    let mut l2 = vec![vec![false; prefixes * listen_size]; 2 * n];
    for t in 0..prefixes {
        let (t0, t1) = (t << 1, t << 1 | 1);
        for v in 0..speak_size {
            let c = bit(t, v);
            let child = if c { t1 } else { t0 };
            for i in 0..n {
                let own = speak[i][child * speak_size + v];
                s2[i][t * speak_size + v] = own;
                s2[i + n][t * speak_size + v] = if i == 0 { c } else { own & c };
            }
        }
        for w in 0..listen_size {
            for i in 0..n {
                let b0 = listen[i][t0 * listen_size + w];
                let b1 = listen[i][t1 * listen_size + w];
                l2[i][t * listen_size + w] = b0;
                l2[i + n][t * listen_size + w] = b0 ^ b1;
            }
        }
    }
    (s2, l2)
}

/// Compiles a depth-`t` protocol tree into at most `2^t − 1` parallel boxes
/// by peeling one round at a time from the leaves towards the root. At each
/// round the listener cannot know the bit `c`, so every family term
/// `A_i(Tc) · B_i(Tc)` is split as `A_i(Tc) · B_i(T0) ⊕ (c · A_i(Tc)) ·
/// (B_i(T0) ⊕ B_i(T1))`, doubling the family count.
pub fn twoway_to_parallel(p: &TwoWayTree) -> Result<ParallelXorProtocol, CompileError> {
    validate(&Protocol::TwoWay(p.clone())).map_err(CompileError::Invalid)?;
    ensure("tree depth", p.depth, MAX_TREE_DEPTH)?;
    let (xs, ys) = (p.x_size, p.y_size);
    let leaves = 1usize << p.depth;
    let mut level = Level {
        prefixes: leaves,
        a: vec![p.out_a.concat()],
        b: vec![p.out_b.concat()],
    };
    for k in (0..p.depth).rev() {
        let prefixes = level.prefixes / 2;
        let dir = &p.alice_speaks[k];
        // Mixed directions within one round are handled prefix by prefix.
        let all_alice = dir.iter().all(|&d| d);
        let all_bob = dir.iter().all(|&d| !d);
        let (a, b) = if all_alice {
            speaker_split(&level.a, &level.b, |t, x| p.bit[k][t][x], prefixes, xs, ys)
        } else if all_bob {
            let (b, a) = speaker_split(&level.b, &level.a, |t, y| p.bit[k][t][y], prefixes, ys, xs);
            (a, b)
        } else {
            let (aa, ab) = speaker_split(
                &level.a,
                &level.b,
                |t, x| dir[t] && p.bit[k][t][x],
                prefixes,
                xs,
                ys,
            );
            let (bb, ba) = speaker_split(
                &level.b,
                &level.a,
                |t, y| !dir[t] && p.bit[k][t][y],
                prefixes,
                ys,
                xs,
            );
            let pick = |alice_tab: &Vec<Table>, bob_tab: &Vec<Table>, size: usize| -> Vec<Table> {
                alice_tab
                    .iter()
                    .zip(bob_tab)
                    .map(|(ta, tb)| {
                        (0..prefixes * size)
                            .map(|j| if dir[j / size] { ta[j] } else { tb[j] })
                            .collect()
                    })
                    .collect()
            };
            (pick(&aa, &ba, xs), pick(&ab, &bb, ys))
        };
        level = Level { prefixes, a, b };
    }
    let mut a = level.a.into_iter();
    let mut b = level.b.into_iter();
    let local_a = a.next().expect("local family");
    let local_b = b.next().expect("local family");
    Ok(ParallelXorProtocol {
        x_size: xs,
        y_size: ys,
        p: a.collect(),
        q: b.collect(),
        local_a,
        local_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_via_one_message() {
        let p = OneWayProtocol {
            x_size: 2,
            y_size: 2,
            bits: 1,
            msg: vec![0, 1],
            out_a: vec![false, false],
            out_b: vec![vec![false, false], vec![false, true]],
        };
        let c = oneway_to_parallel(&p).unwrap();
        assert_eq!(c.p, vec![vec![false, true]]);
        assert_eq!(c.q, vec![vec![false, true]]);
        assert!(c.is_strict());
    }

    #[test]
    fn one_round_tree() {
        // Alice sends x; both output x·y on their side (Bob outputs c·y).
        let t = TwoWayTree {
            x_size: 2,
            y_size: 2,
            depth: 1,
            alice_speaks: vec![vec![true]],
            bit: vec![vec![vec![false, true]]],
            out_a: vec![vec![false; 2], vec![false; 2]],
            out_b: vec![vec![false, false], vec![false, true]],
        };
        let c = twoway_to_parallel(&t).unwrap();
        assert!(c.boxes() <= 1);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(c.parity_fn(x, y), x & y == 1);
            }
        }
    }
}
