#![allow(dead_code)]

use nlbox_core::protocol::{ParallelProtocol, ParallelXorProtocol, TwoWayTree};
use nlbox_core::TruthTable;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_table(len: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    (0..len).map(|_| rng.gen()).collect()
}

pub fn random_function(nx: u32, ny: u32, rng: &mut ChaCha8Rng) -> TruthTable {
    let bits: u64 = rng.gen();
    let cells = 1u32 << (nx + ny);
    let mask = if cells >= 64 {
        u64::MAX
    } else {
        (1u64 << cells) - 1
    };
    TruthTable::from_index(nx, ny, bits & mask)
}

pub fn random_tree(depth: usize, xs: usize, ys: usize, rng: &mut ChaCha8Rng) -> TwoWayTree {
    let mut alice_speaks = Vec::new();
    let mut bit = Vec::new();
    for k in 0..depth {
        let dirs: Vec<bool> = (0..1usize << k).map(|_| rng.gen()).collect();
        let tables = dirs
            .iter()
            .map(|&a| random_table(if a { xs } else { ys }, rng))
            .collect();
        alice_speaks.push(dirs);
        bit.push(tables);
    }
    TwoWayTree {
        x_size: xs,
        y_size: ys,
        depth,
        alice_speaks,
        bit,
        out_a: (0..1usize << depth)
            .map(|_| random_table(xs, rng))
            .collect(),
        out_b: (0..1usize << depth)
            .map(|_| random_table(ys, rng))
            .collect(),
    }
}

/// Hides an exact XOR protocol: adds a duplicate of one box, two dead boxes
/// whose outcomes enter the outputs through a product term, random local
/// terms, and drops a random subset of boxes from both XORs.
pub fn obfuscate(src: &ParallelXorProtocol, rng: &mut ChaCha8Rng) -> ParallelProtocol {
    let (xs, ys) = (src.x_size, src.y_size);
    let mut p = src.p.clone();
    let mut q = src.q.clone();
    if !p.is_empty() {
        let i = rng.gen_range(0..p.len());
        p.push(p[i].clone());
        q.push(q[i].clone());
    }
    let live = p.len();
    for _ in 0..2 {
        if rng.gen() {
            p.push(vec![false; xs]);
            q.push(random_table(ys, rng));
        } else {
            p.push(random_table(xs, rng));
            q.push(vec![false; ys]);
        }
    }
    let t = p.len();
    let keep: u64 = rng.gen::<u64>() & ((1u64 << live) - 1);
    let dead = (1u64 << live) | (1u64 << (live + 1));
    let la = random_table(xs, rng);
    let lb = random_table(ys, rng);
    let out = |local: &[bool], v: usize, o: u64| {
        local[v] ^ ((o & keep).count_ones() & 1 == 1) ^ (o & dead == dead)
    };
    let out_a = (0..xs)
        .flat_map(|x| (0..1u64 << t).map(move |a| (x, a)))
        .map(|(x, a)| out(&la, x, a))
        .collect();
    let out_b = (0..ys)
        .flat_map(|y| (0..1u64 << t).map(move |b| (y, b)))
        .map(|(y, b)| out(&lb, y, b))
        .collect();
    ParallelProtocol {
        x_size: xs,
        y_size: ys,
        p,
        q,
        out_a,
        out_b,
    }
}
