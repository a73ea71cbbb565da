use super::error::{ensure, CompileError};
use crate::gf2::{anf_coefficients, BitMatrix};
use crate::protocol::{
    validate, GeneralNlbProtocol, OrderedNlbProtocol, ParallelProtocol, ParallelXorProtocol,
    Protocol, StepTable,
};

/// Largest box count for which output tables over `2^t` are built.
pub const MAX_TABLE_BOXES: usize = 16;

fn products(p: &ParallelProtocol, x: usize, y: usize) -> u64 {
    p.p.iter()
        .zip(&p.q)
        .enumerate()
        .fold(0, |acc, (i, (pt, qt))| acc | ((pt[x] & qt[y]) as u64) << i)
}

/// True when `A(x, 𝐚) ⊕ B(y, 𝐚 ⊕ 𝐩𝐪)` does not depend on `𝐚`.
pub fn is_exact(p: &ParallelProtocol) -> bool {
    let t = p.boxes();
    (0..p.x_size).all(|x| {
        (0..p.y_size).all(|y| {
            let pq = products(p, x, y);
            let v0 = p.output_a(x, 0) ^ p.output_b(y, pq);
            (1..1u64 << t).all(|a| p.output_a(x, a) ^ p.output_b(y, a ^ pq) == v0)
        })
    })
}

fn check_parallel(p: &ParallelProtocol) -> Result<(), CompileError> {
    validate(&Protocol::Parallel(p.clone())).map_err(CompileError::Invalid)?;
    ensure("boxes", p.boxes(), MAX_TABLE_BOXES)
}

/// Inserts bit `v` at position `k` of `rest`.
fn insert_bit(rest: u64, k: usize, v: bool) -> u64 {
    let low = rest & ((1 << k) - 1);
    let high = rest >> k;
    (high << (k + 1)) | ((v as u64) << k) | low
}

/// Removes boxes whose products `p_i(x) q_i(y)` are linearly dependent
/// modulo separable functions `α(x) ⊕ β(y)`, until the remaining products
/// are independent in that quotient. For a dependency `⊕_{i∈S} p_i q_i = α ⊕ β`
/// and `k ∈ S`, the outcomes of box `k` are replaced by
/// `a_k := α(x) ⊕ ⊕_{i∈S∖k} a_i` and `b_k := β(y) ⊕ ⊕_{i∈S∖k} b_i`, which
/// still satisfy `a_k ⊕ b_k = p_k q_k`.
///
/// The computed function is unchanged on every branch; the joint law of the
/// two outputs may change because box `k` no longer contributes fresh
/// randomness.
pub fn independence_reduce(p: &ParallelProtocol) -> Result<ParallelProtocol, CompileError> {
    check_parallel(p)?;
    if !is_exact(p) {
        return Err(CompileError::NotExact);
    }
    let mut cur = p.clone();
    let (xs, ys) = (p.x_size, p.y_size);
    loop {
        let t = cur.boxes();
        // (p(x) ⊕ p(0)) · (q(y) ⊕ q(0)) kills exactly the separable part.
        let quotient = BitMatrix::from_fn(t, xs * ys, |i, j| {
            let (x, y) = (j / ys, j % ys);
            (cur.p[i][x] ^ cur.p[i][0]) & (cur.q[i][y] ^ cur.q[i][0])
        });
        let Some(set) = quotient.first_dependency() else {
            return Ok(cur);
        };
        let k = *set.iter().max().expect("nonempty dependency");
        let others: u64 = set.iter().filter(|&&i| i != k).fold(0, |m, &i| m | 1 << i);
        let w = |x: usize, y: usize| {
            set.iter()
                .fold(false, |acc, &i| acc ^ (cur.p[i][x] & cur.q[i][y]))
        };
        let alpha: Vec<bool> = (0..xs).map(|x| w(x, 0)).collect();
        let beta: Vec<bool> = (0..ys).map(|y| w(0, y) ^ w(0, 0)).collect();

        let rest = t - 1;
        let expand = |own: bool, outcomes: u64| {
            // `outcomes` indexes the remaining boxes; `others` uses old labels.
            let full = insert_bit(outcomes, k, false);
            let v = own ^ ((full & others).count_ones() & 1 == 1);
            insert_bit(outcomes, k, v)
        };
        let out_a = (0..xs)
            .flat_map(|x| (0..1u64 << rest).map(move |a| (x, a)))
            .map(|(x, a)| cur.output_a(x, expand(alpha[x], a)))
            .collect();
        let out_b = (0..ys)
            .flat_map(|y| (0..1u64 << rest).map(move |b| (y, b)))
            .map(|(y, b)| cur.output_b(y, expand(beta[y], b)))
            .collect();
        let mut pp = cur.p.clone();
        let mut qq = cur.q.clone();
        pp.remove(k);
        qq.remove(k);
        cur = ParallelProtocol {
            x_size: xs,
            y_size: ys,
            p: pp,
            q: qq,
            out_a,
            out_b,
        };
    }
}

/// Turns an exact parallel protocol into a strict XOR protocol with at most
/// two extra boxes. After independence reduction every output's ANF over the
/// box outcomes must be affine with the same coefficient `C_i` on `a_i` and
/// `b_i` for all inputs; boxes with `C_i = 1` are kept and the free terms are
/// folded into boxes `(A_∅(x), 1)` and `(1, B_∅(y))`, each omitted when its
/// term is identically zero.
pub fn xor_normalize_parallel(p: &ParallelProtocol) -> Result<ParallelXorProtocol, CompileError> {
    let r = match independence_reduce(p) {
        Err(CompileError::NotExact) => {
            return Err(CompileError::ClaimsViolated(
                "protocol does not compute a function exactly".into(),
            ))
        }
        other => other?,
    };
    let t = r.boxes();
    let (xs, ys) = (r.x_size, r.y_size);
    let anf_rows = |out: &[bool], n: usize| -> Vec<Vec<bool>> {
        (0..n)
            .map(|v| anf_coefficients(&out[v << t..(v + 1) << t]))
            .collect()
    };
    let ca = anf_rows(&r.out_a, xs);
    let cb = anf_rows(&r.out_b, ys);
    for (side, rows) in [("A", &ca), ("B", &cb)] {
        for (v, c) in rows.iter().enumerate() {
            if let Some(s) = (0..1usize << t).find(|&s| s.count_ones() > 1 && c[s]) {
                return Err(CompileError::ClaimsViolated(format!(
                    "{side}_S ≠ 0 for |S| = {} at input {v}",
                    s.count_ones()
                )));
            }
        }
    }
    let mut keep = Vec::new();
    for i in 0..t {
        let c = ca[0][1 << i];
        if ca.iter().any(|r| r[1 << i] != c) || cb.iter().any(|r| r[1 << i] != c) {
            return Err(CompileError::ClaimsViolated(format!(
                "linear coefficients of box {} are not one common constant",
                i + 1
            )));
        }
        if c {
            keep.push(i);
        }
    }
    let free_a: Vec<bool> = ca.iter().map(|r| r[0]).collect();
    let free_b: Vec<bool> = cb.iter().map(|r| r[0]).collect();
    let mut pp: Vec<_> = keep.iter().map(|&i| r.p[i].clone()).collect();
    let mut qq: Vec<_> = keep.iter().map(|&i| r.q[i].clone()).collect();
    if free_a.iter().any(|&b| b) {
        pp.push(free_a);
        qq.push(vec![true; ys]);
    }
    if free_b.iter().any(|&b| b) {
        pp.push(vec![true; xs]);
        qq.push(free_b);
    }
    Ok(ParallelXorProtocol::strict(xs, ys, pp, qq))
}

fn parity(v: u64) -> bool {
    v.count_ones() & 1 == 1
}

fn fold_steps(out: &StepTable, domain: usize, t: usize) -> (StepTable, StepTable) {
    let all: Vec<usize> = (0..t).collect();
    let mask = if t == 0 { 0 } else { u64::MAX >> (64 - t) };
    let fold = StepTable::from_fn(domain, all, |v, o| out.eval(v, o) ^ parity(o & mask));
    (fold, StepTable::constant(domain, true))
}

fn xor_output(domain: usize, t: usize) -> StepTable {
    StepTable::from_fn(domain, (0..t).collect(), |_, o| parity(o))
}

/// Appends boxes `(A(x, 𝐚) ⊕ ⊕a_i, 1)` and `(1, B(y, 𝐛) ⊕ ⊕b_i)`; both
/// outputs become the XOR of all `t + 2` outcomes.
pub fn xor_normalize_ordered(p: &OrderedNlbProtocol) -> Result<OrderedNlbProtocol, CompileError> {
    validate(&Protocol::Ordered(p.clone())).map_err(CompileError::Invalid)?;
    let t = p.boxes();
    ensure("boxes", t + 2, MAX_TABLE_BOXES + 2)?;
    let (fold_a, one_a) = fold_steps(&p.out_a, p.x_size, t);
    let (fold_b, one_b) = fold_steps(&p.out_b, p.y_size, t);
    let mut steps_a = p.steps_a.clone();
    let mut steps_b = p.steps_b.clone();
    steps_a.extend([fold_a, one_a]);
    steps_b.extend([one_b, fold_b]);
    Ok(OrderedNlbProtocol {
        x_size: p.x_size,
        y_size: p.y_size,
        steps_a,
        steps_b,
        out_a: xor_output(p.x_size, t + 2),
        out_b: xor_output(p.y_size, t + 2),
    })
}

/// As [`xor_normalize_ordered`]; both players use the new boxes last.
pub fn xor_normalize_general(p: &GeneralNlbProtocol) -> Result<GeneralNlbProtocol, CompileError> {
    validate(&Protocol::General(p.clone())).map_err(CompileError::Invalid)?;
    let t = p.boxes;
    ensure("boxes", t + 2, MAX_TABLE_BOXES + 2)?;
    let (fold_a, one_a) = fold_steps(&p.out_a, p.x_size, t);
    let (fold_b, one_b) = fold_steps(&p.out_b, p.y_size, t);
    let mut g = p.clone();
    g.boxes = t + 2;
    g.order_a.extend([t, t + 1]);
    g.order_b.extend([t, t + 1]);
    g.steps_a.extend([fold_a, one_a]);
    g.steps_b.extend([one_b, fold_b]);
    g.out_a = xor_output(p.x_size, t + 2);
    g.out_b = xor_output(p.y_size, t + 2);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_insertion() {
        assert_eq!(insert_bit(0b11, 1, false), 0b101);
        assert_eq!(insert_bit(0b11, 0, true), 0b111);
        assert_eq!(insert_bit(0b10, 2, true), 0b110);
    }

    #[test]
    fn duplicate_boxes_collapse() {
        let x = vec![false, true];
        let p = ParallelXorProtocol::strict(2, 2, vec![x.clone(), x.clone()], vec![x.clone(), x])
            .to_parallel();
        let r = independence_reduce(&p).unwrap();
        assert_eq!(r.boxes(), 1);
        let n = xor_normalize_parallel(&p).unwrap();
        assert_eq!(n.boxes(), 0);
    }
}
