use super::error::{ensure, CompileError};
use super::synth::ceil_log2;
use crate::gf2::TruthTable;
use crate::protocol::{
    privacy_audit_and, validate, AndProtocol, OneWayProtocol, OrderedNlbProtocol, OtCall,
    OtProtocol, Protocol,
};
use crate::rational::pow_half;

/// Largest box count accepted by [`ordered_to_ot`] (Alice's randomness has
/// `2^t` values).
pub const MAX_OT_BOXES: usize = 16;

/// Replaces box `i` by one OT call: Alice draws a private bit `r_i` and
/// offers `(r_i, r_i ⊕ p_i)`, Bob chooses with `q_i` and takes the received
/// bit as `b_i`; Alice uses `a_i = r_i`. Then `a_i ⊕ b_i = p_i q_i` with
/// `a_i` uniform, exactly as for the box.
pub fn ordered_to_ot(p: &OrderedNlbProtocol) -> Result<OtProtocol, CompileError> {
    validate(&Protocol::Ordered(p.clone())).map_err(CompileError::Invalid)?;
    let t = p.boxes();
    ensure("boxes", t, MAX_OT_BOXES)?;
    let r = 1usize << t;
    let calls = (0..t)
        .map(|i| {
            let mut s0 = Vec::with_capacity(p.x_size * r);
            let mut s1 = Vec::with_capacity(p.x_size * r);
            for x in 0..p.x_size {
                for rv in 0..r {
                    let ri = rv >> i & 1 == 1;
                    s0.push(ri);
                    s1.push(ri ^ p.steps_a[i].eval(x, rv as u64));
                }
            }
            let choice = (0..p.y_size)
                .flat_map(|y| (0..1u64 << i).map(move |got| (y, got)))
                .map(|(y, got)| p.steps_b[i].eval(y, got))
                .collect();
            OtCall { s0, s1, choice }
        })
        .collect();
    let out_a = (0..p.x_size)
        .flat_map(|x| (0..r as u64).map(move |rv| (x, rv)))
        .map(|(x, rv)| p.out_a.eval(x, rv))
        .collect();
    let out_b = (0..p.y_size)
        .flat_map(|y| (0..r as u64).map(move |got| (y, got)))
        .map(|(y, got)| p.out_b.eval(y, got))
        .collect();
    Ok(OtProtocol {
        x_size: p.x_size,
        y_size: p.y_size,
        randomness: vec![pow_half(t as u32); r],
        calls,
        out_a,
        out_b,
    })
}

/// Largest gate count for which Alice's output table is built.
pub const MAX_AND_GATES: usize = 16;

/// One AND gate per message `i`: Alice inputs `[msg(x) = i]`, Bob inputs
/// `B(i, y)`, and Alice outputs `A(x) ⊕ a_{msg(x)}`, which is `f(x, y)`.
/// The only gate that can fire is the one of Alice's own message.
pub fn and_from_oneway(p: &OneWayProtocol) -> Result<AndProtocol, CompileError> {
    validate(&Protocol::OneWay(p.clone())).map_err(CompileError::Invalid)?;
    let gates = 1usize << p.bits.min(31);
    ensure("gates", gates, MAX_AND_GATES)?;
    let pa = (0..gates)
        .map(|i| p.msg.iter().map(|&m| m == i).collect())
        .collect();
    let qb = p.out_b.clone();
    let out_a = (0..p.x_size)
        .flat_map(|x| (0..1usize << gates).map(move |a| (x, a)))
        .map(|(x, a)| p.out_a[x] ^ (a >> p.msg[x] & 1 == 1))
        .collect();
    Ok(AndProtocol {
        x_size: p.x_size,
        y_size: p.y_size,
        p: pa,
        q: qb,
        out_a,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Message {
    Gate(usize),
    Constant,
}

/// Extracts a one-way protocol from a perfectly private AND protocol for
/// `f`. On each row the gate vector takes one value `𝐚⁰(x)` where `f = 0`
/// and one value `𝐚¹(x)` where `f = 1`; Alice sends the first index `m`
/// where they differ, outputs `a⁰_m(x)`, and Bob outputs `q_m(y)`.
///
/// On a constant row with value `c` Alice sends a gate `j` with `p_j(x) = 1`
/// (then `q_j` is constant, say `v`) and outputs `v ⊕ c`; failing that a
/// gate whose `q_j` is constant; failing that an extra message on which Bob
/// outputs 0. Messages are numbered by the gates actually used.
pub fn oneway_from_and(p: &AndProtocol, f: &TruthTable) -> Result<OneWayProtocol, CompileError> {
    privacy_audit_and(p, f).map_err(CompileError::NotPrivate)?;
    let t = p.gates();
    let constant_q: Vec<Option<bool>> =
        p.q.iter()
            .map(|q| {
                let v = q.first().copied().unwrap_or(false);
                q.iter().all(|&b| b == v).then_some(v)
            })
            .collect();
    let mut choice = Vec::with_capacity(p.x_size);
    for x in 0..p.x_size {
        let mut seen: [Option<u64>; 2] = [None, None];
        for y in 0..p.y_size {
            seen[f.eval(x, y) as usize].get_or_insert(p.gate_outputs(x, y));
        }
        let pick = match seen {
            [Some(v0), Some(v1)] => {
                let m = (v0 ^ v1).trailing_zeros() as usize;
                (Message::Gate(m), v0 >> m & 1 == 1)
            }
            [v0, v1] => {
                let c = v1.is_some();
                let v = v0.or(v1).unwrap_or(0);
                if let Some(j) = (0..t).find(|&j| p.p[j][x]) {
                    (Message::Gate(j), (v >> j & 1 == 1) ^ c)
                } else if let Some(j) = (0..t).find(|&j| constant_q[j].is_some()) {
                    (Message::Gate(j), constant_q[j].unwrap() ^ c)
                } else {
                    (Message::Constant, c)
                }
            }
        };
        choice.push(pick);
    }
    let mut used: Vec<Message> = choice.iter().map(|c| c.0).collect();
    used.sort_unstable();
    used.dedup();
    let bits = ceil_log2(used.len());
    let mut out_b: Vec<Vec<bool>> = used
        .iter()
        .map(|m| match *m {
            Message::Gate(j) => p.q[j].clone(),
            Message::Constant => vec![false; p.y_size],
        })
        .collect();
    out_b.resize(1 << bits, vec![false; p.y_size]);
    let msg = choice
        .iter()
        .map(|(m, _)| used.binary_search(m).expect("used message"))
        .collect();
    Ok(OneWayProtocol {
        x_size: p.x_size,
        y_size: p.y_size,
        bits,
        msg,
        out_a: choice.iter().map(|c| c.1).collect(),
        out_b,
    })
}
