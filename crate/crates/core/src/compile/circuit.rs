//! Distributed Boolean circuits over XOR-shared bits.
//!
//! Text format (wires are numbered from 1 in declaration order):
//!
//! ```text
//! circuit nx=2 ny=2
//! input 1 product p=0011 q=0101
//! input 2 local a=0000 b=0101
//! gate 3 or 1 2
//! gate 4 not 3
//! output 4
//! ```

use std::str::FromStr;

use super::error::{ensure, CompileError};
use crate::gf2::input_bit;
use crate::protocol::{OrderedNlbProtocol, StepTable, Table};

/// A distributed input bit `a(x) ⊕ b(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircuitInput {
    /// `p(x) · q(y)`, produced by one box.
    Product { p: Table, q: Table },
    /// Shares computed locally.
    Local { a: Table, b: Table },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Xor(usize, usize),
}

/// Wires `0..inputs.len()` are inputs; gate `g` drives wire `inputs.len() + g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributedCircuit {
    pub x_size: usize,
    pub y_size: usize,
    pub inputs: Vec<CircuitInput>,
    pub gates: Vec<Gate>,
    pub output: usize,
}

impl DistributedCircuit {
    pub fn wires(&self) -> usize {
        self.inputs.len() + self.gates.len()
    }

    pub fn check(&self) -> Result<(), CompileError> {
        let bad = |m: String| Err(CompileError::Circuit(m));
        for (i, inp) in self.inputs.iter().enumerate() {
            let (a, b) = match inp {
                CircuitInput::Product { p, q } => (p.len(), q.len()),
                CircuitInput::Local { a, b } => (a.len(), b.len()),
            };
            if a != self.x_size || b != self.y_size {
                return bad(format!("input {} has tables of the wrong size", i + 1));
            }
        }
        for (g, gate) in self.gates.iter().enumerate() {
            let wire = self.inputs.len() + g;
            let ops = match *gate {
                Gate::Not(u) => vec![u],
                Gate::And(u, v) | Gate::Or(u, v) | Gate::Xor(u, v) => vec![u, v],
            };
            if ops.iter().any(|&u| u >= wire) {
                return bad(format!("gate {} reads a later wire", wire + 1));
            }
        }
        if self.output >= self.wires() {
            return bad(format!("output wire {} does not exist", self.output + 1));
        }
        Ok(())
    }

    /// Number of boxes the compiled protocol uses.
    pub fn box_count(&self) -> usize {
        let leaves = self
            .inputs
            .iter()
            .filter(|i| matches!(i, CircuitInput::Product { .. }))
            .count();
        let internal = self
            .gates
            .iter()
            .filter(|g| matches!(g, Gate::And(..) | Gate::Or(..)))
            .count();
        leaves + 2 * internal
    }

    /// Plain evaluation of the computed function.
    pub fn eval(&self, x: usize, y: usize) -> bool {
        let mut w = Vec::with_capacity(self.wires());
        for inp in &self.inputs {
            w.push(match inp {
                CircuitInput::Product { p, q } => p[x] & q[y],
                CircuitInput::Local { a, b } => a[x] ^ b[y],
            });
        }
        for g in &self.gates {
            let v = match *g {
                Gate::Not(u) => !w[u],
                Gate::And(u, v) => w[u] & w[v],
                Gate::Or(u, v) => w[u] | w[v],
                Gate::Xor(u, v) => w[u] ^ w[v],
            };
            w.push(v);
        }
        w[self.output]
    }

    pub fn to_text(&self) -> String {
        let bits = |t: &[bool]| {
            t.iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect::<String>()
        };
        let dim = |n: &str, s: usize| {
            if s.is_power_of_two() {
                format!("n{n}={}", s.trailing_zeros())
            } else {
                format!("{n}s={s}")
            }
        };
        let mut s = format!(
            "circuit {} {}\n",
            dim("x", self.x_size),
            dim("y", self.y_size)
        );
        for (i, inp) in self.inputs.iter().enumerate() {
            match inp {
                CircuitInput::Product { p, q } => {
                    s += &format!("input {} product p={} q={}\n", i + 1, bits(p), bits(q))
                }
                CircuitInput::Local { a, b } => {
                    s += &format!("input {} local a={} b={}\n", i + 1, bits(a), bits(b))
                }
            }
        }
        for (g, gate) in self.gates.iter().enumerate() {
            let w = self.inputs.len() + g + 1;
            s += &match *gate {
                Gate::Not(u) => format!("gate {w} not {}\n", u + 1),
                Gate::And(u, v) => format!("gate {w} and {} {}\n", u + 1, v + 1),
                Gate::Or(u, v) => format!("gate {w} or {} {}\n", u + 1, v + 1),
                Gate::Xor(u, v) => format!("gate {w} xor {} {}\n", u + 1, v + 1),
            };
        }
        s += &format!("output {}\n", self.output + 1);
        s
    }
}

fn kv<'a>(tok: &'a str, key: &str) -> Option<&'a str> {
    tok.strip_prefix(key).and_then(|r| r.strip_prefix('='))
}

impl FromStr for DistributedCircuit {
    type Err = CompileError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |line: usize, m: &str| CompileError::Circuit(format!("line {line}: {m}"));
        let mut dims: Option<(usize, usize)> = None;
        let mut inputs = Vec::new();
        let mut gates = Vec::new();
        let mut output = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = l.split_whitespace().collect();
            let table = |s: Option<&str>, n: usize| -> Result<Table, CompileError> {
                let s = s.ok_or_else(|| bad(line, "missing table"))?;
                if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
                    return Err(bad(line, &format!("expected {n} bits")));
                }
                Ok(s.chars().map(|c| c == '1').collect())
            };
            let wire = |s: &str| -> Result<usize, CompileError> {
                match s.parse::<usize>() {
                    Ok(w) if w >= 1 => Ok(w - 1),
                    _ => Err(bad(line, &format!("bad wire '{s}'"))),
                }
            };
            match toks[0] {
                "circuit" => {
                    let (mut xs, mut ys) = (None, None);
                    for t in &toks[1..] {
                        let num = |v: &str| v.parse::<usize>().map_err(|_| bad(line, "bad number"));
                        if let Some(v) = kv(t, "nx") {
                            xs = Some(1usize << num(v)?.min(31));
                        } else if let Some(v) = kv(t, "ny") {
                            ys = Some(1usize << num(v)?.min(31));
                        } else if let Some(v) = kv(t, "xs") {
                            xs = Some(num(v)?);
                        } else if let Some(v) = kv(t, "ys") {
                            ys = Some(num(v)?);
                        } else {
                            return Err(bad(line, &format!("unknown field '{t}'")));
                        }
                    }
                    dims = Some((
                        xs.ok_or_else(|| bad(line, "missing nx"))?,
                        ys.ok_or_else(|| bad(line, "missing ny"))?,
                    ));
                }
                "input" | "gate" | "output" if dims.is_none() => {
                    return Err(bad(line, "missing circuit header"))
                }
                "input" => {
                    let (xs, ys) = dims.unwrap();
                    if toks.len() != 5 || wire(toks[1])? != inputs.len() || !gates.is_empty() {
                        return Err(bad(line, "inputs must be 'input <n> product|local ..' numbered in order, before gates"));
                    }
                    let inp = match toks[2] {
                        "product" => CircuitInput::Product {
                            p: table(kv(toks[3], "p"), xs)?,
                            q: table(kv(toks[4], "q"), ys)?,
                        },
                        "local" => CircuitInput::Local {
                            a: table(kv(toks[3], "a"), xs)?,
                            b: table(kv(toks[4], "b"), ys)?,
                        },
                        other => return Err(bad(line, &format!("unknown input kind '{other}'"))),
                    };
                    inputs.push(inp);
                }
                "gate" => {
                    if toks.len() < 4 || wire(toks[1])? != inputs.len() + gates.len() {
                        return Err(bad(line, "gates must be numbered in order"));
                    }
                    let g = match (toks[2], toks.len()) {
                        ("not", 4) => Gate::Not(wire(toks[3])?),
                        ("and", 5) => Gate::And(wire(toks[3])?, wire(toks[4])?),
                        ("or", 5) => Gate::Or(wire(toks[3])?, wire(toks[4])?),
                        ("xor", 5) => Gate::Xor(wire(toks[3])?, wire(toks[4])?),
                        _ => return Err(bad(line, "bad gate")),
                    };
                    gates.push(g);
                }
                "output" => {
                    if toks.len() != 2 {
                        return Err(bad(line, "bad output line"));
                    }
                    output = Some(wire(toks[1])?);
                }
                other => return Err(bad(line, &format!("unknown directive '{other}'"))),
            }
        }
        let (x_size, y_size) = dims.ok_or_else(|| bad(1, "missing circuit header"))?;
        let c = DistributedCircuit {
            x_size,
            y_size,
            inputs,
            gates,
            output: output.ok_or_else(|| bad(text.lines().count(), "missing output"))?,
        };
        c.check()?;
        Ok(c)
    }
}

/// Disjointness as a balanced OR tree over the `n` leaf products
/// `x_i · y_i`; the output is 1 iff the sets intersect.
pub fn disj_circuit(n: usize) -> DistributedCircuit {
    let size = 1usize << n;
    let inputs = (0..n)
        .map(|i| CircuitInput::Product {
            p: (0..size).map(|x| input_bit(x, i, n)).collect(),
            q: (0..size).map(|y| input_bit(y, i, n)).collect(),
        })
        .collect();
    let mut gates = Vec::new();
    let mut layer: Vec<usize> = (0..n).collect();
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        for pair in layer.chunks(2) {
            if let [u, v] = *pair {
                gates.push(Gate::Or(u, v));
                next.push(n + gates.len() - 1);
            } else {
                next.push(pair[0]);
            }
        }
        layer = next;
    }
    DistributedCircuit {
        x_size: size,
        y_size: size,
        inputs,
        gates,
        output: layer[0],
    }
}

#[derive(Clone, Copy)]
enum Side {
    A,
    B,
}

/// Shares of every wire for one side, given its input and box outcomes
/// (box `i` at bit `i`). `boxes[g]` is the first box of gate `g`.
fn shares(
    c: &DistributedCircuit,
    side: Side,
    input: usize,
    outcomes: u64,
    input_box: &[usize],
    gate_box: &[usize],
) -> Vec<bool> {
    let mut w = Vec::with_capacity(c.wires());
    let o = |b: usize| outcomes >> b & 1 == 1;
    for (i, inp) in c.inputs.iter().enumerate() {
        w.push(match (inp, side) {
            (CircuitInput::Product { .. }, _) => o(input_box[i]),
            (CircuitInput::Local { a, .. }, Side::A) => a[input],
            (CircuitInput::Local { b, .. }, Side::B) => b[input],
        });
    }
    for (g, gate) in c.gates.iter().enumerate() {
        let v = match *gate {
            Gate::Not(u) => match side {
                Side::A => !w[u],
                Side::B => w[u],
            },
            Gate::Xor(u, v) => w[u] ^ w[v],
            Gate::And(u, v) | Gate::Or(u, v) => {
                let cross = o(gate_box[g]) ^ o(gate_box[g] + 1);
                w[u] & w[v] ^ cross
            }
        };
        w.push(v);
    }
    w
}

/// Compiles a distributed circuit into an ordered protocol computing its
/// output in parity. NOT and XOR are local. For AND of `u = a_u ⊕ b_u` and
/// `v = a_v ⊕ b_v`, boxes `(a_u, b_v)` and `(a_v, b_u)` supply the cross
/// terms and the local terms are `a_u a_v`, `b_u b_v`. OR uses boxes
/// `(¬a_u, ¬b_v)` and `(¬a_v, ¬b_u)` with the same local terms: the cross
/// terms then add `u ⊕ v` and `u ∨ v = uv ⊕ u ⊕ v`.
pub fn circuit_to_nlb(c: &DistributedCircuit) -> Result<OrderedNlbProtocol, CompileError> {
    c.check()?;
    ensure("boxes", c.box_count(), 62)?;
    let mut next = 0usize;
    let mut input_box = vec![usize::MAX; c.inputs.len()];
    let mut deps = Vec::with_capacity(c.wires());
    for (i, inp) in c.inputs.iter().enumerate() {
        if let CircuitInput::Product { .. } = inp {
            input_box[i] = next;
            deps.push(1u64 << next);
            next += 1;
        } else {
            deps.push(0);
        }
    }
    let mut gate_box = vec![usize::MAX; c.gates.len()];
    for (g, gate) in c.gates.iter().enumerate() {
        let d = match *gate {
            Gate::Not(u) => deps[u],
            Gate::Xor(u, v) => deps[u] | deps[v],
            Gate::And(u, v) | Gate::Or(u, v) => {
                gate_box[g] = next;
                next += 2;
                deps[u] | deps[v] | 0b11 << gate_box[g]
            }
        };
        deps.push(d);
    }
    let t = next;
    let reads = |mask: u64| (0..t).filter(|&b| mask >> b & 1 == 1).collect::<Vec<_>>();
    let mut steps_a = vec![StepTable::constant(c.x_size, false); t];
    let mut steps_b = vec![StepTable::constant(c.y_size, false); t];
    for (i, inp) in c.inputs.iter().enumerate() {
        if let CircuitInput::Product { p, q } = inp {
            steps_a[input_box[i]] = StepTable::input_only(p.clone());
            steps_b[input_box[i]] = StepTable::input_only(q.clone());
        }
    }
    let (ib, gb) = (&input_box, &gate_box);
    for (g, gate) in c.gates.iter().enumerate() {
        let (u, v, negate) = match *gate {
            Gate::And(u, v) => (u, v, false),
            Gate::Or(u, v) => (u, v, true),
            _ => continue,
        };
        let first = gate_box[g];
        // Box `first` takes (a_u, b_v), box `first + 1` takes (a_v, b_u).
        for (bx, wa, wb) in [(first, u, v), (first + 1, v, u)] {
            steps_a[bx] = StepTable::from_fn(c.x_size, reads(deps[wa]), |x, o| {
                shares(c, Side::A, x, o, ib, gb)[wa] ^ negate
            });
            steps_b[bx] = StepTable::from_fn(c.y_size, reads(deps[wb]), |y, o| {
                shares(c, Side::B, y, o, ib, gb)[wb] ^ negate
            });
        }
    }
    let out = c.output;
    let out_a = StepTable::from_fn(c.x_size, reads(deps[out]), |x, o| {
        shares(c, Side::A, x, o, ib, gb)[out]
    });
    let out_b = StepTable::from_fn(c.y_size, reads(deps[out]), |y, o| {
        shares(c, Side::B, y, o, ib, gb)[out]
    });
    Ok(OrderedNlbProtocol {
        x_size: c.x_size,
        y_size: c.y_size,
        steps_a,
        steps_b,
        out_a,
        out_b,
    })
}
