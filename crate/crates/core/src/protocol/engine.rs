//! Exact enumeration and seeded sampling.
//!
//! NLB protocols run on a lazy box machine: a box is untouched until one
//! side feeds it an input, at which point that side's outcome is a fresh
//! uniform bit; when the other side arrives its outcome is forced by
//! `a ⊕ b = p · q`. Every box is drawn exactly once, so each of the `2^t`
//! leaves of the enumeration has weight `2^-t`.

use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::types::*;
use super::validate::{validate, validate_any, Violation};
use crate::rational::{pow_half, Prob};
use crate::seed::rng_from_seed;

/// Default cap on `t` for exhaustive enumeration.
pub const DEFAULT_LIMIT_T: usize = 20;

/// The enumeration cap, overridable through `NLBOX_LIMIT_T`.
pub fn limit_t() -> usize {
    static LIMIT: OnceLock<usize> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("NLBOX_LIMIT_T")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map_or(DEFAULT_LIMIT_T, |v: usize| v.min(62))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExecError {
    Invalid(Vec<Violation>),
    Limit { t: usize, limit: usize },
    Domain { x: usize, y: usize },
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExecError::Invalid(v) => {
                write!(f, "invalid protocol")?;
                for v in v {
                    write!(f, "; {v}")?;
                }
                Ok(())
            }
            ExecError::Limit { t, limit } => {
                write!(
                    f,
                    "enumeration limit: t = {t} exceeds {limit} (set NLBOX_LIMIT_T to override)"
                )
            }
            ExecError::Domain { x, y } => write!(f, "input ({x}, {y}) outside the protocol domain"),
        }
    }
}

impl std::error::Error for ExecError {}

/// Order in which the two sides advance through their schedules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Policy {
    #[default]
    AliceFirst,
    BobFirst,
    Alternate,
}

/// Exact joint law of `(a, b)` for one input pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeDistribution {
    /// Indexed by `2a + b`.
    pub probs: [Prob; 4],
}

impl Default for OutcomeDistribution {
    fn default() -> Self {
        let z = Prob::from_integer(0);
        OutcomeDistribution { probs: [z; 4] }
    }
}

impl OutcomeDistribution {
    pub fn point(a: bool, b: bool) -> Self {
        let mut d = Self::default();
        d.probs[idx(a, b)] = Prob::from_integer(1);
        d
    }

    pub fn get(&self, a: bool, b: bool) -> Prob {
        self.probs[idx(a, b)]
    }

    pub fn add(&mut self, a: bool, b: bool, w: Prob) {
        self.probs[idx(a, b)] += w;
    }

    pub fn add_scaled(&mut self, other: &OutcomeDistribution, w: Prob) {
        for (s, o) in self.probs.iter_mut().zip(&other.probs) {
            *s += *o * w;
        }
    }

    pub fn total(&self) -> Prob {
        self.probs.iter().sum()
    }

    /// `Pr[a ⊕ b = 1]`.
    pub fn parity_one(&self) -> Prob {
        self.probs[1] + self.probs[2]
    }

    pub fn marginal_a(&self, a: bool) -> Prob {
        self.get(a, false) + self.get(a, true)
    }

    pub fn marginal_b(&self, b: bool) -> Prob {
        self.get(false, b) + self.get(true, b)
    }
}

impl fmt::Display for OutcomeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in [false, true] {
            for b in [false, true] {
                let p = self.get(a, b);
                if p != Prob::from_integer(0) {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "({},{}):{p}", a as u8, b as u8)?;
                    first = false;
                }
            }
        }
        Ok(())
    }
}

fn idx(a: bool, b: bool) -> usize {
    (a as usize) << 1 | b as usize
}

/// One resource call recorded by [`exec_sample`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    /// Shared randomness picked mixture component `index`.
    Shared {
        index: usize,
    },
    /// A side fed `input` into box `label` and observed `outcome`; `drawn`
    /// is true when this side was the first to touch the box.
    Box {
        side: Side,
        label: usize,
        input: bool,
        outcome: bool,
        drawn: bool,
    },
    /// Alice's private randomness value.
    Private {
        value: usize,
    },
    Ot {
        call: usize,
        s0: bool,
        s1: bool,
        choice: bool,
        received: bool,
    },
    And {
        gate: usize,
        p: bool,
        q: bool,
        output: bool,
    },
    Message {
        from: Side,
        bit: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub a: bool,
    pub b: bool,
    pub transcript: Vec<Event>,
}

/// Something the engine can run.
pub trait Exec: Sync {
    fn check(&self) -> Result<(), ExecError>;
    fn domains(&self) -> (usize, usize);
    /// Exact distribution; assumes `check` passed and inputs are in range.
    fn exact_unchecked(&self, x: usize, y: usize, policy: Policy) -> OutcomeDistribution;
    fn sample_unchecked(
        &self,
        x: usize,
        y: usize,
        rng: &mut ChaCha8Rng,
        out: &mut Vec<Event>,
    ) -> (bool, bool);
}

fn check_limit(p: &Protocol) -> Result<(), ExecError> {
    let t = match p {
        Protocol::ParallelXor(_)
        | Protocol::Parallel(_)
        | Protocol::Ordered(_)
        | Protocol::General(_) => p.size(),
        _ => 0,
    };
    let limit = limit_t();
    if t > limit {
        return Err(ExecError::Limit { t, limit });
    }
    Ok(())
}

impl Exec for Protocol {
    fn check(&self) -> Result<(), ExecError> {
        validate(self).map_err(ExecError::Invalid)?;
        check_limit(self)
    }

    fn domains(&self) -> (usize, usize) {
        Protocol::domains(self)
    }

    fn exact_unchecked(&self, x: usize, y: usize, policy: Policy) -> OutcomeDistribution {
        match self {
            Protocol::ParallelXor(p) => exact_nlb(p, x, y, policy),
            Protocol::Parallel(p) => exact_nlb(p, x, y, policy),
            Protocol::Ordered(p) => exact_nlb(p, x, y, policy),
            Protocol::General(p) => exact_nlb(p, x, y, policy),
            Protocol::OneWay(p) => {
                let (a, b) = p.eval(x, y);
                OutcomeDistribution::point(a, b)
            }
            Protocol::TwoWay(p) => {
                let (a, b) = p.eval(x, y);
                OutcomeDistribution::point(a, b)
            }
            Protocol::Ot(p) => {
                let mut d = OutcomeDistribution::default();
                for (r, w) in p.randomness.iter().enumerate() {
                    let (_, a, b) = p.run(x, y, r);
                    d.add(a, b, *w);
                }
                d
            }
            Protocol::And(p) => OutcomeDistribution::point(p.output(x, y), false),
        }
    }

    fn sample_unchecked(
        &self,
        x: usize,
        y: usize,
        rng: &mut ChaCha8Rng,
        out: &mut Vec<Event>,
    ) -> (bool, bool) {
        match self {
            Protocol::ParallelXor(p) => sample_nlb(p, x, y, rng, out),
            Protocol::Parallel(p) => sample_nlb(p, x, y, rng, out),
            Protocol::Ordered(p) => sample_nlb(p, x, y, rng, out),
            Protocol::General(p) => sample_nlb(p, x, y, rng, out),
            Protocol::OneWay(p) => {
                let m = p.msg[x];
                for i in (0..p.bits).rev() {
                    out.push(Event::Message {
                        from: Side::Alice,
                        bit: m >> i & 1 == 1,
                    });
                }
                p.eval(x, y)
            }
            Protocol::TwoWay(p) => {
                let mut prefix = 0usize;
                for k in 0..p.depth {
                    let alice = p.alice_speaks[k][prefix];
                    let bit = p.bit[k][prefix][if alice { x } else { y }];
                    let from = if alice { Side::Alice } else { Side::Bob };
                    out.push(Event::Message { from, bit });
                    prefix = prefix << 1 | bit as usize;
                }
                (p.out_a[prefix][x], p.out_b[prefix][y])
            }
            Protocol::Ot(p) => {
                let r = pick_weighted(rng, &p.randomness);
                out.push(Event::Private { value: r });
                let rv = p.random_values();
                let mut received = 0usize;
                for (i, call) in p.calls.iter().enumerate() {
                    let choice = call.choice[(y << i) | received];
                    let (s0, s1) = (call.s0[x * rv + r], call.s1[x * rv + r]);
                    let got = if choice { s1 } else { s0 };
                    out.push(Event::Ot {
                        call: i,
                        s0,
                        s1,
                        choice,
                        received: got,
                    });
                    received |= (got as usize) << i;
                }
                (
                    p.out_a[x * rv + r],
                    p.out_b[(y << p.calls.len()) | received],
                )
            }
            Protocol::And(p) => {
                for (i, (pt, qt)) in p.p.iter().zip(&p.q).enumerate() {
                    let (pi, qi) = (pt[x], qt[y]);
                    out.push(Event::And {
                        gate: i,
                        p: pi,
                        q: qi,
                        output: pi & qi,
                    });
                }
                (p.output(x, y), false)
            }
        }
    }
}

impl Exec for AnyProtocol {
    fn check(&self) -> Result<(), ExecError> {
        validate_any(self).map_err(ExecError::Invalid)?;
        self.components.iter().try_for_each(|(_, p)| check_limit(p))
    }

    fn domains(&self) -> (usize, usize) {
        AnyProtocol::domains(self)
    }

    fn exact_unchecked(&self, x: usize, y: usize, policy: Policy) -> OutcomeDistribution {
        let mut d = OutcomeDistribution::default();
        for (w, p) in &self.components {
            d.add_scaled(&p.exact_unchecked(x, y, policy), *w);
        }
        d
    }

    fn sample_unchecked(
        &self,
        x: usize,
        y: usize,
        rng: &mut ChaCha8Rng,
        out: &mut Vec<Event>,
    ) -> (bool, bool) {
        let weights: Vec<Prob> = self.components.iter().map(|(w, _)| *w).collect();
        let index = pick_weighted(rng, &weights);
        if self.components.len() > 1 {
            out.push(Event::Shared { index });
        }
        self.components[index].1.sample_unchecked(x, y, rng, out)
    }
}

macro_rules! exec_via_protocol {
    ($($ty:ty),*) => {
        $(impl Exec for $ty {
            fn check(&self) -> Result<(), ExecError> {
                let p: Protocol = self.clone().into();
                p.check()
            }

            fn domains(&self) -> (usize, usize) {
                (self.x_size, self.y_size)
            }

            fn exact_unchecked(&self, x: usize, y: usize, policy: Policy) -> OutcomeDistribution {
                exact_nlb(self, x, y, policy)
            }

            fn sample_unchecked(&self, x: usize, y: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Event>) -> (bool, bool) {
                sample_nlb(self, x, y, rng, out)
            }
        })*
    };
}

exec_via_protocol!(
    ParallelXorProtocol,
    ParallelProtocol,
    OrderedNlbProtocol,
    GeneralNlbProtocol
);

/// Draws an index with the given rational weights. Uses an exact integer
/// draw over the common denominator when it fits in 64 bits.
fn pick_weighted(rng: &mut ChaCha8Rng, weights: &[Prob]) -> usize {
    if weights.len() <= 1 {
        return 0;
    }
    let den = weights.iter().fold(1i128, |acc, w| acc.lcm(w.denom()));
    if den > 0 && den <= u64::MAX as i128 {
        let mut u = rng.gen_range(0..den as u64) as i128;
        for (i, w) in weights.iter().enumerate() {
            let n = w.numer() * (den / w.denom());
            if u < n {
                return i;
            }
            u -= n;
        }
        return weights.len() - 1;
    }
    let mut u: f64 = rng.gen();
    for (i, w) in weights.iter().enumerate() {
        let wf = *w.numer() as f64 / *w.denom() as f64;
        if u < wf {
            return i;
        }
        u -= wf;
    }
    weights.len() - 1
}

fn check_inputs<P: Exec + ?Sized>(p: &P, x: usize, y: usize) -> Result<(), ExecError> {
    let (xs, ys) = p.domains();
    if x >= xs || y >= ys {
        return Err(ExecError::Domain { x, y });
    }
    Ok(())
}

/// Exact output distribution on `(x, y)`.
pub fn exec_exact<P: Exec + ?Sized>(
    p: &P,
    x: usize,
    y: usize,
) -> Result<OutcomeDistribution, ExecError> {
    exec_exact_with(p, x, y, Policy::default())
}

pub fn exec_exact_with<P: Exec + ?Sized>(
    p: &P,
    x: usize,
    y: usize,
    policy: Policy,
) -> Result<OutcomeDistribution, ExecError> {
    p.check()?;
    check_inputs(p, x, y)?;
    Ok(p.exact_unchecked(x, y, policy))
}

/// One run driven by a ChaCha8 stream seeded with `seed`.
pub fn exec_sample<P: Exec + ?Sized>(
    p: &P,
    x: usize,
    y: usize,
    seed: u64,
) -> Result<Sample, ExecError> {
    p.check()?;
    check_inputs(p, x, y)?;
    let mut rng = rng_from_seed(seed);
    Ok(sample_with(p, x, y, &mut rng))
}

/// Sampling with a caller-provided stream; assumes the protocol is valid.
pub fn sample_with<P: Exec + ?Sized>(p: &P, x: usize, y: usize, rng: &mut ChaCha8Rng) -> Sample {
    let mut transcript = Vec::new();
    let (a, b) = p.sample_unchecked(x, y, rng, &mut transcript);
    Sample { a, b, transcript }
}

// ---------------------------------------------------------------------------
// Lazy box machine.

/// The view of an NLB protocol the machine needs.
pub(crate) trait NlbProgram {
    fn boxes(&self) -> usize;
    fn box_at(&self, side: Side, j: usize) -> usize;
    fn step_input(&self, side: Side, j: usize, input: usize, outcomes: u64) -> bool;
    fn output(&self, side: Side, input: usize, outcomes: u64) -> bool;
}

fn parity(v: u64) -> bool {
    v.count_ones() & 1 == 1
}

impl NlbProgram for ParallelXorProtocol {
    fn boxes(&self) -> usize {
        self.p.len()
    }
    fn box_at(&self, _: Side, j: usize) -> usize {
        j
    }
    fn step_input(&self, side: Side, j: usize, input: usize, _: u64) -> bool {
        match side {
            Side::Alice => self.p[j][input],
            Side::Bob => self.q[j][input],
        }
    }
    fn output(&self, side: Side, input: usize, outcomes: u64) -> bool {
        match side {
            Side::Alice => self.local_a[input] ^ parity(outcomes),
            Side::Bob => self.local_b[input] ^ parity(outcomes),
        }
    }
}

impl NlbProgram for ParallelProtocol {
    fn boxes(&self) -> usize {
        self.p.len()
    }
    fn box_at(&self, _: Side, j: usize) -> usize {
        j
    }
    fn step_input(&self, side: Side, j: usize, input: usize, _: u64) -> bool {
        match side {
            Side::Alice => self.p[j][input],
            Side::Bob => self.q[j][input],
        }
    }
    fn output(&self, side: Side, input: usize, outcomes: u64) -> bool {
        match side {
            Side::Alice => self.output_a(input, outcomes),
            Side::Bob => self.output_b(input, outcomes),
        }
    }
}

impl NlbProgram for OrderedNlbProtocol {
    fn boxes(&self) -> usize {
        self.steps_a.len()
    }
    fn box_at(&self, _: Side, j: usize) -> usize {
        j
    }
    fn step_input(&self, side: Side, j: usize, input: usize, outcomes: u64) -> bool {
        match side {
            Side::Alice => self.steps_a[j].eval(input, outcomes),
            Side::Bob => self.steps_b[j].eval(input, outcomes),
        }
    }
    fn output(&self, side: Side, input: usize, outcomes: u64) -> bool {
        match side {
            Side::Alice => self.out_a.eval(input, outcomes),
            Side::Bob => self.out_b.eval(input, outcomes),
        }
    }
}

impl NlbProgram for GeneralNlbProtocol {
    fn boxes(&self) -> usize {
        self.boxes
    }
    fn box_at(&self, side: Side, j: usize) -> usize {
        match side {
            Side::Alice => self.order_a[j],
            Side::Bob => self.order_b[j],
        }
    }
    fn step_input(&self, side: Side, j: usize, input: usize, outcomes: u64) -> bool {
        match side {
            Side::Alice => self.steps_a[j].eval(input, outcomes),
            Side::Bob => self.steps_b[j].eval(input, outcomes),
        }
    }
    fn output(&self, side: Side, input: usize, outcomes: u64) -> bool {
        match side {
            Side::Alice => self.out_a.eval(input, outcomes),
            Side::Bob => self.out_b.eval(input, outcomes),
        }
    }
}

/// Machine state; index 0 is Alice, 1 is Bob.
#[derive(Clone, Copy, Default)]
struct MachineState {
    pos: [usize; 2],
    touched: [u64; 2],
    inputs: [u64; 2],
    outcomes: [u64; 2],
    /// Number of boxes whose outcome has been drawn so far.
    draws: u32,
}

/// A leaf of the enumeration: both sides' outcome vectors and outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub outcomes_a: u64,
    pub outcomes_b: u64,
    pub a: bool,
    pub b: bool,
}

fn side_index(s: Side) -> usize {
    match s {
        Side::Alice => 0,
        Side::Bob => 1,
    }
}

fn next_mover(st: &MachineState, t: usize, policy: Policy) -> Option<Side> {
    let a_left = st.pos[0] < t;
    let b_left = st.pos[1] < t;
    match policy {
        Policy::AliceFirst => {
            if a_left {
                Some(Side::Alice)
            } else if b_left {
                Some(Side::Bob)
            } else {
                None
            }
        }
        Policy::BobFirst => {
            if b_left {
                Some(Side::Bob)
            } else if a_left {
                Some(Side::Alice)
            } else {
                None
            }
        }
        Policy::Alternate => match (a_left, b_left) {
            (true, true) if st.pos[0] <= st.pos[1] => Some(Side::Alice),
            (_, true) => Some(Side::Bob),
            (true, false) => Some(Side::Alice),
            (false, false) => None,
        },
    }
}

/// Feeds the mover's next step; returns the box, its input and the forced
/// outcome, or `None` for the outcome when the box must be drawn.
fn advance<P: NlbProgram + ?Sized>(
    p: &P,
    st: &MachineState,
    side: Side,
    inputs: [usize; 2],
) -> (usize, bool, Option<bool>) {
    let s = side_index(side);
    let o = 1 - s;
    let j = st.pos[s];
    let label = p.box_at(side, j);
    let v = p.step_input(side, j, inputs[s], st.outcomes[s]);
    let forced = (st.touched[o] >> label & 1 == 1).then(|| {
        let other_out = st.outcomes[o] >> label & 1 == 1;
        let other_in = st.inputs[o] >> label & 1 == 1;
        other_out ^ (v & other_in)
    });
    (label, v, forced)
}

fn apply(st: &mut MachineState, side: Side, label: usize, v: bool, outcome: bool, drawn: bool) {
    let s = side_index(side);
    st.pos[s] += 1;
    st.touched[s] |= 1 << label;
    st.inputs[s] |= (v as u64) << label;
    st.outcomes[s] |= (outcome as u64) << label;
    st.draws += drawn as u32;
}

fn enumerate<P: NlbProgram + ?Sized>(
    p: &P,
    inputs: [usize; 2],
    policy: Policy,
    st: MachineState,
    visit: &mut dyn FnMut(Leaf),
) {
    let t = p.boxes();
    let mut st = st;
    loop {
        let Some(side) = next_mover(&st, t, policy) else {
            visit(Leaf {
                outcomes_a: st.outcomes[0],
                outcomes_b: st.outcomes[1],
                a: p.output(Side::Alice, inputs[0], st.outcomes[0]),
                b: p.output(Side::Bob, inputs[1], st.outcomes[1]),
            });
            return;
        };
        let (label, v, forced) = advance(p, &st, side, inputs);
        match forced {
            Some(o) => apply(&mut st, side, label, v, o, false),
            None => {
                let mut zero = st;
                apply(&mut zero, side, label, v, false, true);
                enumerate(p, inputs, policy, zero, visit);
                apply(&mut st, side, label, v, true, true);
            }
        }
    }
}

/// Visits every leaf of the enumeration on `(x, y)`; each has weight `2^-t`.
pub(crate) fn for_each_leaf<P: NlbProgram + ?Sized>(
    p: &P,
    x: usize,
    y: usize,
    policy: Policy,
    visit: &mut dyn FnMut(Leaf),
) {
    enumerate(p, [x, y], policy, MachineState::default(), visit);
}

/// Leaves of an NLB protocol, or `None` for other kinds.
pub fn nlb_leaves(p: &Protocol, x: usize, y: usize, policy: Policy) -> Option<Vec<Leaf>> {
    let mut leaves = Vec::new();
    let mut push = |l: Leaf| leaves.push(l);
    match p {
        Protocol::ParallelXor(p) => for_each_leaf(p, x, y, policy, &mut push),
        Protocol::Parallel(p) => for_each_leaf(p, x, y, policy, &mut push),
        Protocol::Ordered(p) => for_each_leaf(p, x, y, policy, &mut push),
        Protocol::General(p) => for_each_leaf(p, x, y, policy, &mut push),
        _ => return None,
    }
    Some(leaves)
}

fn exact_nlb<P: NlbProgram + ?Sized>(
    p: &P,
    x: usize,
    y: usize,
    policy: Policy,
) -> OutcomeDistribution {
    let mut counts = [0u64; 4];
    for_each_leaf(p, x, y, policy, &mut |l| counts[idx(l.a, l.b)] += 1);
    let w = pow_half(p.boxes() as u32);
    let mut d = OutcomeDistribution::default();
    for (slot, c) in d.probs.iter_mut().zip(counts) {
        *slot = w * Prob::from_integer(c as i128);
    }
    d
}

fn sample_nlb<P: NlbProgram + ?Sized>(
    p: &P,
    x: usize,
    y: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Event>,
) -> (bool, bool) {
    let t = p.boxes();
    let inputs = [x, y];
    let mut st = MachineState::default();
    while let Some(side) = next_mover(&st, t, Policy::Alternate) {
        let (label, v, forced) = advance(p, &st, side, inputs);
        let (outcome, drawn) = match forced {
            Some(o) => (o, false),
            None => (rng.gen::<bool>(), true),
        };
        out.push(Event::Box {
            side,
            label,
            input: v,
            outcome,
            drawn,
        });
        apply(&mut st, side, label, v, outcome, drawn);
    }
    (
        p.output(Side::Alice, x, st.outcomes[0]),
        p.output(Side::Bob, y, st.outcomes[1]),
    )
}
