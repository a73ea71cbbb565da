use crate::rational::Prob;

/// A total Boolean table over some finite domain.
pub type Table = Vec<bool>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Alice,
    Bob,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Alice => Side::Bob,
            Side::Bob => Side::Alice,
        }
    }
}

/// Mapping `(own input, selected own box outcomes) → bit`.
///
/// `reads` lists 0-based box indices; the table is indexed by
/// `input · 2^k + Σ_j outcome(reads[j]) · 2^j` with `k = reads.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTable {
    pub reads: Vec<usize>,
    pub bits: Table,
}

impl StepTable {
    /// A table that reads no box outcomes.
    pub fn input_only(bits: Table) -> Self {
        StepTable {
            reads: Vec::new(),
            bits,
        }
    }

    pub fn constant(domain: usize, value: bool) -> Self {
        Self::input_only(vec![value; domain])
    }

    /// Builds a table by evaluating `f(input, outcomes)` where `outcomes` has
    /// box `reads[j]` at bit position `reads[j]`.
    pub fn from_fn(domain: usize, reads: Vec<usize>, f: impl Fn(usize, u64) -> bool) -> Self {
        let k = reads.len();
        let mut bits = Vec::with_capacity(domain << k);
        for input in 0..domain {
            for local in 0..1u64 << k {
                let outcomes = reads
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| local >> j & 1 == 1)
                    .fold(0u64, |acc, (_, &b)| acc | 1 << b);
                bits.push(f(input, outcomes));
            }
        }
        StepTable { reads, bits }
    }

    pub fn expected_len(&self, domain: usize) -> usize {
        domain << self.reads.len()
    }

    /// Evaluates with `outcomes` holding box `i` at bit `i`.
    #[inline]
    pub fn eval(&self, input: usize, outcomes: u64) -> bool {
        let k = self.reads.len();
        let mut local = 0usize;
        for (j, &b) in self.reads.iter().enumerate() {
            local |= ((outcomes >> b & 1) as usize) << j;
        }
        self.bits[(input << k) | local]
    }

    pub fn read_mask(&self) -> u64 {
        self.reads.iter().fold(0, |m, &b| m | 1 << b)
    }
}

/// Parallel boxes whose outputs are XORed together with local terms:
/// Alice outputs `localA(x) ⊕ ⊕_i a_i`, Bob `localB(y) ⊕ ⊕_i b_i`, and box
/// `i` receives `(p_i(x), q_i(y))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelXorProtocol {
    pub x_size: usize,
    pub y_size: usize,
    pub p: Vec<Table>,
    pub q: Vec<Table>,
    pub local_a: Table,
    pub local_b: Table,
}

impl ParallelXorProtocol {
    pub fn strict(x_size: usize, y_size: usize, p: Vec<Table>, q: Vec<Table>) -> Self {
        ParallelXorProtocol {
            x_size,
            y_size,
            p,
            q,
            local_a: vec![false; x_size],
            local_b: vec![false; y_size],
        }
    }

    pub fn boxes(&self) -> usize {
        self.p.len()
    }

    /// No local terms: outputs are pure parities of box outcomes.
    pub fn is_strict(&self) -> bool {
        self.local_a.iter().chain(&self.local_b).all(|b| !b)
    }

    /// The function this protocol computes in parity (always deterministic).
    pub fn parity_fn(&self, x: usize, y: usize) -> bool {
        self.p
            .iter()
            .zip(&self.q)
            .fold(self.local_a[x] ^ self.local_b[y], |acc, (p, q)| {
                acc ^ (p[x] & q[y])
            })
    }

    /// Same protocol with every step in label order.
    pub fn to_ordered(&self) -> OrderedNlbProtocol {
        let t = self.boxes();
        let out = |local: &Table| {
            StepTable::from_fn(local.len(), (0..t).collect(), |v, o| {
                local[v] ^ (o.count_ones() & 1 == 1)
            })
        };
        OrderedNlbProtocol {
            x_size: self.x_size,
            y_size: self.y_size,
            steps_a: self.p.iter().cloned().map(StepTable::input_only).collect(),
            steps_b: self.q.iter().cloned().map(StepTable::input_only).collect(),
            out_a: out(&self.local_a),
            out_b: out(&self.local_b),
        }
    }

    /// Same protocol with general output tables.
    pub fn to_parallel(&self) -> ParallelProtocol {
        let t = self.boxes();
        let out_a = (0..self.x_size)
            .flat_map(|x| (0..1u64 << t).map(move |a| (x, a)))
            .map(|(x, a)| self.local_a[x] ^ (a.count_ones() & 1 == 1))
            .collect();
        let out_b = (0..self.y_size)
            .flat_map(|y| (0..1u64 << t).map(move |b| (y, b)))
            .map(|(y, b)| self.local_b[y] ^ (b.count_ones() & 1 == 1))
            .collect();
        ParallelProtocol {
            x_size: self.x_size,
            y_size: self.y_size,
            p: self.p.clone(),
            q: self.q.clone(),
            out_a,
            out_b,
        }
    }
}

/// Parallel boxes with arbitrary output functions `A(x, 𝐚)` and `B(y, 𝐛)`;
/// `out_a[x · 2^t + 𝐚]` with box `i` at bit `i` of `𝐚`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelProtocol {
    pub x_size: usize,
    pub y_size: usize,
    pub p: Vec<Table>,
    pub q: Vec<Table>,
    pub out_a: Table,
    pub out_b: Table,
}

impl ParallelProtocol {
    pub fn boxes(&self) -> usize {
        self.p.len()
    }

    pub fn output_a(&self, x: usize, a: u64) -> bool {
        self.out_a[(x << self.boxes()) | a as usize]
    }

    pub fn output_b(&self, y: usize, b: u64) -> bool {
        self.out_b[(y << self.boxes()) | b as usize]
    }
}

/// Both players use boxes `1..t` in label order; step `i` may read only the
/// outcomes of boxes before `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedNlbProtocol {
    pub x_size: usize,
    pub y_size: usize,
    pub steps_a: Vec<StepTable>,
    pub steps_b: Vec<StepTable>,
    pub out_a: StepTable,
    pub out_b: StepTable,
}

impl OrderedNlbProtocol {
    pub fn boxes(&self) -> usize {
        self.steps_a.len()
    }

    pub fn to_general(&self) -> GeneralNlbProtocol {
        let t = self.boxes();
        GeneralNlbProtocol {
            x_size: self.x_size,
            y_size: self.y_size,
            boxes: t,
            order_a: (0..t).collect(),
            steps_a: self.steps_a.clone(),
            order_b: (0..t).collect(),
            steps_b: self.steps_b.clone(),
            out_a: self.out_a.clone(),
            out_b: self.out_b.clone(),
        }
    }
}

/// Each player visits the boxes in their own order. `steps_a[j]` gives
/// Alice's input to box `order_a[j]` and may read boxes she already used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralNlbProtocol {
    pub x_size: usize,
    pub y_size: usize,
    pub boxes: usize,
    pub order_a: Vec<usize>,
    pub steps_a: Vec<StepTable>,
    pub order_b: Vec<usize>,
    pub steps_b: Vec<StepTable>,
    pub out_a: StepTable,
    pub out_b: StepTable,
}

/// Alice sends `msg(x)` (a `bits`-bit string); the computed function is
/// `out_a(x) ⊕ out_b[msg(x)](y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneWayProtocol {
    pub x_size: usize,
    pub y_size: usize,
    pub bits: usize,
    pub msg: Vec<usize>,
    pub out_a: Table,
    /// `out_b[m][y]`, one table per message `m < 2^bits`.
    pub out_b: Vec<Table>,
}

impl OneWayProtocol {
    pub fn eval(&self, x: usize, y: usize) -> (bool, bool) {
        (self.out_a[x], self.out_b[self.msg[x]][y])
    }
}

/// Deterministic protocol tree of fixed depth. A transcript prefix of length
/// `k` is an integer whose most recent bit is the least significant one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoWayTree {
    pub x_size: usize,
    pub y_size: usize,
    pub depth: usize,
    /// `alice_speaks[k][prefix]` for the bit sent in round `k + 1`.
    pub alice_speaks: Vec<Vec<bool>>,
    /// `bit[k][prefix]` is a table over the speaker's input.
    pub bit: Vec<Vec<Table>>,
    /// `out_a[transcript][x]`.
    pub out_a: Vec<Table>,
    /// `out_b[transcript][y]`.
    pub out_b: Vec<Table>,
}

impl TwoWayTree {
    pub fn transcript(&self, x: usize, y: usize) -> usize {
        let mut prefix = 0usize;
        for k in 0..self.depth {
            let bit = if self.alice_speaks[k][prefix] {
                self.bit[k][prefix][x]
            } else {
                self.bit[k][prefix][y]
            };
            prefix = (prefix << 1) | bit as usize;
        }
        prefix
    }

    pub fn eval(&self, x: usize, y: usize) -> (bool, bool) {
        let t = self.transcript(x, y);
        (self.out_a[t][x], self.out_b[t][y])
    }
}

/// One 2-1 oblivious transfer. Alice supplies `(s⁰, s¹)` from her input and
/// private randomness; Bob chooses from his input and previously received
/// bits and receives `s^choice`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OtCall {
    /// Indexed by `x · R + r`.
    pub s0: Table,
    pub s1: Table,
    /// Indexed by `y · 2^i + (received bits of calls < i)`.
    pub choice: Table,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OtProtocol {
    pub x_size: usize,
    pub y_size: usize,
    /// Weights of Alice's private randomness values `0..R`.
    pub randomness: Vec<Prob>,
    pub calls: Vec<OtCall>,
    /// Indexed by `x · R + r`.
    pub out_a: Table,
    /// Indexed by `y · 2^calls + received`.
    pub out_b: Table,
}

impl OtProtocol {
    pub fn random_values(&self) -> usize {
        self.randomness.len()
    }

    /// Bob's received bits and both outputs for fixed Alice randomness `r`.
    pub fn run(&self, x: usize, y: usize, r: usize) -> (u64, bool, bool) {
        let rv = self.random_values();
        let mut received = 0u64;
        for (i, call) in self.calls.iter().enumerate() {
            let c = call.choice[(y << i) | received as usize];
            let s = if c { &call.s1 } else { &call.s0 };
            received |= (s[x * rv + r] as u64) << i;
        }
        let a = self.out_a[x * rv + r];
        let b = self.out_b[(y << self.calls.len()) | received as usize];
        (received, a, b)
    }
}

/// Secure AND gates evaluated in parallel; Alice receives every
/// `a_i = p_i(x) · q_i(y)` and outputs `out_a(x, 𝐚)`. Bob receives nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AndProtocol {
    pub x_size: usize,
    pub y_size: usize,
    pub p: Vec<Table>,
    pub q: Vec<Table>,
    /// Indexed by `x · 2^t + 𝐚`.
    pub out_a: Table,
}

impl AndProtocol {
    pub fn gates(&self) -> usize {
        self.p.len()
    }

    pub fn gate_outputs(&self, x: usize, y: usize) -> u64 {
        self.p
            .iter()
            .zip(&self.q)
            .enumerate()
            .fold(0, |acc, (i, (p, q))| acc | ((p[x] & q[y]) as u64) << i)
    }

    pub fn output(&self, x: usize, y: usize) -> bool {
        self.out_a[(x << self.gates()) | self.gate_outputs(x, y) as usize]
    }
}

/// Shared randomness: a finite weighted set of deterministic protocols of
/// one kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolMixture<P> {
    pub components: Vec<(Prob, P)>,
}

impl<P> ProtocolMixture<P> {
    pub fn new(components: Vec<(Prob, P)>) -> Self {
        ProtocolMixture { components }
    }

    pub fn single(p: P) -> Self {
        ProtocolMixture {
            components: vec![(Prob::from_integer(1), p)],
        }
    }
}

/// Any deterministic protocol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Protocol {
    ParallelXor(ParallelXorProtocol),
    Parallel(ParallelProtocol),
    Ordered(OrderedNlbProtocol),
    General(GeneralNlbProtocol),
    OneWay(OneWayProtocol),
    TwoWay(TwoWayTree),
    Ot(OtProtocol),
    And(AndProtocol),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    ParallelXor,
    Parallel,
    Ordered,
    General,
    OneWay,
    TwoWay,
    Ot,
    And,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 8] = [
        ProtocolKind::ParallelXor,
        ProtocolKind::Parallel,
        ProtocolKind::Ordered,
        ProtocolKind::General,
        ProtocolKind::OneWay,
        ProtocolKind::TwoWay,
        ProtocolKind::Ot,
        ProtocolKind::And,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::ParallelXor => "parallel-xor",
            ProtocolKind::Parallel => "parallel",
            ProtocolKind::Ordered => "ordered",
            ProtocolKind::General => "general",
            ProtocolKind::OneWay => "oneway",
            ProtocolKind::TwoWay => "twoway",
            ProtocolKind::Ot => "ot",
            ProtocolKind::And => "and",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Protocols whose only resource is non-local boxes.
    pub fn is_nlb(self) -> bool {
        matches!(
            self,
            ProtocolKind::ParallelXor
                | ProtocolKind::Parallel
                | ProtocolKind::Ordered
                | ProtocolKind::General
        )
    }
}

impl Protocol {
    pub fn kind(&self) -> ProtocolKind {
        match self {
            Protocol::ParallelXor(_) => ProtocolKind::ParallelXor,
            Protocol::Parallel(_) => ProtocolKind::Parallel,
            Protocol::Ordered(_) => ProtocolKind::Ordered,
            Protocol::General(_) => ProtocolKind::General,
            Protocol::OneWay(_) => ProtocolKind::OneWay,
            Protocol::TwoWay(_) => ProtocolKind::TwoWay,
            Protocol::Ot(_) => ProtocolKind::Ot,
            Protocol::And(_) => ProtocolKind::And,
        }
    }

    pub fn domains(&self) -> (usize, usize) {
        match self {
            Protocol::ParallelXor(p) => (p.x_size, p.y_size),
            Protocol::Parallel(p) => (p.x_size, p.y_size),
            Protocol::Ordered(p) => (p.x_size, p.y_size),
            Protocol::General(p) => (p.x_size, p.y_size),
            Protocol::OneWay(p) => (p.x_size, p.y_size),
            Protocol::TwoWay(p) => (p.x_size, p.y_size),
            Protocol::Ot(p) => (p.x_size, p.y_size),
            Protocol::And(p) => (p.x_size, p.y_size),
        }
    }

    /// Boxes, message bits, OT calls or AND gates, depending on the kind.
    pub fn size(&self) -> usize {
        match self {
            Protocol::ParallelXor(p) => p.boxes(),
            Protocol::Parallel(p) => p.boxes(),
            Protocol::Ordered(p) => p.boxes(),
            Protocol::General(p) => p.boxes,
            Protocol::OneWay(p) => p.bits,
            Protocol::TwoWay(p) => p.depth,
            Protocol::Ot(p) => p.calls.len(),
            Protocol::And(p) => p.gates(),
        }
    }
}

macro_rules! protocol_from {
    ($($variant:ident($ty:ty)),*) => {
        $(impl From<$ty> for Protocol {
            fn from(p: $ty) -> Self {
                Protocol::$variant(p)
            }
        })*
    };
}

protocol_from!(
    ParallelXor(ParallelXorProtocol),
    Parallel(ParallelProtocol),
    Ordered(OrderedNlbProtocol),
    General(GeneralNlbProtocol),
    OneWay(OneWayProtocol),
    TwoWay(TwoWayTree),
    Ot(OtProtocol),
    And(AndProtocol)
);

/// A protocol possibly wrapped in shared randomness.
pub type AnyProtocol = ProtocolMixture<Protocol>;

impl<P> ProtocolMixture<P> {
    pub fn map<Q>(self, mut f: impl FnMut(P) -> Q) -> ProtocolMixture<Q> {
        ProtocolMixture {
            components: self
                .components
                .into_iter()
                .map(|(w, p)| (w, f(p)))
                .collect(),
        }
    }

    pub fn try_map<Q, E>(
        self,
        mut f: impl FnMut(P) -> Result<Q, E>,
    ) -> Result<ProtocolMixture<Q>, E> {
        let mut components = Vec::with_capacity(self.components.len());
        for (w, p) in self.components {
            components.push((w, f(p)?));
        }
        Ok(ProtocolMixture { components })
    }

    pub fn is_single(&self) -> bool {
        self.components.len() == 1 && self.components[0].0 == Prob::from_integer(1)
    }
}

impl<P: Into<Protocol>> ProtocolMixture<P> {
    pub fn into_any(self) -> AnyProtocol {
        self.map(Into::into)
    }
}

impl AnyProtocol {
    pub fn kind(&self) -> Option<ProtocolKind> {
        self.components.first().map(|(_, p)| p.kind())
    }

    pub fn domains(&self) -> (usize, usize) {
        self.components.first().map_or((0, 0), |(_, p)| p.domains())
    }

    pub fn size(&self) -> usize {
        self.components.first().map_or(0, |(_, p)| p.size())
    }
}
