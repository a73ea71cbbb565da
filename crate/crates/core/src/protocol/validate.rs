use std::fmt;

use super::types::*;
use crate::rational::{is_probability, Prob};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// A table does not cover its whole domain.
    Totality,
    /// A step reads the outcome of a box that is not yet available.
    ReadsFutureBox,
    /// A step or output reads a box label that does not exist.
    UnknownBox,
    /// A schedule uses a box twice or not at all.
    Schedule,
    /// A message or transcript value falls outside its range.
    Range,
    /// Malformed OT call structure.
    OtStructure,
    /// Mixture weights or components are inconsistent.
    Mixture,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::Totality => "totality",
            ViolationKind::ReadsFutureBox => "reads future box",
            ViolationKind::UnknownBox => "unknown box",
            ViolationKind::Schedule => "schedule",
            ViolationKind::Range => "range",
            ViolationKind::OtStructure => "ot structure",
            ViolationKind::Mixture => "mixture",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.name(), self.detail)
    }
}

#[derive(Default)]
struct Checker {
    found: Vec<Violation>,
}

impl Checker {
    fn push(&mut self, kind: ViolationKind, detail: String) {
        self.found.push(Violation { kind, detail });
    }

    fn len(&mut self, what: impl Fn() -> String, got: usize, want: usize) {
        if got != want {
            self.push(
                ViolationKind::Totality,
                format!("{} has {got} entries, expected {want}", what()),
            );
        }
    }

    fn tables(&mut self, name: &str, tables: &[Table], want: usize) {
        for (i, t) in tables.iter().enumerate() {
            self.len(|| format!("{name} {}", i + 1), t.len(), want);
        }
    }

    /// `allowed` holds the boxes the step may read.
    fn step(&mut self, name: &str, step: &StepTable, domain: usize, boxes: usize, allowed: u64) {
        for &b in &step.reads {
            if b >= boxes {
                self.push(
                    ViolationKind::UnknownBox,
                    format!("{name} reads box {}", b + 1),
                );
            } else if allowed >> b & 1 == 0 {
                self.push(
                    ViolationKind::ReadsFutureBox,
                    format!("{name} reads box {}", b + 1),
                );
            }
        }
        let mut sorted = step.reads.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != step.reads.len() {
            self.push(ViolationKind::Schedule, format!("{name} lists a box twice"));
        }
        if step.reads.len() < 64 {
            self.len(
                || name.to_string(),
                step.bits.len(),
                step.expected_len(domain),
            );
        } else {
            self.push(
                ViolationKind::Totality,
                format!("{name} reads too many boxes"),
            );
        }
    }

    fn order(&mut self, name: &str, order: &[usize], boxes: usize) {
        let mut seen = vec![false; boxes];
        for &b in order {
            if b >= boxes {
                self.push(
                    ViolationKind::UnknownBox,
                    format!("{name} schedules box {}", b + 1),
                );
            } else if std::mem::replace(&mut seen[b], true) {
                self.push(
                    ViolationKind::Schedule,
                    format!("{name} uses box {} twice", b + 1),
                );
            }
        }
        if let Some(b) = seen.iter().position(|s| !s) {
            self.push(
                ViolationKind::Schedule,
                format!("{name} never uses box {}", b + 1),
            );
        }
    }

    fn finish(self) -> Result<(), Vec<Violation>> {
        if self.found.is_empty() {
            Ok(())
        } else {
            Err(self.found)
        }
    }
}

fn all_boxes(t: usize) -> u64 {
    if t >= 64 {
        u64::MAX
    } else {
        (1u64 << t) - 1
    }
}

/// Checks one deterministic protocol. Never panics.
pub fn validate(p: &Protocol) -> Result<(), Vec<Violation>> {
    let mut c = Checker::default();
    match p {
        Protocol::ParallelXor(p) => {
            if p.p.len() != p.q.len() {
                c.push(
                    ViolationKind::Totality,
                    "pbox and qbox counts differ".into(),
                );
            }
            c.tables("pbox", &p.p, p.x_size);
            c.tables("qbox", &p.q, p.y_size);
            c.len(|| "localA".into(), p.local_a.len(), p.x_size);
            c.len(|| "localB".into(), p.local_b.len(), p.y_size);
        }
        Protocol::Parallel(p) => {
            if p.p.len() != p.q.len() {
                c.push(
                    ViolationKind::Totality,
                    "pbox and qbox counts differ".into(),
                );
            }
            c.tables("pbox", &p.p, p.x_size);
            c.tables("qbox", &p.q, p.y_size);
            let t = p.boxes();
            if t < 40 {
                c.len(|| "outA".into(), p.out_a.len(), p.x_size << t);
                c.len(|| "outB".into(), p.out_b.len(), p.y_size << t);
            } else {
                c.push(ViolationKind::Totality, "output tables too large".into());
            }
        }
        Protocol::Ordered(p) => {
            let t = p.boxes();
            if p.steps_b.len() != t {
                c.push(
                    ViolationKind::Schedule,
                    "stepA and stepB counts differ".into(),
                );
            }
            for (i, s) in p.steps_a.iter().enumerate() {
                c.step(&format!("stepA {}", i + 1), s, p.x_size, t, all_boxes(i));
            }
            for (i, s) in p.steps_b.iter().enumerate() {
                c.step(&format!("stepB {}", i + 1), s, p.y_size, t, all_boxes(i));
            }
            c.step("outA", &p.out_a, p.x_size, t, all_boxes(t));
            c.step("outB", &p.out_b, p.y_size, t, all_boxes(t));
        }
        Protocol::General(p) => {
            let t = p.boxes;
            c.order("orderA", &p.order_a, t);
            c.order("orderB", &p.order_b, t);
            if p.steps_a.len() != p.order_a.len() {
                c.push(
                    ViolationKind::Schedule,
                    "orderA and stepA counts differ".into(),
                );
            }
            if p.steps_b.len() != p.order_b.len() {
                c.push(
                    ViolationKind::Schedule,
                    "orderB and stepB counts differ".into(),
                );
            }
            for (side, order, steps, domain) in [
                ("A", &p.order_a, &p.steps_a, p.x_size),
                ("B", &p.order_b, &p.steps_b, p.y_size),
            ] {
                let mut used = 0u64;
                for (j, s) in steps.iter().enumerate() {
                    c.step(&format!("step{side} {}", j + 1), s, domain, t, used);
                    if let Some(&b) = order.get(j) {
                        if b < 64 {
                            used |= 1 << b;
                        }
                    }
                }
            }
            c.step("outA", &p.out_a, p.x_size, t, all_boxes(t));
            c.step("outB", &p.out_b, p.y_size, t, all_boxes(t));
        }
        Protocol::OneWay(p) => {
            if p.bits >= 32 {
                c.push(ViolationKind::Range, "message too long".into());
                return c.finish();
            }
            c.len(|| "msg".into(), p.msg.len(), p.x_size);
            c.len(|| "outA".into(), p.out_a.len(), p.x_size);
            c.len(|| "outB".into(), p.out_b.len(), 1 << p.bits);
            c.tables("outB", &p.out_b, p.y_size);
            for (x, &m) in p.msg.iter().enumerate() {
                if m >> p.bits != 0 {
                    c.push(
                        ViolationKind::Range,
                        format!("msg({x}) = {m} exceeds {} bits", p.bits),
                    );
                }
            }
        }
        Protocol::TwoWay(p) => {
            if p.depth >= 32 {
                c.push(ViolationKind::Range, "tree too deep".into());
                return c.finish();
            }
            c.len(|| "dir levels".into(), p.alice_speaks.len(), p.depth);
            c.len(|| "bit levels".into(), p.bit.len(), p.depth);
            for k in 0..p.depth.min(p.alice_speaks.len()).min(p.bit.len()) {
                c.len(|| format!("dir {}", k + 1), p.alice_speaks[k].len(), 1 << k);
                c.len(|| format!("bit {}", k + 1), p.bit[k].len(), 1 << k);
                for (prefix, (table, &alice)) in p.bit[k].iter().zip(&p.alice_speaks[k]).enumerate()
                {
                    let want = if alice { p.x_size } else { p.y_size };
                    c.len(|| format!("bit {} {prefix}", k + 1), table.len(), want);
                }
            }
            c.len(|| "outA".into(), p.out_a.len(), 1 << p.depth);
            c.len(|| "outB".into(), p.out_b.len(), 1 << p.depth);
            c.tables("outA", &p.out_a, p.x_size);
            c.tables("outB", &p.out_b, p.y_size);
        }
        Protocol::Ot(p) => {
            let r = p.random_values();
            if r == 0 {
                c.push(ViolationKind::OtStructure, "empty randomness domain".into());
            }
            check_weights(&mut c, p.randomness.iter());
            if p.calls.len() >= 32 {
                c.push(ViolationKind::OtStructure, "too many calls".into());
                return c.finish();
            }
            for (i, call) in p.calls.iter().enumerate() {
                c.len(|| format!("s0 {}", i + 1), call.s0.len(), p.x_size * r);
                c.len(|| format!("s1 {}", i + 1), call.s1.len(), p.x_size * r);
                c.len(
                    || format!("choice {}", i + 1),
                    call.choice.len(),
                    p.y_size << i,
                );
            }
            c.len(|| "outA".into(), p.out_a.len(), p.x_size * r);
            c.len(|| "outB".into(), p.out_b.len(), p.y_size << p.calls.len());
        }
        Protocol::And(p) => {
            if p.p.len() != p.q.len() {
                c.push(
                    ViolationKind::Totality,
                    "pgate and qgate counts differ".into(),
                );
            }
            c.tables("pgate", &p.p, p.x_size);
            c.tables("qgate", &p.q, p.y_size);
            if p.gates() < 40 {
                c.len(|| "outA".into(), p.out_a.len(), p.x_size << p.gates());
            } else {
                c.push(ViolationKind::Totality, "output table too large".into());
            }
        }
    }
    c.finish()
}

fn check_weights<'a>(c: &mut Checker, weights: impl Iterator<Item = &'a Prob>) {
    let mut total = Prob::from_integer(0);
    for w in weights {
        if !is_probability(w) {
            c.push(ViolationKind::Mixture, format!("weight {w} outside [0,1]"));
        }
        total += w;
    }
    if total != Prob::from_integer(1) {
        c.push(ViolationKind::Mixture, format!("weights sum to {total}"));
    }
}

/// Checks every component plus the mixture structure: positive weights
/// summing to one, one protocol kind, equal domains and equal sizes.
pub fn validate_any(p: &AnyProtocol) -> Result<(), Vec<Violation>> {
    let mut c = Checker::default();
    if p.components.is_empty() {
        c.push(ViolationKind::Mixture, "no components".into());
        return c.finish();
    }
    check_weights(&mut c, p.components.iter().map(|(w, _)| w));
    let (_, first) = &p.components[0];
    for (i, (w, comp)) in p.components.iter().enumerate() {
        if *w <= Prob::from_integer(0) {
            c.push(
                ViolationKind::Mixture,
                format!("component {} has weight {w}", i + 1),
            );
        }
        if comp.kind() != first.kind() {
            c.push(
                ViolationKind::Mixture,
                format!("component {} has a different kind", i + 1),
            );
        } else if comp.size() != first.size() {
            c.push(
                ViolationKind::Mixture,
                format!("component {} has a different size", i + 1),
            );
        }
        if comp.domains() != first.domains() {
            c.push(
                ViolationKind::Mixture,
                format!("component {} has different domains", i + 1),
            );
        }
        if let Err(v) = validate(comp) {
            for mut v in v {
                if p.components.len() > 1 {
                    v.detail = format!("component {}: {}", i + 1, v.detail);
                }
                c.found.push(v);
            }
        }
    }
    c.finish()
}
