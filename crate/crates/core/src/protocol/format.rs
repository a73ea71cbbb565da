//! Line-oriented protocol files.
//!
//! ```text
//! # provenance: synth-rank source=sha256:...
//! protocol parallel-xor nx=1 ny=1 t=1
//! pbox 1: 01
//! qbox 1: 01
//! localA: 00
//! localB: 00
//! ```
//!
//! A section header is `name [index..] [reads=i,j]:`; its bits follow on the
//! same line or on the next lines, row-major over the section's domain. Box
//! labels are 1-based. Mixtures prefix each component with
//! `mix <k> <num>/<den>`.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::types::*;
use crate::rational::{parse_prob, Prob};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        msg: msg.into(),
    })
}

/// A protocol plus the optional provenance comment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolFile {
    pub provenance: Option<String>,
    pub protocol: AnyProtocol,
}

impl ProtocolFile {
    pub fn new(protocol: AnyProtocol) -> Self {
        ProtocolFile {
            provenance: None,
            protocol,
        }
    }

    pub fn with_provenance(protocol: AnyProtocol, provenance: impl Into<String>) -> Self {
        ProtocolFile {
            provenance: Some(provenance.into()),
            protocol,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(p) = &self.provenance {
            writeln!(s, "# provenance: {p}").unwrap();
        }
        s.push_str(&write_any(&self.protocol));
        s
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse_file(text)
    }
}

// ---------------------------------------------------------------------------
// Writing.

fn bits(t: &[bool]) -> String {
    t.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

struct Out(String);

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.0.push_str(s.as_ref());
        self.0.push('\n');
    }

    /// A `rows × cols` table: inline when each row has one entry.
    fn table(&mut self, header: &str, t: &[bool], cols: usize) {
        if cols <= 1 || t.len() <= cols {
            self.line(format!("{header}: {}", bits(t)));
        } else {
            self.line(format!("{header}:"));
            for row in t.chunks(cols) {
                self.line(bits(row));
            }
        }
    }

    fn step(&mut self, name: &str, s: &StepTable) {
        let header = if s.reads.is_empty() {
            name.to_string()
        } else {
            let r: Vec<String> = s.reads.iter().map(|b| (b + 1).to_string()).collect();
            format!("{name} reads={}", r.join(","))
        };
        self.table(&header, &s.bits, 1 << s.reads.len());
    }
}

fn dim(name: &str, size: usize) -> String {
    if size.is_power_of_two() {
        format!("n{name}={}", size.trailing_zeros())
    } else {
        format!("{name}s={size}")
    }
}

/// Serializes one deterministic protocol.
pub fn write_protocol(p: &Protocol) -> String {
    let (xs, ys) = p.domains();
    let mut o = Out(String::new());
    o.line(format!(
        "protocol {} {} {} t={}",
        p.kind().name(),
        dim("x", xs),
        dim("y", ys),
        p.size()
    ));
    match p {
        Protocol::ParallelXor(p) => {
            for (i, (pt, qt)) in p.p.iter().zip(&p.q).enumerate() {
                o.table(&format!("pbox {}", i + 1), pt, 1);
                o.table(&format!("qbox {}", i + 1), qt, 1);
            }
            o.table("localA", &p.local_a, 1);
            o.table("localB", &p.local_b, 1);
        }
        Protocol::Parallel(p) => {
            for (i, (pt, qt)) in p.p.iter().zip(&p.q).enumerate() {
                o.table(&format!("pbox {}", i + 1), pt, 1);
                o.table(&format!("qbox {}", i + 1), qt, 1);
            }
            o.table("outA", &p.out_a, 1 << p.boxes());
            o.table("outB", &p.out_b, 1 << p.boxes());
        }
        Protocol::Ordered(p) => {
            for (i, (a, b)) in p.steps_a.iter().zip(&p.steps_b).enumerate() {
                o.step(&format!("stepA {}", i + 1), a);
                o.step(&format!("stepB {}", i + 1), b);
            }
            o.step("outA", &p.out_a);
            o.step("outB", &p.out_b);
        }
        Protocol::General(p) => {
            let labels = |v: &[usize]| {
                v.iter()
                    .map(|b| (b + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            o.line(format!("orderA: {}", labels(&p.order_a)));
            for (j, s) in p.steps_a.iter().enumerate() {
                o.step(&format!("stepA {}", j + 1), s);
            }
            o.line(format!("orderB: {}", labels(&p.order_b)));
            for (j, s) in p.steps_b.iter().enumerate() {
                o.step(&format!("stepB {}", j + 1), s);
            }
            o.step("outA", &p.out_a);
            o.step("outB", &p.out_b);
        }
        Protocol::OneWay(p) => {
            let msg: Vec<String> = p.msg.iter().map(|m| m.to_string()).collect();
            o.line(format!("msg: {}", msg.join(" ")));
            o.table("outA", &p.out_a, 1);
            for (m, t) in p.out_b.iter().enumerate() {
                o.table(&format!("outB {m}"), t, 1);
            }
        }
        Protocol::TwoWay(p) => {
            for k in 0..p.depth {
                o.table(&format!("dir {}", k + 1), &p.alice_speaks[k], 1);
                for (prefix, t) in p.bit[k].iter().enumerate() {
                    o.table(&format!("bit {} {prefix}", k + 1), t, 1);
                }
            }
            for (tr, t) in p.out_a.iter().enumerate() {
                o.table(&format!("outA {tr}"), t, 1);
            }
            for (tr, t) in p.out_b.iter().enumerate() {
                o.table(&format!("outB {tr}"), t, 1);
            }
        }
        Protocol::Ot(p) => {
            let w: Vec<String> = p.randomness.iter().map(|w| w.to_string()).collect();
            o.line(format!("rand: {}", w.join(" ")));
            let r = p.random_values();
            for (i, c) in p.calls.iter().enumerate() {
                o.table(&format!("s0 {}", i + 1), &c.s0, r);
                o.table(&format!("s1 {}", i + 1), &c.s1, r);
                o.table(&format!("choice {}", i + 1), &c.choice, 1 << i);
            }
            o.table("outA", &p.out_a, r);
            o.table("outB", &p.out_b, 1 << p.calls.len());
        }
        Protocol::And(p) => {
            for (i, (pt, qt)) in p.p.iter().zip(&p.q).enumerate() {
                o.table(&format!("pgate {}", i + 1), pt, 1);
                o.table(&format!("qgate {}", i + 1), qt, 1);
            }
            o.table("outA", &p.out_a, 1 << p.gates());
        }
    }
    o.0
}

pub fn write_any(p: &AnyProtocol) -> String {
    if p.is_single() {
        return write_protocol(&p.components[0].1);
    }
    let mut s = String::new();
    for (k, (w, c)) in p.components.iter().enumerate() {
        writeln!(s, "mix {} {}/{}", k + 1, w.numer(), w.denom()).unwrap();
        s.push_str(&write_protocol(c));
    }
    s
}

// ---------------------------------------------------------------------------
// Reading.

#[derive(Debug)]
struct Section {
    line: usize,
    args: Vec<usize>,
    reads: Vec<usize>,
    words: Vec<String>,
    bits: Vec<bool>,
    /// Set when the inline text is not a bitstring, so no bit rows may follow.
    numeric_only: bool,
}

struct Block {
    line: usize,
    kind: ProtocolKind,
    x_size: usize,
    y_size: usize,
    t: usize,
    sections: HashMap<String, Vec<Section>>,
}

fn is_bits(s: &str) -> bool {
    s.chars().all(|c| c == '0' || c == '1' || c.is_whitespace())
}

fn push_bits(v: &mut Vec<bool>, s: &str) {
    v.extend(s.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1'));
}

fn parse_header(line: usize, rest: &str) -> Result<Block, FormatError> {
    let mut it = rest.split_whitespace();
    let kind_name = it.next().unwrap_or("");
    let Some(kind) = ProtocolKind::from_name(kind_name) else {
        return err(line, format!("unknown protocol kind '{kind_name}'"));
    };
    let (mut xs, mut ys, mut t) = (None, None, None);
    for tok in it {
        let Some((k, v)) = tok.split_once('=') else {
            return err(line, format!("bad header field '{tok}'"));
        };
        let Ok(v) = v.parse::<usize>() else {
            return err(line, format!("bad number in '{tok}'"));
        };
        let pow = |v: usize| {
            if v < 32 {
                Ok(1usize << v)
            } else {
                err(line, "input width too large")
            }
        };
        match k {
            "nx" => xs = Some(pow(v)?),
            "ny" => ys = Some(pow(v)?),
            "xs" => xs = Some(v),
            "ys" => ys = Some(v),
            "t" => t = Some(v),
            _ => return err(line, format!("unknown header field '{k}'")),
        }
    }
    match (xs, ys, t) {
        (Some(x_size), Some(y_size), Some(t)) => Ok(Block {
            line,
            kind,
            x_size,
            y_size,
            t,
            sections: HashMap::new(),
        }),
        _ => err(line, "header needs nx (or xs), ny (or ys) and t"),
    }
}

fn parse_section(line: usize, head: &str, rest: &str) -> Result<(String, Section), FormatError> {
    let mut it = head.split_whitespace();
    let name = it.next().unwrap_or("").to_string();
    let mut args = Vec::new();
    let mut reads = Vec::new();
    for tok in it {
        if let Some(list) = tok.strip_prefix("reads=") {
            for r in list.split(',').filter(|s| !s.is_empty()) {
                match r.parse::<usize>() {
                    Ok(b) if b >= 1 => reads.push(b - 1),
                    _ => return err(line, format!("bad box label '{r}'")),
                }
            }
        } else {
            match tok.parse::<usize>() {
                Ok(v) => args.push(v),
                Err(_) => return err(line, format!("bad section argument '{tok}'")),
            }
        }
    }
    let mut s = Section {
        line,
        args,
        reads,
        words: Vec::new(),
        bits: Vec::new(),
        numeric_only: true,
    };
    let rest = rest.trim();
    s.words = rest.split_whitespace().map(str::to_string).collect();
    if is_bits(rest) {
        push_bits(&mut s.bits, rest);
        s.numeric_only = false;
    }
    Ok((name, s))
}

fn parse_file(text: &str) -> Result<ProtocolFile, FormatError> {
    let mut provenance = None;
    let mut comps: Vec<(Option<Prob>, Option<Block>)> = Vec::new();
    let mut current: Option<Section> = None;
    let mut current_name = String::new();
    let mut seen_content = false;

    fn flush(comps: &mut [(Option<Prob>, Option<Block>)], name: &str, s: Option<Section>) {
        if let (Some(s), Some((_, Some(b)))) = (s, comps.last_mut()) {
            b.sections.entry(name.to_string()).or_default().push(s);
        }
    }

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(c) = l.strip_prefix('#') {
            if !seen_content {
                if let Some(p) = c.trim().strip_prefix("provenance:") {
                    provenance = Some(p.trim().to_string());
                }
            }
            continue;
        }
        seen_content = true;
        if let Some(rest) = l.strip_prefix("mix ") {
            flush(&mut comps, &current_name, current.take());
            let mut it = rest.split_whitespace();
            let _index = it.next();
            let Some(w) = it.next() else {
                return err(line, "mix line needs an index and a weight");
            };
            let w = parse_prob(w).map_err(|e| FormatError {
                line,
                msg: e.to_string(),
            })?;
            comps.push((Some(w), None));
            continue;
        }
        if let Some(rest) = l.strip_prefix("protocol ") {
            flush(&mut comps, &current_name, current.take());
            let block = parse_header(line, rest)?;
            match comps.last_mut() {
                Some((Some(_), slot @ None)) => *slot = Some(block),
                _ => {
                    if !comps.is_empty() && comps.iter().any(|(w, _)| w.is_some()) {
                        return err(line, "component without a mix line");
                    }
                    comps.push((None, Some(block)));
                }
            }
            continue;
        }
        if let Some((head, rest)) = l.split_once(':') {
            flush(&mut comps, &current_name, current.take());
            if !matches!(comps.last(), Some((_, Some(_)))) {
                return err(line, "section before protocol header");
            }
            let (name, s) = parse_section(line, head, rest)?;
            current_name = name;
            current = Some(s);
            continue;
        }
        if is_bits(l) {
            match current.as_mut() {
                Some(s) if !s.numeric_only => push_bits(&mut s.bits, l),
                _ => return err(line, "bits outside a section"),
            }
            continue;
        }
        return err(line, format!("unrecognised line '{l}'"));
    }
    flush(&mut comps, &current_name, current.take());

    if comps.is_empty() {
        return err(1, "no protocol found");
    }
    if comps.len() > 1 && comps.iter().any(|(w, _)| w.is_none()) {
        return err(1, "several protocols without mix lines");
    }
    let mut components = Vec::new();
    for (w, b) in comps {
        let Some(b) = b else {
            return err(text.lines().count(), "mix line without a protocol");
        };
        components.push((w.unwrap_or(Prob::from_integer(1)), build(b)?));
    }
    Ok(ProtocolFile {
        provenance,
        protocol: ProtocolMixture { components },
    })
}

impl Block {
    fn take(&mut self, name: &str, args: &[usize]) -> Result<Section, FormatError> {
        let list = self.sections.get_mut(name);
        let pos = list
            .as_ref()
            .and_then(|l| l.iter().position(|s| s.args == args));
        match (list, pos) {
            (Some(l), Some(p)) => Ok(l.swap_remove(p)),
            _ => {
                let a: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                let label = if a.is_empty() {
                    name.to_string()
                } else {
                    format!("{name} {}", a.join(" "))
                };
                err(self.line, format!("missing section '{label}'"))
            }
        }
    }

    fn bits(&mut self, name: &str, args: &[usize], want: usize) -> Result<Table, FormatError> {
        let s = self.take(name, args)?;
        if s.bits.len() != want {
            return err(
                s.line,
                format!("{name}: expected {want} bits, found {}", s.bits.len()),
            );
        }
        Ok(s.bits)
    }

    fn step(
        &mut self,
        name: &str,
        args: &[usize],
        domain: usize,
    ) -> Result<StepTable, FormatError> {
        let s = self.take(name, args)?;
        if s.reads.len() >= 32 {
            return err(s.line, "too many reads");
        }
        let want = domain << s.reads.len();
        if s.bits.len() != want {
            return err(
                s.line,
                format!("{name}: expected {want} bits, found {}", s.bits.len()),
            );
        }
        Ok(StepTable {
            reads: s.reads,
            bits: s.bits,
        })
    }

    fn words(&mut self, name: &str) -> Result<(usize, Vec<String>), FormatError> {
        let s = self.take(name, &[])?;
        Ok((s.line, s.words))
    }

    fn leftover(&self) -> Result<(), FormatError> {
        for (name, list) in &self.sections {
            if let Some(s) = list.first() {
                return err(s.line, format!("unexpected section '{name}'"));
            }
        }
        Ok(())
    }
}

fn numbers(line: usize, words: &[String]) -> Result<Vec<usize>, FormatError> {
    words
        .iter()
        .map(|w| {
            w.parse::<usize>().map_err(|_| FormatError {
                line,
                msg: format!("bad number '{w}'"),
            })
        })
        .collect()
}

fn build(mut b: Block) -> Result<Protocol, FormatError> {
    let (xs, ys, t) = (b.x_size, b.y_size, b.t);
    let big = |n: usize| {
        if n >= 24 {
            err(b.line, "t too large for a table")
        } else {
            Ok(())
        }
    };
    let p = match b.kind {
        ProtocolKind::ParallelXor => {
            let mut p = Vec::with_capacity(t);
            let mut q = Vec::with_capacity(t);
            for i in 1..=t {
                p.push(b.bits("pbox", &[i], xs)?);
                q.push(b.bits("qbox", &[i], ys)?);
            }
            let local_a = b.bits("localA", &[], xs)?;
            let local_b = b.bits("localB", &[], ys)?;
            Protocol::ParallelXor(ParallelXorProtocol {
                x_size: xs,
                y_size: ys,
                p,
                q,
                local_a,
                local_b,
            })
        }
        ProtocolKind::Parallel => {
            big(t)?;
            let mut p = Vec::with_capacity(t);
            let mut q = Vec::with_capacity(t);
            for i in 1..=t {
                p.push(b.bits("pbox", &[i], xs)?);
                q.push(b.bits("qbox", &[i], ys)?);
            }
            let out_a = b.bits("outA", &[], xs << t)?;
            let out_b = b.bits("outB", &[], ys << t)?;
            Protocol::Parallel(ParallelProtocol {
                x_size: xs,
                y_size: ys,
                p,
                q,
                out_a,
                out_b,
            })
        }
        ProtocolKind::Ordered => {
            let mut steps_a = Vec::with_capacity(t);
            let mut steps_b = Vec::with_capacity(t);
            for i in 1..=t {
                steps_a.push(b.step("stepA", &[i], xs)?);
                steps_b.push(b.step("stepB", &[i], ys)?);
            }
            let out_a = b.step("outA", &[], xs)?;
            let out_b = b.step("outB", &[], ys)?;
            Protocol::Ordered(OrderedNlbProtocol {
                x_size: xs,
                y_size: ys,
                steps_a,
                steps_b,
                out_a,
                out_b,
            })
        }
        ProtocolKind::General => {
            let mut order = |name: &str| -> Result<Vec<usize>, FormatError> {
                let (line, w) = b.words(name)?;
                numbers(line, &w)?
                    .into_iter()
                    .map(|l| {
                        if l >= 1 {
                            Ok(l - 1)
                        } else {
                            err(line, "box labels start at 1")
                        }
                    })
                    .collect()
            };
            let order_a = order("orderA")?;
            let order_b = order("orderB")?;
            let steps_a = (1..=order_a.len())
                .map(|j| b.step("stepA", &[j], xs))
                .collect::<Result<_, _>>()?;
            let steps_b = (1..=order_b.len())
                .map(|j| b.step("stepB", &[j], ys))
                .collect::<Result<_, _>>()?;
            let out_a = b.step("outA", &[], xs)?;
            let out_b = b.step("outB", &[], ys)?;
            Protocol::General(GeneralNlbProtocol {
                x_size: xs,
                y_size: ys,
                boxes: t,
                order_a,
                steps_a,
                order_b,
                steps_b,
                out_a,
                out_b,
            })
        }
        ProtocolKind::OneWay => {
            big(t)?;
            let (line, w) = b.words("msg")?;
            let msg = numbers(line, &w)?;
            if msg.len() != xs {
                return err(
                    line,
                    format!("msg: expected {xs} entries, found {}", msg.len()),
                );
            }
            let out_a = b.bits("outA", &[], xs)?;
            let out_b = (0..1usize << t)
                .map(|m| b.bits("outB", &[m], ys))
                .collect::<Result<_, _>>()?;
            Protocol::OneWay(OneWayProtocol {
                x_size: xs,
                y_size: ys,
                bits: t,
                msg,
                out_a,
                out_b,
            })
        }
        ProtocolKind::TwoWay => {
            big(t)?;
            let mut alice_speaks = Vec::with_capacity(t);
            let mut bit = Vec::with_capacity(t);
            for k in 1..=t {
                let dir = b.bits("dir", &[k], 1 << (k - 1))?;
                let mut level = Vec::with_capacity(dir.len());
                for (prefix, &alice) in dir.iter().enumerate() {
                    level.push(b.bits("bit", &[k, prefix], if alice { xs } else { ys })?);
                }
                alice_speaks.push(dir);
                bit.push(level);
            }
            let out_a = (0..1usize << t)
                .map(|tr| b.bits("outA", &[tr], xs))
                .collect::<Result<_, _>>()?;
            let out_b = (0..1usize << t)
                .map(|tr| b.bits("outB", &[tr], ys))
                .collect::<Result<_, _>>()?;
            Protocol::TwoWay(TwoWayTree {
                x_size: xs,
                y_size: ys,
                depth: t,
                alice_speaks,
                bit,
                out_a,
                out_b,
            })
        }
        ProtocolKind::Ot => {
            big(t)?;
            let (line, w) = b.words("rand")?;
            let randomness = w
                .iter()
                .map(|s| {
                    parse_prob(s).map_err(|e| FormatError {
                        line,
                        msg: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let r = randomness.len();
            let mut calls = Vec::with_capacity(t);
            for i in 1..=t {
                calls.push(OtCall {
                    s0: b.bits("s0", &[i], xs * r)?,
                    s1: b.bits("s1", &[i], xs * r)?,
                    choice: b.bits("choice", &[i], ys << (i - 1))?,
                });
            }
            let out_a = b.bits("outA", &[], xs * r)?;
            let out_b = b.bits("outB", &[], ys << t)?;
            Protocol::Ot(OtProtocol {
                x_size: xs,
                y_size: ys,
                randomness,
                calls,
                out_a,
                out_b,
            })
        }
        ProtocolKind::And => {
            big(t)?;
            let mut p = Vec::with_capacity(t);
            let mut q = Vec::with_capacity(t);
            for i in 1..=t {
                p.push(b.bits("pgate", &[i], xs)?);
                q.push(b.bits("qgate", &[i], ys)?);
            }
            let out_a = b.bits("outA", &[], xs << t)?;
            Protocol::And(AndProtocol {
                x_size: xs,
                y_size: ys,
                p,
                q,
                out_a,
            })
        }
    };
    b.leftover()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_xor_round_trip() {
        let text = "# provenance: test\nprotocol parallel-xor nx=1 ny=1 t=1\npbox 1: 01\nqbox 1: 01\nlocalA: 00\nlocalB: 00\n";
        let f = ProtocolFile::parse(text).unwrap();
        assert_eq!(f.provenance.as_deref(), Some("test"));
        assert_eq!(f.to_text(), text);
    }

    #[test]
    fn multiline_bits_and_mixtures() {
        let text = "mix 1 1/3\nprotocol and nx=1 ny=1 t=1\npgate 1: 11\nqgate 1: 01\noutA:\n01\n01\nmix 2 2/3\nprotocol and nx=1 ny=1 t=1\npgate 1: 00\nqgate 1: 00\noutA:\n00\n00\n";
        let f = ProtocolFile::parse(text).unwrap();
        assert_eq!(f.protocol.components.len(), 2);
        assert_eq!(f.protocol.components[0].0, Prob::new(1, 3));
        assert_eq!(f.to_text(), text);
    }

    #[test]
    fn errors_carry_lines() {
        let e =
            ProtocolFile::parse("protocol parallel-xor nx=1 ny=1 t=1\npbox 1: 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = ProtocolFile::parse("protocol bogus nx=1 ny=1 t=0\n").unwrap_err();
        assert!(e.msg.contains("bogus"));
    }
}
