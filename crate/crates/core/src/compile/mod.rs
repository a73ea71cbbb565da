//! Constructive transformations between resource models.

mod circuit;
mod comm;
mod crypto;
mod error;
mod normalize;
mod synth;

pub use circuit::{circuit_to_nlb, disj_circuit, CircuitInput, DistributedCircuit, Gate};
pub use comm::{oneway_to_parallel, twoway_to_parallel, MAX_TREE_DEPTH};
pub use crypto::{and_from_oneway, oneway_from_and, ordered_to_ot, MAX_AND_GATES, MAX_OT_BOXES};
pub use error::CompileError;
pub use normalize::{
    independence_reduce, is_exact, xor_normalize_general, xor_normalize_ordered,
    xor_normalize_parallel, MAX_TABLE_BOXES,
};
pub use synth::{d_oneway, synth_oneway, synth_rank, synth_vandam};

use crate::protocol::{AnyProtocol, Protocol, ProtocolKind};

/// Source and target sizes of one compilation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompilerReport {
    pub compiler: &'static str,
    /// Boxes, message bits, depth or gates of the source.
    pub source_size: usize,
    /// Boxes, calls or gates of the target.
    pub target_size: usize,
    /// Upper bound on `target_size` the construction guarantees.
    pub bound: Option<usize>,
}

impl CompilerReport {
    pub fn within_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.target_size <= b)
    }
}

/// Which compiler [`compile_any`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compiler {
    OneWay,
    TwoWay,
    OrderedToOt,
    AndFromOneWay,
    XorNormalize,
    IndependenceReduce,
}

impl Compiler {
    pub fn name(self) -> &'static str {
        match self {
            Compiler::OneWay => "oneway-to-parallel",
            Compiler::TwoWay => "twoway-to-parallel",
            Compiler::OrderedToOt => "ordered-to-ot",
            Compiler::AndFromOneWay => "and-from-oneway",
            Compiler::XorNormalize => "xor-normalize",
            Compiler::IndependenceReduce => "independence-reduce",
        }
    }
}

fn pow2_minus_one(bits: usize) -> usize {
    if bits >= usize::BITS as usize {
        usize::MAX
    } else {
        (1usize << bits) - 1
    }
}

/// Applies one compiler to every component of a (possibly mixed) protocol.
pub fn compile_any(
    p: &AnyProtocol,
    c: Compiler,
) -> Result<(AnyProtocol, CompilerReport), CompileError> {
    let source_size = p.size();
    let out = p
        .clone()
        .try_map(|comp| -> Result<Protocol, CompileError> {
            Ok(match (c, comp) {
                (Compiler::OneWay, Protocol::OneWay(o)) => oneway_to_parallel(&o)?.into(),
                (Compiler::TwoWay, Protocol::TwoWay(t)) => twoway_to_parallel(&t)?.into(),
                (Compiler::OrderedToOt, Protocol::Ordered(o)) => ordered_to_ot(&o)?.into(),
                (Compiler::AndFromOneWay, Protocol::OneWay(o)) => and_from_oneway(&o)?.into(),
                (Compiler::XorNormalize, Protocol::Parallel(q)) => {
                    xor_normalize_parallel(&q)?.into()
                }
                (Compiler::XorNormalize, Protocol::ParallelXor(q)) => {
                    xor_normalize_parallel(&q.to_parallel())?.into()
                }
                (Compiler::XorNormalize, Protocol::Ordered(o)) => xor_normalize_ordered(&o)?.into(),
                (Compiler::XorNormalize, Protocol::General(g)) => xor_normalize_general(&g)?.into(),
                (Compiler::IndependenceReduce, Protocol::Parallel(q)) => {
                    independence_reduce(&q)?.into()
                }
                (Compiler::IndependenceReduce, Protocol::ParallelXor(q)) => {
                    independence_reduce(&q.to_parallel())?.into()
                }
                (Compiler::OneWay | Compiler::AndFromOneWay, _) => {
                    return Err(CompileError::WrongKind("oneway"))
                }
                (Compiler::TwoWay, _) => return Err(CompileError::WrongKind("twoway")),
                (Compiler::OrderedToOt, _) => return Err(CompileError::WrongKind("ordered")),
                (Compiler::XorNormalize, _) => {
                    return Err(CompileError::WrongKind("an NLB protocol"))
                }
                (Compiler::IndependenceReduce, _) => {
                    return Err(CompileError::WrongKind("parallel"))
                }
            })
        })?;
    let out = pad_mixture(out);
    let target_size = out.size();
    let bound = match c {
        Compiler::OneWay | Compiler::TwoWay => Some(pow2_minus_one(source_size)),
        Compiler::OrderedToOt | Compiler::IndependenceReduce => Some(source_size),
        Compiler::AndFromOneWay => Some(pow2_minus_one(source_size).saturating_add(1)),
        Compiler::XorNormalize => Some(source_size + 2),
    };
    Ok((
        out,
        CompilerReport {
            compiler: c.name(),
            source_size,
            target_size,
            bound,
        },
    ))
}

/// Pads parallel XOR components with all-zero boxes so that every component
/// of a mixture has the same box count.
pub fn pad_mixture(mut p: AnyProtocol) -> AnyProtocol {
    if p.kind() != Some(ProtocolKind::ParallelXor) {
        return p;
    }
    let t = p
        .components
        .iter()
        .map(|(_, c)| c.size())
        .max()
        .unwrap_or(0);
    for (_, c) in p.components.iter_mut() {
        if let Protocol::ParallelXor(q) = c {
            while q.p.len() < t {
                q.p.push(vec![false; q.x_size]);
                q.q.push(vec![false; q.y_size]);
            }
        }
    }
    p
}
