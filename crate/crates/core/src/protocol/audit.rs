use std::collections::BTreeMap;
use std::fmt;

use super::engine::{nlb_leaves, Exec, ExecError, Policy};
use super::types::*;
use crate::gf2::TruthTable;
use crate::par::{self, Mode};
use crate::rational::{pow_half, Prob};

/// Per-input error probabilities, row-major over `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorProfile {
    pub x_size: usize,
    pub y_size: usize,
    pub errors: Vec<Prob>,
    pub worst: Prob,
}

impl ErrorProfile {
    pub fn get(&self, x: usize, y: usize) -> Prob {
        self.errors[x * self.y_size + y]
    }

    pub fn is_exact(&self) -> bool {
        self.worst == Prob::from_integer(0)
    }
}

/// Exact `Pr[a ⊕ b ≠ f(x, y)]` for every input pair.
pub fn error_profile<P: Exec + ?Sized>(p: &P, f: &TruthTable) -> Result<ErrorProfile, ExecError> {
    error_profile_with(p, f, Mode::default())
}

pub fn error_profile_with<P: Exec + ?Sized>(
    p: &P,
    f: &TruthTable,
    mode: Mode,
) -> Result<ErrorProfile, ExecError> {
    p.check()?;
    let (xs, ys) = p.domains();
    if xs != f.x_size() || ys != f.y_size() {
        return Err(ExecError::Domain {
            x: f.x_size(),
            y: f.y_size(),
        });
    }
    let errors = par::map_range(mode, xs * ys, |i| {
        let (x, y) = (i / ys, i % ys);
        let d = p.exact_unchecked(x, y, Policy::default());
        let one = d.parity_one();
        if f.eval(x, y) {
            Prob::from_integer(1) - one
        } else {
            one
        }
    });
    let worst = errors.iter().copied().max().unwrap_or_default();
    Ok(ErrorProfile {
        x_size: xs,
        y_size: ys,
        errors,
        worst,
    })
}

/// Error profile against the majority parity of each input, i.e. the least
/// error achievable by any reference function.
pub fn self_error_profile<P: Exec + ?Sized>(p: &P) -> Result<ErrorProfile, ExecError> {
    p.check()?;
    let (xs, ys) = p.domains();
    let errors = par::map_range(Mode::default(), xs * ys, |i| {
        let d = p.exact_unchecked(i / ys, i % ys, Policy::default());
        let one = d.parity_one();
        one.min(Prob::from_integer(1) - one)
    });
    let worst = errors.iter().copied().max().unwrap_or_default();
    Ok(ErrorProfile {
        x_size: xs,
        y_size: ys,
        errors,
        worst,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuditError {
    Exec(ExecError),
    /// The audit does not apply to this protocol kind.
    WrongKind(&'static str),
    /// A player's view distribution depends on the other input:
    /// `own` fixed, `other` vs `other2` differ.
    Signaling {
        side: Side,
        component: usize,
        own: usize,
        other: usize,
        other2: usize,
    },
    /// Alice's output differs from `f(x, y)`.
    AndIncorrect {
        x: usize,
        y: usize,
    },
    /// Gate vectors on `(x, y)` and `(x, y2)` are not determined by `(x, f)`.
    AndLeak {
        x: usize,
        y: usize,
        y2: usize,
    },
    /// Bob's received bits are not uniform and input independent.
    OtLeak {
        component: usize,
        x: usize,
        y: usize,
        reference: Vec<Prob>,
        observed: Vec<Prob>,
    },
}

impl From<ExecError> for AuditError {
    fn from(e: ExecError) -> Self {
        AuditError::Exec(e)
    }
}

fn fmt_dist(v: &[Prob]) -> String {
    v.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for AuditError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditError::Exec(e) => write!(f, "{e}"),
            AuditError::WrongKind(k) => write!(f, "audit does not apply: {k}"),
            AuditError::Signaling {
                side,
                component,
                own,
                other,
                other2,
            } => {
                let (me, you) = match side {
                    Side::Alice => ("x", "y"),
                    Side::Bob => ("y", "x"),
                };
                write!(
                    f,
                    "{side:?} view differs in component {} for {me}={own} between {you}={other} and {you}={other2}",
                    component + 1
                )
            }
            AuditError::AndIncorrect { x, y } => write!(f, "output differs from f at ({x}, {y})"),
            AuditError::AndLeak { x, y, y2 } => write!(
                f,
                "gate vector not determined by (x, f(x,y)): x={x}, y={y}, y'={y2}"
            ),
            AuditError::OtLeak {
                component,
                x,
                y,
                reference,
                observed,
            } => write!(
                f,
                "received bits in component {} at x={x}, y={y}: [{}] vs uniform [{}]",
                component + 1,
                fmt_dist(observed),
                fmt_dist(reference)
            ),
        }
    }
}

impl std::error::Error for AuditError {}

type View = BTreeMap<(u64, bool), u64>;

fn views(p: &Protocol, x: usize, y: usize, side: Side) -> View {
    let mut v = View::new();
    for l in nlb_leaves(p, x, y, Policy::default()).expect("nlb protocol") {
        let key = match side {
            Side::Alice => (l.outcomes_a, l.a),
            Side::Bob => (l.outcomes_b, l.b),
        };
        *v.entry(key).or_default() += 1;
    }
    v
}

/// For every component and every own input, each side's view (its box
/// outcomes and its output) has the same law for all inputs of the other
/// side. Shared randomness is part of both views, so equality per component
/// implies equality of the combined law.
pub fn nonsignaling_audit(p: &AnyProtocol) -> Result<(), AuditError> {
    p.check()?;
    if !p.kind().is_some_and(|k| k.is_nlb()) {
        return Err(AuditError::WrongKind("not an NLB protocol"));
    }
    let (xs, ys) = p.domains();
    for (c, (_, comp)) in p.components.iter().enumerate() {
        for (side, own_n, other_n) in [(Side::Alice, xs, ys), (Side::Bob, ys, xs)] {
            let found = par::map_range(Mode::default(), own_n, |own| {
                let at = |other: usize| match side {
                    Side::Alice => views(comp, own, other, side),
                    Side::Bob => views(comp, other, own, side),
                };
                let reference = at(0);
                (1..other_n)
                    .find(|&o| at(o) != reference)
                    .map(|o| AuditError::Signaling {
                        side,
                        component: c,
                        own,
                        other: 0,
                        other2: o,
                    })
            });
            if let Some(e) = found.into_iter().flatten().next() {
                return Err(e);
            }
        }
    }
    Ok(())
}

/// Correctness plus Alice-privacy of Bob's input for a secure-AND protocol.
/// Bob receives nothing, so his privacy holds by construction.
pub fn privacy_audit_and(p: &AndProtocol, f: &TruthTable) -> Result<(), AuditError> {
    let proto: Protocol = p.clone().into();
    proto.check()?;
    if p.x_size != f.x_size() || p.y_size != f.y_size() {
        return Err(AuditError::Exec(ExecError::Domain {
            x: f.x_size(),
            y: f.y_size(),
        }));
    }
    for x in 0..p.x_size {
        let mut seen: [Option<(usize, u64)>; 2] = [None, None];
        for y in 0..p.y_size {
            let fx = f.eval(x, y);
            if p.output(x, y) != fx {
                return Err(AuditError::AndIncorrect { x, y });
            }
            let v = p.gate_outputs(x, y);
            match seen[fx as usize] {
                None => seen[fx as usize] = Some((y, v)),
                Some((y0, v0)) if v0 != v => return Err(AuditError::AndLeak { x, y: y0, y2: y }),
                _ => {}
            }
        }
    }
    Ok(())
}

/// For every `(x, y)` Bob's received OT bits must be exactly uniform on
/// `{0,1}^calls`, which makes them independent of `x`. Alice receives
/// nothing and there is no other communication.
pub fn privacy_audit_ot(p: &AnyProtocol) -> Result<(), AuditError> {
    p.check()?;
    if p.kind() != Some(ProtocolKind::Ot) {
        return Err(AuditError::WrongKind("not an OT protocol"));
    }
    let (xs, ys) = p.domains();
    for (c, (_, comp)) in p.components.iter().enumerate() {
        let Protocol::Ot(ot) = comp else {
            unreachable!()
        };
        let calls = ot.calls.len();
        let uniform = vec![pow_half(calls as u32); 1 << calls];
        let found = par::map_range(Mode::default(), xs * ys, |i| {
            let (x, y) = (i / ys, i % ys);
            let mut dist = vec![Prob::from_integer(0); 1 << calls];
            for (r, w) in ot.randomness.iter().enumerate() {
                let (received, _, _) = ot.run(x, y, r);
                dist[received as usize] += w;
            }
            (dist != uniform).then(|| AuditError::OtLeak {
                component: c,
                x,
                y,
                reference: uniform.clone(),
                observed: dist,
            })
        });
        if let Some(e) = found.into_iter().flatten().next() {
            return Err(e);
        }
    }
    Ok(())
}
