//! Two-outcome measurements on a maximally entangled state: the
//! communication protocol (Alice sends two bits) and its three-box version.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::par::{self, Mode};
use crate::seed::{rng_from_seed, trial_rng};

pub const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RtError {
    #[error("vector has dimension {got}, expected {want}")]
    Dimension { got: usize, want: usize },
    #[error("vector norm {0} is not 1")]
    NotUnit(f64),
    #[error("projector rows are not orthonormal (deviation {0})")]
    NotOrthonormal(f64),
    #[error("dimension must be at least 3, got {0}")]
    TooSmall(usize),
}

/// Map applied to both unit vectors before projection.
pub type Transform = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub struct RtContext {
    pub dim: usize,
    /// Three orthonormal rows of length `dim`.
    pub g: [Vec<f64>; 3],
    pub transform: Transform,
    pub seed: u64,
}

impl fmt::Debug for RtContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RtContext")
            .field("dim", &self.dim)
            .field("g", &self.g)
            .field("seed", &self.seed)
            .finish()
    }
}

fn identity_transform() -> Transform {
    Arc::new(|v: &[f64]| v.to_vec())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Gram–Schmidt on three standard Gaussian rows.
pub fn random_projector(dim: usize, rng: &mut ChaCha8Rng) -> [Vec<f64>; 3] {
    loop {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(3);
        for _ in 0..3 {
            let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            for r in &rows {
                let d = dot(&v, r);
                v.iter_mut().zip(r).for_each(|(a, b)| *a -= d * b);
            }
            let n = norm(&v);
            if n < 1e-6 {
                break;
            }
            v.iter_mut().for_each(|a| *a /= n);
            rows.push(v);
        }
        if let Ok(g) = <[Vec<f64>; 3]>::try_from(rows) {
            return g;
        }
    }
}

/// A uniformly random unit vector.
pub fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-9 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

impl RtContext {
    /// Projector drawn from `seed`; identity transform.
    pub fn random(dim: usize, seed: u64) -> Result<Self, RtError> {
        if dim < 3 {
            return Err(RtError::TooSmall(dim));
        }
        let g = random_projector(dim, &mut rng_from_seed(seed));
        Ok(RtContext {
            dim,
            g,
            transform: identity_transform(),
            seed,
        })
    }

    /// `dim = 3`, `G = I`, identity transform.
    pub fn identity3() -> Self {
        let e = |i: usize| (0..3).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
        RtContext {
            dim: 3,
            g: [e(0), e(1), e(2)],
            transform: identity_transform(),
            seed: 0,
        }
    }

    pub fn with_transform(mut self, t: Transform) -> Self {
        self.transform = t;
        self
    }

    pub fn check(&self) -> Result<(), RtError> {
        let mut dev: f64 = 0.0;
        for i in 0..3 {
            if self.g[i].len() != self.dim {
                return Err(RtError::Dimension {
                    got: self.g[i].len(),
                    want: self.dim,
                });
            }
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((dot(&self.g[i], &self.g[j]) - want).abs());
            }
        }
        if dev > UNIT_TOLERANCE {
            return Err(RtError::NotOrthonormal(dev));
        }
        Ok(())
    }

    fn unit(&self, v: &[f64]) -> Result<(), RtError> {
        if v.len() != self.dim {
            return Err(RtError::Dimension {
                got: v.len(),
                want: self.dim,
            });
        }
        let n = norm(v);
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(RtError::NotUnit(n));
        }
        Ok(())
    }

    /// `G · C(v)`, with both input and transformed vector checked.
    pub fn project(&self, v: &[f64]) -> Result<[f64; 3], RtError> {
        self.unit(v)?;
        let c = (self.transform)(v);
        self.unit(&c)?;
        Ok([
            dot(&self.g[0], &c),
            dot(&self.g[1], &c),
            dot(&self.g[2], &c),
        ])
    }
}

/// `sgn` with `sgn(0) = +1`.
pub fn sgn(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

fn z_dot(v: &[f64; 3], c1: i8, c2: i8) -> f64 {
    v[0] + c1 as f64 * v[1] + c2 as f64 * v[2]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RtOutcome {
    pub a: i8,
    pub b: i8,
}

impl RtOutcome {
    pub fn product(&self) -> i8 {
        self.a * self.b
    }
}

/// Alice outputs `α₀ = sgn(x″₀)` and sends `c_i = α₀ α_i`; Bob outputs
/// `sgn(y″ · (1, c₁, c₂))`.
pub fn rt_comm(x: &[f64], y: &[f64], ctx: &RtContext) -> Result<RtOutcome, RtError> {
    let (alpha0, c1, c2, yv) = rt_setup(x, y, ctx)?;
    Ok(RtOutcome {
        a: alpha0,
        b: sgn(z_dot(&yv, c1, c2)),
    })
}

fn rt_setup(x: &[f64], y: &[f64], ctx: &RtContext) -> Result<(i8, i8, i8, [f64; 3]), RtError> {
    let xv = ctx.project(x)?;
    let yv = ctx.project(y)?;
    let alpha: [i8; 3] = [sgn(xv[0]), sgn(xv[1]), sgn(xv[2])];
    Ok((alpha[0], alpha[0] * alpha[1], alpha[0] * alpha[2], yv))
}

/// Box labels in order.
pub const RT_BOXES: [(i8, i8); 3] = [(1, -1), (-1, 1), (-1, -1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RtNlbOutcome {
    pub a: i8,
    pub b: i8,
    pub boxes: usize,
    pub alice_inputs: [bool; 3],
    pub bob_inputs: [bool; 3],
    pub alice_outcomes: [bool; 3],
    pub bob_outcomes: [bool; 3],
}

impl RtNlbOutcome {
    pub fn product(&self) -> i8 {
        self.a * self.b
    }
}

/// The message `(c₁, c₂)` replaced by three boxes. Alice feeds 1 into the box
/// labelled `(c₁, c₂)` (none when it is `(1, 1)`); Bob feeds into box `m`
/// whether `sgn(y″ · z_m)` differs from `sgn(y″ · z_{1,1})`. Box outcomes are
/// drawn from `box_seed`.
pub fn rt_nlb(
    x: &[f64],
    y: &[f64],
    ctx: &RtContext,
    box_seed: u64,
) -> Result<RtNlbOutcome, RtError> {
    let (alpha0, c1, c2, yv) = rt_setup(x, y, ctx)?;
    let base = sgn(z_dot(&yv, 1, 1));
    let mut rng = rng_from_seed(box_seed);
    let mut out = RtNlbOutcome {
        a: alpha0,
        b: base,
        boxes: RT_BOXES.len(),
        alice_inputs: [false; 3],
        bob_inputs: [false; 3],
        alice_outcomes: [false; 3],
        bob_outcomes: [false; 3],
    };
    let (mut pa, mut pb) = (false, false);
    for (i, &(m1, m2)) in RT_BOXES.iter().enumerate() {
        let ai = (m1, m2) == (c1, c2);
        let bi = sgn(z_dot(&yv, m1, m2)) != base;
        let oa: bool = rng.gen();
        let ob = oa ^ (ai & bi);
        out.alice_inputs[i] = ai;
        out.bob_inputs[i] = bi;
        out.alice_outcomes[i] = oa;
        out.bob_outcomes[i] = ob;
        pa ^= oa;
        pb ^= ob;
    }
    if pa {
        out.a = -out.a;
    }
    if pb {
        out.b = -out.b;
    }
    Ok(out)
}

/// Aggregates of a coupled Monte Carlo run.
#[derive(Clone, Debug, PartialEq)]
pub struct RtSummary {
    pub dim: usize,
    pub trials: u64,
    pub sum_a: i64,
    pub sum_b: i64,
    pub sum_ab: i64,
    /// Trials where the three-box product differs from the message product.
    pub violations: u64,
    /// Trials that did not use exactly three boxes.
    pub box_count_violations: u64,
}

impl RtSummary {
    pub fn mean_a(&self) -> f64 {
        self.sum_a as f64 / self.trials as f64
    }
    pub fn mean_b(&self) -> f64 {
        self.sum_b as f64 / self.trials as f64
    }
    pub fn mean_ab(&self) -> f64 {
        self.sum_ab as f64 / self.trials as f64
    }
    /// The `4/√N` tolerance for the means.
    pub fn tolerance(&self) -> f64 {
        4.0 / (self.trials as f64).sqrt()
    }
}

/// One trial: fresh projector, random unit inputs and box randomness, all
/// derived from `(seed, index)`.
pub fn rt_trial(dim: usize, seed: u64, index: u64) -> Result<(RtOutcome, RtNlbOutcome), RtError> {
    let mut rng = trial_rng(seed, index);
    let g = random_projector(dim, &mut rng);
    let ctx = RtContext {
        dim,
        g,
        transform: identity_transform(),
        seed,
    };
    let x = random_unit(dim, &mut rng);
    let y = random_unit(dim, &mut rng);
    let box_seed: u64 = rng.gen();
    Ok((rt_comm(&x, &y, &ctx)?, rt_nlb(&x, &y, &ctx, box_seed)?))
}

pub fn rt_trials(dim: usize, trials: u64, seed: u64, mode: Mode) -> Result<RtSummary, RtError> {
    if dim < 3 {
        return Err(RtError::TooSmall(dim));
    }
    let runs = par::try_map_range(mode, trials as usize, |i| rt_trial(dim, seed, i as u64))?;
    let mut s = RtSummary {
        dim,
        trials,
        sum_a: 0,
        sum_b: 0,
        sum_ab: 0,
        violations: 0,
        box_count_violations: 0,
    };
    for (comm, nlb) in runs {
        s.sum_a += nlb.a as i64;
        s.sum_b += nlb.b as i64;
        s.sum_ab += nlb.product() as i64;
        s.violations += (nlb.product() != comm.product()) as u64;
        s.box_count_violations += (nlb.boxes != 3) as u64;
    }
    Ok(s)
}
