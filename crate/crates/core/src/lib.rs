//! Synthesis, compilation, exact execution and auditing of two-party
//! protocols built from non-local boxes, oblivious transfer and secure AND.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf2`] bit-packed GF(2) linear algebra over communication matrices,
//!   algebraic normal forms, Fourier spectra and the ε-approximate rank oracle.
//! * [`lp`] a small exact rational simplex used by the ε-rank oracle.
//! * [`protocol`] protocol representations for every resource model, the
//!   exact rational execution engine, seeded sampling and the auditors.
//! * [`compile`] constructive transformations between resource models.
//! * [`library`] named protocols (inner product, disjointness, CHSH).
//! * [`correlations`] correlation-matrix simulation and the three-box
//!   simulation of two-outcome measurements on maximally entangled states.
//!
//! Data-parallel loops (sweeps, error profiles, Monte Carlo trials) go
//! through [`par`], which uses rayon when the `parallel` feature is enabled
//! and falls back to plain iterators otherwise. Results never depend on the
//! degree of parallelism.

pub mod compile;
pub mod correlations;
pub mod gf2;
pub mod library;
pub mod lp;
pub mod par;
pub mod protocol;
pub mod rational;
pub mod seed;

pub use gf2::{BitMatrix, Gf2Factorization, TruthTable};
pub use rational::Prob;
