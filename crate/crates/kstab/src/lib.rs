//! Exact verification toolkit for K-stability computations on Fano
//! threefolds obtained by blowing up quadrics along two conics.
//!
//! The crate computes, with exact rational arithmetic throughout:
//!
//! * Zariski decompositions of divisors on surfaces (an independent
//!   algorithm plus a verifier for declared decomposition schedules),
//! * Fujita `S`- and `beta`-invariants and Abban-Zhuang nested flag
//!   functionals from those schedules,
//! * Hilbert-Mumford stability classification for diagonal torus actions,
//! * quadric ranks, singular loci, Jacobian checks, and conic-bundle
//!   discriminants,
//! * a scenario runner that replays all of the above against expected
//!   values and renders a verification report.

pub mod exact;
pub mod geometry;
pub mod git;
pub mod lattice;
pub mod scenario;
pub mod stability;
pub mod zariski;
