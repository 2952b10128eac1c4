//! Generalised Legendrian racks and invariants of oriented Legendrian links.
//!
//! A GL-rack is a rack `(X, ∗)` together with two maps `u, d : X → X`
//! recording how strand labels change at up and down cusps of a front
//! diagram. This crate provides:
//!
//! - finite GL-racks as tables: validation, automorphisms, enumeration of
//!   Legendrian structures, named constructions, the coset construction and
//!   the homogeneous representation ([`algebra`]);
//! - front diagrams of oriented Legendrian links as Morse event words,
//!   with classical invariants and a Legendrian Reidemeister move engine
//!   ([`diagram`]);
//! - free GL-rack words, diagram presentations, coloring counts and
//!   enveloping groups ([`presentation`]);
//! - Legendrian (co)homology of finite GL-racks and the 2-cocycle solver
//!   ([`homology`]);
//! - Boltzmann weights and the group-ring state-sum invariant
//!   ([`statesum`]).
//!
//! All structures are immutable after construction and every operation is a
//! pure function of its inputs, so callers may run them concurrently
//! without coordination. Randomized operations take explicit seeds.

pub mod algebra;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod perm;
pub mod presentation;
pub mod snf;
pub mod statesum;

pub use error::{Error, Result};

/// Resource caps for exhaustive searches.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Largest rack order admitted to automorphism/isomorphism searches.
    pub search_order: usize,
    /// Largest number of tuples admitted to chain-group constructions.
    pub tuple_count: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { search_order: 8, tuple_count: 1_000_000 }
    }
}

impl Caps {
    /// Reads the `GLR_CAP` environment variable, when set, as an override of
    /// the exhaustive-search order cap. Values above the default tuple cap
    /// also raise the tuple cap.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(v) = std::env::var("GLR_CAP") {
            if let Ok(n) = v.trim().parse::<usize>() {
                caps.search_order = n;
                caps.tuple_count = caps.tuple_count.max(n);
            }
        }
        caps
    }
}
