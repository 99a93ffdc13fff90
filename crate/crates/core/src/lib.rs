//! Invariants of virtual link diagrams.
//!
//! Diagrams live in the detour quotient: classical crossings with slotted
//! half-edges and a perfect matching, no virtual crossings, no embedding.
//! On top of that the crate computes Kauffman bracket state sums and Jones
//! polynomials, Khovanov homology over GF(2) (any diagram) and over the
//! rationals (diagrams whose cube has no 1->1 edges), atom orientability,
//! orienting double covers with their derived invariants, and a seeded
//! Reidemeister-move invariance fuzzer.

pub mod diagram;
pub mod error;
pub mod poly;
pub mod resolve;
pub mod state_sum;

pub use diagram::{
    parse_diagram_json, parse_gauss, serialize_diagram, Crossing, HalfEdge, Sign, Stats,
    VirtualDiagram,
};
pub use error::{Error, Result};
pub use poly::{LaurentPoly, Poincare2};
pub use resolve::{circle_count, resolve_state, Resolution, State};
pub use state_sum::{bracket, bracket_a, jhat, jones_x, skein_oracle, Budget};

pub mod atoms;
pub mod khovanov;
pub mod linalg;

pub use atoms::{atom_of, atom_report, detect_one_one, is_orientable, Atom, AtomReport};
pub use khovanov::{
    build_cube, chain_complex, homology, kh, verify_d2, BettiTable, Field, GradedComplex,
    PerestroikaCube,
};

pub mod cover;

pub use cover::{cover_invariant, cycle_parity, double_cover, CyclePath, CycleStep, Parity};
