//! The perestroika cube and bigraded Khovanov homology.
//!
//! Vertex spaces are tensor powers of the two-dimensional graded space
//! `V = <v+ (degree 1), v- (degree -1)>`, one factor per circle of the
//! state, degree-shifted by the height. Cube edges act by the Frobenius
//! multiplication (merge), comultiplication (split), or the zero map on
//! 1->1 transitions; the last forces GF(2) coefficients unless the cube
//! has no such edges. The complex is `C = Q'(|L|) {n+ - 2n-} [n-]`, with
//! internal height `beta` in `0..=n` and both shifts applied when tables
//! are emitted.

mod complex;

pub use complex::{chain_complex, homology, kh, verify_d2, BettiTable, FailedFace, GradedComplex};

use crate::diagram::VirtualDiagram;
use crate::error::{Error, Result};
use crate::resolve::{resolve_all, State};
use crate::state_sum::Budget;

/// Coefficient field for homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    GF2,
    Rational,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::GF2 => write!(f, "z2"),
            Field::Rational => write!(f, "q"),
        }
    }
}

/// Basis maps of the Frobenius structure on `V`; `true` is `v+`, `false`
/// is `v-`.
pub mod frobenius {
    /// Multiplication: `v+` is the unit and `v- v- = 0`.
    pub fn m(a: bool, b: bool) -> Option<bool> {
        match (a, b) {
            (true, true) => Some(true),
            (true, false) | (false, true) => Some(false),
            (false, false) => None,
        }
    }

    /// Comultiplication: `v+ -> v+ v- + v- v+`, `v- -> v- v-`.
    pub fn delta(a: bool) -> &'static [(bool, bool)] {
        if a {
            &[(true, false), (false, true)]
        } else {
            &[(false, false)]
        }
    }
}

/// How the circles transform along one cube edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionKind {
    /// Two circles merge into one (gamma drops by one).
    Merge,
    /// One circle splits into two.
    Split,
    /// One circle resolves to one circle; the differential is zero.
    OneOne,
}

/// Marker inside [`EdgeTransition::dst_from_src`] for active circles.
pub const ACTIVE: u8 = u8::MAX;

/// Circle bookkeeping of one cube edge `s -> s.flip(k)`. Stored inline so
/// transitions can be recomputed in hot loops without allocation.
#[derive(Clone, Debug)]
pub struct EdgeTransition {
    pub kind: TransitionKind,
    src_active: [u8; 2],
    src_active_len: u8,
    dst_active: [u8; 2],
    dst_active_len: u8,
    dst_from_src: [u8; 64],
    dst_len: u8,
}

impl EdgeTransition {
    /// Affected circle indices in the source state (one or two).
    pub fn src_active(&self) -> &[u8] {
        &self.src_active[..self.src_active_len as usize]
    }

    /// Affected circle indices in the target state.
    pub fn dst_active(&self) -> &[u8] {
        &self.dst_active[..self.dst_active_len as usize]
    }

    /// For each target circle, the untouched source circle it continues,
    /// or [`ACTIVE`].
    pub fn dst_from_src(&self) -> &[u8] {
        &self.dst_from_src[..self.dst_len as usize]
    }
}

/// The state cube with circle data at every vertex.
pub struct PerestroikaCube {
    n: usize,
    half_edges: usize,
    free_loops: u32,
    states: Vec<(u16, Vec<u8>)>,
}

impl PerestroikaCube {
    /// Resolve every state of the diagram. Gamma at each vertex matches
    /// `resolve_state` by construction.
    pub fn build(d: &VirtualDiagram, budget: Budget) -> Result<Self> {
        budget.check(d.crossing_count())?;
        Ok(PerestroikaCube {
            n: d.crossing_count(),
            half_edges: 4 * d.crossing_count(),
            free_loops: d.free_loops(),
            states: resolve_all(d),
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.n
    }

    pub fn gamma(&self, s: State) -> usize {
        self.states[s.bits() as usize].0 as usize
    }

    pub fn states(&self) -> impl Iterator<Item = State> + '_ {
        State::all(self.n)
    }

    /// Transition data of the edge `s -> s.flip(k)`; `s` must have bit `k`
    /// clear.
    pub fn transition(&self, s: State, k: usize) -> EdgeTransition {
        debug_assert!(!s.bit(k));
        let t = s.flip(k);
        let (gs, ref cs) = self.states[s.bits() as usize];
        let (gt, ref ct) = self.states[t.bits() as usize];
        let (gs, gt) = (gs as usize, gt as usize);
        debug_assert!(gt <= 64, "more than 64 circles in one state");
        let dedup4 = |v: &[u8; 4]| -> ([u8; 2], u8) {
            let mut out = [0u8; 2];
            let mut len = 0u8;
            for &c in v {
                if !out[..len as usize].contains(&c) {
                    out[len as usize] = c;
                    len += 1;
                }
            }
            out[..len as usize].sort_unstable();
            (out, len)
        };
        let (src_active, src_active_len) =
            dedup4(&[cs[4 * k], cs[4 * k + 1], cs[4 * k + 2], cs[4 * k + 3]]);
        let (dst_active, dst_active_len) =
            dedup4(&[ct[4 * k], ct[4 * k + 1], ct[4 * k + 2], ct[4 * k + 3]]);
        let kind = match gt as i64 - gs as i64 {
            1 => TransitionKind::Split,
            -1 => TransitionKind::Merge,
            0 => TransitionKind::OneOne,
            d => unreachable!("gamma jumped by {d}"),
        };
        let mut dst_from_src = [ACTIVE; 64];
        let actives = &src_active[..src_active_len as usize];
        for h in 0..self.half_edges {
            let (a, b) = (cs[h], ct[h]);
            if !actives.contains(&a) {
                dst_from_src[b as usize] = a;
            }
        }
        // free-loop circles trail both states in the same order
        let loops = self.free_loops as usize;
        for i in 0..loops {
            dst_from_src[gt - loops + i] = (gs - loops + i) as u8;
        }
        EdgeTransition {
            kind,
            src_active,
            src_active_len,
            dst_active,
            dst_active_len,
            dst_from_src,
            dst_len: gt as u8,
        }
    }

    /// All 1->1 edges, as `(state, crossing)` pairs.
    pub fn one_one_edges(&self) -> Vec<(State, usize)> {
        let mut out = Vec::new();
        for s in self.states() {
            for k in 0..self.n {
                if !s.bit(k)
                    && self.states[s.bits() as usize].0 == self.states[s.flip(k).bits() as usize].0
                {
                    out.push((s, k));
                }
            }
        }
        out
    }

    /// Total chain dimension `sum_s 2^gamma(s)`.
    pub fn total_dimension(&self) -> u64 {
        self.states.iter().map(|&(g, _)| 1u64 << g).sum()
    }
}

/// Build the cube of a diagram.
pub fn build_cube(d: &VirtualDiagram, budget: Budget) -> Result<PerestroikaCube> {
    PerestroikaCube::build(d, budget)
}

/// The sign `(-1)^{sum_{i<k} a_i}` attached to the edge flipping
/// coordinate `k` of state `s` (trivial over GF(2)).
pub(crate) fn edge_sign(s: State, k: usize) -> i64 {
    let mask = (1u64 << k) - 1;
    if (s.bits() & mask).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Zero-map check helper: rational homology needs a cube with no 1->1
/// edges.
pub(crate) fn require_good_for(field: Field, cube: &PerestroikaCube) -> Result<()> {
    if field == Field::GF2 {
        return Ok(());
    }
    if let Some(&(s, k)) = cube.one_one_edges().first() {
        return Err(Error::OneOneEdge { state: s.bits(), crossing: k });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::VirtualDiagram;

    #[test]
    fn frobenius_maps_match_definitions() {
        assert_eq!(frobenius::m(false, false), None);
        assert_eq!(frobenius::m(true, false), Some(false));
        assert_eq!(frobenius::m(false, true), Some(false));
        assert_eq!(frobenius::m(true, true), Some(true));
        assert_eq!(frobenius::delta(true), &[(true, false), (false, true)]);
        assert_eq!(frobenius::delta(false), &[(false, false)]);
    }

    #[test]
    fn unknot_cube_is_a_point() {
        let cube = build_cube(&VirtualDiagram::unknot(), Budget::default()).unwrap();
        assert_eq!(cube.gamma(State::new(0, 0)), 1);
        assert!(cube.one_one_edges().is_empty());
    }

    #[test]
    fn virtual_trefoil_edge_kinds() {
        let cube = build_cube(&VirtualDiagram::virtual_trefoil(), Budget::default()).unwrap();
        let kind = |bits: u64, k: usize| cube.transition(State::new(bits, 2), k).kind;
        assert_eq!(kind(0b00, 0), TransitionKind::OneOne); // AA -> BA
        assert_eq!(kind(0b00, 1), TransitionKind::OneOne); // AA -> AB
        assert_eq!(kind(0b01, 1), TransitionKind::Split); // BA -> BB
        assert_eq!(kind(0b10, 0), TransitionKind::Split); // AB -> BB
    }

    #[test]
    fn trefoil_cube_is_good() {
        let cube = build_cube(&VirtualDiagram::trefoil(), Budget::default()).unwrap();
        assert!(cube.one_one_edges().is_empty());
        let t = cube.transition(State::new(0, 3), 0);
        assert_eq!(t.kind, TransitionKind::Merge);
        assert_eq!(t.src_active().len(), 2);
        assert_eq!(t.dst_active().len(), 1);
    }

    #[test]
    fn edge_sign_alternates() {
        let s = State::new(0b0110, 4);
        assert_eq!(edge_sign(s, 0), 1);
        assert_eq!(edge_sign(s, 3), 1); // two ones below
        let s2 = State::new(0b0010, 4);
        assert_eq!(edge_sign(s2, 2), -1);
        assert_eq!(edge_sign(s2, 3), -1);
    }

    #[test]
    fn untouched_circles_map_across_free_loops() {
        let d = VirtualDiagram::virtual_trefoil().disjoint_union(&VirtualDiagram::unlink(2));
        let cube = build_cube(&d, Budget::default()).unwrap();
        let t = cube.transition(State::new(0b01, 2), 1);
        // source: 1 traversal circle + 2 loops; target: 2 + 2
        assert_eq!(t.kind, TransitionKind::Split);
        assert_eq!(t.dst_from_src()[2], 1);
        assert_eq!(t.dst_from_src()[3], 2);
    }
}
