//! States of the resolution cube and circle extraction.
//!
//! A state picks an A- or B-smoothing at every crossing (bit 0 = A,
//! bit 1 = B, crossings in the fixed sorted order). The A-smoothing pairs
//! slots {0,1} and {2,3}, the B-smoothing pairs {0,3} and {1,2}. Replacing
//! each crossing by its smoothing arcs turns the diagram into closed
//! circles; circles are numbered in traversal-discovery order (scanning
//! half-edges by crossing then slot), with free loops appended last.

use crate::diagram::{HalfEdge, VirtualDiagram};
use crate::error::{Error, Result};

/// A vertex of the cube `{0,1}^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    bits: u64,
    n: u8,
}

impl State {
    pub fn new(bits: u64, n: usize) -> Self {
        debug_assert!(n <= 63 && (n == 64 || bits < (1u64 << n)));
        State { bits, n: n as u8 }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.n as usize
    }

    pub fn is_empty(self) -> bool {
        self.n == 0
    }

    pub fn bit(self, k: usize) -> bool {
        self.bits >> k & 1 == 1
    }

    /// Number of B-smoothings; the height of the vertex.
    pub fn beta(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn alpha(self) -> usize {
        self.len() - self.beta()
    }

    pub fn flip(self, k: usize) -> State {
        State { bits: self.bits ^ (1 << k), n: self.n }
    }

    /// All states of an `n`-crossing diagram in binary counting order.
    pub fn all(n: usize) -> impl Iterator<Item = State> {
        (0..1u64 << n).map(move |bits| State::new(bits, n))
    }
}

impl std::fmt::Debug for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for k in 0..self.len() {
            write!(f, "{}", if self.bit(k) { 'B' } else { 'A' })?;
        }
        if self.is_empty() {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Smoothing partner of `slot` under bit `b`.
#[inline]
pub fn smooth_pair(slot: u8, b: bool) -> u8 {
    slot ^ if b { 3 } else { 1 }
}

/// Circles of one resolved state.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// Circle index of every half-edge, indexed `crossing * 4 + slot`.
    pub circle_of: Vec<u8>,
    /// Circles in discovery order as alternating half-edge walks; free
    /// loops appear at the end as empty walks.
    pub circles: Vec<Vec<HalfEdge>>,
}

impl Resolution {
    pub fn gamma(&self) -> usize {
        self.circles.len()
    }

    pub fn circle(&self, h: HalfEdge) -> usize {
        self.circle_of[h.crossing_index() * 4 + h.slot as usize] as usize
    }
}

/// Count and label the circles of `d` resolved by `s`.
pub fn resolve_state(d: &VirtualDiagram, s: State) -> Result<Resolution> {
    if s.len() != d.crossing_count() {
        return Err(Error::StateLengthMismatch { got: s.len(), expected: d.crossing_count() });
    }
    let n = d.crossing_count();
    let mut circle_of = vec![u8::MAX; 4 * n];
    let mut circles = Vec::new();
    let idx = |h: HalfEdge| h.crossing_index() * 4 + h.slot as usize;
    for start in d.half_edges() {
        if circle_of[idx(start)] != u8::MAX {
            continue;
        }
        let cid = circles.len() as u8;
        let mut walk = Vec::new();
        let mut h = start;
        loop {
            circle_of[idx(h)] = cid;
            walk.push(h);
            let g = HalfEdge { crossing: h.crossing, slot: smooth_pair(h.slot, s.bit(h.crossing_index())) };
            circle_of[idx(g)] = cid;
            walk.push(g);
            h = d.partner(g);
            if h == start {
                break;
            }
        }
        circles.push(walk);
    }
    for _ in 0..d.free_loops() {
        circles.push(Vec::new());
    }
    Ok(Resolution { circle_of, circles })
}

/// Circle count of the resolved state, free loops included.
pub fn circle_count(d: &VirtualDiagram, s: State) -> Result<usize> {
    Ok(resolve_state(d, s)?.gamma())
}

/// Circle membership of one state without collecting the walks.
pub(crate) fn circle_membership(d: &VirtualDiagram, bits: u64) -> (u16, Vec<u8>) {
    let n = d.crossing_count();
    let mut circle_of = vec![u8::MAX; 4 * n];
    let idx = |h: HalfEdge| h.crossing_index() * 4 + h.slot as usize;
    let mut gamma = 0u16;
    for c in 0..n {
        for slot in 0..4u8 {
            let start = HalfEdge::new(c, slot);
            if circle_of[idx(start)] != u8::MAX {
                continue;
            }
            let cid = gamma as u8;
            gamma += 1;
            let mut h = start;
            loop {
                circle_of[idx(h)] = cid;
                let g = HalfEdge {
                    crossing: h.crossing,
                    slot: smooth_pair(h.slot, bits >> h.crossing_index() & 1 == 1),
                };
                circle_of[idx(g)] = cid;
                h = d.partner(g);
                if h == start {
                    break;
                }
            }
        }
    }
    (gamma + d.free_loops() as u16, circle_of)
}

/// Circle membership for every state of the cube, cheapest form. Index by
/// `state.bits()`; each entry is `(gamma, circle_of)`.
pub fn resolve_all(d: &VirtualDiagram) -> Vec<(u16, Vec<u8>)> {
    (0..1u64 << d.crossing_count()).map(|bits| circle_membership(d, bits)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_gauss, Sign, VirtualDiagram};

    #[test]
    fn unknot_single_circle() {
        let d = VirtualDiagram::unknot();
        let r = resolve_state(&d, State::new(0, 0)).unwrap();
        assert_eq!(r.gamma(), 1);
    }

    #[test]
    fn virtual_trefoil_gamma_fixture() {
        // hand-traced: AA, AB, BA give one circle, BB gives two
        let d = VirtualDiagram::virtual_trefoil();
        let gammas: Vec<usize> = State::all(2)
            .map(|s| circle_count(&d, s).unwrap())
            .collect();
        assert_eq!(gammas, vec![1, 1, 1, 2]);
    }

    #[test]
    fn kink_gamma_fixture() {
        // hand-traced: the negative kink resolves to {A: 1, B: 2} circles,
        // the positive kink to {A: 2, B: 1}
        let neg = VirtualDiagram::kink(Sign::Minus);
        assert_eq!(circle_count(&neg, State::new(0, 1)).unwrap(), 1);
        assert_eq!(circle_count(&neg, State::new(1, 1)).unwrap(), 2);
        let pos = VirtualDiagram::kink(Sign::Plus);
        assert_eq!(circle_count(&pos, State::new(0, 1)).unwrap(), 2);
        assert_eq!(circle_count(&pos, State::new(1, 1)).unwrap(), 1);
    }

    #[test]
    fn trefoil_gamma_table() {
        // hand-traced: all-A has 2 circles, single-B 1, double-B 2, all-B 3
        let d = VirtualDiagram::trefoil();
        for s in State::all(3) {
            let expect = match s.beta() {
                0 => 2,
                1 => 1,
                2 => 2,
                _ => 3,
            };
            assert_eq!(circle_count(&d, s).unwrap(), expect, "state {s:?}");
        }
    }

    #[test]
    fn wrong_length_rejected() {
        let d = VirtualDiagram::virtual_trefoil();
        assert!(matches!(
            resolve_state(&d, State::new(0, 3)),
            Err(Error::StateLengthMismatch { .. })
        ));
    }

    #[test]
    fn free_loops_append_circles() {
        let d = parse_gauss("O1+U1+").unwrap().disjoint_union(&VirtualDiagram::unlink(2));
        let r = resolve_state(&d, State::new(0, 1)).unwrap();
        assert_eq!(r.gamma(), 2 + 2);
        assert!(r.circles[r.gamma() - 1].is_empty());
    }
}
