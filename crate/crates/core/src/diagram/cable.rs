//! Blackboard-framed cabling.
//!
//! Each crossing becomes a k-by-k grid of crossings with the source sign;
//! each edge becomes k parallel edges. Sub-strand positions within a band
//! are indexed left-to-right facing the crossing, so the two ends of an
//! edge pair sub-index `t` with `k - 1 - t`, and the grid wiring keeps
//! every copy in its own lane.

use super::{Crossing, HalfEdge, VirtualDiagram};

/// The `k`-cable of `d` with blackboard framing. `k = 1` returns a copy.
pub fn cable(d: &VirtualDiagram, k: usize) -> VirtualDiagram {
    assert!(k >= 1, "cable width must be positive");
    if k == 1 {
        return d.clone();
    }
    let n = d.crossing_count();
    let kk = k * k;
    // grid crossing (c, u, o): under-copy u crossing over-copy o of base c
    let grid = |c: usize, u: usize, o: usize| c * kk + u * k + o;
    let mut crossings = Vec::with_capacity(n * kk);
    for (ci, c) in d.crossings().iter().enumerate() {
        for u in 0..k {
            for o in 0..k {
                debug_assert_eq!(crossings.len(), grid(ci, u, o));
                crossings.push(Crossing { id: format!("{}x{}{}", c.id, u, o), sign: c.sign });
            }
        }
    }
    let mut edges: Vec<(HalfEdge, HalfEdge)> = Vec::new();
    for ci in 0..n {
        let positive = d.sign(ci) == super::Sign::Plus;
        for t in 0..k {
            // under chain: copy t passes the over-copies far-to-near, the
            // order depending on the over direction
            for step in 0..k - 1 {
                let (a, b) = if positive {
                    // passes o = k-1 first, down to o = 0
                    (grid(ci, t, k - 1 - step), grid(ci, t, k - 2 - step))
                } else {
                    (grid(ci, t, step), grid(ci, t, step + 1))
                };
                edges.push((HalfEdge::new(a, 2), HalfEdge::new(b, 0)));
            }
        }
        for o in 0..k {
            // over chain edges
            for step in 0..k - 1 {
                if positive {
                    // over runs slot 3 -> 1, visiting under-copies 0..k-1
                    edges.push((
                        HalfEdge::new(grid(ci, step, o), 1),
                        HalfEdge::new(grid(ci, step + 1, o), 3),
                    ));
                } else {
                    // over runs slot 1 -> 3, visiting under-copies k-1..0
                    edges.push((
                        HalfEdge::new(grid(ci, k - 1 - step, o), 3),
                        HalfEdge::new(grid(ci, k - 2 - step, o), 1),
                    ));
                }
            }
        }
    }
    // bus sub-socket t of (crossing, slot), indexed left-to-right facing in
    let bus = |h: HalfEdge, t: usize| -> HalfEdge {
        let ci = h.crossing_index();
        let positive = d.sign(ci) == super::Sign::Plus;
        match (h.slot, positive) {
            (0, true) => HalfEdge::new(grid(ci, t, k - 1), 0),
            (2, true) => HalfEdge::new(grid(ci, k - 1 - t, 0), 2),
            (3, true) => HalfEdge::new(grid(ci, 0, t), 3),
            (1, true) => HalfEdge::new(grid(ci, k - 1, k - 1 - t), 1),
            (0, false) => HalfEdge::new(grid(ci, t, 0), 0),
            (2, false) => HalfEdge::new(grid(ci, k - 1 - t, k - 1), 2),
            (1, false) => HalfEdge::new(grid(ci, k - 1, t), 1),
            (3, false) => HalfEdge::new(grid(ci, 0, k - 1 - t), 3),
            _ => unreachable!(),
        }
    };
    for (h1, h2) in d.edges() {
        for t in 0..k {
            edges.push((bus(h1, t), bus(h2, k - 1 - t)));
        }
    }
    VirtualDiagram::new(crossings, edges, d.free_loops() * k as u32)
        .expect("cabling preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Sign;

    #[test]
    fn cable_of_unknot() {
        let d = cable(&VirtualDiagram::unknot(), 2);
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_loops(), 2);
    }

    #[test]
    fn cable_of_kink_counts() {
        for sign in [Sign::Plus, Sign::Minus] {
            let d = cable(&VirtualDiagram::kink(sign), 2);
            let s = d.stats();
            assert_eq!((s.n, s.components), (4, 2), "{sign}");
            assert!(d.validate().is_valid());
            assert_eq!(s.writhe, if sign == Sign::Plus { 4 } else { -4 });
        }
    }

    #[test]
    fn cable_of_virtual_trefoil_counts() {
        let d = cable(&VirtualDiagram::virtual_trefoil(), 2);
        let s = d.stats();
        assert_eq!((s.n, s.components, s.writhe), (8, 2, 8));
        assert!(d.validate().is_valid());
    }

    #[test]
    fn components_multiply() {
        for seed in 0..30 {
            let d = crate::diagram::generate::random_diagram(4, 1, seed);
            for k in [2, 3] {
                let c = cable(&d, k);
                assert!(c.validate().is_valid());
                assert_eq!(c.stats().components, k, "seed {seed} k {k}");
                assert_eq!(c.crossing_count(), 4 * k * k);
            }
        }
    }

    #[test]
    fn cable_composes() {
        for seed in [1u64, 5, 9] {
            let d = crate::diagram::generate::random_diagram(2, 1, seed);
            let ab = cable(&cable(&d, 2), 3);
            let ba = cable(&cable(&d, 3), 2);
            let direct = cable(&d, 6);
            assert!(ab.is_isomorphic(&direct), "seed {seed}");
            assert!(ba.is_isomorphic(&direct), "seed {seed}");
        }
    }
}
