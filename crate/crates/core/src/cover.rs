//! The orienting double cover of a diagram.
//!
//! A closed frame cycle is good when its transverse passings through
//! crossings (entry and exit at opposite slots) number even. The cover
//! takes two copies of every crossing; edges of a spanning tree lift to
//! same-sheet connections, and every non-tree edge lifts same-sheet or
//! across sheets according to the parity of its fundamental cycle. Up to
//! isomorphism the result does not depend on the tree. When the atom of
//! the base is orientable the cover is two disjoint copies of the base.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagram::{Crossing, HalfEdge, VirtualDiagram};
use crate::error::{Error, Result};
use crate::khovanov::{kh, BettiTable, Field};
use crate::state_sum::Budget;

/// One passage of a closed frame path through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleStep {
    pub enter: HalfEdge,
    pub exit: HalfEdge,
}

/// A closed path in the frame: consecutive steps are joined by edges,
/// cyclically (the exit of each step pairs with the entry of the next).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePath(pub Vec<CycleStep>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Good,
    Bad,
}

/// Count the transverse passings of a closed path; even is good.
pub fn cycle_parity(d: &VirtualDiagram, path: &CyclePath) -> Result<Parity> {
    if path.0.is_empty() {
        return Err(Error::InvalidPath("empty path".into()));
    }
    let n = d.crossing_count();
    for (idx, step) in path.0.iter().enumerate() {
        if step.enter.crossing_index() >= n || step.enter.slot > 3 || step.exit.slot > 3 {
            return Err(Error::InvalidPath(format!("step {idx} out of range")));
        }
        if step.enter.crossing != step.exit.crossing {
            return Err(Error::InvalidPath(format!(
                "step {idx} enters and exits different crossings"
            )));
        }
        let next = &path.0[(idx + 1) % path.0.len()];
        if d.partner(step.exit) != next.enter {
            return Err(Error::InvalidPath(format!("steps {idx} and next are not joined by an edge")));
        }
    }
    let transverse = path
        .0
        .iter()
        .filter(|s| s.exit.slot == (s.enter.slot + 2) % 4)
        .count();
    Ok(if transverse % 2 == 0 { Parity::Good } else { Parity::Bad })
}

struct SpanningTree {
    /// Per vertex: the tree edge to its parent, as (half-edge at this
    /// vertex, half-edge at the parent), or None for roots.
    parent: Vec<Option<(HalfEdge, HalfEdge)>>,
    depth: Vec<usize>,
    /// Edge keys (min half-edge) of tree edges.
    in_tree: std::collections::HashSet<HalfEdge>,
}

fn spanning_tree(d: &VirtualDiagram, seed: Option<u64>) -> SpanningTree {
    let n = d.crossing_count();
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut parent = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut in_tree = std::collections::HashSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    if let Some(r) = rng.as_mut() {
        order.shuffle(r);
    }
    for &root in &order {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let mut slots: Vec<u8> = (0..4).collect();
            if let Some(r) = rng.as_mut() {
                slots.shuffle(r);
            }
            for s in slots {
                let here = HalfEdge::new(v, s);
                let there = d.partner(here);
                let w = there.crossing_index();
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((there, here));
                    depth[w] = depth[v] + 1;
                    in_tree.insert(here.min(there));
                    queue.push_back(w);
                }
            }
        }
    }
    SpanningTree { parent, depth, in_tree }
}

/// The fundamental cycle of a non-tree edge, as a closed path: traverse
/// the edge from `h1` to `h2`, then return through the tree.
fn fundamental_cycle(d: &VirtualDiagram, tree: &SpanningTree, h1: HalfEdge, h2: HalfEdge) -> CyclePath {
    let (c1, c2) = (h1.crossing_index(), h2.crossing_index());
    if c1 == c2 {
        return CyclePath(vec![CycleStep { enter: h2, exit: h1 }]);
    }
    // tree path from c2 to c1: climb both ends to their junction
    let mut up_a: Vec<(HalfEdge, HalfEdge)> = Vec::new(); // steps from c2 upward
    let mut up_b: Vec<(HalfEdge, HalfEdge)> = Vec::new(); // steps from c1 upward
    let (mut a, mut b) = (c2, c1);
    while a != b {
        if tree.depth[a] >= tree.depth[b] {
            let (here, there) = tree.parent[a].expect("same frame component");
            up_a.push((here, there));
            a = there.crossing_index();
        } else {
            let (here, there) = tree.parent[b].expect("same frame component");
            up_b.push((here, there));
            b = there.crossing_index();
        }
    }
    // walk: enter c2 via h2, climb up_a, descend reversed up_b, exit via h1
    let mut steps = Vec::with_capacity(up_a.len() + up_b.len() + 2);
    let mut enter = h2;
    for &(here, there) in &up_a {
        steps.push(CycleStep { enter, exit: here });
        enter = there;
    }
    for &(here, there) in up_b.iter().rev() {
        steps.push(CycleStep { enter, exit: there });
        enter = here;
    }
    steps.push(CycleStep { enter, exit: h1 });
    CyclePath(steps)
}

/// The orienting double cover with a deterministic spanning tree.
pub fn double_cover(d: &VirtualDiagram) -> VirtualDiagram {
    double_cover_impl(d, None)
}

/// Same construction over a seeded random spanning tree; the result is
/// isomorphic to [`double_cover`] for every seed.
pub fn double_cover_seeded(d: &VirtualDiagram, seed: u64) -> VirtualDiagram {
    double_cover_impl(d, Some(seed))
}

fn double_cover_impl(d: &VirtualDiagram, seed: Option<u64>) -> VirtualDiagram {
    let n = d.crossing_count();
    let tree = spanning_tree(d, seed);
    let mut crossings = Vec::with_capacity(2 * n);
    for copy in 0..2 {
        for c in d.crossings() {
            crossings.push(Crossing {
                id: format!("{}{}", c.id, if copy == 0 { "a" } else { "b" }),
                sign: c.sign,
            });
        }
    }
    let lift = |h: HalfEdge, sheet: u32| HalfEdge { crossing: h.crossing + sheet * n as u32, slot: h.slot };
    let mut edges = Vec::with_capacity(4 * n);
    for (h1, h2) in d.edges() {
        let crossed = if tree.in_tree.contains(&h1.min(h2)) {
            false
        } else {
            let cycle = fundamental_cycle(d, &tree, h1, h2);
            cycle_parity(d, &cycle).expect("constructed cycles are valid") == Parity::Bad
        };
        if crossed {
            edges.push((lift(h1, 0), lift(h2, 1)));
            edges.push((lift(h1, 1), lift(h2, 0)));
        } else {
            edges.push((lift(h1, 0), lift(h2, 0)));
            edges.push((lift(h1, 1), lift(h2, 1)));
        }
    }
    VirtualDiagram::new(crossings, edges, d.free_loops() * 2)
        .expect("cover of a valid diagram is valid")
}

/// Khovanov Betti table of the cover diagram.
pub fn cover_invariant(d: &VirtualDiagram, field: Field, budget: Budget) -> Result<BettiTable> {
    kh(&double_cover(d), field, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::atom_of;
    use crate::diagram::{generate::random_diagram, moves, Sign};
    use crate::state_sum::jhat;

    #[test]
    fn r1_loop_is_good() {
        let d = VirtualDiagram::kink(Sign::Plus);
        // the kink loop pairs slots 0 and 1
        let path = CyclePath(vec![CycleStep {
            enter: HalfEdge::new(0, 1),
            exit: HalfEdge::new(0, 0),
        }]);
        assert_eq!(cycle_parity(&d, &path).unwrap(), Parity::Good);
    }

    #[test]
    fn straight_passing_is_bad() {
        // a loop on opposite slots crosses transversally once
        let d = VirtualDiagram::new(
            vec![Crossing { id: "1".into(), sign: Sign::Plus }],
            vec![
                (HalfEdge::new(0, 0), HalfEdge::new(0, 2)),
                (HalfEdge::new(0, 1), HalfEdge::new(0, 3)),
            ],
            0,
        )
        .unwrap();
        let path = CyclePath(vec![CycleStep {
            enter: HalfEdge::new(0, 2),
            exit: HalfEdge::new(0, 0),
        }]);
        assert_eq!(cycle_parity(&d, &path).unwrap(), Parity::Bad);
    }

    #[test]
    fn r2_bigon_is_good() {
        let d = VirtualDiagram::unknot();
        let poked = moves::apply_move(
            &d,
            &moves::MoveSpec::R2Insert {
                under: moves::EdgeSite::FreeLoop,
                over: moves::EdgeSite::FreeLoop,
                antiparallel: false,
                negative_first: false,
            },
        )
        .unwrap();
        // bigon: under mid {a.2, b.0}, over mid {a.over_out, b.over_in};
        // walk through b (under-in to over-in) then through a
        let (a, b) = (0usize, 1usize);
        assert_eq!(poked.partner(HalfEdge::new(a, 2)), HalfEdge::new(b, 0));
        let path = CyclePath(vec![
            CycleStep {
                enter: HalfEdge::new(b, 0),
                exit: HalfEdge::new(b, poked.sign(b).over_in()),
            },
            CycleStep {
                enter: HalfEdge::new(a, poked.sign(a).over_out()),
                exit: HalfEdge::new(a, 2),
            },
        ]);
        assert_eq!(cycle_parity(&poked, &path).unwrap(), Parity::Good);
    }

    #[test]
    fn invalid_paths_are_rejected() {
        let d = VirtualDiagram::kink(Sign::Plus);
        let bad = CyclePath(vec![CycleStep {
            enter: HalfEdge::new(0, 1),
            exit: HalfEdge::new(0, 2),
        }]);
        assert!(matches!(cycle_parity(&d, &bad), Err(Error::InvalidPath(_))));
        assert!(matches!(
            cycle_parity(&d, &CyclePath(vec![])),
            Err(Error::InvalidPath(_))
        ));
    }

    #[test]
    fn cover_of_unknot_is_two_loops() {
        let c = double_cover(&VirtualDiagram::unknot());
        assert!(c.is_isomorphic(&VirtualDiagram::unlink(2)));
    }

    #[test]
    fn cover_of_trefoil_is_two_copies() {
        let t = VirtualDiagram::trefoil();
        let c = double_cover(&t);
        assert!(c.is_isomorphic(&t.disjoint_union(&t)));
    }

    #[test]
    fn cover_of_virtual_trefoil_is_connected() {
        let c = double_cover(&VirtualDiagram::virtual_trefoil());
        assert_eq!(c.crossing_count(), 4);
        assert!(c.validate().is_valid());
        assert_eq!(c.frame_components(), 1);
    }

    #[test]
    fn tree_independence() {
        for seed in 0..40u64 {
            let d = random_diagram(5, 1, seed);
            let reference = double_cover(&d);
            for tree_seed in [1u64, 2] {
                let other = double_cover_seeded(&d, tree_seed);
                assert!(reference.is_isomorphic(&other), "seed {seed} tree {tree_seed}");
            }
        }
    }

    #[test]
    fn component_dichotomy_on_frames() {
        for seed in 0..60u64 {
            let d = random_diagram(5, 1, seed);
            let cover = double_cover(&d);
            let doubled = cover.frame_components() == 2 * d.frame_components();
            assert_eq!(
                doubled,
                atom_of(&d).is_orientable(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn cover_jhat_is_square_when_orientable() {
        let b = Budget::default();
        let t = VirtualDiagram::trefoil();
        let j = jhat(&t, false, b).unwrap();
        let jc = jhat(&double_cover(&t), false, b).unwrap();
        assert_eq!(jc, &j * &j);
    }

    #[test]
    fn cover_invariant_of_unknot() {
        let t = cover_invariant(&VirtualDiagram::unknot(), Field::GF2, Budget::default()).unwrap();
        let expect = BettiTable::from_dims(
            Field::GF2,
            [((0, -2), 1), ((0, 0), 2), ((0, 2), 1)],
        );
        assert_eq!(t, expect);
    }

    #[test]
    fn cover_invariant_of_trefoil_is_tensor_square() {
        let b = Budget::default();
        let base = kh(&VirtualDiagram::trefoil(), Field::GF2, b).unwrap();
        let cov = cover_invariant(&VirtualDiagram::trefoil(), Field::GF2, b).unwrap();
        assert_eq!(cov, base.tensor(&base));
    }
}
