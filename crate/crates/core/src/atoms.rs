//! Atoms of diagrams: the frame with its A/B-structure, the checkerboard
//! cells, Euler characteristic, and orientability.
//!
//! Black cells are the circles of the all-A state, white cells those of the
//! all-B state. Every frame edge is traversed exactly once by a black cell
//! and once by a white cell, so the surface is orientable exactly when the
//! cells can be oriented to induce opposite directions on every edge; that
//! is a parity 2-coloring problem on the cell incidence graph.

use crate::diagram::{HalfEdge, VirtualDiagram};
use crate::error::Result;
use crate::resolve::{resolve_all, resolve_state, State};
use crate::state_sum::Budget;

/// Outcome of the coherent-orientation search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orientability {
    /// Witness: a flip bit per cell (black cells first, then white) making
    /// all edge inducements opposite.
    Orientable { cell_orientation: Vec<bool> },
    /// An odd constraint cycle, reported as the frame edges along it.
    NonOrientable { obstruction: Vec<(HalfEdge, HalfEdge)> },
}

impl Orientability {
    pub fn is_orientable(&self) -> bool {
        matches!(self, Orientability::Orientable { .. })
    }
}

/// The atom of a diagram. The frame is the diagram's 4-valent graph; the
/// A-structure pairs opposite slots {0,2} and {1,3} at every vertex, and
/// the B-structure marks the black angles, which in this representation
/// are always the A-smoothing pairs {0,1} and {2,3}.
#[derive(Clone, Debug)]
pub struct Atom {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub free_loops: u32,
    /// Connected pieces of the surface: frame components plus one sphere
    /// per free loop.
    pub surface_components: usize,
    /// Circles of the all-A state, as half-edge walks.
    pub black_cells: Vec<Vec<HalfEdge>>,
    /// Circles of the all-B state.
    pub white_cells: Vec<Vec<HalfEdge>>,
    pub euler_characteristic: i64,
    pub orientability: Orientability,
}

impl Atom {
    /// Opposite-semiedge pairing at every vertex.
    pub const A_STRUCTURE: [(u8, u8); 2] = [(0, 2), (1, 3)];
    /// Black-angle pairs at every vertex.
    pub const B_STRUCTURE: [(u8, u8); 2] = [(0, 1), (2, 3)];

    pub fn is_orientable(&self) -> bool {
        self.orientability.is_orientable()
    }

    /// Total genus `(2c - euler) / 2` when orientable, total crosscap
    /// number `2c - euler` otherwise; for a connected atom these are the
    /// usual `(2 - euler) / 2` and `2 - euler`.
    pub fn genus_or_crosscap(&self) -> i64 {
        let c = self.surface_components as i64;
        if self.is_orientable() {
            (2 * c - self.euler_characteristic) / 2
        } else {
            2 * c - self.euler_characteristic
        }
    }
}

/// Build the atom of a diagram.
pub fn atom_of(d: &VirtualDiagram) -> Atom {
    let n = d.crossing_count();
    let all_a = resolve_state(d, State::new(0, n)).expect("state length matches");
    let all_b = resolve_state(d, State::new(if n == 0 { 0 } else { (1u64 << n) - 1 }, n))
        .expect("state length matches");
    let gamma_a = all_a.gamma() as i64;
    let gamma_b = all_b.gamma() as i64;
    let euler = gamma_a + gamma_b - n as i64;
    let orientability = orient_cells(d, &all_a.circles, &all_b.circles);
    Atom {
        vertex_count: n,
        edge_count: 2 * n,
        free_loops: d.free_loops(),
        surface_components: d.frame_components(),
        black_cells: all_a.circles,
        white_cells: all_b.circles,
        euler_characteristic: euler,
        orientability,
    }
}

/// Decide orientability from the two cell families. Standalone form of the
/// check used by [`atom_of`].
pub fn is_orientable(atom: &Atom) -> bool {
    atom.is_orientable()
}

fn orient_cells(
    d: &VirtualDiagram,
    black: &[Vec<HalfEdge>],
    white: &[Vec<HalfEdge>],
) -> Orientability {
    let n = d.crossing_count();
    // per edge (keyed by its min half-edge): incident cell and traversal
    // direction in each family
    let idx = |h: HalfEdge| h.crossing_index() * 4 + h.slot as usize;
    let mut a_side = vec![(usize::MAX, false); 4 * n];
    let mut b_side = vec![(usize::MAX, false); 4 * n];
    let mut record = |side: &mut Vec<(usize, bool)>, cells: &[Vec<HalfEdge>]| {
        for (ci, walk) in cells.iter().enumerate() {
            let mut k = 1;
            while k < walk.len() {
                let from = walk[k];
                let to = walk[(k + 1) % walk.len()];
                debug_assert_eq!(d.partner(from), to);
                let key = idx(from.min(to));
                debug_assert_eq!(side[key].0, usize::MAX, "edge traversed twice in one state");
                side[key] = (ci, from < to);
                k += 2;
            }
        }
    };
    record(&mut a_side, black);
    record(&mut b_side, white);

    // cells as graph nodes: black 0..black.len(), white after
    let nb = black.len();
    let total = nb + white.len();
    let mut adj: Vec<Vec<(usize, bool, (HalfEdge, HalfEdge))>> = vec![Vec::new(); total];
    for (h1, h2) in d.edges() {
        let key = idx(h1.min(h2));
        let (ca, da) = a_side[key];
        let (cb, db) = b_side[key];
        debug_assert!(ca != usize::MAX && cb != usize::MAX);
        // flips must satisfy x_a xor x_b = 1 xor da xor db
        let parity = !(da ^ db);
        adj[ca].push((nb + cb, parity, (h1, h2)));
        adj[nb + cb].push((ca, parity, (h1, h2)));
    }
    let mut color = vec![None; total];
    let mut parent: Vec<Option<(usize, (HalfEdge, HalfEdge))>> = vec![None; total];
    for start in 0..total {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &(v, parity, e) in &adj[u] {
                let want = cu ^ parity;
                match color[v] {
                    None => {
                        color[v] = Some(want);
                        parent[v] = Some((u, e));
                        queue.push_back(v);
                    }
                    Some(cv) if cv != want => {
                        return Orientability::NonOrientable {
                            obstruction: odd_cycle(&parent, u, v, e),
                        };
                    }
                    _ => {}
                }
            }
        }
    }
    Orientability::Orientable { cell_orientation: color.into_iter().map(|c| c.unwrap()).collect() }
}

/// Edges along the odd cycle through `u`, `v` and the closing edge `e`.
fn odd_cycle(
    parent: &[Option<(usize, (HalfEdge, HalfEdge))>],
    u: usize,
    v: usize,
    e: (HalfEdge, HalfEdge),
) -> Vec<(HalfEdge, HalfEdge)> {
    let path_to_root = |mut x: usize| {
        let mut nodes = vec![x];
        let mut edges = Vec::new();
        while let Some((p, pe)) = parent[x] {
            edges.push(pe);
            nodes.push(p);
            x = p;
        }
        (nodes, edges)
    };
    let (nu, eu) = path_to_root(u);
    let (nv, ev) = path_to_root(v);
    // trim the common tail so the cycle is minimal for this BFS tree
    let mut cut = 0;
    while cut < nu.len().min(nv.len())
        && nu[nu.len() - 1 - cut] == nv[nv.len() - 1 - cut]
    {
        cut += 1;
    }
    let mut cycle = vec![e];
    cycle.extend_from_slice(&eu[..eu.len() + 1 - cut]);
    cycle.extend_from_slice(&ev[..ev.len() + 1 - cut]);
    cycle
}

/// Cube edges `(state, crossing)` whose flip leaves the circle count
/// unchanged; the diagram is "good" exactly when this list is empty.
pub fn detect_one_one(d: &VirtualDiagram, budget: Budget) -> Result<Vec<(State, usize)>> {
    budget.check(d.crossing_count())?;
    let n = d.crossing_count();
    let gammas: Vec<u16> = resolve_all(d).into_iter().map(|(g, _)| g).collect();
    let mut out = Vec::new();
    for s in State::all(n) {
        for k in 0..n {
            if !s.bit(k) && gammas[s.bits() as usize] == gammas[s.flip(k).bits() as usize] {
                out.push((s, k));
            }
        }
    }
    Ok(out)
}

/// Aggregated per-diagram report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomReport {
    pub orientable: bool,
    pub euler: i64,
    pub genus_or_crosscap: i64,
    pub good: bool,
    pub bad_edges: Vec<(u64, usize)>,
}

pub fn atom_report(d: &VirtualDiagram, budget: Budget) -> Result<AtomReport> {
    let atom = atom_of(d);
    let one_one = detect_one_one(d, budget)?;
    Ok(AtomReport {
        orientable: atom.is_orientable(),
        euler: atom.euler_characteristic,
        genus_or_crosscap: atom.genus_or_crosscap(),
        good: one_one.is_empty(),
        bad_edges: one_one.into_iter().map(|(s, k)| (s.bits(), k)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{cable::cable, generate::random_diagram, Sign, VirtualDiagram};

    #[test]
    fn unknot_atom_is_a_sphere() {
        let a = atom_of(&VirtualDiagram::unknot());
        assert_eq!(a.euler_characteristic, 2);
        assert!(a.is_orientable());
    }

    #[test]
    fn kink_atom_is_a_sphere() {
        let a = atom_of(&VirtualDiagram::kink(Sign::Minus));
        assert_eq!(a.euler_characteristic, 2);
        assert!(a.is_orientable());
        assert_eq!(a.genus_or_crosscap(), 0);
    }

    #[test]
    fn virtual_trefoil_atom() {
        let a = atom_of(&VirtualDiagram::virtual_trefoil());
        assert_eq!(a.euler_characteristic, 1);
        assert!(!a.is_orientable());
        assert_eq!(a.genus_or_crosscap(), 1);
        if let Orientability::NonOrientable { obstruction } = &a.orientability {
            assert!(!obstruction.is_empty());
        } else {
            panic!("expected an obstruction cycle");
        }
    }

    #[test]
    fn trefoil_atom_is_orientable_sphere() {
        let a = atom_of(&VirtualDiagram::trefoil());
        assert_eq!(a.euler_characteristic, 2);
        assert!(a.is_orientable());
        assert_eq!(a.genus_or_crosscap(), 0);
    }

    #[test]
    fn one_one_scan_fixtures() {
        let b = Budget::default();
        assert!(detect_one_one(&VirtualDiagram::unknot(), b).unwrap().is_empty());
        assert!(detect_one_one(&VirtualDiagram::trefoil(), b).unwrap().is_empty());
        let vt = detect_one_one(&VirtualDiagram::virtual_trefoil(), b).unwrap();
        let edges: Vec<(u64, usize)> = vt.iter().map(|&(s, k)| (s.bits(), k)).collect();
        assert_eq!(edges, vec![(0, 0), (0, 1)]);
    }

    #[test]
    fn doubled_virtual_trefoil_is_orientable_and_good() {
        let d = cable(&VirtualDiagram::virtual_trefoil(), 2);
        let a = atom_of(&d);
        assert!(a.is_orientable());
        assert!(detect_one_one(&d, Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn atom_report_fixtures() {
        let b = Budget::default();
        let kink = atom_report(&VirtualDiagram::kink(Sign::Plus), b).unwrap();
        assert_eq!((kink.orientable, kink.euler, kink.genus_or_crosscap, kink.good), (true, 2, 0, true));
        let vt = atom_report(&VirtualDiagram::virtual_trefoil(), b).unwrap();
        assert_eq!((vt.orientable, vt.euler, vt.genus_or_crosscap, vt.good), (false, 1, 1, false));
        let tre = atom_report(&VirtualDiagram::trefoil(), b).unwrap();
        assert_eq!((tre.orientable, tre.genus_or_crosscap, tre.good), (true, 0, true));
    }

    #[test]
    fn orientable_implies_even_euler_and_good() {
        let b = Budget::default();
        for seed in 0..120 {
            let d = random_diagram(6, 1, seed);
            let a = atom_of(&d);
            if a.is_orientable() {
                assert_eq!(a.euler_characteristic.rem_euclid(2), 0, "seed {seed}");
                assert!(detect_one_one(&d, b).unwrap().is_empty(), "seed {seed}");
            }
        }
    }

    #[test]
    fn free_loops_do_not_affect_orientability() {
        let d = VirtualDiagram::virtual_trefoil().disjoint_union(&VirtualDiagram::unlink(3));
        let a = atom_of(&d);
        assert!(!a.is_orientable());
        assert_eq!(a.euler_characteristic, 1 + 6);
        let t = VirtualDiagram::trefoil().disjoint_union(&VirtualDiagram::unlink(2));
        assert!(atom_of(&t).is_orientable());
    }
}
