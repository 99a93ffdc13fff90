//! Reidemeister-move rewrites on the detour quotient.
//!
//! Detour moves are identities in this representation, so the move set is
//! R1 (kink insert/delete), the framed double kink R1² (a pair of adjacent
//! opposite kinks), R2 (poke/unpoke between any two arcs — in the virtual
//! setting any two edges can be detoured next to each other first, so every
//! edge pair is a legal site), and R3 on braid-triangle patterns.
//!
//! Kink wiring is bound to the kink sign by bracket invariance: a positive
//! kink loops adjacent slots {0,1} (or {2,3}), a negative kink {0,3} (or
//! {1,2}).

use super::{Crossing, HalfEdge, Sign, VirtualDiagram};
use crate::error::{Error, Result};

/// Where an insert move attaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSite {
    /// The edge containing this half-edge.
    Edge(HalfEdge),
    /// A crossing-free circle component.
    FreeLoop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveSpec {
    R1Insert { site: EdgeSite, sign: Sign },
    R1Delete { crossing: usize },
    /// Two adjacent kinks of opposite signs (the framed first move).
    R1SqInsert { site: EdgeSite, first_sign: Sign },
    R1SqDelete { crossings: (usize, usize) },
    R2Insert { under: EdgeSite, over: EdgeSite, antiparallel: bool, negative_first: bool },
    R2Delete { crossings: (usize, usize) },
    /// Braid triangle slide; `reverse` selects which of the two triangle
    /// configurations is matched.
    R3 { crossings: (usize, usize, usize), reverse: bool },
}

pub fn apply_move(d: &VirtualDiagram, m: &MoveSpec) -> Result<VirtualDiagram> {
    match *m {
        MoveSpec::R1Insert { site, sign } => r1_insert(d, site, sign).map(|(d, _)| d),
        MoveSpec::R1Delete { crossing } => r1_delete(d, crossing),
        MoveSpec::R1SqInsert { site, first_sign } => r1sq_insert(d, site, first_sign),
        MoveSpec::R1SqDelete { crossings } => r1sq_delete(d, crossings.0, crossings.1),
        MoveSpec::R2Insert { under, over, antiparallel, negative_first } => {
            r2_insert(d, under, over, antiparallel, negative_first)
        }
        MoveSpec::R2Delete { crossings } => r2_delete(d, crossings.0, crossings.1),
        MoveSpec::R3 { crossings, reverse } => r3(d, crossings, reverse),
    }
}

/// Remove a set of crossings, reconnecting strands through each removed
/// crossing by the given slot pairing; fully interior circles become free
/// loops. The pairing maps each slot to the slot it joins.
pub(crate) fn excise(
    d: &VirtualDiagram,
    remove: &[usize],
    pairing: impl Fn(usize) -> [u8; 4],
) -> VirtualDiagram {
    let n = d.crossing_count();
    let removed = {
        let mut v = vec![false; n];
        for &c in remove {
            v[c] = true;
        }
        v
    };
    let mut remap = vec![u32::MAX; n];
    let mut crossings = Vec::with_capacity(n - remove.len());
    for (i, c) in d.crossings().iter().enumerate() {
        if !removed[i] {
            remap[i] = crossings.len() as u32;
            crossings.push(c.clone());
        }
    }
    let idx = |h: HalfEdge| h.crossing_index() * 4 + h.slot as usize;
    let mut visited = vec![false; 4 * n];
    let mut edges = Vec::new();
    let mut free = d.free_loops();
    for h in d.half_edges() {
        if removed[h.crossing_index()] || visited[idx(h)] {
            continue;
        }
        visited[idx(h)] = true;
        let mut cur = d.partner(h);
        loop {
            visited[idx(cur)] = true;
            if !removed[cur.crossing_index()] {
                edges.push((
                    HalfEdge { crossing: remap[h.crossing_index()], slot: h.slot },
                    HalfEdge { crossing: remap[cur.crossing_index()], slot: cur.slot },
                ));
                break;
            }
            let exit = HalfEdge {
                crossing: cur.crossing,
                slot: pairing(cur.crossing_index())[cur.slot as usize],
            };
            visited[idx(exit)] = true;
            cur = d.partner(exit);
        }
    }
    for h0 in d.half_edges() {
        if !removed[h0.crossing_index()] || visited[idx(h0)] {
            continue;
        }
        free += 1;
        let mut cur = h0;
        loop {
            visited[idx(cur)] = true;
            let exit = HalfEdge {
                crossing: cur.crossing,
                slot: pairing(cur.crossing_index())[cur.slot as usize],
            };
            visited[idx(exit)] = true;
            cur = d.partner(exit);
            if cur == h0 {
                break;
            }
        }
    }
    VirtualDiagram::new(crossings, edges, free).expect("excision preserves validity")
}

const PASS_THROUGH: [u8; 4] = [2, 3, 0, 1];
const SMOOTH_A: [u8; 4] = [1, 0, 3, 2];
const SMOOTH_B: [u8; 4] = [3, 2, 1, 0];

/// Replace one crossing by its A- (`false`) or B- (`true`) smoothing.
pub fn smooth_crossing(d: &VirtualDiagram, crossing: usize, b: bool) -> VirtualDiagram {
    let table = if b { SMOOTH_B } else { SMOOTH_A };
    excise(d, &[crossing], |_| table)
}

fn edge_endpoints(d: &VirtualDiagram, site: EdgeSite) -> Result<Option<(HalfEdge, HalfEdge)>> {
    match site {
        EdgeSite::Edge(h) => {
            if h.crossing_index() >= d.crossing_count() || h.slot > 3 {
                return Err(Error::PatternNotFound);
            }
            Ok(Some((h, d.partner(h))))
        }
        EdgeSite::FreeLoop => {
            if d.free_loops() == 0 {
                return Err(Error::PatternNotFound);
            }
            Ok(None)
        }
    }
}

/// Loop and external slots of a kink with this sign: `(loop, externals)`.
fn kink_slots(sign: Sign) -> ([u8; 2], [u8; 2]) {
    match sign {
        Sign::Plus => ([0, 1], [2, 3]),
        Sign::Minus => ([0, 3], [1, 2]),
    }
}

fn r1_insert(d: &VirtualDiagram, site: EdgeSite, sign: Sign) -> Result<(VirtualDiagram, String)> {
    let ends = edge_endpoints(d, site)?;
    let id = d.fresh_id(d.crossing_count() + 1);
    let nc = d.crossing_count();
    let mut crossings = d.crossings().to_vec();
    crossings.push(Crossing { id: id.clone(), sign });
    let (lp, ext) = kink_slots(sign);
    let mut edges = d.edges();
    let mut free = d.free_loops();
    edges.push((HalfEdge::new(nc, lp[0]), HalfEdge::new(nc, lp[1])));
    match ends {
        Some((h1, h2)) => {
            edges.retain(|&(a, b)| !(a == h1 && b == h2 || a == h2 && b == h1));
            edges.push((h1, HalfEdge::new(nc, ext[0])));
            edges.push((h2, HalfEdge::new(nc, ext[1])));
        }
        None => {
            free -= 1;
            edges.push((HalfEdge::new(nc, ext[0]), HalfEdge::new(nc, ext[1])));
        }
    }
    Ok((VirtualDiagram::new(crossings, edges, free)?, id))
}

/// The kink loop of crossing `c`, when `c` carries one with sign-consistent
/// wiring.
fn kink_loop(d: &VirtualDiagram, c: usize) -> Option<[u8; 2]> {
    if c >= d.crossing_count() {
        return None;
    }
    let (lp, ext) = kink_slots(d.sign(c));
    for pair in [lp, ext] {
        let a = HalfEdge::new(c, pair[0]);
        let b = HalfEdge::new(c, pair[1]);
        if d.partner(a) == b {
            return Some(pair);
        }
    }
    None
}

fn r1_delete(d: &VirtualDiagram, c: usize) -> Result<VirtualDiagram> {
    if kink_loop(d, c).is_none() {
        return Err(Error::PatternNotFound);
    }
    Ok(excise(d, &[c], |_| PASS_THROUGH))
}

fn r1sq_insert(d: &VirtualDiagram, site: EdgeSite, first_sign: Sign) -> Result<VirtualDiagram> {
    let (d1, id) = r1_insert(d, site, first_sign)?;
    let c = d1.crossing_by_id(&id).expect("just inserted");
    // second kink goes on an edge adjacent to the first: the external edge
    // for an edge site, the closure edge for a free-loop site
    let (_, ext) = kink_slots(first_sign);
    let adjacent = EdgeSite::Edge(HalfEdge::new(c, ext[1]));
    let (d2, _) = r1_insert(&d1, adjacent, first_sign.flip())?;
    Ok(d2)
}

fn r1sq_delete(d: &VirtualDiagram, c1: usize, c2: usize) -> Result<VirtualDiagram> {
    if c1 == c2 {
        return Err(Error::PatternNotFound);
    }
    let (Some(l1), Some(l2)) = (kink_loop(d, c1), kink_loop(d, c2)) else {
        return Err(Error::PatternNotFound);
    };
    if d.sign(c1) != d.sign(c2).flip() {
        return Err(Error::PatternNotFound);
    }
    // adjacency: some non-loop slot of c1 pairs directly with one of c2
    let adjacent = (0..4u8)
        .filter(|s| !l1.contains(s))
        .any(|s| {
            let p = d.partner(HalfEdge::new(c1, s));
            p.crossing_index() == c2 && !l2.contains(&p.slot)
        });
    if !adjacent {
        return Err(Error::PatternNotFound);
    }
    Ok(excise(d, &[c1, c2], |_| PASS_THROUGH))
}

fn r2_insert(
    d: &VirtualDiagram,
    under: EdgeSite,
    over: EdgeSite,
    antiparallel: bool,
    negative_first: bool,
) -> Result<VirtualDiagram> {
    let under_ends = edge_endpoints(d, under)?;
    let over_ends = edge_endpoints(d, over)?;
    let s1 = if negative_first { Sign::Minus } else { Sign::Plus };
    let s2 = s1.flip();
    let nc = d.crossing_count();
    let id1 = d.fresh_id(nc + 1);
    let id2 = {
        let mut k = nc + 2;
        loop {
            let id = k.to_string();
            if id != id1 && d.crossing_by_id(&id).is_none() {
                break id;
            }
            k += 1;
        }
    };
    let mut crossings = d.crossings().to_vec();
    crossings.push(Crossing { id: id1, sign: s1 });
    crossings.push(Crossing { id: id2, sign: s2 });
    let (c1, c2) = (nc, nc + 1);
    let mut edges = d.edges();
    let mut free = d.free_loops();

    // under strand passes c1 then c2: in c1.0, out c1.2, in c2.0, out c2.2
    edges.push((HalfEdge::new(c1, 2), HalfEdge::new(c2, 0)));
    // over strand and its mid edge, direction given by the variant
    let (over_in, over_out) = if antiparallel {
        edges.push((HalfEdge::new(c2, s2.over_out()), HalfEdge::new(c1, s1.over_in())));
        (HalfEdge::new(c2, s2.over_in()), HalfEdge::new(c1, s1.over_out()))
    } else {
        edges.push((HalfEdge::new(c1, s1.over_out()), HalfEdge::new(c2, s2.over_in())));
        (HalfEdge::new(c1, s1.over_in()), HalfEdge::new(c2, s2.over_out()))
    };
    let under_in = HalfEdge::new(c1, 0);
    let under_out = HalfEdge::new(c2, 2);

    let remove_edge = |edges: &mut Vec<(HalfEdge, HalfEdge)>, h1: HalfEdge, h2: HalfEdge| {
        edges.retain(|&(a, b)| !(a == h1 && b == h2 || a == h2 && b == h1));
    };
    let same_edge = match (under_ends, over_ends) {
        (Some((h1, h2)), Some((g1, g2))) => (h1.min(h2), h1.max(h2)) == (g1.min(g2), g1.max(g2)),
        (None, None) => true,
        _ => false,
    };
    match (under_ends, over_ends) {
        (Some((h1, h2)), Some((g1, g2))) if !same_edge => {
            remove_edge(&mut edges, h1, h2);
            remove_edge(&mut edges, g1, g2);
            edges.push((h1, under_in));
            edges.push((under_out, h2));
            edges.push((g1, over_in));
            edges.push((over_out, g2));
        }
        (Some((h1, h2)), Some(_)) => {
            // both strands on the same edge: thread it through itself
            remove_edge(&mut edges, h1, h2);
            edges.push((h1, under_in));
            edges.push((under_out, over_in));
            edges.push((over_out, h2));
        }
        (Some((h1, h2)), None) => {
            // over strand is a free loop poked over the edge
            free -= 1;
            remove_edge(&mut edges, h1, h2);
            edges.push((h1, under_in));
            edges.push((under_out, h2));
            edges.push((over_out, over_in));
        }
        (None, Some((g1, g2))) => {
            free -= 1;
            edges.push((under_out, under_in));
            remove_edge(&mut edges, g1, g2);
            edges.push((g1, over_in));
            edges.push((over_out, g2));
        }
        (None, _) => {
            // one free loop threaded through itself
            free -= 1;
            edges.push((under_out, over_in));
            edges.push((over_out, under_in));
        }
    }
    Ok(VirtualDiagram::new(crossings, edges, free)?)
}

/// Does `(a, b)` carry a deletable R2 bigon, with the under strand passing
/// a then b?
fn r2_bigon(d: &VirtualDiagram, a: usize, b: usize) -> bool {
    if a == b || a >= d.crossing_count() || b >= d.crossing_count() {
        return false;
    }
    let (sa, sb) = (d.sign(a), d.sign(b));
    if sa != sb.flip() {
        return false;
    }
    if d.partner(HalfEdge::new(a, 2)) != HalfEdge::new(b, 0) {
        return false;
    }
    let parallel = d.partner(HalfEdge::new(a, sa.over_out())) == HalfEdge::new(b, sb.over_in());
    let anti = d.partner(HalfEdge::new(b, sb.over_out())) == HalfEdge::new(a, sa.over_in());
    parallel || anti
}

fn r2_delete(d: &VirtualDiagram, a: usize, b: usize) -> Result<VirtualDiagram> {
    if !r2_bigon(d, a, b) {
        return Err(Error::PatternNotFound);
    }
    Ok(excise(d, &[a, b], |_| PASS_THROUGH))
}

/// Corner slots of a braid crossing with the given sign, reading
/// `(top-left, top-right, bottom-left, bottom-right)` with both strands
/// running downward.
fn braid_corners(sign: Sign) -> (u8, u8, u8, u8) {
    match sign {
        Sign::Plus => (0, 3, 1, 2),
        Sign::Minus => (1, 0, 2, 3),
    }
}

/// The two triangle configurations related by the braid relation. With
/// corners (tl, tr, bl, br), the first form has internal edges
/// A.bl-C.tl, A.br-B.tl, B.bl-C.tr; the second A.bl-B.tr, A.br-C.tr,
/// B.br-C.tl.
fn r3_internal(
    sign: Sign,
    a: usize,
    b: usize,
    c: usize,
    second_form: bool,
) -> [(HalfEdge, HalfEdge); 3] {
    let (tl, tr, bl, br) = braid_corners(sign);
    if !second_form {
        [
            (HalfEdge::new(a, bl), HalfEdge::new(c, tl)),
            (HalfEdge::new(a, br), HalfEdge::new(b, tl)),
            (HalfEdge::new(b, bl), HalfEdge::new(c, tr)),
        ]
    } else {
        [
            (HalfEdge::new(a, bl), HalfEdge::new(b, tr)),
            (HalfEdge::new(a, br), HalfEdge::new(c, tr)),
            (HalfEdge::new(b, br), HalfEdge::new(c, tl)),
        ]
    }
}

/// Boundary relabeling from the first form to the second.
fn r3_boundary_map(sign: Sign, a: usize, b: usize, c: usize) -> [(HalfEdge, HalfEdge); 6] {
    let (tl, tr, bl, br) = braid_corners(sign);
    [
        (HalfEdge::new(a, tl), HalfEdge::new(b, tl)),
        (HalfEdge::new(a, tr), HalfEdge::new(a, tl)),
        (HalfEdge::new(b, tr), HalfEdge::new(a, tr)),
        (HalfEdge::new(c, bl), HalfEdge::new(b, bl)),
        (HalfEdge::new(c, br), HalfEdge::new(c, bl)),
        (HalfEdge::new(b, br), HalfEdge::new(c, br)),
    ]
}

fn r3_matches(d: &VirtualDiagram, (a, b, c): (usize, usize, usize), second_form: bool) -> bool {
    let n = d.crossing_count();
    if a >= n || b >= n || c >= n || a == b || b == c || a == c {
        return false;
    }
    let sign = d.sign(a);
    if d.sign(b) != sign || d.sign(c) != sign {
        return false;
    }
    r3_internal(sign, a, b, c, second_form)
        .iter()
        .all(|&(x, y)| d.partner(x) == y)
}

fn r3(d: &VirtualDiagram, (a, b, c): (usize, usize, usize), reverse: bool) -> Result<VirtualDiagram> {
    if !r3_matches(d, (a, b, c), reverse) {
        return Err(Error::PatternNotFound);
    }
    let sign = d.sign(a);
    let old_internal = r3_internal(sign, a, b, c, reverse);
    let new_internal = r3_internal(sign, a, b, c, !reverse);
    let mut map: Vec<(HalfEdge, HalfEdge)> = r3_boundary_map(sign, a, b, c).to_vec();
    if reverse {
        map = map.into_iter().map(|(x, y)| (y, x)).collect();
    }
    let relabel = |h: HalfEdge| map.iter().find(|&&(x, _)| x == h).map_or(h, |&(_, y)| y);
    let mut edges = Vec::new();
    for (x, y) in d.edges() {
        if old_internal.iter().any(|&(p, q)| (x, y) == (p, q) || (x, y) == (q, p)) {
            continue;
        }
        edges.push((relabel(x), relabel(y)));
    }
    edges.extend_from_slice(&new_internal);
    VirtualDiagram::new(d.crossings().to_vec(), edges, d.free_loops())
}

/// All crossings carrying a deletable kink.
pub fn find_r1_delete_sites(d: &VirtualDiagram) -> Vec<usize> {
    (0..d.crossing_count()).filter(|&c| kink_loop(d, c).is_some()).collect()
}

pub fn find_r1sq_delete_sites(d: &VirtualDiagram) -> Vec<(usize, usize)> {
    let kinks = find_r1_delete_sites(d);
    let mut out = Vec::new();
    for &c1 in &kinks {
        for &c2 in &kinks {
            if c1 < c2 && r1sq_delete(d, c1, c2).is_ok() {
                out.push((c1, c2));
            }
        }
    }
    out
}

pub fn find_r2_delete_sites(d: &VirtualDiagram) -> Vec<(usize, usize)> {
    let n = d.crossing_count();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if r2_bigon(d, a, b) {
                out.push((a, b));
            }
        }
    }
    out
}

/// All `(crossings, reverse)` pairs where the triangle slide applies.
pub fn find_r3_sites(d: &VirtualDiagram) -> Vec<((usize, usize, usize), bool)> {
    let n = d.crossing_count();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for reverse in [false, true] {
                    if r3_matches(d, (a, b, c), reverse) {
                        out.push(((a, b, c), reverse));
                    }
                }
            }
        }
    }
    out
}
