//! The detour-quotient representation of virtual link diagrams.
//!
//! A diagram stores classical crossings (each with a declared sign and four
//! half-edge sockets in counterclockwise order) together with a perfect
//! matching on all half-edges, plus a count of crossing-free circles.
//! Virtual crossings and planar embedding data are never stored: every
//! invariant in this crate depends only on this quotient.
//!
//! Slot convention: slot 0 is the incoming under-strand, slots are numbered
//! counterclockwise, so slots 0/2 carry the under-strand and 1/3 the
//! over-strand; the sign is `+` exactly when the over-strand runs from
//! slot 3 to slot 1.

mod canon;
mod gauss;
mod json;

pub mod cable;
pub mod generate;
pub mod moves;

pub use gauss::{parse_gauss, GaussCode, GaussToken};
pub use json::{parse_diagram_json, serialize_diagram};

use std::fmt;

use crate::error::{Error, Result};

/// Writhe sign of a classical crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Slot where the over-strand enters.
    pub fn over_in(self) -> u8 {
        match self {
            Sign::Plus => 3,
            Sign::Minus => 1,
        }
    }

    /// Slot where the over-strand exits.
    pub fn over_out(self) -> u8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => 3,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// One of the four sockets of a crossing, `(crossing index, slot 0..3)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub crossing: u32,
    pub slot: u8,
}

impl HalfEdge {
    pub fn new(crossing: usize, slot: u8) -> Self {
        HalfEdge { crossing: crossing as u32, slot }
    }

    pub fn crossing_index(self) -> usize {
        self.crossing as usize
    }

    /// The socket reached by passing straight through the crossing.
    pub fn opposite(self) -> HalfEdge {
        HalfEdge { crossing: self.crossing, slot: (self.slot + 2) % 4 }
    }
}

impl fmt::Debug for HalfEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.crossing, self.slot)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub id: String,
    pub sign: Sign,
}

/// Counts reported by [`VirtualDiagram::stats`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stats {
    pub n: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub writhe: i64,
    pub components: usize,
    pub free_loops: u32,
}

/// A single violated invariant found by [`VirtualDiagram::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateSocket { half_edge: HalfEdge },
    DanglingHalfEdge { half_edge: HalfEdge },
    SelfPaired { half_edge: HalfEdge },
}

/// Validation report: violations plus bookkeeping counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub components: usize,
    pub frame_components: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct VirtualDiagram {
    crossings: Vec<Crossing>,
    partner: Vec<[HalfEdge; 4]>,
    free_loops: u32,
}

impl VirtualDiagram {
    /// The crossing-free `k`-component unlink.
    pub fn unlink(free_loops: u32) -> Self {
        VirtualDiagram { crossings: Vec::new(), partner: Vec::new(), free_loops }
    }

    /// Zero-crossing unknot.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// Build a diagram from crossing data and an explicit edge list.
    ///
    /// Crossings are re-sorted into the canonical id order (numeric ids
    /// first, by value); every half-edge must occur in exactly one edge.
    pub fn new(
        crossings: Vec<Crossing>,
        edges: Vec<(HalfEdge, HalfEdge)>,
        free_loops: u32,
    ) -> Result<Self> {
        let n = crossings.len();
        let order = sorted_order(&crossings);
        let mut remap = vec![0u32; n];
        for (new_idx, &old_idx) in order.iter().enumerate() {
            remap[old_idx] = new_idx as u32;
        }
        let crossings: Vec<Crossing> = order.iter().map(|&i| crossings[i].clone()).collect();
        for w in crossings.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::SchemaError(format!("duplicate crossing id {:?}", w[0].id)));
            }
        }
        let mut partner: Vec<[Option<HalfEdge>; 4]> = vec![[None; 4]; n];
        let mut set = |h: HalfEdge, p: HalfEdge| -> Result<()> {
            if h.crossing_index() >= n || h.slot > 3 {
                return Err(Error::DanglingHalfEdge { edge: format!("{h:?}") });
            }
            let cell = &mut partner[h.crossing_index()][h.slot as usize];
            if cell.is_some() {
                return Err(Error::DuplicateSocket { half_edge: format!("{h:?}") });
            }
            *cell = Some(p);
            Ok(())
        };
        for (a, b) in edges {
            if a.crossing_index() >= n || b.crossing_index() >= n || a.slot > 3 || b.slot > 3 {
                return Err(Error::DanglingHalfEdge { edge: format!("{a:?}-{b:?}") });
            }
            let a = HalfEdge { crossing: remap[a.crossing_index()], slot: a.slot };
            let b = HalfEdge { crossing: remap[b.crossing_index()], slot: b.slot };
            if a == b {
                return Err(Error::SchemaError(format!("edge pairs {a:?} with itself")));
            }
            set(a, b)?;
            set(b, a)?;
        }
        let mut full = Vec::with_capacity(n);
        for (c, slots) in partner.iter().enumerate() {
            let mut row = [HalfEdge::new(0, 0); 4];
            for (s, p) in slots.iter().enumerate() {
                row[s] = p.ok_or_else(|| Error::DanglingHalfEdge {
                    edge: format!("{:?}", HalfEdge::new(c, s as u8)),
                })?;
            }
            full.push(row);
        }
        Ok(VirtualDiagram { crossings, partner: full, free_loops })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn free_loops(&self) -> u32 {
        self.free_loops
    }

    pub fn sign(&self, crossing: usize) -> Sign {
        self.crossings[crossing].sign
    }

    pub fn crossing_by_id(&self, id: &str) -> Option<usize> {
        self.crossings.iter().position(|c| c.id == id)
    }

    /// The half-edge paired with `h`.
    pub fn partner(&self, h: HalfEdge) -> HalfEdge {
        self.partner[h.crossing_index()][h.slot as usize]
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdge> + '_ {
        (0..self.crossings.len()).flat_map(|c| (0..4u8).map(move |s| HalfEdge::new(c, s)))
    }

    /// Edges as sorted `(min, max)` pairs, in ascending order.
    pub fn edges(&self) -> Vec<(HalfEdge, HalfEdge)> {
        let mut out = Vec::with_capacity(self.crossings.len() * 2);
        for h in self.half_edges() {
            let p = self.partner(h);
            if h < p {
                out.push((h, p));
            }
        }
        out
    }

    /// Structured invariant check; never fails, reports violations instead.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for h in self.half_edges() {
            let p = self.partner(h);
            if p.crossing_index() >= self.crossings.len() || p.slot > 3 {
                violations.push(Violation::DanglingHalfEdge { half_edge: h });
                continue;
            }
            if p == h {
                violations.push(Violation::SelfPaired { half_edge: h });
                continue;
            }
            if self.partner(p) != h {
                violations.push(Violation::DuplicateSocket { half_edge: h });
            }
        }
        let (components, frame_components) = if violations.is_empty() {
            (self.component_count(), self.frame_components())
        } else {
            (0, 0)
        };
        ValidationReport { violations, components, frame_components }
    }

    /// Unicursal components of the underlying curve (free loops included).
    pub fn component_count(&self) -> usize {
        let n = self.crossings.len();
        let mut seen = vec![false; 4 * n];
        let idx = |h: HalfEdge| h.crossing_index() * 4 + h.slot as usize;
        let mut count = 0;
        for start in self.half_edges() {
            if seen[idx(start)] {
                continue;
            }
            count += 1;
            // walk: enter at h, leave at the opposite slot, cross the edge
            let mut h = start;
            loop {
                seen[idx(h)] = true;
                let out = h.opposite();
                seen[idx(out)] = true;
                h = self.partner(out);
                if h == start {
                    break;
                }
            }
        }
        count + self.free_loops as usize
    }

    /// Connected components of the frame graph (crossings joined by edges),
    /// free loops counted separately.
    pub fn frame_components(&self) -> usize {
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for h in self.half_edges() {
            let p = self.partner(h);
            let (a, b) = (find(&mut parent, h.crossing_index()), find(&mut parent, p.crossing_index()));
            if a != b {
                parent[a] = b;
            }
        }
        let mut roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len() + self.free_loops as usize
    }

    pub fn stats(&self) -> Stats {
        let n_plus = self.crossings.iter().filter(|c| c.sign == Sign::Plus).count();
        let n_minus = self.crossings.len() - n_plus;
        Stats {
            n: self.crossings.len(),
            n_plus,
            n_minus,
            writhe: n_plus as i64 - n_minus as i64,
            components: self.component_count(),
            free_loops: self.free_loops,
        }
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign == Sign::Plus).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.len() - self.n_plus()
    }

    /// Local virtualization rewrite at one crossing.
    ///
    /// Relabels the crossing's slots by the reflection (01)(23); this
    /// reverses the cyclic order and swaps the over/under roles while
    /// keeping the declared sign and both smoothing pairings, so the whole
    /// perestroika cube is untouched.
    pub fn virtualize(&self, crossing_id: &str) -> Result<VirtualDiagram> {
        let c = self
            .crossing_by_id(crossing_id)
            .ok_or_else(|| Error::UnknownCrossing(crossing_id.to_string()))?;
        Ok(self.virtualize_at(c))
    }

    /// Same as [`virtualize`](Self::virtualize) by crossing index.
    pub fn virtualize_at(&self, c: usize) -> VirtualDiagram {
        let relabel = |h: HalfEdge| {
            if h.crossing_index() == c {
                let slot = match h.slot {
                    0 => 1,
                    1 => 0,
                    2 => 3,
                    _ => 2,
                };
                HalfEdge { crossing: h.crossing, slot }
            } else {
                h
            }
        };
        let mut partner = vec![[HalfEdge::new(0, 0); 4]; self.crossings.len()];
        for h in self.half_edges() {
            let p = self.partner(h);
            let nh = relabel(h);
            partner[nh.crossing_index()][nh.slot as usize] = relabel(p);
        }
        VirtualDiagram { crossings: self.crossings.clone(), partner, free_loops: self.free_loops }
    }

    /// Disjoint union; crossing ids of `other` are suffixed when they clash.
    pub fn disjoint_union(&self, other: &VirtualDiagram) -> VirtualDiagram {
        let mut crossings = self.crossings.clone();
        let taken: std::collections::HashSet<&str> =
            self.crossings.iter().map(|c| c.id.as_str()).collect();
        for c in &other.crossings {
            let mut id = c.id.clone();
            while taken.contains(id.as_str()) {
                id.push('\'');
            }
            crossings.push(Crossing { id, sign: c.sign });
        }
        let offset = self.crossings.len() as u32;
        let mut edges = Vec::new();
        for (a, b) in self.edges() {
            edges.push((a, b));
        }
        for (a, b) in other.edges() {
            edges.push((
                HalfEdge { crossing: a.crossing + offset, slot: a.slot },
                HalfEdge { crossing: b.crossing + offset, slot: b.slot },
            ));
        }
        VirtualDiagram::new(crossings, edges, self.free_loops + other.free_loops)
            .expect("disjoint union of valid diagrams is valid")
    }

    /// Allocate a crossing id not used by this diagram.
    pub(crate) fn fresh_id(&self, hint: usize) -> String {
        let mut k = hint.max(1);
        loop {
            let id = k.to_string();
            if self.crossing_by_id(&id).is_none() {
                return id;
            }
            k += 1;
        }
    }

    /// Isomorphism as defined for tests: a sign-preserving bijection of
    /// crossings with the identity slot map, matching edges and free loops.
    pub fn is_isomorphic(&self, other: &VirtualDiagram) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// Canonical form usable as an isomorphism-class key.
    pub fn canonical_form(&self) -> Vec<u8> {
        canon::canonical_form(self)
    }
}

impl fmt::Debug for VirtualDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VirtualDiagram(n={}, loops={};", self.crossings.len(), self.free_loops)?;
        for c in &self.crossings {
            write!(f, " {}{}", c.id, c.sign)?;
        }
        write!(f, ";")?;
        for (a, b) in self.edges() {
            write!(f, " {a:?}-{b:?}")?;
        }
        write!(f, ")")
    }
}

fn sorted_order(crossings: &[Crossing]) -> Vec<usize> {
    let key = |id: &str| -> (u8, u64, String) {
        match id.parse::<u64>() {
            Ok(v) => (0, v, String::new()),
            Err(_) => (1, 0, id.to_string()),
        }
    };
    let mut order: Vec<usize> = (0..crossings.len()).collect();
    order.sort_by_key(|&i| key(&crossings[i].id));
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn kink(sign: Sign) -> VirtualDiagram {
        // loop edge on the sign-matched adjacent pair, closure on the rest
        let (l, c) = match sign {
            Sign::Plus => (((0, 0), (0, 1)), ((0, 2), (0, 3))),
            Sign::Minus => (((0, 0), (0, 3)), ((0, 1), (0, 2))),
        };
        VirtualDiagram::new(
            vec![Crossing { id: "1".into(), sign }],
            vec![
                (HalfEdge::new(l.0 .0, l.0 .1 as u8), HalfEdge::new(l.1 .0, l.1 .1 as u8)),
                (HalfEdge::new(c.0 .0, c.0 .1 as u8), HalfEdge::new(c.1 .0, c.1 .1 as u8)),
            ],
            0,
        )
        .unwrap()
    }

    #[test]
    fn unknot_stats() {
        let d = VirtualDiagram::unknot();
        let s = d.stats();
        assert_eq!((s.n, s.writhe, s.components), (0, 0, 1));
        assert!(d.validate().is_valid());
    }

    #[test]
    fn kink_is_one_component() {
        for sign in [Sign::Plus, Sign::Minus] {
            let d = kink(sign);
            let s = d.stats();
            assert_eq!(s.n, 1);
            assert_eq!(s.components, 1);
            assert_eq!(s.writhe, if sign == Sign::Plus { 1 } else { -1 });
            assert!(d.validate().is_valid());
        }
    }

    #[test]
    fn missing_socket_is_rejected() {
        let r = VirtualDiagram::new(
            vec![Crossing { id: "1".into(), sign: Sign::Plus }],
            vec![(HalfEdge::new(0, 0), HalfEdge::new(0, 1))],
            0,
        );
        assert!(matches!(r, Err(Error::DanglingHalfEdge { .. })));
    }

    #[test]
    fn duplicate_socket_is_rejected() {
        let r = VirtualDiagram::new(
            vec![Crossing { id: "1".into(), sign: Sign::Plus }],
            vec![
                (HalfEdge::new(0, 0), HalfEdge::new(0, 1)),
                (HalfEdge::new(0, 0), HalfEdge::new(0, 2)),
                (HalfEdge::new(0, 2), HalfEdge::new(0, 3)),
            ],
            0,
        );
        assert!(matches!(r, Err(Error::DuplicateSocket { .. })));
    }

    #[test]
    fn virtualize_is_involution() {
        let d = parse_gauss("O1+O2+U1+U2+").unwrap();
        let v = d.virtualize("1").unwrap();
        let vv = v.virtualize("1").unwrap();
        assert!(d.is_isomorphic(&vv));
        assert_eq!(d.stats(), v.stats());
        assert_eq!(d.partner, vv.partner);
    }

    #[test]
    fn disjoint_union_counts() {
        let a = kink(Sign::Plus);
        let b = kink(Sign::Minus);
        let u = a.disjoint_union(&b);
        let s = u.stats();
        assert_eq!((s.n, s.components, s.writhe), (2, 2, 0));
        assert!(u.validate().is_valid());
    }
}
