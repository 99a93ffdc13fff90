//! Canonical forms for diagram isomorphism tests.
//!
//! Isomorphism here is a sign-preserving crossing bijection with the
//! identity slot map, so a canonical relabeling is found by breadth-first
//! traversal from every possible root and taking the lexicographic minimum
//! of the serialized forms, per frame component.

use super::{HalfEdge, Sign, VirtualDiagram};

pub fn canonical_form(d: &VirtualDiagram) -> Vec<u8> {
    let n = d.crossing_count();
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut queue = vec![start];
        while let Some(c) = queue.pop() {
            for s in 0..4u8 {
                let p = d.partner(HalfEdge::new(c, s));
                let pc = p.crossing_index();
                if comp[pc] == usize::MAX {
                    comp[pc] = id;
                    members.push(pc);
                    queue.push(pc);
                }
            }
        }
        comps.push(members);
    }
    let mut encodings: Vec<Vec<u8>> = comps
        .iter()
        .map(|members| {
            members
                .iter()
                .map(|&root| encode_from(d, members, root))
                .min()
                .expect("non-empty component")
        })
        .collect();
    encodings.sort();
    let mut out = Vec::new();
    out.extend_from_slice(&d.free_loops().to_be_bytes());
    for e in encodings {
        out.push(0xff);
        out.extend_from_slice(&e);
    }
    out
}

fn encode_from(d: &VirtualDiagram, members: &[usize], root: usize) -> Vec<u8> {
    let n = d.crossing_count();
    let mut label = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(members.len());
    label[root] = 0;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        head += 1;
        for s in 0..4u8 {
            let p = d.partner(HalfEdge::new(c, s));
            let pc = p.crossing_index();
            if label[pc] == u32::MAX {
                label[pc] = order.len() as u32;
                order.push(pc);
            }
        }
    }
    let mut out = Vec::with_capacity(members.len() * 9 + 1);
    for &c in &order {
        out.push(match d.sign(c) {
            Sign::Plus => 1,
            Sign::Minus => 2,
        });
        for s in 0..4u8 {
            let p = d.partner(HalfEdge::new(c, s));
            out.extend_from_slice(&label[p.crossing_index()].to_be_bytes());
            out.push(p.slot);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{parse_gauss, Crossing, VirtualDiagram};
    use crate::diagram::Sign;

    #[test]
    fn relabeled_diagrams_are_isomorphic() {
        let a = parse_gauss("O1+O2+U1+U2+").unwrap();
        let b = parse_gauss("O7+O3+U7+U3+").unwrap();
        assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn sign_change_breaks_isomorphism() {
        let a = parse_gauss("O1+U1+").unwrap();
        let b = parse_gauss("O1-U1-").unwrap();
        assert!(!a.is_isomorphic(&b));
    }

    #[test]
    fn free_loops_count_in_the_form() {
        let a = VirtualDiagram::unlink(1);
        let b = VirtualDiagram::unlink(2);
        assert!(!a.is_isomorphic(&b));
    }

    #[test]
    fn component_order_does_not_matter() {
        let k = |sign| {
            let d = VirtualDiagram::new(
                vec![Crossing { id: "1".into(), sign }],
                vec![
                    (super::HalfEdge::new(0, 0), super::HalfEdge::new(0, 1)),
                    (super::HalfEdge::new(0, 2), super::HalfEdge::new(0, 3)),
                ],
                0,
            )
            .unwrap();
            d
        };
        let ab = k(Sign::Plus).disjoint_union(&k(Sign::Minus));
        let ba = k(Sign::Minus).disjoint_union(&k(Sign::Plus));
        assert!(ab.is_isomorphic(&ba));
    }
}
