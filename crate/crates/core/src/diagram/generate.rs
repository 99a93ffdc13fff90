//! Deterministic diagram generators for tests and the fuzz harness.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Crossing, HalfEdge, Sign, VirtualDiagram};

/// Seeded random diagram with `n` crossings.
///
/// With `components_hint == 1` this draws a uniformly random signed
/// double-occurrence word of length `2n` (every such word is a virtual
/// knot). Otherwise it draws a uniformly random perfect matching on all
/// half-edges, whose component count is whatever it is.
pub fn random_diagram(n: usize, components_hint: usize, seed: u64) -> VirtualDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n == 0 {
        return VirtualDiagram::unlink(components_hint.max(1) as u32);
    }
    if components_hint <= 1 {
        random_knot(n, &mut rng)
    } else {
        random_link(n, &mut rng)
    }
}

fn random_knot(n: usize, rng: &mut ChaCha8Rng) -> VirtualDiagram {
    // double-occurrence word over labels 1..=n
    let mut word: Vec<usize> = (0..n).flat_map(|i| [i, i]).collect();
    word.shuffle(rng);
    let signs: Vec<Sign> = (0..n)
        .map(|_| if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus })
        .collect();
    let first_is_over: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut seen = vec![false; n];
    let mut code = String::new();
    for &label in &word {
        let over = if seen[label] { !first_is_over[label] } else { first_is_over[label] };
        seen[label] = true;
        code.push(if over { 'O' } else { 'U' });
        code.push_str(&(label + 1).to_string());
        code.push(signs[label].as_char());
    }
    super::parse_gauss(&code).expect("generated codes are valid")
}

fn random_link(n: usize, rng: &mut ChaCha8Rng) -> VirtualDiagram {
    let crossings: Vec<Crossing> = (0..n)
        .map(|i| Crossing {
            id: (i + 1).to_string(),
            sign: if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus },
        })
        .collect();
    let mut sockets: Vec<HalfEdge> =
        (0..n).flat_map(|c| (0..4u8).map(move |s| HalfEdge::new(c, s))).collect();
    sockets.shuffle(rng);
    let edges: Vec<(HalfEdge, HalfEdge)> =
        sockets.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    VirtualDiagram::new(crossings, edges, 0).expect("matching covers all sockets")
}

/// Closure of a braid word on `strands` strands; each letter crosses the
/// strands at `position` and `position + 1` with the given sign.
pub fn braid_closure(strands: usize, word: &[(usize, Sign)]) -> VirtualDiagram {
    let corners = |sign: Sign| match sign {
        Sign::Plus => (0u8, 3u8, 1u8, 2u8),
        Sign::Minus => (1, 0, 2, 3),
    };
    let mut crossings = Vec::with_capacity(word.len());
    let mut edges = Vec::new();
    let mut start: Vec<Option<HalfEdge>> = vec![None; strands];
    let mut cur: Vec<Option<HalfEdge>> = vec![None; strands];
    for (k, &(pos, sign)) in word.iter().enumerate() {
        assert!(pos + 1 < strands, "letter out of range");
        crossings.push(Crossing { id: (k + 1).to_string(), sign });
        let (tl, tr, bl, br) = corners(sign);
        for (p, in_slot, out_slot) in [(pos, tl, bl), (pos + 1, tr, br)] {
            let input = HalfEdge::new(k, in_slot);
            match cur[p] {
                Some(prev) => edges.push((prev, input)),
                None => start[p] = Some(input),
            }
            cur[p] = Some(HalfEdge::new(k, out_slot));
        }
    }
    let mut free = 0;
    for p in 0..strands {
        match (start[p], cur[p]) {
            (Some(s), Some(c)) => edges.push((c, s)),
            (None, None) => free += 1,
            _ => unreachable!(),
        }
    }
    VirtualDiagram::new(crossings, edges, free).expect("braid closures are valid")
}

/// Uniform random choice helper used by the fuzz harness.
pub(crate) fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T]) -> Option<&'a T> {
    if items.is_empty() {
        None
    } else {
        Some(&items[rng.gen_range(0..items.len())])
    }
}
