//! Chain complex assembly, d^2 verification, and Betti tables.

use std::collections::BTreeMap;

use super::{
    edge_sign, require_good_for, EdgeTransition, Field, PerestroikaCube, TransitionKind, ACTIVE,
};
use crate::diagram::VirtualDiagram;
use crate::error::{Error, Result};
use crate::linalg::{SparseBitMatrix, SparseIntMatrix};
use crate::poly::{LaurentPoly, Poincare2};
use crate::resolve::State;
use crate::state_sum::Budget;

/// Differential matrices in the chosen field.
enum Mat {
    Bits(SparseBitMatrix),
    Ints(SparseIntMatrix),
}

impl Mat {
    fn rank(&self) -> usize {
        match self {
            Mat::Bits(m) => m.rank(),
            Mat::Ints(m) => m.rank(),
        }
    }
}

/// The assembled bigraded complex. Blocks are indexed internally by
/// `(beta, j)` with `beta` in `0..=n`; the recorded shifts
/// `{n+ - 2n-}[n-]` are applied when emitting tables.
pub struct GradedComplex {
    field: Field,
    n_plus: i64,
    n_minus: i64,
    cube: PerestroikaCube,
    /// Block dimensions keyed by internal `(beta, j)`.
    dims: BTreeMap<(usize, i64), usize>,
    /// Differential out of each block, keyed by the source block.
    mats: BTreeMap<(usize, i64), Mat>,
    /// Per state and per plus-count, the offset of that monomial segment
    /// inside its block.
    offsets: Vec<Vec<u32>>,
    binom: Binomials,
}

impl GradedComplex {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn cube(&self) -> &PerestroikaCube {
        &self.cube
    }

    pub fn height_shift(&self) -> i64 {
        self.n_minus
    }

    pub fn degree_shift(&self) -> i64 {
        self.n_plus - 2 * self.n_minus
    }

    /// Chain dimensions keyed by the emitted `(i, j)`.
    pub fn chain_dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.dims
            .iter()
            .map(|(&(beta, j), &dim)| {
                ((beta as i64 - self.n_minus, j + self.degree_shift()), dim)
            })
            .collect()
    }

    pub fn total_dimension(&self) -> usize {
        self.dims.values().sum()
    }
}

#[derive(Clone)]
struct Binomials(Vec<Vec<u64>>);

impl Binomials {
    fn new(n: usize) -> Self {
        let mut t = vec![vec![0u64; n + 1]; n + 1];
        for i in 0..=n {
            t[i][0] = 1;
            for k in 1..=i {
                t[i][k] = t[i - 1][k - 1] + t[i - 1][k];
            }
        }
        Binomials(t)
    }

    fn c(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.0[n][k]
        }
    }

    /// Colex rank of `mask` among all masks with the same popcount.
    fn rank(&self, mask: u64) -> u64 {
        let mut r = 0;
        let mut i = 0;
        let mut m = mask;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            i += 1;
            r += self.c(b, i);
            m &= m - 1;
        }
        r
    }
}

fn j_internal(plus: u32, gamma: usize, beta: usize) -> i64 {
    2 * plus as i64 - gamma as i64 + beta as i64
}

/// Images of one basis monomial along one edge, written into `out`;
/// returns the count (0, 1 or 2). Empty on 1->1 edges and killed merges.
/// Monomials are bitmasks over circles (`1` = `v+`); all coefficients of
/// the Frobenius maps are 1 here, signs are the caller's business.
fn edge_images(tr: &EdgeTransition, m: u64, out: &mut [u64; 2]) -> usize {
    if tr.kind == TransitionKind::OneOne {
        return 0;
    }
    let mut base = 0u64;
    for (j, &src) in tr.dst_from_src().iter().enumerate() {
        if src != ACTIVE {
            base |= (m >> src & 1) << j;
        }
    }
    match tr.kind {
        TransitionKind::Merge => {
            let (c1, c2) = (tr.src_active()[0], tr.src_active()[1]);
            let dst = tr.dst_active()[0];
            match super::frobenius::m(m >> c1 & 1 == 1, m >> c2 & 1 == 1) {
                Some(v) => {
                    out[0] = base | (v as u64) << dst;
                    1
                }
                None => 0,
            }
        }
        TransitionKind::Split => {
            let c = tr.src_active()[0];
            let (o1, o2) = (tr.dst_active()[0], tr.dst_active()[1]);
            let outs = super::frobenius::delta(m >> c & 1 == 1);
            for (idx, &(v1, v2)) in outs.iter().enumerate() {
                out[idx] = base | (v1 as u64) << o1 | (v2 as u64) << o2;
            }
            outs.len()
        }
        TransitionKind::OneOne => unreachable!(),
    }
}

/// Assemble the chain complex of a diagram over the chosen field.
///
/// Rational coefficients are refused (with [`Error::OneOneEdge`]) when the
/// cube has a 1->1 edge; GF(2) accepts any diagram. `d^2 = 0` is checked
/// on every assembled complex through the cube's 2-faces.
pub fn chain_complex(d: &VirtualDiagram, field: Field, budget: Budget) -> Result<GradedComplex> {
    let cube = PerestroikaCube::build(d, budget)?;
    require_good_for(field, &cube)?;
    let n = cube.crossing_count();
    let binom = Binomials::new(32);

    // block dimensions and per-state offsets
    let mut dims: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    let mut offsets: Vec<Vec<u32>> = Vec::with_capacity(1 << n);
    for s in cube.states() {
        let gamma = cube.gamma(s);
        let beta = s.beta();
        let mut per_p = Vec::with_capacity(gamma + 1);
        for p in 0..=gamma {
            let key = (beta, j_internal(p as u32, gamma, beta));
            let dim = dims.entry(key).or_insert(0);
            per_p.push(*dim as u32);
            *dim += binom.c(gamma, p) as usize;
        }
        offsets.push(per_p);
    }

    // differential entries
    let mut mats: BTreeMap<(usize, i64), Mat> = BTreeMap::new();
    let mut images = [0u64; 2];
    for s in cube.states() {
        let gamma = cube.gamma(s);
        let beta = s.beta();
        for k in 0..n {
            if s.bit(k) {
                continue;
            }
            let t = s.flip(k);
            let tr = cube.transition(s, k);
            if tr.kind == TransitionKind::OneOne {
                continue;
            }
            let sign = edge_sign(s, k);
            let t_gamma = cube.gamma(t);
            for m in 0..1u64 << gamma {
                let p = m.count_ones();
                let key = (beta, j_internal(p, gamma, beta));
                let col =
                    offsets[s.bits() as usize][p as usize] as usize + binom.rank(m) as usize;
                let count = edge_images(&tr, m, &mut images);
                for &tm in &images[..count] {
                    let tp = tm.count_ones();
                    debug_assert_eq!(
                        j_internal(tp, t_gamma, beta + 1),
                        key.1,
                        "differential must preserve the grading"
                    );
                    let row = offsets[t.bits() as usize][tp as usize] as usize
                        + binom.rank(tm) as usize;
                    let mat = mats.entry(key).or_insert_with(|| {
                        let tkey = (beta + 1, key.1);
                        let rows = dims.get(&tkey).copied().unwrap_or(0);
                        let cols = dims[&key];
                        match field {
                            Field::GF2 => Mat::Bits(SparseBitMatrix::zero(rows, cols)),
                            Field::Rational => Mat::Ints(SparseIntMatrix::zero(rows, cols)),
                        }
                    });
                    match mat {
                        Mat::Bits(m2) => m2.flip(row, col),
                        Mat::Ints(m2) => m2.add(row, col, sign),
                    }
                }
            }
        }
    }

    let cx = GradedComplex {
        field,
        n_plus: d.n_plus() as i64,
        n_minus: d.n_minus() as i64,
        cube,
        dims,
        mats,
        offsets,
        binom,
    };
    if let Err(face) = check_faces(&cx.cube, field, edge_sign) {
        return Err(Error::Internal(format!(
            "cube face fails to (anti)commute at state {:#b}, coordinates {} and {}",
            face.state, face.k, face.l
        )));
    }
    Ok(cx)
}

/// A 2-face on which the two composites fail to cancel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailedFace {
    pub state: u64,
    pub k: usize,
    pub l: usize,
}

/// Check every 2-face of the cube: over the rationals the two signed
/// composites must sum to zero, over GF(2) they must agree.
fn check_faces(
    cube: &PerestroikaCube,
    field: Field,
    sign: impl Fn(State, usize) -> i64,
) -> std::result::Result<(), FailedFace> {
    let n = cube.crossing_count();
    // a composite path contributes at most 4 monomials; both paths fit in
    // a fixed accumulator
    let mut acc: [(u64, i64); 8] = [(0, 0); 8];
    for s in cube.states() {
        let gamma = cube.gamma(s);
        for k in 0..n {
            if s.bit(k) {
                continue;
            }
            let t1 = cube.transition(s, k);
            let sk = sign(s, k);
            for l in k + 1..n {
                if s.bit(l) {
                    continue;
                }
                let t1b = cube.transition(s.flip(k), l);
                let t2 = cube.transition(s, l);
                let t2b = cube.transition(s.flip(l), k);
                let s1 = sk * sign(s.flip(k), l);
                let s2 = sign(s, l) * sign(s.flip(l), k);
                let (mut first, mut second) = ([0u64; 2], [0u64; 2]);
                for m in 0..1u64 << gamma {
                    let mut len = 0usize;
                    let mut push = |acc: &mut [(u64, i64); 8], len: &mut usize, mono: u64, c: i64| {
                        for slot in acc[..*len].iter_mut() {
                            if slot.0 == mono {
                                slot.1 += c;
                                return;
                            }
                        }
                        acc[*len] = (mono, c);
                        *len += 1;
                    };
                    for (path_sign, ta, tb) in [(s1, &t1, &t1b), (s2, &t2, &t2b)] {
                        let c1 = edge_images(ta, m, &mut first);
                        for &m1 in &first[..c1] {
                            let c2 = edge_images(tb, m1, &mut second);
                            for &m2 in &second[..c2] {
                                push(&mut acc, &mut len, m2, path_sign);
                            }
                        }
                    }
                    let bad = match field {
                        Field::GF2 => acc[..len].iter().any(|&(_, v)| v.rem_euclid(2) != 0),
                        Field::Rational => acc[..len].iter().any(|&(_, v)| v != 0),
                    };
                    if bad {
                        return Err(FailedFace { state: s.bits(), k, l });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Full verification: matrix products `d . d = 0` block by block (meant
/// for desk-scale complexes) plus the explicit 2-face check.
pub fn verify_d2(cx: &GradedComplex) -> std::result::Result<(), FailedFace> {
    for (&(beta, j), mat) in &cx.mats {
        if let Some(next) = cx.mats.get(&(beta + 1, j)) {
            let ok = match (mat, next) {
                (Mat::Bits(a), Mat::Bits(b)) => b.mul(a).is_zero(),
                (Mat::Ints(a), Mat::Ints(b)) => b.mul(a).is_zero(),
                _ => false,
            };
            if !ok {
                return Err(FailedFace { state: u64::MAX, k: beta, l: beta + 1 });
            }
        }
    }
    check_faces(&cx.cube, cx.field, edge_sign)
}

#[cfg(test)]
pub(crate) fn check_faces_with_signs(
    cube: &PerestroikaCube,
    field: Field,
    sign: impl Fn(State, usize) -> i64,
) -> std::result::Result<(), FailedFace> {
    check_faces(cube, field, sign)
}

/// Bigraded Betti numbers over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub field: Field,
    dims: BTreeMap<(i64, i64), u64>,
}

impl BettiTable {
    pub fn new(field: Field) -> Self {
        BettiTable { field, dims: BTreeMap::new() }
    }

    pub fn from_dims(field: Field, iter: impl IntoIterator<Item = ((i64, i64), u64)>) -> Self {
        let mut t = Self::new(field);
        for ((i, j), d) in iter {
            t.set(i, j, d);
        }
        t
    }

    pub fn set(&mut self, i: i64, j: i64, dim: u64) {
        if dim == 0 {
            self.dims.remove(&(i, j));
        } else {
            self.dims.insert((i, j), dim);
        }
    }

    pub fn get(&self, i: i64, j: i64) -> u64 {
        self.dims.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), u64)> + '_ {
        self.dims.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total_dimension(&self) -> u64 {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn poincare(&self) -> Poincare2 {
        Poincare2::from_terms(self.entries().map(|(k, v)| (k, v as i64)))
    }

    /// Graded Euler characteristic `sum (-1)^i q^j b_{i,j}`.
    pub fn euler_char(&self) -> LaurentPoly {
        self.poincare().euler()
    }

    /// Partition by the parity of the q-grading: `(even part, odd part)`.
    pub fn split_even_odd(&self) -> (BettiTable, BettiTable) {
        let mut even = BettiTable::new(self.field);
        let mut odd = BettiTable::new(self.field);
        for ((i, j), d) in self.entries() {
            if j.rem_euclid(2) == 0 {
                even.set(i, j, d);
            } else {
                odd.set(i, j, d);
            }
        }
        (even, odd)
    }

    /// Tensor product table (disjoint unions multiply).
    pub fn tensor(&self, other: &BettiTable) -> BettiTable {
        let mut out = BettiTable::new(self.field);
        for ((i1, j1), d1) in self.entries() {
            for ((i2, j2), d2) in other.entries() {
                let prev = out.get(i1 + i2, j1 + j2);
                out.set(i1 + i2, j1 + j2, prev + d1 * d2);
            }
        }
        out
    }
}

impl std::fmt::Display for BettiTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for ((i, j), d) in self.entries() {
            writeln!(f, "{i}\t{j}\t{d}")?;
        }
        Ok(())
    }
}

/// Betti numbers `b_{i,j} = dim C - rank d_out - rank d_in`, emitted with
/// the global shifts applied.
pub fn homology(cx: &GradedComplex) -> BettiTable {
    let ranks: BTreeMap<(usize, i64), usize> =
        cx.mats.iter().map(|(&k, m)| (k, m.rank())).collect();
    let mut table = BettiTable::new(cx.field);
    for (&(beta, j), &dim) in &cx.dims {
        let out = ranks.get(&(beta, j)).copied().unwrap_or(0);
        let into = if beta == 0 { 0 } else { ranks.get(&(beta - 1, j)).copied().unwrap_or(0) };
        let b = dim - out - into;
        if b > 0 {
            table.set(beta as i64 - cx.height_shift(), j + cx.degree_shift(), b as u64);
        }
    }
    table
}

/// Homology of a diagram in one call.
pub fn kh(d: &VirtualDiagram, field: Field, budget: Budget) -> Result<BettiTable> {
    Ok(homology(&chain_complex(d, field, budget)?))
}
