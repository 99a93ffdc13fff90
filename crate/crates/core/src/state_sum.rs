//! Polynomial invariants from the state cube.
//!
//! The modified bracket is `<d> = sum_s (-q)^beta(s) (q + q^-1)^gamma(s)`
//! with `<empty> = 1`, so the zero-crossing unknot evaluates to `q + q^-1`.
//! Writhe normalization gives `jhat = (-1)^{n-} q^{n+ - 2 n-} <d>`, the
//! graded Euler characteristic of the homology. The a-variable forms
//! (`jones_x` and the framed `bracket_a`) are computed independently, not
//! by substitution.

use crate::diagram::{moves::smooth_crossing, VirtualDiagram};
use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::resolve::{circle_count, State};

/// Cap on state enumeration, counted in states (`2^n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_states: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_states: 1 << 16 }
    }
}

impl Budget {
    pub fn new(max_states: u64) -> Self {
        Budget { max_states }
    }

    /// Reads `VKH_STATE_BUDGET`, falling back to the default 2^16.
    pub fn from_env() -> Self {
        std::env::var("VKH_STATE_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }

    pub fn check(self, crossings: usize) -> Result<()> {
        if crossings >= 64 {
            return Err(Error::ResourceLimit { needed: u64::MAX, budget: self.max_states });
        }
        let needed = 1u64 << crossings;
        if needed > self.max_states {
            return Err(Error::ResourceLimit { needed, budget: self.max_states });
        }
        Ok(())
    }
}

/// Per-state weights collected once and reused by the polynomial sums.
fn state_profile(d: &VirtualDiagram, budget: Budget) -> Result<Vec<(usize, usize)>> {
    budget.check(d.crossing_count())?;
    State::all(d.crossing_count())
        .map(|s| Ok((s.beta(), circle_count(d, s)?)))
        .collect()
}

/// Modified Kauffman bracket in q.
pub fn bracket(d: &VirtualDiagram, budget: Budget) -> Result<LaurentPoly> {
    let circle = LaurentPoly::circle('q');
    let mut acc = LaurentPoly::zero('q');
    let mut powers: Vec<Option<LaurentPoly>> = Vec::new();
    for (beta, gamma) in state_profile(d, budget)? {
        if powers.len() <= gamma {
            powers.resize(gamma + 1, None);
        }
        let circ = powers[gamma].get_or_insert_with(|| circle.pow(gamma as u32)).clone();
        let sign = if beta % 2 == 0 { 1 } else { -1 };
        acc = &acc + &circ.shift(beta as i64, sign);
    }
    Ok(acc)
}

/// `jhat = (-1)^{n-} q^{n+ - 2 n-} <d>`; with `normalized` the result is
/// divided by `q + q^-1` (erroring when that factor is absent).
pub fn jhat(d: &VirtualDiagram, normalized: bool, budget: Budget) -> Result<LaurentPoly> {
    let b = bracket(d, budget)?;
    let n_minus = d.n_minus() as i64;
    let n_plus = d.n_plus() as i64;
    let sign = if n_minus % 2 == 0 { 1 } else { -1 };
    let j = b.shift(n_plus - 2 * n_minus, sign);
    if normalized {
        j.div_circle()
    } else {
        Ok(j)
    }
}

/// Unnormalized a-variable Kauffman bracket
/// `sum_s a^{alpha - beta} (-a^2 - a^-2)^{gamma - 1}`; invariant under the
/// framed moves (R1^2, R2, R3) and the detour quotient.
pub fn bracket_a(d: &VirtualDiagram, budget: Budget) -> Result<LaurentPoly> {
    if d.crossing_count() == 0 && d.free_loops() == 0 {
        return Ok(LaurentPoly::one('a'));
    }
    let loop_factor = LaurentPoly::from_terms('a', [(2, -1), (-2, -1)]);
    let mut acc = LaurentPoly::zero('a');
    let mut powers: Vec<Option<LaurentPoly>> = Vec::new();
    for (beta, gamma) in state_profile(d, budget)? {
        debug_assert!(gamma >= 1);
        let g = gamma - 1;
        if powers.len() <= g {
            powers.resize(g + 1, None);
        }
        let f = powers[g].get_or_insert_with(|| loop_factor.pow(g as u32)).clone();
        let n = d.crossing_count() as i64;
        let alpha_minus_beta = n - 2 * beta as i64;
        acc = &acc + &f.shift(alpha_minus_beta, 1);
    }
    Ok(acc)
}

/// The Jones polynomial form `X = (-a)^{-3w} sum_s a^{alpha-beta}
/// (-a^2-a^-2)^{gamma-1}`, normalized so the unknot gives 1.
pub fn jones_x(d: &VirtualDiagram, budget: Budget) -> Result<LaurentPoly> {
    let body = bracket_a(d, budget)?;
    let w = d.stats().writhe;
    // (-a)^{-3w} = (-1)^w a^{-3w}
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(body.shift(-3 * w, sign))
}

/// Bracket by recursive two-term resolution: `<d> = <d_A> - q <d_B>`, a
/// crossingless diagram with c circles giving `(q + q^-1)^c`. Computed on
/// a different path from [`bracket`] and used as its oracle in tests.
pub fn skein_oracle(d: &VirtualDiagram, budget: Budget) -> Result<LaurentPoly> {
    budget.check(d.crossing_count())?;
    fn go(d: &VirtualDiagram) -> LaurentPoly {
        if d.crossing_count() == 0 {
            return LaurentPoly::circle('q').pow(d.free_loops());
        }
        let a = go(&smooth_crossing(d, 0, false));
        let b = go(&smooth_crossing(d, 0, true));
        &a - &(b.shift(1, 1))
    }
    Ok(go(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{generate::random_diagram, parse_gauss, Sign};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn bracket_unknot() {
        let d = VirtualDiagram::unknot();
        assert_eq!(bracket(&d, b()).unwrap(), LaurentPoly::circle('q'));
    }

    #[test]
    fn bracket_two_unlink() {
        let d = VirtualDiagram::unlink(2);
        let c = LaurentPoly::circle('q');
        assert_eq!(bracket(&d, b()).unwrap(), &c * &c);
    }

    #[test]
    fn bracket_virtual_trefoil_fixture() {
        // from the gamma multiset {1,1,1,2}: q^4 - 1 + q + q^-1
        let d = VirtualDiagram::virtual_trefoil();
        let expect = LaurentPoly::from_terms('q', [(4, 1), (0, -1), (1, 1), (-1, 1)]);
        assert_eq!(bracket(&d, b()).unwrap(), expect);
    }

    #[test]
    fn jhat_virtual_trefoil_fixture() {
        let d = VirtualDiagram::virtual_trefoil();
        let expect = LaurentPoly::from_terms('q', [(6, 1), (3, 1), (2, -1), (1, 1)]);
        assert_eq!(jhat(&d, false, b()).unwrap(), expect);
    }

    #[test]
    fn jhat_unknot_normalizations() {
        let d = VirtualDiagram::unknot();
        assert_eq!(jhat(&d, false, b()).unwrap(), LaurentPoly::circle('q'));
        assert_eq!(jhat(&d, true, b()).unwrap(), LaurentPoly::one('q'));
    }

    #[test]
    fn jhat_kinks_are_unknotted() {
        for sign in [Sign::Plus, Sign::Minus] {
            let d = VirtualDiagram::kink(sign);
            assert_eq!(jhat(&d, false, b()).unwrap(), LaurentPoly::circle('q'), "{sign}");
        }
    }

    #[test]
    fn jhat_not_divisible_error() {
        // every state of a non-empty diagram carries a (q + q^-1)^gamma
        // factor, so only the empty diagram trips the normalized flag
        let empty = VirtualDiagram::unlink(0);
        assert_eq!(jhat(&empty, false, b()).unwrap(), LaurentPoly::one('q'));
        assert_eq!(jhat(&empty, true, b()), Err(Error::NotDivisible));
        // the virtual trefoil normalizes to a genuine polynomial
        let vt = VirtualDiagram::virtual_trefoil();
        let expect = LaurentPoly::from_terms('q', [(2, 1), (3, -1), (5, 1)]);
        assert_eq!(jhat(&vt, true, b()).unwrap(), expect);
    }

    #[test]
    fn jones_x_unknot_and_kinks() {
        assert_eq!(jones_x(&VirtualDiagram::unknot(), b()).unwrap(), LaurentPoly::one('a'));
        for sign in [Sign::Plus, Sign::Minus] {
            let d = VirtualDiagram::kink(sign);
            assert_eq!(jones_x(&d, b()).unwrap(), LaurentPoly::one('a'), "{sign}");
        }
    }

    #[test]
    fn jones_x_right_trefoil_fixture() {
        // a^-4 + a^-12 - a^-16, i.e. t + t^3 - t^4 under a = t^{-1/4}
        let d = VirtualDiagram::trefoil();
        let expect = LaurentPoly::from_terms('a', [(-4, 1), (-12, 1), (-16, -1)]);
        assert_eq!(jones_x(&d, b()).unwrap(), expect);
    }

    #[test]
    fn jones_x_evaluates_to_one_for_knots() {
        for seed in 0..50 {
            let d = random_diagram(6, 1, seed);
            assert_eq!(jones_x(&d, b()).unwrap().eval_at_one(), 1, "seed {seed}");
        }
    }

    #[test]
    fn skein_matches_bracket() {
        for seed in 0..60 {
            let d = random_diagram(6, 1, seed);
            assert_eq!(skein_oracle(&d, b()).unwrap(), bracket(&d, b()).unwrap(), "seed {seed}");
        }
        let vt = VirtualDiagram::virtual_trefoil();
        assert_eq!(skein_oracle(&vt, b()).unwrap(), bracket(&vt, b()).unwrap());
    }

    #[test]
    fn disjoint_union_multiplies_bracket() {
        let d1 = parse_gauss("O1+U1+").unwrap();
        let d2 = VirtualDiagram::virtual_trefoil();
        let u = d1.disjoint_union(&d2);
        let lhs = bracket(&u, b()).unwrap();
        let rhs = &bracket(&d1, b()).unwrap() * &bracket(&d2, b()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn budget_is_enforced() {
        let d = random_diagram(8, 1, 3);
        assert!(matches!(
            bracket(&d, Budget::new(128)),
            Err(Error::ResourceLimit { needed: 256, budget: 128 })
        ));
    }

    #[test]
    fn hopf_jhat_fixture() {
        let d = VirtualDiagram::hopf_link();
        let expect = LaurentPoly::from_terms('q', [(0, 1), (2, 1), (4, 1), (6, 1)]);
        assert_eq!(jhat(&d, false, b()).unwrap(), expect);
    }
}
