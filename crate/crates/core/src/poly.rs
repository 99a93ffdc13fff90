//! Exact Laurent polynomials in one variable and bigraded Poincaré
//! polynomials in (t, q). All coefficients are exact integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Laurent polynomial with integer coefficients, tagged by its variable name.
///
/// Zero coefficients are never stored. Terms print in ascending exponent
/// order, e.g. `q^-1 + 1 + q^4`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    var: char,
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero(var: char) -> Self {
        LaurentPoly { var, terms: BTreeMap::new() }
    }

    pub fn one(var: char) -> Self {
        Self::monomial(var, 0, 1)
    }

    /// `coeff * var^exp`.
    pub fn monomial(var: char, exp: i64, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        LaurentPoly { var, terms }
    }

    pub fn from_terms(var: char, iter: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = Self::zero(var);
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    /// `q + q^-1`, the graded dimension of the base Frobenius space.
    pub fn circle(var: char) -> Self {
        Self::from_terms(var, [(1, 1), (-1, 1)])
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
    }

    /// Multiply by `coeff * var^exp` in place.
    pub fn shift(&self, exp: i64, coeff: i64) -> Self {
        let mut out = Self::zero(self.var);
        for (&e, &c) in &self.terms {
            out.add_term(e + exp, c * coeff);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.var);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Exact division, or `None` when the remainder is non-zero.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.var, rhs.var);
        if rhs.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(self.var);
        let (&lead_e, &lead_c) = rhs.terms.iter().next_back().unwrap();
        // quotient exponents can reach no lower than this, which bounds the
        // loop for Laurent inputs
        let low = match (self.terms.keys().next(), rhs.terms.keys().next()) {
            (Some(&a), Some(&b)) => a - b,
            _ => 0,
        };
        while !rem.is_zero() {
            let (&re, &rc) = rem.terms.iter().next_back().unwrap();
            if rc % lead_c != 0 {
                return None;
            }
            let qe = re - lead_e;
            if qe < low {
                return None;
            }
            let qc = rc / lead_c;
            quot.add_term(qe, qc);
            rem = &rem - &rhs.shift(qe, qc);
        }
        Some(quot)
    }

    /// Divide by `q + q^-1`; errors when the factor is absent.
    pub fn div_circle(&self) -> Result<Self> {
        self.div_exact(&Self::circle(self.var)).ok_or(Error::NotDivisible)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Parse the textual form produced by `Display`, e.g. `-q^-1 + 2 + q^3`.
    pub fn parse(var: char, text: &str) -> Result<Self> {
        let compact: String = text.split_whitespace().collect();
        if compact.is_empty() || compact == "0" {
            return Ok(Self::zero(var));
        }
        let mut p = Self::zero(var);
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let sign = if let Some(r) = rest.strip_prefix('+') {
                rest = r;
                1
            } else if let Some(r) = rest.strip_prefix('-') {
                rest = r;
                -1
            } else if first {
                1
            } else {
                return Err(Error::MalformedToken { pos: compact.len() - rest.len(), text: rest.into() });
            };
            first = false;
            let end = rest
                .char_indices()
                .find(|&(i, ch)| i > 0 && (ch == '+' || ch == '-') && !rest[..i].ends_with('^'))
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            let (tok, tail) = rest.split_at(end);
            rest = tail;
            let (exp, coeff) = parse_term(var, tok)
                .ok_or_else(|| Error::MalformedToken { pos: 0, text: tok.into() })?;
            p.add_term(exp, sign * coeff);
        }
        Ok(p)
    }
}

fn parse_term(var: char, tok: &str) -> Option<(i64, i64)> {
    if let Some(idx) = tok.find(var) {
        let coeff_str = &tok[..idx];
        let coeff = if coeff_str.is_empty() { 1 } else { coeff_str.parse().ok()? };
        let after = &tok[idx + var.len_utf8()..];
        let exp = if after.is_empty() {
            1
        } else {
            after.strip_prefix('^')?.parse().ok()?
        };
        Some((exp, coeff))
    } else {
        Some((0, tok.parse().ok()?))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&e, &c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            if idx == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "{}", self.var)?,
                (1, m) => write!(f, "{m}{}", self.var)?,
                (_, 1) => write!(f, "{}^{}", self.var, e)?,
                (_, m) => write!(f, "{m}{}^{}", self.var, e)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.var, rhs.var);
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            var: self.var,
            terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.var, rhs.var);
        let mut out = LaurentPoly::zero(self.var);
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

/// Two-variable polynomial `sum b_{i,j} t^i q^j`; the summary form of a
/// Betti table, so coefficients are expected non-negative.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poincare2 {
    terms: BTreeMap<(i64, i64), i64>,
}

impl Poincare2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(iter: impl IntoIterator<Item = ((i64, i64), i64)>) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in iter {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: i64, j: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), i64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, i: i64, j: i64) -> i64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for ((i1, j1), c1) in self.terms() {
            for ((i2, j2), c2) in rhs.terms() {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }

    /// Specialise t -> -1, giving the graded Euler characteristic in q.
    pub fn euler(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero('q');
        for ((i, j), c) in self.terms() {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(j, sign * c);
        }
        p
    }

    /// The unique polynomial with non-negative integer coefficients whose
    /// square is `self`, when it exists.
    ///
    /// Monomials are processed in descending lexicographic `(i, j)` order;
    /// every intermediate coefficient must stay a non-negative integer and
    /// the result is verified by squaring.
    pub fn tensor_sqrt(&self) -> Result<Poincare2> {
        if self.is_zero() {
            return Ok(Poincare2::zero());
        }
        if self.terms.values().any(|&c| c < 0) {
            return Err(Error::NoRoot);
        }
        let (&(li, lj), &lc) = self.terms.iter().next_back().unwrap();
        let lead_coeff = int_sqrt(lc).ok_or(Error::NoRoot)?;
        if li.rem_euclid(2) != 0 || lj.rem_euclid(2) != 0 {
            return Err(Error::NoRoot);
        }
        let lead = (li / 2, lj / 2);
        let mut root = Poincare2::zero();
        root.add_term(lead.0, lead.1, lead_coeff);
        // residual = self - root^2, maintained incrementally
        let mut residual = self.clone();
        residual.add_term(li, lj, -lc);
        let max_terms = self.terms.len() * 2 + 4;
        while let Some((&(ri, rj), &rc)) = residual.terms.iter().next_back() {
            // next term r of the root satisfies 2*lead*r = leading(residual)
            let num = rc;
            let den = 2 * lead_coeff;
            if num % den != 0 {
                return Err(Error::NoRoot);
            }
            let c = num / den;
            if c <= 0 {
                return Err(Error::NoRoot);
            }
            let (ti, tj) = (ri - lead.0, rj - lead.1);
            if (ti, tj) >= lead {
                return Err(Error::NoRoot);
            }
            // subtract 2*root*term + term^2
            for ((i, j), rc0) in root.clone().terms() {
                residual.add_term(i + ti, j + tj, -2 * rc0 * c);
            }
            residual.add_term(2 * ti, 2 * tj, -c * c);
            root.add_term(ti, tj, c);
            if root.terms.len() > max_terms {
                return Err(Error::NoRoot);
            }
        }
        if root.terms.values().any(|&c| c < 0) || &root.mul(&root) != self {
            return Err(Error::NoRoot);
        }
        Ok(root)
    }

    /// Parse the textual form produced by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let text = text.strip_prefix("P(t,q)").map(|r| r.trim_start().strip_prefix('=').unwrap_or(r)).unwrap_or(text);
        let compact: String = text.split_whitespace().collect();
        if compact.is_empty() || compact == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let sign = if let Some(r) = rest.strip_prefix('+') {
                rest = r;
                1
            } else if let Some(r) = rest.strip_prefix('-') {
                rest = r;
                -1
            } else if first {
                1
            } else {
                return Err(Error::MalformedToken { pos: 0, text: rest.into() });
            };
            first = false;
            let end = rest
                .char_indices()
                .find(|&(i, ch)| i > 0 && (ch == '+' || ch == '-') && !rest[..i].ends_with('^'))
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            let (tok, tail) = rest.split_at(end);
            rest = tail;
            let (i, j, c) = parse_term2(tok).ok_or_else(|| Error::MalformedToken { pos: 0, text: tok.into() })?;
            p.add_term(i, j, sign * c);
        }
        Ok(p)
    }
}

fn parse_term2(tok: &str) -> Option<(i64, i64, i64)> {
    let mut rest = tok;
    let mut coeff = 1i64;
    let digits_end = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
    if digits_end > 0 {
        coeff = rest[..digits_end].parse().ok()?;
        rest = &rest[digits_end..];
    }
    let mut i = 0i64;
    let mut j = 0i64;
    while !rest.is_empty() {
        let var = rest.chars().next()?;
        rest = &rest[1..];
        let exp = if let Some(r) = rest.strip_prefix('^') {
            let end = r
                .char_indices()
                .find(|&(k, ch)| !(ch.is_ascii_digit() || (k == 0 && ch == '-')))
                .map(|(k, _)| k)
                .unwrap_or(r.len());
            let (num, tail) = r.split_at(end);
            rest = tail;
            num.parse().ok()?
        } else {
            1
        };
        match var {
            't' => i = exp,
            'q' => j = exp,
            _ => return None,
        }
    }
    Some((i, j, coeff))
}

fn int_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    for cand in r.saturating_sub(2)..=r + 2 {
        if cand >= 0 && cand * cand == n {
            return Some(cand);
        }
    }
    None
}

impl fmt::Display for Poincare2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(i, j), &c)) in self.terms.iter().enumerate() {
            if idx == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.unsigned_abs();
            let mut printed = false;
            if mag != 1 || (i == 0 && j == 0) {
                write!(f, "{mag}")?;
                printed = true;
            }
            for (var, e) in [('t', i), ('q', j)] {
                if e == 0 {
                    continue;
                }
                if printed {
                    write!(f, " ")?;
                }
                if e == 1 {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{var}^{e}")?;
                }
                printed = true;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poincare2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_sorted_ascending() {
        let p = LaurentPoly::from_terms('a', [(-4, -1), (16, 1), (-12, -1)]);
        assert_eq!(p.to_string(), "-a^-12 - a^-4 + a^16");
        let q = LaurentPoly::from_terms('q', [(1, 1), (-1, 1)]);
        assert_eq!(q.to_string(), "q^-1 + q");
    }

    #[test]
    fn parse_round_trip() {
        for text in ["q^-1 + q", "-a^-12 - a^-4 + a^16", "1", "-1", "2q^3 - 5", "0"] {
            let var = if text.contains('a') { 'a' } else { 'q' };
            let p = LaurentPoly::parse(var, text).unwrap();
            let back = LaurentPoly::parse(var, &p.to_string()).unwrap();
            assert_eq!(p, back, "{text}");
        }
    }

    #[test]
    fn div_circle_exact() {
        let circle = LaurentPoly::circle('q');
        let p = &circle * &circle;
        assert_eq!(p.div_circle().unwrap(), circle);
        let bad = LaurentPoly::from_terms('q', [(2, 1), (-2, 1)]);
        assert_eq!(bad.div_circle(), Err(Error::NotDivisible));
    }

    #[test]
    fn tensor_sqrt_recovers_circle() {
        let p = Poincare2::from_terms([((0, 2), 1), ((0, 0), 2), ((0, -2), 1)]);
        let r = p.tensor_sqrt().unwrap();
        assert_eq!(r, Poincare2::from_terms([((0, 1), 1), ((0, -1), 1)]));
    }

    #[test]
    fn tensor_sqrt_missing_middle() {
        let p = Poincare2::from_terms([((0, 2), 1), ((0, -2), 1)]);
        assert_eq!(p.tensor_sqrt(), Err(Error::NoRoot));
    }

    #[test]
    fn tensor_sqrt_with_t_term() {
        let base = Poincare2::from_terms([((0, 1), 1), ((0, -1), 1), ((1, 3), 1)]);
        let sq = base.mul(&base);
        assert_eq!(sq.tensor_sqrt().unwrap(), base);
    }

    #[test]
    fn poincare_parse_round_trip() {
        let p = Poincare2::from_terms([((0, -1), 1), ((0, 1), 1), ((2, 5), 3), ((-1, -3), 2)]);
        let text = p.to_string();
        assert_eq!(Poincare2::parse(&text).unwrap(), p);
    }
}
