//! Signed Gauss codes for virtual knots.
//!
//! Token grammar: `("O" | "U") label ("+" | "-")` with decimal labels,
//! whitespace-separated or contiguous. Every label occurs exactly twice,
//! once as O and once as U, with the same sign; any such word is realizable
//! as a virtual knot, so no planarity check is performed.

use super::{Crossing, HalfEdge, Sign, VirtualDiagram};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussToken<'a> {
    pub over: bool,
    pub label: &'a str,
    pub sign: Sign,
}

/// A tokenized Gauss code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussCode<'a> {
    pub tokens: Vec<GaussToken<'a>>,
}

impl<'a> GaussCode<'a> {
    pub fn tokenize(code: &'a str) -> Result<Self> {
        let mut tokens = Vec::new();
        let bytes = code.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let over = match bytes[i] {
                b'O' | b'o' => true,
                b'U' | b'u' => false,
                _ => {
                    return Err(Error::MalformedToken { pos: i, text: one_char(code, i) });
                }
            };
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j == start {
                return Err(Error::MalformedToken { pos: i, text: one_char(code, i) });
            }
            let sign = match bytes.get(j) {
                Some(b'+') => Sign::Plus,
                Some(b'-') => Sign::Minus,
                _ => {
                    return Err(Error::MalformedToken { pos: j, text: one_char(code, j.min(code.len().saturating_sub(1))) });
                }
            };
            tokens.push(GaussToken { over, label: &code[start..j], sign });
            i = j + 1;
        }
        Ok(GaussCode { tokens })
    }
}

fn one_char(code: &str, i: usize) -> String {
    code.get(i..).and_then(|s| s.chars().next()).map(|c| c.to_string()).unwrap_or_default()
}

/// Parse a signed Gauss code into a one-component diagram.
///
/// Walking the tokens in order traverses the knot: an O token enters the
/// crossing at the over-in slot for its sign and leaves at over-out, a U
/// token enters at slot 0 and leaves at slot 2; consecutive exits and
/// entries are joined by edges, cyclically.
pub fn parse_gauss(code: &str) -> Result<VirtualDiagram> {
    let tokens = GaussCode::tokenize(code)?.tokens;
    if tokens.is_empty() {
        return Ok(VirtualDiagram::unknot());
    }
    let mut labels: Vec<&str> = Vec::new();
    let mut signs: Vec<Sign> = Vec::new();
    let mut seen: Vec<(bool, bool)> = Vec::new(); // (seen O, seen U)
    for t in &tokens {
        let idx = match labels.iter().position(|&l| l == t.label) {
            Some(i) => i,
            None => {
                labels.push(t.label);
                signs.push(t.sign);
                seen.push((false, false));
                labels.len() - 1
            }
        };
        if t.sign != signs[idx] {
            return Err(Error::SignMismatch { label: t.label.to_string() });
        }
        let flag = if t.over { &mut seen[idx].0 } else { &mut seen[idx].1 };
        if *flag {
            return Err(Error::LabelCountMismatch { label: t.label.to_string() });
        }
        *flag = true;
    }
    if let Some(i) = seen.iter().position(|&(o, u)| !(o && u)) {
        return Err(Error::LabelCountMismatch { label: labels[i].to_string() });
    }
    let crossings: Vec<Crossing> = labels
        .iter()
        .zip(&signs)
        .map(|(l, &sign)| Crossing { id: l.to_string(), sign })
        .collect();
    let slot_of = |t: &GaussToken| -> (u8, u8) {
        if t.over {
            (t.sign.over_in(), t.sign.over_out())
        } else {
            (0, 2)
        }
    };
    let index_of = |t: &GaussToken| labels.iter().position(|&l| l == t.label).unwrap();
    let mut edges = Vec::with_capacity(tokens.len());
    for (k, t) in tokens.iter().enumerate() {
        let next = &tokens[(k + 1) % tokens.len()];
        let exit = HalfEdge::new(index_of(t), slot_of(t).1);
        let entry = HalfEdge::new(index_of(next), slot_of(next).0);
        edges.push((exit, entry));
    }
    VirtualDiagram::new(crossings, edges, 0)
}

impl VirtualDiagram {
    /// One-crossing kink of the given sign (closed R1 curl).
    pub fn kink(sign: Sign) -> VirtualDiagram {
        let code = match sign {
            Sign::Plus => "O1+U1+",
            Sign::Minus => "O1-U1-",
        };
        parse_gauss(code).expect("valid kink code")
    }

    /// The 2-crossing virtual trefoil.
    pub fn virtual_trefoil() -> VirtualDiagram {
        parse_gauss("O1+O2+U1+U2+").expect("valid code")
    }

    /// Classical right-handed trefoil.
    pub fn trefoil() -> VirtualDiagram {
        parse_gauss("O1+U2+O3+U1+O2+U3+").expect("valid code")
    }

    /// Classical positive Hopf link.
    pub fn hopf_link() -> VirtualDiagram {
        let crossings = vec![
            Crossing { id: "1".into(), sign: Sign::Plus },
            Crossing { id: "2".into(), sign: Sign::Plus },
        ];
        let edges = vec![
            (HalfEdge::new(0, 2), HalfEdge::new(1, 3)),
            (HalfEdge::new(1, 1), HalfEdge::new(0, 0)),
            (HalfEdge::new(0, 1), HalfEdge::new(1, 0)),
            (HalfEdge::new(1, 2), HalfEdge::new(0, 3)),
        ];
        VirtualDiagram::new(crossings, edges, 0).expect("valid hopf wiring")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn virtual_trefoil_reads_counts() {
        let d = parse_gauss("O1+O2+U1+U2+").unwrap();
        let s = d.stats();
        assert_eq!((s.n, s.n_plus, s.n_minus, s.writhe, s.components), (2, 2, 0, 2, 1));
    }

    #[test]
    fn single_kink() {
        let d = parse_gauss("O1-U1-").unwrap();
        let s = d.stats();
        assert_eq!((s.n, s.n_minus, s.components), (1, 1, 1));
    }

    #[test]
    fn kink_matches_wiring_convention() {
        // the Gauss-code kink and the hand-wired kink agree per sign
        for sign in [Sign::Plus, Sign::Minus] {
            let loop_pair = match sign {
                Sign::Plus => (HalfEdge::new(0, 0), HalfEdge::new(0, 1)),
                Sign::Minus => (HalfEdge::new(0, 0), HalfEdge::new(0, 3)),
            };
            let d = VirtualDiagram::kink(sign);
            assert_eq!(d.partner(loop_pair.0), loop_pair.1, "{sign}");
        }
    }

    #[test]
    fn label_count_mismatch() {
        assert!(matches!(
            parse_gauss("O1+U2+"),
            Err(Error::LabelCountMismatch { .. })
        ));
        assert!(matches!(
            parse_gauss("O1+O1+U1+"),
            Err(Error::LabelCountMismatch { .. })
        ));
    }

    #[test]
    fn sign_mismatch() {
        assert!(matches!(parse_gauss("O1+U1-"), Err(Error::SignMismatch { .. })));
    }

    #[test]
    fn malformed_token() {
        assert!(matches!(parse_gauss("X1+U1+"), Err(Error::MalformedToken { .. })));
        assert!(matches!(parse_gauss("O+U1+"), Err(Error::MalformedToken { .. })));
        assert!(matches!(parse_gauss("O1U1+"), Err(Error::MalformedToken { .. })));
    }

    #[test]
    fn whitespace_separated() {
        let a = parse_gauss("O1+ U2- O2- U1+").unwrap();
        let b = parse_gauss("O1+U2-O2-U1+").unwrap();
        assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn hopf_is_two_components() {
        let d = VirtualDiagram::hopf_link();
        assert!(d.validate().is_valid());
        assert_eq!(d.stats().components, 2);
        assert_eq!(d.stats().writhe, 2);
    }
}
