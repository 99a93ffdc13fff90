//! JSON interchange format for diagrams.
//!
//! ```json
//! {
//!   "crossings": [{"id": "1", "sign": "+", "slots": ["e0", "e1", "e2", "e3"]}],
//!   "free_loops": 0,
//!   "orientation": {"e0": [["1", 2], ["2", 0]]}
//! }
//! ```
//!
//! Every edge id occurs exactly twice across all slot lists. The optional
//! orientation block gives each edge a direction `[from, to]` as
//! `[crossing-id, slot]` pairs; when present it must cover every edge and
//! agree with the declared signs (slot 0 and the over-in slot are incoming,
//! slot 2 and over-out outgoing). Orientation is validated, then discarded:
//! signs are the authoritative data.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Crossing, HalfEdge, Sign, VirtualDiagram};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct DiagramDoc {
    crossings: Vec<CrossingDoc>,
    #[serde(default)]
    free_loops: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orientation: Option<BTreeMap<String, (HalfEdgeDoc, HalfEdgeDoc)>>,
}

#[derive(Serialize, Deserialize)]
struct CrossingDoc {
    id: String,
    sign: String,
    slots: [String; 4],
}

type HalfEdgeDoc = (String, u8);

pub fn parse_diagram_json(text: &str) -> Result<VirtualDiagram> {
    let doc: DiagramDoc =
        serde_json::from_str(text).map_err(|e| Error::SchemaError(e.to_string()))?;
    let crossings: Vec<Crossing> = doc
        .crossings
        .iter()
        .map(|c| {
            let sign = match c.sign.as_str() {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                other => return Err(Error::SchemaError(format!("bad sign {other:?}"))),
            };
            Ok(Crossing { id: c.id.clone(), sign })
        })
        .collect::<Result<_>>()?;
    let mut by_edge: BTreeMap<&str, Vec<HalfEdge>> = BTreeMap::new();
    for (ci, c) in doc.crossings.iter().enumerate() {
        for (slot, eid) in c.slots.iter().enumerate() {
            by_edge.entry(eid).or_default().push(HalfEdge::new(ci, slot as u8));
        }
    }
    let mut edges = Vec::with_capacity(by_edge.len());
    for (eid, ends) in &by_edge {
        match ends.as_slice() {
            [a, b] => edges.push((*a, *b)),
            [_] => return Err(Error::DanglingHalfEdge { edge: eid.to_string() }),
            _ => {
                return Err(Error::DuplicateSocket { half_edge: format!("edge {eid}") });
            }
        }
    }
    let d = VirtualDiagram::new(crossings, edges, doc.free_loops)?;
    if let Some(orient) = &doc.orientation {
        validate_orientation(&d, &doc, orient)?;
    }
    Ok(d)
}

fn validate_orientation(
    d: &VirtualDiagram,
    doc: &DiagramDoc,
    orient: &BTreeMap<String, (HalfEdgeDoc, HalfEdgeDoc)>,
) -> Result<()> {
    let resolve = |(id, slot): &HalfEdgeDoc| -> Result<HalfEdge> {
        if *slot > 3 {
            return Err(Error::SchemaError(format!("slot {slot} out of range")));
        }
        let c = d
            .crossing_by_id(id)
            .ok_or_else(|| Error::UnknownCrossing(id.clone()))?;
        Ok(HalfEdge::new(c, *slot))
    };
    // each edge id must be directed, and along its actual endpoints
    let mut edge_ids: Vec<&String> = doc.crossings.iter().flat_map(|c| c.slots.iter()).collect();
    edge_ids.sort();
    edge_ids.dedup();
    for eid in edge_ids {
        let Some((from, to)) = orient.get(eid) else {
            return Err(Error::SchemaError(format!("orientation missing edge {eid:?}")));
        };
        let from = resolve(from)?;
        let to = resolve(to)?;
        if d.partner(from) != to {
            return Err(Error::SchemaError(format!(
                "orientation of {eid:?} does not follow an edge of the diagram"
            )));
        }
        // outgoing slots: under-out 2, over-out; incoming: under-in 0, over-in
        let out_ok = from.slot == 2 || from.slot == d.sign(from.crossing_index()).over_out();
        let in_ok = to.slot == 0 || to.slot == d.sign(to.crossing_index()).over_in();
        if !out_ok || !in_ok {
            return Err(Error::OrientationMismatch { edge: eid.clone() });
        }
    }
    Ok(())
}

/// Serialize with canonical ordering: crossings in id order, edge ids
/// `e0, e1, ...` assigned by first occurrence.
pub fn serialize_diagram(d: &VirtualDiagram) -> String {
    let mut edge_names: BTreeMap<(HalfEdge, HalfEdge), String> = BTreeMap::new();
    let mut next = 0usize;
    for h in d.half_edges() {
        let p = d.partner(h);
        let key = (h.min(p), h.max(p));
        edge_names.entry(key).or_insert_with(|| {
            let name = format!("e{next}");
            next += 1;
            name
        });
    }
    let crossings = d
        .crossings()
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let slots: Vec<String> = (0..4u8)
                .map(|s| {
                    let h = HalfEdge::new(ci, s);
                    let p = d.partner(h);
                    edge_names[&(h.min(p), h.max(p))].clone()
                })
                .collect();
            CrossingDoc {
                id: c.id.clone(),
                sign: c.sign.as_char().to_string(),
                slots: slots.try_into().expect("four slots"),
            }
        })
        .collect();
    let doc = DiagramDoc { crossings, free_loops: d.free_loops(), orientation: None };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_gauss;

    #[test]
    fn zero_crossing_unknot() {
        let d = parse_diagram_json(r#"{"crossings":[],"free_loops":1}"#).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.stats().components, 1);
    }

    #[test]
    fn round_trip_kink() {
        let d = parse_gauss("O1+U1+").unwrap();
        let text = serialize_diagram(&d);
        let back = parse_diagram_json(&text).unwrap();
        assert!(d.is_isomorphic(&back));
    }

    #[test]
    fn dangling_half_edge() {
        let text = r#"{"crossings":[{"id":"1","sign":"+","slots":["a","a","b","c"]}],"free_loops":0}"#;
        assert!(matches!(parse_diagram_json(text), Err(Error::DanglingHalfEdge { .. })));
    }

    #[test]
    fn edge_used_three_times() {
        let text = r#"{"crossings":[{"id":"1","sign":"+","slots":["a","a","a","b"]},
                        {"id":"2","sign":"+","slots":["b","c","c","d"]}],"free_loops":0}"#;
        assert!(matches!(parse_diagram_json(text), Err(Error::DuplicateSocket { .. })));
    }

    #[test]
    fn orientation_accepted_when_consistent() {
        // positive kink: loop {0,1}, closure {2,3}; flow: in 0, out 1? no —
        // incoming are 0 and 3, outgoing 2 and 1, so loop runs 1 -> 0 and
        // closure 2 -> 3.
        let text = r#"{
            "crossings":[{"id":"1","sign":"+","slots":["a","a","b","b"]}],
            "free_loops":0,
            "orientation":{"a":[["1",1],["1",0]],"b":[["1",2],["1",3]]}
        }"#;
        parse_diagram_json(text).unwrap();
    }

    #[test]
    fn orientation_rejected_when_against_signs() {
        let text = r#"{
            "crossings":[{"id":"1","sign":"+","slots":["a","a","b","b"]}],
            "free_loops":0,
            "orientation":{"a":[["1",0],["1",1]],"b":[["1",2],["1",3]]}
        }"#;
        assert!(matches!(
            parse_diagram_json(text),
            Err(Error::OrientationMismatch { .. })
        ));
    }

    #[test]
    fn round_trip_is_stable() {
        let d = parse_gauss("O1+U2+O3+U1+O2+U3+").unwrap();
        let once = serialize_diagram(&d);
        let twice = serialize_diagram(&parse_diagram_json(&once).unwrap());
        assert_eq!(once, twice);
    }
}
