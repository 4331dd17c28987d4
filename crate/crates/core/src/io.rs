//! JSON files for Weyl data, group actions, projections and presentations.
//!
//! Output goes through `serde_json::Value`, whose maps keep keys sorted, so equal inputs give
//! byte-identical files.

use std::collections::{BTreeMap, HashMap};

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cover::{ChamberFreeAction, WeylMorphism};
use crate::coxeter::{CoxeterError, CoxeterMatrix, Order};
use crate::groupoid::{GroupTable, GroupoidError};
use crate::presentation::Presentation;
use crate::weyl::{ChamberId, DataError, EdgeId, EdgeSpec, WeylData};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Invalid(msg.into()))
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OrderJson {
    Num(u32),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoxeterJson {
    generators: Vec<String>,
    orders: Vec<Vec<OrderJson>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    id: String,
    #[serde(rename = "type")]
    ty: String,
    from: String,
    to: String,
    inverse: String,
}

#[derive(Debug, Deserialize)]
struct GroupJson {
    elements: Vec<String>,
    table: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupActionJson {
    group: GroupJson,
    action: BTreeMap<String, Vec<String>>,
    labels: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum PanelJson {
    Composition(Vec<[String; 3]>),
    GroupAction(GroupActionJson),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeylDataJson {
    coxeter_matrix: CoxeterJson,
    chambers: Vec<String>,
    edges: Vec<EdgeJson>,
    #[serde(default)]
    panels: BTreeMap<String, PanelJson>,
    #[serde(default)]
    defining_suites: Vec<Vec<String>>,
}

fn parse_order(o: &OrderJson) -> Result<Order, FormatError> {
    match o {
        OrderJson::Num(m) => Ok(Order::Finite(*m)),
        OrderJson::Text(t) if t == "inf" => Ok(Order::Infinite),
        OrderJson::Text(t) => invalid(format!("bad order {t:?}, expected an integer or \"inf\"")),
    }
}

fn group_table(g: &GroupJson) -> Result<GroupTable, FormatError> {
    let id: HashMap<&str, usize> = g.elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
    if id.len() != g.elements.len() {
        return invalid("duplicate group element");
    }
    let mut mul = Vec::new();
    for row in &g.table {
        let mut r = Vec::new();
        for x in row {
            r.push(*id.get(x.as_str()).ok_or_else(|| FormatError::Invalid(format!("unknown group element {x}")))?);
        }
        mul.push(r);
    }
    Ok(GroupTable::new(mul)?)
}

pub fn coxeter_from_json(v: &Value) -> Result<CoxeterMatrix, FormatError> {
    let c: CoxeterJson = serde_json::from_value(v.clone())?;
    let orders = c.orders.iter().map(|r| r.iter().map(parse_order).collect()).collect::<Result<_, _>>()?;
    Ok(CoxeterMatrix::new(c.generators, orders)?)
}

/// Parses a Weyl data file.
pub fn parse_weyl_data(text: &str) -> Result<WeylData, FormatError> {
    let f: WeylDataJson = serde_json::from_str(text)?;
    let orders =
        f.coxeter_matrix.orders.iter().map(|r| r.iter().map(parse_order).collect()).collect::<Result<_, _>>()?;
    let cox = CoxeterMatrix::new(f.coxeter_matrix.generators.clone(), orders)?;
    let cid: HashMap<&str, ChamberId> =
        f.chambers.iter().enumerate().map(|(i, c)| (c.as_str(), ChamberId(i as u32))).collect();
    let eid: HashMap<&str, EdgeId> =
        f.edges.iter().enumerate().map(|(i, e)| (e.id.as_str(), EdgeId(i as u32))).collect();
    let chamber = |n: &str| cid.get(n).copied().ok_or_else(|| DataError::UnknownChamber(n.into()));
    let edge = |n: &str| eid.get(n).copied().ok_or_else(|| DataError::UnknownEdge(n.into()));
    let ty = |n: &str| cox.generator(n).ok_or_else(|| DataError::UnknownType(n.into()));
    let mut edges = Vec::new();
    for e in &f.edges {
        edges.push(EdgeSpec {
            name: e.id.clone(),
            source: chamber(&e.from)?,
            target: chamber(&e.to)?,
            ty: ty(&e.ty)?,
            inverse: edge(&e.inverse)?,
        });
    }
    let mut detours = Vec::new();
    for (s, panel) in &f.panels {
        let s = ty(s)?;
        match panel {
            PanelJson::Composition(triples) => {
                for [a, b, c] in triples {
                    detours.push((edge(a)?, edge(b)?, edge(c)?));
                }
            }
            PanelJson::GroupAction(ga) => detours.extend(action_detours(ga, s, &edges, &chamber, &edge)?),
        }
    }
    let mut suites = Vec::new();
    for th in &f.defining_suites {
        suites.push(th.iter().map(|e| edge(e)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(WeylData::new(cox, f.chambers, edges, detours, suites)?)
}

/// Detours of an s-panel given by a group acting on its chambers. The edge labelled `g` at
/// `x` goes to `g.x`, and `(g, x) ; (h, g.x) = (hg, x)`.
fn action_detours(
    ga: &GroupActionJson,
    s: usize,
    edges: &[EdgeSpec],
    chamber: &dyn Fn(&str) -> Result<ChamberId, DataError>,
    edge: &dyn Fn(&str) -> Result<EdgeId, DataError>,
) -> Result<Vec<(EdgeId, EdgeId, EdgeId)>, FormatError> {
    let g = group_table(&ga.group)?;
    let elem: HashMap<&str, usize> = ga.group.elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
    let mut act: HashMap<(ChamberId, usize), ChamberId> = HashMap::new();
    for (x, imgs) in &ga.action {
        if imgs.len() != g.order() {
            return invalid(format!("action of chamber {x} lists {} images for {} elements", imgs.len(), g.order()));
        }
        for (k, y) in imgs.iter().enumerate() {
            act.insert((chamber(x)?, k), chamber(y)?);
        }
    }
    let mut label: HashMap<EdgeId, usize> = HashMap::new();
    let mut by_label: HashMap<(ChamberId, usize), EdgeId> = HashMap::new();
    for (e, l) in &ga.labels {
        let e = edge(e)?;
        let k = *elem.get(l.as_str()).ok_or_else(|| FormatError::Invalid(format!("unknown group element {l}")))?;
        let spec = &edges[e.idx()];
        if spec.ty != s {
            return invalid(format!("edge {} is labelled in the wrong panel", spec.name));
        }
        if act.get(&(spec.source, k)) != Some(&spec.target) {
            return invalid(format!("edge {} does not go to its label's image", spec.name));
        }
        label.insert(e, k);
        by_label.insert((spec.source, k), e);
    }
    let mut out = Vec::new();
    for (&i, &gi) in &label {
        for (&j, &hj) in &label {
            if edges[j.idx()].source != edges[i.idx()].target {
                continue;
            }
            let k = g.mul(hj, gi);
            if k == g.identity() {
                continue;
            }
            let x = edges[i.idx()].source;
            match by_label.get(&(x, k)) {
                Some(&c) => out.push((i, j, c)),
                None => {
                    return invalid(format!(
                        "no edge labelled {} at chamber {}",
                        ga.group.elements[k],
                        edges[i.idx()].name
                    ))
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

fn order_json(o: Order) -> Value {
    match o {
        Order::Finite(m) => json!(m),
        Order::Infinite => json!("inf"),
    }
}

pub fn coxeter_to_json(cox: &CoxeterMatrix) -> Value {
    json!({
        "generators": cox.labels(),
        "orders": cox.orders().iter().map(|r| r.iter().map(|&o| order_json(o)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// Serializes data with panels in composition form.
pub fn weyl_data_to_json(d: &WeylData) -> Value {
    let cox = d.coxeter();
    let edges: Vec<Value> = d
        .edge_ids()
        .map(|e| {
            json!({
                "id": d.edge_name(e),
                "type": cox.label(d.edge_type(e)),
                "from": d.chamber_name(d.source(e)),
                "to": d.chamber_name(d.target(e)),
                "inverse": d.edge_name(d.inverse(e)),
            })
        })
        .collect();
    let mut triples: Vec<Vec<(EdgeId, EdgeId, EdgeId)>> = vec![Vec::new(); cox.rank()];
    for (&(a, b), &c) in d.detours() {
        triples[d.edge_type(a)].push((a, b, c));
    }
    let mut panels = serde_json::Map::new();
    for (s, mut t) in triples.into_iter().enumerate() {
        t.sort();
        let rows: Vec<Value> =
            t.iter().map(|&(a, b, c)| json!([d.edge_name(a), d.edge_name(b), d.edge_name(c)])).collect();
        panels.insert(cox.label(s).to_string(), json!({ "composition": rows }));
    }
    let suites: Vec<Value> = d
        .defining_suites()
        .iter()
        .map(|th| json!(th.iter().map(|&e| d.edge_name(e)).collect::<Vec<_>>()))
        .collect();
    json!({
        "coxeter_matrix": coxeter_to_json(cox),
        "chambers": d.chamber_names(),
        "edges": edges,
        "panels": panels,
        "defining_suites": suites,
    })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Parses an action file against the data it acts on.
pub fn parse_action(text: &str, d: &WeylData) -> Result<ChamberFreeAction, FormatError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct ActionJson {
        group: GroupJson,
        chamber_images: BTreeMap<String, BTreeMap<String, String>>,
        edge_images: BTreeMap<String, BTreeMap<String, String>>,
    }
    let a: ActionJson = serde_json::from_str(text)?;
    let group = group_table(&a.group)?;
    let mut chamber_images = Vec::new();
    let mut edge_images = Vec::new();
    for g in &a.group.elements {
        let cm = a.chamber_images.get(g).ok_or_else(|| FormatError::Invalid(format!("no chamber images for {g}")))?;
        let em = a.edge_images.get(g).ok_or_else(|| FormatError::Invalid(format!("no edge images for {g}")))?;
        let mut ci = Vec::new();
        for c in d.chambers() {
            let y = cm
                .get(d.chamber_name(c))
                .ok_or_else(|| FormatError::Invalid(format!("{g} has no image for chamber {}", d.chamber_name(c))))?;
            ci.push(d.chamber_by_name(y).ok_or_else(|| DataError::UnknownChamber(y.clone()))?);
        }
        let mut ei = Vec::new();
        for e in d.edge_ids() {
            let y = em
                .get(d.edge_name(e))
                .ok_or_else(|| FormatError::Invalid(format!("{g} has no image for edge {}", d.edge_name(e))))?;
            ei.push(d.edge_by_name(y).ok_or_else(|| DataError::UnknownEdge(y.clone()))?);
        }
        chamber_images.push(ci);
        edge_images.push(ei);
    }
    Ok(ChamberFreeAction { group, element_names: a.group.elements, chamber_images, edge_images })
}

pub fn action_to_json(a: &ChamberFreeAction, d: &WeylData) -> Value {
    let names = &a.element_names;
    let table: Vec<Vec<&str>> =
        a.group.table().iter().map(|r| r.iter().map(|&k| names[k].as_str()).collect()).collect();
    let mut ci = serde_json::Map::new();
    let mut ei = serde_json::Map::new();
    for (k, g) in names.iter().enumerate() {
        let c: serde_json::Map<String, Value> = d
            .chambers()
            .map(|x| (d.chamber_name(x).to_string(), json!(d.chamber_name(a.chamber_images[k][x.idx()]))))
            .collect();
        let e: serde_json::Map<String, Value> = d
            .edge_ids()
            .map(|x| (d.edge_name(x).to_string(), json!(d.edge_name(a.edge_images[k][x.idx()]))))
            .collect();
        ci.insert(g.clone(), Value::Object(c));
        ei.insert(g.clone(), Value::Object(e));
    }
    json!({
        "group": { "elements": names, "table": table },
        "chamber_images": ci,
        "edge_images": ei,
    })
}

/// A projection `src -> tgt` as name maps.
pub fn morphism_to_json(src: &WeylData, tgt: &WeylData, f: &WeylMorphism) -> Value {
    let c: serde_json::Map<String, Value> = src
        .chambers()
        .map(|x| (src.chamber_name(x).to_string(), json!(tgt.chamber_name(f.chamber_map[x.idx()]))))
        .collect();
    let e: serde_json::Map<String, Value> = src
        .edge_ids()
        .map(|x| (src.edge_name(x).to_string(), json!(tgt.edge_name(f.edge_map[x.idx()]))))
        .collect();
    json!({ "chambers": c, "edges": e })
}

pub fn presentation_to_json(p: &Presentation) -> Value {
    json!({ "generators": p.generators, "relators": p.relator_names() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip() {
        for d in [fixtures::thin_one_chamber(3), fixtures::fano(), fixtures::doubled_suite(), fixtures::cube()] {
            let text = to_pretty(&weyl_data_to_json(&d));
            let back = parse_weyl_data(&text).unwrap();
            assert_eq!(to_pretty(&weyl_data_to_json(&back)), text);
            assert_eq!(back.n_chambers(), d.n_chambers());
            assert_eq!(back.detours(), d.detours());
        }
    }

    #[test]
    fn infinity_is_spelled_inf() {
        let v = weyl_data_to_json(&fixtures::thin_one_chamber_infinite());
        assert_eq!(v["coxeter_matrix"]["orders"][0][1], json!("inf"));
    }

    #[test]
    fn group_action_panel() {
        let text = r#"{
          "coxeter_matrix": {"generators": ["s", "t"], "orders": [[1, 3], [3, 1]]},
          "chambers": ["c"],
          "edges": [
            {"id": "a", "type": "s", "from": "c", "to": "c", "inverse": "a"},
            {"id": "b", "type": "t", "from": "c", "to": "c", "inverse": "c2"},
            {"id": "c2", "type": "t", "from": "c", "to": "c", "inverse": "b"}
          ],
          "panels": {
            "t": {"group_action": {
              "group": {"elements": ["e", "r", "rr"], "table": [["e","r","rr"],["r","rr","e"],["rr","e","r"]]},
              "action": {"c": ["c", "c", "c"]},
              "labels": {"b": "r", "c2": "rr"}
            }}
          },
          "defining_suites": [["a","b","a","c2","a","c2"], ["a","b","a","b","a","b"]]
        }"#;
        let d = parse_weyl_data(text).unwrap();
        let want = fixtures::doubled_suite();
        assert_eq!(d.detours().len(), want.detours().len());
        assert_eq!(d.panel(1).groupoid.local_group(0).1.order(), 3);
    }

    #[test]
    fn malformed_is_rejected() {
        assert!(matches!(parse_weyl_data("{"), Err(FormatError::Json(_))));
        let bad = r#"{"coxeter_matrix": {"generators": ["s"], "orders": [["x"]]}, "chambers": [], "edges": []}"#;
        assert!(matches!(parse_weyl_data(bad), Err(FormatError::Invalid(_))));
    }
}
