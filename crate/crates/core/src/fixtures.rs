//! Small Weyl data used by tests, benches and the command line examples.

use std::collections::{BTreeSet, HashMap};

use crate::cover::ChamberFreeAction;
use crate::coxeter::{CoxeterElement, CoxeterMatrix, Gen, Order, Word};
use crate::groupoid::GroupTable;
use crate::weyl::{ChamberId, EdgeId, EdgeSpec, WeylData};

/// One chamber with self-inverse loops `a` (type s) and `b` (type t) and the suite `(ab)^m`.
pub fn thin_one_chamber(m: u32) -> WeylData {
    let cox = CoxeterMatrix::dihedral(Order::Finite(m));
    let edges = loops(&["a", "b"]);
    let suite: Vec<EdgeId> = (0..2 * m).map(|k| EdgeId(k % 2)).collect();
    WeylData::new(cox, vec!["c0".into()], edges, vec![], vec![suite]).expect("valid fixture")
}

/// One chamber with loops `a`, `b` of types s, t and `m_st = ∞`.
pub fn thin_one_chamber_infinite() -> WeylData {
    let cox = CoxeterMatrix::dihedral(Order::Infinite);
    WeylData::new(cox, vec!["c0".into()], loops(&["a", "b"]), vec![], vec![]).expect("valid fixture")
}

fn loops(names: &[&str]) -> Vec<EdgeSpec> {
    names
        .iter()
        .enumerate()
        .map(|(k, n)| EdgeSpec {
            name: n.to_string(),
            source: ChamberId(0),
            target: ChamberId(0),
            ty: k,
            inverse: EdgeId(k as u32),
        })
        .collect()
}

/// One chamber whose s-panel is `Z/2 = {a}` and whose t-panel is `Z/3 = {b, c = b^-1}`, with
/// suites `abacac` and `ababab`. The geodesic `aba` then has two partners.
pub fn doubled_suite() -> WeylData {
    let cox = CoxeterMatrix::dihedral(Order::Finite(3));
    let c = ChamberId(0);
    let edges = vec![
        EdgeSpec { name: "a".into(), source: c, target: c, ty: 0, inverse: EdgeId(0) },
        EdgeSpec { name: "b".into(), source: c, target: c, ty: 1, inverse: EdgeId(2) },
        EdgeSpec { name: "c".into(), source: c, target: c, ty: 1, inverse: EdgeId(1) },
    ];
    let (a, b, cc) = (EdgeId(0), EdgeId(1), EdgeId(2));
    let detours = vec![(b, b, cc), (cc, cc, b)];
    let suites = vec![vec![a, b, a, cc, a, cc], vec![a, b, a, b, a, b]];
    WeylData::new(cox, vec!["c0".into()], edges, detours, suites).expect("valid fixture")
}

/// Data whose panels are setoids on the given blocks: `blocks[s]` partitions the chambers into
/// s-panels, and every ordered pair of distinct chambers in a block is an edge named
/// `"{label}:{x}-{y}"`.
pub fn setoid_data(cox: CoxeterMatrix, chambers: Vec<String>, blocks: &[Vec<Vec<usize>>]) -> WeylData {
    let mut edges = Vec::new();
    let mut id: HashMap<(usize, usize, usize), EdgeId> = HashMap::new();
    for (s, bs) in blocks.iter().enumerate() {
        for b in bs {
            for &x in b {
                for &y in b {
                    if x != y {
                        id.insert((s, x, y), EdgeId(edges.len() as u32));
                        edges.push((s, x, y));
                    }
                }
            }
        }
    }
    let specs: Vec<EdgeSpec> = edges
        .iter()
        .map(|&(s, x, y)| EdgeSpec {
            name: format!("{}:{}-{}", cox.label(s), chambers[x], chambers[y]),
            source: ChamberId(x as u32),
            target: ChamberId(y as u32),
            ty: s,
            inverse: id[&(s, y, x)],
        })
        .collect();
    let mut detours = Vec::new();
    for (s, bs) in blocks.iter().enumerate() {
        for b in bs {
            for &x in b {
                for &y in b {
                    for &z in b {
                        if x != y && y != z && x != z {
                            detours.push((id[&(s, x, y)], id[&(s, y, z)], id[&(s, x, z)]));
                        }
                    }
                }
            }
        }
    }
    WeylData::new(cox, chambers, specs, detours, vec![]).expect("valid setoid data")
}

/// All closed galleries of type `p_{2m}(s, t)` for finite pairs, one per cycle up to rotation
/// and inversion.
pub fn all_closed_suites(data: &WeylData) -> Vec<Vec<EdgeId>> {
    let cox = data.coxeter();
    let mut keys = BTreeSet::new();
    for s in 0..cox.rank() {
        for t in 0..cox.rank() {
            let Some(m) = cox.order(s, t).finite().filter(|_| s != t) else { continue };
            let ty: Vec<Gen> = (0..2 * m).map(|k| if k % 2 == 0 { s } else { t }).collect();
            for c in data.chambers() {
                for g in data.galleries_of_type(c, &ty) {
                    if data.end(&g) == c {
                        keys.insert(cycle_key(data, &g.edges));
                    }
                }
            }
        }
    }
    keys.into_iter().collect()
}

fn cycle_key(data: &WeylData, edges: &[EdgeId]) -> Vec<EdgeId> {
    let inv: Vec<EdgeId> = data.inverse_edges(edges);
    let mut best: Option<Vec<EdgeId>> = None;
    for v in [edges.to_vec(), inv] {
        for r in 0..v.len() {
            let mut c = v[r..].to_vec();
            c.extend_from_slice(&v[..r]);
            if data.edge_type(c[0]) < data.edge_type(c[1]) && best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.expect("alternating cycle")
}

/// The thin building of a finite Coxeter system: chambers are the elements of W, named by
/// their normal forms, with an s-edge `w -> ws` for every w and s.
pub fn thin_building(cox: &CoxeterMatrix) -> WeylData {
    let elems = cox.enumerate_elements(100_000).expect("finite Coxeter group");
    let names: Vec<String> = elems.iter().map(|e| element_name(cox, e)).collect();
    let index: HashMap<CoxeterElement, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let rank = cox.rank();
    let mut blocks = vec![Vec::new(); rank];
    for (i, w) in elems.iter().enumerate() {
        for (s, bs) in blocks.iter_mut().enumerate() {
            let j = index[&cox.multiply_gen(w, s)];
            if i < j {
                bs.push(vec![i, j]);
            }
        }
    }
    let d = setoid_data(cox.clone(), names, &blocks);
    let suites = all_closed_suites(&d);
    d.with_suites(suites).expect("closed galleries are suites")
}

fn element_name(cox: &CoxeterMatrix, e: &CoxeterElement) -> String {
    if e.is_identity() {
        "1".into()
    } else {
        cox.format_word(e.normal_form())
    }
}

pub fn hexagon() -> WeylData {
    thin_building(&CoxeterMatrix::dihedral(Order::Finite(3)))
}

pub fn octagon() -> WeylData {
    thin_building(&CoxeterMatrix::dihedral(Order::Finite(4)))
}

/// The thin building of type `A1 x A1 x A1`.
pub fn cube() -> WeylData {
    thin_building(&a1_cubed())
}

pub fn a1_cubed() -> CoxeterMatrix {
    CoxeterMatrix::linear(&["s", "t", "u"], &[Order::Finite(2), Order::Finite(2)]).expect("valid matrix")
}

/// The flag system of the Fano plane. Lines are `{i, i+1, i+3} mod 7`; chambers are flags
/// `p{i}L{j}`; s changes the point, t changes the line.
pub fn fano() -> WeylData {
    let lines: Vec<[usize; 3]> = (0..7).map(|i| [i, (i + 1) % 7, (i + 3) % 7]).collect();
    let mut flags = Vec::new();
    for (l, pts) in lines.iter().enumerate() {
        for &p in pts {
            flags.push((p, l));
        }
    }
    flags.sort();
    let names: Vec<String> = flags.iter().map(|(p, l)| format!("p{p}L{l}")).collect();
    let by_line: Vec<Vec<usize>> =
        (0..7).map(|l| (0..flags.len()).filter(|&k| flags[k].1 == l).collect()).collect();
    let by_point: Vec<Vec<usize>> =
        (0..7).map(|p| (0..flags.len()).filter(|&k| flags[k].0 == p).collect()).collect();
    let d = setoid_data(CoxeterMatrix::dihedral(Order::Finite(3)), names, &[by_line, by_point]);
    let suites = all_closed_suites(&d);
    d.with_suites(suites).expect("apartments are suites")
}

/// The action of the subgroup generated by `gens` on a thin building by left multiplication.
pub fn left_multiplication(cox: &CoxeterMatrix, building: &WeylData, gens: &[Word]) -> ChamberFreeAction {
    let identity = CoxeterElement::identity();
    let mut elems = vec![identity.clone()];
    let mut seen: HashMap<CoxeterElement, usize> = HashMap::from([(identity, 0)]);
    let gens: Vec<CoxeterElement> = gens.iter().map(|w| cox.element(w)).collect();
    let mut k = 0;
    while k < elems.len() {
        for g in &gens {
            let x = cox.multiply(&elems[k], g);
            if !seen.contains_key(&x) {
                seen.insert(x.clone(), elems.len());
                elems.push(x);
            }
        }
        k += 1;
    }
    let mul: Vec<Vec<usize>> =
        elems.iter().map(|a| elems.iter().map(|b| seen[&cox.multiply(a, b)]).collect()).collect();
    let group = GroupTable::new(mul).expect("closed under multiplication");
    let chamber_of: HashMap<&str, ChamberId> = building.chambers().map(|c| (building.chamber_name(c), c)).collect();
    let all = cox.enumerate_elements(100_000).expect("finite Coxeter group");
    let by_name: Vec<CoxeterElement> = building
        .chambers()
        .map(|c| all.iter().find(|e| element_name(cox, e) == building.chamber_name(c)).expect("chamber").clone())
        .collect();
    let mut edge_at: HashMap<(ChamberId, Gen), EdgeId> = HashMap::new();
    for e in building.edge_ids() {
        edge_at.insert((building.source(e), building.edge_type(e)), e);
    }
    let mut chamber_images = Vec::new();
    let mut edge_images = Vec::new();
    for g in &elems {
        let img: Vec<ChamberId> = by_name
            .iter()
            .map(|w| chamber_of[element_name(cox, &cox.multiply(g, w)).as_str()])
            .collect();
        let eimg: Vec<EdgeId> = building
            .edge_ids()
            .map(|e| edge_at[&(img[building.source(e).idx()], building.edge_type(e))])
            .collect();
        chamber_images.push(img);
        edge_images.push(eimg);
    }
    let element_names = elems.iter().map(|e| element_name(cox, e)).collect();
    ChamberFreeAction { group, element_names, chamber_images, edge_images }
}

/// The cyclic group of order `n` acting trivially, which fixes every chamber when `n > 1`.
pub fn trivial_action(data: &WeylData, n: usize) -> ChamberFreeAction {
    ChamberFreeAction {
        group: GroupTable::cyclic(n),
        element_names: (0..n).map(|k| format!("g{k}")).collect(),
        chamber_images: vec![data.chambers().collect(); n],
        edge_images: vec![data.edge_ids().collect(); n],
    }
}

/// The building fixtures paired with chamber-free actions on them.
pub fn building_actions() -> Vec<(&'static str, WeylData, Vec<(&'static str, ChamberFreeAction)>)> {
    let mut out = Vec::new();
    for (name, cox) in [
        ("hexagon", CoxeterMatrix::dihedral(Order::Finite(3))),
        ("octagon", CoxeterMatrix::dihedral(Order::Finite(4))),
        ("cube", a1_cubed()),
    ] {
        let d = thin_building(&cox);
        let w0 = cox.longest_element(10_000).expect("finite").normal_form().clone();
        let rot = Word::new(vec![0, 1]);
        let all: Vec<Word> = (0..cox.rank()).map(|s| Word::new(vec![s])).collect();
        let acts = vec![
            ("whole group", left_multiplication(&cox, &d, &all)),
            ("longest element", left_multiplication(&cox, &d, &[w0])),
            ("rotation", left_multiplication(&cox, &d, &[rot])),
        ];
        out.push((name, d, acts));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(hexagon().n_chambers(), 6);
        assert_eq!(hexagon().defining_suites().len(), 1);
        assert_eq!(octagon().n_chambers(), 8);
        assert_eq!(cube().n_chambers(), 8);
        assert_eq!(cube().defining_suites().len(), 6);
        let f = fano();
        assert_eq!(f.n_chambers(), 21);
        assert_eq!(f.n_edges(), 84);
        assert_eq!(f.defining_suites().len(), 28);
    }

    #[test]
    fn actions_have_expected_orders() {
        let orders: Vec<Vec<usize>> = building_actions()
            .iter()
            .map(|(_, _, a)| a.iter().map(|(_, x)| x.group.order()).collect())
            .collect();
        assert_eq!(orders, vec![vec![6, 2, 3], vec![8, 2, 4], vec![8, 2, 2]]);
    }
}
