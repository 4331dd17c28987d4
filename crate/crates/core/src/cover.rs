//! Morphisms and coverings of Weyl data, universal covers, quotients and local coverings.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::coxeter::{CoxeterElement, Gen, Side};
use crate::groupoid::{self, GroupAction, GroupTable, GroupoidError};
use crate::homotopy::{split_cycle, Homotopy, HomotopyError, SuiteIndex};
use crate::weyl::{ChamberId, DataError, EdgeId, EdgeSpec, Gallery, SubData, WeylData};

/// Default bound on the number of chambers of a constructed cover.
pub const DEFAULT_COVER_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("map has the wrong number of entries")]
    WrongShape,
    #[error("edge {0} is not mapped compatibly with its extremities, type or inverse")]
    EdgeNotPreserved(String),
    #[error("composition of ({0}, {1}) is not preserved")]
    CompositionNotPreserved(String, String),
    #[error("image of defining suite {0} is not a suite")]
    SuiteNotPreserved(usize),
    #[error("chamber {0} is not in the image")]
    NotSurjective(String),
    #[error("star of chamber {0} is not mapped bijectively")]
    StarNotBijective(String),
    #[error("lift of defining suite {suite} from chamber {chamber} is not a suite")]
    LiftNotSuite { suite: usize, chamber: String },
    #[error("lift of defining suite {suite} from chamber {chamber} is not closed")]
    NotPreCovering { suite: usize, chamber: String },
    #[error("lifted edge {0} has no inverse in the cover")]
    MissingInverse(String),
    #[error("cover exceeded cap of {0} chambers")]
    CapExceeded(usize),
    #[error("source is not connected")]
    NotConnected,
    #[error("action of element {element} is not an automorphism: {reason}")]
    NotAutomorphism { element: String, reason: String },
    #[error("action does not respect the group law at ({0}, {1})")]
    NotAnAction(String, String),
    #[error("action is not free: element {element} fixes chamber {chamber}")]
    NotFree { element: String, chamber: String },
    #[error("unknown chamber {0}")]
    UnknownChamber(String),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// A map of Weyl data given on chambers and edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylMorphism {
    pub chamber_map: Vec<ChamberId>,
    pub edge_map: Vec<EdgeId>,
}

impl WeylMorphism {
    pub fn identity(d: &WeylData) -> Self {
        WeylMorphism { chamber_map: d.chambers().collect(), edge_map: d.edge_ids().collect() }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &WeylMorphism) -> WeylMorphism {
        WeylMorphism {
            chamber_map: self.chamber_map.iter().map(|c| other.chamber_map[c.idx()]).collect(),
            edge_map: self.edge_map.iter().map(|e| other.edge_map[e.idx()]).collect(),
        }
    }

    pub fn image(&self, g: &Gallery) -> Gallery {
        Gallery { start: self.chamber_map[g.start.idx()], edges: g.edges.iter().map(|e| self.edge_map[e.idx()]).collect() }
    }
}

/// Whether `theta` is a suite of `data` according to `index`.
pub fn is_indexed_suite(data: &WeylData, index: &SuiteIndex, theta: &[EdgeId]) -> bool {
    match split_cycle(data, theta) {
        Some((rho, other)) => index.partners(&rho.edges).contains(&other.edges),
        None => false,
    }
}

/// Checks the morphism axioms. Suites of the target are decided by `tgt_index`.
pub fn is_morphism(
    src: &WeylData,
    tgt: &WeylData,
    f: &WeylMorphism,
    tgt_index: &SuiteIndex,
) -> Result<(), CoverError> {
    if f.chamber_map.len() != src.n_chambers()
        || f.edge_map.len() != src.n_edges()
        || f.chamber_map.iter().any(|c| c.idx() >= tgt.n_chambers())
        || f.edge_map.iter().any(|e| e.idx() >= tgt.n_edges())
    {
        return Err(CoverError::WrongShape);
    }
    for e in src.edge_ids() {
        let g = f.edge_map[e.idx()];
        let ok = tgt.source(g) == f.chamber_map[src.source(e).idx()]
            && tgt.target(g) == f.chamber_map[src.target(e).idx()]
            && tgt.coxeter().label(tgt.edge_type(g)) == src.coxeter().label(src.edge_type(e))
            && tgt.inverse(g) == f.edge_map[src.inverse(e).idx()];
        if !ok {
            return Err(CoverError::EdgeNotPreserved(src.edge_name(e).to_string()));
        }
    }
    for (&(a, b), &c) in src.detours() {
        let (fa, fb) = (f.edge_map[a.idx()], f.edge_map[b.idx()]);
        if tgt.compose_edges(fa, fb) != Some(f.edge_map[c.idx()]) {
            return Err(CoverError::CompositionNotPreserved(src.edge_name(a).into(), src.edge_name(b).into()));
        }
    }
    for (k, th) in src.defining_suites().iter().enumerate() {
        let img: Vec<EdgeId> = th.iter().map(|e| f.edge_map[e.idx()]).collect();
        if !is_indexed_suite(tgt, tgt_index, &img) {
            return Err(CoverError::SuiteNotPreserved(k));
        }
    }
    Ok(())
}

/// The unique lift of `g` (a gallery of `tgt`) starting at the chamber `start` of `src`.
pub fn lift_gallery(src: &WeylData, p: &WeylMorphism, start: ChamberId, g: &Gallery) -> Option<Gallery> {
    if p.chamber_map[start.idx()] != g.start {
        return None;
    }
    let mut at = start;
    let mut edges = Vec::with_capacity(g.len());
    for &e in &g.edges {
        let up = src.star(at).iter().copied().find(|&x| p.edge_map[x.idx()] == e)?;
        edges.push(up);
        at = src.target(up);
    }
    Some(Gallery { start, edges })
}

/// Checks that `p` is a covering of Weyl data: a surjective morphism, bijective on stars, with
/// every lift of a defining suite of the target a suite of the source.
pub fn is_covering_weyl(
    src: &WeylData,
    tgt: &WeylData,
    p: &WeylMorphism,
    src_index: &SuiteIndex,
    tgt_index: &SuiteIndex,
) -> Result<(), CoverError> {
    is_morphism(src, tgt, p, tgt_index)?;
    let hit: HashSet<ChamberId> = p.chamber_map.iter().copied().collect();
    if let Some(c) = tgt.chambers().find(|c| !hit.contains(c)) {
        return Err(CoverError::NotSurjective(tgt.chamber_name(c).into()));
    }
    for x in src.chambers() {
        let img: HashSet<EdgeId> = src.star(x).iter().map(|e| p.edge_map[e.idx()]).collect();
        if img.len() != src.star(x).len() || img.len() != tgt.star(p.chamber_map[x.idx()]).len() {
            return Err(CoverError::StarNotBijective(src.chamber_name(x).into()));
        }
    }
    for (k, th) in tgt.defining_suites().iter().enumerate() {
        let g = tgt.gallery_of(th);
        for x in src.chambers().filter(|x| p.chamber_map[x.idx()] == g.start) {
            let up = lift_gallery(src, p, x, &g).expect("star bijection");
            if src.end(&up) != x || !is_indexed_suite(src, src_index, &up.edges) {
                return Err(CoverError::LiftNotSuite { suite: k, chamber: src.chamber_name(x).into() });
            }
        }
    }
    Ok(())
}

/// Extends `start -> image` to a map `src -> other` over the same base by lifting stars.
fn lift_map(
    src: &WeylData,
    p: &WeylMorphism,
    other: &WeylData,
    q: &WeylMorphism,
    start: ChamberId,
    image: ChamberId,
) -> Option<WeylMorphism> {
    let mut cmap = vec![None; src.n_chambers()];
    let mut emap = vec![EdgeId(u32::MAX); src.n_edges()];
    cmap[start.idx()] = Some(image);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let img = cmap[x.idx()].expect("visited");
        for &e in src.star(x) {
            let down = p.edge_map[e.idx()];
            let up = other.star(img).iter().copied().find(|&f| q.edge_map[f.idx()] == down)?;
            emap[e.idx()] = up;
            let (y, yt) = (src.target(e), other.target(up));
            match cmap[y.idx()] {
                None => {
                    cmap[y.idx()] = Some(yt);
                    queue.push_back(y);
                }
                Some(z) if z != yt => return None,
                _ => {}
            }
        }
    }
    let chamber_map: Option<Vec<ChamberId>> = cmap.into_iter().collect();
    Some(WeylMorphism { chamber_map: chamber_map?, edge_map: emap })
}

fn is_bijective(f: &WeylMorphism, d: &WeylData) -> bool {
    let cs: HashSet<ChamberId> = f.chamber_map.iter().copied().collect();
    let es: HashSet<EdgeId> = f.edge_map.iter().copied().collect();
    cs.len() == d.n_chambers() && es.len() == d.n_edges()
}

/// Deck transformations of a covering `p: src -> tgt` with `src` connected. Each is an
/// automorphism of `src` commuting with `p`; the identity comes first.
pub fn deck_transformations(
    src: &WeylData,
    tgt: &WeylData,
    p: &WeylMorphism,
    src_index: &SuiteIndex,
) -> Result<Vec<WeylMorphism>, CoverError> {
    let _ = tgt;
    if !src.is_connected() {
        return Err(CoverError::NotConnected);
    }
    if src.n_chambers() == 0 {
        return Ok(vec![]);
    }
    let base = ChamberId(0);
    let mut out = Vec::new();
    for y in src.chambers().filter(|y| p.chamber_map[y.idx()] == p.chamber_map[0]) {
        if let Some(m) = lift_map(src, p, src, p, base, y) {
            if is_bijective(&m, src) && is_morphism(src, src, &m, src_index).is_ok() {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// An isomorphism of coverings `p1 -> p2` over the same base, if any.
pub fn coverings_isomorphic(
    src1: &WeylData,
    p1: &WeylMorphism,
    src2: &WeylData,
    p2: &WeylMorphism,
    src2_index: &SuiteIndex,
) -> Option<WeylMorphism> {
    if src1.n_chambers() != src2.n_chambers() || src1.n_edges() != src2.n_edges() || !src1.is_connected() {
        return None;
    }
    if src1.n_chambers() == 0 {
        return Some(WeylMorphism { chamber_map: vec![], edge_map: vec![] });
    }
    src2.chambers().filter(|y| p2.chamber_map[y.idx()] == p1.chamber_map[0]).find_map(|y| {
        let m = lift_map(src1, p1, src2, p2, ChamberId(0), y)?;
        (is_bijective(&m, src2) && is_morphism(src1, src2, &m, src2_index).is_ok()).then_some(m)
    })
}

/// A universal cover built from strict classes of geodesics issuing from a base chamber.
#[derive(Debug, Clone)]
pub struct UniversalCover {
    pub data: WeylData,
    pub projection: WeylMorphism,
    pub base: ChamberId,
    /// Per cover chamber, the least geodesic from the base in its class.
    pub geodesics: Vec<Gallery>,
    pub w_lengths: Vec<CoxeterElement>,
    /// Cover chambers at the truncation radius whose star was cut.
    pub boundary: Vec<ChamberId>,
    pub complete: bool,
}

/// The universal cover of `data` based at `base`, optionally truncated to geodesics of length
/// at most `radius`. `index` supplies the partners of maximal alternating geodesics.
pub fn universal_cover(
    data: &WeylData,
    index: &SuiteIndex,
    base: ChamberId,
    radius: Option<usize>,
    cap: usize,
) -> Result<UniversalCover, CoverError> {
    if base.idx() >= data.n_chambers() {
        return Err(CoverError::UnknownChamber(format!("{base}")));
    }
    let cox = data.coxeter();
    let hom = Homotopy::new(data, index);
    let mut geodesics: Vec<Gallery> = vec![Gallery::trivial(base)];
    let mut w_lengths = vec![CoxeterElement::identity()];
    let mut lookup: HashMap<Vec<EdgeId>, usize> = HashMap::from([(Vec::new(), 0)]);
    let mut up_edges: Vec<(usize, EdgeId, usize)> = Vec::new();
    let mut edge_at: HashMap<(usize, EdgeId), usize> = HashMap::new();
    let mut boundary = Vec::new();
    let mut complete = true;
    let mut x = 0;
    while x < geodesics.len() {
        let gamma = geodesics[x].clone();
        let w = w_lengths[x].clone();
        let end = data.end(&gamma);
        let mut cut = false;
        for &i in data.star(end) {
            let s: Gen = data.edge_type(i);
            let (next, w2) = if cox.length_dichotomy(&w, s, Side::Right) > 0 {
                if radius.is_some_and(|r| gamma.len() >= r) {
                    cut = true;
                    continue;
                }
                let mut e = gamma.edges.clone();
                e.push(i);
                (Gallery { start: base, edges: e }, cox.multiply_gen(&w, s))
            } else {
                let class = hom.strict_class(&gamma);
                let member = class
                    .iter()
                    .find(|m| m.edges.last().map(|&e| data.edge_type(e)) == Some(s))
                    .ok_or_else(|| HomotopyError::MissingPartner { gallery: gamma.edges.clone(), ty: s })?;
                let j = *member.edges.last().expect("nonempty");
                let mut alpha = member.edges[..member.len() - 1].to_vec();
                let w2 = match data.compose_edges(j, i) {
                    None => cox.multiply_gen(&w, s),
                    Some(k) => {
                        alpha.push(k);
                        w.clone()
                    }
                };
                (Gallery { start: base, edges: alpha }, w2)
            };
            let canon = hom.strict_canonical(&next);
            let y = match lookup.get(&canon.edges) {
                Some(&y) => y,
                None => {
                    let y = geodesics.len();
                    if y >= cap {
                        return Err(CoverError::CapExceeded(cap));
                    }
                    lookup.insert(canon.edges.clone(), y);
                    geodesics.push(canon);
                    w_lengths.push(w2);
                    y
                }
            };
            edge_at.insert((x, i), up_edges.len());
            up_edges.push((x, i, y));
        }
        if cut {
            complete = false;
            boundary.push(ChamberId(x as u32));
        }
        x += 1;
    }
    let mut specs = Vec::with_capacity(up_edges.len());
    for (k, &(x, i, y)) in up_edges.iter().enumerate() {
        let inv = *edge_at.get(&(y, data.inverse(i))).ok_or(CoverError::MissingInverse(format!("e{k}")))?;
        specs.push(EdgeSpec {
            name: format!("e{k}"),
            source: ChamberId(x as u32),
            target: ChamberId(y as u32),
            ty: data.edge_type(i),
            inverse: EdgeId(inv as u32),
        });
    }
    let mut detours = Vec::new();
    for (k, &(x, i, y)) in up_edges.iter().enumerate() {
        for &i2 in data.star(data.target(i)) {
            if data.edge_type(i2) != data.edge_type(i) || data.inverse(i) == i2 {
                continue;
            }
            let k2 = edge_at[&(y, i2)];
            let c = data.compose_edges(i, i2).expect("detour");
            let kc = *edge_at.get(&(x, c)).ok_or(CoverError::CompositionNotPreserved(format!("e{k}"), format!("e{k2}")))?;
            detours.push((EdgeId(k as u32), EdgeId(k2 as u32), EdgeId(kc as u32)));
        }
    }
    let mut suites: Vec<Vec<EdgeId>> = Vec::new();
    let mut seen: HashSet<Vec<EdgeId>> = HashSet::new();
    for (si, th) in data.defining_suites().iter().enumerate() {
        let start = data.source(th[0]);
        for x in (0..geodesics.len()).filter(|&x| data.end(&geodesics[x]) == start) {
            let mut at = x;
            let mut lifted = Vec::with_capacity(th.len());
            for &e in th {
                match edge_at.get(&(at, e)) {
                    Some(&k) => {
                        lifted.push(EdgeId(k as u32));
                        at = up_edges[k].2;
                    }
                    None => break,
                }
            }
            if lifted.len() < th.len() {
                continue;
            }
            if at != x {
                return Err(CoverError::NotPreCovering { suite: si, chamber: format!("c{x}") });
            }
            if seen.insert(lifted.clone()) {
                suites.push(lifted);
            }
        }
    }
    let names = (0..geodesics.len()).map(|i| format!("c{i}")).collect();
    let cover = WeylData::new(cox.clone(), names, specs, detours, suites)?;
    let projection = WeylMorphism {
        chamber_map: geodesics.iter().map(|g| data.end(g)).collect(),
        edge_map: up_edges.iter().map(|&(_, i, _)| i).collect(),
    };
    Ok(UniversalCover { data: cover, projection, base: ChamberId(0), geodesics, w_lengths, boundary, complete })
}

/// A group acting on Weyl data, given element by element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberFreeAction {
    pub group: GroupTable,
    pub element_names: Vec<String>,
    pub chamber_images: Vec<Vec<ChamberId>>,
    pub edge_images: Vec<Vec<EdgeId>>,
}

impl ChamberFreeAction {
    /// Checks that every element acts by an automorphism, that the action respects the group
    /// law, and that no element other than the identity fixes a chamber.
    pub fn validate(&self, data: &WeylData, index: &SuiteIndex) -> Result<(), CoverError> {
        let n = self.group.order();
        let name = |e: usize| self.element_names.get(e).cloned().unwrap_or_else(|| e.to_string());
        if self.chamber_images.len() != n || self.edge_images.len() != n {
            return Err(CoverError::WrongShape);
        }
        for e in 0..n {
            let f = WeylMorphism { chamber_map: self.chamber_images[e].clone(), edge_map: self.edge_images[e].clone() };
            if let Err(err) = is_morphism(data, data, &f, index) {
                return Err(CoverError::NotAutomorphism { element: name(e), reason: err.to_string() });
            }
            if !is_bijective(&f, data) {
                return Err(CoverError::NotAutomorphism { element: name(e), reason: "not bijective".into() });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.group.mul(a, b);
                let ok_c = data.chambers().all(|x| {
                    self.chamber_images[ab][x.idx()] == self.chamber_images[a][self.chamber_images[b][x.idx()].idx()]
                });
                let ok_e = data
                    .edge_ids()
                    .all(|x| self.edge_images[ab][x.idx()] == self.edge_images[a][self.edge_images[b][x.idx()].idx()]);
                if !ok_c || !ok_e {
                    return Err(CoverError::NotAnAction(name(a), name(b)));
                }
            }
        }
        for e in 0..n {
            if e == self.group.identity() {
                continue;
            }
            if let Some(x) = data.chambers().find(|x| self.chamber_images[e][x.idx()] == *x) {
                return Err(CoverError::NotFree { element: name(e), chamber: data.chamber_name(x).into() });
            }
        }
        Ok(())
    }

    /// Elements `g` with `g . chamber` in `chambers`.
    pub fn stabilizer_of(&self, chambers: &[ChamberId], c: ChamberId) -> Vec<usize> {
        let set: HashSet<ChamberId> = chambers.iter().copied().collect();
        (0..self.group.order()).filter(|&g| set.contains(&self.chamber_images[g][c.idx()])).collect()
    }
}

/// The quotient of `data` by a chamber-free action, with the projection.
pub fn quotient_by_chamber_free_action(
    data: &WeylData,
    action: &ChamberFreeAction,
    index: &SuiteIndex,
) -> Result<(WeylData, WeylMorphism), CoverError> {
    action.validate(data, index)?;
    let cimgs: Vec<Vec<usize>> = action.chamber_images.iter().map(|v| v.iter().map(|c| c.idx()).collect()).collect();
    let eimgs: Vec<Vec<usize>> = action.edge_images.iter().map(|v| v.iter().map(|e| e.idx()).collect()).collect();
    let (clabel, creps) = groupoid::orbits(data.n_chambers(), &cimgs);
    let (elabel, ereps) = groupoid::orbits(data.n_edges(), &eimgs);
    let edges: Vec<EdgeSpec> = ereps
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            let e = EdgeId(e as u32);
            EdgeSpec {
                name: format!("e{k}"),
                source: ChamberId(clabel[data.source(e).idx()] as u32),
                target: ChamberId(clabel[data.target(e).idx()] as u32),
                ty: data.edge_type(e),
                inverse: EdgeId(elabel[data.inverse(e).idx()] as u32),
            }
        })
        .collect();
    let mut detours = Vec::new();
    for s in 0..data.coxeter().rank() {
        let panel = data.panel(s);
        let g = &panel.groupoid;
        let nc = data.n_chambers();
        let arrow_images: Vec<Vec<usize>> = (0..action.group.order())
            .map(|el| {
                (0..g.n_arrows())
                    .map(|a| match panel.edge(a) {
                        None => action.chamber_images[el][a].idx(),
                        Some(e) => panel.arrow(action.edge_images[el][e.idx()]),
                    })
                    .collect()
            })
            .collect();
        let pa = GroupAction { group: action.group.clone(), vertex_images: cimgs.clone(), arrow_images };
        let (q, pm) = groupoid::quotient_by_free_action(g, &pa)?;
        let mut qedge = vec![None; q.n_arrows()];
        for a in nc..g.n_arrows() {
            let e = panel.edge(a).expect("edge arrow");
            qedge[pm.arrow_map[a]] = Some(EdgeId(elabel[e.idx()] as u32));
        }
        for a in 0..q.n_arrows() {
            let Some(ea) = qedge[a] else { continue };
            for &b in q.star(q.target(a)) {
                let Some(eb) = qedge[b] else { continue };
                let c = q.compose(a, b).expect("composable");
                if let Some(ec) = qedge[c] {
                    detours.push((ea, eb, ec));
                }
            }
        }
    }
    detours.sort();
    let mut suites: Vec<Vec<EdgeId>> = Vec::new();
    let mut seen = HashSet::new();
    for th in data.defining_suites() {
        let img: Vec<EdgeId> = th.iter().map(|e| EdgeId(elabel[e.idx()] as u32)).collect();
        if seen.insert(img.clone()) {
            suites.push(img);
        }
    }
    let names = creps.iter().map(|&c| data.chamber_name(ChamberId(c as u32)).to_string()).collect();
    let q = WeylData::new(data.coxeter().clone(), names, edges, detours, suites)?;
    let proj = WeylMorphism {
        chamber_map: clabel.iter().map(|&c| ChamberId(c as u32)).collect(),
        edge_map: elabel.iter().map(|&e| EdgeId(e as u32)).collect(),
    };
    Ok((q, proj))
}

/// The restriction of a covering to a residue upstairs and the corresponding residue downstairs.
#[derive(Debug, Clone)]
pub struct LocalCovering {
    pub upstairs: SubData,
    pub downstairs: SubData,
    pub map: WeylMorphism,
}

pub fn local_covering(
    src: &WeylData,
    tgt: &WeylData,
    p: &WeylMorphism,
    types: &[Gen],
    chamber: ChamberId,
) -> LocalCovering {
    let up = src.residue(types, chamber);
    let down = tgt.residue(types, p.chamber_map[chamber.idx()]);
    let cpos: HashMap<ChamberId, ChamberId> =
        down.chamber_map.iter().enumerate().map(|(i, &c)| (c, ChamberId(i as u32))).collect();
    let epos: HashMap<EdgeId, EdgeId> =
        down.edge_map.iter().enumerate().map(|(i, &e)| (e, EdgeId(i as u32))).collect();
    let map = WeylMorphism {
        chamber_map: up.chamber_map.iter().map(|c| cpos[&p.chamber_map[c.idx()]]).collect(),
        edge_map: up.edge_map.iter().map(|e| epos[&p.edge_map[e.idx()]]).collect(),
    };
    LocalCovering { upstairs: up, downstairs: down, map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn one_chamber_cover_is_the_polygon() {
        for m in 2..7u32 {
            let d = fixtures::thin_one_chamber(m);
            let idx = SuiteIndex::structural(&d);
            let u = universal_cover(&d, &idx, ChamberId(0), None, 10_000).unwrap();
            assert!(u.complete);
            assert_eq!(u.data.n_chambers(), 2 * m as usize);
            let up_idx = SuiteIndex::structural(&u.data);
            is_covering_weyl(&u.data, &d, &u.projection, &up_idx, &idx).unwrap();
            let deck = deck_transformations(&u.data, &d, &u.projection, &up_idx).unwrap();
            assert_eq!(deck.len(), 2 * m as usize);
        }
    }

    #[test]
    fn truncated_cover_of_infinite_dihedral() {
        let d = fixtures::thin_one_chamber_infinite();
        let idx = SuiteIndex::structural(&d);
        let u = universal_cover(&d, &idx, ChamberId(0), Some(3), 10_000).unwrap();
        assert_eq!(u.data.n_chambers(), 7);
        assert!(!u.complete);
        assert_eq!(u.boundary.len(), 2);
    }

    #[test]
    fn lifting_is_unique_and_starts_where_asked() {
        let d = fixtures::thin_one_chamber(3);
        let idx = SuiteIndex::structural(&d);
        let u = universal_cover(&d, &idx, ChamberId(0), None, 100).unwrap();
        let g = d.gallery(ChamberId(0), vec![EdgeId(0), EdgeId(1), EdgeId(1)]).unwrap();
        for x in u.data.chambers() {
            let l = lift_gallery(&u.data, &u.projection, x, &g).unwrap();
            assert_eq!(l.start, x);
            assert_eq!(u.projection.image(&l), g);
        }
    }
}
