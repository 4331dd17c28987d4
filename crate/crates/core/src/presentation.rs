//! Generators, presentations of the fundamental group, and flowers of rank-2 data.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::coset::{self, CosetError};
use crate::homotopy::{FundamentalGroupoid, HomotopyError};
use crate::weyl::{ChamberId, DataError, EdgeId, Gallery, WeylData};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("data is not connected")]
    NotConnected,
    #[error("edge {0} is not in the generating set of edges leaving a base chamber")]
    NotTreeEdge(String),
    #[error("tree edges do not form a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("flowers need rank-2 data of finite order")]
    NotPolygon,
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// The distinguished edges of each panel: loops at its base chamber, the least edge from the
/// base to every other chamber, and the inverses of those.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSet {
    /// Per type, per panel, the base (least) chamber.
    pub bases: Vec<Vec<ChamberId>>,
    pub loops: Vec<EdgeId>,
    pub outgoing: Vec<EdgeId>,
    pub incoming: Vec<EdgeId>,
    base_of: Vec<Vec<ChamberId>>,
    to_chamber: HashMap<(usize, ChamberId), EdgeId>,
}

impl GeneratingSet {
    /// All generators sorted by edge id.
    pub fn all(&self) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = self.loops.iter().chain(&self.outgoing).chain(&self.incoming).copied().collect();
        v.sort();
        v
    }

    /// The unique expression `i = i⁻ ; i_B ; i⁺` of an edge, trivial factors omitted.
    pub fn expression(&self, data: &WeylData, i: EdgeId) -> Vec<EdgeId> {
        let s = data.edge_type(i);
        let (x, y) = (data.source(i), data.target(i));
        let b = self.base_of[s][x.idx()];
        let panel = data.panel(s);
        let g = &panel.groupoid;
        let mut out = Vec::new();
        let mut arrow = panel.arrow(i);
        if x != b {
            let ix = self.to_chamber[&(s, x)];
            out.push(data.inverse(ix));
            arrow = g.compose(panel.arrow(ix), arrow).expect("composable");
        }
        if y != b {
            let iy = self.to_chamber[&(s, y)];
            arrow = g.compose(arrow, panel.arrow(data.inverse(iy))).expect("composable");
        }
        if let Some(e) = panel.edge(arrow) {
            out.push(e);
        }
        if y != b {
            out.push(self.to_chamber[&(s, y)]);
        }
        out
    }
}

pub fn generating_set(data: &WeylData) -> GeneratingSet {
    let rank = data.coxeter().rank();
    let mut bases = vec![Vec::new(); rank];
    let mut base_of = vec![vec![ChamberId(0); data.n_chambers()]; rank];
    let mut loops = Vec::new();
    let mut outgoing = Vec::new();
    let mut incoming = Vec::new();
    let mut to_chamber = HashMap::new();
    for s in 0..rank {
        for comp in data.panel(s).components() {
            let b = comp[0];
            bases[s].push(b);
            for &c in &comp {
                base_of[s][c.idx()] = b;
            }
            for e in data.edges_from(b, s) {
                let t = data.target(e);
                if t == b {
                    loops.push(e);
                } else {
                    to_chamber.entry((s, t)).or_insert(e);
                }
            }
        }
    }
    let mut pairs: Vec<(&(usize, ChamberId), &EdgeId)> = to_chamber.iter().collect();
    pairs.sort();
    for (_, &e) in pairs {
        outgoing.push(e);
        incoming.push(data.inverse(e));
    }
    loops.sort();
    outgoing.sort();
    incoming.sort();
    GeneratingSet { bases, loops, outgoing, incoming, base_of, to_chamber }
}

/// A letter of a relator: a generator or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym {
    pub gen: usize,
    pub inv: bool,
}

impl Sym {
    pub fn pos(gen: usize) -> Self {
        Sym { gen, inv: false }
    }

    pub fn inverse(self) -> Self {
        Sym { gen: self.gen, inv: !self.inv }
    }
}

/// A finite group presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<Sym>>,
}

fn free_reduce(w: &[Sym]) -> Vec<Sym> {
    let mut out: Vec<Sym> = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&x.inverse()) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    while out.len() >= 2 && out[0] == out[out.len() - 1].inverse() {
        out.pop();
        out.remove(0);
    }
    out
}

fn invert_word(w: &[Sym]) -> Vec<Sym> {
    w.iter().rev().map(|x| x.inverse()).collect()
}

/// Least rotation of the word or of its inverse, used to drop duplicate relators.
fn cyclic_key(w: &[Sym]) -> Vec<Sym> {
    let mut best: Option<Vec<Sym>> = None;
    for v in [w.to_vec(), invert_word(w)] {
        for r in 0..v.len().max(1) {
            let mut c = v[r.min(v.len())..].to_vec();
            c.extend_from_slice(&v[..r.min(v.len())]);
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or_default()
}

impl Presentation {
    /// Tietze simplification: free and cyclic reduction, removal of generators killed by a
    /// one-letter relator, elimination through two-letter relators `x^a y^b`, and removal of
    /// duplicate relators.
    pub fn tietze(&self) -> Presentation {
        let mut alive: Vec<bool> = vec![true; self.generators.len()];
        let mut rels: Vec<Vec<Sym>> = self.relators.iter().map(|r| free_reduce(r)).collect();
        loop {
            rels.retain(|r| !r.is_empty());
            if let Some(r) = rels.iter().find(|r| r.len() == 1).cloned() {
                let x = r[0].gen;
                alive[x] = false;
                rels = rels.iter().map(|w| free_reduce(&w.iter().copied().filter(|s| s.gen != x).collect::<Vec<_>>())).collect();
                continue;
            }
            let pair = rels.iter().find(|r| r.len() == 2 && r[0].gen != r[1].gen).cloned();
            if let Some(r) = pair {
                let (keep, gone) = if r[0].gen < r[1].gen { (r[0], r[1]) } else { (r[1], r[0]) };
                // keep^a gone^b = 1 up to rotation, so gone^b = keep^-a and gone = (keep^-a)^b.
                let image = if gone.inv { keep } else { keep.inverse() };
                let y = gone.gen;
                alive[y] = false;
                rels = rels
                    .iter()
                    .map(|w| {
                        let sub: Vec<Sym> = w
                            .iter()
                            .map(|&s| if s.gen == y { if s.inv { image.inverse() } else { image } } else { s })
                            .collect();
                        free_reduce(&sub)
                    })
                    .collect();
                continue;
            }
            break;
        }
        let mut seen = HashSet::new();
        rels.retain(|r| seen.insert(cyclic_key(r)));
        let mut renum = vec![usize::MAX; self.generators.len()];
        let mut gens = Vec::new();
        for (g, name) in self.generators.iter().enumerate() {
            if alive[g] {
                renum[g] = gens.len();
                gens.push(name.clone());
            }
        }
        let relators = rels
            .into_iter()
            .map(|r| r.into_iter().map(|s| Sym { gen: renum[s.gen], inv: s.inv }).collect())
            .collect();
        Presentation { generators: gens, relators }
    }

    /// Order of the presented group by coset enumeration over the trivial subgroup.
    pub fn group_order(&self, cap: usize) -> Result<usize, CosetError> {
        let rels: Vec<Vec<usize>> =
            self.relators.iter().map(|r| r.iter().map(|s| 2 * s.gen + s.inv as usize).collect()).collect();
        coset::group_order(self.generators.len(), &rels, cap)
    }

    pub fn letter_name(&self, s: Sym) -> String {
        if s.inv {
            format!("{}^-1", self.generators[s.gen])
        } else {
            self.generators[s.gen].clone()
        }
    }

    /// Relators spelled with generator names, formal inverses written `x^-1`.
    pub fn relator_names(&self) -> Vec<Vec<String>> {
        self.relators.iter().map(|r| r.iter().map(|&s| self.letter_name(s)).collect()).collect()
    }

    fn format_relator(&self, r: &[Sym]) -> String {
        let n = r.len();
        let period = (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| r[i] == r[i - p])).unwrap_or(n);
        let k = n / period;
        let unit: Vec<String> = r[..period].iter().map(|&s| self.letter_name(s)).collect();
        if k == 1 {
            unit.join(" ")
        } else if period == 1 {
            let s = r[0];
            if s.inv {
                format!("{}^-{k}", self.generators[s.gen])
            } else {
                format!("{}^{k}", self.generators[s.gen])
            }
        } else {
            format!("({})^{k}", unit.join(" "))
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_relator(r)).collect();
        write!(f, "⟨ {} | {} ⟩", self.generators.join(", "), rels.join(", "))
    }
}

/// How to choose the spanning tree of the graph on chambers with edges `{i, i^-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeChoice {
    /// Kruskal over edges leaving base chambers, in order of edge id.
    Least,
    /// The given edges, which must leave base chambers.
    Edges(Vec<EdgeId>),
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let n = parent[y];
        parent[y] = r;
        y = n;
    }
    r
}

/// A presentation of the fundamental group of connected data. Generators are the edges of the
/// generating set, named as in the data.
pub fn fundamental_group_presentation(data: &WeylData, tree: &TreeChoice) -> Result<Presentation, PresentationError> {
    if !data.is_connected() {
        return Err(PresentationError::NotConnected);
    }
    let gs = generating_set(data);
    let gens = gs.all();
    let sym: HashMap<EdgeId, usize> = gens.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let generators: Vec<String> = gens.iter().map(|&e| data.edge_name(e).to_string()).collect();
    let mut parent: Vec<usize> = (0..data.n_chambers()).collect();
    let tree_edges: Vec<EdgeId> = match tree {
        TreeChoice::Least => {
            let mut t = Vec::new();
            for &e in &gs.outgoing {
                let (a, b) = (find(&mut parent, data.source(e).idx()), find(&mut parent, data.target(e).idx()));
                if a != b {
                    parent[a] = b;
                    t.push(e);
                }
            }
            t
        }
        TreeChoice::Edges(list) => {
            let out: HashSet<EdgeId> = gs.outgoing.iter().copied().collect();
            for &e in list {
                if !out.contains(&e) {
                    return Err(PresentationError::NotTreeEdge(data.edge_name(e).into()));
                }
                let (a, b) = (find(&mut parent, data.source(e).idx()), find(&mut parent, data.target(e).idx()));
                if a == b {
                    return Err(PresentationError::NotSpanningTree(format!("edge {} closes a cycle", data.edge_name(e))));
                }
                parent[a] = b;
            }
            if list.len() + 1 != data.n_chambers() {
                return Err(PresentationError::NotSpanningTree(format!(
                    "{} edges for {} chambers",
                    list.len(),
                    data.n_chambers()
                )));
            }
            list.clone()
        }
    };
    let mut relators: Vec<Vec<Sym>> = Vec::new();
    for s in 0..data.coxeter().rank() {
        let panel = data.panel(s);
        for &b in &gs.bases[s] {
            let (arrows, _) = panel.groupoid.local_group(b.idx());
            let nontrivial: Vec<EdgeId> = arrows.iter().filter_map(|&a| panel.edge(a)).collect();
            for &x in &nontrivial {
                for &y in &nontrivial {
                    let mut r = vec![Sym::pos(sym[&x]), Sym::pos(sym[&y])];
                    if let Some(z) = data.compose_edges(x, y) {
                        r.push(Sym::pos(sym[&z]).inverse());
                    }
                    relators.push(r);
                }
            }
        }
    }
    for th in data.defining_suites() {
        relators.push(th.iter().flat_map(|&e| gs.expression(data, e)).map(|e| Sym::pos(sym[&e])).collect());
    }
    for &i in &gs.outgoing {
        relators.push(vec![Sym::pos(sym[&i]), Sym::pos(sym[&data.inverse(i)])]);
    }
    for &t in &tree_edges {
        relators.push(vec![Sym::pos(sym[&t])]);
        relators.push(vec![Sym::pos(sym[&data.inverse(t)])]);
    }
    Ok(Presentation { generators, relators })
}

/// Maximal alternating geodesics from a chamber of a rank-2 polygon, paired by homotopy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flower {
    pub chamber: ChamberId,
    pub st: Vec<Gallery>,
    pub ts: Vec<Gallery>,
    /// Pairs `(ρ(s,t), ρ(t,s))` of homotopic geodesics.
    pub petals: Vec<(Gallery, Gallery)>,
}

pub fn flower(fg: &FundamentalGroupoid<'_>, c: ChamberId) -> Result<Flower, PresentationError> {
    let data = fg.data();
    if data.coxeter().rank() != 2 || data.coxeter().order(0, 1).finite().is_none() {
        return Err(PresentationError::NotPolygon);
    }
    let st = data.maximal_geodesics(c, 0, 1);
    let ts = data.maximal_geodesics(c, 1, 0);
    let mut by_class: BTreeMap<Vec<EdgeId>, Vec<Gallery>> = BTreeMap::new();
    for g in &ts {
        by_class.entry(fg.homotopy_class(g)?.canonical.edges).or_default().push(g.clone());
    }
    let mut petals = Vec::new();
    for g in &st {
        let k = fg.homotopy_class(g)?.canonical.edges;
        for o in by_class.get(&k).into_iter().flatten() {
            petals.push((g.clone(), o.clone()));
        }
    }
    Ok(Flower { chamber: c, st, ts, petals })
}

/// The polygon with the same chambers and panels whose defining suites are `ρ ρ'^-1` for the
/// petals of `flower`.
pub fn polygon_from_flower(data: &WeylData, flower: &Flower) -> Result<WeylData, PresentationError> {
    let suites = flower
        .petals
        .iter()
        .map(|(a, b)| {
            let mut v = a.edges.clone();
            v.extend(data.inverse_edges(&b.edges));
            v
        })
        .collect();
    Ok(data.with_suites(suites)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn expressions_recompose() {
        let d = fixtures::fano();
        let gs = generating_set(&d);
        for e in d.edge_ids() {
            let ex = gs.expression(&d, e);
            assert!(!ex.is_empty() && ex.len() <= 3);
            let s = d.edge_type(e);
            let p = d.panel(s);
            let mut a = p.arrow(ex[0]);
            for &x in &ex[1..] {
                a = p.groupoid.compose(a, p.arrow(x)).unwrap();
            }
            assert_eq!(p.edge(a), Some(e));
        }
    }

    #[test]
    fn tietze_dihedral() {
        let d = fixtures::thin_one_chamber(3);
        let p = fundamental_group_presentation(&d, &TreeChoice::Least).unwrap().tietze();
        assert_eq!(p.to_string(), "⟨ a, b | a^2, b^2, (a b)^3 ⟩");
        assert_eq!(p.group_order(1000).unwrap(), 6);
    }

    #[test]
    fn free_reduction() {
        let w = vec![Sym::pos(0), Sym::pos(1), Sym::pos(1).inverse(), Sym::pos(0).inverse(), Sym::pos(2)];
        assert_eq!(free_reduce(&w), vec![Sym::pos(2)]);
    }
}
