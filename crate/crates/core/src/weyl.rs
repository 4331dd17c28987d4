//! Weyl data: chambers, typed edges, panel groupoids and defining suites.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::coxeter::{alternating, CoxeterMatrix, Gen, Word};
use crate::groupoid::{Arrow, FiniteGroupoid, GroupoidError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl ChamberId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ChamberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DataError {
    #[error("duplicate chamber id {0}")]
    DuplicateChamber(String),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("unknown chamber {0}")]
    UnknownChamber(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("unknown type {0}")]
    UnknownType(String),
    #[error("edge {edge}: inverse {inverse} does not reverse it")]
    BadInverse { edge: String, inverse: String },
    #[error("composition ({0}, {1}) -> {2} is not a detour of one panel")]
    BadComposition(String, String, String),
    #[error("composition of ({0}, {1}) is given twice")]
    DuplicateComposition(String, String),
    #[error("composition of detour ({0}, {1}) is missing")]
    MissingComposition(String, String),
    #[error("panel groupoid of type {ty} is invalid: {source}")]
    BadPanel { ty: String, source: GroupoidError },
    #[error("suite {index} is not a gallery")]
    SuiteNotGallery { index: usize },
    #[error("suite {index} is not closed")]
    SuiteNotClosed { index: usize },
    #[error("suite {index} does not have type p_2m(s,t) for a finite m_st")]
    BadSuiteType { index: usize },
    #[error("gallery is not composable at position {0}")]
    NotGallery(usize),
}

impl DataError {
    /// A stable short code for each failed invariant.
    pub fn code(&self) -> &'static str {
        match self {
            DataError::DuplicateChamber(_) => "duplicate-chamber",
            DataError::DuplicateEdge(_) => "duplicate-edge",
            DataError::UnknownChamber(_) => "unknown-chamber",
            DataError::UnknownEdge(_) => "unknown-edge",
            DataError::UnknownType(_) => "unknown-type",
            DataError::BadInverse { .. } => "bad-inverse",
            DataError::BadComposition(..) => "bad-composition",
            DataError::DuplicateComposition(..) => "duplicate-composition",
            DataError::MissingComposition(..) => "missing-composition",
            DataError::BadPanel { .. } => "bad-panel",
            DataError::SuiteNotGallery { .. } => "suite-not-gallery",
            DataError::SuiteNotClosed { .. } => "suite-not-closed",
            DataError::BadSuiteType { .. } => "bad-suite-type",
            DataError::NotGallery(_) => "not-gallery",
        }
    }
}

/// An edge as given to [`WeylData::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub name: String,
    pub source: ChamberId,
    pub target: ChamberId,
    pub ty: Gen,
    pub inverse: EdgeId,
}

pub type Edge = EdgeSpec;

/// The panel groupoid of one type. Arrow `x` for `x < n_chambers` is the identity at chamber
/// `x`; the remaining arrows are the edges of that type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Panel {
    pub groupoid: FiniteGroupoid,
    arrow_of_edge: HashMap<EdgeId, usize>,
    edge_of_arrow: Vec<Option<EdgeId>>,
}

impl Panel {
    pub fn arrow(&self, e: EdgeId) -> usize {
        self.arrow_of_edge[&e]
    }

    pub fn edge(&self, arrow: usize) -> Option<EdgeId> {
        self.edge_of_arrow[arrow]
    }

    /// Chamber sets of the panels of this type.
    pub fn components(&self) -> Vec<Vec<ChamberId>> {
        self.groupoid
            .components()
            .into_iter()
            .map(|c| c.into_iter().map(|x| ChamberId(x as u32)).collect())
            .collect()
    }
}

/// A gallery: a start chamber and a composable sequence of edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gallery {
    pub start: ChamberId,
    pub edges: Vec<EdgeId>,
}

impl Gallery {
    pub fn trivial(c: ChamberId) -> Self {
        Gallery { start: c, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Validated Weyl data over a Coxeter matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylData {
    coxeter: CoxeterMatrix,
    chamber_names: Vec<String>,
    edges: Vec<EdgeSpec>,
    detours: HashMap<(EdgeId, EdgeId), EdgeId>,
    suites: Vec<Vec<EdgeId>>,
    star: Vec<Vec<EdgeId>>,
    panels: Vec<Panel>,
}

impl WeylData {
    /// Validates and builds Weyl data. `detours` lists `(i, i', i;i')` for every pair of
    /// composable edges of one type with `i' != i^-1`.
    pub fn new(
        coxeter: CoxeterMatrix,
        chamber_names: Vec<String>,
        edges: Vec<EdgeSpec>,
        detours: Vec<(EdgeId, EdgeId, EdgeId)>,
        suites: Vec<Vec<EdgeId>>,
    ) -> Result<Self, DataError> {
        let nc = chamber_names.len();
        let ne = edges.len();
        let mut names = HashSet::new();
        for c in &chamber_names {
            if !names.insert(c.as_str()) {
                return Err(DataError::DuplicateChamber(c.clone()));
            }
        }
        let mut names = HashSet::new();
        for e in &edges {
            if !names.insert(e.name.as_str()) {
                return Err(DataError::DuplicateEdge(e.name.clone()));
            }
            if e.source.idx() >= nc {
                return Err(DataError::UnknownChamber(format!("{}", e.source)));
            }
            if e.target.idx() >= nc {
                return Err(DataError::UnknownChamber(format!("{}", e.target)));
            }
            if e.ty >= coxeter.rank() {
                return Err(DataError::UnknownType(format!("{}", e.ty)));
            }
            if e.inverse.idx() >= ne {
                return Err(DataError::UnknownEdge(format!("{}", e.inverse)));
            }
        }
        for e in &edges {
            let inv = &edges[e.inverse.idx()];
            let back = &edges[inv.inverse.idx()];
            if inv.source != e.target || inv.target != e.source || inv.ty != e.ty || back.name != e.name {
                return Err(DataError::BadInverse { edge: e.name.clone(), inverse: inv.name.clone() });
            }
        }
        let name = |e: EdgeId| edges.get(e.idx()).map_or_else(|| format!("{e}"), |x| x.name.clone());
        let mut table = HashMap::new();
        for &(a, b, c) in &detours {
            if a.idx() >= ne || b.idx() >= ne || c.idx() >= ne {
                return Err(DataError::BadComposition(name(a), name(b), name(c)));
            }
            let (ea, eb, ec) = (&edges[a.idx()], &edges[b.idx()], &edges[c.idx()]);
            let ok = ea.ty == eb.ty
                && eb.ty == ec.ty
                && ea.target == eb.source
                && ea.inverse != b
                && ec.source == ea.source
                && ec.target == eb.target;
            if !ok {
                return Err(DataError::BadComposition(name(a), name(b), name(c)));
            }
            if table.insert((a, b), c).is_some() {
                return Err(DataError::DuplicateComposition(name(a), name(b)));
            }
        }
        let mut star = vec![Vec::new(); nc];
        for (i, e) in edges.iter().enumerate() {
            star[e.source.idx()].push(EdgeId(i as u32));
        }
        for s in star.iter_mut() {
            s.sort_by_key(|e| (edges[e.idx()].ty, *e));
        }
        for (i, e) in edges.iter().enumerate() {
            for &j in &star[e.target.idx()] {
                let f = &edges[j.idx()];
                if f.ty == e.ty && e.inverse != j && !table.contains_key(&(EdgeId(i as u32), j)) {
                    return Err(DataError::MissingComposition(e.name.clone(), f.name.clone()));
                }
            }
        }
        let mut panels = Vec::with_capacity(coxeter.rank());
        for s in 0..coxeter.rank() {
            panels.push(build_panel(&coxeter, s, nc, &edges, &table)?);
        }
        let data = WeylData { coxeter, chamber_names, edges, detours: table, suites: Vec::new(), star, panels };
        for (index, suite) in suites.iter().enumerate() {
            if suite.iter().any(|e| e.idx() >= ne) {
                return Err(DataError::SuiteNotGallery { index });
            }
            if suite.is_empty() {
                return Err(DataError::BadSuiteType { index });
            }
            for k in 0..suite.len() - 1 {
                if data.edges[suite[k].idx()].target != data.edges[suite[k + 1].idx()].source {
                    return Err(DataError::SuiteNotGallery { index });
                }
            }
            if data.edges[suite[suite.len() - 1].idx()].target != data.edges[suite[0].idx()].source {
                return Err(DataError::SuiteNotClosed { index });
            }
            let ty: Vec<Gen> = suite.iter().map(|e| data.edges[e.idx()].ty).collect();
            let (s, t) = (ty[0], *ty.get(1).unwrap_or(&ty[0]));
            let m = if s == t { None } else { data.coxeter.order(s, t).finite() };
            if m.is_none_or(|m| Word(ty) != alternating(s, t, 2 * m)) {
                return Err(DataError::BadSuiteType { index });
            }
        }
        Ok(WeylData { suites, ..data })
    }

    /// The same chambers, edges and panels with another list of defining suites.
    pub fn with_suites(&self, suites: Vec<Vec<EdgeId>>) -> Result<WeylData, DataError> {
        let mut detours: Vec<(EdgeId, EdgeId, EdgeId)> =
            self.detours.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        detours.sort();
        WeylData::new(self.coxeter.clone(), self.chamber_names.clone(), self.edges.clone(), detours, suites)
    }

    pub fn coxeter(&self) -> &CoxeterMatrix {
        &self.coxeter
    }

    pub fn n_chambers(&self) -> usize {
        self.chamber_names.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn chambers(&self) -> impl Iterator<Item = ChamberId> {
        (0..self.n_chambers() as u32).map(ChamberId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.n_edges() as u32).map(EdgeId)
    }

    pub fn chamber_name(&self, c: ChamberId) -> &str {
        &self.chamber_names[c.idx()]
    }

    pub fn chamber_names(&self) -> &[String] {
        &self.chamber_names
    }

    pub fn chamber_by_name(&self, name: &str) -> Option<ChamberId> {
        self.chamber_names.iter().position(|c| c == name).map(|i| ChamberId(i as u32))
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(|i| EdgeId(i as u32))
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeSpec {
        &self.edges[e.idx()]
    }

    pub fn edges(&self) -> &[EdgeSpec] {
        &self.edges
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.idx()].name
    }

    pub fn source(&self, e: EdgeId) -> ChamberId {
        self.edges[e.idx()].source
    }

    pub fn target(&self, e: EdgeId) -> ChamberId {
        self.edges[e.idx()].target
    }

    pub fn edge_type(&self, e: EdgeId) -> Gen {
        self.edges[e.idx()].ty
    }

    pub fn inverse(&self, e: EdgeId) -> EdgeId {
        self.edges[e.idx()].inverse
    }

    /// Edges leaving `c`, ordered by type and then id.
    pub fn star(&self, c: ChamberId) -> &[EdgeId] {
        &self.star[c.idx()]
    }

    pub fn edges_from(&self, c: ChamberId, s: Gen) -> impl Iterator<Item = EdgeId> + '_ {
        self.star[c.idx()].iter().copied().filter(move |&e| self.edge_type(e) == s)
    }

    pub fn detours(&self) -> &HashMap<(EdgeId, EdgeId), EdgeId> {
        &self.detours
    }

    pub fn defining_suites(&self) -> &[Vec<EdgeId>] {
        &self.suites
    }

    pub fn panel(&self, s: Gen) -> &Panel {
        &self.panels[s]
    }

    /// `i;i'` in the panel groupoid: `None` for a backtrack, `Some(k)` for a detour.
    ///
    /// Panics if the edges are not composable edges of one type.
    pub fn compose_edges(&self, i: EdgeId, j: EdgeId) -> Option<EdgeId> {
        debug_assert_eq!(self.target(i), self.source(j));
        debug_assert_eq!(self.edge_type(i), self.edge_type(j));
        if self.inverse(i) == j {
            None
        } else {
            Some(self.detours[&(i, j)])
        }
    }

    pub fn try_compose_edges(&self, i: EdgeId, j: EdgeId) -> Result<Option<EdgeId>, DataError> {
        if i.idx() >= self.n_edges() || j.idx() >= self.n_edges() {
            return Err(DataError::UnknownEdge(format!("{}", if i.idx() >= self.n_edges() { i } else { j })));
        }
        if self.target(i) != self.source(j) || self.edge_type(i) != self.edge_type(j) {
            return Err(DataError::NotGallery(0));
        }
        Ok(self.compose_edges(i, j))
    }

    pub fn gallery(&self, start: ChamberId, edges: Vec<EdgeId>) -> Result<Gallery, DataError> {
        if start.idx() >= self.n_chambers() {
            return Err(DataError::UnknownChamber(format!("{start}")));
        }
        let mut at = start;
        for (k, &e) in edges.iter().enumerate() {
            if e.idx() >= self.n_edges() {
                return Err(DataError::UnknownEdge(format!("{e}")));
            }
            if self.source(e) != at {
                return Err(DataError::NotGallery(k));
            }
            at = self.target(e);
        }
        Ok(Gallery { start, edges })
    }

    /// A gallery through the given edges, starting at the source of the first one.
    pub fn gallery_of(&self, edges: &[EdgeId]) -> Gallery {
        Gallery { start: self.source(edges[0]), edges: edges.to_vec() }
    }

    pub fn end(&self, g: &Gallery) -> ChamberId {
        g.edges.last().map_or(g.start, |&e| self.target(e))
    }

    pub fn gallery_type(&self, g: &Gallery) -> Word {
        Word(g.edges.iter().map(|&e| self.edge_type(e)).collect())
    }

    pub fn type_of(&self, edges: &[EdgeId]) -> Word {
        Word(edges.iter().map(|&e| self.edge_type(e)).collect())
    }

    pub fn is_geodesic(&self, g: &Gallery) -> bool {
        self.coxeter.is_reduced(&self.gallery_type(g))
    }

    pub fn inverse_gallery(&self, g: &Gallery) -> Gallery {
        Gallery { start: self.end(g), edges: g.edges.iter().rev().map(|&e| self.inverse(e)).collect() }
    }

    pub fn concat(&self, a: &Gallery, b: &Gallery) -> Gallery {
        debug_assert_eq!(self.end(a), b.start);
        let mut edges = a.edges.clone();
        edges.extend_from_slice(&b.edges);
        Gallery { start: a.start, edges }
    }

    pub fn inverse_edges(&self, edges: &[EdgeId]) -> Vec<EdgeId> {
        edges.iter().rev().map(|&e| self.inverse(e)).collect()
    }

    /// All cyclic rotations of defining suites and of their inverses.
    pub fn suite_closure(&self) -> HashSet<Vec<EdgeId>> {
        let mut out = HashSet::new();
        for th in &self.suites {
            for cyc in [th.clone(), self.inverse_edges(th)] {
                for r in 0..cyc.len() {
                    let mut v = cyc[r..].to_vec();
                    v.extend_from_slice(&cyc[..r]);
                    out.insert(v);
                }
            }
        }
        out
    }

    /// All galleries of the given type from `start`, in lexicographic order of edge ids.
    pub fn galleries_of_type(&self, start: ChamberId, ty: &[Gen]) -> Vec<Gallery> {
        let mut out = vec![Gallery::trivial(start)];
        for &s in ty {
            let mut next = Vec::new();
            for g in &out {
                for e in self.edges_from(self.end(g), s) {
                    let mut h = g.clone();
                    h.edges.push(e);
                    next.push(h);
                }
            }
            out = next;
        }
        out
    }

    /// Maximal `(s,t)`-geodesics from `start`, i.e. galleries of type `p(s,t)`.
    pub fn maximal_geodesics(&self, start: ChamberId, s: Gen, t: Gen) -> Vec<Gallery> {
        match self.coxeter.p(s, t) {
            Some(p) => self.galleries_of_type(start, &p.0),
            None => Vec::new(),
        }
    }

    /// Chambers reachable from `c` by edges with types in `types`, sorted.
    pub fn component(&self, c: ChamberId, types: &[Gen]) -> Vec<ChamberId> {
        let mut seen = vec![false; self.n_chambers()];
        seen[c.idx()] = true;
        let mut queue = VecDeque::from([c]);
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            out.push(x);
            for &e in self.star(x) {
                if types.contains(&self.edge_type(e)) && !seen[self.target(e).idx()] {
                    seen[self.target(e).idx()] = true;
                    queue.push_back(self.target(e));
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n_chambers() <= 1 || {
            let all: Vec<Gen> = (0..self.coxeter.rank()).collect();
            self.component(ChamberId(0), &all).len() == self.n_chambers()
        }
    }

    /// The `J`-residues, one per component, ordered by least chamber.
    pub fn residues_of_type(&self, types: &[Gen]) -> Vec<Vec<ChamberId>> {
        let mut seen = vec![false; self.n_chambers()];
        let mut out = Vec::new();
        for c in self.chambers() {
            if seen[c.idx()] {
                continue;
            }
            let comp = self.component(c, types);
            for x in &comp {
                seen[x.idx()] = true;
            }
            out.push(comp);
        }
        out
    }

    /// The Weyl data of type `M_J` made of `chambers` and the `J`-edges between them.
    fn subdata(&self, types: &[Gen], chambers: &[ChamberId]) -> SubData {
        let coxeter = self.coxeter.restrict(types);
        let local_type: HashMap<Gen, Gen> = types.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let cpos: HashMap<ChamberId, u32> =
            chambers.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        let mut edge_map = Vec::new();
        let mut epos: HashMap<EdgeId, u32> = HashMap::new();
        for e in self.edge_ids() {
            if local_type.contains_key(&self.edge_type(e)) && cpos.contains_key(&self.source(e)) {
                epos.insert(e, edge_map.len() as u32);
                edge_map.push(e);
            }
        }
        let edges = edge_map
            .iter()
            .map(|&e| {
                let x = self.edge(e);
                EdgeSpec {
                    name: x.name.clone(),
                    source: ChamberId(cpos[&x.source]),
                    target: ChamberId(cpos[&x.target]),
                    ty: local_type[&x.ty],
                    inverse: EdgeId(epos[&x.inverse]),
                }
            })
            .collect();
        let mut detours: Vec<(EdgeId, EdgeId, EdgeId)> = self
            .detours
            .iter()
            .filter(|((a, _), _)| epos.contains_key(a))
            .map(|(&(a, b), &c)| (EdgeId(epos[&a]), EdgeId(epos[&b]), EdgeId(epos[&c])))
            .collect();
        detours.sort();
        let suites = self
            .suites
            .iter()
            .filter(|th| th.iter().all(|e| epos.contains_key(e)))
            .map(|th| th.iter().map(|e| EdgeId(epos[e])).collect())
            .collect();
        let names = chambers.iter().map(|&c| self.chamber_name(c).to_string()).collect();
        let data = WeylData::new(coxeter, names, edges, detours, suites).expect("sub-data of valid data");
        SubData { data, types: types.to_vec(), chamber_map: chambers.to_vec(), edge_map }
    }

    /// The `J`-residue containing `c`.
    pub fn residue(&self, types: &[Gen], c: ChamberId) -> SubData {
        self.subdata(types, &self.component(c, types))
    }

    /// All chambers with only the `J`-edges and the `J`-suites.
    pub fn restriction(&self, types: &[Gen]) -> SubData {
        let all: Vec<ChamberId> = self.chambers().collect();
        self.subdata(types, &all)
    }

    /// The defining graph: per generator a panel summary, per finite-order pair a summary of the
    /// rank-2 restriction, and the flag embeddings.
    pub fn defining_graph(&self) -> DefiningGraph {
        let m = &self.coxeter;
        let vertices = (0..m.rank())
            .map(|s| {
                let p = self.panel(s);
                let comps = p.components();
                let local_orders = comps.iter().map(|c| p.groupoid.local_group(c[0].idx()).0.len()).collect();
                GraphVertex {
                    generator: m.label(s).to_string(),
                    panels: comps.len(),
                    arrows: p.groupoid.n_arrows(),
                    panel_sizes: comps.iter().map(Vec::len).collect(),
                    local_group_orders: local_orders,
                }
            })
            .collect();
        let mut edges = Vec::new();
        let mut flags = Vec::new();
        for s in 0..m.rank() {
            for t in s + 1..m.rank() {
                if let Some(order) = m.order(s, t).finite() {
                    let r = self.restriction(&[s, t]);
                    edges.push(GraphEdge {
                        pair: [m.label(s).to_string(), m.label(t).to_string()],
                        order,
                        chambers: r.data.n_chambers(),
                        edges: r.data.n_edges(),
                        suites: r.data.defining_suites().len(),
                        residues: r.data.residues_of_type(&[0, 1]).len(),
                    });
                    for (u, local) in [(s, 0usize), (t, 1usize)] {
                        let arrows = r
                            .data
                            .edge_ids()
                            .filter(|&e| r.data.edge_type(e) == local)
                            .map(|e| (r.data.edge_name(e).to_string(), self.edge_name(r.edge_map[e.idx()]).to_string()))
                            .collect();
                        flags.push(GraphFlag {
                            generator: m.label(u).to_string(),
                            pair: [m.label(s).to_string(), m.label(t).to_string()],
                            embedding: arrows,
                        });
                    }
                }
            }
        }
        DefiningGraph { vertices, edges, flags }
    }

    /// Renames chambers `c0, c1, ...` and edges `e0, e1, ...` in breadth-first order from the
    /// least chamber name, visiting stars by type and then by name.
    pub fn canonicalize(&self) -> (WeylData, Vec<ChamberId>, Vec<EdgeId>) {
        let nc = self.n_chambers();
        let mut corder: Vec<ChamberId> = Vec::with_capacity(nc);
        let mut cnew = vec![u32::MAX; nc];
        let mut eorder: Vec<EdgeId> = Vec::with_capacity(self.n_edges());
        let mut enew = vec![u32::MAX; self.n_edges()];
        let mut by_name: Vec<ChamberId> = self.chambers().collect();
        by_name.sort_by(|a, b| natural_cmp(self.chamber_name(*a), self.chamber_name(*b)));
        for &root in &by_name {
            if cnew[root.idx()] != u32::MAX {
                continue;
            }
            cnew[root.idx()] = corder.len() as u32;
            corder.push(root);
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                let mut star = self.star(x).to_vec();
                star.sort_by(|a, b| {
                    (self.edge_type(*a))
                        .cmp(&self.edge_type(*b))
                        .then_with(|| natural_cmp(self.edge_name(*a), self.edge_name(*b)))
                });
                for e in star {
                    if enew[e.idx()] == u32::MAX {
                        enew[e.idx()] = eorder.len() as u32;
                        eorder.push(e);
                    }
                    let y = self.target(e);
                    if cnew[y.idx()] == u32::MAX {
                        cnew[y.idx()] = corder.len() as u32;
                        corder.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        let edges = eorder
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let x = self.edge(e);
                EdgeSpec {
                    name: format!("e{i}"),
                    source: ChamberId(cnew[x.source.idx()]),
                    target: ChamberId(cnew[x.target.idx()]),
                    ty: x.ty,
                    inverse: EdgeId(enew[x.inverse.idx()]),
                }
            })
            .collect();
        let map_e = |e: &EdgeId| EdgeId(enew[e.idx()]);
        let mut detours: Vec<(EdgeId, EdgeId, EdgeId)> =
            self.detours.iter().map(|((a, b), c)| (map_e(a), map_e(b), map_e(c))).collect();
        detours.sort();
        let mut suites: Vec<Vec<EdgeId>> = self.suites.iter().map(|th| th.iter().map(map_e).collect()).collect();
        suites.sort();
        suites.dedup();
        let names = (0..nc).map(|i| format!("c{i}")).collect();
        let data = WeylData::new(self.coxeter.clone(), names, edges, detours, suites).expect("renaming keeps validity");
        let chamber_map = (0..nc).map(|i| ChamberId(cnew[i])).collect();
        let edge_map = (0..self.n_edges()).map(|i| EdgeId(enew[i])).collect();
        (data, chamber_map, edge_map)
    }
}

/// Compares strings so that digit runs are ordered numerically.
pub fn natural_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    fn key(s: &str) -> Vec<(bool, String)> {
        let mut out: Vec<(bool, String)> = Vec::new();
        for ch in s.chars() {
            let digit = ch.is_ascii_digit();
            match out.last_mut() {
                Some((d, run)) if *d == digit => run.push(ch),
                _ => out.push((digit, ch.to_string())),
            }
        }
        out
    }
    let (ka, kb) = (key(a), key(b));
    for (x, y) in ka.iter().zip(kb.iter()) {
        let ord = match (x.0, y.0) {
            (true, true) => {
                let (xs, ys) = (x.1.trim_start_matches('0'), y.1.trim_start_matches('0'));
                xs.len().cmp(&ys.len()).then_with(|| xs.cmp(ys)).then_with(|| x.1.cmp(&y.1))
            }
            _ => x.1.cmp(&y.1),
        };
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    ka.len().cmp(&kb.len())
}

fn build_panel(
    coxeter: &CoxeterMatrix,
    s: Gen,
    nc: usize,
    edges: &[EdgeSpec],
    detours: &HashMap<(EdgeId, EdgeId), EdgeId>,
) -> Result<Panel, DataError> {
    let mut arrows: Vec<Arrow> = (0..nc).map(|x| Arrow { source: x, target: x }).collect();
    let mut edge_of_arrow: Vec<Option<EdgeId>> = vec![None; nc];
    let mut arrow_of_edge = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        if e.ty == s {
            arrow_of_edge.insert(EdgeId(i as u32), arrows.len());
            edge_of_arrow.push(Some(EdgeId(i as u32)));
            arrows.push(Arrow { source: e.source.idx(), target: e.target.idx() });
        }
    }
    let identity: Vec<usize> = (0..nc).collect();
    let inverse: Vec<usize> = edge_of_arrow
        .iter()
        .enumerate()
        .map(|(a, e)| match e {
            None => a,
            Some(e) => arrow_of_edge[&edges[e.idx()].inverse],
        })
        .collect();
    let mut compose = HashMap::new();
    for (a, ea) in edge_of_arrow.iter().enumerate() {
        let src = arrows[a].source;
        let tgt = arrows[a].target;
        compose.insert((a, tgt), a);
        compose.insert((src, a), a);
        if let Some(ea) = ea {
            for (b, eb) in edge_of_arrow.iter().enumerate() {
                let Some(eb) = eb else { continue };
                if arrows[b].source != tgt {
                    continue;
                }
                if edges[ea.idx()].inverse == *eb {
                    compose.insert((a, b), src);
                } else if let Some(c) = detours.get(&(*ea, *eb)) {
                    compose.insert((a, b), arrow_of_edge[c]);
                }
            }
        }
    }
    let groupoid = FiniteGroupoid::new(nc, arrows, identity, inverse, compose)
        .map_err(|source| DataError::BadPanel { ty: coxeter.label(s).to_string(), source })?;
    Ok(Panel { groupoid, arrow_of_edge, edge_of_arrow })
}

/// Sub-data together with its embedding into the ambient data.
#[derive(Debug, Clone)]
pub struct SubData {
    pub data: WeylData,
    /// Ambient generators, indexed by local generator.
    pub types: Vec<Gen>,
    pub chamber_map: Vec<ChamberId>,
    pub edge_map: Vec<EdgeId>,
}

impl SubData {
    pub fn local_chamber(&self, c: ChamberId) -> Option<ChamberId> {
        self.chamber_map.iter().position(|&x| x == c).map(|i| ChamberId(i as u32))
    }

    pub fn local_edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.edge_map.iter().position(|&x| x == e).map(|i| EdgeId(i as u32))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GraphVertex {
    pub generator: String,
    pub panels: usize,
    pub arrows: usize,
    pub panel_sizes: Vec<usize>,
    pub local_group_orders: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GraphEdge {
    pub pair: [String; 2],
    pub order: usize,
    pub chambers: usize,
    pub edges: usize,
    pub suites: usize,
    pub residues: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GraphFlag {
    pub generator: String,
    pub pair: [String; 2],
    /// Edge names in the rank-2 restriction mapped to edge names in the data.
    pub embedding: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DefiningGraph {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
    pub flags: Vec<GraphFlag>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Order;

    fn one_chamber(m: u32) -> WeylData {
        let cox = CoxeterMatrix::dihedral(Order::Finite(m));
        let edges = vec![
            EdgeSpec { name: "a".into(), source: ChamberId(0), target: ChamberId(0), ty: 0, inverse: EdgeId(0) },
            EdgeSpec { name: "b".into(), source: ChamberId(0), target: ChamberId(0), ty: 1, inverse: EdgeId(1) },
        ];
        let suite = (0..2 * m).map(|k| EdgeId(k % 2)).collect();
        WeylData::new(cox, vec!["c0".into()], edges, vec![], vec![suite]).unwrap()
    }

    #[test]
    fn builds_one_chamber_datum() {
        let d = one_chamber(3);
        assert_eq!(d.panel(0).groupoid.n_arrows(), 2);
        assert_eq!(d.compose_edges(EdgeId(0), EdgeId(0)), None);
        assert_eq!(d.suite_closure().len(), 2);
        assert_eq!(d.maximal_geodesics(ChamberId(0), 0, 1).len(), 1);
    }

    #[test]
    fn rejects_bad_inverse_and_suite() {
        let cox = CoxeterMatrix::dihedral(Order::Finite(3));
        let edges = vec![
            EdgeSpec { name: "a".into(), source: ChamberId(0), target: ChamberId(0), ty: 0, inverse: EdgeId(1) },
            EdgeSpec { name: "b".into(), source: ChamberId(0), target: ChamberId(0), ty: 1, inverse: EdgeId(1) },
        ];
        let err = WeylData::new(cox.clone(), vec!["c0".into()], edges, vec![], vec![]).unwrap_err();
        assert_eq!(err.code(), "bad-inverse");
        let edges = vec![
            EdgeSpec { name: "a".into(), source: ChamberId(0), target: ChamberId(0), ty: 0, inverse: EdgeId(0) },
            EdgeSpec { name: "b".into(), source: ChamberId(0), target: ChamberId(0), ty: 1, inverse: EdgeId(1) },
        ];
        let suite = vec![EdgeId(0), EdgeId(1), EdgeId(0), EdgeId(1)];
        let err = WeylData::new(cox, vec!["c0".into()], edges, vec![], vec![suite]).unwrap_err();
        assert_eq!(err.code(), "bad-suite-type");
    }

    #[test]
    fn missing_detour_detected() {
        let cox = CoxeterMatrix::dihedral(Order::Finite(2));
        let edges = vec![
            EdgeSpec { name: "a".into(), source: ChamberId(0), target: ChamberId(0), ty: 0, inverse: EdgeId(1) },
            EdgeSpec { name: "a2".into(), source: ChamberId(0), target: ChamberId(0), ty: 0, inverse: EdgeId(0) },
            EdgeSpec { name: "b".into(), source: ChamberId(0), target: ChamberId(0), ty: 1, inverse: EdgeId(2) },
        ];
        let err = WeylData::new(cox.clone(), vec!["c0".into()], edges.clone(), vec![], vec![]).unwrap_err();
        assert_eq!(err.code(), "missing-composition");
        let det = vec![(EdgeId(0), EdgeId(0), EdgeId(1)), (EdgeId(1), EdgeId(1), EdgeId(0))];
        let d = WeylData::new(cox, vec!["c0".into()], edges, det, vec![]).unwrap();
        assert_eq!(d.panel(0).groupoid.local_group(0).1.order(), 3);
    }

    #[test]
    fn natural_order() {
        assert_eq!(natural_cmp("c2", "c10"), std::cmp::Ordering::Less);
        assert_eq!(natural_cmp("a", "b"), std::cmp::Ordering::Less);
    }
}
