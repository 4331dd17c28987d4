//! Strict homotopy of galleries, contraction to geodesics, and homotopy classes.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};
use std::rc::Rc;

use thiserror::Error;

use crate::axioms::{Certified, Level};
use crate::coset::{self, CosetError, CosetTable, Letter, Relator};
use crate::coxeter::{alternating, CoxeterElement, Gen, Side, Word};
use crate::weyl::{ChamberId, EdgeId, Gallery, WeylData};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("no member of the strict class of {gallery:?} ends with an edge of type {ty}")]
    MissingPartner { gallery: Vec<EdgeId>, ty: Gen },
    #[error("homotopy classes need certified Weyl data, got level {0:?}")]
    NotWeyl(Level),
    #[error("galleries have different extremities")]
    DifferentExtremities,
    #[error("not an (s,t)-cycle")]
    NotCycle,
    #[error("galleries are not composable")]
    NotComposable,
}

/// For each maximal alternating geodesic, the opposite geodesics it is paired with.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteIndex {
    partners: HashMap<Vec<EdgeId>, Vec<Vec<EdgeId>>>,
}

impl SuiteIndex {
    /// Pairs `ρ` with `ρ'` whenever `ρ ρ'^-1` is a cyclic rotation of a defining suite or of
    /// its inverse.
    pub fn structural(data: &WeylData) -> Self {
        let mut idx = SuiteIndex::default();
        for cyc in data.suite_closure() {
            let m = cyc.len() / 2;
            let rho = cyc[..m].to_vec();
            let other = data.inverse_edges(&cyc[m..]);
            idx.add(rho, other);
        }
        idx.sort();
        idx
    }

    pub fn add(&mut self, rho: Vec<EdgeId>, partner: Vec<EdgeId>) {
        let v = self.partners.entry(rho).or_default();
        if !v.contains(&partner) {
            v.push(partner);
        }
    }

    pub fn sort(&mut self) {
        for v in self.partners.values_mut() {
            v.sort();
        }
    }

    pub fn partners(&self, rho: &[EdgeId]) -> &[Vec<EdgeId>] {
        self.partners.get(rho).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.partners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partners.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<EdgeId>, &Vec<Vec<EdgeId>>)> {
        self.partners.iter()
    }
}

type Class = Rc<Vec<Vec<EdgeId>>>;

/// Strict homotopies and gallery contraction over a suite index.
pub struct Homotopy<'a> {
    data: &'a WeylData,
    index: &'a SuiteIndex,
    cache: RefCell<HashMap<(ChamberId, Vec<EdgeId>), Class>>,
}

impl<'a> Homotopy<'a> {
    pub fn new(data: &'a WeylData, index: &'a SuiteIndex) -> Self {
        Homotopy { data, index, cache: RefCell::default() }
    }

    pub fn data(&self) -> &'a WeylData {
        self.data
    }

    fn key(&self, edges: &[EdgeId]) -> (Word, Vec<EdgeId>) {
        (self.data.type_of(edges), edges.to_vec())
    }

    /// Galleries obtained from `edges` by one strict move.
    pub fn strict_neighbours(&self, edges: &[EdgeId]) -> Vec<Vec<EdgeId>> {
        let cox = self.data.coxeter();
        let ty: Vec<Gen> = edges.iter().map(|&e| self.data.edge_type(e)).collect();
        let mut out = Vec::new();
        for i in 0..edges.len().saturating_sub(1) {
            let (s, t) = (ty[i], ty[i + 1]);
            if s == t {
                continue;
            }
            let Some(m) = cox.order(s, t).finite() else { continue };
            if i + m > edges.len() || ty[i..i + m] != alternating(s, t, m).0[..] {
                continue;
            }
            for p in self.index.partners(&edges[i..i + m]) {
                let mut v = edges[..i].to_vec();
                v.extend_from_slice(p);
                v.extend_from_slice(&edges[i + m..]);
                out.push(v);
            }
        }
        out
    }

    fn class_edges(&self, start: ChamberId, edges: &[EdgeId]) -> Class {
        if edges.len() < 2 {
            return Rc::new(vec![edges.to_vec()]);
        }
        let k = (start, edges.to_vec());
        if let Some(c) = self.cache.borrow().get(&k) {
            return Rc::clone(c);
        }
        let mut seen: HashSet<Vec<EdgeId>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(edges.to_vec());
        queue.push_back(edges.to_vec());
        while let Some(u) = queue.pop_front() {
            for v in self.strict_neighbours(&u) {
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
        let mut class: Vec<Vec<EdgeId>> = seen.into_iter().collect();
        class.sort_by_cached_key(|e| self.key(e));
        let class = Rc::new(class);
        let mut cache = self.cache.borrow_mut();
        if cache.len() > 1 << 16 {
            cache.clear();
        }
        for u in class.iter() {
            cache.insert((start, u.clone()), Rc::clone(&class));
        }
        class
    }

    /// The strict class of `g`, ordered by type (ShortLex) and then by edge ids.
    pub fn strict_class(&self, g: &Gallery) -> Vec<Gallery> {
        self.class_edges(g.start, &g.edges)
            .iter()
            .map(|e| Gallery { start: g.start, edges: e.clone() })
            .collect()
    }

    /// The least member of the strict class.
    pub fn strict_canonical(&self, g: &Gallery) -> Gallery {
        Gallery { start: g.start, edges: self.class_edges(g.start, &g.edges)[0].clone() }
    }

    /// A geodesic homotopic to `g`, built edge by edge: an edge that would not extend the
    /// current geodesic is absorbed into the last edge of a strictly homotopic geodesic.
    pub fn reduce_to_geodesic(&self, g: &Gallery) -> Result<Gallery, HomotopyError> {
        self.reduce_onto(Gallery::trivial(g.start), CoxeterElement::identity(), &g.edges).map(|x| x.0)
    }

    /// Extends the geodesic `geo` (of W-length `w`) by `rest`, keeping it geodesic.
    pub fn reduce_onto(
        &self,
        geo: Gallery,
        mut w: CoxeterElement,
        rest: &[EdgeId],
    ) -> Result<(Gallery, CoxeterElement), HomotopyError> {
        let cox = self.data.coxeter();
        let mut cur = geo.edges;
        for &i in rest {
            let s = self.data.edge_type(i);
            if cox.length_dichotomy(&w, s, Side::Right) > 0 {
                cur.push(i);
                w = cox.multiply_gen(&w, s);
                continue;
            }
            let class = self.class_edges(geo.start, &cur);
            let member = class
                .iter()
                .find(|m| m.last().map(|&e| self.data.edge_type(e)) == Some(s))
                .ok_or_else(|| HomotopyError::MissingPartner { gallery: cur.clone(), ty: s })?;
            let j = *member.last().expect("nonempty");
            let mut alpha = member[..member.len() - 1].to_vec();
            match self.data.compose_edges(j, i) {
                None => w = cox.multiply_gen(&w, s),
                Some(k) => alpha.push(k),
            }
            cur = alpha;
        }
        Ok((Gallery { start: geo.start, edges: cur }, w))
    }

    /// Last edges of members of the strict class of `g` whose last edge has type `s`.
    pub fn end_edges(&self, g: &Gallery, s: Gen) -> HashSet<EdgeId> {
        self.class_edges(g.start, &g.edges)
            .iter()
            .filter_map(|m| m.last().copied())
            .filter(|&e| self.data.edge_type(e) == s)
            .collect()
    }
}

/// A homotopy class of galleries, represented by its least geodesic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomotopyClass {
    pub canonical: Gallery,
    pub end: ChamberId,
    pub w_length: CoxeterElement,
}

impl HomotopyClass {
    pub fn start(&self) -> ChamberId {
        self.canonical.start
    }
}

/// Homotopy classes of galleries in certified Weyl data.
pub struct FundamentalGroupoid<'a> {
    hom: Homotopy<'a>,
}

impl<'a> FundamentalGroupoid<'a> {
    pub fn new(cert: &'a Certified) -> Result<Self, HomotopyError> {
        if cert.report.level < Level::Weyl {
            return Err(HomotopyError::NotWeyl(cert.report.level));
        }
        Ok(FundamentalGroupoid { hom: Homotopy::new(&cert.data, &cert.index) })
    }

    pub fn homotopy(&self) -> &Homotopy<'a> {
        &self.hom
    }

    pub fn data(&self) -> &'a WeylData {
        self.hom.data
    }

    pub fn homotopy_class(&self, g: &Gallery) -> Result<HomotopyClass, HomotopyError> {
        let (geo, w) = self.hom.reduce_onto(Gallery::trivial(g.start), CoxeterElement::identity(), &g.edges)?;
        let canonical = self.hom.strict_canonical(&geo);
        Ok(HomotopyClass { end: self.hom.data.end(&canonical), canonical, w_length: w })
    }

    pub fn identity_class(&self, c: ChamberId) -> HomotopyClass {
        HomotopyClass { canonical: Gallery::trivial(c), end: c, w_length: CoxeterElement::identity() }
    }

    pub fn compose(&self, a: &HomotopyClass, b: &HomotopyClass) -> Result<HomotopyClass, HomotopyError> {
        if a.end != b.start() {
            return Err(HomotopyError::NotComposable);
        }
        let (geo, w) = self.hom.reduce_onto(a.canonical.clone(), a.w_length.clone(), &b.canonical.edges)?;
        let canonical = self.hom.strict_canonical(&geo);
        Ok(HomotopyClass { end: self.hom.data.end(&canonical), canonical, w_length: w })
    }

    pub fn invert(&self, a: &HomotopyClass) -> Result<HomotopyClass, HomotopyError> {
        self.homotopy_class(&self.hom.data.inverse_gallery(&a.canonical))
    }

    /// The W-valued distance of a class: the type of any geodesic in it.
    pub fn metrize(&self, a: &HomotopyClass) -> CoxeterElement {
        a.w_length.clone()
    }

    pub fn homotopic(&self, a: &Gallery, b: &Gallery) -> Result<bool, HomotopyError> {
        if a.start != b.start || self.hom.data.end(a) != self.hom.data.end(b) {
            return Ok(false);
        }
        Ok(self.homotopy_class(a)? == self.homotopy_class(b)?)
    }

    /// Whether the `(s,t)`-cycle `theta` is null-homotopic.
    pub fn is_suite(&self, theta: &[EdgeId]) -> Result<bool, HomotopyError> {
        let (rho, other) = split_cycle(self.hom.data, theta).ok_or(HomotopyError::NotCycle)?;
        self.homotopic(&rho, &other)
    }
}

/// Splits an `(s,t)`-cycle `ρ ρ'^-1` into `ρ` and `ρ'`.
pub fn split_cycle(data: &WeylData, theta: &[EdgeId]) -> Option<(Gallery, Gallery)> {
    if theta.is_empty() || theta.len() % 2 == 1 {
        return None;
    }
    let ty = data.type_of(theta);
    let (s, t) = (ty.0[0], ty.0[1]);
    let m = data.coxeter().order(s, t).finite()?;
    if s == t || ty != alternating(s, t, 2 * m) || data.target(theta[theta.len() - 1]) != data.source(theta[0]) {
        return None;
    }
    for k in 0..theta.len() - 1 {
        if data.target(theta[k]) != data.source(theta[k + 1]) {
            return None;
        }
    }
    let rho = data.gallery_of(&theta[..m]);
    let other = Gallery { start: rho.start, edges: data.inverse_edges(&theta[m..]) };
    Some((rho, other))
}

/// The universal cover of connected data computed by coset enumeration: cosets are homotopy
/// classes of galleries from a base chamber.
pub struct HomotopyTable {
    table: CosetTable,
    base: ChamberId,
}

impl HomotopyTable {
    pub fn build(data: &WeylData, base: ChamberId, cap: usize) -> Result<Self, CosetError> {
        let letters: Vec<Letter> = data
            .edges()
            .iter()
            .map(|e| Letter { source: e.source.idx(), target: e.target.idx(), inverse: e.inverse.idx() })
            .collect();
        let mut relators = Vec::new();
        let mut det: Vec<_> = data.detours().iter().collect();
        det.sort();
        for (&(a, b), &c) in det {
            relators.push(Relator { start: data.source(a).idx(), word: vec![a.idx(), b.idx(), data.inverse(c).idx()] });
        }
        for th in data.defining_suites() {
            relators.push(Relator { start: data.source(th[0]).idx(), word: th.iter().map(|e| e.idx()).collect() });
        }
        let table = coset::enumerate(data.n_chambers(), &letters, &relators, base.idx(), cap)?;
        Ok(HomotopyTable { table, base })
    }

    pub fn base(&self) -> ChamberId {
        self.base
    }

    /// Number of homotopy classes of galleries from the base chamber.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn chamber(&self, coset: usize) -> ChamberId {
        ChamberId(self.table.vertex(coset) as u32)
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    /// Endpoint of the lift of `g` starting at `coset`.
    pub fn lift_end(&self, coset: usize, g: &Gallery) -> usize {
        let w: Vec<usize> = g.edges.iter().map(|e| e.idx()).collect();
        self.table.trace(coset, &w)
    }

    /// Decides homotopy of galleries with a common start chamber in the component of the base.
    pub fn homotopic(&self, data: &WeylData, a: &Gallery, b: &Gallery) -> bool {
        if a.start != b.start || data.end(a) != data.end(b) {
            return false;
        }
        let Some(c) = self.table.first_over(a.start.idx()) else { return false };
        self.lift_end(c, a) == self.lift_end(c, b)
    }
}
