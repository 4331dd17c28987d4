//! Finite groupoids, their coverings, free actions and quotients.
//!
//! Arrows compose left to right: `compose(a, b)` is defined when `target(a) == source(b)`
//! and means "first `a`, then `b`".

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("group table is not square or references unknown elements")]
    BadTable,
    #[error("group table has no identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("arrow {0} references an unknown vertex")]
    UnknownVertex(usize),
    #[error("identity of vertex {0} is not a loop at that vertex")]
    BadIdentity(usize),
    #[error("composition ({0}, {1}) is missing")]
    MissingComposition(usize, usize),
    #[error("composition ({0}, {1}) has wrong endpoints")]
    CompositionEndpoints(usize, usize),
    #[error("arrow {0} has a bad inverse")]
    BadInverse(usize),
    #[error("identity law fails for arrow {0}")]
    IdentityLaw(usize),
    #[error("composition is not associative at ({0}, {1}, {2})")]
    CompositionNotAssociative(usize, usize, usize),
    #[error("groupoid is not connected")]
    NotConnected,
    #[error("arrows {0:?} do not form a subgroup of the local group")]
    NotSubgroup(Vec<usize>),
    #[error("map is not a homomorphism at arrow {0}")]
    NotHomomorphism(usize),
    #[error("map does not preserve composition of ({0}, {1})")]
    CompositionNotPreserved(usize, usize),
    #[error("vertex {0} is not in the image")]
    NotSurjective(usize),
    #[error("star of vertex {0} is not mapped bijectively")]
    StarNotBijective(usize),
    #[error("action of element {element} is not an automorphism")]
    NotAutomorphism { element: usize },
    #[error("action is not compatible with the group law at ({0}, {1})")]
    NotAnAction(usize, usize),
    #[error("element {element} fixes vertex {vertex}")]
    NotFree { element: usize, vertex: usize },
    #[error("wrong number of images for element {0}")]
    WrongImageCount(usize),
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(mul: Vec<Vec<usize>>) -> Result<Self, GroupoidError> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupoidError::BadTable);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or(GroupoidError::NoIdentity)?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or(GroupoidError::NoInverse(a))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(GroupoidError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(GroupTable { mul, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable::new(mul).expect("cyclic group")
    }

    pub fn trivial() -> Self {
        GroupTable::cyclic(1)
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::new();
        set.insert(self.identity);
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(a, g);
                if set.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: HashSet<usize> = elems.iter().copied().collect();
        set.contains(&self.identity)
            && elems.iter().all(|&a| elems.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    /// All subgroups, each sorted, in increasing order of size.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let start = vec![self.identity];
        found.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.closure(&gens);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut v: Vec<Vec<usize>> = found.into_iter().collect();
        v.sort_by_key(|h| (h.len(), h.clone()));
        v
    }

    pub fn conjugate(&self, h: &[usize], g: usize) -> Vec<usize> {
        let mut v: Vec<usize> = h.iter().map(|&x| self.mul(self.mul(self.inv(g), x), g)).collect();
        v.sort();
        v
    }

    /// One representative per conjugacy class of subgroups.
    pub fn subgroups_up_to_conjugacy(&self) -> Vec<Vec<usize>> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut reps = Vec::new();
        for h in self.subgroups() {
            if seen.contains(&h) {
                continue;
            }
            for g in 0..self.order() {
                seen.insert(self.conjugate(&h, g));
            }
            reps.push(h);
        }
        reps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

/// A finite groupoid on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    n_vertices: usize,
    arrows: Vec<Arrow>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    star: Vec<Vec<usize>>,
}

impl FiniteGroupoid {
    /// Builds and validates a groupoid. `compose` must contain every composable pair.
    pub fn new(
        n_vertices: usize,
        arrows: Vec<Arrow>,
        identity: Vec<usize>,
        inverse: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self, GroupoidError> {
        let na = arrows.len();
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= n_vertices || a.target >= n_vertices {
                return Err(GroupoidError::UnknownVertex(i));
            }
        }
        if identity.len() != n_vertices {
            return Err(GroupoidError::BadIdentity(identity.len().min(n_vertices)));
        }
        for (x, &e) in identity.iter().enumerate() {
            if e >= na || arrows[e].source != x || arrows[e].target != x {
                return Err(GroupoidError::BadIdentity(x));
            }
        }
        if inverse.len() != na {
            return Err(GroupoidError::BadInverse(inverse.len().min(na)));
        }
        let mut star = vec![Vec::new(); n_vertices];
        for (i, a) in arrows.iter().enumerate() {
            star[a.source].push(i);
        }
        let g = FiniteGroupoid { n_vertices, arrows, identity, inverse, compose, star };
        for a in 0..na {
            for &b in &g.star[g.arrows[a].target] {
                let c = *g.compose.get(&(a, b)).ok_or(GroupoidError::MissingComposition(a, b))?;
                if c >= na || g.arrows[c].source != g.arrows[a].source || g.arrows[c].target != g.arrows[b].target {
                    return Err(GroupoidError::CompositionEndpoints(a, b));
                }
            }
        }
        for a in 0..na {
            let Arrow { source, target } = g.arrows[a];
            if g.compose[&(g.identity[source], a)] != a || g.compose[&(a, g.identity[target])] != a {
                return Err(GroupoidError::IdentityLaw(a));
            }
            let b = g.inverse[a];
            if b >= na
                || g.arrows[b].source != target
                || g.arrows[b].target != source
                || g.compose[&(a, b)] != g.identity[source]
                || g.compose[&(b, a)] != g.identity[target]
            {
                return Err(GroupoidError::BadInverse(a));
            }
        }
        for a in 0..na {
            for &b in &g.star[g.arrows[a].target] {
                let ab = g.compose[&(a, b)];
                for &c in &g.star[g.arrows[b].target] {
                    if g.compose[&(ab, c)] != g.compose[&(a, g.compose[&(b, c)])] {
                        return Err(GroupoidError::CompositionNotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(g)
    }

    /// The one-vertex groupoid of a group; arrow `k` is element `k`.
    pub fn from_group(group: &GroupTable) -> Self {
        FiniteGroupoid::product(group, 1)
    }

    /// The connected setoid on `n` vertices; arrow `i * n + j` goes from `i` to `j`.
    pub fn pair(n: usize) -> Self {
        FiniteGroupoid::product(&GroupTable::trivial(), n)
    }

    /// `group × pair(n)`: arrow `(k * n + i) * n + j` is `(k, i, j)`.
    pub fn product(group: &GroupTable, n: usize) -> Self {
        let q = group.order();
        let id = |k: usize, i: usize, j: usize| (k * n + i) * n + j;
        let mut arrows = Vec::with_capacity(q * n * n);
        let mut inverse = Vec::with_capacity(q * n * n);
        for k in 0..q {
            for i in 0..n {
                for j in 0..n {
                    arrows.push(Arrow { source: i, target: j });
                    inverse.push(id(group.inv(k), j, i));
                }
            }
        }
        let identity = (0..n).map(|i| id(group.identity(), i, i)).collect();
        let mut compose = HashMap::new();
        for k in 0..q {
            for l in 0..q {
                for i in 0..n {
                    for j in 0..n {
                        for m in 0..n {
                            compose.insert((id(k, i, j), id(l, j, m)), id(group.mul(k, l), i, m));
                        }
                    }
                }
            }
        }
        FiniteGroupoid::new(n, arrows, identity, inverse, compose).expect("product groupoid")
    }

    pub fn disjoint_union(parts: &[FiniteGroupoid]) -> Self {
        let mut arrows = Vec::new();
        let mut identity = Vec::new();
        let mut inverse = Vec::new();
        let mut compose = HashMap::new();
        let (mut voff, mut aoff) = (0, 0);
        for g in parts {
            for a in &g.arrows {
                arrows.push(Arrow { source: a.source + voff, target: a.target + voff });
            }
            identity.extend(g.identity.iter().map(|&e| e + aoff));
            inverse.extend(g.inverse.iter().map(|&e| e + aoff));
            for (&(a, b), &c) in &g.compose {
                compose.insert((a + aoff, b + aoff), c + aoff);
            }
            voff += g.n_vertices;
            aoff += g.arrows.len();
        }
        FiniteGroupoid::new(voff, arrows, identity, inverse, compose).expect("disjoint union")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, a: usize) -> Arrow {
        self.arrows[a]
    }

    pub fn source(&self, a: usize) -> usize {
        self.arrows[a].source
    }

    pub fn target(&self, a: usize) -> usize {
        self.arrows[a].target
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn is_identity(&self, a: usize) -> bool {
        self.identity[self.arrows[a].source] == a
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.compose.get(&(a, b)).copied()
    }

    /// Arrows with source `x`.
    pub fn star(&self, x: usize) -> &[usize] {
        &self.star[x]
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.star[x].iter().copied().filter(|&a| self.arrows[a].target == y).collect()
    }

    /// Vertex sets of the connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n_vertices];
        let mut out = Vec::new();
        for x in 0..self.n_vertices {
            if comp[x] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut verts = Vec::new();
            let mut queue = VecDeque::from([x]);
            comp[x] = id;
            while let Some(v) = queue.pop_front() {
                verts.push(v);
                for &a in &self.star[v] {
                    let w = self.arrows[a].target;
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            verts.sort();
            out.push(verts);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n_vertices <= 1 || self.components().len() == 1
    }

    pub fn is_setoid(&self) -> bool {
        (0..self.n_vertices).all(|x| self.hom(x, x).len() == 1)
    }

    /// The local group at `x`: its arrows (identity first, then by id) and a table indexed by
    /// positions in that list.
    pub fn local_group(&self, x: usize) -> (Vec<usize>, GroupTable) {
        let mut loops = self.hom(x, x);
        loops.sort_by_key(|&a| (a != self.identity[x], a));
        let pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mul = loops
            .iter()
            .map(|&a| loops.iter().map(|&b| pos[&self.compose[&(a, b)]]).collect())
            .collect();
        (loops, GroupTable::new(mul).expect("local group of a groupoid"))
    }

    /// Subgroups of the local group at `x` up to conjugacy, as sets of arrows.
    pub fn subgroups_up_to_conjugacy(&self, x: usize) -> Vec<Vec<usize>> {
        let (loops, table) = self.local_group(x);
        table
            .subgroups_up_to_conjugacy()
            .into_iter()
            .map(|h| {
                let mut v: Vec<usize> = h.into_iter().map(|i| loops[i]).collect();
                v.sort();
                v
            })
            .collect()
    }
}

/// A map of groupoids given on vertices and arrows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub vertex_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl Morphism {
    pub fn identity(g: &FiniteGroupoid) -> Self {
        Morphism { vertex_map: (0..g.n_vertices()).collect(), arrow_map: (0..g.n_arrows()).collect() }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Morphism) -> Morphism {
        Morphism {
            vertex_map: self.vertex_map.iter().map(|&v| other.vertex_map[v]).collect(),
            arrow_map: self.arrow_map.iter().map(|&a| other.arrow_map[a]).collect(),
        }
    }
}

pub fn is_homomorphism(src: &FiniteGroupoid, tgt: &FiniteGroupoid, f: &Morphism) -> Result<(), GroupoidError> {
    if f.vertex_map.len() != src.n_vertices() || f.arrow_map.len() != src.n_arrows() {
        return Err(GroupoidError::NotHomomorphism(0));
    }
    for a in 0..src.n_arrows() {
        let b = f.arrow_map[a];
        if b >= tgt.n_arrows()
            || tgt.source(b) != f.vertex_map[src.source(a)]
            || tgt.target(b) != f.vertex_map[src.target(a)]
        {
            return Err(GroupoidError::NotHomomorphism(a));
        }
    }
    for x in 0..src.n_vertices() {
        if f.arrow_map[src.identity(x)] != tgt.identity(f.vertex_map[x]) {
            return Err(GroupoidError::NotHomomorphism(src.identity(x)));
        }
    }
    for a in 0..src.n_arrows() {
        for &b in src.star(src.target(a)) {
            let c = src.compose(a, b).expect("composable");
            if tgt.compose(f.arrow_map[a], f.arrow_map[b]) != Some(f.arrow_map[c]) {
                return Err(GroupoidError::CompositionNotPreserved(a, b));
            }
        }
    }
    Ok(())
}

/// Checks that `p` is a covering: a surjective homomorphism that is bijective on every star.
pub fn is_covering(src: &FiniteGroupoid, tgt: &FiniteGroupoid, p: &Morphism) -> Result<(), GroupoidError> {
    is_homomorphism(src, tgt, p)?;
    let hit: HashSet<usize> = p.vertex_map.iter().copied().collect();
    if let Some(y) = (0..tgt.n_vertices()).find(|y| !hit.contains(y)) {
        return Err(GroupoidError::NotSurjective(y));
    }
    for x in 0..src.n_vertices() {
        let img: HashSet<usize> = src.star(x).iter().map(|&a| p.arrow_map[a]).collect();
        if img.len() != src.star(x).len() || img.len() != tgt.star(p.vertex_map[x]).len() {
            return Err(GroupoidError::StarNotBijective(x));
        }
    }
    Ok(())
}

/// The covering of a connected groupoid attached to a subgroup `h` of the local group at `x`.
///
/// Vertices are right cosets `Hg` for arrows `g` leaving `x`, with the least arrow of each
/// coset as representative (the identity for `H` itself). Arrows are triples `(h, Hg, Hg')`.
pub fn covering_at_subgroup(
    g: &FiniteGroupoid,
    x: usize,
    h: &[usize],
) -> Result<(FiniteGroupoid, Morphism), GroupoidError> {
    if !g.is_connected() {
        return Err(GroupoidError::NotConnected);
    }
    let (loops, table) = g.local_group(x);
    let pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let hpos: Option<Vec<usize>> = h.iter().map(|a| pos.get(a).copied()).collect();
    let mut hsorted: Vec<usize> = h.to_vec();
    hsorted.sort();
    hsorted.dedup();
    match hpos {
        Some(p) if table.is_subgroup(&p) => {}
        _ => return Err(GroupoidError::NotSubgroup(hsorted)),
    }
    let mut coset_of: HashMap<usize, usize> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut star: Vec<usize> = g.star(x).to_vec();
    star.sort_by_key(|&a| (a != g.identity(x), a));
    for &a in &star {
        if coset_of.contains_key(&a) {
            continue;
        }
        let id = reps.len();
        reps.push(a);
        for &k in &hsorted {
            coset_of.insert(g.compose(k, a).expect("h is a loop at x"), id);
        }
    }
    let nv = reps.len();
    let mut hs: Vec<usize> = hsorted.clone();
    hs.sort_by_key(|&a| (a != g.identity(x), a));
    let hidx: HashMap<usize, usize> = hs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let nh = hs.len();
    let id = |k: usize, i: usize, j: usize| (k * nv + i) * nv + j;
    let mut arrows = Vec::new();
    let mut inverse = Vec::new();
    let mut proj = Vec::new();
    for &k in &hs {
        for i in 0..nv {
            for j in 0..nv {
                arrows.push(Arrow { source: i, target: j });
                inverse.push(id(hidx[&g.inverse(k)], j, i));
                let down = g.compose(g.compose(g.inverse(reps[i]), k).unwrap(), reps[j]).unwrap();
                proj.push(down);
            }
        }
    }
    let mut compose = HashMap::new();
    for (ki, &k) in hs.iter().enumerate() {
        for (li, &l) in hs.iter().enumerate() {
            let kl = hidx[&g.compose(k, l).unwrap()];
            for i in 0..nv {
                for j in 0..nv {
                    for m in 0..nv {
                        compose.insert((id(ki, i, j), id(li, j, m)), id(kl, i, m));
                    }
                }
            }
        }
    }
    let identity = (0..nv).map(|i| id(0, i, i)).collect();
    let cover = FiniteGroupoid::new(nv, arrows, identity, inverse, compose)?;
    let vertex_map = reps.iter().map(|&a| g.target(a)).collect();
    let p = Morphism { vertex_map, arrow_map: proj };
    debug_assert!(nh * nv * nv == cover.n_arrows());
    Ok((cover, p))
}

/// A group acting on a groupoid by automorphisms, element by element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    pub group: GroupTable,
    pub vertex_images: Vec<Vec<usize>>,
    pub arrow_images: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Checks the action axioms and freeness on vertices.
    pub fn validate_free(&self, g: &FiniteGroupoid) -> Result<(), GroupoidError> {
        let n = self.group.order();
        if self.vertex_images.len() != n || self.arrow_images.len() != n {
            return Err(GroupoidError::WrongImageCount(self.vertex_images.len().min(self.arrow_images.len())));
        }
        for e in 0..n {
            if self.vertex_images[e].len() != g.n_vertices() || self.arrow_images[e].len() != g.n_arrows() {
                return Err(GroupoidError::WrongImageCount(e));
            }
            let m = Morphism { vertex_map: self.vertex_images[e].clone(), arrow_map: self.arrow_images[e].clone() };
            if is_homomorphism(g, g, &m).is_err() {
                return Err(GroupoidError::NotAutomorphism { element: e });
            }
            let vs: HashSet<usize> = m.vertex_map.iter().copied().collect();
            let ars: HashSet<usize> = m.arrow_map.iter().copied().collect();
            if vs.len() != g.n_vertices() || ars.len() != g.n_arrows() {
                return Err(GroupoidError::NotAutomorphism { element: e });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.group.mul(a, b);
                let ok_v = (0..g.n_vertices())
                    .all(|x| self.vertex_images[ab][x] == self.vertex_images[a][self.vertex_images[b][x]]);
                let ok_a = (0..g.n_arrows())
                    .all(|x| self.arrow_images[ab][x] == self.arrow_images[a][self.arrow_images[b][x]]);
                if !ok_v || !ok_a {
                    return Err(GroupoidError::NotAnAction(a, b));
                }
            }
        }
        for e in 0..n {
            if e == self.group.identity() {
                if (0..g.n_vertices()).any(|x| self.vertex_images[e][x] != x) {
                    return Err(GroupoidError::NotAutomorphism { element: e });
                }
                continue;
            }
            if let Some(x) = (0..g.n_vertices()).find(|&x| self.vertex_images[e][x] == x) {
                return Err(GroupoidError::NotFree { element: e, vertex: x });
            }
        }
        Ok(())
    }
}

/// Orbit labels for a set of `n` points, numbered by least member.
pub(crate) fn orbits(n: usize, images: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let mut label = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if label[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for img in images {
            label[img[x]] = id;
        }
    }
    (label, reps)
}

/// The quotient of `g` by a free action, with the projection.
pub fn quotient_by_free_action(
    g: &FiniteGroupoid,
    action: &GroupAction,
) -> Result<(FiniteGroupoid, Morphism), GroupoidError> {
    action.validate_free(g)?;
    let (vlabel, _) = orbits(g.n_vertices(), &action.vertex_images);
    let (alabel, areps) = orbits(g.n_arrows(), &action.arrow_images);
    let nv = vlabel.iter().max().map_or(0, |m| m + 1);
    let arrows: Vec<Arrow> = areps
        .iter()
        .map(|&a| Arrow { source: vlabel[g.source(a)], target: vlabel[g.target(a)] })
        .collect();
    let mut identity = vec![0; nv];
    for x in 0..g.n_vertices() {
        identity[vlabel[x]] = alabel[g.identity(x)];
    }
    let inverse = areps.iter().map(|&a| alabel[g.inverse(a)]).collect();
    let mut compose = HashMap::new();
    for (i, &a) in areps.iter().enumerate() {
        let t = g.target(a);
        for (j, &b) in areps.iter().enumerate() {
            if vlabel[g.source(b)] != vlabel[t] {
                continue;
            }
            let moved = (0..action.group.order())
                .map(|e| action.arrow_images[e][b])
                .find(|&b2| g.source(b2) == t)
                .expect("orbit meets every vertex of the source orbit");
            compose.insert((i, j), alabel[g.compose(a, moved).unwrap()]);
        }
    }
    let q = FiniteGroupoid::new(nv, arrows, identity, inverse, compose)?;
    Ok((q, Morphism { vertex_map: vlabel, arrow_map: alabel }))
}

/// Extends `start_vertex -> image_vertex` to a map `src -> other` over `tgt` by lifting stars.
/// Returns `None` if the lift is inconsistent or is not a homomorphism.
fn lift_map(
    src: &FiniteGroupoid,
    p: &Morphism,
    other: &FiniteGroupoid,
    q: &Morphism,
    start: usize,
    image: usize,
) -> Option<Morphism> {
    let mut vmap = vec![usize::MAX; src.n_vertices()];
    let mut amap = vec![usize::MAX; src.n_arrows()];
    vmap[start] = image;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let img = vmap[v];
        let by_proj: HashMap<usize, usize> = other.star(img).iter().map(|&b| (q.arrow_map[b], b)).collect();
        for &a in src.star(v) {
            let b = *by_proj.get(&p.arrow_map[a])?;
            amap[a] = b;
            let w = src.target(a);
            let wt = other.target(b);
            if vmap[w] == usize::MAX {
                vmap[w] = wt;
                queue.push_back(w);
            } else if vmap[w] != wt {
                return None;
            }
        }
    }
    if vmap.contains(&usize::MAX) {
        return None;
    }
    let m = Morphism { vertex_map: vmap, arrow_map: amap };
    is_homomorphism(src, other, &m).ok().map(|_| m)
}

/// Deck transformations of a covering `p: src -> tgt` with `src` connected.
pub fn deck_group(src: &FiniteGroupoid, tgt: &FiniteGroupoid, p: &Morphism) -> Result<Vec<Morphism>, GroupoidError> {
    if !src.is_connected() {
        return Err(GroupoidError::NotConnected);
    }
    let _ = tgt;
    if src.n_vertices() == 0 {
        return Ok(vec![]);
    }
    let base = 0;
    let mut out = Vec::new();
    for y in 0..src.n_vertices() {
        if p.vertex_map[y] != p.vertex_map[base] {
            continue;
        }
        if let Some(m) = lift_map(src, p, src, p, base, y) {
            let vs: HashSet<usize> = m.vertex_map.iter().copied().collect();
            if vs.len() == src.n_vertices() {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// An isomorphism of coverings `p1 -> p2` over the same target, if one exists.
pub fn coverings_isomorphic(
    src1: &FiniteGroupoid,
    p1: &Morphism,
    src2: &FiniteGroupoid,
    p2: &Morphism,
) -> Option<Morphism> {
    if src1.n_vertices() != src2.n_vertices() || src1.n_arrows() != src2.n_arrows() || !src1.is_connected() {
        return None;
    }
    if src1.n_vertices() == 0 {
        return Some(Morphism { vertex_map: vec![], arrow_map: vec![] });
    }
    (0..src2.n_vertices())
        .filter(|&y| p2.vertex_map[y] == p1.vertex_map[0])
        .find_map(|y| {
            let m = lift_map(src1, p1, src2, p2, 0, y)?;
            let vs: HashSet<usize> = m.vertex_map.iter().copied().collect();
            (vs.len() == src2.n_vertices()).then_some(m)
        })
}
