//! Certification of Weyl data up a ladder of levels, with witnesses for failures.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::coxeter::{CoxeterElement, Gen, Order, Side};
use crate::cover::{universal_cover, UniversalCover, DEFAULT_COVER_CAP};
use crate::homotopy::{HomotopyTable, SuiteIndex};
use crate::weyl::{ChamberId, EdgeId, Gallery, SubData, WeylData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Data,
    PreWeyl,
    #[serde(rename = "2-weyl")]
    TwoWeyl,
    Weyl,
    Building,
}

impl Level {
    pub const ALL: [Level; 5] = [Level::Data, Level::PreWeyl, Level::TwoWeyl, Level::Weyl, Level::Building];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Data => "data",
            Level::PreWeyl => "pre-weyl",
            Level::TwoWeyl => "2-weyl",
            Level::Weyl => "weyl",
            Level::Building => "building",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        Level::ALL.into_iter().find(|l| l.as_str() == s)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// Chambers and galleries (as edge names) exhibiting a failure.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Witness {
    pub chambers: Vec<String>,
    pub galleries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificationReport {
    pub level: Level,
    pub target: Level,
    /// Set when the building check ran on a truncated cover of an infinite type.
    pub partial: bool,
    pub checks: Vec<Check>,
}

impl CertificationReport {
    pub fn reached(&self) -> bool {
        self.level >= self.target
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status != Status::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Data with its certification report and the partner index used for strict homotopies.
#[derive(Debug, Clone)]
pub struct Certified {
    pub data: WeylData,
    pub index: SuiteIndex,
    pub report: CertificationReport,
}

/// Bounds on the enumerations done during certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub cover_chambers: usize,
    pub cosets: usize,
    pub radius: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { cover_chambers: DEFAULT_COVER_CAP, cosets: 200_000, radius: 6 }
    }
}

impl Limits {
    /// All caps set to `cap`.
    pub fn with_cap(cap: usize) -> Self {
        Limits { cover_chambers: cap, cosets: cap, ..Limits::default() }
    }
}

fn names(data: &WeylData, edges: &[EdgeId]) -> Vec<String> {
    edges.iter().map(|&e| data.edge_name(e).to_string()).collect()
}

struct Ladder {
    checks: Vec<Check>,
}

impl Ladder {
    fn push(&mut self, name: &'static str, status: Status, detail: String, witness: Option<Witness>) {
        self.checks.push(Check { name, status, detail, witness });
    }
}

/// Result of the rank-2 analysis of one residue, in local ids.
struct Rank2 {
    pw1: (Status, String, Option<Witness>),
    h2: (Status, String, Option<Witness>),
    w2: Option<(Status, String, Option<Witness>)>,
    partners: SuiteIndex,
}

fn analyze_rank2(r: &SubData, amb: &WeylData, limits: &Limits) -> Rank2 {
    let d = &r.data;
    let global = |edges: &[EdgeId]| -> Vec<String> { edges.iter().map(|e| amb.edge_name(r.edge_map[e.idx()]).to_string()).collect() };
    let mut geos: Vec<Gallery> = Vec::new();
    for x in d.chambers() {
        geos.extend(d.maximal_geodesics(x, 0, 1));
        geos.extend(d.maximal_geodesics(x, 1, 0));
    }
    let structural = SuiteIndex::structural(d);
    let missing: Vec<&Gallery> = geos.iter().filter(|g| structural.partners(&g.edges).is_empty()).collect();
    let mut index = structural.clone();
    let mut table_size = None;
    let mut pw1 = (Status::Pass, "every maximal alternating geodesic has a partner".to_string(), None);
    if let Some(g) = missing.first() {
        let w = Some(Witness { chambers: vec![d.chamber_name(g.start).into()], galleries: vec![global(&g.edges)] });
        if d.defining_suites().is_empty() {
            pw1 = (Status::Fail, "no defining suite in this residue; maximal geodesic has no homotopic partner".into(), w);
        } else {
            match HomotopyTable::build(d, ChamberId(0), limits.cosets) {
                Ok(table) => {
                    table_size = Some(table.len());
                    let mut exact = SuiteIndex::default();
                    for g in &geos {
                        let ty = d.gallery_type(g);
                        let (s, t) = (ty.0[0], ty.0[1]);
                        for o in d.maximal_geodesics(g.start, t, s) {
                            if table.homotopic(d, g, &o) {
                                exact.add(g.edges.clone(), o.edges.clone());
                            }
                        }
                    }
                    exact.sort();
                    index = exact;
                    if let Some(g) = geos.iter().find(|g| index.partners(&g.edges).is_empty()) {
                        let w = Witness { chambers: vec![d.chamber_name(g.start).into()], galleries: vec![global(&g.edges)] };
                        pw1 = (Status::Fail, "maximal geodesic is homotopic to no opposite geodesic".into(), Some(w));
                    }
                }
                Err(e) => {
                    pw1 = (Status::Inconclusive, format!("no partner found from defining suites and {e}"), w);
                }
            }
        }
    }
    let mut h2 = (Status::Pass, "every maximal alternating geodesic has exactly one partner".to_string(), None);
    if let Some(g) = geos.iter().find(|g| index.partners(&g.edges).len() > 1) {
        let mut gal = vec![global(&g.edges)];
        gal.extend(index.partners(&g.edges).iter().map(|p| global(p)));
        h2 = (
            Status::Fail,
            format!("maximal geodesic lies in {} suites", index.partners(&g.edges).len()),
            Some(Witness { chambers: vec![d.chamber_name(g.start).into()], galleries: gal }),
        );
    } else if pw1.0 != Status::Pass {
        h2 = (Status::Inconclusive, "partners unknown".into(), None);
    }
    let mut w2 = None;
    if pw1.0 == Status::Pass && h2.0 == Status::Pass {
        w2 = Some(match universal_cover(d, &index, ChamberId(0), None, limits.cover_chambers) {
            Err(e) => (Status::Fail, format!("rank-2 universal cover could not be built: {e}"), None),
            Ok(cover) => match property_b(&cover.data) {
                Some(v) => (Status::Fail, "rank-2 universal cover is not a building".into(), Some(cover_witness(d, &cover, &v, &global))),
                None => match table_size {
                    Some(n) if n != cover.data.n_chambers() => (
                        Status::Fail,
                        format!("cover has {} chambers but homotopy enumeration found {n}", cover.data.n_chambers()),
                        None,
                    ),
                    _ => (Status::Pass, format!("rank-2 universal cover has {} chambers", cover.data.n_chambers()), None),
                },
            },
        });
    }
    Rank2 { pw1, h2, w2, partners: index }
}

/// A pair of geodesics with common extremities and different W-lengths.
pub struct PropertyBViolation {
    pub from: ChamberId,
    pub to: ChamberId,
    pub first: (Gallery, CoxeterElement),
    pub second: (Gallery, CoxeterElement),
}

/// Checks that geodesics with the same extremities have the same W-length.
pub fn property_b(data: &WeylData) -> Option<PropertyBViolation> {
    let cox = data.coxeter();
    for x in data.chambers() {
        // states: (chamber, w, parent state, edge)
        let mut states: Vec<(ChamberId, CoxeterElement, usize, Option<EdgeId>)> =
            vec![(x, CoxeterElement::identity(), usize::MAX, None)];
        let mut seen: HashSet<(ChamberId, CoxeterElement)> = HashSet::from([(x, CoxeterElement::identity())]);
        let mut first_at: HashMap<ChamberId, usize> = HashMap::from([(x, 0)]);
        let path = |states: &Vec<(ChamberId, CoxeterElement, usize, Option<EdgeId>)>, mut k: usize| {
            let mut edges = Vec::new();
            while let Some(e) = states[k].3 {
                edges.push(e);
                k = states[k].2;
            }
            edges.reverse();
            Gallery { start: x, edges }
        };
        let mut k = 0;
        while k < states.len() {
            let (c, w) = (states[k].0, states[k].1.clone());
            for &e in data.star(c) {
                let s: Gen = data.edge_type(e);
                if cox.length_dichotomy(&w, s, Side::Right) < 0 {
                    continue;
                }
                let w2 = cox.multiply_gen(&w, s);
                let y = data.target(e);
                if !seen.insert((y, w2.clone())) {
                    continue;
                }
                states.push((y, w2.clone(), k, Some(e)));
                let id = states.len() - 1;
                match first_at.get(&y) {
                    None => {
                        first_at.insert(y, id);
                    }
                    Some(&f) => {
                        return Some(PropertyBViolation {
                            from: x,
                            to: y,
                            first: (path(&states, f), states[f].1.clone()),
                            second: (path(&states, id), w2),
                        });
                    }
                }
            }
            k += 1;
        }
    }
    None
}

fn cover_witness(
    down: &WeylData,
    cover: &UniversalCover,
    v: &PropertyBViolation,
    global: &dyn Fn(&[EdgeId]) -> Vec<String>,
) -> Witness {
    let proj = |g: &Gallery| cover.projection.image(g);
    let (a, b) = (proj(&v.first.0), proj(&v.second.0));
    Witness {
        chambers: vec![
            down.chamber_name(cover.projection.chamber_map[v.from.idx()]).into(),
            down.chamber_name(cover.projection.chamber_map[v.to.idx()]).into(),
        ],
        galleries: vec![global(&a.edges), global(&b.edges)],
    }
}

/// Restricts a global partner index to the edges of sub-data.
pub fn restrict_index(index: &SuiteIndex, sub: &SubData) -> SuiteIndex {
    let local: HashMap<EdgeId, EdgeId> =
        sub.edge_map.iter().enumerate().map(|(i, &e)| (e, EdgeId(i as u32))).collect();
    let mut out = SuiteIndex::default();
    let conv = |v: &[EdgeId]| -> Option<Vec<EdgeId>> { v.iter().map(|e| local.get(e).copied()).collect() };
    for (rho, ps) in index.iter() {
        let Some(r) = conv(rho) else { continue };
        for p in ps {
            if let Some(q) = conv(p) {
                out.add(r.clone(), q);
            }
        }
    }
    out.sort();
    out
}

fn is_c3_or_h3(orders: &[Order; 3]) -> bool {
    let mut v: Vec<Order> = orders.to_vec();
    v.sort();
    v == [Order::Finite(2), Order::Finite(3), Order::Finite(4)] || v == [Order::Finite(2), Order::Finite(3), Order::Finite(5)]
}

/// Certifies `data` up to `target`, stopping at the first level that fails.
pub fn certify(data: &WeylData, target: Level, limits: &Limits) -> Certified {
    let cox = data.coxeter();
    let mut ladder = Ladder { checks: Vec::new() };
    let mut index = SuiteIndex::structural(data);
    let mut level = Level::Data;
    let mut partial = false;
    ladder.push("data", Status::Pass, "panel groupoids, inverses and suite types are valid".into(), None);
    let done = |level: Level, index: SuiteIndex, ladder: Ladder, partial: bool| Certified {
        data: data.clone(),
        index,
        report: CertificationReport { level, target, partial, checks: ladder.checks },
    };
    if target == Level::Data {
        return done(level, index, ladder, partial);
    }

    let mut pw0_fail = None;
    'outer: for c in data.chambers() {
        for s in 0..cox.rank() {
            if data.edges_from(c, s).next().is_none() {
                pw0_fail = Some((c, s));
                break 'outer;
            }
        }
    }
    match pw0_fail {
        Some((c, s)) => {
            ladder.push(
                "PW0",
                Status::Fail,
                format!("chamber has no edge of type {}", cox.label(s)),
                Some(Witness { chambers: vec![data.chamber_name(c).into()], galleries: vec![] }),
            );
            return done(level, index, ladder, partial);
        }
        None => ladder.push("PW0", Status::Pass, "no panel is trivial".into(), None),
    }

    let mut global = SuiteIndex::default();
    let mut pw1_worst: Option<(Status, String, Option<Witness>)> = None;
    let mut h2_worst: Option<(Status, String, Option<Witness>)> = None;
    let mut w2_worst: Option<(Status, String, Option<Witness>)> = None;
    let mut residues = 0;
    for s in 0..cox.rank() {
        for t in s + 1..cox.rank() {
            if cox.order(s, t).finite().is_none() {
                continue;
            }
            for comp in data.residues_of_type(&[s, t]) {
                residues += 1;
                let sub = data.residue(&[s, t], comp[0]);
                let r = analyze_rank2(&sub, data, limits);
                for (rho, ps) in r.partners.iter() {
                    let g: Vec<EdgeId> = rho.iter().map(|e| sub.edge_map[e.idx()]).collect();
                    for p in ps {
                        global.add(g.clone(), p.iter().map(|e| sub.edge_map[e.idx()]).collect());
                    }
                }
                let worse = |cur: &Option<(Status, String, Option<Witness>)>, new: &(Status, String, Option<Witness>)| {
                    new.0 != Status::Pass && cur.as_ref().is_none_or(|c| c.0 == Status::Pass || (c.0 == Status::Inconclusive && new.0 == Status::Fail))
                };
                if worse(&pw1_worst, &r.pw1) || pw1_worst.is_none() {
                    pw1_worst = Some(r.pw1.clone());
                }
                if worse(&h2_worst, &r.h2) || h2_worst.is_none() {
                    h2_worst = Some(r.h2.clone());
                }
                if let Some(w2) = &r.w2 {
                    if worse(&w2_worst, w2) || w2_worst.is_none() {
                        w2_worst = Some(w2.clone());
                    }
                } else {
                    w2_worst = Some((Status::Inconclusive, "not checked: partners are not unique".into(), None));
                }
            }
        }
    }
    global.sort();
    let summary = |o: Option<(Status, String, Option<Witness>)>, what: &str| {
        o.unwrap_or((Status::Pass, format!("no spherical rank-2 residues ({what})"), None))
    };
    let (st, de, wi) = summary(pw1_worst, "PW1");
    let pw1_ok = st == Status::Pass;
    ladder.push("PW1", st, if pw1_ok { format!("{residues} rank-2 residues checked") } else { de }, wi);
    if !pw1_ok {
        return done(level, index, ladder, partial);
    }
    index = global;
    level = Level::PreWeyl;
    if target == Level::PreWeyl {
        return done(level, index, ladder, partial);
    }
    let (st, de, wi) = summary(h2_worst, "2H");
    let h2_ok = st == Status::Pass;
    ladder.push("2H", st, de, wi);
    let (st, de, wi) = summary(w2_worst, "2W");
    let w2_ok = st == Status::Pass;
    ladder.push("2W", st, de, wi);
    if !h2_ok || !w2_ok {
        return done(level, index, ladder, partial);
    }
    level = Level::TwoWeyl;
    if target == Level::TwoWeyl {
        return done(level, index, ladder, partial);
    }

    let mut w_fail: Option<(Status, String, Option<Witness>)> = None;
    let mut rank3 = 0;
    'w: for r in 0..cox.rank() {
        for s in r + 1..cox.rank() {
            for t in s + 1..cox.rank() {
                if !is_c3_or_h3(&[cox.order(r, s), cox.order(s, t), cox.order(r, t)]) {
                    continue;
                }
                for comp in data.residues_of_type(&[r, s, t]) {
                    rank3 += 1;
                    let sub = data.residue(&[r, s, t], comp[0]);
                    let local = restrict_index(&index, &sub);
                    let gname = |edges: &[EdgeId]| -> Vec<String> {
                        edges.iter().map(|e| data.edge_name(sub.edge_map[e.idx()]).to_string()).collect()
                    };
                    match universal_cover(&sub.data, &local, ChamberId(0), None, limits.cover_chambers) {
                        Err(e) => {
                            w_fail = Some((Status::Fail, format!("rank-3 universal cover could not be built: {e}"), None));
                            break 'w;
                        }
                        Ok(cover) => {
                            if let Some(v) = property_b(&cover.data) {
                                let wi = cover_witness(&sub.data, &cover, &v, &gname);
                                w_fail = Some((Status::Fail, "rank-3 universal cover is not a building".into(), Some(wi)));
                                break 'w;
                            }
                        }
                    }
                }
            }
        }
    }
    match w_fail {
        Some((st, de, wi)) => {
            ladder.push("W", st, de, wi);
            return done(level, index, ladder, partial);
        }
        None => ladder.push("W", Status::Pass, format!("{rank3} residues of type C3 or H3 checked"), None),
    }
    level = Level::Weyl;
    if target == Level::Weyl {
        return done(level, index, ladder, partial);
    }

    if !data.is_connected() {
        ladder.push("B", Status::Fail, "data is not connected".into(), None);
        return done(level, index, ladder, partial);
    }
    let spherical = cox.is_spherical();
    let radius = if spherical { None } else { Some(limits.radius) };
    partial = !spherical;
    match universal_cover(data, &index, ChamberId(0), radius, limits.cover_chambers) {
        Err(e) => ladder.push("B", Status::Fail, format!("universal cover could not be built: {e}"), None),
        Ok(cover) => {
            let n = cover.data.n_chambers();
            let distinct: HashSet<ChamberId> = cover.projection.chamber_map.iter().copied().collect();
            let gname = |edges: &[EdgeId]| names(data, edges);
            if let Some(v) = property_b(&cover.data) {
                let wi = cover_witness(data, &cover, &v, &gname);
                ladder.push("B", Status::Fail, "universal cover violates the distance property".into(), Some(wi));
            } else if distinct.len() != n {
                let mut first: HashMap<ChamberId, usize> = HashMap::new();
                let mut wi = None;
                for (k, &c) in cover.projection.chamber_map.iter().enumerate() {
                    if let Some(&j) = first.get(&c) {
                        wi = Some(Witness {
                            chambers: vec![data.chamber_name(c).into()],
                            galleries: vec![gname(&cover.geodesics[j].edges), gname(&cover.geodesics[k].edges)],
                        });
                        break;
                    }
                    first.insert(c, k);
                }
                ladder.push(
                    "B",
                    Status::Fail,
                    format!("universal cover has {n} chambers over {}; projection is not injective", data.n_chambers()),
                    wi,
                );
            } else {
                let note = if partial { format!(" (truncated at radius {})", limits.radius) } else { String::new() };
                ladder.push("B", Status::Pass, format!("universal cover maps {n} chambers injectively{note}"), None);
                level = Level::Building;
            }
        }
    }
    done(level, index, ladder, partial)
}
