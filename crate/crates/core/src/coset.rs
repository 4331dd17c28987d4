//! Coset enumeration for groupoids given by generators and relator cycles.
//!
//! Letters are arrows between vertices, each with a designated inverse letter. Cosets are
//! typed by vertex; relators are closed words scanned at every coset over their start vertex.
//! A group presentation is the one-vertex case.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CosetError {
    #[error("coset enumeration exceeded cap of {0} cosets")]
    CapExceeded(usize),
    #[error("relator {0} is not a closed word")]
    BadRelator(usize),
    #[error("letter {0} has an inconsistent inverse")]
    BadLetter(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub source: usize,
    pub target: usize,
    pub inverse: usize,
}

/// A relator: a closed word of letters starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub start: usize,
    pub word: Vec<usize>,
}

const NONE: u32 = u32::MAX;

/// A complete coset table.
#[derive(Debug, Clone)]
pub struct CosetTable {
    vertex: Vec<usize>,
    rows: Vec<Vec<u32>>,
    slot_of: Vec<usize>,
    first_over: Vec<Option<usize>>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex.is_empty()
    }

    pub fn vertex(&self, c: usize) -> usize {
        self.vertex[c]
    }

    /// The coset reached from `c` by `letter`, whose source must be `vertex(c)`.
    pub fn act(&self, c: usize, letter: usize) -> usize {
        self.rows[c][self.slot_of[letter]] as usize
    }

    pub fn trace(&self, c: usize, word: &[usize]) -> usize {
        word.iter().fold(c, |x, &l| self.act(x, l))
    }

    /// The first coset over vertex `v`, if the enumeration reached it.
    pub fn first_over(&self, v: usize) -> Option<usize> {
        self.first_over[v]
    }

    pub fn cosets_over(&self, v: usize) -> usize {
        self.vertex.iter().filter(|&&x| x == v).count()
    }
}

struct State<'a> {
    letters: &'a [Letter],
    slot_of: Vec<usize>,
    out: Vec<Vec<usize>>,
    vertex: Vec<usize>,
    rows: Vec<Vec<u32>>,
    parent: Vec<u32>,
    cap: usize,
}

impl State<'_> {
    fn get(&self, c: usize, l: usize) -> Option<usize> {
        let v = self.rows[c][self.slot_of[l]];
        (v != NONE).then_some(v as usize)
    }

    fn set(&mut self, c: usize, l: usize, d: usize) {
        let s = self.slot_of[l];
        self.rows[c][s] = d as u32;
    }

    fn clear(&mut self, c: usize, l: usize) {
        let s = self.slot_of[l];
        self.rows[c][s] = NONE;
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn new_coset(&mut self, v: usize) -> Result<usize, CosetError> {
        if self.vertex.len() >= self.cap {
            return Err(CosetError::CapExceeded(self.cap));
        }
        let c = self.vertex.len();
        self.vertex.push(v);
        self.rows.push(vec![NONE; self.out[v].len()]);
        self.parent.push(c as u32);
        Ok(c)
    }

    fn define(&mut self, c: usize, l: usize) -> Result<usize, CosetError> {
        let d = self.new_coset(self.letters[l].target)?;
        self.set(c, l, d);
        self.set(d, self.letters[l].inverse, c);
        Ok(d)
    }

    fn find(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut x = c;
        while self.parent[x] as usize != r {
            let n = self.parent[x] as usize;
            self.parent[x] = r as u32;
            x = n;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut VecDeque<usize>) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo as u32;
        queue.push_back(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::new();
        self.merge(a, b, &mut queue);
        while let Some(e) = queue.pop_front() {
            let v = self.vertex[e];
            for k in 0..self.out[v].len() {
                let l = self.out[v][k];
                let Some(f) = self.get(e, l) else { continue };
                let li = self.letters[l].inverse;
                if self.get(f, li) == Some(e) {
                    self.clear(f, li);
                }
                let (e1, f1) = (self.find(e), self.find(f));
                if let Some(g) = self.get(e1, l) {
                    self.merge(f1, g, &mut queue);
                } else if let Some(g) = self.get(f1, li) {
                    self.merge(e1, g, &mut queue);
                } else {
                    self.set(e1, l, f1);
                    self.set(f1, li, e1);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<(), CosetError> {
        let n = word.len();
        let (mut f, mut i) = (c, 0usize);
        let (mut b, mut j) = (c, n);
        loop {
            while i < j {
                match self.get(f, word[i]) {
                    Some(x) => {
                        f = x;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                match self.get(b, self.letters[word[j - 1]].inverse) {
                    Some(x) => {
                        b = x;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, word[i], b);
                self.set(b, self.letters[word[i]].inverse, f);
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }
}

/// Enumerates the cosets of the trivial subgroup reachable from `start`, with at most `cap`
/// cosets defined along the way.
pub fn enumerate(
    n_vertices: usize,
    letters: &[Letter],
    relators: &[Relator],
    start: usize,
    cap: usize,
) -> Result<CosetTable, CosetError> {
    for (k, l) in letters.iter().enumerate() {
        let inv = letters.get(l.inverse).ok_or(CosetError::BadLetter(k))?;
        if inv.source != l.target || inv.target != l.source || inv.inverse != k {
            return Err(CosetError::BadLetter(k));
        }
    }
    let mut out = vec![Vec::new(); n_vertices];
    let mut slot_of = vec![0; letters.len()];
    for (k, l) in letters.iter().enumerate() {
        slot_of[k] = out[l.source].len();
        out[l.source].push(k);
    }
    let mut rel_at = vec![Vec::new(); n_vertices];
    for (k, r) in relators.iter().enumerate() {
        let mut at = r.start;
        for &l in &r.word {
            if letters.get(l).map(|x| x.source) != Some(at) {
                return Err(CosetError::BadRelator(k));
            }
            at = letters[l].target;
        }
        if at != r.start {
            return Err(CosetError::BadRelator(k));
        }
        rel_at[r.start].push(k);
    }
    let mut st = State {
        letters,
        slot_of: slot_of.clone(),
        out,
        vertex: Vec::new(),
        rows: Vec::new(),
        parent: Vec::new(),
        cap,
    };
    st.new_coset(start)?;
    let mut c = 0;
    while c < st.vertex.len() {
        if st.alive(c) {
            let v = st.vertex[c];
            for &r in &rel_at[v] {
                st.scan_and_fill(c, &relators[r].word)?;
                if !st.alive(c) {
                    break;
                }
            }
            if st.alive(c) {
                for k in 0..st.out[v].len() {
                    let l = st.out[v][k];
                    if st.get(c, l).is_none() {
                        st.define(c, l)?;
                    }
                }
            }
        }
        c += 1;
    }
    let total = st.vertex.len();
    let mut new_id = vec![NONE; total];
    let mut vertex = Vec::new();
    for x in 0..total {
        if st.alive(x) {
            new_id[x] = vertex.len() as u32;
            vertex.push(st.vertex[x]);
        }
    }
    let mut rows = Vec::with_capacity(vertex.len());
    for x in 0..total {
        if !st.alive(x) {
            continue;
        }
        let row: Vec<u32> = st.rows[x]
            .clone()
            .into_iter()
            .map(|d| {
                let r = st.find(d as usize);
                new_id[r]
            })
            .collect();
        rows.push(row);
    }
    let mut first_over = vec![None; n_vertices];
    for (c, &v) in vertex.iter().enumerate() {
        if first_over[v].is_none() {
            first_over[v] = Some(c);
        }
    }
    Ok(CosetTable { vertex, rows, slot_of, first_over })
}

/// Letters for a group on `n` generators: letter `2k` is generator `k`, `2k+1` its inverse.
pub fn group_letters(n: usize) -> Vec<Letter> {
    (0..2 * n).map(|k| Letter { source: 0, target: 0, inverse: k ^ 1 }).collect()
}

/// Order of the group `<gens | relators>` where relators use the letters of [`group_letters`].
pub fn group_order(n_gens: usize, relators: &[Vec<usize>], cap: usize) -> Result<usize, CosetError> {
    let letters = group_letters(n_gens);
    let rels: Vec<Relator> = relators.iter().map(|w| Relator { start: 0, word: w.clone() }).collect();
    enumerate(1, &letters, &rels, 0, cap).map(|t| t.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(x: usize, k: usize) -> Vec<usize> {
        vec![x; k]
    }

    #[test]
    fn dihedral_orders() {
        for m in 2..8 {
            let mut ab = Vec::new();
            for _ in 0..m {
                ab.extend([0, 2]);
            }
            let rels = vec![pw(0, 2), pw(2, 2), ab];
            assert_eq!(group_order(2, &rels, 10_000).unwrap(), 2 * m);
        }
    }

    #[test]
    fn symmetric_group_s4() {
        // s^2, t^2, u^2, (st)^3, (tu)^3, (su)^2
        let (s, t, u) = (0, 2, 4);
        let rels = vec![
            vec![s, s],
            vec![t, t],
            vec![u, u],
            vec![s, t, s, t, s, t],
            vec![t, u, t, u, t, u],
            vec![s, u, s, u],
        ];
        assert_eq!(group_order(3, &rels, 10_000).unwrap(), 24);
    }

    #[test]
    fn free_group_hits_cap() {
        assert_eq!(group_order(2, &[], 100), Err(CosetError::CapExceeded(100)));
    }

    #[test]
    fn trivial_and_cyclic() {
        assert_eq!(group_order(1, &[vec![0]], 10).unwrap(), 1);
        assert_eq!(group_order(1, &[vec![0; 5]], 100).unwrap(), 5);
        // a b a^-1 b^-2 with a^2: known finite
        assert_eq!(group_order(2, &[vec![0, 2, 1, 3], vec![0; 3], vec![2; 4]], 1000).unwrap(), 12);
    }
}
