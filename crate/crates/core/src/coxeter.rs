//! Coxeter matrices and the word problem in Coxeter groups.
//!
//! Words are sequences of generator indices. Everything here is decided by
//! strict moves (rewriting an alternating block `p(s,t)` as `p(t,s)`) and
//! contractions of adjacent repeated letters, which is enough to decide
//! reducedness and equality without a linear representation.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

/// Index of a generator inside its [`CoxeterMatrix`].
pub type Gen = usize;

/// Default bound on the number of elements visited by [`CoxeterMatrix::enumerate_elements`].
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

const CLASS_CACHE_LIMIT: usize = 1 << 17;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("coxeter matrix has {rows} rows but {gens} generators")]
    WrongShape { rows: usize, gens: usize },
    #[error("coxeter matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(String, String),
    #[error("diagonal entry for {0} must be 1")]
    BadDiagonal(String),
    #[error("off-diagonal entry ({0}, {1}) must be at least 2 or inf")]
    BadOffDiagonal(String, String),
    #[error("duplicate generator label {0}")]
    DuplicateLabel(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("letter {0} out of range for rank {1}")]
    LetterOutOfRange(usize, usize),
    #[error("enumeration exceeded cap of {0} elements")]
    CapExceeded(usize),
}

/// An entry `m_st` of a Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(m) => Some(m as usize),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// A word in the generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn new(letters: Vec<Gen>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn has_square(&self) -> bool {
        self.0.windows(2).any(|w| w[0] == w[1])
    }
}

impl From<Vec<Gen>> for Word {
    fn from(v: Vec<Gen>) -> Self {
        Word(v)
    }
}

/// The alternating word `s t s t ...` of length `len`.
pub fn alternating(s: Gen, t: Gen, len: usize) -> Word {
    Word((0..len).map(|i| if i % 2 == 0 { s } else { t }).collect())
}

/// An element of a Coxeter group, stored by its ShortLex normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxeterElement {
    nf: Word,
}

impl CoxeterElement {
    pub fn identity() -> Self {
        CoxeterElement { nf: Word::empty() }
    }

    pub fn normal_form(&self) -> &Word {
        &self.nf
    }

    pub fn length(&self) -> usize {
        self.nf.len()
    }

    pub fn is_identity(&self) -> bool {
        self.nf.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

type ClassMap = HashMap<Word, Arc<Vec<Word>>>;

#[derive(Default)]
struct ClassCache(Mutex<ClassMap>);

/// A Coxeter matrix together with a shared memo of strict classes.
pub struct CoxeterMatrix {
    labels: Vec<String>,
    orders: Vec<Vec<Order>>,
    cache: Arc<ClassCache>,
}

impl Clone for CoxeterMatrix {
    fn clone(&self) -> Self {
        CoxeterMatrix {
            labels: self.labels.clone(),
            orders: self.orders.clone(),
            cache: Arc::clone(&self.cache),
        }
    }
}

impl PartialEq for CoxeterMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.orders == other.orders
    }
}

impl Eq for CoxeterMatrix {}

impl fmt::Debug for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterMatrix")
            .field("labels", &self.labels)
            .field("orders", &self.orders)
            .finish()
    }
}

impl CoxeterMatrix {
    pub fn new(labels: Vec<String>, orders: Vec<Vec<Order>>) -> Result<Self, CoxeterError> {
        let n = labels.len();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(CoxeterError::DuplicateLabel(l.clone()));
            }
        }
        if orders.len() != n || orders.iter().any(|r| r.len() != n) {
            return Err(CoxeterError::WrongShape { rows: orders.len(), gens: n });
        }
        for i in 0..n {
            if orders[i][i] != Order::Finite(1) {
                return Err(CoxeterError::BadDiagonal(labels[i].clone()));
            }
            for j in 0..n {
                if orders[i][j] != orders[j][i] {
                    return Err(CoxeterError::NotSymmetric(labels[i].clone(), labels[j].clone()));
                }
                if i != j && matches!(orders[i][j], Order::Finite(m) if m < 2) {
                    return Err(CoxeterError::BadOffDiagonal(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(CoxeterMatrix { labels, orders, cache: Arc::default() })
    }

    /// Matrix whose diagram is a path: `links[i]` is `m` between generators `i` and `i+1`,
    /// all other pairs commute.
    pub fn linear(labels: &[&str], links: &[Order]) -> Result<Self, CoxeterError> {
        let n = labels.len();
        let mut orders = vec![vec![Order::Finite(2); n]; n];
        for (i, row) in orders.iter_mut().enumerate() {
            row[i] = Order::Finite(1);
        }
        for (i, m) in links.iter().enumerate() {
            if i + 1 >= n {
                return Err(CoxeterError::WrongShape { rows: links.len() + 1, gens: n });
            }
            orders[i][i + 1] = *m;
            orders[i + 1][i] = *m;
        }
        CoxeterMatrix::new(labels.iter().map(|s| s.to_string()).collect(), orders)
    }

    /// The dihedral matrix `I2(m)` on generators `s`, `t`.
    pub fn dihedral(m: Order) -> Self {
        CoxeterMatrix::linear(&["s", "t"], &[m]).expect("dihedral matrix is valid")
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: Gen) -> &str {
        &self.labels[g]
    }

    pub fn generator(&self, label: &str) -> Option<Gen> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn order(&self, s: Gen, t: Gen) -> Order {
        self.orders[s][t]
    }

    pub fn orders(&self) -> &[Vec<Order>] {
        &self.orders
    }

    /// `p(s,t)`, or `None` when `m_st` is infinite.
    pub fn p(&self, s: Gen, t: Gen) -> Option<Word> {
        self.order(s, t).finite().map(|m| alternating(s, t, m))
    }

    /// The matrix restricted to the generators in `subset`, in the given order.
    pub fn restrict(&self, subset: &[Gen]) -> CoxeterMatrix {
        let labels = subset.iter().map(|&g| self.labels[g].clone()).collect();
        let orders = subset
            .iter()
            .map(|&a| subset.iter().map(|&b| self.orders[a][b]).collect())
            .collect();
        CoxeterMatrix::new(labels, orders).expect("restriction of a valid matrix")
    }

    pub fn word(&self, labels: &[&str]) -> Result<Word, CoxeterError> {
        labels
            .iter()
            .map(|l| self.generator(l).ok_or_else(|| CoxeterError::UnknownGenerator(l.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Parses whitespace-separated labels, or single characters when every label is one
    /// character and the input has no whitespace.
    pub fn parse_word(&self, text: &str) -> Result<Word, CoxeterError> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::empty());
        }
        if text.contains(char::is_whitespace) || self.labels.iter().any(|l| l.chars().count() != 1) {
            let parts: Vec<&str> = text.split_whitespace().collect();
            self.word(&parts)
        } else {
            let parts: Vec<String> = text.chars().map(|c| c.to_string()).collect();
            let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
            self.word(&refs)
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let sep = if self.labels.iter().all(|l| l.chars().count() == 1) { "" } else { " " };
        w.0.iter().map(|&g| self.labels[g].as_str()).collect::<Vec<_>>().join(sep)
    }

    pub fn check_word(&self, w: &Word) -> Result<(), CoxeterError> {
        match w.0.iter().find(|&&g| g >= self.rank()) {
            Some(&g) => Err(CoxeterError::LetterOutOfRange(g, self.rank())),
            None => Ok(()),
        }
    }

    /// The word obtained by one strict move at `pos`, if a move applies there.
    ///
    /// A move at `pos` rewrites the block `p(s,t)` starting at `pos`, where `s`, `t` are
    /// the letters at `pos` and `pos+1`.
    pub fn strict_move(&self, w: &Word, pos: usize) -> Option<Word> {
        let l = &w.0;
        if pos + 1 >= l.len() {
            return None;
        }
        let (s, t) = (l[pos], l[pos + 1]);
        if s == t {
            return None;
        }
        let m = self.order(s, t).finite()?;
        if pos + m > l.len() {
            return None;
        }
        for k in 0..m {
            if l[pos + k] != if k % 2 == 0 { s } else { t } {
                return None;
            }
        }
        let mut out = l.clone();
        for k in 0..m {
            out[pos + k] = if k % 2 == 0 { t } else { s };
        }
        Some(Word(out))
    }

    /// All words reachable from `w` by strict moves, sorted lexicographically.
    pub fn strict_homotopy_class(&self, w: &Word) -> Arc<Vec<Word>> {
        if w.len() < 2 {
            return Arc::new(vec![w.clone()]);
        }
        if let Some(c) = self.cache.0.lock().expect("class cache").get(w) {
            return Arc::clone(c);
        }
        let mut seen: HashSet<Word> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(w.clone());
        queue.push_back(w.clone());
        while let Some(u) = queue.pop_front() {
            for pos in 0..u.len().saturating_sub(1) {
                if let Some(v) = self.strict_move(&u, pos) {
                    if seen.insert(v.clone()) {
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut class: Vec<Word> = seen.into_iter().collect();
        class.sort();
        let class = Arc::new(class);
        let mut cache = self.cache.0.lock().expect("class cache");
        if cache.len() + class.len() > CLASS_CACHE_LIMIT {
            cache.clear();
        }
        for u in class.iter() {
            cache.insert(u.clone(), Arc::clone(&class));
        }
        class
    }

    /// True iff no word in the strict class of `w` has two equal adjacent letters.
    pub fn is_reduced(&self, w: &Word) -> bool {
        !self.strict_homotopy_class(w).iter().any(Word::has_square)
    }

    /// Extends the reduced word `prefix` by `rest`, contracting repeats as they appear.
    fn reduce_onto(&self, mut g: Word, rest: &[Gen]) -> Word {
        for &s in rest {
            let class = self.strict_homotopy_class(&g);
            match class.iter().find(|u| u.0.last() == Some(&s)) {
                Some(u) => {
                    let mut u = u.clone();
                    u.0.pop();
                    g = u;
                }
                None => g.0.push(s),
            }
        }
        g
    }

    /// A reduced word equivalent to `w`.
    ///
    /// Letters are absorbed left to right; whenever the next letter `s` can be exposed at
    /// the end of the current reduced prefix by strict moves, the repeat `ss` is contracted.
    pub fn reduce(&self, w: &Word) -> Word {
        self.reduce_onto(Word::empty(), &w.0)
    }

    pub fn equivalent(&self, f: &Word, g: &Word) -> bool {
        let (rf, rg) = (self.reduce(f), self.reduce(g));
        rf.len() == rg.len() && self.strict_homotopy_class(&rf).binary_search(&rg).is_ok()
    }

    pub fn normal_form(&self, w: &Word) -> CoxeterElement {
        let r = self.reduce(w);
        CoxeterElement { nf: self.strict_homotopy_class(&r)[0].clone() }
    }

    pub fn element(&self, w: &Word) -> CoxeterElement {
        self.normal_form(w)
    }

    pub fn generator_element(&self, s: Gen) -> CoxeterElement {
        CoxeterElement { nf: Word(vec![s]) }
    }

    /// All reduced decompositions of `e`.
    pub fn reduced_words(&self, e: &CoxeterElement) -> Arc<Vec<Word>> {
        self.strict_homotopy_class(&e.nf)
    }

    pub fn multiply(&self, a: &CoxeterElement, b: &CoxeterElement) -> CoxeterElement {
        let r = self.reduce_onto(a.nf.clone(), &b.nf.0);
        CoxeterElement { nf: self.strict_homotopy_class(&r)[0].clone() }
    }

    pub fn multiply_gen(&self, a: &CoxeterElement, s: Gen) -> CoxeterElement {
        let r = self.reduce_onto(a.nf.clone(), &[s]);
        CoxeterElement { nf: self.strict_homotopy_class(&r)[0].clone() }
    }

    pub fn inverse(&self, a: &CoxeterElement) -> CoxeterElement {
        self.normal_form(&a.nf.reversed())
    }

    /// `+1` if multiplying by `s` on the given side lengthens `w`, `-1` if it shortens it.
    pub fn length_dichotomy(&self, w: &CoxeterElement, s: Gen, side: Side) -> i8 {
        let class = self.strict_homotopy_class(&w.nf);
        let hit = match side {
            Side::Right => class.iter().any(|u| u.0.last() == Some(&s)),
            Side::Left => class.iter().any(|u| u.0.first() == Some(&s)),
        };
        if hit {
            -1
        } else {
            1
        }
    }

    /// Bruhat order: some subsequence of a reduced word for `w` is a decomposition of `v`.
    pub fn bruhat_leq(&self, v: &CoxeterElement, w: &CoxeterElement) -> bool {
        let k = v.length();
        let n = w.length();
        if k > n {
            return false;
        }
        let letters = &w.nf.0;
        let mut pick = Vec::with_capacity(k);
        self.subword_search(letters, 0, k, &mut pick, v)
    }

    fn subword_search(
        &self,
        letters: &[Gen],
        start: usize,
        k: usize,
        pick: &mut Vec<Gen>,
        v: &CoxeterElement,
    ) -> bool {
        if pick.len() == k {
            let u = Word(pick.clone());
            return u == v.nf || self.strict_homotopy_class(&v.nf).binary_search(&u).is_ok();
        }
        let need = k - pick.len();
        for i in start..=letters.len() - need {
            pick.push(letters[i]);
            if self.subword_search(letters, i + 1, k, pick, v) {
                pick.pop();
                return true;
            }
            pick.pop();
        }
        false
    }

    /// Breadth-first enumeration of the group, in ShortLex order of normal forms.
    pub fn enumerate_elements(&self, cap: usize) -> Result<Vec<CoxeterElement>, CoxeterError> {
        let mut seen: HashSet<CoxeterElement> = HashSet::new();
        let mut order = Vec::new();
        let mut frontier = vec![CoxeterElement::identity()];
        seen.insert(CoxeterElement::identity());
        while !frontier.is_empty() {
            frontier.sort();
            let mut next = Vec::new();
            for e in frontier {
                for s in 0..self.rank() {
                    if self.length_dichotomy(&e, s, Side::Right) > 0 {
                        let f = self.multiply_gen(&e, s);
                        if seen.insert(f.clone()) {
                            if seen.len() > cap {
                                return Err(CoxeterError::CapExceeded(cap));
                            }
                            next.push(f);
                        }
                    }
                }
                order.push(e);
            }
            frontier = next;
        }
        Ok(order)
    }

    /// True when the group is finite with at most `cap` elements. Infinite groups are rejected
    /// by [`CoxeterMatrix::is_spherical`] before any enumeration.
    pub fn is_finite(&self, cap: usize) -> bool {
        self.is_spherical() && self.enumerate_elements(cap).is_ok()
    }

    /// Whether the group is finite, decided by positive definiteness of the cosine matrix
    /// `-cos(pi / m_st)`.
    pub fn is_spherical(&self) -> bool {
        let n = self.rank();
        let mut a = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = match self.orders[i][j] {
                    Order::Finite(m) => -(std::f64::consts::PI / m as f64).cos(),
                    Order::Infinite => -1.0,
                };
            }
        }
        // Cholesky; a non-positive pivot means the form is not positive definite.
        for k in 0..n {
            let mut d = a[k][k];
            for p in 0..k {
                d -= a[k][p] * a[k][p];
            }
            if d <= 1e-9 {
                return false;
            }
            let d = d.sqrt();
            a[k][k] = d;
            for i in k + 1..n {
                let mut v = a[i][k];
                for p in 0..k {
                    v -= a[i][p] * a[k][p];
                }
                a[i][k] = v / d;
            }
        }
        true
    }

    /// The longest element, if the group is finite within `cap`.
    pub fn longest_element(&self, cap: usize) -> Option<CoxeterElement> {
        if !self.is_spherical() {
            return None;
        }
        self.enumerate_elements(cap).ok().and_then(|v| v.into_iter().last())
    }
}
