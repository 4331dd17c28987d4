//! Independent models of Coxeter groups used as oracles.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use weylkit::coxeter::{CoxeterMatrix, Gen, Order};

/// A faithful permutation model: generator `s` acts by `perms[s]`, and a word acts by
/// applying its letters left to right.
pub struct PermModel {
    pub perms: Vec<Vec<usize>>,
}

impl PermModel {
    /// The dihedral group of order `2m` acting simply transitively on the `2m` vertices of a
    /// cycle, `s` swapping `2k, 2k+1` and `t` swapping `2k+1, 2k+2`.
    pub fn dihedral(m: usize) -> Self {
        let n = 2 * m;
        let s = (0..n).map(|k| k ^ 1).collect();
        let t = (0..n).map(|k| if k % 2 == 1 { (k + 1) % n } else { (k + n - 1) % n }).collect();
        PermModel { perms: vec![s, t] }
    }

    /// `S_4` by adjacent transpositions.
    pub fn a3() -> Self {
        let tr = |i: usize| {
            let mut p: Vec<usize> = (0..4).collect();
            p.swap(i, i + 1);
            p
        };
        PermModel { perms: vec![tr(0), tr(1), tr(2)] }
    }

    /// Signed permutations of three letters acting on `{±1, ±2, ±3}` encoded as `0..6`
    /// (`2i` for `+i`, `2i+1` for `-i`): two adjacent transpositions and a sign change of the
    /// last coordinate.
    pub fn c3() -> Self {
        let swap = |i: usize, j: usize| {
            (0..6)
                .map(|x| {
                    let (k, sg) = (x / 2, x % 2);
                    let k = if k == i { j } else if k == j { i } else { k };
                    2 * k + sg
                })
                .collect::<Vec<_>>()
        };
        let flip: Vec<usize> = (0..6).map(|x| if x / 2 == 2 { x ^ 1 } else { x }).collect();
        PermModel { perms: vec![swap(0, 1), swap(1, 2), flip] }
    }

    pub fn eval(&self, w: &[Gen]) -> Vec<usize> {
        let n = self.perms[0].len();
        let mut p: Vec<usize> = (0..n).collect();
        for &s in w {
            p = p.iter().map(|&x| self.perms[s][x]).collect();
        }
        p
    }

    /// Group order by closure of the generated permutation group.
    pub fn order(&self) -> usize {
        let n = self.perms[0].len();
        let id: Vec<usize> = (0..n).collect();
        let mut seen = HashSet::from([id.clone()]);
        let mut q = VecDeque::from([id]);
        while let Some(p) = q.pop_front() {
            for g in &self.perms {
                let x: Vec<usize> = p.iter().map(|&k| g[k]).collect();
                if seen.insert(x.clone()) {
                    q.push_back(x);
                }
            }
        }
        seen.len()
    }
}

/// The geometric representation: generator `s` acts on `R^n` by the reflection
/// `v -> v - 2 B(e_s, v) e_s` with `B(e_s, e_t) = -cos(pi / m_st)`. Matrices are hashed after
/// rounding.
pub struct MatrixModel {
    pub n: usize,
    pub gens: Vec<Vec<f64>>,
}

pub type Key = Vec<i64>;

impl MatrixModel {
    pub fn new(cox: &CoxeterMatrix) -> Self {
        let n = cox.rank();
        let b = |s: usize, t: usize| match cox.order(s, t) {
            Order::Finite(m) => -(std::f64::consts::PI / m as f64).cos(),
            Order::Infinite => -1.0,
        };
        let gens = (0..n)
            .map(|s| {
                // Row-major: column j is the image of e_j, namely e_j - 2 B(e_s, e_j) e_s.
                let mut m = vec![0.0; n * n];
                for j in 0..n {
                    m[j * n + j] += 1.0;
                    m[s * n + j] -= 2.0 * b(s, j);
                }
                m
            })
            .collect();
        MatrixModel { n, gens }
    }

    fn mul(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x != 0.0 {
                    for j in 0..n {
                        c[i * n + j] += x * b[k * n + j];
                    }
                }
            }
        }
        c
    }

    pub fn identity(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            m[i * self.n + i] = 1.0;
        }
        m
    }

    pub fn eval(&self, w: &[Gen]) -> Vec<f64> {
        w.iter().fold(self.identity(), |acc, &s| self.mul(&acc, &self.gens[s]))
    }

    pub fn key(m: &[f64]) -> Key {
        m.iter().map(|x| (x * 1e6).round() as i64).collect()
    }

    /// Order of the generated matrix group, or `None` beyond `cap`.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let id = self.identity();
        let mut seen: HashMap<Key, ()> = HashMap::from([(Self::key(&id), ())]);
        let mut q = VecDeque::from([id]);
        while let Some(p) = q.pop_front() {
            for g in &self.gens {
                let x = self.mul(&p, g);
                if seen.insert(Self::key(&x), ()).is_none() {
                    if seen.len() > cap {
                        return None;
                    }
                    q.push_back(x);
                }
            }
        }
        Some(seen.len())
    }
}

pub fn dihedral(m: u32) -> CoxeterMatrix {
    CoxeterMatrix::dihedral(Order::Finite(m))
}

pub fn a3() -> CoxeterMatrix {
    CoxeterMatrix::linear(&["s", "t", "u"], &[Order::Finite(3), Order::Finite(3)]).unwrap()
}

pub fn c3() -> CoxeterMatrix {
    CoxeterMatrix::linear(&["s", "t", "u"], &[Order::Finite(3), Order::Finite(4)]).unwrap()
}

pub fn h3() -> CoxeterMatrix {
    CoxeterMatrix::linear(&["s", "t", "u"], &[Order::Finite(5), Order::Finite(3)]).unwrap()
}
