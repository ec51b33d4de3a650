//! Levelwise free simplicial modules and linear maps between them.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::Ring;

/// A simplicial module known on levels `0..=cap`, each level free with a
/// distinguished basis.
///
/// `faces[n][i]` is `d_i: A_n -> A_{n-1}` (empty for `n = 0`) and
/// `degens[n][j]` is `s_j: A_n -> A_{n+1}` (empty for `n = cap`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialModule {
    pub ring: Ring,
    pub name: String,
    pub dims: Vec<usize>,
    pub faces: Vec<Vec<Mat>>,
    pub degens: Vec<Vec<Mat>>,
    /// Degeneracies send basis vectors to basis vectors (true for modules
    /// freely generated by a simplicial set).
    pub set_like: bool,
}

impl SimplicialModule {
    pub fn cap(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn zero(ring: Ring, cap: usize) -> SimplicialModule {
        SimplicialModule {
            ring,
            name: "0".into(),
            dims: vec![0; cap + 1],
            faces: (0..=cap).map(|n| if n == 0 { vec![] } else { vec![Mat::zeros(0, 0); n + 1] }).collect(),
            degens: (0..=cap).map(|n| if n == cap { vec![] } else { vec![Mat::zeros(0, 0); n + 1] }).collect(),
            set_like: true,
        }
    }

    pub fn face(&self, n: usize, i: usize) -> &Mat {
        &self.faces[n][i]
    }

    pub fn degen(&self, n: usize, j: usize) -> &Mat {
        &self.degens[n][j]
    }

    /// Keeps levels `0..=cap`.
    pub fn truncate(&self, cap: usize) -> SimplicialModule {
        assert!(cap <= self.cap());
        let mut m = self.clone();
        m.dims.truncate(cap + 1);
        m.faces.truncate(cap + 1);
        m.degens.truncate(cap + 1);
        m.degens[cap] = vec![];
        m
    }

    /// Every simplicial identity as a matrix equation, plus shapes.
    pub fn validate(&self) -> Vec<String> {
        let r = self.ring;
        let mut out = Vec::new();
        let cap = self.cap();
        for n in 0..=cap {
            let nf = if n == 0 { 0 } else { n + 1 };
            if self.faces[n].len() != nf {
                out.push(format!("level {n}: expected {nf} face maps"));
                return out;
            }
            let nd = if n == cap { 0 } else { n + 1 };
            if self.degens[n].len() != nd {
                out.push(format!("level {n}: expected {nd} degeneracy maps"));
                return out;
            }
            for (i, f) in self.faces[n].iter().enumerate() {
                if f.rows() != self.dims[n - 1] || f.cols() != self.dims[n] {
                    out.push(format!("d{i} at level {n} has wrong shape"));
                    return out;
                }
            }
            for (j, s) in self.degens[n].iter().enumerate() {
                if s.rows() != self.dims[n + 1] || s.cols() != self.dims[n] {
                    out.push(format!("s{j} at level {n} has wrong shape"));
                    return out;
                }
            }
        }
        for n in 2..=cap {
            for j in 1..=n {
                for i in 0..j {
                    let l = self.faces[n - 1][i].mul(r, &self.faces[n][j]);
                    let rr = self.faces[n - 1][j - 1].mul(r, &self.faces[n][i]);
                    if l != rr {
                        out.push(format!("d{i} d{j} = d{} d{i} fails at level {n}", j - 1));
                    }
                }
            }
        }
        for n in 0..cap.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let l = self.degens[n + 1][i].mul(r, &self.degens[n][j]);
                    let rr = self.degens[n + 1][j + 1].mul(r, &self.degens[n][i]);
                    if l != rr {
                        out.push(format!("s{i} s{j} = s{} s{i} fails at level {n}", j + 1));
                    }
                }
            }
        }
        for n in 0..cap {
            let id = Mat::identity(self.dims[n]);
            for j in 0..=n {
                let s = &self.degens[n][j];
                for i in 0..=n + 1 {
                    let l = self.faces[n + 1][i].mul(r, s);
                    let ok = if i == j || i == j + 1 {
                        l == id
                    } else if i < j {
                        // d_i s_j = s_{j-1} d_i
                        n >= 1 && l == self.degens[n - 1][j - 1].mul(r, &self.faces[n][i])
                    } else {
                        // d_i s_j = s_j d_{i-1}
                        n >= 1 && l == self.degens[n - 1][j].mul(r, &self.faces[n][i - 1])
                    };
                    if !ok {
                        out.push(format!("d{i} s{j} identity fails at level {n}"));
                    }
                }
            }
        }
        out
    }

    /// Levelwise direct sum.
    pub fn direct_sum(parts: &[&SimplicialModule]) -> SimplicialModule {
        let ring = parts[0].ring;
        let cap = parts.iter().map(|p| p.cap()).min().unwrap();
        let dims = (0..=cap).map(|n| parts.iter().map(|p| p.dims[n]).sum()).collect();
        let faces = (0..=cap)
            .map(|n| {
                let k = if n == 0 { 0 } else { n + 1 };
                (0..k).map(|i| Mat::block_diag(&parts.iter().map(|p| p.faces[n][i].clone()).collect::<Vec<_>>())).collect()
            })
            .collect();
        let degens = (0..=cap)
            .map(|n| {
                let k = if n == cap { 0 } else { n + 1 };
                (0..k).map(|j| Mat::block_diag(&parts.iter().map(|p| p.degens[n][j].clone()).collect::<Vec<_>>())).collect()
            })
            .collect();
        SimplicialModule {
            ring,
            name: parts.iter().map(|p| p.name.clone()).collect::<Vec<_>>().join(" + "),
            dims,
            faces,
            degens,
            set_like: parts.iter().all(|p| p.set_like),
        }
    }
}

/// Levelwise matrices `f_n: A_n -> B_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub ring: Ring,
    pub maps: Vec<Mat>,
}

impl LinearMap {
    pub fn identity(a: &SimplicialModule) -> LinearMap {
        LinearMap { ring: a.ring, maps: a.dims.iter().map(|&d| Mat::identity(d)).collect() }
    }

    pub fn zero(a: &SimplicialModule, b: &SimplicialModule) -> LinearMap {
        let cap = a.cap().min(b.cap());
        LinearMap { ring: a.ring, maps: (0..=cap).map(|n| Mat::zeros(b.dims[n], a.dims[n])).collect() }
    }

    pub fn cap(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn truncate(&self, cap: usize) -> LinearMap {
        LinearMap { ring: self.ring, maps: self.maps[..=cap].to_vec() }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &LinearMap) -> LinearMap {
        let cap = self.cap().min(g.cap());
        LinearMap { ring: self.ring, maps: (0..=cap).map(|n| self.maps[n].mul(self.ring, &g.maps[n])).collect() }
    }

    pub fn sub(&self, g: &LinearMap) -> LinearMap {
        let cap = self.cap().min(g.cap());
        LinearMap { ring: self.ring, maps: (0..=cap).map(|n| self.maps[n].sub(self.ring, &g.maps[n])).collect() }
    }

    pub fn add(&self, g: &LinearMap) -> LinearMap {
        let cap = self.cap().min(g.cap());
        LinearMap { ring: self.ring, maps: (0..=cap).map(|n| self.maps[n].add(self.ring, &g.maps[n])).collect() }
    }

    pub fn scale(&self, s: i64) -> LinearMap {
        LinearMap { ring: self.ring, maps: self.maps.iter().map(|m| m.scale(self.ring, s)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.maps.iter().all(|m| m.rows() == m.cols() && *m == Mat::identity(m.rows()))
    }

    /// Levels where `f` fails to commute with a face or degeneracy.
    pub fn validate(&self, a: &SimplicialModule, b: &SimplicialModule) -> Vec<String> {
        let r = self.ring;
        let mut out = Vec::new();
        let cap = self.cap();
        if cap > a.cap() || cap > b.cap() {
            out.push("map defined beyond the levels of its source or target".into());
            return out;
        }
        for n in 0..=cap {
            let f = &self.maps[n];
            if f.rows() != b.dims[n] || f.cols() != a.dims[n] {
                out.push(format!("level {n}: wrong shape"));
                return out;
            }
        }
        for n in 1..=cap {
            for i in 0..=n {
                if b.faces[n][i].mul(r, &self.maps[n]) != self.maps[n - 1].mul(r, &a.faces[n][i]) {
                    out.push(format!("does not commute with d{i} at level {n}"));
                }
            }
        }
        for n in 0..cap {
            for j in 0..=n {
                if b.degens[n][j].mul(r, &self.maps[n]) != self.maps[n + 1].mul(r, &a.degens[n][j]) {
                    out.push(format!("does not commute with s{j} at level {n}"));
                }
            }
        }
        out
    }

    pub fn check(&self, a: &SimplicialModule, b: &SimplicialModule) -> Result<()> {
        let v = self.validate(a, b);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v.join("; ")))
        }
    }
}
