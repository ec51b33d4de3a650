//! Simplicial sets with every simplex enumerated up to a level cap, and
//! maps between them.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::simplicial::{FinSimplicialSet, SimplexRef};

/// Enumeration budget per level (number of simplices).
pub const DEFAULT_BUDGET: u64 = 1 << 20;

/// A simplicial set given by explicit face and degeneracy tables on levels
/// `0..=cap`. Simplices are indices `0..sizes[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumSpace {
    pub name: String,
    pub sizes: Vec<usize>,
    /// `faces[n][i][x]` is `d_i x` for `x` in level `n >= 1`.
    pub faces: Vec<Vec<Vec<u32>>>,
    /// `degens[n][j][x]` is `s_j x` for `x` in level `n < cap`.
    pub degens: Vec<Vec<Vec<u32>>>,
    /// Basepoint index per level, if pointed.
    pub basepoint: Option<Vec<u32>>,
}

impl EnumSpace {
    pub fn cap(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn is_base(&self, n: usize, x: u32) -> bool {
        self.basepoint.as_ref().is_some_and(|b| b[n] == x)
    }

    /// Keeps levels `0..=cap`.
    pub fn truncate(&self, cap: usize) -> EnumSpace {
        let mut x = self.clone();
        x.sizes.truncate(cap + 1);
        x.faces.truncate(cap + 1);
        x.degens.truncate(cap + 1);
        x.degens[cap] = vec![];
        if let Some(b) = x.basepoint.as_mut() {
            b.truncate(cap + 1);
        }
        x
    }

    /// Enumerates `X` on levels `0..=cap` in the canonical simplex order.
    pub fn from_fin(x: &FinSimplicialSet, cap: usize, budget: u64) -> Result<(EnumSpace, Vec<Vec<SimplexRef>>)> {
        let cap = x.level_cap.map_or(cap, |c| c.min(cap));
        let mut levels: Vec<Vec<SimplexRef>> = Vec::new();
        let mut index: Vec<HashMap<SimplexRef, u32>> = Vec::new();
        for n in 0..=cap {
            let size = x.level_size(n);
            if size > budget as u128 {
                return Err(Error::Budget { level: n, needed: size.to_string(), budget });
            }
            let s = x.simplices(n);
            index.push(s.iter().enumerate().map(|(k, r)| (r.clone(), k as u32)).collect());
            levels.push(s);
        }
        let faces = (0..=cap)
            .map(|n| {
                if n == 0 {
                    return vec![];
                }
                (0..=n).map(|i| levels[n].iter().map(|s| index[n - 1][&x.face(i, s)]).collect()).collect()
            })
            .collect();
        let degens = (0..=cap)
            .map(|n| {
                if n == cap {
                    return vec![];
                }
                (0..=n).map(|j| levels[n].iter().map(|s| index[n + 1][&x.degeneracy(j, s)]).collect()).collect()
            })
            .collect();
        let basepoint = x.basepoint.map(|_| (0..=cap).map(|n| index[n][&x.basepoint_simplex(n)]).collect());
        let sizes = levels.iter().map(Vec::len).collect();
        Ok((EnumSpace { name: x.name.clone(), sizes, faces, degens, basepoint }, levels))
    }

    /// Checks simplicial identities on every enumerated simplex.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let cap = self.cap();
        for n in 2..=cap {
            for j in 1..=n {
                for i in 0..j {
                    for x in 0..self.sizes[n] {
                        let l = self.faces[n - 1][i][self.faces[n][j][x] as usize];
                        let r = self.faces[n - 1][j - 1][self.faces[n][i][x] as usize];
                        if l != r {
                            out.push(format!("d{i} d{j} fails on simplex {x} of level {n}"));
                            break;
                        }
                    }
                }
            }
        }
        for n in 0..cap {
            for j in 0..=n {
                for x in 0..self.sizes[n] {
                    let y = self.degens[n][j][x] as usize;
                    if self.faces[n + 1][j][y] as usize != x || self.faces[n + 1][j + 1][y] as usize != x {
                        out.push(format!("d s{j} = id fails on simplex {x} of level {n}"));
                        break;
                    }
                }
            }
        }
        out
    }
}

/// A map of enumerated simplicial sets, levelwise on indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMap {
    pub maps: Vec<Vec<u32>>,
}

impl SpaceMap {
    /// Commutation with faces and degeneracies, and basepoint preservation.
    pub fn validate(&self, a: &EnumSpace, b: &EnumSpace) -> Vec<String> {
        let mut out = Vec::new();
        let cap = self.maps.len() - 1;
        for n in 0..=cap {
            if let (Some(ba), Some(bb)) = (&a.basepoint, &b.basepoint) {
                if self.maps[n][ba[n] as usize] != bb[n] {
                    out.push(format!("basepoint not preserved at level {n}"));
                }
            }
            for x in 0..a.sizes[n] {
                let fx = self.maps[n][x] as usize;
                if n >= 1 {
                    for i in 0..=n {
                        if self.maps[n - 1][a.faces[n][i][x] as usize] != b.faces[n][i][fx] {
                            out.push(format!("does not commute with d{i} at level {n}"));
                        }
                    }
                }
                if n < cap {
                    for j in 0..=n {
                        if self.maps[n + 1][a.degens[n][j][x] as usize] != b.degens[n][j][fx] {
                            out.push(format!("does not commute with s{j} at level {n}"));
                        }
                    }
                }
            }
        }
        out.dedup();
        out
    }

    pub fn compose(&self, g: &SpaceMap) -> SpaceMap {
        SpaceMap {
            maps: self.maps.iter().zip(&g.maps).map(|(f, g)| g.iter().map(|&x| f[x as usize]).collect()).collect(),
        }
    }
}
