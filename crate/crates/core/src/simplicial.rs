//! Finite pointed simplicial sets stored by their nondegenerate cells.
//!
//! Degenerate simplices are virtual: a [`SimplexRef`] is a strictly
//! decreasing degeneracy word applied to a nondegenerate cell.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::{word_is_normal, OrdinalMap};

/// `s_{j_r} ... s_{j_1} x` with `j_r > ... > j_1`; `base` indexes a cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub degeneracy_word: Vec<usize>,
    pub base: usize,
}

impl SimplexRef {
    pub fn cell(base: usize) -> SimplexRef {
        SimplexRef { degeneracy_word: vec![], base }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degeneracy_word.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub faces: Vec<SimplexRef>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSimplicialSet {
    pub name: String,
    /// `None` for unpointed sets such as standard simplices.
    pub basepoint: Option<usize>,
    pub cells: Vec<Cell>,
    /// Optional bound on materialized simplicial levels.
    pub level_cap: Option<usize>,
}

/// One broken rule found by [`FinSimplicialSet::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub cell: String,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cell {}: {}", self.cell, self.rule)
    }
}

impl FinSimplicialSet {
    pub fn dim_of(&self, s: &SimplexRef) -> usize {
        self.cells[s.base].dim + s.degeneracy_word.len()
    }

    pub fn max_dim(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn cell_index(&self, id: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.id == id)
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().enumerate().filter(move |(_, c)| c.dim == d).map(|(i, _)| i)
    }

    pub fn is_basepoint(&self, s: &SimplexRef) -> bool {
        self.basepoint == Some(s.base)
    }

    /// The totally degenerate basepoint simplex in dimension `n`.
    pub fn basepoint_simplex(&self, n: usize) -> SimplexRef {
        let base = self.basepoint.expect("pointed simplicial set required");
        SimplexRef { degeneracy_word: (0..n).rev().collect(), base }
    }

    /// `α^*(s)` in normal form.
    pub fn apply_operator(&self, alpha: &OrdinalMap, s: &SimplexRef) -> Result<SimplexRef> {
        let n = self.dim_of(s);
        if alpha.target_arity != n {
            return Err(Error::Dimension(format!("operator into [{}] applied to a {n}-simplex", alpha.target_arity)));
        }
        Ok(self.apply_unchecked(alpha, s))
    }

    pub(crate) fn apply_unchecked(&self, alpha: &OrdinalMap, s: &SimplexRef) -> SimplexRef {
        let n = self.dim_of(s);
        let sigma = OrdinalMap::from_surjection_word(n, &s.degeneracy_word);
        let (epi, mono) = sigma.compose(alpha).epi_mono();
        let r = self.apply_mono(&mono, s.base);
        let tau = OrdinalMap::from_surjection_word(self.dim_of(&r), &r.degeneracy_word);
        SimplexRef { degeneracy_word: tau.compose(&epi).surjection_word(), base: r.base }
    }

    fn apply_mono(&self, delta: &OrdinalMap, cell: usize) -> SimplexRef {
        if delta.is_identity() {
            return SimplexRef::cell(cell);
        }
        let c = *delta.missed().last().unwrap();
        let rest = OrdinalMap {
            source_arity: delta.source_arity,
            target_arity: delta.target_arity - 1,
            values: delta.values.iter().map(|&v| if v > c { v - 1 } else { v }).collect(),
        };
        let face = &self.cells[cell].faces[c];
        self.apply_unchecked(&rest, face)
    }

    pub fn face(&self, i: usize, s: &SimplexRef) -> SimplexRef {
        let n = self.dim_of(s);
        self.apply_unchecked(&OrdinalMap::coface(n, i), s)
    }

    pub fn degeneracy(&self, j: usize, s: &SimplexRef) -> SimplexRef {
        let n = self.dim_of(s);
        self.apply_unchecked(&OrdinalMap::codegeneracy(n, j), s)
    }

    /// Every simplex of level `n` in canonical order: cells in stored order,
    /// then degeneracy words in lexicographic order.
    pub fn simplices(&self, n: usize) -> Vec<SimplexRef> {
        let mut out = Vec::new();
        for (idx, c) in self.cells.iter().enumerate() {
            if c.dim > n {
                continue;
            }
            let mut words: Vec<Vec<usize>> = subsets(n, n - c.dim)
                .into_iter()
                .map(|mut s| {
                    s.reverse();
                    s
                })
                .collect();
            words.sort();
            out.extend(words.into_iter().map(|w| SimplexRef { degeneracy_word: w, base: idx }));
        }
        out
    }

    /// Number of simplices at level `n`, without enumerating.
    pub fn level_size(&self, n: usize) -> u128 {
        self.cells.iter().filter(|c| c.dim <= n).map(|c| binomial(n, n - c.dim)).sum()
    }

    /// Checks the structure and all simplicial identities on stored cells.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashMap::new();
        for c in &self.cells {
            if seen.insert(c.id.clone(), ()).is_some() {
                out.push(Violation { cell: c.id.clone(), rule: "duplicate cell id".into() });
            }
        }
        if let Some(b) = self.basepoint {
            match self.cells.get(b) {
                Some(c) if c.dim == 0 => {}
                _ => out.push(Violation { cell: "<basepoint>".into(), rule: "basepoint must be a 0-cell".into() }),
            }
        }
        let mut structural_ok = true;
        for c in &self.cells {
            let expected = if c.dim == 0 { 0 } else { c.dim + 1 };
            if c.faces.len() != expected {
                out.push(Violation { cell: c.id.clone(), rule: format!("expected {expected} faces, found {}", c.faces.len()) });
                structural_ok = false;
                continue;
            }
            for (i, f) in c.faces.iter().enumerate() {
                if f.base >= self.cells.len() {
                    out.push(Violation { cell: c.id.clone(), rule: format!("face d{i} names an unknown cell") });
                    structural_ok = false;
                    continue;
                }
                let fd = self.dim_of(f);
                if fd + 1 != c.dim {
                    out.push(Violation { cell: c.id.clone(), rule: format!("face d{i} has dimension {fd}, expected {}", c.dim - 1) });
                    structural_ok = false;
                }
                if !word_is_normal(&f.degeneracy_word, fd) {
                    out.push(Violation { cell: c.id.clone(), rule: format!("face d{i} has a degeneracy word not in decreasing normal form") });
                    structural_ok = false;
                }
            }
        }
        if !structural_ok {
            return out;
        }
        for (idx, c) in self.cells.iter().enumerate() {
            if c.dim < 2 {
                continue;
            }
            let x = SimplexRef::cell(idx);
            for j in 1..=c.dim {
                for i in 0..j {
                    let lhs = self.face(i, &self.face(j, &x));
                    let rhs = self.face(j - 1, &self.face(i, &x));
                    if lhs != rhs {
                        out.push(Violation {
                            cell: c.id.clone(),
                            rule: format!("d{i} d{j} = d{} d{i} fails", j - 1),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ref_to_string(&self, s: &SimplexRef) -> String {
        let mut parts: Vec<String> = s.degeneracy_word.iter().map(|j| format!("s{j}")).collect();
        parts.push(self.cells[s.base].id.clone());
        parts.join(" ")
    }

    /// Cells sorted by dimension (stable), keeping face references intact.
    pub(crate) fn sorted_by_dim(mut self) -> FinSimplicialSet {
        let mut order: Vec<usize> = (0..self.cells.len()).collect();
        order.sort_by_key(|&i| self.cells[i].dim);
        let mut new_index = vec![0; order.len()];
        for (k, &i) in order.iter().enumerate() {
            new_index[i] = k;
        }
        let old = std::mem::take(&mut self.cells);
        self.cells = order
            .iter()
            .map(|&i| {
                let mut c = old[i].clone();
                for f in &mut c.faces {
                    f.base = new_index[f.base];
                }
                c
            })
            .collect();
        self.basepoint = self.basepoint.map(|b| new_index[b]);
        self
    }
}

/// `k`-element subsets of `0..n`, increasing, in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}
