//! Exact homology and windowed connectivity verdicts.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, ChainMap};
use crate::linalg;
use crate::ring::Ring;

/// One degree of a graded abelian group: free rank plus elementary divisors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupEntry {
    pub degree: i64,
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl GroupEntry {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Homology of a complex, degree by degree, with the certification limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedGroup {
    pub ring: Ring,
    pub entries: Vec<GroupEntry>,
    /// Degrees above this are not determined by the computed data.
    pub certified_through: i64,
}

impl GradedGroup {
    pub fn at(&self, n: i64) -> GroupEntry {
        self.entries
            .iter()
            .find(|e| e.degree == n)
            .cloned()
            .unwrap_or(GroupEntry { degree: n, rank: 0, torsion: vec![] })
    }

    /// Entries in degrees `<= top` that are nonzero and certified.
    pub fn nonzero_through(&self, top: i64) -> Vec<GroupEntry> {
        self.entries
            .iter()
            .filter(|e| e.degree <= top.min(self.certified_through) && !e.is_zero())
            .cloned()
            .collect()
    }

    /// Same groups in all certified degrees `lo..=top` of both sides.
    pub fn agrees_with(&self, other: &GradedGroup, top: i64) -> bool {
        let top = top.min(self.certified_through).min(other.certified_through);
        let lo = self
            .entries
            .iter()
            .chain(&other.entries)
            .map(|e| e.degree)
            .min()
            .unwrap_or(0);
        (lo..=top).all(|n| self.at(n) == other.at(n))
    }

    /// Re-indexes degrees by `k`.
    pub fn shifted(&self, k: i64) -> GradedGroup {
        GradedGroup {
            ring: self.ring,
            entries: self.entries.iter().map(|e| GroupEntry { degree: e.degree + k, ..e.clone() }).collect(),
            certified_through: self.certified_through.saturating_add(k),
        }
    }
}

/// Homology of every stored degree. Over `Z` through Smith normal form, over
/// `F_p` through ranks.
pub fn homology(c: &ChainComplex) -> GradedGroup {
    let r = c.ring;
    let mut entries = Vec::new();
    let hi = c.hi();
    let ranks: Vec<usize> = (c.lo..=hi + 1).map(|n| linalg::rank(r, &c.boundary(n))).collect();
    for n in c.lo..=hi {
        let k = (n - c.lo) as usize;
        let dim = c.dim(n);
        let rank = dim - ranks[k] - ranks[k + 1];
        let torsion = if r.is_field() || n == hi {
            vec![]
        } else {
            let m = c.boundary(n + 1);
            if m.is_zero() {
                vec![]
            } else {
                linalg::snf(&m).diag.into_iter().filter(|&d| d > 1).collect()
            }
        };
        entries.push(GroupEntry { degree: n, rank, torsion });
    }
    GradedGroup { ring: r, entries, certified_through: c.certified_through() }
}

/// Connectivity values with a top element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Conn {
    Finite(i64),
    Infinite,
}

impl Conn {
    pub fn plus(self, other: Conn) -> Conn {
        match (self, other) {
            (Conn::Finite(a), Conn::Finite(b)) => Conn::Finite(a + b),
            _ => Conn::Infinite,
        }
    }

    pub fn add(self, k: i64) -> Conn {
        self.plus(Conn::Finite(k))
    }
}

impl PartialOrd for Conn {
    fn partial_cmp(&self, other: &Conn) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Conn {
    fn cmp(&self, other: &Conn) -> Ordering {
        match (self, other) {
            (Conn::Finite(a), Conn::Finite(b)) => a.cmp(b),
            (Conn::Finite(_), Conn::Infinite) => Ordering::Less,
            (Conn::Infinite, Conn::Finite(_)) => Ordering::Greater,
            (Conn::Infinite, Conn::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Conn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conn::Finite(k) => write!(f, "{k}"),
            Conn::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Exactly,
    AtLeast,
}

/// Measured connectivity. `AtLeast(k)` means nothing nonzero was found in
/// the certified degrees `<= k`; it never claims more than the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub k: i64,
    pub window: i64,
}

impl Verdict {
    pub fn exactly(k: i64, window: i64) -> Verdict {
        Verdict { kind: VerdictKind::Exactly, k, window }
    }

    pub fn at_least(k: i64, window: i64) -> Verdict {
        Verdict { kind: VerdictKind::AtLeast, k, window }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == VerdictKind::Exactly
    }

    /// Does the measurement contradict a claimed lower bound?
    pub fn violates(&self, claim: Conn) -> bool {
        match claim {
            Conn::Infinite => self.is_exact(),
            Conn::Finite(c) => self.is_exact() && self.k < c,
        }
    }

    /// Is the claim fully confirmed by the measurement?
    pub fn confirms(&self, claim: Conn) -> bool {
        match claim {
            Conn::Infinite => false,
            Conn::Finite(c) => self.k >= c,
        }
    }

    /// Re-indexes by `d` (e.g. converting cartesian to cocartesian degree).
    pub fn offset(&self, d: i64) -> Verdict {
        Verdict { kind: self.kind, k: self.k + d, window: self.window + d }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VerdictKind::Exactly => write!(f, "Exactly({}) [window {}]", self.k, self.window),
            VerdictKind::AtLeast => write!(f, "AtLeast({}) [window {}]", self.k, self.window),
        }
    }
}

/// Largest `k` with `H_i(c) = 0` for all `i <= k`, measured up to `window`.
///
/// The effective window is lowered to the certified range of `c` if needed.
pub fn complex_connectivity(c: &ChainComplex, window: i64) -> Verdict {
    let window = window.min(c.certified_through());
    let h = homology(c);
    for e in &h.entries {
        if e.degree > window {
            break;
        }
        if !e.is_zero() {
            return Verdict::exactly(e.degree - 1, window);
        }
    }
    Verdict::at_least(window, window)
}

/// Connectivity of a chain map: `H_i(cone f) = 0` for `i <= k`.
pub fn map_connectivity(f: &ChainMap, window: i64) -> Verdict {
    complex_connectivity(&f.cone(), window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat;

    fn moore_z2_chains() -> ChainComplex {
        // Z <-2- Z in degrees 2, 3
        let z = Ring::Integers;
        ChainComplex::new(
            z,
            2,
            vec![1, 1],
            vec![Mat::zeros(0, 1), Mat::from_dense(z, 1, 1, &[2])],
            true,
        )
        .unwrap()
    }

    #[test]
    fn torsion_detected() {
        let h = homology(&moore_z2_chains());
        assert_eq!(h.at(2), GroupEntry { degree: 2, rank: 0, torsion: vec![2] });
        assert!(h.at(3).is_zero());
    }

    #[test]
    fn zero_self_map_is_one_connected() {
        let c = moore_z2_chains();
        let v = map_connectivity(&ChainMap::zero(&c, &c), 5);
        assert_eq!(v, Verdict::exactly(1, 5));
        let id = map_connectivity(&ChainMap::identity(&c), 5);
        assert_eq!(id, Verdict::at_least(5, 5));
    }

    #[test]
    fn conn_arithmetic() {
        assert_eq!(Conn::Infinite.add(3), Conn::Infinite);
        assert!(Conn::Finite(100) < Conn::Infinite);
        assert_eq!(Conn::Finite(3).plus(Conn::Finite(4)), Conn::Finite(7));
    }
}
