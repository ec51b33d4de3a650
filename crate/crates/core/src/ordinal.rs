//! Weakly monotone maps `[m] -> [n]` and their epi-mono factorization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrdinalMap {
    pub source_arity: usize,
    pub target_arity: usize,
    pub values: Vec<usize>,
}

impl OrdinalMap {
    pub fn new(source_arity: usize, target_arity: usize, values: Vec<usize>) -> Result<OrdinalMap> {
        if values.len() != source_arity + 1 {
            return Err(Error::Dimension(format!("[{source_arity}] needs {} values", source_arity + 1)));
        }
        if values.iter().any(|&v| v > target_arity) || values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Input(format!("{values:?} is not a monotone map into [{target_arity}]")));
        }
        Ok(OrdinalMap { source_arity, target_arity, values })
    }

    pub fn identity(n: usize) -> OrdinalMap {
        OrdinalMap { source_arity: n, target_arity: n, values: (0..=n).collect() }
    }

    /// The coface `δ^i: [n-1] -> [n]` skipping `i`.
    pub fn coface(n: usize, i: usize) -> OrdinalMap {
        assert!(n >= 1 && i <= n);
        let values = (0..n).map(|k| if k < i { k } else { k + 1 }).collect();
        OrdinalMap { source_arity: n - 1, target_arity: n, values }
    }

    /// The codegeneracy `σ^j: [n+1] -> [n]` hitting `j` twice.
    pub fn codegeneracy(n: usize, j: usize) -> OrdinalMap {
        assert!(j <= n);
        let values = (0..=n + 1).map(|k| if k <= j { k } else { k - 1 }).collect();
        OrdinalMap { source_arity: n + 1, target_arity: n, values }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OrdinalMap) -> OrdinalMap {
        assert_eq!(other.target_arity, self.source_arity, "non-composable ordinal maps");
        OrdinalMap {
            source_arity: other.source_arity,
            target_arity: self.target_arity,
            values: other.values.iter().map(|&v| self.values[v]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.target_arity
            && self.values.windows(2).all(|w| w[1] <= w[0] + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.source_arity == self.target_arity && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self = mono ∘ epi`, returned as `(epi, mono)`.
    pub fn epi_mono(&self) -> (OrdinalMap, OrdinalMap) {
        let mut image: Vec<usize> = self.values.clone();
        image.dedup();
        let l = image.len() - 1;
        let epi_values = self.values.iter().map(|v| image.binary_search(v).unwrap()).collect();
        let epi = OrdinalMap { source_arity: self.source_arity, target_arity: l, values: epi_values };
        let mono = OrdinalMap { source_arity: l, target_arity: self.target_arity, values: image };
        (epi, mono)
    }

    /// Degeneracy word of a surjection, in decreasing order: positions `j`
    /// with `σ(j) = σ(j+1)`.
    pub fn surjection_word(&self) -> Vec<usize> {
        debug_assert!(self.is_surjective());
        let mut w: Vec<usize> = (0..self.source_arity).filter(|&j| self.values[j] == self.values[j + 1]).collect();
        w.reverse();
        w
    }

    /// Surjection `[n] -> [n - |word|]` with the given degeneracy word.
    pub fn from_surjection_word(n: usize, word: &[usize]) -> OrdinalMap {
        let mut values = Vec::with_capacity(n + 1);
        let mut v = 0;
        for j in 0..=n {
            values.push(v);
            if j < n && !word.contains(&j) {
                v += 1;
            }
        }
        OrdinalMap { source_arity: n, target_arity: v, values }
    }

    /// Values of `[target]` missed by an injective map, increasing.
    pub fn missed(&self) -> Vec<usize> {
        (0..=self.target_arity).filter(|v| self.values.binary_search(v).is_err()).collect()
    }

    /// All surjections out of `[n]`, listed by their words.
    pub fn all_surjections_from(n: usize) -> Vec<OrdinalMap> {
        (0u32..(1 << n))
            .map(|mask| {
                let mut w: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
                w.reverse();
                OrdinalMap::from_surjection_word(n, &w)
            })
            .collect()
    }

    /// All monotone maps `[m] -> [n]` in lexicographic order of values.
    pub fn all_maps(m: usize, n: usize) -> Vec<OrdinalMap> {
        let mut out = Vec::new();
        let mut vals = vec![0usize; m + 1];
        fn rec(k: usize, lo: usize, n: usize, m: usize, vals: &mut Vec<usize>, out: &mut Vec<OrdinalMap>) {
            if k > m {
                out.push(OrdinalMap { source_arity: m, target_arity: n, values: vals.clone() });
                return;
            }
            for v in lo..=n {
                vals[k] = v;
                rec(k + 1, v, n, m, vals, out);
            }
        }
        rec(0, 0, n, m, &mut vals, &mut out);
        out
    }
}

/// Checks a degeneracy word is strictly decreasing and valid on a simplex of
/// the resulting dimension.
pub fn word_is_normal(word: &[usize], dim: usize) -> bool {
    word.windows(2).all(|w| w[0] > w[1]) && word.iter().all(|&j| j < dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cosimplicial_identities() {
        for n in 2..5 {
            for j in 0..=n {
                for i in 0..j {
                    // δ^j δ^i = δ^i δ^{j-1}
                    let l = OrdinalMap::coface(n, j).compose(&OrdinalMap::coface(n - 1, i));
                    let r = OrdinalMap::coface(n, i).compose(&OrdinalMap::coface(n - 1, j - 1));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn word_round_trip() {
        let s = OrdinalMap::from_surjection_word(4, &[3, 1]);
        assert_eq!(s.values, vec![0, 1, 1, 2, 2]);
        assert_eq!(s.surjection_word(), vec![3, 1]);
        assert_eq!(OrdinalMap::all_surjections_from(3).len(), 8);
    }

    fn arb_map() -> impl Strategy<Value = OrdinalMap> {
        (0usize..5, 0usize..5).prop_flat_map(|(m, n)| {
            proptest::collection::vec(0..=n, m + 1).prop_map(move |mut v| {
                v.sort_unstable();
                OrdinalMap::new(m, n, v).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn epi_mono_recomposes(f in arb_map()) {
            let (e, m) = f.epi_mono();
            prop_assert!(e.is_surjective());
            prop_assert!(m.is_injective());
            prop_assert_eq!(m.compose(&e), f.clone());
            let (e2, m2) = m.compose(&e).epi_mono();
            prop_assert_eq!((e2, m2), (e, m));
        }

        #[test]
        fn composition_associative(a in arb_map(), b in arb_map(), c in arb_map()) {
            let b = OrdinalMap { source_arity: b.source_arity, target_arity: a.source_arity,
                values: b.values.iter().map(|&v| v.min(a.source_arity)).collect() };
            let c = OrdinalMap { source_arity: c.source_arity, target_arity: b.source_arity,
                values: c.values.iter().map(|&v| v.min(b.source_arity)).collect() };
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            prop_assert_eq!(a.compose(&OrdinalMap::identity(a.source_arity)), a.clone());
        }
    }
}
