//! Bounded chain complexes, chain maps, cones and shifts.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::Ring;

/// A chain complex stored in degrees `lo..=hi`.
///
/// `bd[k]` is the boundary out of degree `lo + k`. If `complete` is false the
/// complex is only known through `hi`, so homology in degree `hi` is not
/// certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub ring: Ring,
    pub lo: i64,
    pub dims: Vec<usize>,
    pub bd: Vec<Mat>,
    pub complete: bool,
}

impl ChainComplex {
    pub fn zero(ring: Ring) -> ChainComplex {
        ChainComplex { ring, lo: 0, dims: vec![], bd: vec![], complete: true }
    }

    /// Builds a complex from boundary matrices; `bd[k]` leaves degree `lo+k`.
    pub fn new(ring: Ring, lo: i64, dims: Vec<usize>, bd: Vec<Mat>, complete: bool) -> Result<ChainComplex> {
        if dims.len() != bd.len() {
            return Err(Error::Dimension("one boundary per degree expected".into()));
        }
        for (k, m) in bd.iter().enumerate() {
            let below = if k == 0 { 0 } else { dims[k - 1] };
            if m.rows() != below || m.cols() != dims[k] {
                return Err(Error::Dimension(format!("boundary out of degree {} has shape {}x{}", lo + k as i64, m.rows(), m.cols())));
            }
        }
        let c = ChainComplex { ring, lo, dims, bd, complete };
        c.check_d_squared()?;
        Ok(c)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    /// Highest degree whose homology is determined by the stored data.
    pub fn certified_through(&self) -> i64 {
        if self.complete {
            i64::MAX
        } else {
            self.hi() - 1
        }
    }

    /// Highest degree for which chains are available (zero above if complete).
    pub fn available_through(&self) -> i64 {
        if self.complete {
            i64::MAX
        } else {
            self.hi()
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    /// Boundary `C_n -> C_{n-1}` (zero matrix outside the stored range).
    pub fn boundary(&self, n: i64) -> Mat {
        if n < self.lo || n > self.hi() {
            Mat::zeros(self.dim(n - 1), self.dim(n))
        } else {
            self.bd[(n - self.lo) as usize].clone()
        }
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for n in self.lo + 1..=self.hi() {
            if !self.boundary(n - 1).mul(self.ring, &self.boundary(n)).is_zero() {
                return Err(Error::Internal(format!("boundary squares to nonzero at degree {n}")));
            }
        }
        Ok(())
    }

    /// Restricts to degrees `<= top`, dropping completeness if data is cut.
    pub fn truncate_above(&self, top: i64) -> ChainComplex {
        if top >= self.hi() {
            return self.clone();
        }
        let keep = (top - self.lo + 1).max(0) as usize;
        ChainComplex {
            ring: self.ring,
            lo: self.lo,
            dims: self.dims[..keep].to_vec(),
            bd: self.bd[..keep].to_vec(),
            complete: false,
        }
    }

    /// `Σ^k C`: degrees raised by `k`, boundary multiplied by `(-1)^k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let s = self.ring.sign(k.unsigned_abs() as usize);
        ChainComplex {
            ring: self.ring,
            lo: self.lo + k,
            dims: self.dims.clone(),
            bd: self.bd.iter().map(|m| m.scale(self.ring, s)).collect(),
            complete: self.complete,
        }
    }

    /// Algebraic loops: shift down by one.
    pub fn loops(&self) -> ChainComplex {
        self.shift(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Canonical direct sum.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let lo = self.lo.min(other.lo);
        let hi = self.available_through().min(other.available_through());
        let hi = if hi == i64::MAX { self.hi().max(other.hi()) } else { hi };
        let mut dims = Vec::new();
        let mut bd = Vec::new();
        for n in lo..=hi {
            dims.push(self.dim(n) + other.dim(n));
            bd.push(Mat::block_diag(&[self.boundary(n), other.boundary(n)]));
        }
        ChainComplex { ring: self.ring, lo, dims, bd, complete: self.complete && other.complete }
    }
}

/// Degreewise matrices `f_n: A_n -> B_n` commuting with boundaries.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    /// `maps[k]` acts on degree `source.lo + k`.
    pub maps: Vec<Mat>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, maps: Vec<Mat>) -> Result<ChainMap> {
        if maps.len() != source.dims.len() {
            return Err(Error::Dimension("one matrix per source degree expected".into()));
        }
        let f = ChainMap { source, target, maps };
        for n in f.source.lo..=f.source.hi() {
            let m = f.at(n);
            if m.rows() != f.target.dim(n) || m.cols() != f.source.dim(n) {
                return Err(Error::Dimension(format!("chain map at degree {n} has wrong shape")));
            }
        }
        f.check()?;
        Ok(f)
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        let maps = c.dims.iter().map(|&d| Mat::identity(d)).collect();
        ChainMap { source: c.clone(), target: c.clone(), maps }
    }

    pub fn zero(a: &ChainComplex, b: &ChainComplex) -> ChainMap {
        let maps = (a.lo..=a.hi()).map(|n| Mat::zeros(b.dim(n), a.dim(n))).collect();
        ChainMap { source: a.clone(), target: b.clone(), maps }
    }

    pub fn at(&self, n: i64) -> Mat {
        if n < self.source.lo || n > self.source.hi() {
            Mat::zeros(self.target.dim(n), self.source.dim(n))
        } else {
            self.maps[(n - self.source.lo) as usize].clone()
        }
    }

    /// Checks `∂f = f∂` wherever both sides are defined.
    pub fn check(&self) -> Result<()> {
        let r = self.source.ring;
        let top = self.source.hi().min(self.target.available_through());
        for n in self.source.lo..=top {
            let lhs = self.target.boundary(n).mul(r, &self.at(n));
            let rhs = self.at(n - 1).mul(r, &self.source.boundary(n));
            if lhs != rhs {
                return Err(Error::Validation(format!("chain map does not commute with boundary at degree {n}")));
            }
        }
        Ok(())
    }

    pub fn compose(&self, g: &ChainMap) -> ChainMap {
        // self ∘ g
        let r = self.source.ring;
        let maps = (g.source.lo..=g.source.hi()).map(|n| self.at(n).mul(r, &g.at(n))).collect();
        ChainMap { source: g.source.clone(), target: self.target.clone(), maps }
    }

    /// Mapping cone with `∂(a, b) = (-∂a, f(a) + ∂b)`, `cone_n = A_{n-1} ⊕ B_n`.
    pub fn cone(&self) -> ChainComplex {
        let (a, b) = (&self.source, &self.target);
        let r = a.ring;
        let lo = (a.lo + 1).min(b.lo);
        let avail = a.available_through().saturating_add(1).min(b.available_through());
        let complete = a.complete && b.complete;
        let hi = if avail == i64::MAX { (a.hi() + 1).max(b.hi()) } else { avail };
        let mut dims = Vec::new();
        let mut bd = Vec::new();
        for n in lo..=hi {
            dims.push(a.dim(n - 1) + b.dim(n));
            let blocks = vec![
                vec![Some(a.boundary(n - 1).neg(r)), None],
                vec![Some(self.at(n - 1)), Some(b.boundary(n))],
            ];
            bd.push(Mat::block(&[a.dim(n - 2), b.dim(n - 1)], &[a.dim(n - 1), b.dim(n)], &blocks));
        }
        ChainComplex { ring: r, lo, dims, bd, complete }
    }

    /// Mapping fiber, `Σ^{-1}` of the cone.
    pub fn fiber(&self) -> ChainComplex {
        self.cone().shift(-1)
    }
}



#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn circle_like() -> ChainComplex {
        // Z in degrees 0 and 1 with zero boundary
        let z = Ring::Integers;
        ChainComplex::new(z, 0, vec![1, 1], vec![Mat::zeros(0, 1), Mat::zeros(1, 1)], true).unwrap()
    }

    #[test]
    fn cone_of_identity_squares_to_zero() {
        let c = circle_like();
        let cone = ChainMap::identity(&c).cone();
        cone.check_d_squared().unwrap();
        assert_eq!(cone.dims, vec![1, 2, 1]);
    }

    #[test]
    fn rejects_bad_boundary() {
        let z = Ring::Integers;
        let d1 = Mat::from_dense(z, 1, 1, &[1]);
        let d2 = Mat::from_dense(z, 1, 1, &[1]);
        assert!(ChainComplex::new(z, 0, vec![1, 1, 1], vec![Mat::zeros(0, 1), d1, d2], true).is_err());
    }
}
