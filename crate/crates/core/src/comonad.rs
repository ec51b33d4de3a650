//! The free/forgetful pair `(R̃, U)`, the comonad `K = R̃U`, its structure
//! maps, and K-coalgebras.
//!
//! Elements of an `F_p`-module level of dimension `d` are coded as integers
//! `sum v_j p^(d-1-j)`, so coordinate 0 is most significant and code order is
//! lexicographic coordinate order. The basis of `KY_n` is the nonzero
//! elements of `Y_n` in code order: basis index = code - 1.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::module::{LinearMap, SimplicialModule};
use crate::ring::Ring;
use crate::simplicial::FinSimplicialSet;
use crate::space::{EnumSpace, SpaceMap};

pub use crate::space::DEFAULT_BUDGET;

/// `R̃X = R(X)/R(*)` for an enumerated space.
pub fn free_reduced_enum(x: &EnumSpace, ring: Ring) -> SimplicialModule {
    let cap = x.cap();
    let bp = |n: usize| x.basepoint.as_ref().map(|b| b[n] as usize);
    let bidx = |n: usize, s: usize| -> Option<usize> {
        match bp(n) {
            Some(b) if s == b => None,
            Some(b) if s > b => Some(s - 1),
            _ => Some(s),
        }
    };
    let dims: Vec<usize> = (0..=cap).map(|n| x.sizes[n] - usize::from(bp(n).is_some())).collect();
    let faces = (0..=cap)
        .map(|n| {
            if n == 0 {
                return vec![];
            }
            (0..=n)
                .map(|i| {
                    let cols = (0..x.sizes[n])
                        .filter(|&s| bidx(n, s).is_some())
                        .map(|s| bidx(n - 1, x.faces[n][i][s] as usize).map(|r| (r, 1)).into_iter().collect())
                        .collect();
                    Mat::from_columns(ring, dims[n - 1], cols)
                })
                .collect()
        })
        .collect();
    let degens = (0..=cap)
        .map(|n| {
            if n == cap {
                return vec![];
            }
            (0..=n)
                .map(|j| {
                    let cols = (0..x.sizes[n])
                        .filter(|&s| bidx(n, s).is_some())
                        .map(|s| bidx(n + 1, x.degens[n][j][s] as usize).map(|r| (r, 1)).into_iter().collect())
                        .collect();
                    Mat::from_columns(ring, dims[n + 1], cols)
                })
                .collect()
        })
        .collect();
    SimplicialModule { ring, name: format!("R~({})", x.name), dims, faces, degens, set_like: true }
}

/// `R̃X` on levels `0..=cap`; the basis at level `n` is the non-basepoint
/// simplices of `X_n` in canonical order.
pub fn free_reduced(x: &FinSimplicialSet, ring: Ring, cap: usize) -> Result<SimplicialModule> {
    if x.basepoint.is_none() {
        return Err(Error::Precondition("reduced chains need a pointed simplicial set".into()));
    }
    let (e, _) = EnumSpace::from_fin(x, cap, u64::MAX)?;
    let mut m = free_reduced_enum(&e, ring);
    m.name = format!("R~({})", x.name);
    Ok(m)
}

/// Integer code of a coordinate vector.
pub fn encode(p: u64, v: &[i64]) -> u64 {
    v.iter().fold(0u64, |acc, &c| acc * p + c as u64)
}

pub fn decode(p: u64, d: usize, mut code: u64) -> Vec<i64> {
    let mut v = vec![0i64; d];
    for j in (0..d).rev() {
        v[j] = (code % p) as i64;
        code /= p;
    }
    v
}

fn field_prime(ring: Ring) -> Result<u64> {
    match ring {
        Ring::Integers => Err(Error::InfiniteUnderlying),
        Ring::PrimeField(p) => Ok(p),
    }
}

/// Number of elements of a level, or a budget error naming the level.
fn level_count(p: u64, d: usize, level: usize, budget: u64) -> Result<u64> {
    let exact = (p as u128).checked_pow(d as u32);
    match exact {
        Some(c) if c <= budget as u128 => Ok(c as u64),
        _ => Err(Error::Budget {
            level,
            needed: if p == 2 { format!("2^{d}") } else { format!("{p}^{d}") },
            budget,
        }),
    }
}

/// Image of the element with code `c` under `m`.
fn apply_code(ring: Ring, p: u64, m: &Mat, c: u64) -> u64 {
    let v = decode(p, m.cols(), c);
    encode(p, &m.apply(ring, &v))
}

/// `UY`: every element of every level, basepoint `0`.
pub fn underlying(y: &SimplicialModule, budget: u64) -> Result<EnumSpace> {
    let p = field_prime(y.ring)?;
    let cap = y.cap();
    let mut sizes = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        sizes.push(level_count(p, y.dims[n], n, budget)? as usize);
    }
    let faces = (0..=cap)
        .map(|n| {
            if n == 0 {
                return vec![];
            }
            (0..=n)
                .map(|i| (0..sizes[n] as u64).map(|c| apply_code(y.ring, p, &y.faces[n][i], c) as u32).collect())
                .collect()
        })
        .collect();
    let degens = (0..=cap)
        .map(|n| {
            if n == cap {
                return vec![];
            }
            (0..=n)
                .map(|j| (0..sizes[n] as u64).map(|c| apply_code(y.ring, p, &y.degens[n][j], c) as u32).collect())
                .collect()
        })
        .collect();
    Ok(EnumSpace { name: format!("U({})", y.name), sizes, faces, degens, basepoint: Some(vec![0; cap + 1]) })
}

/// `KY = R̃UY`.
pub fn comonad_k(y: &SimplicialModule, budget: u64) -> Result<SimplicialModule> {
    let u = underlying(y, budget)?;
    let mut k = free_reduced_enum(&u, y.ring);
    k.name = format!("K({})", y.name);
    Ok(k)
}

/// Predicts `dim (KY)_n = p^{dim Y_n} - 1` without building anything.
pub fn k_dims(ring: Ring, dims: &[usize], budget: u64) -> Result<Vec<usize>> {
    let p = field_prime(ring)?;
    dims.iter().enumerate().map(|(n, &d)| Ok(level_count(p, d, n, budget)? as usize - 1)).collect()
}

/// `ε: KY -> Y`, `[a] ↦ a`.
pub fn counit(y: &SimplicialModule) -> Result<LinearMap> {
    let p = field_prime(y.ring)?;
    let maps = y
        .dims
        .iter()
        .map(|&d| {
            let count = (p as u128).pow(d as u32) as u64;
            let cols = (1..count)
                .map(|c| decode(p, d, c).into_iter().enumerate().filter(|e| e.1 != 0).collect())
                .collect();
            Mat::from_columns(y.ring, d, cols)
        })
        .collect();
    Ok(LinearMap { ring: y.ring, maps })
}

/// Basis index in `KA_n` of the basis vector `e_k` of `A_n` (`dim A_n = d`).
pub fn basis_vector_index(p: u64, d: usize, k: usize) -> usize {
    (p.pow((d - 1 - k) as u32) - 1) as usize
}

/// Coaction-type map `A -> KA`, `e_k ↦ [e_k]`; for `A = KY` this is the
/// comultiplication `δ_Y`.
pub fn basis_embedding(a: &SimplicialModule, budget: u64) -> Result<LinearMap> {
    let p = field_prime(a.ring)?;
    let kd = k_dims(a.ring, &a.dims, budget)?;
    let maps = a
        .dims
        .iter()
        .zip(&kd)
        .map(|(&d, &kdim)| {
            let cols = (0..d).map(|k| vec![(basis_vector_index(p, d, k), 1)]).collect();
            Mat::from_columns(a.ring, kdim, cols)
        })
        .collect();
    Ok(LinearMap { ring: a.ring, maps })
}

/// `δ_Y: KY -> K²Y`, `[a] ↦ [[a]]`.
pub fn comultiplication(y: &SimplicialModule, budget: u64) -> Result<LinearMap> {
    let ky = comonad_k(y, budget)?;
    basis_embedding(&ky, budget)
}

/// `K(f): KA -> KB`, `[a] ↦ [f a]` (zero if `f a = 0`).
pub fn k_of_map(f: &LinearMap, a_dims: &[usize], budget: u64) -> Result<LinearMap> {
    let ring = f.ring;
    let p = field_prime(ring)?;
    let cap = f.cap();
    let mut maps = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let m = &f.maps[n];
        let count = level_count(p, a_dims[n], n, budget)?;
        let tcount = level_count(p, m.rows(), n, budget)?;
        let cols = (1..count)
            .map(|c| {
                let t = apply_code(ring, p, m, c);
                if t == 0 {
                    vec![]
                } else {
                    vec![(t as usize - 1, 1)]
                }
            })
            .collect();
        maps.push(Mat::from_columns(ring, tcount as usize - 1, cols));
    }
    Ok(LinearMap { ring, maps })
}

/// `U(f)` as a map of enumerated spaces.
pub fn underlying_map(f: &LinearMap, a_dims: &[usize], budget: u64) -> Result<SpaceMap> {
    let p = field_prime(f.ring)?;
    let mut maps = Vec::new();
    for (n, m) in f.maps.iter().enumerate() {
        let count = level_count(p, a_dims[n], n, budget)?;
        maps.push((0..count).map(|c| apply_code(f.ring, p, m, c) as u32).collect());
    }
    Ok(SpaceMap { maps })
}

/// Unit `η: X -> U R̃X`, `x ↦ 1·x`, basepoint to `0`.
pub fn hurewicz_unit(x: &EnumSpace, ring: Ring) -> Result<SpaceMap> {
    let p = field_prime(ring)?;
    let maps = (0..=x.cap())
        .map(|n| {
            let bp = x.basepoint.as_ref().map(|b| b[n]);
            let d = x.sizes[n] - usize::from(bp.is_some());
            (0..x.sizes[n] as u32)
                .map(|s| match bp {
                    Some(b) if s == b => 0,
                    Some(b) if s > b => p.pow((d - s as usize) as u32) as u32,
                    _ => p.pow((d - 1 - s as usize) as u32) as u32,
                })
                .collect()
        })
        .collect();
    Ok(SpaceMap { maps })
}

/// A module with a coaction `m: Y -> KY`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KCoalgebra {
    pub carrier: SimplicialModule,
    pub coaction: LinearMap,
}

/// Outcome of checking the coalgebra laws.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoalgebraReport {
    pub counit_ok: bool,
    pub coassociative: bool,
    pub coaction_is_map: bool,
    pub levels_checked: usize,
    pub problems: Vec<String>,
}

impl CoalgebraReport {
    pub fn ok(&self) -> bool {
        self.counit_ok && self.coassociative && self.coaction_is_map
    }
}

impl KCoalgebra {
    /// Checks `ε m = id`, `(K m) m = δ m`, and that `m` is simplicial, on
    /// levels `0..=cap`.
    pub fn validate(&self, cap: usize, budget: u64) -> Result<CoalgebraReport> {
        let y = self.carrier.truncate(cap.min(self.carrier.cap()));
        let m = self.coaction.truncate(y.cap());
        let ky = comonad_k(&y, budget)?;
        let mut rep = CoalgebraReport { levels_checked: y.cap() + 1, ..Default::default() };
        let v = m.validate(&y, &ky);
        rep.coaction_is_map = v.is_empty();
        rep.problems.extend(v);
        let eps = counit(&y)?;
        rep.counit_ok = eps.compose(&m).is_identity();
        if !rep.counit_ok {
            rep.problems.push("counit law fails".into());
        }
        let km = k_of_map(&m, &y.dims, budget)?;
        let delta = basis_embedding(&ky, budget)?;
        rep.coassociative = km.compose(&m) == delta.compose(&m);
        if !rep.coassociative {
            rep.problems.push("coassociativity fails".into());
        }
        Ok(rep)
    }
}

/// `R̃X` with the coaction `m = R̃(η)`, `e_x ↦ [e_x]`.
pub fn coaction_of_chains(x: &FinSimplicialSet, ring: Ring, cap: usize, budget: u64) -> Result<KCoalgebra> {
    let y = free_reduced(x, ring, cap)?;
    let coaction = basis_embedding(&y, budget)?;
    Ok(KCoalgebra { carrier: y, coaction })
}

/// The trivial coalgebra on the zero module.
pub fn zero_coalgebra(ring: Ring, cap: usize) -> KCoalgebra {
    let y = SimplicialModule::zero(ring, cap);
    let coaction = LinearMap::zero(&y, &y);
    KCoalgebra { carrier: y, coaction }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    const F2: Ring = Ring::F2;

    #[test]
    fn sphere_ranks() {
        let y = free_reduced(&corpus::s2(), Ring::Integers, 3).unwrap();
        assert_eq!(y.dims, vec![0, 0, 1, 3]);
        assert!(y.validate().is_empty());
    }

    #[test]
    fn k_dimensions() {
        let y = free_reduced(&corpus::s2(), F2, 3).unwrap();
        let u = underlying(&y, DEFAULT_BUDGET).unwrap();
        assert_eq!(u.sizes[3], 8);
        let ky = comonad_k(&y, DEFAULT_BUDGET).unwrap();
        assert_eq!(ky.dims[3], 7);
        let kky = comonad_k(&ky, DEFAULT_BUDGET).unwrap();
        assert_eq!(kky.dims[3], 127);
        assert!(kky.validate().is_empty());
    }

    #[test]
    fn comonad_laws() {
        let y = free_reduced(&corpus::s2(), F2, 3).unwrap();
        let ky = comonad_k(&y, DEFAULT_BUDGET).unwrap();
        let delta = comultiplication(&y, DEFAULT_BUDGET).unwrap();
        assert!(delta.validate(&ky, &comonad_k(&ky, DEFAULT_BUDGET).unwrap()).is_empty());
        let eps_k = counit(&ky).unwrap();
        assert!(eps_k.compose(&delta).is_identity());
        let k_eps = k_of_map(&counit(&y).unwrap(), &ky.dims, DEFAULT_BUDGET).unwrap();
        assert!(k_eps.compose(&delta).is_identity());
    }

    #[test]
    fn integers_have_no_underlying_set() {
        let y = free_reduced(&corpus::s2(), Ring::Integers, 2).unwrap();
        assert!(matches!(underlying(&y, DEFAULT_BUDGET), Err(Error::InfiniteUnderlying)));
    }

    #[test]
    fn budget_names_level() {
        let y = free_reduced(&corpus::s2(), F2, 4).unwrap();
        let ky = comonad_k(&y, DEFAULT_BUDGET).unwrap();
        match comonad_k(&ky, DEFAULT_BUDGET) {
            Err(Error::Budget { level, .. }) => assert_eq!(level, 4),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn unit_is_simplicial_and_split_by_counit() {
        let y = free_reduced(&corpus::s2(), F2, 3).unwrap();
        let uy = underlying(&y, DEFAULT_BUDGET).unwrap();
        let eta = hurewicz_unit(&uy, F2).unwrap();
        let uky = underlying(&comonad_k(&y, DEFAULT_BUDGET).unwrap(), DEFAULT_BUDGET).unwrap();
        assert!(eta.validate(&uy, &uky).is_empty());
    }
}
