//! Normalization `N`, denormalization `Γ`, homotopy groups, and the
//! round-trip isomorphisms.

use std::collections::HashMap;

use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::homology::{homology, GradedGroup};
use crate::linalg::{is_invertible, kernel, solve};
use crate::matrix::Mat;
use crate::module::{LinearMap, SimplicialModule};
use crate::ordinal::OrdinalMap;
use crate::ring::Ring;

/// How a normalized complex sits inside (or over) the module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalModel {
    /// `N_n = ∩_{i>=1} ker d_i`; columns of `basis[n]` span it inside `A_n`.
    Kernel { basis: Vec<Mat> },
    /// `N_n = A_n / D_n` for set-like modules; `keep[n]` lists the
    /// nondegenerate basis vectors.
    Quotient { keep: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub complex: ChainComplex,
    pub model: NormalModel,
}

/// Kernel-intersection normalization with differential `d_0`.
pub fn normalize_kernel(a: &SimplicialModule) -> Normalized {
    let r = a.ring;
    let cap = a.cap();
    let mut basis: Vec<Mat> = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let b = if n == 0 {
            Mat::identity(a.dims[0])
        } else {
            let mut stack = Mat::zeros(0, a.dims[n]);
            for i in 1..=n {
                stack = stack.vstack(&a.faces[n][i]);
            }
            kernel(r, &stack)
        };
        basis.push(b);
    }
    let mut bd = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        if n == 0 {
            bd.push(Mat::zeros(0, basis[0].cols()));
            continue;
        }
        let img = a.faces[n][0].mul(r, &basis[n]);
        let m = solve(r, &basis[n - 1], &img).expect("d_0 preserves the normalized subcomplex");
        bd.push(m);
    }
    let dims = basis.iter().map(Mat::cols).collect();
    let complex = ChainComplex { ring: r, lo: 0, dims, bd, complete: false };
    Normalized { complex, model: NormalModel::Kernel { basis } }
}

/// Indices of basis vectors of `A_n` hit by some degeneracy (set-like only).
fn degenerate_indices(a: &SimplicialModule, n: usize) -> Vec<bool> {
    let mut deg = vec![false; a.dims[n]];
    if n > 0 {
        for s in &a.degens[n - 1] {
            for c in 0..s.cols() {
                for &(row, _) in s.col(c) {
                    deg[row] = true;
                }
            }
        }
    }
    deg
}

/// Quotient normalization `A/D` for set-like modules, differential
/// `Σ (-1)^i d_i`.
pub fn normalize_quotient(a: &SimplicialModule) -> Option<Normalized> {
    if !a.set_like {
        return None;
    }
    let r = a.ring;
    let cap = a.cap();
    let keep: Vec<Vec<usize>> =
        (0..=cap).map(|n| degenerate_indices(a, n).iter().enumerate().filter(|e| !e.1).map(|e| e.0).collect()).collect();
    let mut bd = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        if n == 0 {
            bd.push(Mat::zeros(0, keep[0].len()));
            continue;
        }
        let mut total = Mat::zeros(a.dims[n - 1], a.dims[n]);
        for (i, f) in a.faces[n].iter().enumerate() {
            total = total.add(r, &f.scale(r, r.sign(i)));
        }
        bd.push(total.select_cols(&keep[n]).select_rows(&keep[n - 1]));
    }
    let dims = keep.iter().map(Vec::len).collect();
    let complex = ChainComplex { ring: r, lo: 0, dims, bd, complete: false };
    Some(Normalized { complex, model: NormalModel::Quotient { keep } })
}

/// Unnormalized chains `Σ (-1)^i d_i` on every basis vector. Same homology
/// as `N`, no kernel computations.
pub fn moore_complex(a: &SimplicialModule) -> ChainComplex {
    let r = a.ring;
    let bd = (0..=a.cap())
        .map(|n| {
            if n == 0 {
                return Mat::zeros(0, a.dims[0]);
            }
            let mut total = Mat::zeros(a.dims[n - 1], a.dims[n]);
            for (i, f) in a.faces[n].iter().enumerate() {
                total = total.add(r, &f.scale(r, r.sign(i)));
            }
            total
        })
        .collect();
    ChainComplex { ring: r, lo: 0, dims: a.dims.clone(), bd, complete: false }
}

pub fn moore_map(f: &LinearMap, a: &SimplicialModule, b: &SimplicialModule) -> ChainMap {
    let cap = f.cap().min(a.cap());
    let source = moore_complex(&a.truncate(cap));
    ChainMap { source, target: moore_complex(b), maps: f.maps[..=cap].to_vec() }
}

/// The cheaper available model: quotient when set-like, kernel otherwise.
pub fn normalize(a: &SimplicialModule) -> Normalized {
    normalize_quotient(a).unwrap_or_else(|| normalize_kernel(a))
}

/// Both normalizations agree in dimensions and homology.
pub fn cross_check_normalizations(a: &SimplicialModule) -> Result<()> {
    let k = normalize_kernel(a);
    let Some(q) = normalize_quotient(a) else { return Ok(()) };
    if k.complex.dims != q.complex.dims {
        return Err(Error::Internal(format!("normalized ranks differ: {:?} vs {:?}", k.complex.dims, q.complex.dims)));
    }
    if homology(&k.complex) != homology(&q.complex) {
        return Err(Error::Internal("normalized homology differs between models".into()));
    }
    Ok(())
}

/// Normalization in a chosen model; the quotient model needs a set-like
/// module.
pub fn normalize_in(a: &SimplicialModule, quotient: bool) -> Normalized {
    if quotient {
        normalize_quotient(a).expect("quotient model needs a set-like module")
    } else {
        normalize_kernel(a)
    }
}

/// `N(f)` with matching models on both sides (quotient iff both set-like).
pub fn normalize_map(f: &LinearMap, a: &SimplicialModule, b: &SimplicialModule) -> ChainMap {
    normalize_map_in(f, a, b, a.set_like && b.set_like)
}

/// `N(f)` in a chosen model, shared by source and target.
pub fn normalize_map_in(f: &LinearMap, a: &SimplicialModule, b: &SimplicialModule, quotient: bool) -> ChainMap {
    let r = f.ring;
    let cap = f.cap().min(a.cap()).min(b.cap());
    let a = a.truncate(cap);
    let b = b.truncate(cap);
    let (na, nb) = if quotient {
        (normalize_quotient(&a).unwrap(), normalize_quotient(&b).unwrap())
    } else {
        (normalize_kernel(&a), normalize_kernel(&b))
    };
    let maps = (0..=cap)
        .map(|n| match (&na.model, &nb.model) {
            (NormalModel::Quotient { keep: ka }, NormalModel::Quotient { keep: kb }) => {
                f.maps[n].select_cols(&ka[n]).select_rows(&kb[n])
            }
            (NormalModel::Kernel { basis: ba }, NormalModel::Kernel { basis: bb }) => {
                let img = f.maps[n].mul(r, &ba[n]);
                solve(r, &bb[n], &img).expect("simplicial maps preserve normalized chains")
            }
            _ => unreachable!(),
        })
        .collect();
    ChainMap { source: na.complex, target: nb.complex, maps }
}

/// `π_*(A) = H_*(N A)`; degrees `< cap` are certified.
pub fn homotopy_groups(a: &SimplicialModule) -> GradedGroup {
    homology(&normalize(a).complex)
}

/// Summands of `Γ(C)_n`: surjections `[n] -> [k]` with `C_k` possibly nonzero.
struct GammaLayout {
    /// per level: (surjection, k, offset)
    summands: Vec<Vec<(OrdinalMap, usize, usize)>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    dims: Vec<usize>,
}

fn gamma_layout(c: &ChainComplex, cap: usize) -> GammaLayout {
    let mut summands = Vec::new();
    let mut index = Vec::new();
    let mut dims = Vec::new();
    for n in 0..=cap {
        let mut list: Vec<(OrdinalMap, usize, usize)> = Vec::new();
        let mut idx = HashMap::new();
        let mut off = 0;
        let mut surj = OrdinalMap::all_surjections_from(n);
        surj.sort_by_key(|s| (s.target_arity, s.values.clone()));
        for s in surj {
            let k = s.target_arity;
            let d = c.dim(k as i64);
            idx.insert(s.values.clone(), list.len());
            list.push((s, k, off));
            off += d;
        }
        summands.push(list);
        index.push(idx);
        dims.push(off);
    }
    GammaLayout { summands, index, dims }
}

/// Matrix of `θ^*: Γ(C)_n -> Γ(C)_m` for `θ: [m] -> [n]`.
fn gamma_operator(c: &ChainComplex, lay: &GammaLayout, theta: &OrdinalMap) -> Mat {
    let r = c.ring;
    let (m, n) = (theta.source_arity, theta.target_arity);
    let mut blocks_cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); lay.dims[n]];
    for (sigma, k, off) in &lay.summands[n] {
        let dk = c.dim(*k as i64);
        if dk == 0 {
            continue;
        }
        let (epi, mono) = sigma.compose(theta).epi_mono();
        let target = lay.index[m][&epi.values];
        let (_, _, toff) = lay.summands[m][target];
        if mono.is_identity() {
            for t in 0..dk {
                blocks_cols[off + t].push((toff + t, 1));
            }
        } else if mono.source_arity + 1 == mono.target_arity && mono.missed() == vec![0] {
            let bd = c.boundary(*k as i64);
            for t in 0..dk {
                for &(row, v) in bd.col(t) {
                    blocks_cols[off + t].push((toff + row, v));
                }
            }
        }
    }
    Mat::from_columns(r, lay.dims[m], blocks_cols)
}

/// Dold-Kan denormalization `Γ(C)` on levels `0..=cap`.
pub fn denormalize(c: &ChainComplex, cap: usize) -> Result<SimplicialModule> {
    if c.lo < 0 && c.dims.iter().take((-c.lo) as usize).any(|&d| d > 0) {
        return Err(Error::Precondition("denormalization needs a complex in nonnegative degrees".into()));
    }
    if !c.complete && (cap as i64) > c.hi() {
        return Err(Error::Precondition(format!("complex known through degree {}, level {cap} requested", c.hi())));
    }
    let lay = gamma_layout(c, cap);
    let faces = (0..=cap)
        .map(|n| if n == 0 { vec![] } else { (0..=n).map(|i| gamma_operator(c, &lay, &OrdinalMap::coface(n, i))).collect() })
        .collect();
    let degens = (0..=cap)
        .map(|n| {
            if n == cap {
                vec![]
            } else {
                (0..=n).map(|j| gamma_operator(c, &lay, &OrdinalMap::codegeneracy(n, j))).collect()
            }
        })
        .collect();
    Ok(SimplicialModule { ring: c.ring, name: "Gamma".into(), dims: lay.dims, faces, degens, set_like: true })
}

/// `Γ(f)`: block diagonal, `f_k` on every summand indexed by `[n] ↠ [k]`.
pub fn gamma_map(f: &ChainMap, cap: usize) -> LinearMap {
    let maps = (0..=cap)
        .map(|n| {
            let mut surj = OrdinalMap::all_surjections_from(n);
            surj.sort_by_key(|s| (s.target_arity, s.values.clone()));
            Mat::block_diag(&surj.iter().map(|s| f.at(s.target_arity as i64)).collect::<Vec<_>>())
        })
        .collect();
    LinearMap { ring: f.source.ring, maps }
}

/// The chain isomorphism `C -> N(Γ C)` (kernel model), checked to be an
/// invertible chain map.
pub fn unit_iso(c: &ChainComplex, cap: usize) -> Result<ChainMap> {
    let g = denormalize(c, cap)?;
    let n = normalize_kernel(&g);
    let NormalModel::Kernel { basis } = &n.model else { unreachable!() };
    let r = c.ring;
    let lay = gamma_layout(c, cap);
    let src = ChainComplex {
        ring: r,
        lo: 0,
        dims: (0..=cap as i64).map(|k| c.dim(k)).collect(),
        bd: (0..=cap as i64).map(|k| c.boundary(k)).collect(),
        complete: false,
    };
    let mut maps = Vec::new();
    for k in 0..=cap {
        let idx = lay.index[k][&OrdinalMap::identity(k).values];
        let (_, _, off) = lay.summands[k][idx];
        let d = c.dim(k as i64);
        let incl = Mat::from_columns(r, lay.dims[k], (0..d).map(|t| vec![(off + t, 1)]).collect());
        let coords = solve(r, &basis[k], &incl)
            .ok_or_else(|| Error::Internal(format!("C_{k} does not land in normalized chains")))?;
        if !is_invertible(r, &coords) {
            return Err(Error::Internal(format!("C_{k} -> N(Γ C)_{k} is not invertible")));
        }
        maps.push(coords);
    }
    let f = ChainMap { source: src, target: n.complex, maps };
    f.check()?;
    Ok(f)
}

/// Degeneracy operator of a surjection `σ: [n] -> [k]` as a matrix
/// `A_k -> A_n`.
pub fn degeneracy_operator(a: &SimplicialModule, sigma: &OrdinalMap) -> Mat {
    let r = a.ring;
    let k = sigma.target_arity;
    let mut m = Mat::identity(a.dims[k]);
    let mut level = k;
    for &j in sigma.surjection_word().iter().rev() {
        m = a.degens[level][j].mul(r, &m);
        level += 1;
    }
    m
}

/// The natural map `Γ(N A) -> A`, checked to be a simplicial isomorphism.
pub fn counit_iso(a: &SimplicialModule) -> Result<(SimplicialModule, LinearMap)> {
    let r = a.ring;
    let cap = a.cap();
    let n = normalize_kernel(a);
    let NormalModel::Kernel { basis } = &n.model else { unreachable!() };
    let mut c = n.complex.clone();
    c.complete = true;
    let g = denormalize(&c, cap)?;
    let lay = gamma_layout(&c, cap);
    let mut maps = Vec::new();
    for lvl in 0..=cap {
        let mut m = Mat::zeros(a.dims[lvl], 0);
        for (sigma, k, _) in &lay.summands[lvl] {
            if c.dim(*k as i64) == 0 {
                continue;
            }
            m = m.hstack(&degeneracy_operator(a, sigma).mul(r, &basis[*k]));
        }
        if !is_invertible(r, &m) {
            return Err(Error::Internal(format!("Γ(N A)_{lvl} -> A_{lvl} is not invertible")));
        }
        maps.push(m);
    }
    let phi = LinearMap { ring: r, maps };
    phi.check(&g, a)?;
    Ok((g, phi))
}

/// Random bounded complex with ranks `<= max_rank` in degrees `0..=top`.
pub fn random_complex<R: rand::Rng>(rng: &mut R, ring: Ring, top: usize, max_rank: usize) -> ChainComplex {
    let dims: Vec<usize> = (0..=top).map(|_| rng.gen_range(0..=max_rank)).collect();
    let mut bd = vec![Mat::zeros(0, dims[0])];
    for n in 1..=top {
        let prev = &bd[n - 1];
        let ker = kernel(ring, prev);
        let cols = (0..dims[n])
            .map(|_| {
                let mut v = vec![0i64; dims[n - 1]];
                for j in 0..ker.cols() {
                    let coef = ring.norm(rng.gen_range(-2..=2));
                    for &(row, x) in ker.col(j) {
                        v[row] = ring.add(v[row], ring.mul(coef, x));
                    }
                }
                v.into_iter().enumerate().filter(|e| e.1 != 0).collect()
            })
            .collect();
        bd.push(Mat::from_columns(ring, dims[n - 1], cols));
    }
    ChainComplex { ring, lo: 0, dims, bd, complete: true }
}

/// Invertible `n x n` matrix with its inverse, as a product of elementary
/// moves.
pub fn random_unimodular<R: rand::Rng>(rng: &mut R, ring: Ring, n: usize) -> (Mat, Mat) {
    let mut g = Mat::identity(n);
    let mut ginv = Mat::identity(n);
    if n < 2 {
        return (g, ginv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = ring.norm(if rng.gen_bool(0.5) { 1 } else { -1 });
        let mut e = Mat::identity(n);
        e.set(ring, i, j, c);
        let mut einv = Mat::identity(n);
        einv.set(ring, i, j, ring.neg(c));
        g = e.mul(ring, &g);
        ginv = ginv.mul(ring, &einv);
    }
    (g, ginv)
}

/// Conjugates every level of `a` by a random invertible matrix, producing a
/// non-set-like module isomorphic to `a`.
pub fn scramble<R: rand::Rng>(rng: &mut R, a: &SimplicialModule) -> SimplicialModule {
    let r = a.ring;
    let gs: Vec<(Mat, Mat)> = a.dims.iter().map(|&d| random_unimodular(rng, r, d)).collect();
    let mut out = a.clone();
    for n in 0..=a.cap() {
        for i in 0..out.faces[n].len() {
            out.faces[n][i] = gs[n - 1].0.mul(r, &a.faces[n][i]).mul(r, &gs[n].1);
        }
        for j in 0..out.degens[n].len() {
            out.degens[n][j] = gs[n + 1].0.mul(r, &a.degens[n][j]).mul(r, &gs[n].1);
        }
    }
    out.set_like = false;
    out.name = format!("scrambled {}", a.name);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comonad::free_reduced;
    use crate::corpus;
    use rand::SeedableRng;

    #[test]
    fn sphere_homotopy() {
        let y = free_reduced(&corpus::s2(), Ring::Integers, 5).unwrap();
        cross_check_normalizations(&y).unwrap();
        let h = homotopy_groups(&y);
        for d in 0..5 {
            assert_eq!(h.at(d).rank, usize::from(d == 2), "degree {d}");
        }
    }

    #[test]
    fn gamma_is_simplicial() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for ring in [Ring::Integers, Ring::F2] {
            let c = random_complex(&mut rng, ring, 3, 2);
            let g = denormalize(&c, 4).unwrap();
            assert!(g.validate().is_empty());
            unit_iso(&c, 4).unwrap();
            counit_iso(&scramble(&mut rng, &g)).unwrap();
        }
    }

    #[test]
    fn zero_normalizes_to_zero() {
        let z = SimplicialModule::zero(Ring::Integers, 3);
        assert!(normalize(&z).complex.is_zero());
    }
}
