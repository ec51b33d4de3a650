//! Simplicial enrichment of modules: the tensor `Y ⊗ K = Y ⊗ ZK`, the
//! hom-object `hom(K, Y)`, and the isomorphism `R̃(X) ⊗ K ≅ R̃(X ⊗ K)`.

use std::collections::HashMap;

use crate::comonad::{encode, free_reduced};
use crate::error::{Error, Result};
use crate::linalg::{kernel, solve};
use crate::matrix::Mat;
use crate::module::{LinearMap, SimplicialModule};
use crate::ordinal::OrdinalMap;
use crate::ring::Ring;
use crate::simplicial::{FinSimplicialSet, SimplexRef};
use crate::space::EnumSpace;
use crate::sset_ops::{map_to_simplex, product_indexed, simplex_to_map, simplex_vertex_sets, smash_indexed, standard_simplex, Product};

/// Simplicial maps `P -> Y` (equivalently module maps `Z P -> Y`), as the
/// kernel of the face-compatibility equations on values at cells.
#[derive(Clone, Debug)]
pub struct MapSpace {
    /// Offset of each cell's value block in the unknown vector.
    pub offsets: Vec<usize>,
    pub unknowns: usize,
    /// Columns span the solution space.
    pub basis: Mat,
}

/// Matrix of the degeneracy word `s_{w[0]} ... s_{w[last]}` from level `k`.
pub(crate) fn degeneracy_word_matrix(y: &SimplicialModule, k: usize, word: &[usize]) -> Mat {
    let mut m = Mat::identity(y.dims[k]);
    let mut level = k;
    for &j in word.iter().rev() {
        m = y.degens[level][j].mul(y.ring, &m);
        level += 1;
    }
    m
}

pub fn maps_from(p: &FinSimplicialSet, y: &SimplicialModule) -> Result<MapSpace> {
    let r = y.ring;
    if p.max_dim() > y.cap() {
        return Err(Error::Precondition(format!("target known through level {}, source has dimension {}", y.cap(), p.max_dim())));
    }
    let mut offsets = Vec::with_capacity(p.cells.len());
    let mut unknowns = 0;
    for c in &p.cells {
        offsets.push(unknowns);
        unknowns += y.dims[c.dim];
    }
    let mut rows: Vec<Vec<(usize, i64)>> = Vec::new();
    let mut eq_count = 0usize;
    // equations d_i v_c - s_w v_{c'} = 0, one block of rows per (cell, face)
    let mut triplets: Vec<(usize, usize, i64)> = Vec::new();
    for (ci, c) in p.cells.iter().enumerate() {
        if c.dim == 0 {
            continue;
        }
        for (i, f) in c.faces.iter().enumerate() {
            let d = &y.faces[c.dim][i];
            let target_dim = c.dim - 1;
            let base_dim = p.cells[f.base].dim;
            let s = degeneracy_word_matrix(y, base_dim, &f.degeneracy_word);
            for col in 0..d.cols() {
                for &(row, v) in d.col(col) {
                    triplets.push((eq_count + row, offsets[ci] + col, v));
                }
            }
            for col in 0..s.cols() {
                for &(row, v) in s.col(col) {
                    triplets.push((eq_count + row, offsets[f.base] + col, r.neg(v)));
                }
            }
            eq_count += y.dims[target_dim];
        }
    }
    rows.clear();
    let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); unknowns];
    for (row, col, v) in triplets {
        cols[col].push((row, v));
    }
    let eqs = Mat::from_columns(r, eq_count, cols);
    let basis = kernel(r, &eqs);
    Ok(MapSpace { offsets, unknowns, basis })
}

/// Matrix sending values on cells of `big` to values on cells of `small`
/// along a simplicial map `small -> big` given on cells.
pub(crate) fn restriction(y: &SimplicialModule, small: &FinSimplicialSet, big_offsets: &[usize], big: &FinSimplicialSet, image: &[SimplexRef], small_unknowns: usize, big_unknowns: usize) -> Mat {
    let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); big_unknowns];
    let mut off = 0;
    for (ci, c) in small.cells.iter().enumerate() {
        let img = &image[ci];
        let s = degeneracy_word_matrix(y, big.cells[img.base].dim, &img.degeneracy_word);
        for col in 0..s.cols() {
            for &(row, v) in s.col(col) {
                cols[big_offsets[img.base] + col].push((off + row, v));
            }
        }
        off += y.dims[c.dim];
    }
    Mat::from_columns(y.ring, small_unknowns, cols)
}

/// `hom(K, Y)`: level `n` is the module of maps `K × Δ[n] -> Y`. Levels run
/// up to `cap - dim K`.
pub fn mapping_object(k: &FinSimplicialSet, y: &SimplicialModule, cap: usize) -> Result<SimplicialModule> {
    Ok(mapping_parts(k, y, cap)?.0)
}

fn mapping_parts(k: &FinSimplicialSet, y: &SimplicialModule, cap: usize) -> Result<(SimplicialModule, Vec<Product>, Vec<MapSpace>, Vec<FinSimplicialSet>)> {
    let r = y.ring;
    let top = y.cap().checked_sub(k.max_dim()).ok_or_else(|| Error::Precondition("target has too few levels".into()))?;
    let cap = cap.min(top);
    let deltas: Vec<FinSimplicialSet> = (0..=cap + 1).map(standard_simplex).collect();
    let verts: Vec<Vec<Vec<usize>>> = deltas.iter().map(simplex_vertex_sets).collect();
    let lookups: Vec<HashMap<Vec<usize>, usize>> =
        verts.iter().map(|v| v.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
    let prods: Vec<Product> = (0..=cap).map(|n| product_indexed(k, &deltas[n])).collect();
    let spaces: Vec<MapSpace> = prods.iter().map(|p| maps_from(&p.set, y)).collect::<Result<_>>()?;
    let dims: Vec<usize> = spaces.iter().map(|s| s.basis.cols()).collect();
    // operator induced by θ: [m] -> [n] on hom(K, Y)_n -> hom(K, Y)_m
    let op = |theta: &OrdinalMap| -> Mat {
        let (m, n) = (theta.source_arity, theta.target_arity);
        let small = &prods[m];
        let image: Vec<SimplexRef> = small
            .set
            .cells
            .iter()
            .enumerate()
            .map(|(ci, _)| {
                let cell = SimplexRef::cell(ci);
                let (u, v) = small.project(k, &deltas[m], &cell).expect("plain product");
                let alpha = theta.compose(&simplex_to_map(&deltas[m], &verts[m], &v));
                let alpha = OrdinalMap { target_arity: n, ..alpha };
                let v2 = map_to_simplex(&lookups[n], &alpha);
                prods[n].locate(k, &deltas[n], &u, &v2)
            })
            .collect();
        let res = restriction(y, &small.set, &spaces[n].offsets, &prods[n].set, &image, spaces[m].unknowns, spaces[n].unknowns);
        let img = res.mul(r, &spaces[n].basis);
        solve(r, &spaces[m].basis, &img).expect("restriction of a simplicial map is simplicial")
    };
    let faces = (0..=cap)
        .map(|n| if n == 0 { vec![] } else { (0..=n).map(|i| op(&OrdinalMap::coface(n, i))).collect() })
        .collect();
    let degens = (0..=cap)
        .map(|n| if n == cap { vec![] } else { (0..=n).map(|j| op(&OrdinalMap::codegeneracy(n, j))).collect() })
        .collect();
    let hom = SimplicialModule { ring: r, name: format!("hom({}, {})", k.name, y.name), dims, faces, degens, set_like: false };
    Ok((hom, prods, spaces, deltas))
}

/// The path object `hom(Δ[1], Y)` with its two endpoint evaluations.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub hom: SimplicialModule,
    /// `ev[e]`: value on `{e} × Δ[n]`.
    pub ev: [LinearMap; 2],
    /// Per level: the cells of `Δ[1] × Δ[n]` (their dimensions) and the
    /// basis of paths as stacked cell values.
    pub cell_dims: Vec<Vec<usize>>,
    pub cell_values: Vec<Mat>,
}

pub fn path_object(y: &SimplicialModule, cap: usize) -> Result<PathObject> {
    let r = y.ring;
    let interval = standard_simplex(1);
    let (hom, prods, spaces, deltas) = mapping_parts(&interval, y, cap)?;
    let iverts = simplex_vertex_sets(&interval);
    let ev = [0usize, 1].map(|e| {
        let vertex = iverts.iter().position(|v| *v == vec![e]).expect("interval vertex");
        let maps = (0..=hom.cap())
            .map(|n| {
                let u = SimplexRef { degeneracy_word: (0..n).rev().collect(), base: vertex };
                let top = simplex_vertex_sets(&deltas[n]).iter().position(|v| v.len() == n + 1).expect("top simplex");
                let s = prods[n].locate(&interval, &deltas[n], &u, &SimplexRef::cell(top));
                let base_dim = prods[n].set.cells[s.base].dim;
                let word = degeneracy_word_matrix(y, base_dim, &s.degeneracy_word);
                let off = spaces[n].offsets[s.base];
                let block = spaces[n].basis.select_rows(&(off..off + y.dims[base_dim]).collect::<Vec<_>>());
                word.mul(r, &block)
            })
            .collect();
        LinearMap { ring: r, maps }
    });
    let cell_dims = prods.iter().map(|p| p.set.cells.iter().map(|c| c.dim).collect()).collect();
    let cell_values = spaces.into_iter().map(|s| s.basis).collect();
    Ok(PathObject { hom, ev, cell_dims, cell_values })
}

/// `Y ⊗ K`: basis of level `n` is pairs (basis vector of `Y_n`, simplex of `K_n`).
pub fn tensor(y: &SimplicialModule, k: &FinSimplicialSet) -> Result<SimplicialModule> {
    let r = y.ring;
    let (e, _) = EnumSpace::from_fin(k, y.cap(), u64::MAX)?;
    let cap = e.cap();
    let dims: Vec<usize> = (0..=cap).map(|n| y.dims[n] * e.sizes[n]).collect();
    let kron = |m: &Mat, table: &[u32], src: usize, tgt: usize, rows: usize| -> Mat {
        let mut cols = Vec::with_capacity(m.cols() * src);
        for a in 0..m.cols() {
            for s in 0..src {
                let t = table[s] as usize;
                cols.push(m.col(a).iter().map(|&(row, v)| (row * tgt + t, v)).collect());
            }
        }
        Mat::from_columns(r, rows, cols)
    };
    let faces = (0..=cap)
        .map(|n| {
            if n == 0 {
                return vec![];
            }
            (0..=n).map(|i| kron(&y.faces[n][i], &e.faces[n][i], e.sizes[n], e.sizes[n - 1], dims[n - 1])).collect()
        })
        .collect();
    let degens = (0..=cap)
        .map(|n| {
            if n == cap {
                return vec![];
            }
            (0..=n).map(|j| kron(&y.degens[n][j], &e.degens[n][j], e.sizes[n], e.sizes[n + 1], dims[n + 1])).collect()
        })
        .collect();
    Ok(SimplicialModule { ring: r, name: format!("{} (x) {}", y.name, k.name), dims, faces, degens, set_like: y.set_like })
}

/// Per-level basis bijection `R̃(X) ⊗ K -> R̃(X ⊗ K)` commuting with all
/// operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaWitness {
    pub permutations: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
}

pub fn sigma_iso_check(x: &FinSimplicialSet, k: &FinSimplicialSet, ring: Ring, cap: usize) -> Result<SigmaWitness> {
    let left = tensor(&free_reduced(x, ring, cap)?, k)?;
    let prod = smash_indexed(x, k)?;
    let right = free_reduced(&prod.set, ring, cap)?;
    let (ex, xs) = EnumSpace::from_fin(x, cap, u64::MAX)?;
    let (ek, ks) = EnumSpace::from_fin(k, cap, u64::MAX)?;
    let (_, ss) = EnumSpace::from_fin(&prod.set, cap, u64::MAX)?;
    let bx = ex.basepoint.as_ref().expect("pointed")[0];
    let _ = bx;
    let mut perms = Vec::new();
    for n in 0..=cap {
        if left.dims[n] != right.dims[n] {
            return Err(Error::Internal(format!("level {n}: ranks {} and {} differ", left.dims[n], right.dims[n])));
        }
        let xi: HashMap<&SimplexRef, usize> = xs[n].iter().enumerate().map(|(i, s)| (s, i)).collect();
        let ki: HashMap<&SimplexRef, usize> = ks[n].iter().enumerate().map(|(i, s)| (s, i)).collect();
        let xbp = ex.basepoint.as_ref().unwrap()[n] as usize;
        let mut perm = vec![usize::MAX; left.dims[n]];
        let mut ridx = 0;
        for s in &ss[n] {
            match prod.project(x, k, s) {
                None => continue,
                Some((u, v)) => {
                    let xu = xi[&u];
                    let lb = if xu > xbp { xu - 1 } else { xu };
                    perm[lb * ek.sizes[n] + ki[&v]] = ridx;
                    ridx += 1;
                }
            }
        }
        if perm.contains(&usize::MAX) {
            return Err(Error::Internal(format!("level {n}: correspondence is not a bijection")));
        }
        perms.push(perm);
    }
    let pm = |n: usize| Mat::from_columns(ring, right.dims[n], perms[n].iter().map(|&t| vec![(t, 1)]).collect());
    for n in 0..=cap {
        for i in 0..left.faces[n].len() {
            if pm(n - 1).mul(ring, &left.faces[n][i]) != right.faces[n][i].mul(ring, &pm(n)) {
                return Err(Error::Internal(format!("level {n}: d{i} not preserved")));
            }
        }
        for j in 0..left.degens[n].len() {
            if pm(n + 1).mul(ring, &left.degens[n][j]) != right.degens[n][j].mul(ring, &pm(n)) {
                return Err(Error::Internal(format!("level {n}: s{j} not preserved")));
            }
        }
    }
    Ok(SigmaWitness { permutations: perms, dims: left.dims })
}

/// Brute-force `hom(K, UY)_n`: all simplicial maps `K × Δ[n] -> UY`, each as
/// the vector of values on cells (element codes), sorted.
pub fn hom_set_bruteforce(k: &FinSimplicialSet, uy: &EnumSpace, n: usize, p: u64) -> Vec<Vec<u32>> {
    let delta = standard_simplex(n);
    let prod = product_indexed(k, &delta).set;
    let cells = &prod.cells;
    let mut out = Vec::new();
    let mut vals: Vec<u32> = vec![0; cells.len()];
    // value of a possibly degenerate simplex given values on cells
    fn eval(uy: &EnumSpace, prod: &FinSimplicialSet, vals: &[u32], s: &SimplexRef) -> u32 {
        let mut v = vals[s.base];
        let mut level = prod.cells[s.base].dim;
        for &j in s.degeneracy_word.iter().rev() {
            v = uy.degens[level][j][v as usize];
            level += 1;
        }
        v
    }
    fn rec(k: usize, uy: &EnumSpace, prod: &FinSimplicialSet, vals: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == prod.cells.len() {
            out.push(vals.clone());
            return;
        }
        let c = &prod.cells[k];
        for v in 0..uy.sizes[c.dim] as u32 {
            let ok = c.dim == 0
                || c.faces.iter().enumerate().all(|(i, f)| uy.faces[c.dim][i][v as usize] == eval(uy, prod, vals, f));
            if ok {
                vals[k] = v;
                rec(k + 1, uy, prod, vals, out);
            }
        }
    }
    let _ = p;
    rec(0, uy, &prod, &mut vals, &mut out);
    out.sort();
    out
}

/// Element codes of the values, per cell, of each vector in the module
/// `hom(K, Y)_n` (enumerating all `p^dim` elements).
pub fn hom_module_elements(k: &FinSimplicialSet, y: &SimplicialModule, n: usize, budget: u64) -> Result<Vec<Vec<u32>>> {
    let Ring::PrimeField(p) = y.ring else { return Err(Error::InfiniteUnderlying) };
    let prod = product_indexed(k, &standard_simplex(n)).set;
    let space = maps_from(&prod, y)?;
    let d = space.basis.cols();
    let count = (p as u128).checked_pow(d as u32).filter(|&c| c <= budget as u128).ok_or(Error::Budget {
        level: n,
        needed: format!("{p}^{d}"),
        budget,
    })?;
    let mut out = Vec::with_capacity(count as usize);
    for code in 0..count as u64 {
        let coeffs = crate::comonad::decode(p, d, code);
        let v = space.basis.apply(y.ring, &coeffs);
        let mut per_cell = Vec::with_capacity(prod.cells.len());
        for (ci, c) in prod.cells.iter().enumerate() {
            let block = &v[space.offsets[ci]..space.offsets[ci] + y.dims[c.dim]];
            per_cell.push(encode(p, block) as u32);
        }
        out.push(per_cell);
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comonad::{free_reduced, underlying, DEFAULT_BUDGET};
    use crate::corpus;
    use crate::dold_kan::homotopy_groups;
    use crate::sset_ops::point;

    #[test]
    fn tensor_with_point_is_identity() {
        let y = free_reduced(&corpus::s2(), Ring::Integers, 3).unwrap();
        let t = tensor(&y, &standard_simplex(0)).unwrap();
        assert_eq!(t.dims, y.dims);
        assert_eq!(t.faces, y.faces);
        let _ = point();
    }

    #[test]
    fn tensor_with_interval_keeps_homotopy() {
        let y = free_reduced(&corpus::s2(), Ring::F2, 4).unwrap();
        let t = tensor(&y, &standard_simplex(1)).unwrap();
        assert!(t.validate().is_empty());
        assert!(homotopy_groups(&t).agrees_with(&homotopy_groups(&y), 3));
    }

    #[test]
    fn hom_from_point_is_identity_shaped() {
        let y = free_reduced(&corpus::s2(), Ring::F2, 4).unwrap();
        let h = mapping_object(&standard_simplex(0), &y, 4).unwrap();
        assert_eq!(h.dims, y.dims);
        assert!(h.validate().is_empty());
    }

    #[test]
    fn hom_interval_matches_set_level() {
        let y = free_reduced(&corpus::s2(), Ring::F2, 4).unwrap();
        let uy = underlying(&y, DEFAULT_BUDGET).unwrap();
        let k = standard_simplex(1);
        let h = mapping_object(&k, &y, 3).unwrap();
        assert!(h.validate().is_empty());
        for n in 0..=2 {
            let brute = hom_set_bruteforce(&k, &uy, n, 2);
            let lin = hom_module_elements(&k, &y, n, DEFAULT_BUDGET).unwrap();
            assert_eq!(brute, lin, "level {n}");
            assert_eq!(brute.len(), 1 << h.dims[n]);
        }
    }

    #[test]
    fn path_endpoints_are_simplicial() {
        let y = free_reduced(&corpus::s2(), Ring::F2, 4).unwrap();
        let p = path_object(&y, 3).unwrap();
        for e in &p.ev {
            assert!(e.validate(&p.hom, &y.truncate(p.hom.cap())).is_empty());
        }
        // constant paths: both evaluations are onto
        for n in 0..=p.hom.cap() {
            let both = p.ev[0].maps[n].vstack(&p.ev[1].maps[n]);
            assert_eq!(crate::linalg::rank(Ring::F2, &both), 2 * y.dims[n]);
        }
    }

    #[test]
    fn sigma_for_sphere_and_interval() {
        let w = sigma_iso_check(&corpus::s2(), &standard_simplex(1), Ring::Integers, 3).unwrap();
        assert_eq!(w.dims.len(), 4);
        sigma_iso_check(&corpus::s2(), &standard_simplex(0), Ring::Integers, 3).unwrap();
    }
}
