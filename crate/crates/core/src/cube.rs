//! Cubes of chain complexes indexed by subsets of `W = {0, ..., w-1}`
//! (bitmasks), their faces and subcubes, total fibers, punctured homotopy
//! (co)limits and (co)cartesian degrees.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, ChainMap};
use crate::dold_kan::{normalize_in, normalize_map_in, random_complex, random_unimodular};
use crate::error::{Error, Result};
use crate::homology::{map_connectivity, Conn, Verdict};
use crate::matrix::Mat;
use crate::module::{LinearMap, SimplicialModule};
use crate::ring::Ring;

pub fn elements(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|&t| mask >> t & 1 == 1).collect()
}

/// `#{u in U : u < t}`.
pub fn below(mask: usize, t: usize) -> usize {
    (mask & ((1 << t) - 1)).count_ones() as usize
}

pub fn set_string(mask: usize) -> String {
    let e: Vec<String> = elements(mask).iter().map(|t| t.to_string()).collect();
    format!("{{{}}}", e.join(","))
}

fn edge_sign(ring: Ring, mask: usize, t: usize) -> i64 {
    ring.sign(below(mask, t))
}

/// A commuting `W`-cube of chain complexes. `edges[U][t]` is the map
/// `X_U -> X_{U+t}` for `t` not in `U`.
#[derive(Clone, Debug)]
pub struct ChainCube {
    pub w: usize,
    pub vertices: Vec<ChainComplex>,
    pub edges: Vec<Vec<Option<ChainMap>>>,
}

impl ChainCube {
    pub fn from_fn(
        w: usize,
        mut vertex: impl FnMut(usize) -> ChainComplex,
        mut edge: impl FnMut(usize, usize) -> ChainMap,
    ) -> ChainCube {
        let vertices: Vec<ChainComplex> = (0..1 << w).map(&mut vertex).collect();
        let edges = (0..1 << w)
            .map(|u| (0..w).map(|t| if u >> t & 1 == 0 { Some(edge(u, t)) } else { None }).collect())
            .collect();
        ChainCube { w, vertices, edges }
    }

    /// Cube of normalized chains of a cube of simplicial modules, one model
    /// for all vertices.
    pub fn from_modules(w: usize, vertices: &[SimplicialModule], edges: impl Fn(usize, usize) -> LinearMap) -> ChainCube {
        let quotient = vertices.iter().all(|a| a.set_like);
        let cap = vertices.iter().map(SimplicialModule::cap).min().unwrap();
        let vertices: Vec<SimplicialModule> = vertices.iter().map(|a| a.truncate(cap)).collect();
        let normalized: Vec<ChainComplex> = vertices.iter().map(|a| normalize_in(a, quotient).complex).collect();
        ChainCube::from_fn(w, |u| normalized[u].clone(), |u, t| {
            let mut f = normalize_map_in(&edges(u, t).truncate(cap), &vertices[u], &vertices[u | 1 << t], quotient);
            f.source = normalized[u].clone();
            f.target = normalized[u | 1 << t].clone();
            f
        })
    }

    pub fn ring(&self) -> Ring {
        self.vertices[0].ring
    }

    pub fn full(&self) -> usize {
        (1 << self.w) - 1
    }

    pub fn edge(&self, u: usize, t: usize) -> &ChainMap {
        self.edges[u][t].as_ref().expect("edge leaves the cube")
    }

    pub fn constant(c: &ChainComplex, w: usize) -> ChainCube {
        ChainCube::from_fn(w, |_| c.clone(), |_, _| ChainMap::identity(c))
    }

    pub fn one_cube(f: &ChainMap) -> ChainCube {
        ChainCube { w: 1, vertices: vec![f.source.clone(), f.target.clone()], edges: vec![vec![Some(f.clone())], vec![None]] }
    }

    /// Chain-map checks on every edge and commutativity of every square.
    pub fn validate(&self) -> Vec<String> {
        let r = self.ring();
        let mut out = Vec::new();
        for u in 0..1usize << self.w {
            for t in 0..self.w {
                if u >> t & 1 == 0 {
                    if let Err(e) = self.edge(u, t).check() {
                        out.push(format!("edge {} -> {}: {e}", set_string(u), set_string(u | 1 << t)));
                    }
                }
            }
            for s in 0..self.w {
                for t in s + 1..self.w {
                    if u >> s & 1 == 1 || u >> t & 1 == 1 {
                        continue;
                    }
                    let a = self.edge(u | 1 << s, t).compose(self.edge(u, s));
                    let b = self.edge(u | 1 << t, s).compose(self.edge(u, t));
                    let lo = self.vertices[u].lo;
                    let hi = self.vertices[u].hi();
                    if (lo..=hi).any(|n| a.at(n).sub(r, &b.at(n)).reduce(r) != Mat::zeros(a.at(n).rows(), a.at(n).cols())) {
                        out.push(format!("square at {} in directions {s},{t} does not commute", set_string(u)));
                    }
                }
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v.join("; ")))
        }
    }

    /// The map `X_U -> X_V` for `U ⊆ V`, as a composite of edges.
    pub fn composite(&self, u: usize, v: usize) -> ChainMap {
        assert_eq!(u & v, u);
        let mut f = ChainMap::identity(&self.vertices[u]);
        let mut cur = u;
        for t in elements(v & !u) {
            f = self.edge(cur, t).compose(&f);
            cur |= 1 << t;
        }
        f
    }

    /// `∂_U^V`: the `(V - U)`-cube `T -> X_{T ∪ U}`.
    pub fn face(&self, u: usize, v: usize) -> Result<ChainCube> {
        if u & v != u || v > self.full() {
            return Err(Error::Index(format!("{} is not contained in {}", set_string(u), set_string(v))));
        }
        let dirs = elements(v & !u);
        let lift = |m: usize| u | elements(m).iter().fold(0, |acc, &i| acc | 1 << dirs[i]);
        Ok(ChainCube::from_fn(dirs.len(), |m| self.vertices[lift(m)].clone(), |m, i| self.edge(lift(m), dirs[i]).clone()))
    }

    /// The `d`-cube `U -> X_{ξ(U)}`.
    pub fn restrict(&self, emb: &SubcubeEmbedding) -> ChainCube {
        ChainCube::from_fn(emb.d(), |m| self.vertices[emb.apply(m)].clone(), |m, i| self.composite(emb.apply(m), emb.apply(m | 1 << i)))
    }

    /// Replaces every edge into the terminal vertex by zero (commutativity
    /// is kept).
    pub fn zero_edges_into_top(&self) -> ChainCube {
        let mut c = self.clone();
        for t in 0..self.w {
            let u = self.full() & !(1 << t);
            let f = self.edge(u, t);
            c.edges[u][t] = Some(ChainMap::zero(&f.source, &f.target));
        }
        c
    }
}

/// A signed total complex `⊕_{U ∈ S} X_U[a(U)]` with block offsets.
#[derive(Clone, Debug)]
pub struct Total {
    pub complex: ChainComplex,
    pub members: Vec<usize>,
    pub shifts: Vec<i64>,
}

impl Total {
    /// Offset of the block of `X_U` inside degree `n`.
    pub fn offset(&self, cube: &ChainCube, n: i64, u: usize) -> Option<usize> {
        let mut off = 0;
        for (k, &m) in self.members.iter().enumerate() {
            if m == u {
                return Some(off);
            }
            off += cube.vertices[m].dim(n + self.shifts[k]);
        }
        None
    }
}

/// Degree `n` is `⊕ (X_U)_{n + a(U)}`; the differential is `(-1)^{a(U)} ∂`
/// plus `(-1)^{#{u in U: u < t}} f` along each edge inside `S`. Requires
/// `a(U + t) = a(U) + 1`.
pub fn signed_total(cube: &ChainCube, members: &[usize], a: impl Fn(usize) -> i64) -> Total {
    let r = cube.ring();
    let shifts: Vec<i64> = members.iter().map(|&u| a(u)).collect();
    if members.is_empty() {
        return Total { complex: ChainComplex::zero(r), members: vec![], shifts };
    }
    let vx = |k: usize| &cube.vertices[members[k]];
    let lo = (0..members.len()).map(|k| vx(k).lo - shifts[k]).min().unwrap();
    let complete = (0..members.len()).all(|k| vx(k).complete);
    let avail = (0..members.len()).filter(|&k| !vx(k).complete).map(|k| vx(k).hi() - shifts[k]).min().unwrap_or(i64::MAX);
    let hi = if complete { (0..members.len()).map(|k| vx(k).hi() - shifts[k]).max().unwrap() } else { avail };
    let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(k, &u)| (u, k)).collect();
    let mut dims = Vec::new();
    let mut bd = Vec::new();
    for n in lo..=hi.max(lo) {
        let col_sizes: Vec<usize> = (0..members.len()).map(|k| vx(k).dim(n + shifts[k])).collect();
        let row_sizes: Vec<usize> = (0..members.len()).map(|k| vx(k).dim(n - 1 + shifts[k])).collect();
        let mut blocks: Vec<Vec<Option<Mat>>> = vec![vec![None; members.len()]; members.len()];
        for (k, &u) in members.iter().enumerate() {
            let deg = n + shifts[k];
            blocks[k][k] = Some(vx(k).boundary(deg).scale(r, r.sign(shifts[k].unsigned_abs() as usize)));
            for t in 0..cube.w {
                if u >> t & 1 == 1 {
                    continue;
                }
                if let Some(&k2) = pos.get(&(u | 1 << t)) {
                    debug_assert_eq!(shifts[k2], shifts[k] + 1);
                    blocks[k2][k] = Some(cube.edge(u, t).at(deg).scale(r, edge_sign(r, u, t)));
                }
            }
        }
        dims.push(col_sizes.iter().sum());
        bd.push(Mat::block(&row_sizes, &col_sizes, &blocks));
    }
    let complex = ChainComplex { ring: r, lo, dims, bd, complete };
    debug_assert!(complex.check_d_squared().is_ok());
    Total { complex, members: members.to_vec(), shifts }
}

/// Total homotopy fiber. For a 0-cube this is `X_∅` itself.
pub fn total_hofiber(cube: &ChainCube) -> ChainComplex {
    let members: Vec<usize> = (0..1 << cube.w).collect();
    signed_total(cube, &members, |u| u.count_ones() as i64).complex
}

/// Total homotopy cofiber: `Σ^{|W|}` of the total fiber.
pub fn total_hocofiber(cube: &ChainCube) -> ChainComplex {
    let w = cube.w as i64;
    let members: Vec<usize> = (0..1 << cube.w).collect();
    signed_total(cube, &members, |u| u.count_ones() as i64 - w).complex
}

/// Homotopy limit of the cube restricted to nonempty sets.
pub fn punctured_holim(cube: &ChainCube) -> Total {
    let members: Vec<usize> = (1..1 << cube.w).collect();
    signed_total(cube, &members, |u| u.count_ones() as i64 - 1)
}

/// Homotopy colimit of the cube restricted to proper subsets.
pub fn punctured_hocolim(cube: &ChainCube) -> Total {
    let w = cube.w as i64;
    let members: Vec<usize> = (0..cube.full()).collect();
    signed_total(cube, &members, |u| u.count_ones() as i64 - w + 1)
}

/// The canonical map `X_∅ -> holim_{P_0(W)} X`.
pub fn holim_map(cube: &ChainCube) -> ChainMap {
    let r = cube.ring();
    let holim = punctured_holim(cube);
    let x = &cube.vertices[0];
    let maps = (x.lo..=x.hi())
        .map(|n| {
            let rows = holim.complex.dim(n);
            if n > holim.complex.hi() {
                // beyond the levels the holim is known on
                return Mat::zeros(rows, x.dim(n));
            }
            let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); x.dim(n)];
            for t in 0..cube.w {
                let off = holim.offset(cube, n, 1 << t).expect("singleton is a member");
                let f = cube.edge(0, t).at(n);
                for (c, col) in cols.iter_mut().enumerate() {
                    col.extend(f.col(c).iter().map(|&(row, v)| (off + row, v)));
                }
            }
            Mat::from_columns(r, rows, cols)
        })
        .collect();
    ChainMap { source: x.clone(), target: holim.complex, maps }
}

/// The canonical map `hocolim_{P_1(W)} X -> X_W`.
pub fn hocolim_map(cube: &ChainCube) -> ChainMap {
    let r = cube.ring();
    let hocolim = punctured_hocolim(cube);
    let top = &cube.vertices[cube.full()];
    let src = &hocolim.complex;
    let maps = (src.lo..=src.hi())
        .map(|n| {
            let mut blocks: Vec<Mat> = Vec::new();
            for (k, &u) in hocolim.members.iter().enumerate() {
                let deg = n + hocolim.shifts[k];
                let width = cube.vertices[u].dim(deg);
                if hocolim.shifts[k] == 0 && cube.w > 0 {
                    let t = (cube.full() & !u).trailing_zeros() as usize;
                    blocks.push(cube.edge(u, t).at(deg).scale(r, edge_sign(r, u, t)));
                } else {
                    blocks.push(Mat::zeros(top.dim(n), width));
                }
            }
            blocks.iter().skip(1).fold(blocks.first().cloned().unwrap_or_else(|| Mat::zeros(top.dim(n), 0)), |acc, b| acc.hstack(b))
        })
        .collect();
    ChainMap { source: hocolim.complex.clone(), target: top.clone(), maps }
}

/// Connectivity of `X_∅ -> holim_{P_0(W)} X`.
pub fn cartesian_degree(cube: &ChainCube, window: i64) -> Verdict {
    map_connectivity(&holim_map(cube), window)
}

/// Connectivity of `hocolim_{P_1(W)} X -> X_W`.
pub fn cocartesian_degree(cube: &ChainCube, window: i64) -> Verdict {
    map_connectivity(&hocolim_map(cube), window)
}

/// A lattice embedding `ξ: P(T) -> P(W)`, `ξ(U) = B ∪ ⋃_{t ∈ U} S_t`, with
/// petals disjoint from the base and from each other.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubcubeEmbedding {
    pub base: usize,
    pub petals: Vec<usize>,
}

impl SubcubeEmbedding {
    pub fn d(&self) -> usize {
        self.petals.len()
    }

    pub fn apply(&self, u: usize) -> usize {
        elements(u).iter().fold(self.base, |acc, &t| acc | self.petals[t])
    }

    pub fn identity(w: usize) -> SubcubeEmbedding {
        SubcubeEmbedding { base: 0, petals: (0..w).map(|t| 1 << t).collect() }
    }

    /// Injectivity and preservation of intersections, pair by pair.
    pub fn check(&self) -> Result<()> {
        let n = 1usize << self.d();
        let images: Vec<usize> = (0..n).map(|u| self.apply(u)).collect();
        for u in 0..n {
            for v in 0..n {
                if u != v && images[u] == images[v] {
                    return Err(Error::Validation(format!("not injective: {} and {}", set_string(u), set_string(v))));
                }
                if self.apply(u & v) != images[u] & images[v] {
                    return Err(Error::Validation(format!("intersection of {} and {} not preserved", set_string(u), set_string(v))));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for SubcubeEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.petals.iter().map(|&s| set_string(s)).collect();
        write!(f, "{} + [{}]", set_string(self.base), p.join(" "))
    }
}

/// All `d`-subcubes of a `w`-cube, one per embedding up to reordering `T`.
pub fn enumerate_subcubes(w: usize, d: usize) -> Vec<SubcubeEmbedding> {
    fn petals(free: usize, d: usize, min: usize, cur: &mut Vec<usize>, base: usize, out: &mut Vec<SubcubeEmbedding>) {
        if cur.len() == d {
            out.push(SubcubeEmbedding { base, petals: cur.clone() });
            return;
        }
        for s in min..=free {
            if s != 0 && s & free == s {
                cur.push(s);
                petals(free & !s, d, s + 1, cur, base, out);
                cur.pop();
            }
        }
    }
    let full = (1usize << w) - 1;
    let mut out = Vec::new();
    if d > w {
        return out;
    }
    for base in 0..=full {
        petals(full & !base, d, 1, &mut Vec::new(), base, &mut out);
    }
    out
}

/// Number of presentations `(B, {S_t})` with petals allowed to meet the
/// base; each reduces to exactly one embedding after `S_t -> S_t - B`.
pub fn count_raw_presentations(w: usize, d: usize) -> usize {
    let full = (1usize << w) - 1;
    let mut count = 0;
    fn rec(full: usize, base: usize, d: usize, min: usize, cur: &mut Vec<usize>, count: &mut usize) {
        if cur.len() == d {
            *count += 1;
            return;
        }
        for s in min..=full {
            if s & !base == 0 || cur.iter().any(|&p| p & s & !base != 0) {
                continue;
            }
            cur.push(s);
            rec(full, base, d, s + 1, cur, count);
            cur.pop();
        }
    }
    for base in 0..=full {
        rec(full, base, d, 0, &mut Vec::new(), &mut count);
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Confirmed,
    Violation,
    UnverifiedWithinWindow,
}

pub fn status_of(verdict: &Verdict, claim: Conn) -> CheckStatus {
    if verdict.violates(claim) {
        CheckStatus::Violation
    } else if verdict.confirms(claim) {
        CheckStatus::Confirmed
    } else {
        CheckStatus::UnverifiedWithinWindow
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubcubeVerdict {
    pub embedding: SubcubeEmbedding,
    pub claim: Conn,
    pub verdict: Verdict,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartesianReport {
    #[serde(rename = "W")]
    pub w: usize,
    pub subcubes: Vec<SubcubeVerdict>,
    pub violations: usize,
    pub unverified: usize,
}

impl CartesianReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn first_violation(&self) -> Option<&SubcubeVerdict> {
        self.subcubes.iter().find(|s| s.status == CheckStatus::Violation)
    }
}

/// Checks that every `d`-subcube (`1 <= d <= |W|`) is `f(d)`-cartesian.
pub fn f_cartesian_check(cube: &ChainCube, f: impl Fn(usize) -> Conn, window: i64) -> CartesianReport {
    let mut subcubes = Vec::new();
    for d in 1..=cube.w {
        for emb in enumerate_subcubes(cube.w, d) {
            let verdict = cartesian_degree(&cube.restrict(&emb), window);
            let claim = f(d);
            subcubes.push(SubcubeVerdict { embedding: emb, claim, verdict, status: status_of(&verdict, claim) });
        }
    }
    let violations = subcubes.iter().filter(|s| s.status == CheckStatus::Violation).count();
    let unverified = subcubes.iter().filter(|s| s.status == CheckStatus::UnverifiedWithinWindow).count();
    CartesianReport { w: cube.w, subcubes, violations, unverified }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionBound {
    pub k: Conn,
    pub witness: Vec<usize>,
}

/// Set partitions of the elements of `mask`, blocks as bitmasks.
pub fn set_partitions(mask: usize) -> Vec<Vec<usize>> {
    let els = elements(mask);
    let mut out = Vec::new();
    fn rec(els: &[usize], i: usize, blocks: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == els.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << els[i];
            rec(els, i + 1, blocks, out);
            blocks[b] &= !(1 << els[i]);
        }
        blocks.push(1 << els[i]);
        rec(els, i + 1, blocks, out);
        blocks.pop();
    }
    rec(&els, 0, &mut Vec::new(), &mut out);
    out
}

/// Cocartesianness bound from the cartesianness `k_V` of the faces
/// `∂_{W-V}^W`: the minimum over partitions λ of `W` of
/// `|W| - 1 + Σ_{V ∈ λ} k_V`.
pub fn hdbm_bound(w: usize, k: &BTreeMap<usize, Conn>) -> Result<PartitionBound> {
    let full = (1usize << w) - 1;
    for v in 1..=full {
        if !k.contains_key(&v) {
            return Err(Error::Precondition(format!("no value for {}", set_string(v))));
        }
    }
    for (&u, &ku) in k.range(1..=full) {
        for (&v, &kv) in k.range(1..=full) {
            if u != v && u & v == u && ku > kv {
                return Err(Error::Precondition(format!(
                    "not monotone: k{} = {ku} exceeds k{} = {kv}",
                    set_string(u),
                    set_string(v)
                )));
            }
        }
    }
    let mut best: Option<PartitionBound> = None;
    for blocks in set_partitions(full) {
        let total = blocks.iter().fold(Conn::Finite(w as i64 - 1), |acc, b| acc.plus(k[b]));
        if best.as_ref().map_or(true, |b| total < b.k) {
            let mut witness = blocks.clone();
            witness.sort();
            best = Some(PartitionBound { k: total, witness });
        }
    }
    Ok(best.unwrap_or(PartitionBound { k: Conn::Infinite, witness: vec![] }))
}

/// Support closure under the boundary: all cells reachable by taking
/// boundaries.
fn closure(e: &ChainComplex, cells: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let mut out = cells.to_vec();
    for n in (1..out.len()).rev() {
        let b = e.boundary(e.lo + n as i64);
        for c in 0..out[n].len() {
            if out[n][c] {
                for &(row, _) in b.col(c) {
                    out[n - 1][row] = true;
                }
            }
        }
    }
    out
}

fn random_cells<R: Rng>(rng: &mut R, e: &ChainComplex, p: f64) -> Vec<Vec<bool>> {
    e.dims.iter().map(|&d| (0..d).map(|_| rng.gen_bool(p)).collect()).collect()
}

/// Random commuting cube: `X_U = S_U / Q_U` for monotone families of
/// subcomplexes `Q_U ⊆ S_U` spanned by cells of one random complex, with
/// induced edges. With `scramble` every vertex gets a random change of basis.
pub fn random_cube<R: Rng>(rng: &mut R, ring: Ring, w: usize, top: usize, max_rank: usize, scramble: bool) -> ChainCube {
    let e = random_complex(rng, ring, top, max_rank);
    let n = 1usize << w;
    let r_sets: Vec<Vec<Vec<bool>>> = (0..n).map(|_| random_cells(rng, &e, 0.35)).collect();
    let union_below = |sets: &[Vec<Vec<bool>>], u: usize| -> Vec<Vec<bool>> {
        let mut acc: Vec<Vec<bool>> = e.dims.iter().map(|&d| vec![false; d]).collect();
        for v in 0..n {
            if v & u == v {
                for (a, s) in acc.iter_mut().zip(&sets[v]) {
                    for (x, y) in a.iter_mut().zip(s) {
                        *x |= *y;
                    }
                }
            }
        }
        closure(&e, &acc)
    };
    let s: Vec<Vec<Vec<bool>>> = (0..n).map(|u| union_below(&r_sets, u)).collect();
    let p_sets: Vec<Vec<Vec<bool>>> = (0..n)
        .map(|u| s[u].iter().map(|lvl| lvl.iter().map(|&x| x && rng.gen_bool(0.3)).collect()).collect())
        .collect();
    let q: Vec<Vec<Vec<bool>>> = (0..n).map(|u| union_below(&p_sets, u)).collect();
    // basis of X_U in degree k: cells in S_U minus Q_U
    let basis: Vec<Vec<Vec<usize>>> =
        (0..n).map(|u| (0..e.dims.len()).map(|k| (0..e.dims[k]).filter(|&c| s[u][k][c] && !q[u][k][c]).collect()).collect()).collect();
    let sub = |m: &Mat, rows: &[usize], cols: &[usize]| m.select_rows(rows).select_cols(cols);
    let mut vertices: Vec<ChainComplex> = (0..n)
        .map(|u| {
            let dims = basis[u].iter().map(Vec::len).collect();
            let bd = (0..e.dims.len())
                .map(|k| {
                    let below: &[usize] = if k == 0 { &[] } else { &basis[u][k - 1] };
                    sub(&e.boundary(k as i64), below, &basis[u][k])
                })
                .collect();
            ChainComplex { ring, lo: 0, dims, bd, complete: true }
        })
        .collect();
    let inclusion = |u: usize, v: usize, k: usize| -> Mat {
        let pos: BTreeMap<usize, usize> = basis[v][k].iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let cols = basis[u][k].iter().map(|c| pos.get(c).map(|&i| vec![(i, 1)]).unwrap_or_default()).collect();
        Mat::from_columns(ring, basis[v][k].len(), cols)
    };
    let mut edge_maps: Vec<Vec<Option<Vec<Mat>>>> = (0..n)
        .map(|u| (0..w).map(|t| (u >> t & 1 == 0).then(|| (0..e.dims.len()).map(|k| inclusion(u, u | 1 << t, k)).collect())).collect())
        .collect();
    if scramble {
        let gs: Vec<Vec<(Mat, Mat)>> = (0..n).map(|u| vertices[u].dims.iter().map(|&d| random_unimodular(rng, ring, d)).collect()).collect();
        for u in 0..n {
            let v = &mut vertices[u];
            for k in 0..v.dims.len() {
                let below = if k == 0 { Mat::identity(0) } else { gs[u][k - 1].0.clone() };
                v.bd[k] = below.mul(ring, &v.bd[k]).mul(ring, &gs[u][k].1);
            }
            for t in 0..w {
                if let Some(maps) = edge_maps[u][t].as_mut() {
                    for (k, m) in maps.iter_mut().enumerate() {
                        *m = gs[u | 1 << t][k].0.mul(ring, m).mul(ring, &gs[u][k].1);
                    }
                }
            }
        }
    }
    ChainCube::from_fn(
        w,
        |u| vertices[u].clone(),
        |u, t| ChainMap { source: vertices[u].clone(), target: vertices[u | 1 << t].clone(), maps: edge_maps[u][t].clone().unwrap() },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{complex_connectivity, homology};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z_in(deg: i64) -> ChainComplex {
        ChainComplex { ring: Ring::Integers, lo: deg, dims: vec![1], bd: vec![Mat::zeros(0, 1)], complete: true }
    }

    #[test]
    fn subcube_counts() {
        assert_eq!(enumerate_subcubes(2, 1).len(), 5);
        assert_eq!(enumerate_subcubes(3, 1).len(), 19);
        assert!(enumerate_subcubes(2, 2).contains(&SubcubeEmbedding::identity(2)));
        for w in 1..=4 {
            for d in 0..=w {
                for e in enumerate_subcubes(w, d) {
                    e.check().unwrap();
                }
            }
        }
    }

    #[test]
    fn two_cube_has_four_edges_as_faces() {
        let c = ChainCube::constant(&z_in(0), 2);
        let ones: Vec<_> = (0..4usize)
            .flat_map(|u| (0..4usize).map(move |v| (u, v)))
            .filter(|&(u, v)| u & v == u && (v & !u).count_ones() == 1)
            .collect();
        assert_eq!(ones.len(), 4);
        for (u, v) in ones {
            assert_eq!(c.face(u, v).unwrap().w, 1);
        }
        assert!(c.face(1, 2).is_err());
    }

    #[test]
    fn constant_cube_is_acyclic() {
        for w in 1..=3 {
            let c = ChainCube::constant(&z_in(0), w);
            assert!(homology(&total_hofiber(&c)).entries.iter().all(|e| e.is_zero()));
            assert_eq!(cartesian_degree(&c, 6), Verdict::at_least(6, 6));
        }
    }

    #[test]
    fn corner_cube_homology_degree() {
        // Z at the terminal vertex of a 2-cube, zeros elsewhere
        let zero = ChainComplex { ring: Ring::Integers, lo: 0, dims: vec![0], bd: vec![Mat::zeros(0, 0)], complete: true };
        let top = z_in(0);
        let c = ChainCube::from_fn(2, |u| if u == 3 { top.clone() } else { zero.clone() }, |u, t| {
            let (a, b) = (if u == 3 { &top } else { &zero }, if u | 1 << t == 3 { &top } else { &zero });
            ChainMap::zero(a, b)
        });
        let h = homology(&total_hofiber(&c));
        let nz: Vec<i64> = h.entries.iter().filter(|e| !e.is_zero()).map(|e| e.degree).collect();
        assert_eq!(nz, vec![-2]);
    }

    #[test]
    fn one_cube_fiber_matches_cone() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let c = random_cube(&mut rng, Ring::Integers, 1, 5, 4, true);
            let f = c.edge(0, 0);
            let a = homology(&total_hofiber(&c));
            let b = homology(&f.fiber());
            assert!(a.agrees_with(&b, 5));
            assert_eq!(cartesian_degree(&c, 5), map_connectivity(f, 5));
        }
    }

    #[test]
    fn random_cubes_commute_and_dualize() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for w in 2..=3 {
            for _ in 0..10 {
                let c = random_cube(&mut rng, Ring::F2, w, 6, 4, true);
                assert!(c.validate().is_empty());
                let cart = cartesian_degree(&c, 4);
                let cocart = cocartesian_degree(&c, 4 + w as i64 - 1);
                assert_eq!(cart.offset(w as i64 - 1), cocart);
                let tf = total_hofiber(&c);
                let fib = holim_map(&c).fiber();
                assert!(homology(&tf).agrees_with(&homology(&fib), 4));
                assert_eq!(complex_connectivity(&total_hocofiber(&c), 8), complex_connectivity(&hocolim_map(&c).cone(), 8));
            }
        }
    }

    #[test]
    fn bounds_from_partitions() {
        let inf = Conn::Infinite;
        let two: BTreeMap<usize, Conn> = [(1, Conn::Finite(3)), (2, Conn::Finite(3)), (3, inf)].into();
        let b = hdbm_bound(2, &two).unwrap();
        assert_eq!(b.k, Conn::Finite(7));
        assert_eq!(b.witness, vec![1, 2]);
        let mut three = BTreeMap::new();
        for v in 1..8usize {
            three.insert(v, match v.count_ones() { 1 => Conn::Finite(3), 2 => Conn::Finite(4), _ => inf });
        }
        assert_eq!(hdbm_bound(3, &three).unwrap().k, Conn::Finite(9));
        assert_eq!(hdbm_bound(1, &[(1, Conn::Finite(5))].into()).unwrap().k, Conn::Finite(5));
        let bad: BTreeMap<usize, Conn> = [(1, Conn::Finite(5)), (2, Conn::Finite(3)), (3, Conn::Finite(4))].into();
        let err = hdbm_bound(2, &bad).unwrap_err().to_string();
        assert!(err.contains("{0}") && err.contains("{0,1}"), "{err}");
    }

    #[test]
    fn broken_cube_is_caught() {
        let c = ChainCube::constant(&z_in(2), 2);
        let rep = f_cartesian_check(&c, |d| Conn::Finite(d as i64), 3);
        assert!(rep.passed());
        let broken = c.zero_edges_into_top();
        assert!(broken.validate().is_empty());
        let rep = f_cartesian_check(&broken, |d| Conn::Finite(d as i64), 3);
        assert!(!rep.passed());
        assert!(rep.first_violation().is_some());
    }
}
