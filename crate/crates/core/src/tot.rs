//! Totalization of cosimplicial objects: the normalized double complex route,
//! the end of hom-objects route, the tower, its fibers and connectivity
//! report, and the strict filling of punctured coface cubes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, ChainMap};
use crate::comonad::KCoalgebra;
use crate::cosimplicial::{cobar_algebraic, codegeneracy_cube, conormal_basis, normalize_cosimplicial, CosimplicialChain, CosimplicialModule};
use crate::cube::{below, status_of, total_hofiber, ChainCube, CheckStatus};
use crate::dold_kan::homotopy_groups;
use crate::enrich::{maps_from, restriction, MapSpace};
use crate::error::{Error, Result};
use crate::homology::{complex_connectivity, homology, map_connectivity, Conn, GradedGroup, Verdict};
use crate::linalg::{kernel, solve};
use crate::matrix::Mat;
use crate::module::SimplicialModule;
use crate::ordinal::OrdinalMap;
use crate::ring::Ring;
use crate::simplicial::{FinSimplicialSet, SimplexRef};
use crate::sset_ops::{map_to_simplex, product_indexed, simplex_to_map, simplex_vertex_sets, standard_simplex, Product};

/// The conormalized cochain complex of chain complexes: `N^p = ∩_j ker s^j`
/// with `δ = Σ (-1)^i d^i`.
#[derive(Clone, Debug)]
pub struct NormalizedDouble {
    pub columns: Vec<ChainComplex>,
    /// `delta[p]: N^p -> N^{p+1}`.
    pub delta: Vec<ChainMap>,
}

/// Coordinates of `m`'s columns in the basis `b` (columns of `m` in span).
fn coords(r: Ring, b: &Mat, m: &Mat) -> Mat {
    if m.cols() == 0 || b.cols() == 0 {
        return Mat::zeros(b.cols(), m.cols());
    }
    solve(r, b, m).expect("image lies in the subspace")
}

pub fn conormalize(z: &CosimplicialChain) -> NormalizedDouble {
    let r = z.levels[0].ring;
    let depth = z.depth();
    let bases: Vec<Vec<Mat>> = (0..=depth).map(|p| conormal_basis(z, p)).collect();
    let columns: Vec<ChainComplex> = (0..=depth)
        .map(|p| {
            let c = &z.levels[p];
            let b = &bases[p];
            let at = |d: i64| &b[(d - c.lo) as usize];
            let dims = b.iter().map(|m| m.cols()).collect();
            let bd = (c.lo..=c.hi())
                .map(|d| {
                    if d == c.lo {
                        Mat::zeros(0, at(d).cols())
                    } else {
                        coords(r, at(d - 1), &c.boundary(d).mul(r, at(d)))
                    }
                })
                .collect();
            ChainComplex { ring: r, lo: c.lo, dims, bd, complete: c.complete }
        })
        .collect();
    let delta = (0..depth)
        .map(|p| {
            let (src, tgt) = (&z.levels[p], &z.levels[p + 1]);
            let maps = (src.lo..=src.hi())
                .map(|d| {
                    let mut sum = Mat::zeros(tgt.dim(d), src.dim(d));
                    for (i, f) in z.cofaces[p + 1].iter().enumerate() {
                        sum = sum.add(r, &f.at(d).scale(r, r.sign(i)));
                    }
                    let b_src = &bases[p][(d - src.lo) as usize];
                    if d < tgt.lo || d > tgt.hi() {
                        return Mat::zeros(0, b_src.cols());
                    }
                    coords(r, &bases[p + 1][(d - tgt.lo) as usize], &sum.mul(r, b_src))
                })
                .collect();
            ChainMap { source: columns[p].clone(), target: columns[p + 1].clone(), maps }
        })
        .collect();
    NormalizedDouble { columns, delta }
}

impl NormalizedDouble {
    pub fn depth(&self) -> usize {
        self.columns.len() - 1
    }

    /// `Tot_s`: degree `k` is `⊕_{p <= s} N^p_{k+p}`, `D = δ + (-1)^p ∂`.
    pub fn tot(&self, s: usize) -> ChainComplex {
        let cols = &self.columns[..=s];
        let r = cols[0].ring;
        let lo = cols.iter().enumerate().map(|(p, c)| c.lo - p as i64).min().unwrap();
        let complete = cols.iter().all(|c| c.complete);
        let hi = if complete {
            cols.iter().enumerate().map(|(p, c)| c.hi() - p as i64).max().unwrap()
        } else {
            cols.iter().enumerate().filter(|(_, c)| !c.complete).map(|(p, c)| c.hi() - p as i64).min().unwrap()
        };
        let mut dims = Vec::new();
        let mut bd = Vec::new();
        for k in lo..=hi.max(lo) {
            let col_sizes: Vec<usize> = (0..=s).map(|p| cols[p].dim(k + p as i64)).collect();
            let row_sizes: Vec<usize> = (0..=s).map(|p| cols[p].dim(k - 1 + p as i64)).collect();
            let mut blocks = vec![vec![None; s + 1]; s + 1];
            for p in 0..=s {
                let d = k + p as i64;
                blocks[p][p] = Some(cols[p].boundary(d).scale(r, r.sign(p)));
                if p < s {
                    blocks[p + 1][p] = Some(self.delta[p].at(d));
                }
            }
            dims.push(col_sizes.iter().sum());
            bd.push(Mat::block(&row_sizes, &col_sizes, &blocks));
        }
        ChainComplex { ring: r, lo, dims, bd, complete }
    }

    /// Projection `Tot_s -> Tot_{s-1}` forgetting the `N^s` column.
    pub fn projection(&self, s: usize) -> ChainMap {
        let (a, b) = (self.tot(s), self.tot(s - 1));
        let maps = (a.lo..=a.hi())
            .map(|k| {
                let keep: usize = (0..s).map(|p| self.columns[p].dim(k + p as i64)).sum();
                let rows = b.dim(k);
                let cols = (0..keep).map(|i| if i < rows { vec![(i, 1)] } else { vec![] }).collect::<Vec<_>>();
                let mut cols = cols;
                cols.resize(a.dim(k), vec![]);
                Mat::from_columns(a.ring, rows, cols)
            })
            .collect();
        ChainMap { source: a, target: b, maps }
    }
}

/// The `Tot` tower with its projections.
#[derive(Clone, Debug)]
pub struct TotTower {
    pub stages: Vec<ChainComplex>,
    /// `maps[s-1]: Tot_s -> Tot_{s-1}`.
    pub maps: Vec<ChainMap>,
}

impl TotTower {
    /// The composite `Tot_s -> Tot_t` for `t <= s`.
    pub fn composite(&self, s: usize, t: usize) -> ChainMap {
        let mut f = ChainMap::identity(&self.stages[s]);
        for q in (t + 1..=s).rev() {
            f = self.maps[q - 1].compose(&f);
        }
        f
    }

    /// Compares each composite of two projections with the projection
    /// computed directly.
    pub fn check_composites(&self, nd: &NormalizedDouble) -> Vec<String> {
        let mut out = Vec::new();
        for s in 2..self.stages.len() {
            let direct = {
                let (a, b) = (&self.stages[s], &self.stages[s - 2]);
                let maps = (a.lo..=a.hi())
                    .map(|k| {
                        let keep: usize = (0..s - 1).map(|p| nd.columns[p].dim(k + p as i64)).sum();
                        let mut cols: Vec<Vec<(usize, i64)>> = (0..keep).map(|i| vec![(i, 1)]).collect();
                        cols.resize(a.dim(k), vec![]);
                        Mat::from_columns(a.ring, b.dim(k), cols)
                    })
                    .collect::<Vec<_>>();
                maps
            };
            let comp = self.composite(s, s - 2);
            let a = &self.stages[s];
            if (a.lo..=a.hi()).any(|k| comp.at(k) != direct[(k - a.lo) as usize]) {
                out.push(format!("Tot_{s} -> Tot_{} composite differs from the direct map", s - 2));
            }
        }
        out
    }
}

pub fn tot_tower(z: &CosimplicialChain) -> (NormalizedDouble, TotTower) {
    let nd = conormalize(z);
    let stages = (0..=nd.depth()).map(|s| nd.tot(s)).collect();
    let maps = (1..=nd.depth()).map(|s| nd.projection(s)).collect();
    (nd, TotTower { stages, maps })
}

/// The coaugmentation `Z^{-1} -> Tot_s`, `x ↦ (d x, 0, ..., 0)`.
pub fn coaugmentation_into_tot(z: &CosimplicialChain, nd: &NormalizedDouble, s: usize) -> Result<ChainMap> {
    let (src, d) = z.coaugmentation.as_ref().ok_or_else(|| Error::Precondition("no coaugmentation".into()))?;
    let target = nd.tot(s);
    let maps = (src.lo..=src.hi())
        .map(|k| {
            let top = d.at(k);
            let rows = target.dim(k);
            if rows == 0 {
                return Mat::zeros(0, src.dim(k));
            }
            let pad = Mat::zeros(rows - top.rows(), top.cols());
            top.vstack(&pad)
        })
        .collect();
    Ok(ChainMap { source: src.clone(), target, maps })
}

// ----- the end of hom-objects -----

struct EndLevel {
    prods: Vec<Product>,
    spaces: Vec<MapSpace>,
    /// Columns span `Tot_s` at this level, in the concatenated coordinates
    /// of the per-`n` map spaces.
    basis: Mat,
}

struct Simplices {
    deltas: Vec<FinSimplicialSet>,
    verts: Vec<Vec<Vec<usize>>>,
    lookups: Vec<HashMap<Vec<usize>, usize>>,
}

impl Simplices {
    fn new(top: usize) -> Simplices {
        let deltas: Vec<FinSimplicialSet> = (0..=top).map(standard_simplex).collect();
        let verts: Vec<Vec<Vec<usize>>> = deltas.iter().map(simplex_vertex_sets).collect();
        let lookups = verts.iter().map(|v| v.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        Simplices { deltas, verts, lookups }
    }

    /// Image of every cell of `Δ[m] × Δ[q]` under `θ × α` in `Δ[n] × Δ[k]`.
    fn image(&self, small: &Product, big: &Product, theta: &OrdinalMap, alpha: &OrdinalMap) -> Vec<SimplexRef> {
        let (m, q) = (theta.source_arity, alpha.source_arity);
        let (n, k) = (theta.target_arity, alpha.target_arity);
        (0..small.set.cells.len())
            .map(|ci| {
                let (u, v) = small.project(&self.deltas[m], &self.deltas[q], &SimplexRef::cell(ci)).expect("plain product");
                let u2 = theta.compose(&simplex_to_map(&self.deltas[m], &self.verts[m], &u));
                let v2 = alpha.compose(&simplex_to_map(&self.deltas[q], &self.verts[q], &v));
                let u2 = map_to_simplex(&self.lookups[n], &u2);
                let v2 = map_to_simplex(&self.lookups[k], &v2);
                big.locate(&self.deltas[n], &self.deltas[k], &u2, &v2)
            })
            .collect()
    }
}

/// Values of `g ∘ f` at every cell, `f` given by its values.
fn pushforward(g: &crate::module::LinearMap, set: &FinSimplicialSet, src: &SimplicialModule, tgt: &SimplicialModule) -> Mat {
    Mat::block_diag(&set.cells.iter().map(|c| {
        let m = &g.maps[c.dim];
        debug_assert_eq!((m.rows(), m.cols()), (tgt.dims[c.dim], src.dims[c.dim]));
        m.clone()
    }).collect::<Vec<_>>())
}

fn unknowns_on(set: &FinSimplicialSet, y: &SimplicialModule) -> usize {
    set.cells.iter().map(|c| y.dims[c.dim]).sum()
}

/// `Tot_s` as the end of `hom(Δ[n], Z^n)`: level `k` is the module of
/// families `f_n: Δ[n] × Δ[k] -> Z^n`, `n <= s`, compatible with every
/// coface and codegeneracy. Levels run up to `cap`, limited by the levels
/// known in `Z`.
pub fn tot_end(z: &CosimplicialModule, s: usize, cap: usize) -> Result<SimplicialModule> {
    if s > z.depth() {
        return Err(Error::Precondition(format!("Tot_{s} needs level {s}")));
    }
    let r = z.levels[0].ring;
    let mut top = cap;
    for n in 0..=s {
        let need = if n < s { n + 1 } else { n };
        let have = z.levels[n].cap();
        if have < need {
            return Err(Error::Precondition(format!("level {n} known through {have}, Tot_{s} needs {need}")));
        }
        top = top.min(have - need);
    }
    let sx = Simplices::new(s + top + 1);
    let mut levels: Vec<EndLevel> = Vec::new();
    for k in 0..=top {
        let prods: Vec<Product> = (0..=s).map(|n| product_indexed(&sx.deltas[n], &sx.deltas[k])).collect();
        let spaces: Vec<MapSpace> = (0..=s).map(|n| maps_from(&prods[n].set, &z.levels[n])).collect::<Result<_>>()?;
        let col_off: Vec<usize> = spaces.iter().scan(0, |a, sp| {
            let o = *a;
            *a += sp.basis.cols();
            Some(o)
        }).collect();
        let total: usize = spaces.iter().map(|sp| sp.basis.cols()).sum();
        let id_k = OrdinalMap::identity(k);
        let mut eqs: Vec<Mat> = Vec::new();
        let place = |n: usize, m: Mat| -> Mat {
            // m acts on the coordinates of the n-th space
            let mut cols: Vec<Vec<(usize, i64)>> = vec![vec![]; total];
            for c in 0..m.cols() {
                cols[col_off[n] + c] = m.col(c).to_vec();
            }
            Mat::from_columns(r, m.rows(), cols)
        };
        for n in 1..=s {
            let small = product_indexed(&sx.deltas[n - 1], &sx.deltas[k]);
            for i in 0..=n {
                // d^i ∘ f_{n-1} = f_n ∘ (δ^i × id)
                let lhs = pushforward(&z.cofaces[n][i], &small.set, &z.levels[n - 1], &z.levels[n]).mul(r, &spaces[n - 1].basis);
                let img = sx.image(&small, &prods[n], &OrdinalMap::coface(n, i), &id_k);
                let res = restriction(&z.levels[n], &small.set, &spaces[n].offsets, &prods[n].set, &img, unknowns_on(&small.set, &z.levels[n]), spaces[n].unknowns);
                let rhs = res.mul(r, &spaces[n].basis);
                eqs.push(place(n - 1, lhs).sub(r, &place(n, rhs)));
            }
        }
        for n in 0..s {
            let small = &prods[n + 1];
            for j in 0..=n {
                // s^j ∘ f_{n+1} = f_n ∘ (σ^j × id)
                let lhs = pushforward(&z.codegens[n][j], &small.set, &z.levels[n + 1], &z.levels[n]).mul(r, &spaces[n + 1].basis);
                let img = sx.image(small, &prods[n], &OrdinalMap::codegeneracy(n, j), &id_k);
                let res = restriction(&z.levels[n], &small.set, &spaces[n].offsets, &prods[n].set, &img, unknowns_on(&small.set, &z.levels[n]), spaces[n].unknowns);
                let rhs = res.mul(r, &spaces[n].basis);
                eqs.push(place(n + 1, lhs).sub(r, &place(n, rhs)));
            }
        }
        let mut stack = Mat::zeros(0, total);
        for e in &eqs {
            stack = stack.vstack(e);
        }
        let basis = kernel(r, &stack);
        levels.push(EndLevel { prods, spaces, basis });
    }
    // restriction along id × α for α: [q] -> [k]
    let op = |alpha: &OrdinalMap| -> Mat {
        let (q, k) = (alpha.source_arity, alpha.target_arity);
        let (lq, lk) = (&levels[q], &levels[k]);
        let mut blocks = Vec::new();
        for n in 0..=s {
            let img = sx.image(&lq.prods[n], &lk.prods[n], &OrdinalMap::identity(n), alpha);
            let res = restriction(&z.levels[n], &lq.prods[n].set, &lk.spaces[n].offsets, &lk.prods[n].set, &img, lq.spaces[n].unknowns, lk.spaces[n].unknowns);
            let m = res.mul(r, &lk.spaces[n].basis);
            blocks.push(coords(r, &lq.spaces[n].basis, &m));
        }
        let big = Mat::block_diag(&blocks).mul(r, &lk.basis);
        coords(r, &lq.basis, &big)
    };
    let faces = (0..=top)
        .map(|k| if k == 0 { vec![] } else { (0..=k).map(|i| op(&OrdinalMap::coface(k, i))).collect() })
        .collect();
    let degens = (0..=top)
        .map(|k| if k == top { vec![] } else { (0..=k).map(|j| op(&OrdinalMap::codegeneracy(k, j))).collect() })
        .collect();
    let dims = levels.iter().map(|l| l.basis.cols()).collect();
    Ok(SimplicialModule { ring: r, name: format!("Tot_{s}({})", z.name), dims, faces, degens, set_like: false })
}

/// Homotopy of `Tot_s` computed by both routes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RouteComparison {
    pub s: usize,
    pub end: GradedGroup,
    pub double: GradedGroup,
    pub compared_through: i64,
    pub agree: bool,
}

pub fn tot_routes(z: &CosimplicialModule, s: usize, window: i64) -> Result<RouteComparison> {
    let end = homotopy_groups(&tot_end(z, s, (window + 1).max(0) as usize)?);
    let nd = conormalize(&normalize_cosimplicial(z));
    let double = homology(&nd.tot(s));
    // the simplicial Tot only sees the connective part of the double complex
    let through = window.min(end.certified_through).min(double.certified_through);
    let agree = (0..=through).all(|n| end.at(n) == double.at(n));
    if !agree {
        return Err(Error::Internal(format!("Tot_{s} routes disagree through degree {through}")));
    }
    Ok(RouteComparison { s, end, double, compared_through: through, agree })
}

// ----- fibers of the tower -----

/// Homology of `fib(Tot_n -> Tot_{n-1})` next to the total fiber of the
/// codegeneracy cube, compared in both indexings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiberLaw {
    pub n: usize,
    pub fiber: GradedGroup,
    pub total_fiber: GradedGroup,
    pub compared_through: i64,
    /// `H_k(fib) = H_{k+n}(tfib)`.
    pub loops_direction: bool,
    /// `H_k(fib) = H_{k-n}(tfib)`.
    pub suspension_direction: bool,
}

pub fn fiber_law(z: &CosimplicialChain, n: usize, window: i64) -> Result<FiberLaw> {
    if n == 0 || n > z.depth() {
        return Err(Error::Precondition("fiber law needs 1 <= n <= depth".into()));
    }
    let nd = conormalize(z);
    let fib = homology(&nd.projection(n).fiber());
    let tf = homology(&total_hofiber(&codegeneracy_cube(z, n)?));
    let through = window.min(fib.certified_through).min(tf.certified_through - n as i64);
    let loops = fib.agrees_with(&tf.shifted(-(n as i64)), through);
    let susp = fib.agrees_with(&tf.shifted(n as i64), through);
    Ok(FiberLaw { n, fiber: fib, total_fiber: tf, compared_through: through, loops_direction: loops, suspension_direction: susp })
}

/// `H(fib d)` against `H(Ω fib s)` for a retraction `s ∘ d = id`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RetractionLaw {
    pub fiber_d: GradedGroup,
    pub loops_fiber_s: GradedGroup,
    pub compared_through: i64,
    pub agree: bool,
}

pub fn retraction_law(d: &ChainMap, s: &ChainMap, window: i64) -> Result<RetractionLaw> {
    let sd = s.compose(d);
    let top = d.source.hi().min(d.target.hi());
    if (d.source.lo..=top).any(|k| sd.at(k) != Mat::identity(d.source.dim(k))) {
        return Err(Error::Precondition("s ∘ d is not the identity".into()));
    }
    let fd = homology(&d.fiber());
    let fs = homology(&s.fiber().loops());
    let through = window.min(fd.certified_through).min(fs.certified_through);
    let agree = fd.agrees_with(&fs, through);
    Ok(RetractionLaw { fiber_d: fd, loops_fiber_s: fs, compared_through: through, agree })
}

// ----- connectivity report -----

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerEntry {
    pub n: usize,
    pub map_verdict: Verdict,
    pub claim: String,
    pub status: CheckStatus,
    pub total_fiber_verdict: Verdict,
    pub total_fiber_claim: String,
    pub total_fiber_status: CheckStatus,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerReport {
    pub depth: usize,
    pub window: i64,
    pub stage_dims: Vec<Vec<usize>>,
    pub tower: Vec<TowerEntry>,
    /// Connectivity of the coaugmentation `Y -> Tot_n`, `None` when not
    /// computable at this cap.
    pub into_stage: Vec<Option<Verdict>>,
    pub notice: Option<String>,
}

impl TowerReport {
    pub fn violations(&self) -> usize {
        self.tower
            .iter()
            .map(|e| usize::from(e.status == CheckStatus::Violation) + usize::from(e.total_fiber_status == CheckStatus::Violation))
            .sum()
    }
}

/// Connectivity of `Tot_n -> Tot_{n-1}` for the algebraic cobar tower, read
/// off the fiber `Ω^n tfib(𝒴_n)` (the cone is `Σ^{1-n} tfib(𝒴_n)`), with
/// the claims `n+2` for the map and `2n+1` for the total fiber.
pub fn tower_connectivity_report(y: &KCoalgebra, depth: usize, window: i64, cap: usize, budget: u64) -> Result<TowerReport> {
    let built = cobar_algebraic(y, depth, cap, budget)?;
    let zm = built.value;
    let z = normalize_cosimplicial(&zm);
    let stage_dims = zm.levels.iter().map(|a| a.dims.clone()).collect();
    let nd = conormalize(&z);
    let mut tower = Vec::new();
    for n in 1..=z.depth() {
        // conormal column computed directly and through the cube; they agree
        let tf = total_hofiber(&codegeneracy_cube(&z, n)?);
        let col = &nd.columns[n];
        let (h_tf, h_col) = (homology(&tf), homology(col));
        let through = h_tf.certified_through.min(h_col.certified_through).min(window + n as i64 - 1);
        if !h_tf.agrees_with(&h_col, through) {
            return Err(Error::Internal(format!("total fiber of the codegeneracy {n}-cube differs from the conormal column")));
        }
        // use whichever has the longer certified range; they agree where both are
        let best = if col.certified_through() >= tf.certified_through() { col.clone() } else { tf };
        let map_verdict = complex_connectivity(&best.shift(1 - n as i64), window);
        let claim = Conn::Finite(n as i64 + 2);
        let tfib_verdict = complex_connectivity(&best, window);
        let tfib_claim = Conn::Finite(2 * n as i64 + 1);
        tower.push(TowerEntry {
            n,
            map_verdict,
            claim: "n+2".into(),
            status: status_of(&map_verdict, claim),
            total_fiber_verdict: tfib_verdict,
            total_fiber_claim: "2n+1".into(),
            total_fiber_status: status_of(&tfib_verdict, tfib_claim),
        });
    }
    let into_stage = (0..=z.depth())
        .map(|s| {
            let f = coaugmentation_into_tot(&z, &nd, s).ok()?;
            let v = map_connectivity(&f, window);
            Some(v)
        })
        .collect();
    Ok(TowerReport { depth: z.depth(), window, stage_dims, tower, into_stage, notice: built.notice })
}

// ----- strict filling of a punctured cube -----

/// Strictly commuting replacement of the cube restricted to nonempty sets,
/// filled with its homotopy limit at `∅`. Vertex `U` is the Bousfield-Kan
/// complex of chains `c_0 ⊊ ... ⊊ c_k` of nonempty sets with `c_0 ⊇ U`,
/// `(X_{c_k})_{m+k}` in degree `m`; edges are projections. Each `X'_U` with
/// `U ≠ ∅` is equivalent to `X_U`.
pub fn bk_fill(cube: &ChainCube) -> ChainCube {
    let w = cube.w;
    let r = cube.ring();
    // every strictly increasing chain of nonempty subsets
    let mut chains: Vec<Vec<usize>> = Vec::new();
    fn grow(w: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        let last = *cur.last().unwrap();
        for v in 1..1usize << w {
            if v != last && v & last == last {
                cur.push(v);
                grow(w, cur, out);
                cur.pop();
            }
        }
    }
    for u in 1..1usize << w {
        grow(w, &mut vec![u], &mut chains);
    }
    chains.sort_by_key(|c| (c.len(), c.clone()));
    let index: HashMap<Vec<usize>, usize> = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let members_of = |u: usize| -> Vec<usize> { (0..chains.len()).filter(|&i| chains[i][0] & u == u).collect() };
    let vx = |c: &Vec<usize>| &cube.vertices[*c.last().unwrap()];
    let all_complete = (1..1 << w).all(|u| cube.vertices[u].complete);
    let vertex = |u: usize| -> ChainComplex {
        let mem = members_of(u);
        let shift = |i: usize| chains[i].len() as i64 - 1;
        let lo = mem.iter().map(|&i| vx(&chains[i]).lo - shift(i)).min().unwrap();
        let hi = if all_complete {
            mem.iter().map(|&i| vx(&chains[i]).hi() - shift(i)).max().unwrap()
        } else {
            mem.iter().filter(|&&i| !vx(&chains[i]).complete).map(|&i| vx(&chains[i]).hi() - shift(i)).min().unwrap_or(i64::MAX)
        };
        let pos: HashMap<usize, usize> = mem.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut dims = Vec::new();
        let mut bd = Vec::new();
        for m in lo..=hi.max(lo) {
            let col_sizes: Vec<usize> = mem.iter().map(|&i| vx(&chains[i]).dim(m + shift(i))).collect();
            let row_sizes: Vec<usize> = mem.iter().map(|&i| vx(&chains[i]).dim(m - 1 + shift(i))).collect();
            let mut blocks = vec![vec![None; mem.len()]; mem.len()];
            for (k, &i) in mem.iter().enumerate() {
                let c = &chains[i];
                let len = c.len();
                let deg = m + shift(i);
                blocks[k][k] = Some(vx(c).boundary(deg).scale(r, r.sign(len - 1)));
                // δ: the value on c feeds every chain c' obtained by inserting
                // one set, with sign (-1)^{position}; inserting at the end
                // applies the edge map
                for p in 0..=len {
                    for v in 1..1usize << w {
                        let above = p == 0 || (v & c[p - 1] == c[p - 1] && v != c[p - 1]);
                        let beneath = p == len || (c[p] & v == v && v != c[p]);
                        if !(above && beneath) {
                            continue;
                        }
                        let mut c2 = c.clone();
                        c2.insert(p, v);
                        let Some(&k2) = index.get(&c2).and_then(|j| pos.get(j)) else { continue };
                        let block = if p == len { cube.composite(c[len - 1], v).at(deg) } else { Mat::identity(vx(c).dim(deg)) };
                        blocks[k2][k] = Some(block.scale(r, r.sign(p)));
                    }
                }
            }
            dims.push(col_sizes.iter().sum());
            bd.push(Mat::block(&row_sizes, &col_sizes, &blocks));
        }
        let c = ChainComplex { ring: r, lo, dims, bd, complete: all_complete };
        debug_assert!(c.check_d_squared().is_ok());
        c
    };
    let vertices: Vec<ChainComplex> = (0..1usize << w).map(vertex).collect();
    let edge = |u: usize, t: usize| -> ChainMap {
        let (src, tgt) = (&vertices[u], &vertices[u | 1 << t]);
        let ms = members_of(u);
        let mt = members_of(u | 1 << t);
        let shift = |i: usize| chains[i].len() as i64 - 1;
        let maps = (src.lo..=src.hi())
            .map(|m| {
                let mut row_off = HashMap::new();
                let mut off = 0;
                for &i in &mt {
                    row_off.insert(i, off);
                    off += vx(&chains[i]).dim(m + shift(i));
                }
                let mut cols = Vec::new();
                for &i in &ms {
                    for c in 0..vx(&chains[i]).dim(m + shift(i)) {
                        cols.push(row_off.get(&i).map(|o| vec![(o + c, 1)]).unwrap_or_default());
                    }
                }
                Mat::from_columns(r, tgt.dim(m), cols)
            })
            .collect();
        ChainMap { source: src.clone(), target: tgt.clone(), maps }
    };
    ChainCube::from_fn(w, |u| vertices[u].clone(), edge)
}

/// The punctured cube `U ↦ Z^{|U|-1}` on `𝒫_0([n])` with coface edges,
/// strictly filled at `∅` by its homotopy limit.
pub fn fill_tilde(z: &CosimplicialChain, n: usize) -> Result<ChainCube> {
    if n > z.depth() {
        return Err(Error::Precondition(format!("filling an {}-cube needs level {n}", n + 1)));
    }
    let r = z.levels[0].ring;
    let zero = ChainComplex::zero(r);
    let punctured = ChainCube::from_fn(
        n + 1,
        |u| if u == 0 { zero.clone() } else { z.levels[u.count_ones() as usize - 1].clone() },
        |u, t| {
            if u == 0 {
                ChainMap::zero(&zero, &z.levels[0])
            } else {
                z.coface(u.count_ones() as usize, below(u, t)).clone()
            }
        },
    );
    Ok(bk_fill(&punctured))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comonad::{coaction_of_chains, DEFAULT_BUDGET};
    use crate::corpus;
    use crate::cosimplicial::{constant_module, synthetic_cosimplicial};
    use crate::cube::{cartesian_degree, random_cube};
    use crate::dold_kan::random_complex;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn synthetic(seed: u64, depth: usize) -> (CosimplicialChain, Vec<ChainComplex>) {
        synthetic_sized(seed, depth, 4, 2)
    }

    fn synthetic_sized(seed: u64, depth: usize, top: usize, rank: usize) -> (CosimplicialChain, Vec<ChainComplex>) {
        let mut rng = StdRng::seed_from_u64(seed);
        let r = Ring::F2;
        let normal: Vec<ChainComplex> = (0..=depth).map(|_| random_complex(&mut rng, r, top, rank)).collect();
        let delta = (0..depth).map(|k| ChainMap::zero(&normal[k], &normal[k + 1])).collect::<Vec<_>>();
        (synthetic_cosimplicial(r, &normal, &delta, depth).unwrap(), normal)
    }

    #[test]
    fn conormalization_recovers_columns() {
        let (z, normal) = synthetic(3, 3);
        let nd = conormalize(&z);
        for p in 0..=3 {
            let want: Vec<usize> = (nd.columns[p].lo..=nd.columns[p].hi()).map(|d| normal[p].dim(d)).collect();
            assert_eq!(nd.columns[p].dims, want);
            assert!(nd.columns[p].check_d_squared().is_ok());
        }
        for s in 0..=3 {
            assert!(nd.tot(s).check_d_squared().is_ok());
        }
        let (_, tower) = tot_tower(&z);
        assert!(tower.maps.iter().all(|f| f.check().is_ok()));
        assert!(tower.check_composites(&nd).is_empty());
    }

    #[test]
    fn fiber_law_on_synthetic_objects() {
        for seed in 0..4 {
            let (z, _) = synthetic(seed, 3);
            for n in 1..=3 {
                let law = fiber_law(&z, n, 6).unwrap();
                assert!(law.loops_direction, "seed {seed} n {n}");
            }
        }
    }

    #[test]
    fn constant_tot_is_level_zero() {
        let y = coaction_of_chains(&corpus::load("s1"), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
        let z = normalize_cosimplicial(&constant_module(&y.carrier, 2));
        let (_, tower) = tot_tower(&z);
        let h0 = homology(&z.levels[0]);
        for s in 0..=2 {
            assert!(homology(&tower.stages[s]).agrees_with(&h0, 1), "s = {s}");
        }
    }

    #[test]
    fn both_routes_agree() {
        let y = coaction_of_chains(&corpus::load("s1"), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
        let z = constant_module(&y.carrier, 2);
        for s in 0..=1 {
            let c = tot_routes(&z, s, 1).unwrap();
            assert!(c.agree && c.compared_through >= 1);
        }
        let y = coaction_of_chains(&corpus::s2(), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
        let z = cobar_algebraic(&y, 1, 3, DEFAULT_BUDGET).unwrap().value;
        let c = tot_routes(&z, 1, 2).unwrap();
        assert!(c.agree);
    }

    #[test]
    fn both_routes_agree_on_denormalized_objects() {
        for seed in 0..2 {
            let (z, _) = synthetic_sized(seed + 20, 2, 2, 1);
            let zm = crate::cosimplicial::denormalize_cosimplicial(&z, 5).unwrap();
            for s in 0..=2 {
                let c = tot_routes(&zm, s, 2).unwrap();
                assert!(c.agree && c.compared_through == 2, "seed {seed} s {s}");
            }
        }
    }

    #[test]
    fn filled_cube_is_cartesian() {
        let mut rng = StdRng::seed_from_u64(11);
        for w in 1..=2 {
            let cube = random_cube(&mut rng, Ring::F2, w, 3, 2, false);
            let f = bk_fill(&cube);
            assert!(f.validate().is_empty());
            let v = cartesian_degree(&f, 4);
            assert!(!v.is_exact(), "{v}");
            for u in 1..1usize << w {
                assert!(homology(&f.vertices[u]).agrees_with(&homology(&cube.vertices[u]), 3));
            }
        }
    }

    #[test]
    fn retraction_pairs_in_cobar() {
        let y = coaction_of_chains(&corpus::s2(), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
        let z = normalize_cosimplicial(&cobar_algebraic(&y, 1, 3, DEFAULT_BUDGET).unwrap().value);
        let (_, m) = z.coaugmentation.as_ref().unwrap();
        let eps = &z.extra.as_ref().unwrap()[0];
        let law = retraction_law(m, eps, 3).unwrap();
        assert!(law.agree);
        for i in 0..=1 {
            let law = retraction_law(z.coface(1, i), z.codegen(0, 0), 3).unwrap();
            assert!(law.agree);
        }
    }

    #[test]
    fn tower_report_for_the_sphere() {
        let y = coaction_of_chains(&corpus::s2(), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
        let rep = tower_connectivity_report(&y, 1, 2, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.violations(), 0);
        assert_eq!(rep.tower.len(), 1);
    }
}
