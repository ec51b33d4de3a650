//! The spectral sequence of the column filtration of `Tot`, page by page,
//! with the strong convergence report. Pages past `E^1` need a field.

use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, ChainMap};
use crate::cosimplicial::CosimplicialChain;
use crate::error::{Error, Result};
use crate::homology::homology;
use crate::linalg::{kernel, rank, rref, solve};
use crate::matrix::Mat;
use crate::ring::Ring;
use crate::tot::{conormalize, NormalizedDouble};

/// One entry `E^r_{-s,t}` (total degree `t - s`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsEntry {
    pub s: usize,
    pub t: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsDifferential {
    pub from: (usize, i64),
    pub to: (usize, i64),
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SsPage {
    pub r: usize,
    pub entries: Vec<SsEntry>,
    pub differentials: Vec<SsDifferential>,
    /// `d_r ∘ d_r = 0` on every composable pair.
    pub d_squared_zero: bool,
    /// `dim E^{r+1}` equals the homology of `(E^r, d_r)`, when the next page
    /// was computed.
    pub next_page_is_homology: Option<bool>,
}

impl SsPage {
    pub fn dim(&self, s: usize, t: i64) -> usize {
        self.entries.iter().find(|e| e.s == s && e.t == t).map_or(0, |e| e.dim)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizedEntry {
    pub s: usize,
    pub t: i64,
    pub e_infinity: usize,
    /// First page from which the entry equals `E^∞`.
    pub stable_from: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub window: i64,
    pub certified_through: i64,
    pub entries: Vec<StabilizedEntry>,
    /// Every entry in the window is stable from some computed page on.
    pub stabilizes: bool,
    /// Per total degree, the filtration degrees with a
    /// nonzero `E^∞` entry.
    pub nonzero_filtrations: Vec<(i64, Vec<usize>)>,
    /// Each total degree has finitely many nonzero `E^∞` entries. Automatic
    /// for a truncated tower; recorded so reports carry both conditions.
    pub finitely_many: bool,
    /// `dim H_k(Tot)` for `k` in the window.
    pub abutment: Vec<(i64, usize)>,
    /// `E^∞` assembles to the abutment in each certified degree.
    pub abutment_matches: bool,
    /// All entries with `s > 0` vanish from `E^2` on.
    pub concentrated_in_s0: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralSequence {
    pub pages: Vec<SsPage>,
    pub e_infinity: Vec<SsEntry>,
    /// `E^2` recomputed as the cohomotopy `π^s π_t` of the unnormalized
    /// levels; agrees with the filtration page.
    pub e2_cohomotopy: Vec<SsEntry>,
    pub e2_matches_cohomotopy: bool,
    pub convergence: ConvergenceReport,
}

/// Subspace helpers over a field; subspaces are column spans.
fn span_basis(r: Ring, m: &Mat) -> Mat {
    if m.cols() == 0 {
        return m.clone();
    }
    let (_, piv) = rref(r, m);
    m.select_cols(&piv)
}

/// Columns of `z` completing a basis of `span(den) + span(z)` modulo `den`.
fn representatives(r: Ring, den: &Mat, z: &Mat) -> Mat {
    let all = den.hstack(z);
    if all.cols() == 0 {
        return z.clone();
    }
    let (_, piv) = rref(r, &all);
    let picked: Vec<usize> = piv.into_iter().filter(|&p| p >= den.cols()).map(|p| p - den.cols()).collect();
    z.select_cols(&picked)
}

/// Coordinates of `v` in `reps` modulo `den`.
fn modulo(r: Ring, den: &Mat, reps: &Mat, v: &Mat) -> Mat {
    if reps.cols() == 0 {
        return Mat::zeros(0, v.cols());
    }
    let a = den.hstack(reps);
    let x = solve(r, &a, v).expect("element lies in the filtered cycles");
    x.select_rows(&(den.cols()..a.cols()).collect::<Vec<_>>())
}

struct Filtered {
    tot: ChainComplex,
    /// `offsets[k - lo][p]`: first coordinate of column `p` in degree `k`.
    offsets: Vec<Vec<usize>>,
    depth: usize,
}

impl Filtered {
    fn new(nd: &NormalizedDouble) -> Filtered {
        let depth = nd.depth();
        let tot = nd.tot(depth);
        let offsets = (tot.lo..=tot.hi())
            .map(|k| {
                let mut o = Vec::with_capacity(depth + 2);
                let mut acc = 0;
                for p in 0..=depth {
                    o.push(acc);
                    acc += nd.columns[p].dim(k + p as i64);
                }
                o.push(acc);
                o
            })
            .collect();
        Filtered { tot, offsets, depth }
    }

    fn in_range(&self, k: i64) -> bool {
        k >= self.tot.lo && k <= self.tot.hi()
    }

    /// Basis of `F^p T_k` (columns `>= p`).
    fn f(&self, p: usize, k: i64) -> Mat {
        if !self.in_range(k) {
            return Mat::zeros(self.tot.dim(k), 0);
        }
        let o = &self.offsets[(k - self.tot.lo) as usize];
        let start = o[p.min(self.depth + 1)];
        let n = self.tot.dim(k);
        Mat::from_columns(self.tot.ring, n, (start..n).map(|i| vec![(i, 1)]).collect())
    }

    /// Rows of `T_k` lying in columns `< p`.
    fn below(&self, p: usize, k: i64) -> Vec<usize> {
        if !self.in_range(k) {
            return vec![];
        }
        let o = &self.offsets[(k - self.tot.lo) as usize];
        (0..o[p.min(self.depth + 1)]).collect()
    }

    /// `Z^r_p` in degree `k`: `x ∈ F^p` with `Dx ∈ F^{p+r}`.
    fn z(&self, r: usize, p: usize, k: i64) -> Mat {
        let ring = self.tot.ring;
        let f = self.f(p, k);
        if f.cols() == 0 {
            return f;
        }
        let dx = self.tot.boundary(k).mul(ring, &f);
        let rows = self.below(p + r, k - 1);
        let m = dx.select_rows(&rows);
        f.mul(ring, &kernel(ring, &m))
    }

    /// `Z^{r-1}_{p+1} + D Z^{r-1}_{p-r+1}` in degree `k`.
    fn denominator(&self, r: usize, p: usize, k: i64) -> Mat {
        let ring = self.tot.ring;
        let a = self.z(r - 1, p + 1, k);
        // x in F^{p-r+1} with Dx in F^p; below zero the filtration is all of T
        let src_p = (p + 1).saturating_sub(r);
        let b = if self.in_range(k + 1) {
            self.tot.boundary(k + 1).mul(ring, &self.z(p - src_p, src_p, k + 1))
        } else {
            Mat::zeros(self.tot.dim(k), 0)
        };
        a.hstack(&b)
    }
}

struct PageData {
    reps: Vec<((usize, i64), Mat, Mat)>,
}

fn page(fl: &Filtered, r: usize, k_lo: i64, k_hi: i64) -> PageData {
    let mut reps = Vec::new();
    for p in 0..=fl.depth {
        for k in k_lo..=k_hi {
            let z = fl.z(r, p, k);
            let den = span_basis(fl.tot.ring, &fl.denominator(r, p, k));
            let rep = representatives(fl.tot.ring, &den, &z);
            reps.push(((p, k), den, rep));
        }
    }
    PageData { reps }
}

/// Matrix of `d_r: E^r_p(k) -> E^r_{p+r}(k-1)` in representative bases.
fn differential(fl: &Filtered, pd: &PageData, r: usize, p: usize, k: i64) -> Option<Mat> {
    let ring = fl.tot.ring;
    let (_, _, src) = pd.reps.iter().find(|(key, _, _)| *key == (p, k))?;
    let (_, den, tgt) = pd.reps.iter().find(|(key, _, _)| *key == (p + r, k - 1))?;
    if src.cols() == 0 || tgt.cols() == 0 {
        return Some(Mat::zeros(tgt.cols(), src.cols()));
    }
    let dx = fl.tot.boundary(k).mul(ring, src);
    Some(modulo(ring, den, tgt, &dx))
}

/// Pages `E^1 .. E^{r_max}` of the column filtration of `Tot_N` of a
/// normalized cosimplicial chain complex, restricted to total degrees
/// `<= window`, with `E^∞` and the convergence report.
pub fn hss(z: &CosimplicialChain, r_max: usize, window: i64) -> Result<SpectralSequence> {
    let ring = z.levels[0].ring;
    if !ring.is_field() {
        return Err(Error::Precondition("pages past E^1 need a field; use e1_integral over Z".into()));
    }
    let nd = conormalize(z);
    let fl = Filtered::new(&nd);
    let certified = fl.tot.certified_through().min(window);
    let k_lo = fl.tot.lo;
    let k_hi = certified;
    let mut pages = Vec::new();
    let mut datas = Vec::new();
    for r in 1..=r_max.max(1) {
        let pd = page(&fl, r, k_lo - 1, k_hi + 1);
        let mut entries = Vec::new();
        let mut diffs = Vec::new();
        for p in 0..=fl.depth {
            for k in k_lo..=k_hi {
                let (_, _, rep) = pd.reps.iter().find(|(key, _, _)| *key == (p, k)).unwrap();
                entries.push(SsEntry { s: p, t: k + p as i64, dim: rep.cols() });
                if let Some(m) = differential(&fl, &pd, r, p, k) {
                    if m.rows() > 0 && m.cols() > 0 {
                        diffs.push(SsDifferential { from: (p, k + p as i64), to: (p + r, k - 1 + (p + r) as i64), rank: rank(ring, &m) });
                    }
                }
            }
        }
        let mut d2 = true;
        for p in 0..=fl.depth {
            for k in k_lo..=k_hi {
                if let (Some(a), Some(b)) = (differential(&fl, &pd, r, p, k), differential(&fl, &pd, r, p + r, k - 1)) {
                    if b.rows() > 0 && a.cols() > 0 && !b.mul(ring, &a).is_zero() {
                        d2 = false;
                    }
                }
            }
        }
        pages.push(SsPage { r, entries, differentials: diffs, d_squared_zero: d2, next_page_is_homology: None });
        datas.push(pd);
    }
    // E^{r+1} against H(E^r, d_r), entry by entry
    for i in 0..pages.len().saturating_sub(1) {
        let r = pages[i].r;
        let mut ok = true;
        for p in 0..=fl.depth {
            for k in k_lo..=k_hi {
                let here = pages[i].dim(p, k + p as i64);
                let out = differential(&fl, &datas[i], r, p, k).map_or(0, |m| rank(ring, &m));
                let inc = if p >= r { differential(&fl, &datas[i], r, p - r, k + 1).map_or(0, |m| rank(ring, &m)) } else { 0 };
                let h = here - out - inc;
                if pages[i + 1].dim(p, k + p as i64) != h {
                    ok = false;
                }
            }
        }
        pages[i].next_page_is_homology = Some(ok);
    }
    // E^∞ from the filtration of H(Tot)
    let mut e_inf = Vec::new();
    for p in 0..=fl.depth {
        for k in k_lo..=k_hi {
            let zinf = fl.z(fl.depth + 2, p, k);
            let mut den = fl.z(fl.depth + 2, p + 1, k);
            if fl.in_range(k + 1) {
                // boundaries that land in F^p
                let img = fl.tot.boundary(k + 1);
                let rows = fl.below(p, k);
                let ker = kernel(ring, &img.select_rows(&rows));
                den = den.hstack(&img.mul(ring, &ker));
            }
            let den = span_basis(ring, &den);
            let d = representatives(ring, &den, &zinf).cols();
            e_inf.push(SsEntry { s: p, t: k + p as i64, dim: d });
        }
    }
    let h = homology(&fl.tot);
    let abutment: Vec<(i64, usize)> = (k_lo..=k_hi).map(|k| (k, h.at(k).rank)).collect();
    let abutment_matches = abutment.iter().all(|&(k, d)| e_inf.iter().filter(|e| e.t - e.s as i64 == k).map(|e| e.dim).sum::<usize>() == d);
    let stab: Vec<StabilizedEntry> = e_inf
        .iter()
        .map(|e| {
            let mut from = None;
            for (i, pg) in pages.iter().enumerate().rev() {
                if pg.dim(e.s, e.t) == e.dim {
                    from = Some(i + 1);
                } else {
                    break;
                }
            }
            StabilizedEntry { s: e.s, t: e.t, e_infinity: e.dim, stable_from: from }
        })
        .collect();
    let nonzero: Vec<(i64, Vec<usize>)> =
        (k_lo..=k_hi).map(|k| (k, e_inf.iter().filter(|e| e.t - e.s as i64 == k && e.dim > 0).map(|e| e.s).collect())).collect();
    let e2 = cohomotopy(z, k_lo, k_hi);
    let e2_matches = pages.len() < 2 || e2.iter().all(|e| pages[1].dim(e.s, e.t) == e.dim);
    let concentrated = pages.iter().skip(1).all(|pg| pg.entries.iter().all(|e| e.s == 0 || e.dim == 0));
    let convergence = ConvergenceReport {
        window,
        certified_through: certified,
        stabilizes: stab.iter().all(|e| e.stable_from.is_some()),
        entries: stab,
        finitely_many: nonzero.iter().all(|(_, f)| f.len() <= fl.depth + 1),
        nonzero_filtrations: nonzero,
        abutment,
        abutment_matches,
        concentrated_in_s0: concentrated,
    };
    Ok(SpectralSequence { pages, e_infinity: e_inf, e2_cohomotopy: e2, e2_matches_cohomotopy: e2_matches, convergence })
}

/// Representatives of `H_t(C)` over a field: `(cycles basis, boundaries basis, reps)`.
fn homology_reps(c: &ChainComplex, t: i64) -> (Mat, Mat) {
    let r = c.ring;
    let cyc = kernel(r, &c.boundary(t));
    let bnd = span_basis(r, &c.boundary(t + 1));
    let reps = representatives(r, &bnd, &cyc);
    (bnd, reps)
}

fn induced(f: &ChainMap, t: i64, src: &(Mat, Mat), tgt: &(Mat, Mat)) -> Mat {
    let r = f.source.ring;
    let img = f.at(t).mul(r, &src.1);
    modulo(r, &tgt.0, &tgt.1, &img)
}

/// `π^s π_t`: cohomology of `H_t(Z^0) -> H_t(Z^1) -> ...` under
/// `Σ (-1)^i d^i`, computed on the unnormalized levels.
pub fn cohomotopy(z: &CosimplicialChain, t_lo: i64, t_hi: i64) -> Vec<SsEntry> {
    let ring = z.levels[0].ring;
    let depth = z.depth();
    let mut out = Vec::new();
    // total degree k = t - s, so t ranges per s
    for s in 0..=depth {
        for k in t_lo..=t_hi {
            let t = k + s as i64;
            let here = homology_reps(&z.levels[s], t);
            let alt = |n: usize| -> ChainMap {
                let mut f = z.cofaces[n][0].clone();
                for (i, d) in z.cofaces[n].iter().enumerate().skip(1) {
                    let maps = (f.source.lo..=f.source.hi()).map(|q| f.at(q).add(ring, &d.at(q).scale(ring, ring.sign(i)))).collect();
                    f = ChainMap { source: f.source.clone(), target: f.target.clone(), maps };
                }
                f
            };
            let out_rank = if s < depth {
                let next = homology_reps(&z.levels[s + 1], t);
                rank(ring, &induced(&alt(s + 1), t, &here, &next))
            } else {
                0
            };
            let in_rank = if s > 0 {
                let prev = homology_reps(&z.levels[s - 1], t);
                rank(ring, &induced(&alt(s), t, &prev, &here))
            } else {
                0
            };
            let dim = if s == depth { None } else { Some(here.1.cols() - out_rank - in_rank) };
            if let Some(dim) = dim {
                out.push(SsEntry { s, t, dim });
            }
        }
    }
    out
}

/// `E^1_{-s,t} = H_t(N^s)` over any ring, as ranks and torsion.
pub fn e1_integral(z: &CosimplicialChain) -> Vec<(usize, crate::homology::GradedGroup)> {
    conormalize(z).columns.iter().enumerate().map(|(s, c)| (s, homology(c))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comonad::{coaction_of_chains, DEFAULT_BUDGET};
    use crate::corpus;
    use crate::cosimplicial::{cobar_algebraic, constant_module, normalize_cosimplicial, synthetic_cosimplicial};
    use crate::dold_kan::random_complex;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn pages_are_consistent(ss: &SpectralSequence) {
        for pg in &ss.pages {
            assert!(pg.d_squared_zero, "page {}", pg.r);
            assert_ne!(pg.next_page_is_homology, Some(false), "page {}", pg.r);
        }
        assert!(ss.e2_matches_cohomotopy);
        assert!(ss.convergence.abutment_matches);
        assert!(ss.convergence.stabilizes);
    }

    #[test]
    fn cobar_collapses_onto_the_zero_column() {
        let y = coaction_of_chains(&corpus::load("s1"), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
        let z = normalize_cosimplicial(&cobar_algebraic(&y, 1, 3, DEFAULT_BUDGET).unwrap().value);
        let ss = hss(&z, 3, 2).unwrap();
        pages_are_consistent(&ss);
        assert!(ss.convergence.concentrated_in_s0);
        assert_eq!(ss.pages[1].dim(0, 1), 1);
    }

    #[test]
    fn constant_object_has_one_column() {
        let y = coaction_of_chains(&corpus::load("s1"), Ring::F2, 4, DEFAULT_BUDGET).unwrap();
        let z = normalize_cosimplicial(&constant_module(&y.carrier, 2));
        let ss = hss(&z, 3, 2).unwrap();
        pages_are_consistent(&ss);
        assert!(ss.convergence.concentrated_in_s0);
        assert_eq!(ss.pages[1].dim(0, 1), 1);
    }

    #[test]
    fn first_differential_kills_a_cancelling_pair() {
        let mut rng = StdRng::seed_from_u64(5);
        let r = Ring::F2;
        let c = random_complex(&mut rng, r, 3, 2);
        let normal = vec![c.clone(), c.clone(), ChainComplex::zero(r)];
        let delta = vec![ChainMap::identity(&c), ChainMap::zero(&c, &normal[2])];
        let z = synthetic_cosimplicial(r, &normal, &delta, 2).unwrap();
        let ss = hss(&z, 2, 3).unwrap();
        pages_are_consistent(&ss);
        assert!(ss.pages[1].entries.iter().all(|e| e.dim == 0));
    }

    #[test]
    fn zigzag_gives_a_second_differential() {
        let r = Ring::F2;
        let one = |v: i64| Mat::from_columns(r, 1, vec![if v == 0 { vec![] } else { vec![(0, 1)] }]);
        // a in degree 1; b, c in degrees 1, 2 with c -> b; e in degree 2
        let n0 = ChainComplex::new(r, 0, vec![0, 1], vec![Mat::zeros(0, 0), Mat::zeros(0, 1)], true).unwrap();
        let n1 = ChainComplex::new(r, 0, vec![0, 1, 1], vec![Mat::zeros(0, 0), Mat::zeros(0, 1), one(1)], true).unwrap();
        let n2 = ChainComplex::new(r, 0, vec![0, 0, 1], vec![Mat::zeros(0, 0), Mat::zeros(0, 0), Mat::zeros(0, 1)], true).unwrap();
        let d0 = ChainMap::new(n0.clone(), n1.clone(), vec![Mat::zeros(0, 0), one(1)]).unwrap();
        let d1 = ChainMap::new(n1.clone(), n2.clone(), vec![Mat::zeros(0, 0), Mat::zeros(0, 1), one(1)]).unwrap();
        let z = synthetic_cosimplicial(r, &[n0, n1, n2], &[d0, d1], 2).unwrap();
        let ss = hss(&z, 3, 3).unwrap();
        pages_are_consistent(&ss);
        assert_eq!(ss.pages[1].dim(0, 1), 1);
        assert_eq!(ss.pages[1].dim(2, 2), 1);
        assert!(ss.pages[1].differentials.iter().any(|d| d.from == (0, 1) && d.to == (2, 2) && d.rank == 1));
        assert!(ss.pages[2].entries.iter().all(|e| e.dim == 0));
    }

    #[test]
    fn integral_e1_needs_no_field() {
        let mut rng = StdRng::seed_from_u64(8);
        let r = Ring::Integers;
        let normal: Vec<ChainComplex> = (0..2).map(|_| random_complex(&mut rng, r, 3, 2)).collect();
        let delta = vec![ChainMap::zero(&normal[0], &normal[1])];
        let z = synthetic_cosimplicial(r, &normal, &delta, 1).unwrap();
        assert!(hss(&z, 2, 1).is_err());
        let e1 = e1_integral(&z);
        for (s, h) in e1 {
            assert!(h.agrees_with(&homology(&normal[s]), 3));
        }
    }
}
