//! Cosimplicial objects (of simplicial modules, chain complexes or
//! enumerated spaces), the identity validator, the cobar constructions and
//! the coface and codegeneracy cubes.

use std::collections::BTreeMap;

use crate::chain::{ChainComplex, ChainMap};
use crate::comonad::{basis_embedding, comonad_k, counit, hurewicz_unit, k_of_map, underlying, underlying_map, KCoalgebra};
use crate::cube::{below, elements, ChainCube};
use crate::dold_kan::{denormalize, normalize_in, normalize_map_in};
use crate::error::{Error, Result};
use crate::linalg::kernel;
use crate::matrix::Mat;
use crate::module::{LinearMap, SimplicialModule};
use crate::ordinal::OrdinalMap;
use crate::ring::Ring;
use crate::space::{EnumSpace, SpaceMap};

/// Composable structure maps.
pub trait Arrow: Clone {
    type Obj;
    /// `self ∘ g`.
    fn after(&self, g: &Self) -> Self;
    fn agrees(&self, other: &Self) -> bool;
    fn is_identity(&self) -> bool;
    fn check(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<String>;
}

impl Arrow for LinearMap {
    type Obj = SimplicialModule;
    fn after(&self, g: &Self) -> Self {
        self.compose(g)
    }
    fn agrees(&self, other: &Self) -> bool {
        let cap = self.cap().min(other.cap());
        (0..=cap).all(|n| self.maps[n].reduce(self.ring) == other.maps[n].reduce(self.ring))
    }
    fn is_identity(&self) -> bool {
        LinearMap::is_identity(self)
    }
    fn check(&self, a: &SimplicialModule, b: &SimplicialModule) -> Vec<String> {
        self.validate(a, b)
    }
}

impl Arrow for ChainMap {
    type Obj = ChainComplex;
    fn after(&self, g: &Self) -> Self {
        self.compose(g)
    }
    fn agrees(&self, other: &Self) -> bool {
        let r = self.source.ring;
        (self.source.lo..=self.source.hi()).all(|n| self.at(n).reduce(r) == other.at(n).reduce(r))
    }
    fn is_identity(&self) -> bool {
        (self.source.lo..=self.source.hi()).all(|n| {
            let m = self.at(n);
            m.rows() == m.cols() && m == Mat::identity(m.rows())
        })
    }
    fn check(&self, _: &ChainComplex, _: &ChainComplex) -> Vec<String> {
        ChainMap::check(self).err().map(|e| e.to_string()).into_iter().collect()
    }
}

impl Arrow for SpaceMap {
    type Obj = EnumSpace;
    fn after(&self, g: &Self) -> Self {
        self.compose(g)
    }
    fn agrees(&self, other: &Self) -> bool {
        self.maps.iter().zip(&other.maps).all(|(a, b)| a == b)
    }
    fn is_identity(&self) -> bool {
        self.maps.iter().all(|m| m.iter().enumerate().all(|(i, &x)| i as u32 == x))
    }
    fn check(&self, a: &EnumSpace, b: &EnumSpace) -> Vec<String> {
        self.validate(a, b)
    }
}

/// Levels `Z^0..Z^N` with `cofaces[n][i] = d^i: Z^{n-1} -> Z^n` and
/// `codegens[n][j] = s^j: Z^{n+1} -> Z^n`. The optional coaugmentation is
/// `d: Z^{-1} -> Z^0`; the optional extra codegeneracies are
/// `extra[n] = s^{-1}: Z^n -> Z^{n-1}`.
#[derive(Clone, Debug)]
pub struct Cosimplicial<O, A> {
    pub name: String,
    pub levels: Vec<O>,
    pub cofaces: Vec<Vec<A>>,
    pub codegens: Vec<Vec<A>>,
    pub coaugmentation: Option<(O, A)>,
    pub extra: Option<Vec<A>>,
}

pub type CosimplicialModule = Cosimplicial<SimplicialModule, LinearMap>;
pub type CosimplicialChain = Cosimplicial<ChainComplex, ChainMap>;
pub type CosimplicialSpace = Cosimplicial<EnumSpace, SpaceMap>;

impl<O: Clone, A: Arrow<Obj = O>> Cosimplicial<O, A> {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn coface(&self, n: usize, i: usize) -> &A {
        &self.cofaces[n][i]
    }

    pub fn codegen(&self, n: usize, j: usize) -> &A {
        &self.codegens[n][j]
    }

    /// `d^i` into level `n >= 0`, with `d^0` into level 0 the coaugmentation.
    fn coface_ext(&self, n: usize, i: usize) -> Option<&A> {
        if n == 0 {
            self.coaugmentation.as_ref().filter(|_| i == 0).map(|c| &c.1)
        } else {
            self.cofaces.get(n).and_then(|l| l.get(i))
        }
    }

    /// Truncation to levels `0..=n`.
    pub fn truncate(&self, n: usize) -> Self {
        let mut z = self.clone();
        z.levels.truncate(n + 1);
        z.cofaces.truncate(n + 1);
        z.codegens.truncate(n + 1);
        z.codegens[n] = vec![];
        if let Some(e) = z.extra.as_mut() {
            e.truncate(n + 1);
        }
        z
    }

    /// Every cosimplicial identity within the stored levels, each failure
    /// named.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let big_n = self.depth();
        for n in 1..=big_n {
            if self.cofaces[n].len() != n + 1 {
                out.push(format!("level {n}: expected {} cofaces", n + 1));
                return out;
            }
            for (i, d) in self.cofaces[n].iter().enumerate() {
                for v in d.check(&self.levels[n - 1], &self.levels[n]) {
                    out.push(format!("d^{i} into level {n}: {v}"));
                }
            }
        }
        for n in 0..big_n {
            if self.codegens[n].len() != n + 1 {
                out.push(format!("level {n}: expected {} codegeneracies", n + 1));
                return out;
            }
            for (j, s) in self.codegens[n].iter().enumerate() {
                for v in s.check(&self.levels[n + 1], &self.levels[n]) {
                    out.push(format!("s^{j} into level {n}: {v}"));
                }
            }
        }
        if let Some((z, d)) = &self.coaugmentation {
            for v in d.check(z, &self.levels[0]) {
                out.push(format!("coaugmentation: {v}"));
            }
        }
        if let Some(extra) = &self.extra {
            for (n, e) in extra.iter().enumerate().take(big_n + 1) {
                let below = if n == 0 { self.coaugmentation.as_ref().map(|(z, _)| z) } else { Some(&self.levels[n - 1]) };
                if let Some(below) = below {
                    for v in e.check(&self.levels[n], below) {
                        out.push(format!("s^-1 out of level {n}: {v}"));
                    }
                }
            }
        }
        // d^j d^i = d^i d^{j-1}, i < j, maps into level n+1
        for n in 0..big_n {
            for j in 1..=n + 1 {
                for i in 0..j {
                    let (Some(a1), Some(a2), Some(b1), Some(b2)) =
                        (self.coface_ext(n, i), self.coface_ext(n + 1, j), self.coface_ext(n, j - 1), self.coface_ext(n + 1, i))
                    else {
                        continue;
                    };
                    if !a2.after(a1).agrees(&b2.after(b1)) {
                        out.push(format!("d^{j} d^{i} = d^{i} d^{} fails into level {}", j - 1, n + 1));
                    }
                }
            }
        }
        // s^j s^i = s^i s^{j+1}, i <= j, maps Z^{n+2} -> Z^n
        for n in 0..big_n.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let l = self.codegen(n, j).after(self.codegen(n + 1, i));
                    let r = self.codegen(n, i).after(self.codegen(n + 1, j + 1));
                    if !l.agrees(&r) {
                        out.push(format!("s^{j} s^{i} = s^{i} s^{} fails into level {n}", j + 1));
                    }
                }
            }
        }
        // s^j d^i on Z^n -> Z^{n+1} -> Z^n
        for n in 0..big_n {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let l = self.codegen(n, j).after(self.coface(n + 1, i));
                    let ok = if i == j || i == j + 1 {
                        l.is_identity()
                    } else if i < j {
                        match self.coface_ext(n, i) {
                            Some(d) if n >= 1 => l.agrees(&d.after(self.codegen(n - 1, j - 1))),
                            _ => continue,
                        }
                    } else {
                        match self.coface_ext(n, i - 1) {
                            Some(d) if n >= 1 => l.agrees(&d.after(self.codegen(n - 1, j))),
                            _ => continue,
                        }
                    };
                    if !ok {
                        out.push(format!("s^{j} d^{i} identity fails on level {n}"));
                    }
                }
            }
        }
        if let Some(extra) = &self.extra {
            // s^{-1} d^0 = id, s^{-1} d^i = d^{i-1} s^{-1}
            for n in 0..=big_n.min(extra.len() - 1) {
                let e = &extra[n];
                for i in 0..=n {
                    let Some(d) = self.coface_ext(n, i) else { continue };
                    let l = e.after(d);
                    let ok = if i == 0 {
                        l.is_identity()
                    } else {
                        match self.coface_ext(n - 1, i - 1) {
                            Some(d2) => l.agrees(&d2.after(&extra[n - 1])),
                            None => continue,
                        }
                    };
                    if !ok {
                        out.push(format!("s^-1 d^{i} identity fails on level {n}"));
                    }
                }
                // s^{-1} s^j = s^{j-1} s^{-1}, with s^{-2} read as s^{-1} s^{-1}
                if n < big_n && n + 1 < extra.len() {
                    for j in 0..=n {
                        let l = e.after(self.codegen(n, j));
                        let r = if j == 0 {
                            if n == 0 {
                                continue;
                            }
                            extra[n].after(&extra[n + 1])
                        } else {
                            self.codegen(n - 1, j - 1).after(&extra[n + 1])
                        };
                        if !l.agrees(&r) {
                            out.push(format!("s^-1 s^{j} identity fails on level {}", n + 1));
                        }
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
}

/// `Z^{|U|-1}`-valued coface cube, edges `d^{#{u in U: u < t}}`.
pub fn coface_cube(z: &CosimplicialChain, n: usize) -> Result<ChainCube> {
    let (z_minus, coaug) = z.coaugmentation.as_ref().ok_or_else(|| Error::Precondition("coface cube needs a coaugmentation".into()))?;
    if n > z.depth() {
        return Err(Error::Precondition(format!("coface cube of dimension {} needs level {n}", n + 1)));
    }
    let vertex = |u: usize| if u == 0 { z_minus.clone() } else { z.levels[u.count_ones() as usize - 1].clone() };
    Ok(ChainCube::from_fn(n + 1, vertex, |u, t| {
        if u == 0 {
            coaug.clone()
        } else {
            z.coface(u.count_ones() as usize, below(u, t)).clone()
        }
    }))
}

/// Codegeneracy `n`-cube: `U ↦ Z^{n-|U|}`, edges `s^{t - #{u in U: u < t}}`.
pub fn codegeneracy_cube(z: &CosimplicialChain, n: usize) -> Result<ChainCube> {
    if n > z.depth() {
        return Err(Error::Precondition(format!("codegeneracy cube needs level {n}")));
    }
    Ok(ChainCube::from_fn(n, |u| z.levels[n - u.count_ones() as usize].clone(), |u, t| {
        let lvl = n - u.count_ones() as usize;
        z.codegen(lvl - 1, t - below(u, t)).clone()
    }))
}

/// Normalized chains levelwise, one model for every level.
pub fn normalize_cosimplicial(z: &CosimplicialModule) -> CosimplicialChain {
    let mut quotient = z.levels.iter().all(|a| a.set_like);
    if let Some((a, _)) = &z.coaugmentation {
        quotient &= a.set_like;
    }
    let levels: Vec<ChainComplex> = z.levels.iter().map(|a| normalize_in(a, quotient).complex).collect();
    let nm = |f: &LinearMap, a: &SimplicialModule, b: &SimplicialModule, na: &ChainComplex, nb: &ChainComplex| {
        let mut g = normalize_map_in(f, a, b, quotient);
        g.source = na.clone();
        g.target = nb.clone();
        g
    };
    let cofaces = (0..z.levels.len())
        .map(|n| {
            z.cofaces[n].iter().map(|d| nm(d, &z.levels[n - 1], &z.levels[n], &levels[n - 1], &levels[n])).collect()
        })
        .collect();
    let codegens = (0..z.levels.len())
        .map(|n| {
            z.codegens[n].iter().map(|s| nm(s, &z.levels[n + 1], &z.levels[n], &levels[n + 1], &levels[n])).collect()
        })
        .collect();
    let coaug_chain = z.coaugmentation.as_ref().map(|(a, _)| normalize_in(a, quotient).complex);
    let coaugmentation =
        z.coaugmentation.as_ref().map(|(a, d)| (coaug_chain.clone().unwrap(), nm(d, a, &z.levels[0], coaug_chain.as_ref().unwrap(), &levels[0])));
    let extra = z.extra.as_ref().map(|e| {
        e.iter()
            .enumerate()
            .map(|(n, s)| {
                if n == 0 {
                    let (a, _) = z.coaugmentation.as_ref().expect("extra codegeneracy needs a coaugmentation");
                    nm(s, &z.levels[0], a, &levels[0], coaug_chain.as_ref().unwrap())
                } else {
                    nm(s, &z.levels[n], &z.levels[n - 1], &levels[n], &levels[n - 1])
                }
            })
            .collect()
    });
    Cosimplicial { name: format!("N({})", z.name), levels, cofaces, codegens, coaugmentation, extra }
}

/// Constant cosimplicial object on `y` with identity structure maps,
/// coaugmented by the identity.
pub fn constant_module(y: &SimplicialModule, depth: usize) -> CosimplicialModule {
    let id = LinearMap::identity(y);
    Cosimplicial {
        name: format!("const({})", y.name),
        levels: vec![y.clone(); depth + 1],
        cofaces: (0..=depth).map(|n| if n == 0 { vec![] } else { vec![id.clone(); n + 1] }).collect(),
        codegens: (0..=depth).map(|n| if n == depth { vec![] } else { vec![id.clone(); n + 1] }).collect(),
        coaugmentation: Some((y.clone(), id.clone())),
        extra: Some(vec![id; depth + 1]),
    }
}

/// Applies `K` `times` times to a map whose source has the given dims.
pub(crate) fn k_power(f: &LinearMap, src_dims: &[usize], times: usize, budget: u64) -> Result<LinearMap> {
    let mut g = f.clone();
    let mut dims = src_dims.to_vec();
    for _ in 0..times {
        let next = crate::comonad::k_dims(f.ring, &dims, budget)?;
        g = k_of_map(&g, &dims, budget)?;
        dims = next;
    }
    Ok(g)
}

/// Outcome of a construction that may stop early on a budget.
#[derive(Clone, Debug)]
pub struct Truncated<T> {
    pub value: T,
    pub notice: Option<String>,
}

/// `Cobar(K, K, Y)`: `Z^n = K^{n+1} Y`, coaugmented by the coaction and
/// carrying the extra codegeneracies `s^{-1} = ε`. Stops before the first
/// level that exceeds the budget.
pub fn cobar_algebraic(y: &KCoalgebra, depth: usize, cap: usize, budget: u64) -> Result<Truncated<CosimplicialModule>> {
    let cap = cap.min(y.carrier.cap());
    let carrier = y.carrier.truncate(cap);
    let m = y.coaction.truncate(cap);
    // powers[k] = K^k Y
    let mut powers = vec![carrier.clone()];
    let mut notice = None;
    let mut top = depth;
    for k in 1..=depth + 1 {
        match comonad_k(&powers[k - 1], budget) {
            Ok(a) => powers.push(a),
            Err(e) if e.is_budget() => {
                if k == 1 {
                    return Err(e);
                }
                top = k - 2;
                notice = Some(format!("level {} of the cobar object exceeds the budget ({e}); truncated at {top}", k - 1));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let build = |top: usize| -> Result<CosimplicialModule> {
        let mut cofaces: Vec<Vec<LinearMap>> = vec![vec![]];
        for n in 1..=top {
            let mut row = Vec::new();
            for i in 0..n {
                // K^i δ_{K^{n-1-i} Y}
                let inner = basis_embedding(&powers[n - i], budget)?;
                row.push(k_power(&inner, &powers[n - i].dims, i, budget)?);
            }
            row.push(k_power(&m, &carrier.dims, n, budget)?);
            cofaces.push(row);
        }
        let mut codegens: Vec<Vec<LinearMap>> = Vec::new();
        for n in 0..=top {
            if n == top {
                codegens.push(vec![]);
                continue;
            }
            let mut row = Vec::new();
            for j in 0..=n {
                // K^{j+1} ε_{K^{n-j} Y}
                let eps = counit(&powers[n - j])?;
                row.push(k_power(&eps, &powers[n - j + 1].dims, j + 1, budget)?);
            }
            codegens.push(row);
        }
        let extra = (0..=top).map(|n| counit(&powers[n])).collect::<Result<Vec<_>>>()?;
        Ok(Cosimplicial {
            name: format!("Cobar(K,K,{})", carrier.name),
            levels: powers[1..=top + 1].to_vec(),
            cofaces,
            codegens,
            coaugmentation: Some((carrier.clone(), m.clone())),
            extra: Some(extra),
        })
    };
    match build(top) {
        Ok(z) => Ok(Truncated { value: z, notice }),
        Err(e) if e.is_budget() && top > 0 => {
            let z = build(top - 1)?;
            Ok(Truncated { value: z, notice: Some(format!("structure maps into level {top} exceed the budget ({e}); truncated at {}", top - 1)) })
        }
        Err(e) => Err(e),
    }
}

/// The cobar construction `C(Y)^n = U K^n Y` on enumerated levels, with
/// `d^0 = η`, the other cofaces `U(K^{i-1} δ)` and `U(K^n m)`, and
/// codegeneracies `U(K^j ε)`.
pub fn cobar_space(y: &KCoalgebra, depth: usize, cap: usize, budget: u64) -> Result<CosimplicialSpace> {
    let cap = cap.min(y.carrier.cap());
    let carrier = y.carrier.truncate(cap);
    let m = y.coaction.truncate(cap);
    let mut powers = vec![carrier.clone()];
    for k in 1..=depth {
        powers.push(comonad_k(&powers[k - 1], budget)?);
    }
    let levels = powers.iter().map(|a| underlying(a, budget)).collect::<Result<Vec<_>>>()?;
    let mut cofaces: Vec<Vec<SpaceMap>> = vec![vec![]];
    for n in 1..=depth {
        let mut row = vec![hurewicz_unit(&levels[n - 1], y.carrier.ring)?];
        for i in 1..n {
            // U K^{i-1} δ_{K^{n-1-i} Y} on U K^{n-1} Y
            let inner = basis_embedding(&powers[n - i], budget)?;
            let f = k_power(&inner, &powers[n - i].dims, i - 1, budget)?;
            row.push(underlying_map(&f, &powers[n - 1].dims, budget)?);
        }
        let f = k_power(&m, &carrier.dims, n - 1, budget)?;
        row.push(underlying_map(&f, &powers[n - 1].dims, budget)?);
        cofaces.push(row);
    }
    let mut codegens = Vec::new();
    for n in 0..=depth {
        if n == depth {
            codegens.push(vec![]);
            continue;
        }
        let mut row = Vec::new();
        for j in 0..=n {
            let eps = counit(&powers[n - j])?;
            let f = k_power(&eps, &powers[n - j + 1].dims, j, budget)?;
            row.push(underlying_map(&f, &powers[n + 1].dims, budget)?);
        }
        codegens.push(row);
    }
    Ok(Cosimplicial { name: format!("C({})", carrier.name), levels, cofaces, codegens, coaugmentation: None, extra: None })
}

/// `lim_Δ Z = eq(d^0, d^1: Z^0 ⇉ Z^1)` as a submodule of `Z^0`: columns of
/// the returned matrices span the kernel of `d^0 - d^1` per level.
pub fn lim_equalizer(z: &CosimplicialModule) -> Vec<Mat> {
    let r = z.levels[0].ring;
    let cap = z.levels[0].cap().min(z.levels.get(1).map_or(usize::MAX, |a| a.cap()));
    (0..=cap)
        .map(|n| {
            if z.depth() == 0 {
                return Mat::identity(z.levels[0].dims[n]);
            }
            kernel(r, &z.coface(1, 0).maps[n].sub(r, &z.coface(1, 1).maps[n]))
        })
        .collect()
}

/// Layout of `D^n = ⊕_{σ: [n] ↠ [k]} N^k`: per summand the surjection and
/// its block offset in each degree.
struct CoGamma {
    summands: Vec<Vec<OrdinalMap>>,
    index: Vec<BTreeMap<Vec<usize>, usize>>,
}

impl CoGamma {
    fn new(depth: usize, nonzero: &[bool]) -> CoGamma {
        let mut summands = Vec::new();
        let mut index = Vec::new();
        for n in 0..=depth {
            let mut list = OrdinalMap::all_surjections_from(n);
            list.retain(|s| nonzero.get(s.target_arity).copied().unwrap_or(false));
            list.sort_by_key(|s| (s.target_arity, s.values.clone()));
            index.push(list.iter().enumerate().map(|(i, s)| (s.values.clone(), i)).collect());
            summands.push(list);
        }
        CoGamma { summands, index }
    }
}

/// Cosimplicial chain complex with prescribed normalization: levels
/// `D^n = ⊕_{σ: [n] ↠ [k]} N^k`, structure maps built from identities and
/// the given `δ_k: N^k -> N^{k+1}`. The normalization of the result is
/// `(N^•, δ)`.
pub fn synthetic_cosimplicial(ring: Ring, normal: &[ChainComplex], delta: &[ChainMap], depth: usize) -> Result<CosimplicialChain> {
    if normal.len() < depth + 1 {
        return Err(Error::Precondition("one normalized column per level needed".into()));
    }
    if delta.len() + 1 < normal.len() {
        return Err(Error::Precondition("one δ between consecutive columns needed".into()));
    }
    let lo = normal.iter().map(|c| c.lo).min().unwrap();
    let hi = normal.iter().map(|c| c.hi()).max().unwrap();
    let complete = normal.iter().all(|c| c.complete);
    let nonzero: Vec<bool> = normal.iter().map(|c| !c.is_zero()).collect();
    let lay = CoGamma::new(depth, &nonzero);
    let level = |n: usize| -> ChainComplex {
        let mut dims = Vec::new();
        let mut bd = Vec::new();
        for d in lo..=hi {
            dims.push(lay.summands[n].iter().map(|s| normal[s.target_arity].dim(d)).sum());
            bd.push(Mat::block_diag(&lay.summands[n].iter().map(|s| normal[s.target_arity].boundary(d)).collect::<Vec<_>>()));
        }
        ChainComplex { ring, lo, dims, bd, complete }
    };
    let levels: Vec<ChainComplex> = (0..=depth).map(level).collect();
    // θ: [n] -> [m] gives D^n -> D^m
    let op = |theta: &OrdinalMap| -> ChainMap {
        let (n, m) = (theta.source_arity, theta.target_arity);
        let maps = (lo..=hi)
            .map(|d| {
                let row_sizes: Vec<usize> = lay.summands[m].iter().map(|s| normal[s.target_arity].dim(d)).collect();
                let col_sizes: Vec<usize> = lay.summands[n].iter().map(|s| normal[s.target_arity].dim(d)).collect();
                let mut blocks = vec![vec![None; col_sizes.len()]; row_sizes.len()];
                for (ti, tau) in lay.summands[m].iter().enumerate() {
                    let (eps, mu) = tau.compose(theta).epi_mono();
                    let Some(&si) = lay.index[n].get(&eps.values) else { continue };
                    if mu.is_identity() {
                        blocks[ti][si] = Some(Mat::identity(col_sizes[si]));
                    } else if mu.source_arity + 1 == mu.target_arity && mu.missed() == vec![0] {
                        blocks[ti][si] = Some(delta[eps.target_arity].at(d));
                    }
                }
                Mat::block(&row_sizes, &col_sizes, &blocks)
            })
            .collect();
        ChainMap { source: levels[n].clone(), target: levels[m].clone(), maps }
    };
    let cofaces = (0..=depth).map(|n| if n == 0 { vec![] } else { (0..=n).map(|i| op(&OrdinalMap::coface(n, i))).collect() }).collect();
    let codegens =
        (0..=depth).map(|n| if n == depth { vec![] } else { (0..=n).map(|j| op(&OrdinalMap::codegeneracy(n, j))).collect() }).collect();
    Ok(Cosimplicial { name: "synthetic".into(), levels, cofaces, codegens, coaugmentation: None, extra: None })
}

/// `Γ` applied levelwise to a cosimplicial chain complex in nonnegative
/// degrees, giving a cosimplicial simplicial module on levels `0..=cap`.
pub fn denormalize_cosimplicial(z: &CosimplicialChain, cap: usize) -> Result<CosimplicialModule> {
    let levels = z.levels.iter().map(|c| denormalize(c, cap)).collect::<Result<Vec<_>>>()?;
    let g = |f: &ChainMap| crate::dold_kan::gamma_map(f, cap);
    Ok(Cosimplicial {
        name: format!("Gamma({})", z.name),
        levels,
        cofaces: z.cofaces.iter().map(|row| row.iter().map(g).collect()).collect(),
        codegens: z.codegens.iter().map(|row| row.iter().map(g).collect()).collect(),
        coaugmentation: None,
        extra: None,
    })
}

/// Cosimplicial normalization `N^p = ∩_j ker s^j` inside `Z^p`, degree by
/// degree: columns span the subspace.
pub fn conormal_basis(z: &CosimplicialChain, p: usize) -> Vec<Mat> {
    let c = &z.levels[p];
    let r = c.ring;
    (c.lo..=c.hi())
        .map(|d| {
            let mut stack = Mat::zeros(0, c.dim(d));
            if p > 0 {
                for s in &z.codegens[p - 1] {
                    stack = stack.vstack(&s.at(d));
                }
            }
            kernel(r, &stack)
        })
        .collect()
}

/// Elements of `W` listed by `elements`, re-exported for diagram code.
pub fn cube_elements(mask: usize) -> Vec<usize> {
    elements(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comonad::{coaction_of_chains, DEFAULT_BUDGET};
    use crate::corpus;
    use crate::dold_kan::random_complex;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn cobar_identities_hold() {
        for (stem, cap, depth) in [("s2", 3, 1), ("s2", 2, 2), ("wedge_s1_s1", 2, 1), ("moore_z2_1", 2, 1)] {
            let y = coaction_of_chains(&corpus::load(stem), Ring::F2, cap, DEFAULT_BUDGET).unwrap();
            let z = cobar_algebraic(&y, depth, cap, DEFAULT_BUDGET).unwrap();
            assert!(z.notice.is_none(), "{stem}");
            assert_eq!(z.value.depth(), depth);
            let v = z.value.validate();
            assert!(v.is_empty(), "{stem}: {v:?}");
            let n = normalize_cosimplicial(&z.value);
            assert!(n.validate().is_empty(), "{stem}");
        }
    }

    #[test]
    fn cobar_truncates_on_budget() {
        let y = coaction_of_chains(&corpus::s2(), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
        let z = cobar_algebraic(&y, 2, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(z.value.depth(), 1);
        assert!(z.notice.unwrap().contains("budget"));
    }

    #[test]
    fn broken_coface_is_named() {
        let y = coaction_of_chains(&corpus::s2(), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
        let mut z = cobar_algebraic(&y, 1, 3, DEFAULT_BUDGET).unwrap().value;
        z.cofaces[1][1] = z.cofaces[1][1].scale(0);
        let v = z.validate();
        assert!(v.iter().any(|s| s.contains("s^0 d^1")), "{v:?}");
    }

    #[test]
    fn cubes_from_cobar_commute() {
        let y = coaction_of_chains(&corpus::s2(), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
        let z = normalize_cosimplicial(&cobar_algebraic(&y, 1, 3, DEFAULT_BUDGET).unwrap().value);
        let c = coface_cube(&z, 1).unwrap();
        assert_eq!(c.w, 2);
        assert!(c.validate().is_empty());
        let s = codegeneracy_cube(&z, 1).unwrap();
        assert!(s.validate().is_empty());
        assert!(coface_cube(&z, 2).is_err());
    }

    #[test]
    fn constant_object_is_cosimplicial() {
        let y = coaction_of_chains(&corpus::load("s1"), Ring::F2, 2, DEFAULT_BUDGET).unwrap();
        assert!(constant_module(&y.carrier, 3).validate().is_empty());
        assert_eq!(lim_equalizer(&constant_module(&y.carrier, 2))[1].cols(), y.carrier.dims[1]);
    }

    #[test]
    fn synthetic_object_has_prescribed_normalization() {
        let mut rng = StdRng::seed_from_u64(7);
        let r = Ring::PrimeField(3);
        for _ in 0..4 {
            // N^0 -> N^1 -> N^2 with δ = 0 beyond a random chain map into a cone
            let c = random_complex(&mut rng, r, 3, 2);
            let zero = ChainComplex { ring: r, lo: c.lo, dims: vec![0; c.dims.len()], bd: c.dims.iter().map(|_| Mat::zeros(0, 0)).collect(), complete: c.complete };
            let normal = vec![c.clone(), c.clone(), zero.clone()];
            let delta = vec![ChainMap::identity(&c), ChainMap::zero(&c, &zero)];
            let z = synthetic_cosimplicial(r, &normal, &delta, 2).unwrap();
            let v = z.validate();
            assert!(v.is_empty(), "{v:?}");
            for p in 0..=2 {
                let basis = conormal_basis(&z, p);
                let dims: Vec<usize> = basis.iter().map(|b| b.cols()).collect();
                let want: Vec<usize> = (z.levels[p].lo..=z.levels[p].hi()).map(|d| normal[p].dim(d)).collect();
                assert_eq!(dims, want, "level {p}");
            }
            let g = denormalize_cosimplicial(&z, 2).unwrap();
            assert!(g.validate().is_empty());
        }
    }
}
