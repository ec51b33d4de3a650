//! The mapping cosimplicial object `Hom(Y, K^• Y')`, the box product of
//! cosimplicial objects and the composition pairing
//! `Hom(Y, K^• Y') □ Hom(Y', K^• Y'') -> Hom(Y, K^• Y'')`.
//!
//! Hom-objects are kept at simplicial level 0: each cosimplicial level is
//! the finite set of module maps, enumerated over a prime field.

use std::collections::HashMap;

use crate::comonad::{decode, k_of_map, KCoalgebra};
use crate::cosimplicial::{cobar_algebraic, k_power, Cosimplicial, CosimplicialModule, CosimplicialSpace};
use crate::error::{Error, Result};
use crate::linalg::{kernel, rref};
use crate::matrix::Mat;
use crate::module::{LinearMap, SimplicialModule};
use crate::ring::Ring;
use crate::space::{EnumSpace, SpaceMap};

/// All module maps `a -> b` on levels `0..=cap`, in the order of their
/// coordinates in a fixed kernel basis.
pub fn module_maps(a: &SimplicialModule, b: &SimplicialModule, budget: u64) -> Result<Vec<LinearMap>> {
    let r = a.ring;
    let p = match r {
        Ring::PrimeField(p) => p,
        Ring::Integers => return Err(Error::InfiniteUnderlying),
    };
    let cap = a.cap().min(b.cap());
    // variable (q, row, col) of F_q at offset[q] + row * a_q + col
    let mut offset = vec![0usize];
    for q in 0..=cap {
        offset.push(offset[q] + b.dims[q] * a.dims[q]);
    }
    let nvars = offset[cap + 1];
    let mut rows: Vec<Vec<(usize, i64)>> = Vec::new();
    // b_op F_s - F_t a_op = 0 for an operator s -> t
    let mut relate = |s: usize, t: usize, bop: &Mat, aop: &Mat| {
        let mut eq: HashMap<(usize, usize), Vec<(usize, i64)>> = HashMap::new();
        for c in 0..a.dims[s] {
            for k in 0..b.dims[s] {
                for &(row, v) in bop.col(k) {
                    eq.entry((row, c)).or_default().push((offset[s] + k * a.dims[s] + c, v));
                }
            }
        }
        for c in 0..a.dims[s] {
            for &(k, v) in aop.col(c) {
                for row in 0..b.dims[t] {
                    eq.entry((row, c)).or_default().push((offset[t] + row * a.dims[t] + k, r.neg(v)));
                }
            }
        }
        let mut keys: Vec<_> = eq.keys().copied().collect();
        keys.sort_unstable();
        for key in keys {
            rows.push(eq.remove(&key).unwrap());
        }
    };
    for q in 1..=cap {
        for i in 0..=q {
            relate(q, q - 1, &b.faces[q][i], &a.faces[q][i]);
        }
    }
    for q in 0..cap {
        for j in 0..=q {
            relate(q, q + 1, &b.degens[q][j], &a.degens[q][j]);
        }
    }
    let system = Mat::from_columns(r, nvars, rows).transpose();
    let ker = if system.rows() == 0 { Mat::identity(nvars) } else { kernel(r, &system) };
    let kd = ker.cols();
    if (kd as f64) * (p as f64).log2() > (budget as f64).log2() {
        return Err(Error::Budget { level: 0, needed: format!("{p}^{kd} maps"), budget });
    }
    let mut out = Vec::new();
    for code in 0..p.pow(kd as u32) {
        let v = ker.apply(r, &decode(p, kd, code));
        let maps = (0..=cap)
            .map(|q| {
                let entries: Vec<i64> = v[offset[q]..offset[q + 1]].to_vec();
                Mat::from_dense(r, b.dims[q], a.dims[q], &entries)
            })
            .collect();
        out.push(LinearMap { ring: r, maps });
    }
    Ok(out)
}

/// A cosimplicial finite set given with the map each element stands for.
#[derive(Clone, Debug)]
pub struct MappingCosimplicial {
    /// Levels are enumerated spaces concentrated in simplicial level 0.
    pub object: CosimplicialSpace,
    pub elements: Vec<Vec<LinearMap>>,
    /// `K^n Y'` per level.
    pub targets: Vec<SimplicialModule>,
    pub source: SimplicialModule,
}

impl MappingCosimplicial {
    pub fn find(&self, n: usize, f: &LinearMap) -> Option<usize> {
        let r = f.ring;
        self.elements[n].iter().position(|g| g.maps.iter().zip(&f.maps).all(|(a, b)| a.reduce(r) == b.reduce(r)))
    }

    /// Level-0 elements equalized by `d^0` and `d^1`.
    pub fn equalizer(&self) -> Vec<usize> {
        if self.object.depth() < 1 {
            return (0..self.elements[0].len()).collect();
        }
        let (d0, d1) = (&self.object.cofaces[1][0].maps[0], &self.object.cofaces[1][1].maps[0]);
        (0..self.elements[0].len()).filter(|&x| d0[x] == d1[x]).collect()
    }
}

fn point_set(n: usize) -> EnumSpace {
    EnumSpace { name: format!("{n} points"), sizes: vec![n], faces: vec![vec![]], degens: vec![vec![]], basepoint: None }
}

/// `Hom(Y, K^n Y')` for `n <= depth` on simplicial levels `0..=cap`, with
/// `d^0 f = K(f) m_Y`, `d^i f = d^i_{C(Y')} f` and `s^j f = s^j_{C(Y')} f`.
pub fn mapping_cosimplicial(y: &KCoalgebra, y2: &KCoalgebra, depth: usize, cap: usize, budget: u64) -> Result<MappingCosimplicial> {
    let r = y.carrier.ring;
    let cap = cap.min(y.carrier.cap()).min(y2.carrier.cap());
    let src = y.carrier.truncate(cap);
    let m = y.coaction.truncate(cap);
    let cob = if depth == 0 {
        None
    } else {
        let t = cobar_algebraic(y2, depth - 1, cap, budget)?;
        if let Some(n) = t.notice {
            return Err(Error::Budget { level: cap, needed: n, budget });
        }
        Some(t.value)
    };
    let mut targets = vec![y2.carrier.truncate(cap)];
    if let Some(c) = &cob {
        targets.extend(c.levels.iter().cloned());
    }
    let elements = targets.iter().map(|t| module_maps(&src, t, budget)).collect::<Result<Vec<_>>>()?;
    let lookup: Vec<HashMap<Vec<Mat>, u32>> = elements
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, f)| (f.maps.iter().map(|m| m.reduce(r)).collect(), i as u32)).collect())
        .collect();
    let index = |n: usize, f: &LinearMap| -> Result<u32> {
        let key: Vec<Mat> = f.maps.iter().map(|m| m.reduce(r)).collect();
        lookup[n].get(&key).copied().ok_or_else(|| Error::Internal(format!("structure map leaves Hom at level {n}")))
    };
    let post = |n: usize, g: &LinearMap, from: usize| -> Result<SpaceMap> {
        let row = elements[from].iter().map(|f| index(n, &g.compose(f))).collect::<Result<Vec<_>>>()?;
        Ok(SpaceMap { maps: vec![row] })
    };
    let mut cofaces = vec![vec![]];
    for n in 1..=depth {
        let mut row = Vec::new();
        let d0 = elements[n - 1]
            .iter()
            .map(|f| Ok(k_of_map(f, &src.dims, budget)?.compose(&m)))
            .map(|g: Result<LinearMap>| g.and_then(|g| index(n, &g)))
            .collect::<Result<Vec<_>>>()?;
        row.push(SpaceMap { maps: vec![d0] });
        let c = cob.as_ref().unwrap();
        for i in 1..=n {
            let g = if n == 1 { &y2.coaction.truncate(cap) } else { &c.cofaces[n - 1][i - 1] };
            row.push(post(n, g, n - 1)?);
        }
        cofaces.push(row);
    }
    let mut codegens = Vec::new();
    for n in 0..=depth {
        if n == depth {
            codegens.push(vec![]);
            continue;
        }
        let c = cob.as_ref().unwrap();
        let mut row = vec![post(n, &c.extra.as_ref().unwrap()[n], n + 1)?];
        for j in 1..=n {
            row.push(post(n, &c.codegens[n - 1][j - 1], n + 1)?);
        }
        codegens.push(row);
    }
    let object = Cosimplicial {
        name: format!("Hom({}, K^• {})", y.carrier.name, y2.carrier.name),
        levels: elements.iter().map(|l| point_set(l.len())).collect(),
        cofaces,
        codegens,
        coaugmentation: None,
        extra: None,
    };
    Ok(MappingCosimplicial { object, elements, targets, source: src })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut y = x;
        while self.0[y] != root {
            let next = self.0[y];
            self.0[y] = root;
            y = next;
        }
        root
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Where the pair `(x, y)` with `x` in cosimplicial level `p` of `A` and
/// `y` in level `n - p` of `B` lands among the summands of `(A □ B)^n`.
#[derive(Clone, Debug)]
struct Summands {
    offsets: Vec<usize>,
    widths: Vec<usize>,
}

impl Summands {
    fn new(sizes: impl Iterator<Item = (usize, usize)>) -> Summands {
        let mut offsets = vec![0];
        let mut widths = Vec::new();
        for (sa, sb) in sizes {
            offsets.push(offsets.last().unwrap() + sa * sb);
            widths.push(sb);
        }
        Summands { offsets, widths }
    }
    fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }
    fn at(&self, p: usize, x: usize, y: usize) -> usize {
        self.offsets[p] + x * self.widths[p] + y
    }
    fn split(&self, id: usize) -> (usize, usize, usize) {
        let p = self.offsets.partition_point(|&o| o <= id) - 1;
        let rest = id - self.offsets[p];
        (p, rest / self.widths[p], rest % self.widths[p])
    }
}

/// Cosimplicial identities needed by the box product only reach level
/// `min(depth A, depth B)`.
fn box_depth<O: Clone, A: crate::cosimplicial::Arrow<Obj = O>>(a: &Cosimplicial<O, A>, b: &Cosimplicial<O, A>) -> usize {
    a.depth().min(b.depth())
}

/// Levelwise product of finite simplicial sets, quotient by
/// `(d^{p+1} x, y) ~ (x, d^0 y)`.
#[derive(Clone, Debug)]
pub struct SetBox {
    pub object: CosimplicialSpace,
    /// Per cosimplicial level and simplicial level, the chosen pair
    /// `(p, x, y)` representing each class.
    pub representatives: Vec<Vec<Vec<(usize, u32, u32)>>>,
    classes: Vec<Vec<Vec<u32>>>,
    summands: Vec<Vec<Summands>>,
}

impl SetBox {
    /// Class of `(x, y)` with `x` in `A^p`.
    pub fn class(&self, n: usize, k: usize, p: usize, x: u32, y: u32) -> u32 {
        self.classes[n][k][self.summands[n][k].at(p, x as usize, y as usize)]
    }
}

pub fn box_product_sets(a: &CosimplicialSpace, b: &CosimplicialSpace) -> Result<SetBox> {
    let depth = box_depth(a, b);
    let cap = a.levels.iter().chain(&b.levels).map(EnumSpace::cap).min().unwrap_or(0);
    let mut classes = Vec::new();
    let mut representatives = Vec::new();
    let mut summands = Vec::new();
    for n in 0..=depth {
        let mut lc = Vec::new();
        let mut lr = Vec::new();
        let mut ls = Vec::new();
        for k in 0..=cap {
            let s = Summands::new((0..=n).map(|p| (a.levels[p].sizes[k], b.levels[n - p].sizes[k])));
            let mut uf = UnionFind((0..s.total()).collect());
            // x in A^r, y in B^{n-1-r}
            for rr in 0..n {
                let q = n - 1 - rr;
                for x in 0..a.levels[rr].sizes[k] {
                    for y in 0..b.levels[q].sizes[k] {
                        let dx = a.cofaces[rr + 1][rr + 1].maps[k][x] as usize;
                        let dy = b.cofaces[q + 1][0].maps[k][y] as usize;
                        uf.union(s.at(rr + 1, dx, y), s.at(rr, x, dy));
                    }
                }
            }
            let mut label = HashMap::new();
            let mut reps = Vec::new();
            let cls = (0..s.total())
                .map(|id| {
                    let root = uf.find(id);
                    *label.entry(root).or_insert_with(|| {
                        let (p, x, y) = s.split(root);
                        reps.push((p, x as u32, y as u32));
                        reps.len() as u32 - 1
                    })
                })
                .collect::<Vec<u32>>();
            lc.push(cls);
            lr.push(reps);
            ls.push(s);
        }
        classes.push(lc);
        representatives.push(lr);
        summands.push(ls);
    }
    let class = |n: usize, k: usize, p: usize, x: u32, y: u32| classes[n][k][summands[n][k].at(p, x as usize, y as usize)];
    let mut levels = Vec::new();
    for n in 0..=depth {
        let sizes: Vec<usize> = (0..=cap).map(|k| representatives[n][k].len()).collect();
        let faces = (0..=cap)
            .map(|k| {
                if k == 0 {
                    return vec![];
                }
                (0..=k)
                    .map(|i| {
                        representatives[n][k]
                            .iter()
                            .map(|&(p, x, y)| class(n, k - 1, p, a.levels[p].faces[k][i][x as usize], b.levels[n - p].faces[k][i][y as usize]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let degens = (0..=cap)
            .map(|k| {
                if k == cap {
                    return vec![];
                }
                (0..=k)
                    .map(|j| {
                        representatives[n][k]
                            .iter()
                            .map(|&(p, x, y)| class(n, k + 1, p, a.levels[p].degens[k][j][x as usize], b.levels[n - p].degens[k][j][y as usize]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        levels.push(EnumSpace { name: format!("({}□{})^{n}", a.name, b.name), sizes, faces, degens, basepoint: None });
    }
    let mut cofaces = vec![vec![]];
    for n in 1..=depth {
        let row = (0..=n)
            .map(|i| SpaceMap {
                maps: (0..=cap)
                    .map(|k| {
                        representatives[n - 1][k]
                            .iter()
                            .map(|&(p, x, y)| {
                                let q = n - 1 - p;
                                if i <= p {
                                    class(n, k, p + 1, a.cofaces[p + 1][i].maps[k][x as usize], y)
                                } else {
                                    class(n, k, p, x, b.cofaces[q + 1][i - p].maps[k][y as usize])
                                }
                            })
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        cofaces.push(row);
    }
    let mut codegens = Vec::new();
    for n in 0..=depth {
        if n == depth {
            codegens.push(vec![]);
            continue;
        }
        let row = (0..=n)
            .map(|j| SpaceMap {
                maps: (0..=cap)
                    .map(|k| {
                        representatives[n + 1][k]
                            .iter()
                            .map(|&(p, x, y)| {
                                let q = n + 1 - p;
                                if j < p {
                                    class(n, k, p - 1, a.codegens[p - 1][j].maps[k][x as usize], y)
                                } else {
                                    class(n, k, p, x, b.codegens[q - 1][j - p].maps[k][y as usize])
                                }
                            })
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        codegens.push(row);
    }
    let object = Cosimplicial { name: format!("{}□{}", a.name, b.name), levels, cofaces, codegens, coaugmentation: None, extra: None };
    Ok(SetBox { object, representatives, classes, summands })
}

fn kron(r: Ring, a: &Mat, b: &Mat) -> Mat {
    let cols = (0..a.cols())
        .flat_map(|i| (0..b.cols()).map(move |j| (i, j)))
        .map(|(i, j)| {
            a.col(i)
                .iter()
                .flat_map(|&(ra, va)| b.col(j).iter().map(move |&(rb, vb)| (ra * b.rows() + rb, r.mul(va, vb))))
                .collect()
        })
        .collect();
    Mat::from_columns(r, a.rows() * b.rows(), cols)
}

/// Quotient of `R^n` by the column span of `rel`: the projection and a
/// section onto the kept coordinates.
fn quotient(r: Ring, n: usize, rel: &Mat) -> (Mat, Mat) {
    if rel.cols() == 0 {
        return (Mat::identity(n), Mat::identity(n));
    }
    let (rows, pivots) = rref(r, &rel.transpose());
    let mut is_piv = vec![None; n];
    for (k, &p) in pivots.iter().enumerate() {
        is_piv[p] = Some(k);
    }
    let kept: Vec<usize> = (0..n).filter(|&c| is_piv[c].is_none()).collect();
    let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let proj = (0..n)
        .map(|c| match is_piv[c] {
            None => vec![(pos[&c], 1)],
            Some(k) => kept.iter().filter(|&&j| rows[k][j] != 0).map(|&j| (pos[&j], r.neg(rows[k][j]))).collect(),
        })
        .collect();
    let section = kept.iter().map(|&c| vec![(c, 1)]).collect();
    (Mat::from_columns(r, kept.len(), proj), Mat::from_columns(r, n, section))
}

/// Levelwise tensor product of cosimplicial modules, quotient by
/// `d^{p+1} x ⊗ y - x ⊗ d^0 y`. Needs a field.
pub fn box_product_modules(a: &CosimplicialModule, b: &CosimplicialModule) -> Result<CosimplicialModule> {
    let r = a.levels[0].ring;
    if !r.is_field() {
        return Err(Error::Precondition("module box product needs a field".into()));
    }
    let depth = box_depth(a, b);
    let cap = a.levels.iter().chain(&b.levels).map(SimplicialModule::cap).min().unwrap_or(0);
    // per n, k: summands, projection, section
    let mut data: Vec<Vec<(Summands, Mat, Mat)>> = Vec::new();
    for n in 0..=depth {
        let mut per = Vec::new();
        for k in 0..=cap {
            let s = Summands::new((0..=n).map(|p| (a.levels[p].dims[k], b.levels[n - p].dims[k])));
            let mut rel = Vec::new();
            for rr in 0..n {
                let q = n - 1 - rr;
                let (da, db) = (a.levels[rr].dims[k], b.levels[q].dims[k]);
                let left = kron(r, &a.cofaces[rr + 1][rr + 1].maps[k], &Mat::identity(db));
                let right = kron(r, &Mat::identity(da), &b.cofaces[q + 1][0].maps[k]);
                for c in 0..da * db {
                    let mut v: Vec<(usize, i64)> = left.col(c).iter().map(|&(i, x)| (s.offsets[rr + 1] + i, x)).collect();
                    v.extend(right.col(c).iter().map(|&(i, x)| (s.offsets[rr] + i, r.neg(x))));
                    rel.push(v);
                }
            }
            let rel = Mat::from_columns(r, s.total(), rel);
            let (proj, sec) = quotient(r, s.total(), &rel);
            per.push((s, proj, sec));
        }
        data.push(per);
    }
    // assemble a block map between levels n -> m at simplicial level k
    let blocks = |n: usize, m: usize, k: usize, k2: usize, part: &dyn Fn(usize) -> (usize, Mat)| -> Mat {
        let (s, _, sec) = &data[n][k];
        let (t, proj, _) = &data[m][k2];
        let cols = (0..=n)
            .flat_map(|p| {
                let (p2, blk) = part(p);
                (0..blk.cols()).map(move |c| blk.col(c).iter().map(|&(i, x)| (t.offsets[p2] + i, x)).collect::<Vec<_>>()).collect::<Vec<_>>()
            })
            .collect();
        let _ = s;
        let big = Mat::from_columns(r, t.total(), cols);
        proj.mul(r, &big).mul(r, sec)
    };
    let mut levels = Vec::new();
    for n in 0..=depth {
        let dims = (0..=cap).map(|k| data[n][k].1.rows()).collect();
        let faces = (0..=cap)
            .map(|k| {
                if k == 0 {
                    return vec![];
                }
                (0..=k)
                    .map(|i| blocks(n, n, k, k - 1, &|p| (p, kron(r, &a.levels[p].faces[k][i], &b.levels[n - p].faces[k][i]))))
                    .collect()
            })
            .collect();
        let degens = (0..=cap)
            .map(|k| {
                if k == cap {
                    return vec![];
                }
                (0..=k)
                    .map(|j| blocks(n, n, k, k + 1, &|p| (p, kron(r, &a.levels[p].degens[k][j], &b.levels[n - p].degens[k][j]))))
                    .collect()
            })
            .collect();
        levels.push(SimplicialModule { ring: r, name: format!("({}□{})^{n}", a.name, b.name), dims, faces, degens, set_like: false });
    }
    let mut cofaces = vec![vec![]];
    for n in 1..=depth {
        let row = (0..=n)
            .map(|i| LinearMap {
                ring: r,
                maps: (0..=cap)
                    .map(|k| {
                        blocks(n - 1, n, k, k, &|p| {
                            let q = n - 1 - p;
                            if i <= p {
                                (p + 1, kron(r, &a.cofaces[p + 1][i].maps[k], &Mat::identity(b.levels[q].dims[k])))
                            } else {
                                (p, kron(r, &Mat::identity(a.levels[p].dims[k]), &b.cofaces[q + 1][i - p].maps[k]))
                            }
                        })
                    })
                    .collect(),
            })
            .collect();
        cofaces.push(row);
    }
    let mut codegens = Vec::new();
    for n in 0..=depth {
        if n == depth {
            codegens.push(vec![]);
            continue;
        }
        let row = (0..=n)
            .map(|j| LinearMap {
                ring: r,
                maps: (0..=cap)
                    .map(|k| {
                        blocks(n + 1, n, k, k, &|p| {
                            let q = n + 1 - p;
                            if j < p {
                                (p - 1, kron(r, &a.codegens[p - 1][j].maps[k], &Mat::identity(b.levels[q].dims[k])))
                            } else {
                                (p, kron(r, &Mat::identity(a.levels[p].dims[k]), &b.codegens[q - 1][j - p].maps[k]))
                            }
                        })
                    })
                    .collect(),
            })
            .collect();
        codegens.push(row);
    }
    Ok(Cosimplicial { name: format!("{}□{}", a.name, b.name), levels, cofaces, codegens, coaugmentation: None, extra: None })
}

/// The constant cosimplicial object on the ground ring, the unit for `□`.
pub fn unit_module(r: Ring, depth: usize, cap: usize) -> CosimplicialModule {
    let one = SimplicialModule {
        ring: r,
        name: "R".into(),
        dims: vec![1; cap + 1],
        faces: (0..=cap).map(|k| if k == 0 { vec![] } else { vec![Mat::identity(1); k + 1] }).collect(),
        degens: (0..=cap).map(|k| if k == cap { vec![] } else { vec![Mat::identity(1); k + 1] }).collect(),
        set_like: true,
    };
    crate::cosimplicial::constant_module(&one, depth)
}

/// The composition pairing `μ(f, g) = K^p(g) ∘ f` on the set-level box
/// product, checked to be a cosimplicial map.
#[derive(Clone, Debug)]
pub struct Composition {
    pub boxed: SetBox,
    /// `maps[n][c]` indexes level `n` of `Hom(Y, K^• Y'')`.
    pub maps: Vec<Vec<u32>>,
    pub violations: Vec<String>,
}

pub fn compose_mu(first: &MappingCosimplicial, second: &MappingCosimplicial, out: &MappingCosimplicial, budget: u64) -> Result<Composition> {
    let boxed = box_product_sets(&first.object, &second.object)?;
    let depth = boxed.object.depth().min(out.object.depth());
    let mut maps = Vec::new();
    for n in 0..=depth {
        let row = boxed.representatives[n][0]
            .iter()
            .map(|&(p, x, y)| {
                let f = &first.elements[p][x as usize];
                let g = &second.elements[n - p][y as usize];
                let h = k_power(g, &second.source.dims, p, budget)?.compose(f);
                out.find(n, &h).map(|i| i as u32).ok_or_else(|| Error::Internal(format!("K^{p}(g) f is not in Hom at level {n}")))
            })
            .collect::<Result<Vec<_>>>()?;
        maps.push(row);
    }
    let mut violations = Vec::new();
    for n in 1..=depth {
        for i in 0..=n {
            let c = &boxed.object.cofaces[n][i].maps[0];
            let d = &out.object.cofaces[n][i].maps[0];
            for (x, &img) in c.iter().enumerate() {
                if maps[n][img as usize] != d[maps[n - 1][x] as usize] {
                    violations.push(format!("μ d^{i} != d^{i} μ at level {}", n - 1));
                    break;
                }
            }
        }
    }
    for n in 0..depth {
        for j in 0..=n {
            let c = &boxed.object.codegens[n][j].maps[0];
            let d = &out.object.codegens[n][j].maps[0];
            for (x, &img) in c.iter().enumerate() {
                if maps[n][img as usize] != d[maps[n + 1][x] as usize] {
                    violations.push(format!("μ s^{j} != s^{j} μ at level {}", n + 1));
                    break;
                }
            }
        }
    }
    Ok(Composition { boxed, maps, violations })
}
