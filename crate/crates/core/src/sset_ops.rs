//! Standard simplices, skeleta, products and the tensor `X ∧ K₊`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ordinal::OrdinalMap;
use crate::simplicial::{subsets, Cell, FinSimplicialSet, SimplexRef};

/// The one-point pointed set.
pub fn point() -> FinSimplicialSet {
    FinSimplicialSet {
        name: "point".into(),
        basepoint: Some(0),
        cells: vec![Cell { id: "*".into(), dim: 0, faces: vec![] }],
        level_cap: None,
    }
}

/// The empty simplicial set (the (-1)-skeleton of anything).
pub fn empty() -> FinSimplicialSet {
    FinSimplicialSet { name: "empty".into(), basepoint: None, cells: vec![], level_cap: None }
}

fn simplex_id(vs: &[usize]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("v{}", parts.join("_"))
}

/// `Δ[n]`, unpointed, one cell per nonempty subset of `{0..n}`.
pub fn standard_simplex(n: usize) -> FinSimplicialSet {
    let mut cells = Vec::new();
    let mut index = HashMap::new();
    for k in 0..=n {
        for s in subsets(n + 1, k + 1) {
            index.insert(s.clone(), cells.len());
            cells.push((s, k));
        }
    }
    let cells = cells
        .iter()
        .map(|(s, k)| {
            let faces = if *k == 0 {
                vec![]
            } else {
                (0..=*k)
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        SimplexRef::cell(index[&f])
                    })
                    .collect()
            };
            Cell { id: simplex_id(s), dim: *k, faces }
        })
        .collect();
    FinSimplicialSet { name: format!("Delta[{n}]"), basepoint: None, cells, level_cap: None }
}

/// `Δ[n]` pointed at vertex 0.
pub fn pointed_simplex(n: usize) -> FinSimplicialSet {
    let mut x = standard_simplex(n);
    x.basepoint = Some(0);
    x
}

/// Drops nondegenerate cells above dimension `s`; `s = -1` gives the empty set.
pub fn skeleton(s: i64, x: &FinSimplicialSet) -> FinSimplicialSet {
    if s < 0 {
        let mut e = empty();
        e.name = format!("sk_{s} {}", x.name);
        return e;
    }
    let keep: Vec<usize> = (0..x.cells.len()).filter(|&i| x.cells[i].dim as i64 <= s).collect();
    let mut new_index = vec![usize::MAX; x.cells.len()];
    for (k, &i) in keep.iter().enumerate() {
        new_index[i] = k;
    }
    let cells = keep
        .iter()
        .map(|&i| {
            let c = &x.cells[i];
            let faces = c
                .faces
                .iter()
                .map(|f| SimplexRef { degeneracy_word: f.degeneracy_word.clone(), base: new_index[f.base] })
                .collect();
            Cell { id: c.id.clone(), dim: c.dim, faces }
        })
        .collect();
    FinSimplicialSet {
        name: format!("sk_{s} {}", x.name),
        basepoint: x.basepoint.map(|b| new_index[b]),
        cells,
        level_cap: x.level_cap,
    }
}

/// Splits a pair of simplices of the same dimension into common degeneracies
/// and a nondegenerate pair: `(u, v) = s_K (α^* x, β^* y)`.
fn pair_normal_form(
    x: &FinSimplicialSet,
    y: &FinSimplicialSet,
    u: &SimplexRef,
    v: &SimplexRef,
) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let n = x.dim_of(u);
    debug_assert_eq!(n, y.dim_of(v));
    let common: Vec<usize> = u.degeneracy_word.iter().copied().filter(|j| v.degeneracy_word.contains(j)).collect();
    let sk = OrdinalMap::from_surjection_word(n, &common);
    let su = OrdinalMap::from_surjection_word(n, &u.degeneracy_word);
    let sv = OrdinalMap::from_surjection_word(n, &v.degeneracy_word);
    let r = sk.target_arity;
    let factor = |s: &OrdinalMap| {
        let mut vals = vec![0; r + 1];
        for t in 0..=n {
            vals[sk.values[t]] = s.values[t];
        }
        OrdinalMap { source_arity: r, target_arity: s.target_arity, values: vals }.surjection_word()
    };
    (common, factor(&su), factor(&sv))
}

fn word_id(w: &[usize]) -> String {
    w.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(".")
}

fn pair_id(x: &FinSimplicialSet, a: usize, wa: &[usize], y: &FinSimplicialSet, b: usize, wb: &[usize]) -> String {
    format!("({};{};{};{})", x.cells[a].id, word_id(wa), y.cells[b].id, word_id(wb))
}

/// Nondegenerate cell of a product: `(x cell, x word, y cell, y word)`.
pub type PairCell = (usize, Vec<usize>, usize, Vec<usize>);

/// A product (or smash with `K₊`) together with the factor data of each
/// cell, so simplices can be located from and projected to the factors.
#[derive(Clone, Debug)]
pub struct Product {
    pub set: FinSimplicialSet,
    /// `None` only for the collapsed basepoint of a smash.
    pub components: Vec<Option<PairCell>>,
    index: HashMap<PairCell, usize>,
    collapsed_x: Option<usize>,
}

impl Product {
    /// The simplex `(u, v)` in normal form.
    pub fn locate(&self, x: &FinSimplicialSet, y: &FinSimplicialSet, u: &SimplexRef, v: &SimplexRef) -> SimplexRef {
        if Some(u.base) == self.collapsed_x {
            return SimplexRef { degeneracy_word: (0..x.dim_of(u)).rev().collect(), base: 0 };
        }
        let (common, w1, w2) = pair_normal_form(x, y, u, v);
        SimplexRef { degeneracy_word: common, base: self.index[&(u.base, w1, v.base, w2)] }
    }

    /// Factor simplices of a product simplex; `None` for the smash basepoint.
    pub fn project(&self, x: &FinSimplicialSet, y: &FinSimplicialSet, s: &SimplexRef) -> Option<(SimplexRef, SimplexRef)> {
        let (a, wa, b, wb) = self.components[s.base].clone()?;
        let mut u = SimplexRef { degeneracy_word: wa, base: a };
        let mut v = SimplexRef { degeneracy_word: wb, base: b };
        for &j in s.degeneracy_word.iter().rev() {
            u = x.degeneracy(j, &u);
            v = y.degeneracy(j, &v);
        }
        Some((u, v))
    }
}

/// Cartesian product. Pointed iff both factors are.
pub fn product(x: &FinSimplicialSet, y: &FinSimplicialSet) -> FinSimplicialSet {
    product_indexed(x, y).set
}

pub fn product_indexed(x: &FinSimplicialSet, y: &FinSimplicialSet) -> Product {
    product_filtered(x, y, |_| true, None)
}

fn product_filtered(
    x: &FinSimplicialSet,
    y: &FinSimplicialSet,
    keep_x: impl Fn(usize) -> bool,
    collapse: Option<(usize, usize)>,
) -> Product {
    // (dimension, x cell, word, y cell, word) for each nondegenerate pair
    let mut pairs: Vec<(usize, usize, Vec<usize>, usize, Vec<usize>)> = Vec::new();
    for (a, ca) in x.cells.iter().enumerate() {
        if !keep_x(a) {
            continue;
        }
        for (b, cb) in y.cells.iter().enumerate() {
            let (p, q) = (ca.dim, cb.dim);
            for n in p.max(q)..=p + q {
                for i in subsets(n, n - p) {
                    for j in subsets(n, n - q) {
                        if i.iter().any(|t| j.contains(t)) {
                            continue;
                        }
                        let mut wi = i.clone();
                        wi.reverse();
                        let mut wj = j.clone();
                        wj.reverse();
                        pairs.push((n, a, wi, b, wj));
                    }
                }
            }
        }
    }
    pairs.sort_by(|l, r| l.0.cmp(&r.0));
    let mut cells: Vec<Cell> = Vec::new();
    let mut components: Vec<Option<PairCell>> = Vec::new();
    let mut index: HashMap<PairCell, usize> = HashMap::new();
    let offset = usize::from(collapse.is_some());
    if collapse.is_some() {
        cells.push(Cell { id: "*".into(), dim: 0, faces: vec![] });
        components.push(None);
    }
    for (k, (n, a, wa, b, wb)) in pairs.iter().enumerate() {
        index.insert((*a, wa.clone(), *b, wb.clone()), k + offset);
        cells.push(Cell { id: pair_id(x, *a, wa, y, *b, wb), dim: *n, faces: vec![] });
        components.push(Some((*a, wa.clone(), *b, wb.clone())));
    }
    let mut prod = Product {
        set: FinSimplicialSet { name: format!("{} x {}", x.name, y.name), basepoint: None, cells, level_cap: None },
        components,
        index,
        collapsed_x: collapse.map(|c| c.0),
    };
    for (k, (n, a, wa, b, wb)) in pairs.iter().enumerate() {
        if *n == 0 {
            continue;
        }
        let u = SimplexRef { degeneracy_word: wa.clone(), base: *a };
        let v = SimplexRef { degeneracy_word: wb.clone(), base: *b };
        let faces = (0..=*n).map(|i| prod.locate(x, y, &x.face(i, &u), &y.face(i, &v))).collect();
        prod.set.cells[k + offset].faces = faces;
    }
    prod.set.basepoint = match collapse {
        Some(_) => Some(0),
        None => match (x.basepoint, y.basepoint) {
            (Some(bx), Some(by)) => Some(prod.index[&(bx, vec![], by, vec![])]),
            _ => None,
        },
    };
    prod
}

/// `X ⊗ K := X ∧ K₊` for pointed `X` and unpointed `K`.
pub fn smash_tensor(x: &FinSimplicialSet, k: &FinSimplicialSet) -> Result<FinSimplicialSet> {
    Ok(smash_indexed(x, k)?.set)
}

pub fn smash_indexed(x: &FinSimplicialSet, k: &FinSimplicialSet) -> Result<Product> {
    let bx = x.basepoint.ok_or_else(|| Error::Precondition("tensor needs a pointed simplicial set".into()))?;
    let mut out = product_filtered(x, k, |a| a != bx, Some((bx, 0)));
    out.set.name = format!("{} (x) {}", x.name, k.name);
    Ok(out)
}

/// Vertex set of each cell of `Δ[n]`, by cell index.
pub fn simplex_vertex_sets(delta: &FinSimplicialSet) -> Vec<Vec<usize>> {
    delta
        .cells
        .iter()
        .map(|c| c.id.trim_start_matches('v').split('_').map(|t| t.parse().expect("standard simplex id")).collect())
        .collect()
}

/// A simplex of `Δ[n]` as the monotone map `[m] -> [n]` it names.
pub fn simplex_to_map(delta: &FinSimplicialSet, verts: &[Vec<usize>], s: &SimplexRef) -> OrdinalMap {
    let m = delta.dim_of(s);
    let n = verts.iter().map(|v| v.len()).max().unwrap_or(1) - 1;
    let sigma = OrdinalMap::from_surjection_word(m, &s.degeneracy_word);
    let vs = &verts[s.base];
    OrdinalMap { source_arity: m, target_arity: n, values: sigma.values.iter().map(|&t| vs[t]).collect() }
}

/// Inverse of [`simplex_to_map`].
pub fn map_to_simplex(lookup: &HashMap<Vec<usize>, usize>, alpha: &OrdinalMap) -> SimplexRef {
    let (epi, mono) = alpha.epi_mono();
    SimplexRef { degeneracy_word: epi.surjection_word(), base: lookup[&mono.values] }
}

/// Reads a cell-level isomorphism between two sets with the same cell ids
/// up to a renaming; used to confirm canonical isomorphisms in tests.
pub fn same_shape(a: &FinSimplicialSet, b: &FinSimplicialSet) -> bool {
    let counts = |x: &FinSimplicialSet| {
        let mut c = vec![0usize; x.max_dim() + 1];
        for cell in &x.cells {
            c[cell.dim] += 1;
        }
        c
    };
    a.cells.len() == b.cells.len() && counts(a) == counts(b)
}
