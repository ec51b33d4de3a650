//! Exact rank, kernels, solving, and Smith normal form.
//!
//! Field work is Gaussian elimination on dense rows. Integer work goes
//! through `snf`, which keeps both unimodular transforms.

use crate::matrix::Mat;
use crate::ring::Ring;

/// Reduced row echelon form over a prime field, returned as dense rows plus
/// pivot columns.
pub fn rref(ring: Ring, a: &Mat) -> (Vec<Vec<i64>>, Vec<usize>) {
    assert!(ring.is_field());
    let (m, n) = (a.rows(), a.cols());
    let mut rows = vec![vec![0i64; n]; m];
    for c in 0..n {
        for &(r, v) in a.col(c) {
            rows[r][c] = v;
        }
    }
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..n {
        if pr == m {
            break;
        }
        let Some(p) = (pr..m).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(pr, p);
        let inv = ring.inv(rows[pr][c]);
        for x in rows[pr].iter_mut() {
            *x = ring.mul(*x, inv);
        }
        let piv = rows[pr].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pr && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&piv).skip(c) {
                    if y != 0 {
                        *x = ring.sub(*x, ring.mul(f, y));
                    }
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    rows.truncate(pr);
    (rows, pivots)
}

pub fn rank(ring: Ring, a: &Mat) -> usize {
    if a.is_zero() {
        return 0;
    }
    if ring.is_field() {
        rref(ring, a).1.len()
    } else {
        snf(a).rank()
    }
}

/// Kernel basis as the columns of the returned matrix. Over `Z` the basis
/// spans the full (saturated) integer kernel.
pub fn kernel(ring: Ring, a: &Mat) -> Mat {
    let n = a.cols();
    if a.is_zero() {
        return Mat::identity(n);
    }
    if ring.is_field() {
        let (rows, pivots) = rref(ring, a);
        let mut is_piv = vec![false; n];
        for &p in &pivots {
            is_piv[p] = true;
        }
        let mut cols = Vec::new();
        for f in (0..n).filter(|&c| !is_piv[c]) {
            let mut v = vec![(f, 1i64)];
            for (k, &p) in pivots.iter().enumerate() {
                let x = rows[k][f];
                if x != 0 {
                    v.push((p, ring.neg(x)));
                }
            }
            cols.push(v);
        }
        Mat::from_columns(ring, n, cols)
    } else {
        let s = snf(a);
        let r = s.rank();
        s.v.select_cols(&(r..n).collect::<Vec<_>>())
    }
}

/// Solves `a x = b` column by column; `None` if some column has no solution.
pub fn solve(ring: Ring, a: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(a.rows(), b.rows());
    let n = a.cols();
    if ring.is_field() {
        let aug = a.hstack(b);
        let (rows, pivots) = rref(ring, &aug);
        if pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let cols = (0..b.cols())
            .map(|j| pivots.iter().enumerate().map(|(k, &p)| (p, rows[k][n + j])).filter(|e| e.1 != 0).collect())
            .collect();
        Some(Mat::from_columns(ring, n, cols))
    } else {
        let s = snf(a);
        let ub = s.u.mul(ring, b);
        let r = s.rank();
        let mut cols = Vec::new();
        for j in 0..b.cols() {
            let mut y = Vec::new();
            for &(i, v) in ub.col(j) {
                if i >= r {
                    return None;
                }
                let d = s.diag[i];
                if v % d != 0 {
                    return None;
                }
                y.push((i, v / d));
            }
            cols.push(y);
        }
        let y = Mat::from_columns(ring, n, cols);
        Some(s.v.mul(ring, &y))
    }
}

/// Columns of `b` expressed in the basis given by the columns of `basis`
/// (which must be independent). Panics if some column is outside the span.
pub fn coordinates(ring: Ring, basis: &Mat, b: &Mat) -> Mat {
    solve(ring, basis, b).expect("vector outside the span of the basis")
}

/// True iff `a` is square and invertible over the ring.
pub fn is_invertible(ring: Ring, a: &Mat) -> bool {
    if a.rows() != a.cols() {
        return false;
    }
    if ring.is_field() {
        rank(ring, a) == a.rows()
    } else {
        let s = snf(a);
        s.rank() == a.rows() && s.diag.iter().all(|&d| d == 1)
    }
}

/// Smith normal form over `Z`: `u * a * v = diag`, with `u`, `v` unimodular
/// and `diag[0] | diag[1] | ...`, all positive.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Mat,
    pub v: Mat,
    pub diag: Vec<i64>,
    pub rows: usize,
    pub cols: usize,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal_matrix(&self) -> Mat {
        let cols = (0..self.cols)
            .map(|j| if j < self.diag.len() { vec![(j, self.diag[j])] } else { vec![] })
            .collect();
        Mat::from_columns(Ring::Integers, self.rows, cols)
    }
}

/// Integer Smith normal form. Pivots are chosen with minimal absolute value,
/// ties broken by smallest (row, column).
pub fn snf(a: &Mat) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut x: Vec<Vec<i128>> = vec![vec![0; n]; m];
    for c in 0..n {
        for &(r, v) in a.col(c) {
            x[r][c] = v as i128;
        }
    }
    let mut u: Vec<Vec<i128>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i128).collect()).collect();
    // v is stored transposed (rows of vt = columns of v) so column ops are row ops.
    let mut vt: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_pivot(&x, t) else { break };
        x.swap(t, pi);
        u.swap(t, pi);
        for row in x.iter_mut() {
            row.swap(t, pj);
        }
        vt.swap(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if x[i][t] != 0 {
                    let q = x[i][t].div_euclid(x[t][t]);
                    row_axpy(&mut x, i, t, -q);
                    row_axpy(&mut u, i, t, -q);
                    if x[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if x[t][j] != 0 {
                    let q = x[t][j].div_euclid(x[t][t]);
                    for row in x.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    row_axpy(&mut vt, j, t, -q);
                    if x[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility of the trailing block
                let p = x[t][t];
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| x[i][j] % p != 0));
                match bad {
                    None => break,
                    Some(i) => {
                        row_axpy(&mut x, t, i, 1);
                        row_axpy(&mut u, t, i, 1);
                        continue;
                    }
                }
            }
            // a remainder survived: move the smallest entry of row/col t to the pivot
            let (pi, pj) = min_pivot_cross(&x, t);
            if pi != t {
                x.swap(t, pi);
                u.swap(t, pi);
            }
            if pj != t {
                for row in x.iter_mut() {
                    row.swap(t, pj);
                }
                vt.swap(t, pj);
            }
        }
        if x[t][t] < 0 {
            for v in x[t].iter_mut() {
                *v = -*v;
            }
            for v in u[t].iter_mut() {
                *v = -*v;
            }
        }
        diag.push(to_i64(x[t][t]));
        t += 1;
    }
    let to_mat = |rows: &Vec<Vec<i128>>, transpose: bool| {
        let k = rows.len();
        let mut cols = vec![Vec::new(); k];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    if transpose {
                        cols[i].push((j, to_i64(v)));
                    } else {
                        cols[j].push((i, to_i64(v)));
                    }
                }
            }
        }
        Mat::from_columns(Ring::Integers, k, cols)
    };
    Snf { u: to_mat(&u, false), v: to_mat(&vt, true), diag, rows: m, cols: n }
}

fn to_i64(v: i128) -> i64 {
    i64::try_from(v).expect("coefficient growth exceeded i64 in Smith normal form")
}

fn row_axpy(x: &mut [Vec<i128>], dst: usize, src: usize, q: i128) {
    if q == 0 {
        return;
    }
    let (a, b) = if dst < src {
        let (l, r) = x.split_at_mut(src);
        (&mut l[dst], &r[0])
    } else {
        let (l, r) = x.split_at_mut(dst);
        (&mut r[0], &l[src])
    };
    for (d, s) in a.iter_mut().zip(b.iter()) {
        *d += q * s;
    }
}

fn min_pivot(x: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for (i, row) in x.iter().enumerate().skip(t) {
        for (j, &v) in row.iter().enumerate().skip(t) {
            if v != 0 {
                let key = (v.abs(), i, j);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
    }
    best.map(|b| (b.1, b.2))
}

fn min_pivot_cross(x: &[Vec<i128>], t: usize) -> (usize, usize) {
    let mut best = (x[t][t].abs(), t, t);
    for (i, row) in x.iter().enumerate().skip(t + 1) {
        if row[t] != 0 && (row[t].abs(), i, t) < best {
            best = (row[t].abs(), i, t);
        }
    }
    for j in t + 1..x[t].len() {
        let v = x[t][j];
        if v != 0 && (v.abs(), t, j) < best {
            best = (v.abs(), t, j);
        }
    }
    (best.1, best.2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &Mat) {
        let z = Ring::Integers;
        let s = snf(a);
        let d = s.u.mul(z, a).mul(z, &s.v);
        assert_eq!(d, s.diagonal_matrix());
        assert!(is_invertible_by_det(&s.u) && is_invertible_by_det(&s.v));
        for w in s.diag.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    // independent unimodularity oracle: Bareiss determinant
    fn is_invertible_by_det(m: &Mat) -> bool {
        let n = m.rows();
        let mut a: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j) as i128).collect()).collect();
        let mut prev = 1i128;
        let mut sign = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return false };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        (sign * if n == 0 { 1 } else { a[n - 1][n - 1] }).abs() == 1
    }

    #[test]
    fn snf_small_examples() {
        let z = Ring::Integers;
        let a = Mat::from_dense(z, 2, 2, &[2, 4, 6, 8]);
        check_snf(&a);
        assert_eq!(snf(&a).diag, vec![2, 4]);
        let b = Mat::from_dense(z, 3, 3, &[2, 0, 0, 0, 3, 0, 0, 0, 5]);
        assert_eq!(snf(&b).diag, vec![1, 1, 30]);
        check_snf(&b);
    }

    #[test]
    fn kernel_and_solve() {
        let z = Ring::Integers;
        let a = Mat::from_dense(z, 1, 3, &[2, 4, 6]);
        let k = kernel(z, &a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(z, &k).is_zero());
        let b = Mat::from_dense(z, 1, 1, &[3]);
        assert!(solve(z, &a, &b).is_none());
        let b = Mat::from_dense(z, 1, 1, &[10]);
        let x = solve(z, &a, &b).unwrap();
        assert_eq!(a.mul(z, &x), b);
        let f = Ring::PrimeField(3);
        let a3 = a.reduce(f);
        let x3 = solve(f, &a3, &Mat::from_dense(f, 1, 1, &[1])).unwrap();
        assert_eq!(a3.mul(f, &x3).to_dense(), vec![1]);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn snf_reproduces_input(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-6i64..7, 25)) {
            let a = Mat::from_dense(Ring::Integers, rows, cols, &seed[..rows * cols]);
            check_snf(&a);
        }

        #[test]
        fn field_kernel_dimension(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(0i64..5, 36)) {
            let f = Ring::PrimeField(5);
            let a = Mat::from_dense(f, rows, cols, &seed[..rows * cols]);
            let k = kernel(f, &a);
            prop_assert!(a.mul(f, &k).is_zero());
            prop_assert_eq!(k.cols() + rank(f, &a), cols);
            prop_assert_eq!(rank(f, &k), k.cols());
        }
    }
}
