//! Sparse column-major matrices with exact entries.
//!
//! A `Mat` does not remember its ring; every arithmetic operation takes one.
//! Stored entries are nonzero and sorted by row inside each column.

use serde::{Deserialize, Serialize};

use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

/// Coordinate-triplet interchange form, rows first then columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triplets {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, 1));
        }
        m
    }

    /// Builds from column vectors given as `(row, value)` lists; entries are
    /// normalized, merged and sorted.
    pub fn from_columns(ring: Ring, rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Mat {
        let cols = columns.len();
        let mut data = Vec::with_capacity(cols);
        for mut c in columns {
            c.sort_unstable_by_key(|e| e.0);
            let mut out: Vec<(usize, i64)> = Vec::with_capacity(c.len());
            for (r, v) in c {
                assert!(r < rows, "row {r} out of range {rows}");
                match out.last_mut() {
                    Some(last) if last.0 == r => last.1 = ring.add(last.1, v),
                    _ => out.push((r, ring.norm(v))),
                }
            }
            out.retain(|e| e.1 != 0);
            data.push(out);
        }
        Mat { rows, cols, data }
    }

    pub fn from_dense(ring: Ring, rows: usize, cols: usize, entries: &[i64]) -> Mat {
        assert_eq!(entries.len(), rows * cols);
        let columns = (0..cols)
            .map(|j| (0..rows).map(|i| (i, entries[i * cols + j])).filter(|e| e.1 != 0).collect())
            .collect();
        Mat::from_columns(ring, rows, columns)
    }

    pub fn from_triplets(ring: Ring, t: &Triplets) -> Mat {
        let mut columns = vec![Vec::new(); t.cols];
        for &(r, c, v) in &t.entries {
            columns[c].push((r, v));
        }
        Mat::from_columns(ring, t.rows, columns)
    }

    pub fn triplets(&self) -> Triplets {
        let mut entries: Vec<(usize, usize, i64)> = self
            .data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
            .collect();
        entries.sort_unstable();
        Triplets { rows: self.rows, cols: self.cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[(usize, i64)] {
        &self.data[j]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        match self.data[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.data[c][k].1,
            Err(_) => 0,
        }
    }

    /// Overwrites one entry (used by mutation fuzzing and small builders).
    pub fn set(&mut self, ring: Ring, r: usize, c: usize, v: i64) {
        let v = ring.norm(v);
        let col = &mut self.data[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(k) => {
                if v == 0 {
                    col.remove(k);
                } else {
                    col[k].1 = v;
                }
            }
            Err(k) => {
                if v != 0 {
                    col.insert(k, (r, v));
                }
            }
        }
    }

    pub fn to_dense(&self) -> Vec<i64> {
        let mut d = vec![0; self.rows * self.cols];
        for (c, col) in self.data.iter().enumerate() {
            for &(r, v) in col {
                d[r * self.cols + c] = v;
            }
        }
        d
    }

    /// `self * other`.
    pub fn mul(&self, ring: Ring, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut acc = vec![0i64; self.rows];
        let mut touched: Vec<usize> = Vec::new();
        let mut out = Vec::with_capacity(other.cols);
        for bcol in &other.data {
            for &(k, b) in bcol {
                for &(i, a) in &self.data[k] {
                    if acc[i] == 0 {
                        touched.push(i);
                    }
                    acc[i] = ring.add(acc[i], ring.mul(a, b));
                    if acc[i] == 0 {
                        // keep it in `touched`; filtered below
                    }
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let col: Vec<(usize, i64)> = touched
                .iter()
                .filter_map(|&i| {
                    let v = acc[i];
                    acc[i] = 0;
                    (v != 0).then_some((i, v))
                })
                .collect();
            touched.clear();
            out.push(col);
        }
        Mat { rows: self.rows, cols: other.cols, data: out }
    }

    /// Applies the matrix to a dense vector.
    pub fn apply(&self, ring: Ring, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0; self.rows];
        for (c, col) in self.data.iter().enumerate() {
            if x[c] == 0 {
                continue;
            }
            for &(r, v) in col {
                y[r] = ring.add(y[r], ring.mul(v, x[c]));
            }
        }
        y
    }

    pub fn add(&self, ring: Ring, other: &Mat) -> Mat {
        self.combine(ring, other, 1)
    }

    pub fn sub(&self, ring: Ring, other: &Mat) -> Mat {
        self.combine(ring, other, -1)
    }

    fn combine(&self, ring: Ring, other: &Mat, s: i64) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sum");
        let columns = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(b.iter().map(|&(r, v)| (r, ring.mul(s, v))));
                c
            })
            .collect();
        Mat::from_columns(ring, self.rows, columns)
    }

    pub fn scale(&self, ring: Ring, s: i64) -> Mat {
        let columns = self.data.iter().map(|c| c.iter().map(|&(r, v)| (r, ring.mul(s, v))).collect()).collect();
        Mat::from_columns(ring, self.rows, columns)
    }

    pub fn neg(&self, ring: Ring) -> Mat {
        self.scale(ring, -1)
    }

    pub fn transpose(&self) -> Mat {
        let mut data = vec![Vec::new(); self.rows];
        for (c, col) in self.data.iter().enumerate() {
            for &(r, v) in col {
                data[r].push((c, v));
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat { rows: self.rows, cols: idx.len(), data: idx.iter().map(|&j| self.data[j].clone()).collect() }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let data = self
            .data
            .iter()
            .map(|c| c.iter().filter(|e| pos[e.0] != usize::MAX).map(|&(r, v)| (pos[r], v)).collect::<Vec<_>>())
            .map(|mut c: Vec<(usize, i64)>| {
                c.sort_unstable_by_key(|e| e.0);
                c
            })
            .collect();
        Mat { rows: idx.len(), cols: self.cols, data }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(b.iter().map(|&(r, v)| (r + self.rows, v)));
                c
            })
            .collect();
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Assembles a block matrix; `blocks[i][j]` may be `None` for zero.
    pub fn block(row_sizes: &[usize], col_sizes: &[usize], blocks: &[Vec<Option<Mat>>]) -> Mat {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut data = vec![Vec::new(); cols];
        let mut c0 = 0;
        for (bj, &cw) in col_sizes.iter().enumerate() {
            let mut r0 = 0;
            for (bi, &rh) in row_sizes.iter().enumerate() {
                if let Some(m) = &blocks[bi][bj] {
                    assert_eq!((m.rows, m.cols), (rh, cw), "block ({bi},{bj}) has wrong shape");
                    for (c, col) in m.data.iter().enumerate() {
                        data[c0 + c].extend(col.iter().map(|&(r, v)| (r0 + r, v)));
                    }
                }
                r0 += rh;
            }
            c0 += cw;
        }
        Mat { rows, cols, data }
    }

    pub fn block_diag(blocks: &[Mat]) -> Mat {
        let rs: Vec<usize> = blocks.iter().map(|b| b.rows).collect();
        let cs: Vec<usize> = blocks.iter().map(|b| b.cols).collect();
        let grid: Vec<Vec<Option<Mat>>> = (0..blocks.len())
            .map(|i| (0..blocks.len()).map(|j| (i == j).then(|| blocks[i].clone())).collect())
            .collect();
        Mat::block(&rs, &cs, &grid)
    }

    /// Reduces entries into the ring (e.g. integer matrix read mod p).
    pub fn reduce(&self, ring: Ring) -> Mat {
        Mat::from_columns(ring, self.rows, self.data.clone())
    }

    pub fn max_abs(&self) -> i64 {
        self.data.iter().flatten().map(|e| e.1.abs()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let z = Ring::Integers;
        let a = Mat::from_dense(z, 2, 3, &[1, 2, 0, 0, -1, 3]);
        let b = Mat::from_dense(z, 3, 2, &[1, 0, 0, 1, 2, 2]);
        let c = a.mul(z, &b);
        assert_eq!(c.to_dense(), vec![1, 2, 6, 5]);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.mul(z, &Mat::identity(3)), a);
    }

    #[test]
    fn triplets_round_trip_sorted() {
        let r = Ring::PrimeField(5);
        let a = Mat::from_dense(r, 2, 2, &[0, 3, 4, 0]);
        let t = a.triplets();
        assert_eq!(t.entries, vec![(0, 1, 3), (1, 0, 4)]);
        assert_eq!(Mat::from_triplets(r, &t), a);
    }

    #[test]
    fn cancellation_drops_entries() {
        let r = Ring::F2;
        let a = Mat::from_dense(r, 1, 2, &[1, 1]);
        let b = Mat::from_dense(r, 2, 1, &[1, 1]);
        assert!(a.mul(r, &b).is_zero());
    }
}
