//! Dense matrices over Q(ζ_M) with exact Gaussian elimination.
//!
//! Vectors are columns; a subspace is given by a matrix whose columns form a
//! basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::cyclo::CycloNum;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    order: u32,
    rows: usize,
    cols: usize,
    data: Vec<CycloNum>,
}

impl Mat {
    pub fn zeros(order: u32, rows: usize, cols: usize) -> Mat {
        Mat { order, rows, cols, data: vec![CycloNum::zero(order); rows * cols] }
    }

    pub fn identity(order: u32, n: usize) -> Mat {
        let mut m = Mat::zeros(order, n, n);
        for i in 0..n {
            m.data[i * n + i] = CycloNum::one(order);
        }
        m
    }

    pub fn scalar(order: u32, n: usize, c: &CycloNum) -> Mat {
        let mut m = Mat::zeros(order, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_fn(order: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CycloNum) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { order, rows, cols, data }
    }

    pub fn from_rows(order: u32, cols: usize, rows: &[Vec<CycloNum>]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Mat { order, rows: rows.len(), cols, data }
    }

    pub fn from_cols(order: u32, rows: usize, cols: &[Vec<CycloNum>]) -> Mat {
        Mat::from_rows(order, rows, cols).transpose()
    }

    pub fn from_ints(order: u32, rows: &[Vec<i64>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let rs: Vec<Vec<CycloNum>> =
            rows.iter().map(|r| r.iter().map(|&x| CycloNum::from_int(order, x)).collect()).collect();
        Mat::from_rows(order, cols, &rs)
    }

    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &CycloNum) {
        if !v.is_zero() {
            let k = i * self.cols + j;
            self.data[k] = &self.data[k] + v;
        }
    }

    pub fn row(&self, i: usize) -> Vec<CycloNum> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<CycloNum> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_mat(&self, j: usize) -> Mat {
        self.select_cols(&[j])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.order, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&CycloNum) -> CycloNum) -> Mat {
        Mat { order: self.order, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &CycloNum) -> Mat {
        if c.is_one() {
            return self.clone();
        }
        self.map(|x| x * c)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.order, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.order, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(self.order, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.add_at(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    pub fn hstack(order: u32, rows: usize, parts: &[&Mat]) -> Mat {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Mat::zeros(order, rows, cols);
        let mut c = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            m.set_block(0, c, p);
            c += p.cols;
        }
        m
    }

    pub fn vstack(order: u32, cols: usize, parts: &[&Mat]) -> Mat {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Mat::zeros(order, rows, cols);
        let mut r = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            m.set_block(r, 0, p);
            r += p.rows;
        }
        m
    }

    pub fn block_diag(order: u32, parts: &[&Mat]) -> Mat {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Mat::zeros(order, rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            m.set_block(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        m
    }

    /// Kronecker product; row index (i, k) ↦ i * b.rows + k.
    pub fn kron(&self, b: &Mat) -> Mat {
        let mut m = Mat::zeros(self.order, self.rows * b.rows, self.cols * b.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        let x = b.get(k, l);
                        if !x.is_zero() {
                            m.set(i * b.rows + k, j * b.cols + l, a * x);
                        }
                    }
                }
            }
        }
        m
    }

    pub fn matmul(&self, b: &Mat) -> Mat {
        assert_eq!(self.cols, b.rows, "matmul shape mismatch {:?} x {:?}", self.shape(), b.shape());
        let mut m = Mat::zeros(self.order, self.rows, b.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let x = b.get(k, j);
                    if !x.is_zero() {
                        m.add_at(i, j, &(a * x));
                    }
                }
            }
        }
        m
    }

    pub fn mat_pow(&self, e: usize) -> Mat {
        let mut acc = Mat::identity(self.order, self.rows);
        for _ in 0..e {
            acc = self.matmul(&acc);
        }
        acc
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            // prefer rational pivots: their inverses are cheap
            let mut best = None;
            for i in r..rows {
                let x = self.get(i, c);
                if !x.is_zero() {
                    if x.as_rational().is_some() {
                        best = Some(i);
                        break;
                    }
                    if best.is_none() {
                        best = Some(i);
                    }
                }
            }
            let Some(p) = best else { continue };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..cols {
                let k = r * cols + j;
                if !self.data[k].is_zero() {
                    self.data[k] = &self.data[k] * &inv;
                }
            }
            let prow: Vec<(usize, CycloNum)> =
                (c..cols).filter(|&j| !self.get(r, j).is_zero()).map(|j| (j, self.get(r, j).clone())).collect();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (j, v) in &prow {
                    let k = i * cols + j;
                    self.data[k] = &self.data[k] - &(&f * v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.rows < self.cols { self.transpose().rref().1.len() } else { self.rref().1.len() }
    }

    /// Basis of {x : A x = 0}, as columns.
    pub fn nullspace(&self) -> Mat {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut n = Mat::zeros(self.order, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            n.set(f, k, CycloNum::one(self.order));
            for (i, &p) in piv.iter().enumerate() {
                let x = r.get(i, f);
                if !x.is_zero() {
                    n.set(p, k, -x);
                }
            }
        }
        n
    }

    /// Basis of {y : y A = 0}, as rows.
    pub fn left_nullspace(&self) -> Mat {
        self.transpose().nullspace().transpose()
    }

    /// Basis of the column space, chosen among the columns of `self`.
    pub fn col_space(&self) -> Mat {
        let (_, piv) = self.rref();
        self.select_cols(&piv)
    }

    /// Some X with A X = B, if one exists.
    pub fn solve(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows, "solve shape mismatch");
        let aug = Mat::hstack(self.order, self.rows, &[self, b]);
        let (r, piv) = aug.rref();
        if piv.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.order, self.cols, b.cols);
        for (i, &p) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Mat::identity(self.order, self.rows))?;
        if self.matmul(&x).is_identity() { Some(x) } else { None }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn trace(&self) -> CycloNum {
        let mut t = CycloNum::zero(self.order);
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn galois(&self, k: i64) -> Mat {
        self.map(|x| x.galois(k))
    }

    pub fn entries(&self) -> &[CycloNum] {
        &self.data
    }
}

/// Basis of the intersection of two column spaces in the same ambient space.
pub fn intersect(a: &Mat, b: &Mat) -> Mat {
    let n = a.rows();
    if a.cols() == 0 || b.cols() == 0 {
        return Mat::zeros(a.order(), n, 0);
    }
    let stacked = Mat::hstack(a.order(), n, &[a, &-b]);
    let ns = stacked.nullspace();
    let coeffs = ns.block(0, 0, a.cols(), ns.cols());
    a.matmul(&coeffs).col_space()
}

/// Basis of the sum of two column spaces.
pub fn span_sum(a: &Mat, b: &Mat) -> Mat {
    Mat::hstack(a.order(), a.rows(), &[a, b]).col_space()
}

/// A quotient V/S with a fixed complement of S spanned by standard vectors.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// V → V/S.
    pub proj: Mat,
    /// V/S → V, a section of `proj`.
    pub lift: Mat,
    /// Basis of S in V.
    pub sub: Mat,
}

impl Quotient {
    pub fn new(order: u32, n: usize, sub: &Mat) -> Quotient {
        let sub = if sub.cols() == 0 { Mat::zeros(order, n, 0) } else { sub.col_space() };
        let k = sub.cols();
        let (_, piv) = sub.transpose().rref();
        let comp: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
        let mut c = Mat::zeros(order, n, comp.len());
        for (j, &i) in comp.iter().enumerate() {
            c.set(i, j, CycloNum::one(order));
        }
        let full = Mat::hstack(order, n, &[&sub, &c]);
        let inv = full.inverse().expect("complement spans");
        let proj = inv.block(k, 0, n - k, n);
        Quotient { proj, lift: c, sub }
    }

    pub fn dim(&self) -> usize {
        self.lift.cols()
    }
}

/// Incremental row reduction of sparse rows, kept in reduced echelon form.
#[derive(Clone, Debug)]
pub struct SparseRref {
    order: u32,
    ncols: usize,
    /// Pivot column ↦ normalized row (sorted by column, pivot entry 1).
    rows: std::collections::BTreeMap<usize, Vec<(usize, CycloNum)>>,
}

fn axpy(row: &[(usize, CycloNum)], c: &CycloNum, other: &[(usize, CycloNum)]) -> Vec<(usize, CycloNum)> {
    // row - c * other
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let ci = row.get(i).map_or(usize::MAX, |x| x.0);
        let cj = other.get(j).map_or(usize::MAX, |x| x.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -&(c * &other[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - &(c * &other[j].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl SparseRref {
    pub fn new(order: u32, ncols: usize) -> SparseRref {
        SparseRref { order, ncols, rows: Default::default() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Normal form of a sorted sparse row modulo the span: the result has no
    /// entries on pivot columns.
    pub fn reduce(&self, mut row: Vec<(usize, CycloNum)>) -> Vec<(usize, CycloNum)> {
        // pivot rows vanish on the other pivot columns, so each step removes
        // one pivot column and only introduces free ones
        while let Some(k) = row.iter().position(|(c, _)| self.rows.contains_key(c)) {
            let c = row[k].1.clone();
            row = axpy(&row, &c, &self.rows[&row[k].0]);
        }
        row
    }

    /// Adds a row; returns whether the rank grew.
    pub fn push(&mut self, row: Vec<(usize, CycloNum)>) -> bool {
        let mut row: Vec<(usize, CycloNum)> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        row.sort_by_key(|x| x.0);
        let row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        let k = row.iter().position(|(_, v)| v.as_rational().is_some()).unwrap_or(0);
        let col = row[k].0;
        let inv = row[k].1.inv().expect("nonzero");
        let row: Vec<(usize, CycloNum)> = row.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
        for other in self.rows.values_mut() {
            if let Ok(i) = other.binary_search_by_key(&col, |x| x.0) {
                let c = other[i].1.clone();
                *other = axpy(other, &c, &row);
            }
        }
        self.rows.insert(col, row);
        true
    }

    pub fn push_dense(&mut self, row: &[CycloNum]) -> bool {
        self.push(row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect())
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Basis of the solution space of the accumulated homogeneous system.
    pub fn nullspace(&self) -> Vec<Vec<CycloNum>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.rows.contains_key(c)).collect();
        let mut pos = vec![usize::MAX; self.ncols];
        for (k, &f) in free.iter().enumerate() {
            pos[f] = k;
        }
        let mut out = vec![vec![CycloNum::zero(self.order); self.ncols]; free.len()];
        for (k, &f) in free.iter().enumerate() {
            out[k][f] = CycloNum::one(self.order);
        }
        for (&p, row) in &self.rows {
            for (c, v) in row {
                if *c != p {
                    out[pos[*c]][p] = -v;
                }
            }
        }
        out
    }

    /// The nullspace basis as sparse vectors, one per free column.
    pub fn nullspace_sparse(&self) -> Vec<Vec<(usize, CycloNum)>> {
        let mut pos = vec![usize::MAX; self.ncols];
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.rows.contains_key(c)).collect();
        for (k, &f) in free.iter().enumerate() {
            pos[f] = k;
        }
        let mut out: Vec<Vec<(usize, CycloNum)>> = free.iter().map(|&f| vec![(f, CycloNum::one(self.order))]).collect();
        for (&p, row) in &self.rows {
            for (c, v) in row {
                if *c != p {
                    out[pos[*c]].push((p, -v));
                }
            }
        }
        for v in out.iter_mut() {
            v.sort_by_key(|x| x.0);
        }
        out
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &Vec<(usize, CycloNum)>)> {
        self.rows.iter()
    }

    pub fn nullspace_mat(&self) -> Mat {
        let ns = self.nullspace();
        Mat::from_cols(self.order, self.ncols, &ns)
    }

    /// Whether a row lies in the span of the rows pushed so far.
    pub fn contains(&self, row: &[(usize, CycloNum)]) -> bool {
        let mut r: Vec<(usize, CycloNum)> = row.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
        r.sort_by_key(|x| x.0);
        self.reduce(r).is_empty()
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.matmul(rhs)
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        Mat {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        Mat {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.map(|x| -x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64) -> CycloNum {
        CycloNum::zeta_pow(20, 5, k, 1).unwrap()
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Mat::from_ints(20, &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let n = m.nullspace();
        assert_eq!(n.cols(), 1);
        assert!(m.matmul(&n).is_zero());
        let l = m.left_nullspace();
        assert_eq!(l.rows(), 1);
        assert!(l.matmul(&m).is_zero());
    }

    #[test]
    fn inverse_with_roots() {
        let m = Mat::from_rows(20, 2, &[vec![z(1), CycloNum::one(20)], vec![CycloNum::one(20), z(2)]]);
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).is_identity());
        assert!(inv.matmul(&m).is_identity());
    }

    #[test]
    fn solve_inconsistent() {
        let a = Mat::from_ints(20, &[vec![1, 1], vec![2, 2]]);
        let b = Mat::from_ints(20, &[vec![1], vec![3]]);
        assert!(a.solve(&b).is_none());
        let b = Mat::from_ints(20, &[vec![1], vec![2]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.matmul(&x), b);
    }

    #[test]
    fn quotient_section() {
        let s = Mat::from_ints(20, &[vec![1], vec![1], vec![0]]);
        let q = Quotient::new(20, 3, &s);
        assert_eq!(q.dim(), 2);
        assert!(q.proj.matmul(&q.lift).is_identity());
        assert!(q.proj.matmul(&s).is_zero());
    }

    #[test]
    fn intersections() {
        let a = Mat::from_ints(20, &[vec![1, 0], vec![0, 1], vec![0, 0]]);
        let b = Mat::from_ints(20, &[vec![1, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(intersect(&a, &b).cols(), 1);
        assert_eq!(span_sum(&a, &b).cols(), 3);
    }

    #[test]
    fn empty_shapes() {
        let m = Mat::zeros(20, 0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.nullspace().cols(), 3);
        let e = Mat::zeros(20, 2, 0);
        assert_eq!(e.nullspace().cols(), 0);
        assert!(Mat::identity(20, 0).inverse().is_some());
    }

    #[test]
    fn sparse_matches_dense() {
        let m = Mat::from_rows(20, 4, &[
            vec![z(1), z(2), CycloNum::zero(20), z(0)],
            vec![z(2), z(4), CycloNum::zero(20), z(1)],
            vec![&z(1) + &z(2), &z(2) + &z(4), CycloNum::zero(20), &z(0) + &z(1)],
        ]);
        let mut s = SparseRref::new(20, 4);
        for i in 0..3 {
            s.push_dense(&m.row(i));
        }
        assert_eq!(s.rank(), m.rank());
        let n = s.nullspace_mat();
        assert_eq!(n.cols(), 2);
        assert!(m.matmul(&n).is_zero());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn mat(n: usize) -> impl Strategy<Value = Mat> {
            prop::collection::vec((-3i64..4, 0i64..5), n * n).prop_map(move |v| {
                Mat::from_fn(20, n, n, |i, j| {
                    let (a, k) = v[i * n + j];
                    z(k).scale_int(a)
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn rank_nullity(m in mat(4)) {
                prop_assert_eq!(m.rank() + m.nullspace().cols(), 4);
                prop_assert!(m.matmul(&m.nullspace()).is_zero());
                prop_assert_eq!(m.rank(), m.transpose().rank());
            }

            #[test]
            fn sparse_rank(m in mat(4)) {
                let mut s = SparseRref::new(20, 4);
                for i in 0..4 {
                    s.push_dense(&m.row(i));
                }
                prop_assert_eq!(s.rank(), m.rank());
                prop_assert!(m.matmul(&s.nullspace_mat()).is_zero());
            }

            #[test]
            fn inverse_roundtrip(m in mat(3)) {
                if let Some(inv) = m.inverse() {
                    prop_assert!(inv.matmul(&m).is_identity());
                } else {
                    prop_assert!(m.rank() < 3);
                }
            }
        }
    }
}
