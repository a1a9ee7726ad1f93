//! Dense matrices over a prime field.

use alloc::vec::Vec;

use crate::field::FieldSpec;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: alloc::vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(n: usize, c: u64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, f: &FieldSpec, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows);
        let mut r = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = o.row(k);
                let rrow = &mut r.data[i * o.cols..(i + 1) * o.cols];
                for j in 0..o.cols {
                    rrow[j] = (rrow[j] + a * orow[j]) % f.q;
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, f: &FieldSpec, v: &[u64]) -> Vec<u64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| (acc + a * b) % f.q))
            .collect()
    }

    pub fn add(&self, f: &FieldSpec, o: &Mat) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn scale(&self, f: &FieldSpec, c: u64) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn trace(&self, f: &FieldSpec) -> u64 {
        (0..self.rows).fold(0, |a, i| f.add(a, self.get(i, i)))
    }

    pub fn is_scalar(&self) -> Option<u64> {
        let c = self.get(0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) != if i == j { c } else { 0 } {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, f: &FieldSpec) -> Vec<usize> {
        let mut piv = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r {
                    let a = self.get(i, c);
                    if a != 0 {
                        for j in c..self.cols {
                            let v = f.sub(self.get(i, j), f.mul(a, self.get(r, j)));
                            self.set(i, j, v);
                        }
                    }
                }
            }
            piv.push(c);
            r += 1;
        }
        piv
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of `{v : M v = 0}`.
    pub fn nullspace(&self, f: &FieldSpec) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let piv = m.rref(f);
        let mut out = Vec::new();
        let mut is_piv = alloc::vec![false; self.cols];
        for &p in &piv {
            is_piv[p] = true;
        }
        for free in 0..self.cols {
            if is_piv[free] {
                continue;
            }
            let mut v = alloc::vec![0; self.cols];
            v[free] = 1;
            for (r, &p) in piv.iter().enumerate() {
                v[p] = f.neg(m.get(r, free));
            }
            out.push(v);
        }
        out
    }

    pub fn inverse(&self, f: &FieldSpec) -> Option<Mat> {
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let piv = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn det(&self, f: &FieldSpec) -> u64 {
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| m.get(i, c) != 0) else { return 0 };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pv = m.get(c, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for i in c + 1..n {
                let a = f.mul(m.get(i, c), inv);
                if a != 0 {
                    for j in c..n {
                        let v = f.sub(m.get(i, j), f.mul(a, m.get(c, j)));
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(x I - M)`, low degree first, via the
    /// Hessenberg reduction.
    pub fn charpoly(&self, f: &FieldSpec) -> Vec<u64> {
        let n = self.rows;
        let mut h = self.clone();
        // reduce to upper Hessenberg form by similarity
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| h.get(i, c) != 0) else { continue };
            if p != c + 1 {
                for j in 0..n {
                    h.data.swap(p * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + c + 1);
                }
            }
            let inv = f.inv(h.get(c + 1, c));
            for i in c + 2..n {
                let a = f.mul(h.get(i, c), inv);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(h.get(i, j), f.mul(a, h.get(c + 1, j)));
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, c + 1), f.mul(a, h.get(r, i)));
                    h.set(r, c + 1, v);
                }
            }
        }
        // p_k(x) for leading k x k block
        let mut ps: Vec<Vec<u64>> = alloc::vec![alloc::vec![1]];
        for k in 0..n {
            // p_{k+1} = (x - h_kk) p_k - sum_{i<k} h_ik * prod_{j=i+1..k} h_{j,j-1} * p_i
            let mut next = alloc::vec![0u64; k + 2];
            for (d, &c) in ps[k].iter().enumerate() {
                next[d + 1] = f.add(next[d + 1], c);
                next[d] = f.sub(next[d], f.mul(h.get(k, k), c));
            }
            let mut prod = 1u64;
            for i in (0..k).rev() {
                prod = f.mul(prod, h.get(i + 1, i));
                let coef = f.mul(h.get(i, k), prod);
                if coef != 0 {
                    for (d, &c) in ps[i].iter().enumerate() {
                        next[d] = f.sub(next[d], f.mul(coef, c));
                    }
                }
            }
            ps.push(next);
        }
        ps.pop().unwrap()
    }
}

/// Row-reduced basis of the span of `vecs`.
pub fn span_basis(f: &FieldSpec, vecs: &[Vec<u64>], dim: usize) -> Vec<Vec<u64>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let mut m = Mat::from_rows(vecs, dim);
    let r = m.rref(f).len();
    (0..r).map(|i| m.row(i).to_vec()).collect()
}

/// Incrementally maintained echelon basis for spinning vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pub basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }
    /// Reduce `v` against the basis; returns the residual.
    pub fn reduce(&self, f: &FieldSpec, v: &[u64]) -> Vec<u64> {
        let mut w = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let a = w[p];
            if a != 0 {
                for j in 0..w.len() {
                    w[j] = f.sub(w[j], f.mul(a, b[j]));
                }
            }
        }
        w
    }
    /// Insert `v` if independent; returns whether it was.
    pub fn insert(&mut self, f: &FieldSpec, v: &[u64]) -> bool {
        let mut w = self.reduce(f, v);
        let Some(p) = w.iter().position(|&a| a != 0) else { return false };
        let inv = f.inv(w[p]);
        for a in w.iter_mut() {
            *a = f.mul(*a, inv);
        }
        for (b, _) in self.basis.iter_mut().zip(&self.pivots) {
            let a = b[p];
            if a != 0 {
                for j in 0..b.len() {
                    b[j] = f.sub(b[j], f.mul(a, w[j]));
                }
            }
        }
        self.basis.push(w);
        self.pivots.push(p);
        true
    }
    pub fn len(&self) -> usize {
        self.basis.len()
    }
    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
    /// Coordinates of a vector known to lie in the span.
    pub fn coords(&self, v: &[u64]) -> Vec<u64> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }
}
