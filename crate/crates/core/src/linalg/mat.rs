use std::fmt;

use num_traits::Zero;

use super::ring::{elem_to_string, Elem, Ring};

/// Dense row-major matrix of exact ring elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Elem::zero(); rows * cols] }
    }

    pub fn identity(n: usize, ring: &Ring) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>, cols: usize) -> Mat {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Mat { rows: r, cols, data }
    }

    pub fn from_i64(ring: &Ring, rows: &[&[i64]], cols: usize) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| ring.from_i64(v)).collect()).collect(), cols)
    }

    /// Single-column matrix.
    pub fn column(v: Vec<Elem>) -> Mat {
        let n = v.len();
        Mat { rows: n, cols: 1, data: v }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<Elem>]) -> Mat {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat, ring: &Ring) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = ring.add(&out.data[idx], &ring.mul(a, b));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Elem], ring: &Ring) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = Elem::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = ring.add(&acc, &ring.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat, ring: &Ring) -> Mat {
        assert_eq!(self.shape(), other.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat, ring: &Ring) -> Mat {
        assert_eq!(self.shape(), other.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ring.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Elem, ring: &Ring) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| ring.mul(a, c)).collect() }
    }

    pub fn neg(&self, ring: &Ring) -> Mat {
        self.scale(&ring.from_i64(-1), ring)
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(0, self.cols, other);
        m
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut m = Mat::zeros(self.rows + other.rows, self.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, 0, other);
        m
    }

    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        let r = blocks.iter().map(|b| b.rows).sum();
        let c = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zeros(r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            m.paste(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        m
    }

    /// Copies `block` into `self` with its top-left corner at `(i, j)`.
    pub fn paste(&mut self, i: usize, j: usize, block: &Mat) {
        for a in 0..block.rows {
            for b in 0..block.cols {
                self.set(i + a, j + b, block.get(a, b).clone());
            }
        }
    }

    pub fn block(&self, i: usize, j: usize, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for a in 0..rows {
            for b in 0..cols {
                m.set(a, b, self.get(i + a, j + b).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(idx.len(), self.cols);
        for (a, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m.set(a, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (b, &j) in idx.iter().enumerate() {
                m.set(i, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn kron(&self, other: &Mat, ring: &Ring) -> Mat {
        let mut m = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m.set(i * other.rows + k, j * other.cols + l, ring.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        m
    }

    // elementary operations used by the normal form routines

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Elem, ring: &Ring) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = ring.add(self.get(dst, j), &ring.mul(c, s));
            self.set(dst, j, v);
        }
    }

    /// col[dst] += c * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Elem, ring: &Ring) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s.is_zero() {
                continue;
            }
            let v = ring.add(self.get(i, dst), &ring.mul(c, s));
            self.set(i, dst, v);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &Elem, ring: &Ring) {
        for j in 0..self.cols {
            let v = ring.mul(self.get(i, j), c);
            self.set(i, j, v);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: &Elem, ring: &Ring) {
        for i in 0..self.rows {
            let v = ring.mul(self.get(i, j), c);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(elem_to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_kron() {
        let r = Ring::Integers;
        let a = Mat::from_i64(&r, &[&[1, 2], &[3, 4]], 2);
        let id = Mat::identity(2, &r);
        assert_eq!(a.mul(&id, &r), a);
        let k = id.kron(&a, &r);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k.block(2, 2, 2, 2), a);
        assert!(k.block(0, 2, 2, 2).is_zero());
    }
}
