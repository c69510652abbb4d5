//! Smith normal form over the supported Euclidean rings.
//!
//! Pivoting picks the entry of smallest Euclidean norm in the active block,
//! which keeps integer coefficients small on the matrix sizes seen here.

use num_bigint::BigInt;
use num_traits::Zero;

use super::mat::Mat;
use super::ring::{Elem, Ring};

/// `u * m * v = s` with `s` diagonal, `s[i][i] | s[i+1][i+1]`, `u`, `v` invertible.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Mat,
    pub u_inv: Mat,
    pub s: Mat,
    pub v: Mat,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<Elem> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }

    /// Solves `m x = b`; `None` when no solution exists.
    pub fn solve(&self, b: &[Elem], ring: &Ring) -> Option<Vec<Elem>> {
        let c = self.u.apply(b, ring);
        let mut y = vec![Elem::zero(); self.v.rows()];
        for (i, ci) in c.iter().enumerate() {
            if i < self.rank {
                y[i] = ring.divide(ci, self.s.get(i, i))?;
            } else if !ci.is_zero() {
                return None;
            }
        }
        Some(self.v.apply(&y, ring))
    }

    /// Basis of the kernel lattice, one column per basis vector.
    pub fn kernel_basis(&self) -> Mat {
        let idx: Vec<usize> = (self.rank..self.v.cols()).collect();
        self.v.select_cols(&idx)
    }
}

struct Work<'a> {
    ring: &'a Ring,
    s: Mat,
    u: Mat,
    u_inv: Mat,
    v: Mat,
}

impl Work<'_> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, c: &Elem) {
        let r = self.ring;
        self.s.add_row_multiple(dst, src, c, r);
        self.u.add_row_multiple(dst, src, c, r);
        self.u_inv.add_col_multiple(src, dst, &r.neg(c), r);
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &Elem) {
        let r = self.ring;
        self.s.add_col_multiple(dst, src, c, r);
        self.v.add_col_multiple(dst, src, c, r);
    }

    fn scale_row(&mut self, i: usize, unit: &Elem) {
        let r = self.ring;
        let inv = r.inv(unit);
        self.s.scale_row(i, unit, r);
        self.u.scale_row(i, unit, r);
        self.u_inv.scale_col(i, &inv, r);
    }

    fn min_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..self.s.rows() {
            for j in t..self.s.cols() {
                let x = self.s.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let n = self.ring.norm(x);
                if best.as_ref().is_none_or(|(b, _, _)| n < *b) {
                    best = Some((n, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Reduces column `t` below the pivot; returns false if a remainder survived.
    fn clear_column(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.s.rows() {
            if self.s.get(i, t).is_zero() {
                continue;
            }
            let (q, rem) = self.ring.div_rem(self.s.get(i, t), self.s.get(t, t));
            self.add_row(i, t, &self.ring.neg(&q));
            if !rem.is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn clear_row(&mut self, t: usize) -> bool {
        let mut clean = true;
        for j in t + 1..self.s.cols() {
            if self.s.get(t, j).is_zero() {
                continue;
            }
            let (q, rem) = self.ring.div_rem(self.s.get(t, j), self.s.get(t, t));
            self.add_col(j, t, &self.ring.neg(&q));
            if !rem.is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn min_in_column(&self, t: usize) -> usize {
        (t..self.s.rows())
            .filter(|&i| !self.s.get(i, t).is_zero())
            .min_by_key(|&i| self.ring.norm(self.s.get(i, t)))
            .unwrap_or(t)
    }

    fn min_in_row(&self, t: usize) -> usize {
        (t..self.s.cols())
            .filter(|&j| !self.s.get(t, j).is_zero())
            .min_by_key(|&j| self.ring.norm(self.s.get(t, j)))
            .unwrap_or(t)
    }
}

pub fn snf(m: &Mat, ring: &Ring) -> Snf {
    let (rows, cols) = m.shape();
    let mut w = Work {
        ring,
        s: m.clone(),
        u: Mat::identity(rows, ring),
        u_inv: Mat::identity(rows, ring),
        v: Mat::identity(cols, ring),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = w.min_in_block(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            if !w.clear_column(t) {
                let i = w.min_in_column(t);
                w.swap_rows(t, i);
                continue;
            }
            if !w.clear_row(t) {
                let j = w.min_in_row(t);
                w.swap_cols(t, j);
                continue;
            }
            // divisibility of the remaining block
            let pivot = w.s.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !ring.divides(&pivot, w.s.get(i, j))));
            match bad {
                Some(i) => w.add_row(t, i, &ring.one()),
                None => break,
            }
        }
        let unit = ring.unit_normalizer(w.s.get(t, t));
        if unit != ring.one() {
            w.scale_row(t, &unit);
        }
        t += 1;
    }
    Snf { u: w.u, u_inv: w.u_inv, s: w.s, v: w.v, rank: t }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &Mat, ring: &Ring) -> Snf {
        let r = snf(m, ring);
        assert_eq!(r.u.mul(m, ring).mul(&r.v, ring), r.s);
        assert_eq!(r.u.mul(&r.u_inv, ring), Mat::identity(m.rows(), ring));
        for i in 0..r.s.rows() {
            for j in 0..r.s.cols() {
                if i != j || i >= r.rank {
                    assert!(r.s.get(i, j).is_zero());
                }
            }
        }
        let d = r.diagonal();
        for w in d.windows(2) {
            assert!(ring.divides(&w[0], &w[1]));
        }
        r
    }

    #[test]
    fn identity_and_zero() {
        let z = Ring::Integers;
        let r = check(&Mat::identity(2, &z), &z);
        assert_eq!(r.u, Mat::identity(2, &z));
        assert_eq!(r.v, Mat::identity(2, &z));
        let r = check(&Mat::zeros(2, 3), &z);
        assert_eq!(r.rank, 0);
        assert_eq!(r.u, Mat::identity(2, &z));
        assert_eq!(r.v, Mat::identity(3, &z));
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the invariant factors are 2 and 4.
        let z = Ring::Integers;
        let r = check(&Mat::from_i64(&z, &[&[2, 4], &[6, 8]], 2), &z);
        assert_eq!(r.diagonal(), vec![z.from_i64(2), z.from_i64(4)]);
    }

    #[test]
    fn solve_and_kernel() {
        let z = Ring::Integers;
        let m = Mat::from_i64(&z, &[&[1, 1]], 2);
        let r = check(&m, &z);
        let k = r.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k, &z).is_zero());
        let two = Mat::from_i64(&z, &[&[2]], 1);
        let r = snf(&two, &z);
        assert!(r.solve(&[z.from_i64(3)], &z).is_none());
        assert_eq!(r.solve(&[z.from_i64(4)], &z), Some(vec![z.from_i64(2)]));
    }

    #[test]
    fn over_a_field() {
        let f = Ring::PrimeField(3);
        let m = Mat::from_i64(&f, &[&[1, 2], &[2, 1]], 2);
        let r = check(&m, &f);
        assert_eq!(r.rank, 1);
    }
}
