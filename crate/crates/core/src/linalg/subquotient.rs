use num_traits::Zero;

use super::mat::Mat;
use super::module::Module;
use super::ring::{Elem, Ring};
use super::snf::{snf, Snf};

/// A module `Z / B` for lattices `B ⊆ Z ⊆ R^n`, brought into diagonal form.
///
/// `lifts` holds one ambient vector per generator of `module`; `coords`
/// maps ambient vectors lying in `Z` back to module coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ring: Ring,
    ambient: usize,
    zsnf: Snf,
    change: Mat,
    keep: Vec<usize>,
    pub module: Module,
    pub lifts: Mat,
}

impl Subquotient {
    /// `z_gens` and `b_gens` hold generators as columns; `B ⊆ Z` is required.
    pub fn new(ring: &Ring, ambient: usize, z_gens: &Mat, b_gens: &Mat) -> Subquotient {
        assert_eq!(z_gens.rows(), ambient);
        assert_eq!(b_gens.rows(), ambient);
        let zsnf = snf(z_gens, ring);
        let r = zsnf.rank;
        let mut basis = Mat::zeros(ambient, r);
        for i in 0..r {
            let s = zsnf.s.get(i, i);
            for k in 0..ambient {
                basis.set(k, i, ring.mul(zsnf.u_inv.get(k, i), s));
            }
        }
        let mut rel = Mat::zeros(r, b_gens.cols());
        for j in 0..b_gens.cols() {
            let c =
                basis_coords(&zsnf, ring, &b_gens.col(j)).expect("relation lattice must lie inside the cycle lattice");
            for (i, x) in c.into_iter().enumerate() {
                rel.set(i, j, x);
            }
        }
        let rs = snf(&rel, ring);
        let mut keep = Vec::new();
        let mut orders = Vec::new();
        for i in 0..r {
            if i < rs.rank {
                let s = rs.s.get(i, i);
                if !ring.is_unit(s) {
                    keep.push(i);
                    orders.push(ring.associate(s));
                }
            } else {
                keep.push(i);
                orders.push(Elem::zero());
            }
        }
        let module = Module::from_orders(ring, orders);
        let lifts = basis.mul(&rs.u_inv.select_cols(&keep), ring);
        Subquotient { ring: *ring, ambient, zsnf, change: rs.u, keep, module, lifts }
    }

    /// The module itself, seen as a subquotient of its own generators.
    pub fn whole(module: &Module) -> Subquotient {
        let ring = *module.ring();
        let n = module.ngens();
        let id = Mat::identity(n, &ring);
        let zsnf = Snf { u: id.clone(), u_inv: id.clone(), s: id.clone(), v: id.clone(), rank: n };
        Subquotient {
            ring,
            ambient: n,
            zsnf,
            change: id.clone(),
            keep: (0..n).collect(),
            module: module.clone(),
            lifts: id,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Module coordinates of `x`, or `None` if `x` is not in `Z`.
    pub fn coords(&self, x: &[Elem]) -> Option<Vec<Elem>> {
        let b = basis_coords(&self.zsnf, &self.ring, x)?;
        let y = self.change.apply(&b, &self.ring);
        let v: Vec<Elem> = self.keep.iter().map(|&i| y[i].clone()).collect();
        Some(self.module.reduce(&v))
    }

    /// Matrix sending ambient vectors (assumed in `Z`) to module coordinates.
    pub fn coords_matrix(&self, columns: &Mat) -> Option<Mat> {
        let mut out = Mat::zeros(self.module.ngens(), columns.cols());
        for j in 0..columns.cols() {
            let c = self.coords(&columns.col(j))?;
            for (i, x) in c.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        Some(out)
    }

    pub fn lift(&self, y: &[Elem]) -> Vec<Elem> {
        self.lifts.apply(y, &self.ring)
    }
}

fn basis_coords(zsnf: &Snf, ring: &Ring, x: &[Elem]) -> Option<Vec<Elem>> {
    let c = zsnf.u.apply(x, ring);
    let mut out = Vec::with_capacity(zsnf.rank);
    for (i, ci) in c.iter().enumerate() {
        if i < zsnf.rank {
            out.push(ring.divide(ci, zsnf.s.get(i, i))?);
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(out)
}
