use num_traits::Zero;

use super::mat::Mat;
use super::ring::{Elem, Ring};
use super::snf::snf;
use super::subquotient::Subquotient;
use crate::error::{Error, Result};

/// A finitely presented module with a diagonal presentation.
///
/// Generator `i` has order `orders[i]`: zero for a free generator, otherwise a
/// nonunit (positive over the integers). Elements are coordinate vectors
/// reduced modulo the orders. Over a field every order is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Module {
    ring: Ring,
    orders: Vec<Elem>,
}

impl Module {
    pub fn zero(ring: &Ring) -> Module {
        Module { ring: *ring, orders: Vec::new() }
    }

    pub fn free(ring: &Ring, rank: usize) -> Module {
        Module { ring: *ring, orders: vec![Elem::zero(); rank] }
    }

    /// `R/(order)`; the zero module when `order` is a unit.
    pub fn cyclic(ring: &Ring, order: &Elem) -> Module {
        Module::from_orders(ring, vec![order.clone()])
    }

    /// Builds a module from generator orders, dropping generators of unit order.
    pub fn from_orders(ring: &Ring, orders: Vec<Elem>) -> Module {
        let orders =
            orders.into_iter().map(|o| ring.associate(&ring.normalize(o))).filter(|o| !ring.is_unit(o)).collect();
        Module { ring: *ring, orders }
    }

    /// Normal form of `R^gens / (row space of relations)`, with the quotient map.
    pub fn from_presentation(ring: &Ring, gens: usize, relations: &Mat) -> Result<(Module, Mat)> {
        if relations.cols() != gens {
            return Err(Error::Invalid(format!("relation matrix has {} columns, expected {gens}", relations.cols())));
        }
        let sq = Subquotient::new(ring, gens, &Mat::identity(gens, ring), &relations.transpose());
        let proj = sq.coords_matrix(&Mat::identity(gens, ring)).expect("identity lattice");
        Ok((sq.module.clone(), proj))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn orders(&self) -> &[Elem] {
        &self.orders
    }

    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    pub fn is_zero(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|o| o.is_zero()).count()
    }

    /// Invariant factors in divisibility order (empty over fields).
    pub fn invariant_factors(&self) -> Vec<Elem> {
        self.invariants().1
    }

    /// `(free rank, invariant factors)`: the isomorphism class.
    pub fn invariants(&self) -> (usize, Vec<Elem>) {
        let torsion: Vec<Elem> = self.orders.iter().filter(|o| !o.is_zero()).cloned().collect();
        let mut m = Mat::zeros(torsion.len(), torsion.len());
        for (i, t) in torsion.iter().enumerate() {
            m.set(i, i, t.clone());
        }
        let s = snf(&m, &self.ring);
        let factors = s.diagonal().into_iter().filter(|x| !self.ring.is_unit(x)).collect();
        (self.free_rank(), factors)
    }

    pub fn is_isomorphic(&self, other: &Module) -> bool {
        self.ring == other.ring && self.invariants() == other.invariants()
    }

    /// Presentation matrix (relations × generators).
    pub fn presentation(&self) -> Mat {
        self.relation_columns().transpose()
    }

    /// Relation lattice generators as columns (`order_i e_i` for torsion `i`).
    pub fn relation_columns(&self) -> Mat {
        let tors: Vec<usize> = (0..self.ngens()).filter(|&i| !self.orders[i].is_zero()).collect();
        let mut m = Mat::zeros(self.ngens(), tors.len());
        for (c, &i) in tors.iter().enumerate() {
            m.set(i, c, self.orders[i].clone());
        }
        m
    }

    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.ngens(), "element has wrong length");
        v.iter().zip(&self.orders).map(|(x, o)| self.ring.reduce_mod(&self.ring.normalize(x.clone()), o)).collect()
    }

    /// Reduces every row of `m` modulo the corresponding generator order.
    pub fn reduce_rows(&self, m: &Mat) -> Mat {
        assert_eq!(m.rows(), self.ngens());
        let mut out = m.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, self.ring.reduce_mod(m.get(i, j), &self.orders[i]));
            }
        }
        out
    }

    pub fn is_zero_elem(&self, v: &[Elem]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        assert_eq!(self.ring, other.ring);
        let mut orders = self.orders.clone();
        orders.extend(other.orders.iter().cloned());
        Module { ring: self.ring, orders }
    }

    pub fn direct_sum_all(ring: &Ring, parts: &[&Module]) -> Module {
        let mut orders = Vec::new();
        for p in parts {
            orders.extend(p.orders.iter().cloned());
        }
        Module { ring: *ring, orders }
    }

    /// Tensor product on pairs of generators (first index major). Returns the
    /// module and the list of surviving pairs.
    pub fn tensor(&self, other: &Module) -> (Module, Vec<(usize, usize)>) {
        let mut orders = Vec::new();
        let mut pairs = Vec::new();
        for (i, a) in self.orders.iter().enumerate() {
            for (j, b) in other.orders.iter().enumerate() {
                let g = self.ring.gcd(a, b);
                if !self.ring.is_unit(&g) {
                    orders.push(g);
                    pairs.push((i, j));
                }
            }
        }
        (Module { ring: self.ring, orders }, pairs)
    }

    /// Submodule of elements killed by `a` (the whole module when `a = 0`).
    pub fn torsion_by(&self, a: &Elem) -> Subquotient {
        let scalar = Mat::identity(self.ngens(), &self.ring).scale(a, &self.ring);
        let z = preimage_lattice(&self.ring, &scalar, self);
        Subquotient::new(&self.ring, self.ngens(), &z, &self.relation_columns())
    }

    /// As a subquotient of its own free cover: `coords` reduces vectors.
    pub fn as_subquotient(&self) -> Subquotient {
        Subquotient::new(&self.ring, self.ngens(), &Mat::identity(self.ngens(), &self.ring), &self.relation_columns())
    }
}

/// Generators (columns) of `{x : h x ∈ relations(target)}`.
pub fn preimage_lattice(ring: &Ring, h: &Mat, target: &Module) -> Mat {
    assert_eq!(h.rows(), target.ngens());
    let n = h.cols();
    let full = h.hstack(&target.relation_columns());
    let k = snf(&full, ring).kernel_basis();
    k.block(0, 0, n, k.cols())
}

/// A homomorphism given on generators: column `j` is the image of generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModHom {
    pub source: Module,
    pub target: Module,
    pub matrix: Mat,
}

impl ModHom {
    pub fn new(source: Module, target: Module, matrix: Mat) -> Result<ModHom> {
        if matrix.shape() != (target.ngens(), source.ngens()) {
            return Err(Error::Invalid(format!(
                "matrix shape {:?} does not match {}x{}",
                matrix.shape(),
                target.ngens(),
                source.ngens()
            )));
        }
        let ring = *source.ring();
        for (j, o) in source.orders().iter().enumerate() {
            if o.is_zero() {
                continue;
            }
            let col: Vec<Elem> = matrix.col(j).iter().map(|x| ring.mul(x, o)).collect();
            if !target.is_zero_elem(&col) {
                return Err(Error::Invalid(format!(
                    "generator {j} of order {o} is not sent to an element killed by {o}"
                )));
            }
        }
        let matrix = target.reduce_rows(&matrix);
        Ok(ModHom { source, target, matrix })
    }

    /// Skips the well-definedness audit; callers guarantee it.
    pub(crate) fn new_unchecked(source: Module, target: Module, matrix: Mat) -> ModHom {
        let matrix = target.reduce_rows(&matrix);
        ModHom { source, target, matrix }
    }

    pub fn identity(m: &Module) -> ModHom {
        ModHom::new_unchecked(m.clone(), m.clone(), Mat::identity(m.ngens(), m.ring()))
    }

    pub fn zero(source: &Module, target: &Module) -> ModHom {
        ModHom { source: source.clone(), target: target.clone(), matrix: Mat::zeros(target.ngens(), source.ngens()) }
    }

    pub fn ring(&self) -> &Ring {
        self.source.ring()
    }

    pub fn apply(&self, x: &[Elem]) -> Vec<Elem> {
        self.target.reduce(&self.matrix.apply(x, self.ring()))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModHom) -> ModHom {
        assert_eq!(first.target.ngens(), self.source.ngens());
        let m = self.matrix.mul(&first.matrix, self.ring());
        ModHom::new_unchecked(first.source.clone(), self.target.clone(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> (Module, ModHom) {
        let sq = self.kernel_subquotient();
        let incl = ModHom::new_unchecked(sq.module.clone(), self.source.clone(), sq.lifts.clone());
        (sq.module, incl)
    }

    pub(crate) fn kernel_subquotient(&self) -> Subquotient {
        let ring = *self.ring();
        let z = preimage_lattice(&ring, &self.matrix, &self.target);
        Subquotient::new(&ring, self.source.ngens(), &z, &self.source.relation_columns())
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> (Module, ModHom) {
        let sq = self.cokernel_subquotient();
        let ring = *self.ring();
        let proj = sq.coords_matrix(&Mat::identity(self.target.ngens(), &ring)).expect("whole lattice");
        (sq.module.clone(), ModHom::new_unchecked(self.target.clone(), sq.module, proj))
    }

    pub(crate) fn cokernel_subquotient(&self) -> Subquotient {
        let ring = *self.ring();
        let n = self.target.ngens();
        let b = self.matrix.hstack(&self.target.relation_columns());
        Subquotient::new(&ring, n, &Mat::identity(n, &ring), &b)
    }

    /// Some `x` with `self(x) = y`, or `None` when `y` is not in the image.
    pub fn solve(&self, y: &[Elem]) -> Option<Vec<Elem>> {
        let ring = *self.ring();
        let full = self.matrix.hstack(&self.target.relation_columns());
        let x = snf(&full, &ring).solve(&self.target.reduce(y), &ring)?;
        Some(self.source.reduce(&x[..self.source.ngens()]))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_subquotient().module.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel_subquotient().module.is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

pub fn is_zero(m: &Module) -> bool {
    m.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Ring {
        Ring::Integers
    }

    fn hom(src: &Module, tgt: &Module, rows: &[&[i64]]) -> ModHom {
        ModHom::new(src.clone(), tgt.clone(), Mat::from_i64(&z(), rows, src.ngens())).unwrap()
    }

    #[test]
    fn cokernel_examples() {
        let r = z();
        let zz = Module::free(&r, 1);
        let (c, p) = hom(&zz, &zz, &[&[2]]).cokernel();
        assert_eq!(c.invariants(), (0, vec![r.from_i64(2)]));
        assert!(p.is_surjective());
        assert!(p.compose(&hom(&zz, &zz, &[&[2]])).is_zero());
        let (c, _) = ModHom::identity(&zz).cokernel();
        assert!(c.is_zero());
        let (c, _) = hom(&zz, &zz, &[&[0]]).cokernel();
        assert_eq!(c.invariants(), (1, vec![]));
    }

    #[test]
    fn kernel_examples() {
        let r = z();
        let z1 = Module::free(&r, 1);
        let z2 = Module::free(&r, 2);
        let (k, i) = ModHom::zero(&z2, &z1).kernel();
        assert_eq!(k.invariants(), (2, vec![]));
        assert!(i.is_iso());
        let fold = hom(&z2, &z1, &[&[1, 1]]);
        let (k, i) = fold.kernel();
        assert_eq!(k.invariants(), (1, vec![]));
        let g = i.matrix.col(0);
        assert!(g == vec![r.from_i64(1), r.from_i64(-1)] || g == vec![r.from_i64(-1), r.from_i64(1)]);
        assert!(fold.compose(&i).is_zero());
        let (k, _) = hom(&z1, &z2, &[&[1], &[0]]).kernel();
        assert!(k.is_zero());
    }

    #[test]
    fn solve_examples() {
        let r = z();
        let z1 = Module::free(&r, 1);
        let two = hom(&z1, &z1, &[&[2]]);
        assert!(two.solve(&[r.from_i64(3)]).is_none());
        let z6 = Module::cyclic(&r, &r.from_i64(6));
        let two6 = hom(&z6, &z6, &[&[2]]);
        let x = two6.solve(&[r.from_i64(4)]).unwrap();
        assert_eq!(two6.apply(&x), vec![r.from_i64(4)]);
        // brute force over Z/6: 2x = 4 has solutions 2 and 5
        assert!(x == vec![r.from_i64(2)] || x == vec![r.from_i64(5)]);
        let e = vec![r.from_i64(7)];
        assert_eq!(ModHom::identity(&z1).solve(&e), Some(e));
    }

    #[test]
    fn iso_examples() {
        let r = z();
        let z1 = Module::free(&r, 1);
        assert!(ModHom::identity(&z1).is_iso());
        let two = hom(&z1, &z1, &[&[2]]);
        assert!(two.is_injective() && !two.is_surjective());
        let z3 = Module::cyclic(&r, &r.from_i64(3));
        assert!(hom(&z3, &z3, &[&[2]]).is_iso());
    }

    #[test]
    fn ill_defined_hom_rejected() {
        let r = z();
        let z2 = Module::cyclic(&r, &r.from_i64(2));
        let z1 = Module::free(&r, 1);
        assert!(ModHom::new(z2, z1, Mat::from_i64(&r, &[&[1]], 1)).is_err());
    }

    #[test]
    fn invariants_combine_coprime_orders() {
        let r = z();
        let m = Module::from_orders(&r, vec![r.from_i64(2), r.from_i64(3), r.from_i64(0)]);
        assert_eq!(m.invariants(), (1, vec![r.from_i64(6)]));
        let (t, _) = Module::cyclic(&r, &r.from_i64(2)).tensor(&Module::cyclic(&r, &r.from_i64(3)));
        assert!(t.is_zero());
    }

    #[test]
    fn presentation_normalizes() {
        let r = z();
        let (m, p) = Module::from_presentation(&r, 2, &Mat::from_i64(&r, &[&[2, 4], &[6, 8]], 2)).unwrap();
        assert_eq!(m.invariants(), (0, vec![r.from_i64(2), r.from_i64(4)]));
        assert_eq!(p.shape(), (2, 2));
    }
}
