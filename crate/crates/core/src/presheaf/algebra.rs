use super::{Cell, Presheaf, PresheafHom};
use crate::error::Result;
use crate::linalg::{Mat, Module, Subquotient};

/// `⊕ parts`, keeping cyclic-sum data when every part has it.
pub fn direct_sum(parts: &[&Presheaf]) -> Presheaf {
    assert!(!parts.is_empty(), "direct sum of no presheaves needs a space");
    let first = parts[0];
    let ring = *first.ring();
    let n = first.space().nopens();
    let values: Vec<Module> =
        (0..n).map(|u| Module::direct_sum_all(&ring, &parts.iter().map(|p| p.value(u)).collect::<Vec<_>>())).collect();
    let mut p = Presheaf::from_fn(first.space_arc().clone(), ring, values, |u, v| {
        Mat::block_diag(&parts.iter().map(|p| p.res(u, v)).collect::<Vec<_>>())
    });
    let cells: Option<Vec<Cell>> =
        parts.iter().map(|p| p.cells().map(|c| c.to_vec())).collect::<Option<Vec<_>>>().map(|v| v.concat());
    p.set_cells(cells);
    p
}

/// The sum together with its inclusions and projections.
pub fn direct_sum_maps(parts: &[&Presheaf]) -> (Presheaf, Vec<PresheafHom>, Vec<PresheafHom>) {
    let sum = direct_sum(parts);
    let ring = *sum.ring();
    let n = sum.space().nopens();
    let mut incl = Vec::new();
    let mut proj = Vec::new();
    for (k, part) in parts.iter().enumerate() {
        let mut inc = Vec::with_capacity(n);
        let mut pr = Vec::with_capacity(n);
        for u in 0..n {
            let off: usize = parts[..k].iter().map(|p| p.value(u).ngens()).sum();
            let g = part.value(u).ngens();
            let mut i = Mat::zeros(sum.value(u).ngens(), g);
            i.paste(off, 0, &Mat::identity(g, &ring));
            pr.push(i.transpose());
            inc.push(i);
        }
        incl.push(PresheafHom::new_unchecked((*part).clone(), sum.clone(), inc));
        proj.push(PresheafHom::new_unchecked(sum.clone(), (*part).clone(), pr));
    }
    (sum, incl, proj)
}

fn induced(
    sqs: &[Subquotient],
    ambient_res: impl Fn(usize, usize) -> Mat,
    ring: &crate::linalg::Ring,
    u: usize,
    v: usize,
) -> Mat {
    let (su, sv) = (&sqs[u], &sqs[v]);
    let moved = ambient_res(u, v).mul(&su.lifts, ring);
    sv.coords_matrix(&moved).expect("restriction preserves the subquotient")
}

pub(super) fn kernel(h: &PresheafHom) -> (Presheaf, PresheafHom) {
    let src = &h.source;
    let ring = *src.ring();
    let n = src.space().nopens();
    let sqs: Vec<Subquotient> = (0..n).map(|u| h.component_hom(u).kernel_subquotient()).collect();
    let values = sqs.iter().map(|s| s.module.clone()).collect();
    let k = Presheaf::from_fn(src.space_arc().clone(), ring, values, |u, v| {
        induced(&sqs, |u, v| src.res(u, v).clone(), &ring, u, v)
    });
    let incl = sqs.iter().map(|s| s.lifts.clone()).collect();
    let incl = PresheafHom::new_unchecked(k.clone(), src.clone(), incl);
    (k, incl)
}

pub(super) fn cokernel(h: &PresheafHom) -> (Presheaf, PresheafHom) {
    let tgt = &h.target;
    let ring = *tgt.ring();
    let n = tgt.space().nopens();
    let sqs: Vec<Subquotient> = (0..n).map(|u| h.component_hom(u).cokernel_subquotient()).collect();
    let values = sqs.iter().map(|s| s.module.clone()).collect();
    let c = Presheaf::from_fn(tgt.space_arc().clone(), ring, values, |u, v| {
        induced(&sqs, |u, v| tgt.res(u, v).clone(), &ring, u, v)
    });
    let proj = (0..n)
        .map(|u| sqs[u].coords_matrix(&Mat::identity(tgt.value(u).ngens(), &ring)).expect("whole lattice"))
        .collect();
    let proj = PresheafHom::new_unchecked(tgt.clone(), c.clone(), proj);
    (c, proj)
}

/// Matrix of `a ⊗ b` between tensor products presented on generator pairs.
pub(crate) fn kron_pairs(
    a: &Mat,
    b: &Mat,
    src: &[(usize, usize)],
    dst: &[(usize, usize)],
    ring: &crate::linalg::Ring,
) -> Mat {
    let mut m = Mat::zeros(dst.len(), src.len());
    for (c, &(i, j)) in src.iter().enumerate() {
        for (r, &(k, l)) in dst.iter().enumerate() {
            let x = ring.mul(a.get(k, i), b.get(l, j));
            m.set(r, c, x);
        }
    }
    m
}

/// Levelwise tensor product over the coefficient ring.
pub fn tensor(f: &Presheaf, g: &Presheaf) -> Result<Presheaf> {
    f.check_compatible(g)?;
    let ring = *f.ring();
    let space = f.space();
    let n = space.nopens();
    let tensors: Vec<(Module, Vec<(usize, usize)>)> = (0..n).map(|u| f.value(u).tensor(g.value(u))).collect();
    let values = tensors.iter().map(|t| t.0.clone()).collect();
    let mut p = Presheaf::from_fn(f.space_arc().clone(), ring, values, |u, v| {
        kron_pairs(f.res(u, v), g.res(u, v), &tensors[u].1, &tensors[v].1, &ring)
    });
    if let (Some(cf), Some(cg)) = (f.cells(), g.cells()) {
        let mut cells = Vec::new();
        for a in cf {
            for b in cg {
                let meet = space.open(a.open).intersect(space.open(b.open));
                let order = ring.gcd(&a.order, &b.order);
                if !meet.is_empty() && !ring.is_unit(&order) {
                    cells.push(Cell { open: space.open_id(meet).expect("opens meet in an open"), order });
                }
            }
        }
        p.set_cells(Some(cells));
    }
    Ok(p)
}

/// `φ ⊗ ψ : F ⊗ G → F' ⊗ G'`.
pub fn tensor_hom(phi: &PresheafHom, psi: &PresheafHom) -> Result<PresheafHom> {
    let src = tensor(&phi.source, &psi.source)?;
    let dst = tensor(&phi.target, &psi.target)?;
    let ring = *src.ring();
    let comps = (0..src.space().nopens())
        .map(|u| {
            let sp = phi.source.value(u).tensor(psi.source.value(u)).1;
            let dp = phi.target.value(u).tensor(psi.target.value(u)).1;
            kron_pairs(phi.component(u), psi.component(u), &sp, &dp, &ring)
        })
        .collect();
    Ok(PresheafHom::new_unchecked(src, dst, comps))
}

/// The unit isomorphism `F ⊗ R_X → F`.
pub fn tensor_unitor(f: &Presheaf) -> PresheafHom {
    let ring = *f.ring();
    let unit = Presheaf::constant(f.space_arc().clone(), &Module::free(&ring, 1));
    let src = tensor(f, &unit).expect("same space and ring");
    let comps = (0..f.space().nopens()).map(|u| Mat::identity(f.value(u).ngens(), &ring)).collect();
    PresheafHom::new_unchecked(src, f.clone(), comps)
}
