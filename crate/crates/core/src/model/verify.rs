use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{classify, is_presheaf_quasi_iso, tensor_maps, ChainMap};
use crate::linalg::Ring;
use crate::presheaf::free_decomposition;
use crate::random::{random_complex, random_map, rng, MapKind, Params, Rand};
use crate::site::FinSpace;

use super::{
    factor_cof_acyclicfib, gen_cof, has_rlp, is_acyclic_fibration, is_fibration, pushout_product, GenCof, GenKind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomKind {
    PushoutProduct,
    Monoid,
    TwoOfThree,
    LiftingAgreement,
}

impl AxiomKind {
    pub const ALL: [AxiomKind; 4] =
        [AxiomKind::PushoutProduct, AxiomKind::Monoid, AxiomKind::TwoOfThree, AxiomKind::LiftingAgreement];

    pub fn parse(s: &str) -> Option<AxiomKind> {
        match s {
            "pushout_product" => Some(AxiomKind::PushoutProduct),
            "monoid" => Some(AxiomKind::Monoid),
            "two_of_three" => Some(AxiomKind::TwoOfThree),
            "lifting_agreement" => Some(AxiomKind::LiftingAgreement),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomKind::PushoutProduct => "pushout_product",
            AxiomKind::Monoid => "monoid",
            AxiomKind::TwoOfThree => "two_of_three",
            AxiomKind::LiftingAgreement => "lifting_agreement",
        }
    }
}

/// Where and how many random instances to draw. Instance `i` uses seed `seed + i`.
#[derive(Clone, Debug)]
pub struct SampleSpec {
    pub space: Arc<FinSpace>,
    pub ring: Ring,
    pub seed: u64,
    pub instances: usize,
    pub params: Params,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub seed: u64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub kind: AxiomKind,
    pub instances: usize,
    pub passed: usize,
    pub failures: Vec<InstanceResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.instances
    }
}

fn random_gen(spec: &SampleSpec, r: &mut Rand, kind: GenKind) -> GenCof {
    let c = r.gen_range(0..spec.space.nopens());
    let n = spec.params.lo + r.gen_range(-1..=1);
    gen_cof(&spec.space, spec.ring, kind, c, n)
}

fn random_kind(r: &mut Rand) -> GenKind {
    if r.gen_bool(0.5) {
        GenKind::I
    } else {
        GenKind::J
    }
}

fn two_of_three(f: bool, g: bool, gf: bool) -> bool {
    let n = [f, g, gf].iter().filter(|&&b| b).count();
    n != 2
}

/// Runs one seeded instance of an axiom check.
pub fn check_instance(kind: AxiomKind, spec: &SampleSpec, seed: u64) -> InstanceResult {
    let mut r = rng(seed);
    let (pass, detail) = match kind {
        AxiomKind::PushoutProduct => {
            let (k1, k2) = (random_kind(&mut r), random_kind(&mut r));
            let g1 = random_gen(spec, &mut r, k1);
            let g2 = random_gen(spec, &mut r, k2);
            let pp = pushout_product(&g1.realized, &g2.realized).expect("same space and ring");
            let m = &pp.map;
            let (q, _) = crate::chain::cokernel_complex(m);
            let injective = m.is_injective();
            let free = q.terms().iter().all(|t| free_decomposition(t).is_some());
            let acyclic_needed = k1 == GenKind::J || k2 == GenKind::J;
            let acyclic = !acyclic_needed || is_presheaf_quasi_iso(m);
            (
                injective && free && acyclic,
                format!(
                    "{:?}({}, {}) □ {:?}({}, {}): injective={injective} free_cokernel={free} acyclic={acyclic}",
                    k1, g1.open, g1.degree, k2, g2.open, g2.degree
                ),
            )
        }
        AxiomKind::Monoid => {
            let j = random_gen(spec, &mut r, GenKind::J);
            let x = random_complex(&spec.space, spec.ring, &mut r, spec.params);
            let t = tensor_maps(&j.realized, &ChainMap::identity(&x)).expect("same space and ring");
            let ok = is_presheaf_quasi_iso(&t);
            (ok, format!("j({}, {}) ⊗ X quasi-iso={ok}", j.open, j.degree))
        }
        AxiomKind::TwoOfThree => {
            let f = random_map(&spec.space, spec.ring, &mut r, spec.params, MapKind::Generic);
            match factor_cof_acyclicfib(&f) {
                Err(e) => (false, format!("factorization failed: {e}")),
                Ok(fac) => {
                    let a = classify(&fac.first).stalkwise_iso;
                    let b = classify(&fac.second).stalkwise_iso;
                    let c = classify(&f).stalkwise_iso;
                    (two_of_three(a, b, c), format!("first={a} second={b} composite={c}"))
                }
            }
        }
        AxiomKind::LiftingAgreement => {
            let mk = [MapKind::Generic, MapKind::Surjective, MapKind::AcyclicFibration][r.gen_range(0..3)];
            let f = random_map(&spec.space, spec.ring, &mut r, spec.params, mk);
            let (fib, afib) = (is_fibration(&f), is_acyclic_fibration(&f));
            let (rj, ri) = (has_rlp(&f, GenKind::J), has_rlp(&f, GenKind::I));
            (fib == rj && afib == ri, format!("{mk:?}: fibration={fib} rlp_j={rj} acyclic_fibration={afib} rlp_i={ri}"))
        }
    };
    InstanceResult { seed, pass, detail }
}

/// Checks `spec.instances` seeded instances in parallel.
pub fn verify_axiom(kind: AxiomKind, spec: &SampleSpec) -> AxiomReport {
    let results: Vec<InstanceResult> = (0..spec.instances as u64)
        .into_par_iter()
        .map(|i| check_instance(kind, spec, spec.seed.wrapping_add(i)))
        .collect();
    let passed = results.iter().filter(|r| r.pass).count();
    let failures = results.into_iter().filter(|r| !r.pass).collect();
    AxiomReport { kind, instances: spec.instances, passed, failures }
}
