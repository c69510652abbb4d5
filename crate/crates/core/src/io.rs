//! JSON documents for sites, d-functions, stratifications, complexes and chain maps.
//!
//! Matrices are row-major lists whose entries are integers or strings holding
//! integers or fractions (`"-3"`, `"1/2"`). A matrix for a map `A → B` has one
//! row per generator of `B` and one column per generator of `A`. Values that
//! are left out of a document are zero: modules on unlisted opens, and
//! restriction, differential or component matrices that are not given.
//!
//! Site:
//! ```json
//! {"points": ["o", "c"], "opens": [["o"], ["o", "c"]]}
//! ```
//! d-function (point name to integer, `"+inf"` or `"-inf"`):
//! ```json
//! {"o": 1, "c": 0}
//! ```
//! Stratification:
//! ```json
//! {"strata": [{"points": ["o"], "perversity": 1}, {"points": ["c"], "perversity": 0}]}
//! ```
//! Complex: one entry per degree, missing degrees between listed ones being zero. A value is either `orders` (one per
//! generator, `0` for free, as printed by [`complex_to_json`]) or a general
//! presentation `relations` with one row per relation. `restrictions` are given
//! along covering inclusions and `differential` is the map to the degree below.
//! ```json
//! {"terms": [
//!   {"degree": 1,
//!    "values": [{"open": ["o"], "rank": 1}],
//!    "differential": [{"open": ["o"], "matrix": [[1]]}]},
//!   {"degree": 0,
//!    "values": [{"open": ["o"], "rank": 1}, {"open": ["o", "c"], "rank": 1}],
//!    "restrictions": [{"from": ["o", "c"], "to": ["o"], "matrix": [[1]]}]}
//! ]}
//! ```
//! Chain map: `{"source": <complex>, "target": <complex>, "components":
//! [{"degree": 0, "open": [...], "matrix": [[...]]}]}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chain::{ChainMap, PComplex};
use crate::error::{Error, Result};
use crate::linalg::ring::{elem_to_i64, elem_to_string};
use crate::linalg::{Elem, Mat, Module, Ring, Subquotient};
use crate::presheaf::Presheaf;
use crate::site::{DFunction, ExtInt, FinSpace, OpenId, PointSet, Stratification};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

type MatDoc = Vec<Vec<Scalar>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteDoc {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumDoc {
    pub points: Vec<String>,
    pub perversity: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratificationDoc {
    pub strata: Vec<StratumDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueDoc {
    pub open: Vec<String>,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<MatDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionDoc {
    pub from: Vec<String>,
    pub to: Vec<String>,
    pub matrix: MatDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenMatDoc {
    pub open: Vec<String>,
    pub matrix: MatDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub degree: Scalar,
    #[serde(default)]
    pub values: Vec<ValueDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restrictions: Vec<RestrictionDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<OpenMatDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub degree: i64,
    pub open: Vec<String>,
    pub matrix: MatDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: ComplexDoc,
    pub target: ComplexDoc,
    #[serde(default)]
    pub components: Vec<ComponentDoc>,
}

fn from_str<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn to_pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("documents serialize")
}

pub fn parse_site(text: &str) -> Result<FinSpace> {
    site_from_doc(&from_str(text, "site")?)
}

pub fn site_from_doc(doc: &SiteDoc) -> Result<FinSpace> {
    let mut seen = std::collections::HashSet::new();
    for p in &doc.points {
        if !seen.insert(p) {
            return Err(Error::InvalidSite(format!("duplicate point name {p:?}")));
        }
    }
    let points: Vec<&str> = doc.points.iter().map(String::as_str).collect();
    let opens: Vec<Vec<&str>> = doc.opens.iter().map(|u| u.iter().map(String::as_str).collect()).collect();
    let refs: Vec<&[&str]> = opens.iter().map(Vec::as_slice).collect();
    FinSpace::from_named(&points, &refs)
}

pub fn site_to_doc(s: &FinSpace) -> SiteDoc {
    SiteDoc { points: s.point_names().to_vec(), opens: s.opens().iter().map(|&u| names_of(s, u)).collect() }
}

pub fn site_to_json(s: &FinSpace) -> String {
    to_pretty(&site_to_doc(s))
}

fn names_of(s: &FinSpace, u: PointSet) -> Vec<String> {
    u.points().map(|p| s.point_names()[p].clone()).collect()
}

fn point_set(s: &FinSpace, names: &[String]) -> Result<PointSet> {
    let mut out = PointSet::EMPTY;
    for n in names {
        let p = s.point_index(n).ok_or_else(|| Error::Parse(format!("unknown point {n:?}")))?;
        out = out.union(PointSet::singleton(p));
    }
    Ok(out)
}

fn open_of(s: &FinSpace, names: &[String]) -> Result<OpenId> {
    let u = point_set(s, names)?;
    s.open_id(u).ok_or_else(|| Error::Parse(format!("{} is not a nonempty open", s.format_set(u))))
}

fn ext_of(v: &Scalar) -> Result<ExtInt> {
    match v {
        Scalar::Int(n) => Ok(ExtInt::Fin(*n)),
        Scalar::Text(t) => ExtInt::parse(t),
    }
}

fn ext_to_scalar(e: ExtInt) -> Scalar {
    match e {
        ExtInt::Fin(n) => Scalar::Int(n),
        ExtInt::PosInf => Scalar::Text("+inf".into()),
        ExtInt::NegInf => Scalar::Text("-inf".into()),
    }
}

pub fn parse_dfunction(text: &str, s: &FinSpace) -> Result<DFunction> {
    let doc: BTreeMap<String, Scalar> = from_str(text, "d-function")?;
    let mut values = vec![None; s.npoints()];
    for (name, v) in &doc {
        let p = s.point_index(name).ok_or_else(|| Error::Parse(format!("unknown point {name:?}")))?;
        values[p] = Some(ext_of(v)?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(p, v)| v.ok_or_else(|| Error::Parse(format!("no value for point {:?}", s.point_names()[p]))))
        .collect::<Result<Vec<_>>>()?;
    Ok(DFunction::new(values))
}

pub fn dfunction_to_json(d: &DFunction, s: &FinSpace) -> String {
    let doc: BTreeMap<String, Scalar> =
        (0..s.npoints()).map(|p| (s.point_names()[p].clone(), ext_to_scalar(d.at(p)))).collect();
    to_pretty(&doc)
}

pub fn parse_stratification(text: &str, s: &FinSpace) -> Result<Stratification> {
    let doc: StratificationDoc = from_str(text, "stratification")?;
    let strata = doc.strata.iter().map(|a| point_set(s, &a.points)).collect::<Result<Vec<_>>>()?;
    Stratification::new(s, strata, doc.strata.iter().map(|a| a.perversity).collect())
}

pub fn stratification_to_json(st: &Stratification, s: &FinSpace) -> String {
    let doc = StratificationDoc {
        strata: st
            .strata
            .iter()
            .zip(&st.perversity)
            .map(|(&a, &p)| StratumDoc { points: names_of(s, a), perversity: p })
            .collect(),
    };
    to_pretty(&doc)
}

fn elem_of(v: &Scalar, ring: &Ring) -> Result<Elem> {
    let x = match v {
        Scalar::Int(n) => Elem::from_integer((*n).into()),
        Scalar::Text(t) => t.trim().parse::<Elem>().map_err(|_| Error::Parse(format!("not a number: {t:?}")))?,
    };
    if *ring == Ring::Integers && !x.is_integer() {
        return Err(Error::Parse(format!("{} is not an integer", elem_to_string(&x))));
    }
    Ok(ring.normalize(x))
}

fn elem_to_scalar(x: &Elem) -> Scalar {
    elem_to_i64(x).map(Scalar::Int).unwrap_or_else(|| Scalar::Text(elem_to_string(x)))
}

fn mat_of(doc: &MatDoc, rows: usize, cols: usize, ring: &Ring, what: &dyn Fn() -> String) -> Result<Mat> {
    if doc.is_empty() && (rows == 0 || cols == 0) {
        return Ok(Mat::zeros(rows, cols));
    }
    if doc.len() != rows || doc.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse(format!("{}: expected a {rows}x{cols} matrix", what())));
    }
    let data = doc
        .iter()
        .map(|r| r.iter().map(|v| elem_of(v, ring)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_rows(data, cols))
}

fn mat_to_doc(m: &Mat) -> MatDoc {
    m.to_rows().iter().map(|r| r.iter().map(elem_to_scalar).collect()).collect()
}

/// A value as written in a document, with the passage to its normal form.
#[derive(Clone, Debug)]
struct Pres {
    module: Module,
    proj: Mat,
    lift: Mat,
    relations: Vec<Vec<Elem>>,
}

impl Pres {
    fn zero(ring: &Ring) -> Pres {
        Pres { module: Module::zero(ring), proj: Mat::zeros(0, 0), lift: Mat::zeros(0, 0), relations: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.proj.cols()
    }

    fn from_doc(v: &ValueDoc, ring: &Ring, at: &dyn Fn() -> String) -> Result<Pres> {
        let n = v.rank;
        let rel = match (&v.orders, &v.relations) {
            (Some(_), Some(_)) => return Err(Error::Parse(format!("{}: give orders or relations, not both", at()))),
            (Some(o), None) => {
                if o.len() != n {
                    return Err(Error::Parse(format!("{}: {} orders for rank {n}", at(), o.len())));
                }
                let orders = o.iter().map(|x| elem_of(x, ring)).collect::<Result<Vec<_>>>()?;
                let canonical = orders.iter().all(|a| a.is_zero() || !ring.is_unit(a))
                    && orders.iter().all(|a| *a == ring.associate(a));
                if canonical {
                    let module = Module::from_orders(ring, orders.clone());
                    let id = Mat::identity(n, ring);
                    let relations = orders
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| !a.is_zero())
                        .map(|(i, a)| (0..n).map(|k| if k == i { a.clone() } else { Elem::zero() }).collect())
                        .collect();
                    return Ok(Pres { module, proj: id.clone(), lift: id, relations });
                }
                let mut m = Mat::zeros(n, n);
                for (i, a) in orders.into_iter().enumerate() {
                    m.set(i, i, a);
                }
                m
            }
            (None, Some(r)) => mat_of(r, r.len(), n, ring, &|| format!("{}: relations", at()))?,
            (None, None) => Mat::zeros(0, n),
        };
        let sq = Subquotient::new(ring, n, &Mat::identity(n, ring), &rel.transpose());
        let proj = sq.coords_matrix(&Mat::identity(n, ring)).expect("whole lattice");
        Ok(Pres { module: sq.module.clone(), proj, lift: sq.lifts.clone(), relations: rel.to_rows() })
    }

    /// Rewrites a matrix on document generators in normal-form coordinates,
    /// checking that it respects the relations.
    fn transport(src: &Pres, tgt: &Pres, m: &Mat, ring: &Ring, at: &dyn Fn() -> String) -> Result<Mat> {
        let on_tgt = tgt.proj.mul(m, ring);
        for r in &src.relations {
            if !tgt.module.is_zero_elem(&on_tgt.apply(r, ring)) {
                return Err(Error::Invalid(format!("{}: matrix does not respect the relations", at())));
            }
        }
        Ok(tgt.module.reduce_rows(&on_tgt.mul(&src.lift, ring)))
    }
}

struct Parsed {
    complex: PComplex,
    pres: HashMap<(i64, OpenId), Pres>,
}

fn degree_of(v: &Scalar) -> Result<i64> {
    match v {
        Scalar::Int(n) => Ok(*n),
        Scalar::Text(t) if t.trim().starts_with('-') && t.contains("inf") => {
            Err(Error::Parse("complexes are bounded: degrees must be finite integers".into()))
        }
        Scalar::Text(t) => Err(Error::Parse(format!("degree {t:?} is not an integer"))),
    }
}

fn complex_from_doc(doc: &ComplexDoc, space: &Arc<FinSpace>, ring: Ring) -> Result<Parsed> {
    if let Some(r) = &doc.ring {
        let declared = Ring::parse(r)?;
        if declared != ring {
            return Err(Error::RingMismatch(format!("document is over {declared}, expected {ring}")));
        }
    }
    let s: &FinSpace = space;
    let mut by_degree: BTreeMap<i64, &TermDoc> = BTreeMap::new();
    for t in &doc.terms {
        let n = degree_of(&t.degree)?;
        if by_degree.insert(n, t).is_some() {
            return Err(Error::Parse(format!("degree {n} listed twice")));
        }
    }
    let (lo, hi) = match (by_degree.keys().next(), by_degree.keys().last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Ok(Parsed { complex: PComplex::zero(space.clone(), ring), pres: HashMap::new() }),
    };
    let nop = s.nopens();
    let mut pres: HashMap<(i64, OpenId), Pres> = HashMap::new();
    for (&n, t) in &by_degree {
        for v in &t.values {
            let u = open_of(s, &v.open)?;
            let at = || format!("degree {n}, open {}", s.format_set(s.open(u)));
            let p = Pres::from_doc(v, &ring, &at)?;
            if pres.insert((n, u), p).is_some() {
                return Err(Error::Parse(format!("{}: value listed twice", at())));
            }
        }
    }
    let zero = Pres::zero(&ring);
    let get = |n: i64, u: OpenId| pres.get(&(n, u)).unwrap_or(&zero);
    let mut terms = Vec::new();
    for n in lo..=hi {
        let values: Vec<Module> = (0..nop).map(|u| get(n, u).module.clone()).collect();
        let mut given: HashMap<(OpenId, OpenId), Mat> = HashMap::new();
        if let Some(t) = by_degree.get(&n) {
            for r in &t.restrictions {
                let (u, v) = (open_of(s, &r.from)?, open_of(s, &r.to)?);
                let at =
                    || format!("degree {n}, restriction {} -> {}", s.format_set(s.open(u)), s.format_set(s.open(v)));
                if !s.covering_pairs().contains(&(u, v)) {
                    return Err(Error::Parse(format!("{}: not a covering inclusion", at())));
                }
                let m = mat_of(&r.matrix, get(n, v).rank(), get(n, u).rank(), &ring, &at)?;
                given.insert((u, v), Pres::transport(get(n, u), get(n, v), &m, &ring, &at)?);
            }
        }
        let covering: Vec<((OpenId, OpenId), Mat)> = s
            .covering_pairs()
            .into_iter()
            .map(|(u, v)| {
                let m = given.remove(&(u, v)).unwrap_or_else(|| Mat::zeros(values[v].ngens(), values[u].ngens()));
                ((u, v), m)
            })
            .collect();
        let term = Presheaf::new(space.clone(), ring, values, &covering)
            .map_err(|e| Error::Invalid(format!("degree {n}: {e}")))?;
        terms.push(term);
    }
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let t = by_degree.get(&n);
        let listed = t.map(|t| t.differential.as_slice()).unwrap_or(&[]);
        if n == lo {
            if listed.iter().any(|d| !d.matrix.iter().flatten().all(|x| *x == Scalar::Int(0))) {
                return Err(Error::Parse(format!("degree {n} is the lowest term and has no differential")));
            }
            continue;
        }
        let mut ds: Vec<Mat> =
            (0..nop).map(|u| Mat::zeros(get(n - 1, u).module.ngens(), get(n, u).module.ngens())).collect();
        for d in listed {
            let u = open_of(s, &d.open)?;
            let at = || format!("differential from degree {n} at {}", s.format_set(s.open(u)));
            let m = mat_of(&d.matrix, get(n - 1, u).rank(), get(n, u).rank(), &ring, &at)?;
            ds[u] = Pres::transport(get(n, u), get(n - 1, u), &m, &ring, &at)?;
        }
        diffs.push(ds);
    }
    let complex = PComplex::new(space.clone(), ring, lo, terms, diffs)?;
    Ok(Parsed { complex, pres })
}

pub fn parse_complex(text: &str, space: &Arc<FinSpace>, ring: Ring) -> Result<PComplex> {
    Ok(complex_from_doc(&from_str(text, "complex")?, space, ring)?.complex)
}

pub fn complex_to_doc(x: &PComplex) -> ComplexDoc {
    let s = x.space();
    let mut terms = Vec::new();
    for n in (x.lo()..=x.hi()).rev() {
        let values: Vec<ValueDoc> = (0..s.nopens())
            .filter(|&u| !x.module(n, u).is_zero())
            .map(|u| {
                let m = x.module(n, u);
                let orders = if m.orders().iter().all(|a| a.is_zero()) {
                    None
                } else {
                    Some(m.orders().iter().map(elem_to_scalar).collect())
                };
                ValueDoc { open: names_of(s, s.open(u)), rank: m.ngens(), orders, relations: None }
            })
            .collect();
        let restrictions = s
            .covering_pairs()
            .into_iter()
            .filter(|&(u, v)| !x.res_at(n, u, v).is_zero())
            .map(|(u, v)| RestrictionDoc {
                from: names_of(s, s.open(u)),
                to: names_of(s, s.open(v)),
                matrix: mat_to_doc(x.res_at(n, u, v)),
            })
            .collect();
        let differential = if n > x.lo() {
            (0..s.nopens())
                .filter(|&u| !x.d(n, u).is_zero())
                .map(|u| OpenMatDoc { open: names_of(s, s.open(u)), matrix: mat_to_doc(&x.d(n, u)) })
                .collect()
        } else {
            Vec::new()
        };
        terms.push(TermDoc { degree: Scalar::Int(n), values, restrictions, differential });
    }
    ComplexDoc { ring: Some(x.ring().to_string()), terms }
}

pub fn complex_to_json(x: &PComplex) -> String {
    to_pretty(&complex_to_doc(x))
}

pub fn parse_map(text: &str, space: &Arc<FinSpace>, ring: Ring) -> Result<ChainMap> {
    let doc: MapDoc = from_str(text, "chain map")?;
    let src = complex_from_doc(&doc.source, space, ring)?;
    let tgt = complex_from_doc(&doc.target, space, ring)?;
    let (lo, hi) = (src.complex.lo().min(tgt.complex.lo()), src.complex.hi().max(tgt.complex.hi()));
    let source = src.complex.with_range(lo, hi);
    let target = tgt.complex.with_range(lo, hi);
    let s: &FinSpace = space;
    let zero = Pres::zero(&ring);
    let mut comps: Vec<Vec<Mat>> = (lo..=hi)
        .map(|n| {
            (0..s.nopens()).map(|u| Mat::zeros(target.module(n, u).ngens(), source.module(n, u).ngens())).collect()
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    for c in &doc.components {
        let u = open_of(s, &c.open)?;
        let at = || format!("component in degree {} at {}", c.degree, s.format_set(s.open(u)));
        if !seen.insert((c.degree, u)) {
            return Err(Error::Parse(format!("{}: listed twice", at())));
        }
        if c.degree < lo || c.degree > hi {
            return Err(Error::Parse(format!("{}: outside the complexes", at())));
        }
        let ps = src.pres.get(&(c.degree, u)).unwrap_or(&zero);
        let pt = tgt.pres.get(&(c.degree, u)).unwrap_or(&zero);
        let m = mat_of(&c.matrix, pt.rank(), ps.rank(), &ring, &at)?;
        comps[(c.degree - lo) as usize][u] = Pres::transport(ps, pt, &m, &ring, &at)?;
    }
    ChainMap::new(source, target, comps)
}

pub fn map_to_doc(f: &ChainMap) -> MapDoc {
    let s = f.source.space();
    let (lo, hi) = f.degree_range();
    let mut components = Vec::new();
    for n in lo..=hi {
        for u in 0..s.nopens() {
            let m = f.component(n, u);
            if !m.is_zero() {
                components.push(ComponentDoc { degree: n, open: names_of(s, s.open(u)), matrix: mat_to_doc(&m) });
            }
        }
    }
    MapDoc { source: complex_to_doc(&f.source), target: complex_to_doc(&f.target), components }
}

pub fn map_to_json(f: &ChainMap) -> String {
    to_pretty(&map_to_doc(f))
}

/// `{"free_rank": r, "invariant_factors": [...]}`.
pub fn module_record(m: &Module) -> Value {
    let (r, inv) = m.invariants();
    json!({"free_rank": r, "invariant_factors": inv.iter().map(elem_to_string).collect::<Vec<_>>()})
}

/// Human-readable form such as `Z^2 ⊕ Z/2`, or `0`.
pub fn module_text(m: &Module) -> String {
    let (r, inv) = m.invariants();
    let base = m.ring().to_string();
    let base = match m.ring() {
        Ring::PrimeField(p) => format!("F{p}"),
        _ => base,
    };
    let mut parts = Vec::new();
    if r == 1 {
        parts.push(base.clone());
    } else if r > 1 {
        parts.push(format!("{base}^{r}"));
    }
    parts.extend(inv.iter().map(|a| format!("{base}/{}", elem_to_string(a))));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ⊕ ")
    }
}
