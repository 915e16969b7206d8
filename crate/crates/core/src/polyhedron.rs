//! Closed polyhedra: H/V conversion (double description), Fourier–Motzkin
//! projection, implicit equalities, canonical forms and normal cones.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactlp::{self, Constraint, Extended, LpStatus, MixedSystem};
use crate::linalg::{self, dot, rref, RMatrix, RVector};
use crate::rational::{primitive, Rational};

pub const DIM_CAP: usize = 6;

static DIM_CAP_SETTING: AtomicUsize = AtomicUsize::new(DIM_CAP);

/// Overrides the dimension cap for vertex/facet enumeration (process-wide).
pub fn set_dim_cap(cap: usize) {
    DIM_CAP_SETTING.store(cap, AtomicOrdering::Relaxed);
}

pub fn dim_cap() -> usize {
    DIM_CAP_SETTING.load(AtomicOrdering::Relaxed)
}
pub const CONSTRAINT_CAP: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("{rows} constraints exceed the cap {cap}")]
    ConstraintCap { rows: usize, cap: usize },
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("point is not in the set")]
    PointNotInSet,
    #[error("dimension mismatch")]
    DimensionMismatch,
}

/// `{x : ⟨a_i,x⟩ ≤ b_i, ⟨e_k,x⟩ = d_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HPoly {
    pub dim: usize,
    pub ineq: Vec<Constraint>,
    pub eq: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPoly {
    pub dim: usize,
    pub points: Vec<RVector>,
    pub rays: Vec<RVector>,
}

/// `{Σ λ_i g_i + Σ μ_j l_j : λ ≥ 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalConeRep {
    pub dim: usize,
    pub generators: Vec<RVector>,
    pub lineality: Vec<RVector>,
}

fn zero_row(n: usize) -> RVector {
    vec![Rational::zero(); n]
}

impl HPoly {
    pub fn new(dim: usize, ineq: Vec<Constraint>, eq: Vec<Constraint>) -> Self {
        let p = HPoly { dim, ineq, eq };
        debug_assert!(p.system().check_dims().is_ok());
        p
    }

    pub fn universe(dim: usize) -> Self {
        HPoly { dim, ineq: vec![], eq: vec![] }
    }

    pub fn empty(dim: usize) -> Self {
        HPoly { dim, ineq: vec![Constraint::new(zero_row(dim), -Rational::one())], eq: vec![] }
    }

    pub fn point(x: &[Rational]) -> Self {
        let n = x.len();
        HPoly { dim: n, ineq: vec![], eq: (0..n).map(|i| Constraint::new(linalg::unit(n, i), x[i].clone())).collect() }
    }

    /// Box `lo ≤ x_i ≤ hi`.
    pub fn cube(dim: usize, lo: &Rational, hi: &Rational) -> Self {
        let mut ineq = Vec::new();
        for i in 0..dim {
            ineq.push(Constraint::new(linalg::unit(dim, i), hi.clone()));
            ineq.push(Constraint::new(linalg::neg(&linalg::unit(dim, i)), -lo));
        }
        HPoly { dim, ineq, eq: vec![] }
    }

    pub fn system(&self) -> MixedSystem {
        MixedSystem { dim: self.dim, weak: self.ineq.clone(), strict: vec![], eq: self.eq.clone() }
    }

    /// Relative-interior system: inequalities strict. Meaningful on canonical bases.
    pub fn strict_system(&self) -> MixedSystem {
        MixedSystem { dim: self.dim, weak: vec![], strict: self.ineq.clone(), eq: self.eq.clone() }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.system().satisfied_by(x)
    }

    pub fn is_empty(&self) -> bool {
        exactlp::feasible(&self.system()).is_none()
    }

    pub fn intersect(&self, other: &HPoly) -> HPoly {
        assert_eq!(self.dim, other.dim);
        let mut p = self.clone();
        p.ineq.extend(other.ineq.iter().cloned());
        p.eq.extend(other.eq.iter().cloned());
        p
    }

    pub fn product(&self, other: &HPoly) -> HPoly {
        let (n, m) = (self.dim, other.dim);
        let left = |c: &Constraint| {
            let mut r = c.row.clone();
            r.extend(zero_row(m));
            Constraint::new(r, c.rhs.clone())
        };
        let right = |c: &Constraint| {
            let mut r = zero_row(n);
            r.extend(c.row.iter().cloned());
            Constraint::new(r, c.rhs.clone())
        };
        HPoly {
            dim: n + m,
            ineq: self.ineq.iter().map(left).chain(other.ineq.iter().map(right)).collect(),
            eq: self.eq.iter().map(left).chain(other.eq.iter().map(right)).collect(),
        }
    }

    /// `{x : T x + c ∈ self}` for `T` of shape `self.dim × k`.
    pub fn preimage(&self, t: &RMatrix, c: &[Rational]) -> HPoly {
        assert_eq!(t.nrows(), self.dim);
        let k = t.ncols();
        let pull = |cst: &Constraint| {
            let row: RVector = (0..k).map(|j| (0..self.dim).map(|i| &cst.row[i] * t.get(i, j)).sum()).collect();
            Constraint::new(row, &cst.rhs - &dot(&cst.row, c))
        };
        HPoly { dim: k, ineq: self.ineq.iter().map(pull).collect(), eq: self.eq.iter().map(pull).collect() }
    }

    /// Coordinates reordered: new coordinate `i` is old coordinate `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> HPoly {
        let re = |c: &Constraint| Constraint::new(perm.iter().map(|&j| c.row[j].clone()).collect(), c.rhs.clone());
        HPoly { dim: perm.len(), ineq: self.ineq.iter().map(re).collect(), eq: self.eq.iter().map(re).collect() }
    }

    /// Image under `x ↦ T x + c` (graph then Fourier–Motzkin).
    pub fn image(&self, t: &RMatrix, c: &[Rational]) -> HPoly {
        assert_eq!(t.ncols(), self.dim);
        let (n, p) = (self.dim, t.nrows());
        // variables (x, y) with y = T x + c
        let mut sys = MixedSystem::new(n + p);
        let lift = |cst: &Constraint| {
            let mut r = cst.row.clone();
            r.extend(zero_row(p));
            Constraint::new(r, cst.rhs.clone())
        };
        sys.weak = self.ineq.iter().map(lift).collect();
        sys.eq = self.eq.iter().map(lift).collect();
        for i in 0..p {
            let mut r: RVector = t.row(i).iter().map(|v| -v).collect();
            r.extend(linalg::unit(p, i));
            sys.eq.push(Constraint::new(r, c[i].clone()));
        }
        let keep: Vec<usize> = (n..n + p).collect();
        HPoly::from_system(&project_system(&sys, &keep))
    }

    /// Panics on strict rows.
    pub fn from_system(s: &MixedSystem) -> HPoly {
        assert!(s.strict.is_empty());
        HPoly { dim: s.dim, ineq: s.weak.clone(), eq: s.eq.clone() }
    }

    pub fn project(&self, coords: &[usize]) -> HPoly {
        HPoly::from_system(&project_system(&self.system(), coords))
    }

    /// `other ⊆ self`, decided by one LP per row of `self`.
    pub fn contains_poly(&self, other: &HPoly) -> bool {
        assert_eq!(self.dim, other.dim);
        let sys = other.system();
        let first = exactlp::minimize_quick(&zero_row(self.dim), &sys);
        if first.status == LpStatus::Infeasible {
            return true;
        }
        let below = |row: &RVector, rhs: &Rational| {
            let out = exactlp::maximize(row, &sys).expect("dims");
            match out.value {
                Extended::Finite(v) => v <= *rhs,
                Extended::NegInf => true,
                Extended::PosInf => false,
            }
        };
        self.ineq.iter().all(|c| below(&c.row, &c.rhs)) && self.eq.iter().all(|c| below(&c.row, &c.rhs) && below(&linalg::neg(&c.row), &-&c.rhs))
    }

    pub fn same_set(&self, other: &HPoly) -> bool {
        self.contains_poly(other) && other.contains_poly(self)
    }

    /// Rows of `ineq` that hold with equality on the whole (nonempty) polyhedron.
    pub fn implicit_equalities(&self) -> Result<(Vec<usize>, HPoly), PolyError> {
        let idx = implicit_rows(self).ok_or(PolyError::EmptyPolyhedron)?;
        let canon = self.canonical().ok_or(PolyError::EmptyPolyhedron)?;
        Ok((idx, canon))
    }

    /// `aff P = {x : E x = d}` with `E` of full row rank.
    pub fn affine_hull(&self) -> Result<Vec<Constraint>, PolyError> {
        let c = self.canonical().ok_or(PolyError::EmptyPolyhedron)?;
        Ok(c.eq)
    }

    /// Unique representation of a nonempty polyhedron, `None` when empty:
    /// equalities in RREF (including implicit ones), irredundant primitive
    /// inequalities reduced modulo the equalities, sorted.
    pub fn canonical(&self) -> Option<HPoly> {
        let implicit = implicit_rows(self)?;
        let mut eq = self.eq.clone();
        let mut ineq = Vec::new();
        for (i, c) in self.ineq.iter().enumerate() {
            if implicit.contains(&i) {
                eq.push(c.clone());
            } else {
                ineq.push(c.clone());
            }
        }
        let p = normalize_rows(self.dim, eq, ineq)?;
        Some(remove_redundant(p))
    }

    /// Canonical form for a system already known to be nonempty without implicit
    /// equalities and redundant rows (skips all LPs).
    pub fn renormalized(&self) -> Option<HPoly> {
        normalize_rows(self.dim, self.eq.clone(), self.ineq.clone())
    }

    pub fn to_vrep(&self) -> Result<VPoly, PolyError> {
        check_cap(self.dim)?;
        let n = self.dim;
        // homogenize: a x − b t ≤ 0, t ≥ 0
        let mut rows: Vec<RVector> = Vec::new();
        let mut tcap = zero_row(n + 1);
        tcap[n] = -Rational::one();
        rows.push(tcap);
        let hom = |c: &Constraint, sign: &Rational| {
            let mut r: RVector = c.row.iter().map(|v| v * sign).collect();
            r.push(-(&c.rhs * sign));
            r
        };
        let one = Rational::one();
        let mone = -Rational::one();
        for c in &self.eq {
            rows.push(hom(c, &one));
            rows.push(hom(c, &mone));
        }
        for c in &self.ineq {
            rows.push(hom(c, &one));
        }
        let (lin, rays) = dd_cone(&rows, n + 1);
        let mut points = Vec::new();
        let mut out_rays = Vec::new();
        for r in rays {
            if r[n].is_zero() {
                out_rays.push(r[..n].to_vec());
            } else {
                let inv = r[n].recip();
                points.push(r[..n].iter().map(|v| v * &inv).collect::<RVector>());
            }
        }
        for l in lin {
            debug_assert!(l[n].is_zero());
            let l = l[..n].to_vec();
            out_rays.push(linalg::neg(&l));
            out_rays.push(l);
        }
        if points.is_empty() {
            return Ok(VPoly { dim: n, points: vec![], rays: vec![] });
        }
        points.sort();
        out_rays.sort();
        out_rays.dedup();
        Ok(VPoly { dim: n, points, rays: out_rays })
    }

    pub fn normal_cone_at(&self, x: &[Rational]) -> Result<NormalConeRep, PolyError> {
        if x.len() != self.dim {
            return Err(PolyError::DimensionMismatch);
        }
        if !self.contains(x) {
            return Err(PolyError::PointNotInSet);
        }
        let c = self.canonical().ok_or(PolyError::PointNotInSet)?;
        let mut generators: Vec<RVector> = c.ineq.iter().filter(|r| r.slack(x).is_zero()).map(|r| primitive(&r.row)).collect();
        generators.sort();
        generators.dedup();
        Ok(NormalConeRep { dim: self.dim, generators, lineality: c.eq.iter().map(|r| primitive(&r.row)).collect() })
    }

    pub fn check_caps(&self) -> Result<(), PolyError> {
        check_cap(self.dim)?;
        let rows = self.ineq.len() + self.eq.len();
        if rows > CONSTRAINT_CAP {
            return Err(PolyError::ConstraintCap { rows, cap: CONSTRAINT_CAP });
        }
        Ok(())
    }
}

fn check_cap(dim: usize) -> Result<(), PolyError> {
    let cap = dim_cap();
    if dim > cap {
        Err(PolyError::DimensionCap { dim, cap })
    } else {
        Ok(())
    }
}

impl VPoly {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_hrep(&self) -> Result<HPoly, PolyError> {
        check_cap(self.dim)?;
        let n = self.dim;
        if self.points.is_empty() {
            return Ok(HPoly::empty(n));
        }
        // cone of valid inequalities (a, b): a·p − b ≤ 0, a·r ≤ 0
        let mut rows: Vec<RVector> = Vec::new();
        for p in &self.points {
            let mut r = p.clone();
            r.push(-Rational::one());
            rows.push(r);
        }
        for ray in &self.rays {
            let mut r = ray.clone();
            r.push(Rational::zero());
            rows.push(r);
        }
        let (lin, rays) = dd_cone(&rows, n + 1);
        let eq = lin.into_iter().map(|v| Constraint::new(v[..n].to_vec(), v[n].clone())).collect();
        let ineq = rays.into_iter().filter(|v| !linalg::is_zero_vec(&v[..n])).map(|v| Constraint::new(v[..n].to_vec(), v[n].clone())).collect();
        Ok(normalize_rows(n, eq, ineq).unwrap_or_else(|| HPoly::empty(n)))
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        // only for tests/oracles: membership via the H-representation
        self.to_hrep().map(|h| h.contains(x)).unwrap_or(false)
    }
}

impl NormalConeRep {
    pub fn as_vpoly(&self) -> VPoly {
        let mut rays = self.generators.clone();
        for l in &self.lineality {
            rays.push(l.clone());
            rays.push(linalg::neg(l));
        }
        VPoly { dim: self.dim, points: vec![zero_row(self.dim)], rays }
    }

    pub fn to_hrep(&self) -> Result<HPoly, PolyError> {
        self.as_vpoly().to_hrep()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty() && self.lineality.is_empty()
    }
}

// ---------------------------------------------------------------------------
// canonical forms

/// Normal form without LPs. `None` if the rows are visibly inconsistent.
fn normalize_rows(dim: usize, eq: Vec<Constraint>, ineq: Vec<Constraint>) -> Option<HPoly> {
    let mut aug: Vec<RVector> = eq
        .into_iter()
        .map(|c| {
            let mut r = c.row;
            r.push(c.rhs);
            r
        })
        .collect();
    let pivots = rref(&mut aug, dim);
    if aug[pivots.len()..].iter().any(|r| !r[dim].is_zero()) {
        return None;
    }
    aug.truncate(pivots.len());
    let eqs: Vec<Constraint> = aug
        .iter()
        .map(|r| {
            let p = primitive(r);
            Constraint::new(p[..dim].to_vec(), p[dim].clone())
        })
        .collect();
    let mut rows: Vec<Constraint> = Vec::new();
    for c in ineq {
        let mut r = c.row;
        r.push(c.rhs);
        for (i, &pc) in pivots.iter().enumerate() {
            if !r[pc].is_zero() {
                let f = -&r[pc];
                r = linalg::axpy(&r, &f, &aug[i]);
            }
        }
        if linalg::is_zero_vec(&r[..dim]) {
            if r[dim].is_negative() {
                return None;
            }
            continue;
        }
        let p = primitive(&r);
        rows.push(Constraint::new(p[..dim].to_vec(), p[dim].clone()));
    }
    rows.sort();
    // same normal: keep the tightest
    rows.dedup_by(|later, earlier| later.row == earlier.row);
    Some(HPoly { dim, ineq: rows, eq: eqs })
}

/// Indices of implicit-equality rows, or `None` if the polyhedron is empty.
fn implicit_rows(p: &HPoly) -> Option<Vec<usize>> {
    let n = p.dim;
    let m = p.ineq.len();
    if m == 0 {
        return exactlp::feasible(&p.system()).map(|_| vec![]);
    }
    let mut candidates: Vec<usize> = (0..m).collect();
    let mut first = true;
    loop {
        // max Σ s_j over candidates, a_j x + s_j ≤ b_j, 0 ≤ s_j ≤ 1
        let k = candidates.len();
        let mut sys = MixedSystem::new(n + k);
        for (i, c) in p.ineq.iter().enumerate() {
            let mut r = c.row.clone();
            r.extend(zero_row(k));
            if let Some(pos) = candidates.iter().position(|&j| j == i) {
                r[n + pos] = Rational::one();
            }
            sys.weak.push(Constraint::new(r, c.rhs.clone()));
        }
        for j in 0..k {
            let mut lo = zero_row(n + k);
            lo[n + j] = -Rational::one();
            sys.weak.push(Constraint::new(lo, Rational::zero()));
            sys.weak.push(Constraint::new(linalg::unit(n + k, n + j), Rational::one()));
        }
        for c in &p.eq {
            let mut r = c.row.clone();
            r.extend(zero_row(k));
            sys.eq.push(Constraint::new(r, c.rhs.clone()));
        }
        let mut obj = zero_row(n + k);
        for j in 0..k {
            obj[n + j] = -Rational::one();
        }
        let out = exactlp::minimize_quick(&obj, &sys);
        if out.status == LpStatus::Infeasible {
            debug_assert!(first);
            return None;
        }
        first = false;
        let x = out.primal_witness.unwrap();
        let before = candidates.len();
        let remaining: Vec<usize> = candidates.iter().enumerate().filter(|(pos, _)| x[n + pos].is_zero()).map(|(_, &j)| j).collect();
        candidates = remaining;
        if candidates.len() == before || candidates.is_empty() {
            return Some(candidates);
        }
    }
}

fn remove_redundant(mut p: HPoly) -> HPoly {
    let mut i = 0;
    while i < p.ineq.len() {
        if p.ineq.len() == 1 {
            break;
        }
        let row = p.ineq[i].clone();
        let mut rest = p.clone();
        rest.ineq.remove(i);
        let out = exactlp::maximize(&row.row, &rest.system()).expect("dims");
        let redundant = match out.value {
            Extended::Finite(v) => v <= row.rhs,
            Extended::NegInf => true,
            Extended::PosInf => false,
        };
        if redundant {
            p.ineq.remove(i);
        } else {
            i += 1;
        }
    }
    p
}

// ---------------------------------------------------------------------------
// Fourier–Motzkin

fn normalize_constraint(c: &Constraint) -> Constraint {
    let mut r = c.row.clone();
    r.push(c.rhs.clone());
    let p = primitive(&r);
    let n = c.row.len();
    Constraint::new(p[..n].to_vec(), p[n].clone())
}

fn drop_col(c: &Constraint, j: usize) -> Constraint {
    let mut r = c.row.clone();
    r.remove(j);
    Constraint::new(r, c.rhs.clone())
}

/// System reported for an empty projection.
fn empty_system(dim: usize) -> MixedSystem {
    let mut s = MixedSystem::new(dim);
    s.weak.push(Constraint::new(zero_row(dim), -Rational::one()));
    s
}

/// Trivial-row cleanup. `None` when a row reads `0 ≤ negative` or `0 < nonpositive`.
fn tidy(mut s: MixedSystem) -> Option<MixedSystem> {
    let mut eq = Vec::new();
    for c in s.eq.drain(..) {
        if linalg::is_zero_vec(&c.row) {
            if !c.rhs.is_zero() {
                return None;
            }
        } else {
            eq.push(normalize_constraint(&c));
        }
    }
    let mut weak = Vec::new();
    for c in s.weak.drain(..) {
        if linalg::is_zero_vec(&c.row) {
            if c.rhs.is_negative() {
                return None;
            }
        } else {
            weak.push(normalize_constraint(&c));
        }
    }
    let mut strict = Vec::new();
    for c in s.strict.drain(..) {
        if linalg::is_zero_vec(&c.row) {
            if !c.rhs.is_positive() {
                return None;
            }
        } else {
            strict.push(normalize_constraint(&c));
        }
    }
    weak.sort();
    weak.dedup();
    strict.sort();
    strict.dedup();
    eq.sort();
    eq.dedup();
    // a weak row implied by an identical-normal strict row with smaller or equal rhs
    weak.retain(|w| !strict.iter().any(|st| st.row == w.row && st.rhs <= w.rhs));
    Some(MixedSystem { dim: s.dim, weak, strict, eq })
}

fn prune(s: MixedSystem) -> MixedSystem {
    let dim = s.dim;
    let Some(mut s) = tidy(s) else { return empty_system(dim) };
    if exactlp::feasible(&s).is_none() {
        return empty_system(s.dim);
    }
    // weak rows first, then strict rows
    let mut i = 0;
    while i < s.weak.len() {
        let row = s.weak[i].clone();
        let mut rest = s.clone();
        rest.weak.remove(i);
        // violated: ⟨a,x⟩ > b
        rest.strict.push(Constraint::new(linalg::neg(&row.row), -&row.rhs));
        if exactlp::feasible(&rest).is_none() {
            s.weak.remove(i);
        } else {
            i += 1;
        }
    }
    let mut i = 0;
    while i < s.strict.len() {
        let row = s.strict[i].clone();
        let mut rest = s.clone();
        rest.strict.remove(i);
        // violated: ⟨a,x⟩ ≥ b
        rest.weak.push(Constraint::new(linalg::neg(&row.row), -&row.rhs));
        if exactlp::feasible(&rest).is_none() {
            s.strict.remove(i);
        } else {
            i += 1;
        }
    }
    s
}

fn eliminate(s: &MixedSystem, j: usize) -> MixedSystem {
    let n = s.dim;
    if let Some(k) = s.eq.iter().position(|c| !c.row[j].is_zero()) {
        let e = s.eq[k].clone();
        let sub = |c: &Constraint| -> Constraint {
            if c.row[j].is_zero() {
                return drop_col(c, j);
            }
            let f = -(&c.row[j] / &e.row[j]);
            let row = linalg::axpy(&c.row, &f, &e.row);
            let rhs = &c.rhs + &(&f * &e.rhs);
            drop_col(&Constraint::new(row, rhs), j)
        };
        let mut out = MixedSystem::new(n - 1);
        out.weak = s.weak.iter().map(sub).collect();
        out.strict = s.strict.iter().map(sub).collect();
        out.eq = s.eq.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, c)| sub(c)).collect();
        return out;
    }
    let mut out = MixedSystem::new(n - 1);
    out.eq = s.eq.iter().map(|c| drop_col(c, j)).collect();
    let tagged: Vec<(&Constraint, bool)> = s.weak.iter().map(|c| (c, false)).chain(s.strict.iter().map(|c| (c, true))).collect();
    let pos: Vec<_> = tagged.iter().filter(|(c, _)| c.row[j].is_positive()).collect();
    let negs: Vec<_> = tagged.iter().filter(|(c, _)| c.row[j].is_negative()).collect();
    for (c, strict) in &tagged {
        if c.row[j].is_zero() {
            let d = drop_col(c, j);
            if *strict {
                out.strict.push(d)
            } else {
                out.weak.push(d)
            }
        }
    }
    for (p, ps) in &pos {
        for (q, qs) in &negs {
            let fp = -&q.row[j];
            let fq = p.row[j].clone();
            let row: RVector = p.row.iter().zip(&q.row).map(|(a, b)| &(a * &fp) + &(b * &fq)).collect();
            let rhs = &(&p.rhs * &fp) + &(&q.rhs * &fq);
            let d = drop_col(&Constraint::new(row, rhs), j);
            if *ps || *qs {
                out.strict.push(d)
            } else {
                out.weak.push(d)
            }
        }
    }
    out
}

/// Projection of a mixed system onto the listed coordinates (in that order).
pub fn project_system(s: &MixedSystem, coords: &[usize]) -> MixedSystem {
    let mut cur = s.clone();
    let mut alive: Vec<usize> = (0..s.dim).collect();
    for j in (0..s.dim).rev() {
        if coords.contains(&j) {
            continue;
        }
        let pos = alive.iter().position(|&a| a == j).unwrap();
        cur = eliminate(&cur, pos);
        alive.remove(pos);
        cur = prune(cur);
    }
    if cur.weak.iter().any(|c| linalg::is_zero_vec(&c.row) && c.rhs.is_negative()) {
        return empty_system(coords.len());
    }
    let perm: Vec<usize> = coords.iter().map(|c| alive.iter().position(|a| a == c).unwrap()).collect();
    let re = |c: &Constraint| Constraint::new(perm.iter().map(|&j| c.row[j].clone()).collect(), c.rhs.clone());
    let out = MixedSystem {
        dim: coords.len(),
        weak: cur.weak.iter().map(re).collect(),
        strict: cur.strict.iter().map(re).collect(),
        eq: cur.eq.iter().map(re).collect(),
    };
    if coords.len() == s.dim {
        prune(out)
    } else {
        out
    }
}

// ---------------------------------------------------------------------------
// double description on {z : M z ≤ 0}

#[derive(Clone, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(n: usize) -> Self {
        ZeroSet(vec![0; n.div_ceil(64).max(1)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, o: &ZeroSet) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Lineality basis and extreme rays of `{z ∈ R^d : ⟨m_i, z⟩ ≤ 0}`.
pub fn dd_cone(rows: &[RVector], d: usize) -> (Vec<RVector>, Vec<RVector>) {
    let m = rows.len();
    let mut lin: Vec<RVector> = (0..d).map(|i| linalg::unit(d, i)).collect();
    let mut rays: Vec<(RVector, ZeroSet)> = Vec::new();
    for (i, a) in rows.iter().enumerate() {
        if let Some(k) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut lk = lin.remove(k);
            let mut al = dot(a, &lk);
            if al.is_positive() {
                lk = linalg::neg(&lk);
                al = -al;
            }
            for l in lin.iter_mut() {
                let f = -(&dot(a, l) / &al);
                if !f.is_zero() {
                    *l = primitive(&linalg::axpy(l, &f, &lk));
                }
            }
            for (r, z) in rays.iter_mut() {
                let f = -(&dot(a, r) / &al);
                if !f.is_zero() {
                    *r = primitive(&linalg::axpy(r, &f, &lk));
                }
                z.insert(i);
            }
            let mut z = ZeroSet::new(m);
            for j in 0..i {
                z.insert(j);
            }
            rays.push((primitive(&lk), z));
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|(r, _)| dot(a, r)).collect();
        let mut next: Vec<(RVector, ZeroSet)> = Vec::new();
        for (k, (r, z)) in rays.iter().enumerate() {
            if vals[k].is_zero() {
                let mut z = z.clone();
                z.insert(i);
                next.push((r.clone(), z));
            } else if vals[k].is_negative() {
                next.push((r.clone(), z.clone()));
            }
        }
        let need = d.saturating_sub(lin.len() + 2);
        for (p, (rp, zp)) in rays.iter().enumerate() {
            if !vals[p].is_positive() {
                continue;
            }
            for (q, (rq, zq)) in rays.iter().enumerate() {
                if !vals[q].is_negative() {
                    continue;
                }
                let common = zp.and(zq);
                if common.count() < need {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(o, (_, zo))| o == p || o == q || !common.subset_of(zo));
                if !adjacent {
                    continue;
                }
                let fp = -&vals[q];
                let fq = vals[p].clone();
                let nr: RVector = rp.iter().zip(rq).map(|(x, y)| &(x * &fp) + &(y * &fq)).collect();
                let mut z = common;
                z.insert(i);
                next.push((primitive(&nr), z));
            }
        }
        rays = next;
    }
    let mut out: Vec<RVector> = rays.into_iter().map(|(r, _)| r).collect();
    out.sort();
    out.dedup();
    (lin, out)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct HPolyJson {
    dim: usize,
    #[serde(default)]
    ineq: Vec<Vec<Rational>>,
    #[serde(default)]
    eq: Vec<Vec<Rational>>,
}

fn rows_to_json(cs: &[Constraint]) -> Vec<Vec<Rational>> {
    cs.iter()
        .map(|c| {
            let mut r = c.row.clone();
            r.push(c.rhs.clone());
            r
        })
        .collect()
}

fn rows_from_json(dim: usize, rows: Vec<Vec<Rational>>) -> Result<Vec<Constraint>, String> {
    rows.into_iter()
        .map(|mut r| {
            if r.len() != dim + 1 {
                return Err(format!("row of length {} in dimension {}", r.len(), dim));
            }
            let rhs = r.pop().unwrap();
            Ok(Constraint::new(r, rhs))
        })
        .collect()
}

impl Serialize for HPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HPolyJson { dim: self.dim, ineq: rows_to_json(&self.ineq), eq: rows_to_json(&self.eq) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = HPolyJson::deserialize(d)?;
        let ineq = rows_from_json(j.dim, j.ineq).map_err(serde::de::Error::custom)?;
        let eq = rows_from_json(j.dim, j.eq).map_err(serde::de::Error::custom)?;
        Ok(HPoly { dim: j.dim, ineq, eq })
    }
}

/// Sorted, deduplicated point list (helper for set-like comparisons in tests).
pub fn point_set(v: &[RVector]) -> BTreeSet<RVector> {
    v.iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn c(row: &[i64], rhs: i64) -> Constraint {
        Constraint::new(row.iter().map(|&x| int(x)).collect(), int(rhs))
    }

    fn v(xs: &[i64]) -> RVector {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn square() -> HPoly {
        HPoly::cube(2, &int(0), &int(1))
    }

    #[test]
    fn square_vertices() {
        let vp = square().to_vrep().unwrap();
        assert_eq!(point_set(&vp.points), point_set(&[v(&[0, 0]), v(&[0, 1]), v(&[1, 0]), v(&[1, 1])]));
        assert!(vp.rays.is_empty());
    }

    #[test]
    fn orthant_and_line() {
        let p = HPoly::new(2, vec![c(&[-1, 0], 0), c(&[0, -1], 0)], vec![]);
        let vp = p.to_vrep().unwrap();
        assert_eq!(vp.points, vec![v(&[0, 0])]);
        assert_eq!(point_set(&vp.rays), point_set(&[v(&[1, 0]), v(&[0, 1])]));

        let line = HPoly::new(1, vec![c(&[0], 1)], vec![]);
        let vp = line.to_vrep().unwrap();
        assert_eq!(vp.points, vec![v(&[0])]);
        assert_eq!(point_set(&vp.rays), point_set(&[v(&[1]), v(&[-1])]));
    }

    #[test]
    fn empty_polyhedron_has_no_points() {
        let p = HPoly::new(1, vec![c(&[1], -1), c(&[-1], 0)], vec![]);
        assert!(p.to_vrep().unwrap().is_empty());
        assert!(p.canonical().is_none());
        assert_eq!(p.implicit_equalities(), Err(PolyError::EmptyPolyhedron));
    }

    #[test]
    fn hrep_roundtrip() {
        let h = square().to_vrep().unwrap().to_hrep().unwrap();
        assert_eq!(h, square().canonical().unwrap());
        let seg = VPoly { dim: 2, points: vec![v(&[0, 0]), v(&[1, 0])], rays: vec![] };
        let h = seg.to_hrep().unwrap();
        assert_eq!(h.eq, vec![c(&[0, 1], 0)]);
        assert_eq!(h.ineq.len(), 2);
    }

    #[test]
    fn projections() {
        let p = square().project(&[0]);
        assert!(p.same_set(&HPoly::cube(1, &int(0), &int(1))));

        let mut s = square().strict_system();
        s = project_system(&s, &[0]);
        assert_eq!(s.weak.len(), 0);
        assert_eq!(s.strict.len(), 2);
        assert!(s.satisfied_by(&[q(1, 2)]));
        assert!(!s.satisfied_by(&[int(0)]));

        let wedge = HPoly::new(2, vec![c(&[1, -1], 0), c(&[-1, -1], 0)], vec![]);
        let pr = wedge.project(&[0]);
        assert!(pr.ineq.is_empty() && pr.eq.is_empty());
    }

    #[test]
    fn implicit_equality_examples() {
        let p = HPoly::new(1, vec![c(&[1], 0), c(&[-1], 0)], vec![]);
        let (idx, canon) = p.implicit_equalities().unwrap();
        assert_eq!(idx, vec![0, 1]);
        assert_eq!(canon.eq, vec![c(&[1], 0)]);
        assert!(canon.ineq.is_empty());

        assert!(square().implicit_equalities().unwrap().0.is_empty());

        let tri = HPoly::new(2, vec![c(&[1, 1], 1), c(&[-1, -1], -1), c(&[-1, 0], 0), c(&[0, -1], 0)], vec![]);
        let (idx, canon) = tri.implicit_equalities().unwrap();
        assert_eq!(idx, vec![0, 1]);
        assert_eq!(canon.eq, vec![c(&[1, 1], 1)]);
    }

    #[test]
    fn affine_hulls() {
        let seg = HPoly::new(2, vec![c(&[1, 0], 1), c(&[-1, 0], 0)], vec![c(&[0, 1], 0)]);
        assert_eq!(seg.affine_hull().unwrap(), vec![c(&[0, 1], 0)]);
        assert!(square().affine_hull().unwrap().is_empty());
        let pt = HPoly::point(&[int(1), int(2)]);
        assert_eq!(pt.affine_hull().unwrap(), vec![c(&[1, 0], 1), c(&[0, 1], 2)]);
    }

    #[test]
    fn normal_cones() {
        let n = square().normal_cone_at(&[int(0), int(0)]).unwrap();
        assert_eq!(point_set(&n.generators), point_set(&[v(&[-1, 0]), v(&[0, -1])]));
        let n = square().normal_cone_at(&[q(1, 2), q(1, 2)]).unwrap();
        assert!(n.is_trivial());
        let n = square().normal_cone_at(&[q(1, 4), int(0)]).unwrap();
        assert_eq!(n.generators, vec![v(&[0, -1])]);
        assert_eq!(square().normal_cone_at(&[int(2), int(0)]), Err(PolyError::PointNotInSet));
    }

    #[test]
    fn dimension_cap() {
        let p = HPoly::universe(7);
        assert!(matches!(p.to_vrep(), Err(PolyError::DimensionCap { .. })));
    }

    #[test]
    fn image_of_square_under_sum() {
        let t = RMatrix::from_rows(vec![v(&[1, 1])], 2);
        let img = square().image(&t, &[int(0)]);
        assert!(img.same_set(&HPoly::cube(1, &int(0), &int(2))));
    }
}
