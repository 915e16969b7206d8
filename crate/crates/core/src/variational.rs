//! Normal cones, subdifferentials, coderivatives and optimal value functions.

use serde::{Deserialize, Serialize};

use crate::exactlp::{Constraint, Extended, MixedSystem};
use crate::linalg::{self, dot, RMatrix, RVector};
use crate::ncset::{ri_meet, NCSet, NcError};
use crate::plfunc::{FnError, PLFunction};
use crate::polyhedron::{project_system, HPoly, NormalConeRep, PolyError};
use crate::rational::Rational;
use crate::svmap::SVMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VarError {
    #[error(transparent)]
    Func(#[from] FnError),
    #[error("point is not in the set")]
    PointNotInSet,
    #[error("point is not in the graph")]
    PointNotInGraph,
    #[error("function value is not finite at the query point")]
    ValueNotFinite,
    #[error("objective is not proper")]
    ImproperObjective,
    #[error("solution map is empty at the query point; the subdifferential formula is not asserted")]
    EmptySolutionMap,
    #[error("qualification condition ri(dom f) ∩ ri(gph F) ≠ ∅ fails")]
    QCViolated,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl From<NcError> for VarError {
    fn from(e: NcError) -> Self {
        VarError::Func(FnError::Set(e))
    }
}

impl From<PolyError> for VarError {
    fn from(e: PolyError) -> Self {
        VarError::Func(FnError::from(e))
    }
}

fn dims(expected: usize, got: usize) -> Result<(), VarError> {
    if expected == got {
        Ok(())
    } else {
        Err(VarError::DimensionMismatch { expected, got })
    }
}

/// `∂φ(x̄)`, a closed polyhedron (possibly empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdifferential {
    pub set: HPoly,
}

impl Subdifferential {
    pub fn contains(&self, v: &[Rational]) -> bool {
        self.set.contains(v)
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn same_set(&self, other: &Subdifferential) -> bool {
        let (a, b) = (self.set.is_empty(), other.set.is_empty());
        if a || b {
            return a == b;
        }
        self.set.same_set(&other.set)
    }
}

/// `N(x̄; Ω)`; taken on the closure since `sup_Ω ⟨v, ·⟩ = sup_{cl Ω} ⟨v, ·⟩`.
pub fn normal_cone(omega: &NCSet, x: &[Rational]) -> Result<NormalConeRep, VarError> {
    dims(omega.dim(), x.len())?;
    if !omega.contains(x) {
        return Err(VarError::PointNotInSet);
    }
    Ok(omega.closure()?.normal_cone_at(x)?)
}

/// `{u : (u, s) ∈ N}` for a fixed trailing block `s`.
fn cone_slice(cone: &NormalConeRep, tail: &[Rational]) -> Result<HPoly, VarError> {
    let d = cone.dim;
    let k = d - tail.len();
    let h = cone.to_hrep()?;
    let mut t = RMatrix::zeros(d, k);
    for i in 0..k {
        t.set(i, i, Rational::one());
    }
    let mut c = linalg::zeros(k);
    c.extend(tail.iter().cloned());
    let pre = h.preimage(&t, &c);
    Ok(pre.canonical().unwrap_or_else(|| HPoly::empty(k)))
}

/// Finite value of `f` at `x`, or `ValueNotFinite`.
pub fn finite_value(f: &PLFunction, x: &[Rational]) -> Result<Rational, VarError> {
    match f.eval(x)? {
        Extended::Finite(v) => Ok(v),
        _ => Err(VarError::ValueNotFinite),
    }
}

/// `∂f(x̄) = {v : (v, −1) ∈ N((x̄, f(x̄)); epi f)}`.
pub fn subdifferential(f: &PLFunction, x: &[Rational]) -> Result<Subdifferential, VarError> {
    dims(f.n, x.len())?;
    let fx = finite_value(f, x)?;
    let mut pt = x.to_vec();
    pt.push(fx);
    let n = normal_cone(&f.epi, &pt)?;
    Ok(Subdifferential { set: cone_slice(&n, &[-Rational::one()])? })
}

/// `∂f(x̄)` from the subgradient inequality on the generators of `cl epi f`:
/// `⟨v, p_x − x̄⟩ ≤ p_λ − f(x̄)` for points and `⟨v, r_x⟩ ≤ r_λ` for rays.
pub fn subdifferential_by_generators(f: &PLFunction, x: &[Rational]) -> Result<Subdifferential, VarError> {
    dims(f.n, x.len())?;
    let fx = finite_value(f, x)?;
    let n = f.n;
    let v = f.generators()?;
    let mut ineq = Vec::new();
    for p in &v.points {
        let row = linalg::sub(&p[..n], x);
        ineq.push(Constraint::new(row, &p[n] - &fx));
    }
    for r in &v.rays {
        ineq.push(Constraint::new(r[..n].to_vec(), r[n].clone()));
    }
    let h = HPoly::new(n, ineq, vec![]);
    Ok(Subdifferential { set: h.canonical().unwrap_or_else(|| HPoly::empty(n)) })
}

/// Subgradient inequality for one candidate `v` on all generators.
pub fn is_subgradient(f: &PLFunction, x: &[Rational], v: &[Rational]) -> Result<bool, VarError> {
    let fx = finite_value(f, x)?;
    let n = f.n;
    let g = f.generators()?;
    let pts = g.points.iter().all(|p| dot(v, &linalg::sub(&p[..n], x)) <= &p[n] - &fx);
    let rays = g.rays.iter().all(|r| dot(v, &r[..n]) <= r[n]);
    Ok(pts && rays)
}

/// `D*F(x̄, ȳ)(v) = {u : (u, −v) ∈ N((x̄, ȳ); gph F)}`.
pub fn coderivative(f: &SVMap, x: &[Rational], y: &[Rational], v: &[Rational]) -> Result<HPoly, VarError> {
    dims(f.n, x.len())?;
    dims(f.p, y.len())?;
    dims(f.p, v.len())?;
    let mut pt = x.to_vec();
    pt.extend(y.iter().cloned());
    let n = match normal_cone(&f.graph, &pt) {
        Err(VarError::PointNotInSet) => return Err(VarError::PointNotInGraph),
        other => other?,
    };
    cone_slice(&n, &linalg::neg(v))
}

/// `μ(x) = inf{f(x, y) : y ∈ F(x)}` with its qualification flag.
#[derive(Clone, Debug)]
pub struct OVFInstance {
    pub f: PLFunction,
    pub map: SVMap,
    pub mu: PLFunction,
    /// `ri(dom f) ∩ ri(gph F) ≠ ∅`
    pub qc: bool,
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

/// `(epi f) ∩ (gph F × R)` in coordinates `(x, y, λ)`.
fn joint(f: &PLFunction, map: &SVMap) -> NCSet {
    let (n, p) = (map.n, map.p);
    let lifted = map.graph.cylinder(n + p + 1, &range(0, n + p));
    f.epi.intersect_pointwise(&lifted, false)
}

pub fn build_ovf(f: &PLFunction, map: &SVMap) -> Result<OVFInstance, VarError> {
    dims(map.n + map.p, f.n)?;
    if !f.is_proper() {
        return Err(VarError::ImproperObjective);
    }
    let (n, p) = (map.n, map.p);
    let qc = ri_meet(&f.dom(), &map.graph)?;
    let mut keep = range(0, n);
    keep.push(n + p);
    let shadow = joint(f, map).project(&keep);
    let mut mu = PLFunction::closing_slices(n, &shadow);
    if qc {
        mu.epi = mu.epi.assume_valid();
    }
    Ok(OVFInstance { f: f.clone(), map: map.clone(), mu, qc })
}

impl OVFInstance {
    pub fn n(&self) -> usize {
        self.map.n
    }

    pub fn p(&self) -> usize {
        self.map.p
    }

    /// `S(x̄) = {y ∈ F(x̄) : f(x̄, y) = μ(x̄)}`.
    pub fn solution_map(&self, x: &[Rational]) -> Result<NCSet, VarError> {
        dims(self.n(), x.len())?;
        let m = finite_value(&self.mu, x)?;
        let (n, p) = (self.n(), self.p());
        let mut t = RMatrix::zeros(n + p + 1, p);
        for i in 0..p {
            t.set(n + i, i, Rational::one());
        }
        let mut c = x.to_vec();
        c.extend(linalg::zeros(p));
        c.push(m);
        let pieces = joint(&self.f, &self.map).pieces().iter().filter_map(|q| q.preimage(&t, &c)).collect();
        Ok(NCSet::from_ro(p, pieces, false))
    }

    pub fn mu_subdifferential(&self, x: &[Rational]) -> Result<Subdifferential, VarError> {
        subdifferential(&self.mu, x)
    }

    /// `⋃ [u + D*F(x̄, ȳ)(v)]` over `(u, v) ∈ ∂f(x̄, ȳ)`, as one projection.
    pub fn rhs_formula(&self, x: &[Rational], y: &[Rational]) -> Result<HPoly, VarError> {
        let (n, p) = (self.n(), self.p());
        dims(n, x.len())?;
        dims(p, y.len())?;
        let mut xy = x.to_vec();
        xy.extend(y.iter().cloned());
        let fxy = finite_value(&self.f, &xy)?;
        let mut xyl = xy.clone();
        xyl.push(fxy);
        let n1 = normal_cone(&self.f.epi, &xyl)?.to_hrep()?;
        let n2 = match normal_cone(&self.map.graph, &xy) {
            Err(VarError::PointNotInSet) => return Err(VarError::PointNotInGraph),
            other => other?,
        }
        .to_hrep()?;
        // variables (u, v, w, s)
        let total = 3 * n + p;
        let (u0, v0, w0, s0) = (0, n, n + p, 2 * n + p);
        let mut sys = MixedSystem::new(total);
        let mut push = |c: &Constraint, map: &dyn Fn(usize) -> (usize, Rational), eq: bool| {
            let mut row = linalg::zeros(total);
            let mut rhs = c.rhs.clone();
            for (j, a) in c.row.iter().enumerate() {
                let (col, sign) = map(j);
                if col == usize::MAX {
                    rhs -= a * &sign;
                } else {
                    row[col] += a * &sign;
                }
            }
            let k = Constraint::new(row, rhs);
            if eq {
                sys.eq.push(k)
            } else {
                sys.weak.push(k)
            }
        };
        // (u, v, −1) ∈ N1: the λ entry becomes a constant −1
        let m1 = |j: usize| -> (usize, Rational) {
            if j < n {
                (u0 + j, Rational::one())
            } else if j < n + p {
                (v0 + j - n, Rational::one())
            } else {
                (usize::MAX, -Rational::one())
            }
        };
        // (w, −v) ∈ N2
        let m2 = |j: usize| -> (usize, Rational) {
            if j < n {
                (w0 + j, Rational::one())
            } else {
                (v0 + j - n, -Rational::one())
            }
        };
        for c in &n1.ineq {
            push(c, &m1, false);
        }
        for c in &n1.eq {
            push(c, &m1, true);
        }
        for c in &n2.ineq {
            push(c, &m2, false);
        }
        for c in &n2.eq {
            push(c, &m2, true);
        }
        for i in 0..n {
            let mut row = linalg::zeros(total);
            row[s0 + i] = Rational::one();
            row[u0 + i] = -Rational::one();
            row[w0 + i] = -Rational::one();
            sys.eq.push(Constraint::new(row, Rational::zero()));
        }
        let proj = project_system(&sys, &range(s0, s0 + n));
        let h = HPoly::from_system(&proj);
        Ok(h.canonical().unwrap_or_else(|| HPoly::empty(n)))
    }

    /// Both sides of the subdifferential formula for `μ` at `x̄` with `ȳ ∈ S(x̄)`.
    pub fn ovf_subdifferential(&self, x: &[Rational], y: &[Rational]) -> Result<OvfSubdiffReport, VarError> {
        if !self.qc {
            return Err(VarError::QCViolated);
        }
        let s = self.solution_map(x)?;
        if s.is_empty() {
            return Err(VarError::EmptySolutionMap);
        }
        dims(self.p(), y.len())?;
        if !s.contains(y) {
            return Err(VarError::PointNotInSet);
        }
        let lhs = self.mu_subdifferential(x)?;
        let rhs = Subdifferential { set: self.rhs_formula(x, y)? };
        let equal = lhs.same_set(&rhs);
        Ok(OvfSubdiffReport { lhs: lhs.set, rhs: rhs.set, equal })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OvfSubdiffReport {
    pub lhs: HPoly,
    pub rhs: HPoly,
    pub equal: bool,
}

/// Identity `∂φ(x̄) = D*E_φ(x̄, φ(x̄))(1)`.
pub fn subdiff_matches_coderivative(f: &PLFunction, x: &[Rational]) -> Result<bool, VarError> {
    let sd = subdifferential(f, x)?;
    let fx = finite_value(f, x)?;
    let cd = coderivative(&f.epigraphical_map(), x, &[fx], &[Rational::one()])?;
    Ok(sd.same_set(&Subdifferential { set: cd }))
}

/// First point of `S(x̄)`, for callers that need some `ȳ`.
pub fn some_solution(inst: &OVFInstance, x: &[Rational]) -> Result<Option<RVector>, VarError> {
    let s = inst.solution_map(x)?;
    Ok(s.pieces().first().map(|p| p.witness()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn c(row: &[i64], rhs: i64) -> Constraint {
        Constraint::new(row.iter().map(|&x| int(x)).collect(), int(rhs))
    }

    fn abs() -> PLFunction {
        PLFunction::max_affine(1, &[(vec![int(1)], int(0)), (vec![int(-1)], int(0))], &NCSet::open(&HPoly::universe(1))).unwrap()
    }

    fn strip() -> SVMap {
        let g = HPoly::new(2, vec![c(&[1, 0], 2), c(&[-1, 0], 0), c(&[1, -1], 0), c(&[-1, 1], 1)], vec![]);
        SVMap::from_closed_graph(1, 1, &g).unwrap()
    }

    fn ray_from(a: i64) -> HPoly {
        HPoly::new(1, vec![c(&[-1], -a)], vec![])
    }

    fn omega_b() -> NCSet {
        let s = HPoly::cube(2, &int(0), &int(1));
        let mut pieces: Vec<HPoly> = crate::ncset::faces(&s);
        pieces.retain(|f| !(f.eq.len() == 1 && f.contains(&[q(1, 2), int(0)])));
        let mut left = s.clone();
        left.eq.push(c(&[0, 1], 0));
        left.ineq.push(Constraint::new(vec![int(1), int(0)], q(1, 2)));
        let mut right = s.clone();
        right.eq.push(c(&[0, 1], 0));
        right.ineq.push(Constraint::new(vec![int(-1), int(0)], q(-1, 2)));
        pieces.push(left);
        pieces.push(right);
        NCSet::from_pieces(2, &pieces).validate().unwrap()
    }

    #[test]
    fn normal_cones() {
        let o = omega_b();
        let n = normal_cone(&o, &[q(1, 4), int(0)]).unwrap();
        assert_eq!(n.generators, vec![vec![int(0), int(-1)]]);
        assert!(n.lineality.is_empty());
        assert!(normal_cone(&o, &[q(1, 2), q(1, 2)]).unwrap().is_trivial());
        assert_eq!(normal_cone(&o, &[q(1, 2), int(0)]), Err(VarError::PointNotInSet));
    }

    #[test]
    fn subdifferentials() {
        let f = abs();
        let s = subdifferential(&f, &[int(0)]).unwrap();
        assert!(s.set.same_set(&HPoly::cube(1, &int(-1), &int(1))));
        assert!(s.same_set(&subdifferential_by_generators(&f, &[int(0)]).unwrap()));
        let s = subdifferential(&f, &[int(1)]).unwrap();
        assert!(s.set.same_set(&HPoly::point(&[int(1)])));
        assert!(subdiff_matches_coderivative(&f, &[int(0)]).unwrap());

        let dom = NCSet::from_faces(&HPoly::cube(1, &int(-1), &int(1)), &[vec![0]]).unwrap();
        let (r, _) = f.restrict(&dom).unwrap();
        let s = subdifferential(&r, &[int(1)]).unwrap();
        assert!(s.set.same_set(&ray_from(1)));
        assert!(s.same_set(&subdifferential_by_generators(&r, &[int(1)]).unwrap()));
        assert!(is_subgradient(&r, &[int(1)], &[int(5)]).unwrap());
        assert!(!is_subgradient(&r, &[int(1)], &[q(1, 2)]).unwrap());

        let whole = PLFunction::trusted(1, NCSet::open(&HPoly::universe(2)));
        assert_eq!(subdifferential(&whole, &[int(0)]), Err(VarError::ValueNotFinite));
    }

    #[test]
    fn coderivatives() {
        let id = SVMap::affine(&RMatrix::identity(1), &[int(0)]);
        let d = coderivative(&id, &[int(0)], &[int(0)], &[int(3)]).unwrap();
        assert!(d.same_set(&HPoly::point(&[int(3)])));
        let f = strip();
        let d = coderivative(&f, &[int(1)], &[int(1)], &[int(1)]).unwrap();
        assert!(d.same_set(&HPoly::point(&[int(1)])));
        let d = coderivative(&f, &[int(0)], &[int(0)], &[int(1)]).unwrap();
        assert!(d.same_set(&HPoly::new(1, vec![c(&[1], 1)], vec![])));
        assert_eq!(coderivative(&f, &[int(0)], &[int(5)], &[int(1)]), Err(VarError::PointNotInGraph));
    }

    fn y_objective() -> PLFunction {
        PLFunction::linear(&[int(0), int(1)], &int(0))
    }

    #[test]
    fn optimal_value_function() {
        let inst = build_ovf(&y_objective(), &strip()).unwrap();
        assert!(inst.qc);
        assert_eq!(inst.mu.eval(&[int(1)]).unwrap(), Extended::Finite(int(1)));
        assert_eq!(inst.mu.eval(&[int(3)]).unwrap(), Extended::PosInf);
        let expect = PLFunction::max_affine(1, &[(vec![int(1)], int(0))], &NCSet::from_closed(&HPoly::cube(1, &int(0), &int(2)))).unwrap();
        assert!(inst.mu.epi.same_points(&expect.epi));
        assert!(inst.mu.is_nearly_convex().unwrap());
        assert!(inst.mu.strict_epi_closure_matches().unwrap());

        let anything = SVMap::constant(1, &NCSet::open(&HPoly::universe(1)));
        let g =
            PLFunction::max_affine(2, &[(vec![int(1), int(0)], int(0)), (vec![int(-1), int(0)], int(0))], &NCSet::open(&HPoly::universe(2))).unwrap();
        let inst = build_ovf(&g, &anything).unwrap();
        assert!(inst.mu.epi.same_points(&abs().epi));

        let up = SVMap::from_closed_graph(1, 1, &HPoly::new(2, vec![c(&[1, -1], 0)], vec![])).unwrap();
        let inst = build_ovf(&PLFunction::linear(&[int(0), int(-1)], &int(0)), &up).unwrap();
        assert_eq!(inst.mu.eval(&[int(0)]).unwrap(), Extended::NegInf);
        assert!(!inst.mu.assert_proper());
    }

    #[test]
    fn solution_maps() {
        let inst = build_ovf(&y_objective(), &strip()).unwrap();
        assert!(inst.solution_map(&[int(1)]).unwrap().same_points(&NCSet::from_closed(&HPoly::point(&[int(1)]))));

        let zero = PLFunction::linear(&[int(0), int(0)], &int(0));
        let inst = build_ovf(&zero, &strip()).unwrap();
        assert!(inst.solution_map(&[int(1)]).unwrap().same_points(&strip().eval(&[int(1)]).unwrap()));

        let open = SVMap::constant(1, &NCSet::open(&HPoly::cube(1, &int(0), &int(1))));
        let inst = build_ovf(&y_objective(), &open).unwrap();
        assert_eq!(inst.mu.eval(&[int(7)]).unwrap(), Extended::Finite(int(0)));
        assert!(inst.solution_map(&[int(7)]).unwrap().is_empty());
        assert_eq!(inst.ovf_subdifferential(&[int(7)], &[int(0)]), Err(VarError::EmptySolutionMap));
    }

    #[test]
    fn ovf_subdifferential_formula() {
        let inst = build_ovf(&y_objective(), &strip()).unwrap();
        let r = inst.ovf_subdifferential(&[int(1)], &[int(1)]).unwrap();
        assert!(r.equal);
        assert!(r.lhs.same_set(&HPoly::point(&[int(1)])));
        let r = inst.ovf_subdifferential(&[int(0)], &[int(0)]).unwrap();
        assert!(r.equal);
        assert!(r.lhs.same_set(&HPoly::new(1, vec![c(&[1], 1)], vec![])));
    }
}
