//! Perturbation duality: primal and dual values, qualification checks and
//! strong-duality verdicts for the general, Lagrange, Fenchel–Lagrange and
//! Fenchel schemes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::conjugate::{fenchel, fenchel_value, support_by_pieces, ConjError};
use crate::exactlp::{self, Constraint, Extended, LpStatus, MixedSystem};
use crate::linalg::{self, dot, RMatrix, RVector};
use crate::ncset::{NCSet, NcError, ROPoly};
use crate::plfunc::{build_composite_phi, build_composite_psi, sum_affine_composite, FnError, PLFunction, PolyCone};
use crate::polyhedron::PolyError;
use crate::rational::Rational;
use crate::svmap::{SVMap, SvError};
use crate::variational::{build_ovf, subdifferential, VarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error(transparent)]
    Conj(#[from] ConjError),
    #[error(transparent)]
    Var(#[from] VarError),
    #[error("perturbation function takes the value -inf")]
    ImproperPerturbation,
    #[error("objective is not proper")]
    ImproperObjective,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

macro_rules! via_conj {
    ($t:ty) => {
        impl From<$t> for DualError {
            fn from(e: $t) -> Self {
                DualError::Conj(ConjError::from(e))
            }
        }
    };
}
via_conj!(NcError);
via_conj!(PolyError);
via_conj!(SvError);
via_conj!(FnError);

fn dims(expected: usize, got: usize) -> Result<(), DualError> {
    if expected == got {
        Ok(())
    } else {
        Err(DualError::DimensionMismatch { expected, got })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    General,
    Lagrange,
    FenchelLagrange,
    Fenchel,
}

/// A strict-feasibility decision with its evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QcFlag {
    pub holds: bool,
    pub witness: Option<RVector>,
    /// Farkas multipliers when even the closed relaxation is empty.
    pub certificate: Option<RVector>,
}

impl QcFlag {
    fn from_system(sys: &MixedSystem) -> QcFlag {
        let out = exactlp::strict_feasible_certified(sys).expect("dims");
        QcFlag { holds: out.feasible, witness: out.witness, certificate: out.certificate }
    }

    fn no(dim: usize) -> QcFlag {
        // empty set: the system 0 ≤ −1
        let mut sys = MixedSystem::new(dim);
        sys.weak.push(Constraint::new(linalg::zeros(dim), -Rational::one()));
        QcFlag::from_system(&sys)
    }
}

/// `ri S1 ∩ … ∩ ri Sk ≠ ∅`.
pub fn qc_common_ri(sets: &[&NCSet]) -> Result<QcFlag, DualError> {
    let dim = sets.first().map_or(0, |s| s.dim());
    let mut sys = MixedSystem::new(dim);
    for s in sets {
        match s.relative_interior()? {
            Some(r) => sys.append(&r.system()),
            None => return Ok(QcFlag::no(dim)),
        }
    }
    Ok(QcFlag::from_system(&sys))
}

/// `pt ∈ ri S`.
pub fn qc_point_in_ri(s: &NCSet, pt: &[Rational]) -> Result<QcFlag, DualError> {
    dims(s.dim(), pt.len())?;
    let Some(r) = s.relative_interior()? else { return Ok(QcFlag::no(s.dim())) };
    Ok(qc_point_in_ro(&r, pt))
}

fn qc_point_in_ro(r: &ROPoly, pt: &[Rational]) -> QcFlag {
    let mut sys = r.system();
    for (i, v) in pt.iter().enumerate() {
        sys.eq.push(Constraint::new(linalg::unit(pt.len(), i), v.clone()));
    }
    QcFlag::from_system(&sys)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub scheme: Scheme,
    #[serde(rename = "V")]
    pub v: Extended,
    #[serde(rename = "V_d")]
    pub v_d: Extended,
    pub gap: Extended,
    pub qc_flags: BTreeMap<String, QcFlag>,
    pub primal_witness: Option<RVector>,
    pub dual_witness: Option<RVector>,
    pub weak_duality: bool,
    /// All qualification flags hold, so `V = V_d` is asserted.
    pub strong_asserted: bool,
    pub strong_holds: bool,
    /// Independent recomputations that must agree with the main pipeline.
    pub cross_checks: BTreeMap<String, bool>,
}

impl DualityReport {
    /// Weak duality always, and zero gap whenever the flags require it.
    pub fn verdict(&self) -> bool {
        self.weak_duality && (!self.strong_asserted || self.strong_holds) && self.cross_checks.values().all(|&b| b)
    }

    fn all_qc(&self) -> bool {
        self.qc_flags.values().all(|q| q.holds)
    }
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

/// `inf_{y*} f*(0, y*)` over the generators of `cl epi f`, with a minimizer.
fn dual_slice_min(f: &PLFunction, n: usize) -> Result<(Extended, Option<RVector>), DualError> {
    let p = f.n - n;
    let g = f.generators()?;
    // variables (y*, β); rows ⟨y*, y_i⟩ − λ_i ≤ β, ⟨y*, r_y⟩ ≤ r_λ
    let mut sys = MixedSystem::new(p + 1);
    for pt in &g.points {
        let mut row = pt[n..n + p].to_vec();
        row.push(-Rational::one());
        sys.weak.push(Constraint::new(row, pt[n + p].clone()));
    }
    for r in &g.rays {
        let mut row = r[n..n + p].to_vec();
        row.push(Rational::zero());
        sys.weak.push(Constraint::new(row, r[n + p].clone()));
    }
    let out = exactlp::solve_lp(&linalg::unit(p + 1, p), &sys).expect("dims");
    Ok(match out.status {
        LpStatus::Optimal => (out.value, out.primal_witness.map(|w| w[..p].to_vec())),
        LpStatus::Unbounded => (Extended::NegInf, None),
        LpStatus::Infeasible => (Extended::PosInf, None),
    })
}

/// Swaps `(x, y, λ)` into `(y, x, λ)`.
fn swap_blocks(f: &PLFunction, n: usize) -> PLFunction {
    let p = f.n - n;
    let mut perm = range(n, n + p);
    perm.extend(0..n);
    perm.push(n + p);
    PLFunction::trusted(f.n, f.epi.permute(&perm))
}

/// `V`, `V_d` and the general-scheme checks for a perturbation `f(x, y)` with
/// `x ∈ R^n`.
pub fn general_duality(f: &PLFunction, n: usize) -> Result<DualityReport, DualError> {
    if n > f.n {
        return Err(DualError::DimensionMismatch { expected: f.n, got: n });
    }
    if !f.assert_proper() {
        return Err(DualError::ImproperPerturbation);
    }
    let p = f.n - n;
    let mut checks = BTreeMap::new();
    let mut flags = BTreeMap::new();
    let zero = linalg::zeros(p);

    let dom_y = f.dom().project(&range(n, n + p));
    let qc = if dom_y.is_empty() { QcFlag::no(p) } else { qc_point_in_ri(&dom_y, &zero)? };
    flags.insert("zero_in_ri_P2_dom".to_string(), qc);

    let (v, primal_witness, mu) = if f.epi.is_empty() {
        (Extended::PosInf, None, None)
    } else {
        let g = swap_blocks(f, n);
        let all = SVMap::constant(p, &NCSet::open(&crate::polyhedron::HPoly::universe(n)));
        let inst = build_ovf(&g, &all)?;
        let v = inst.mu.eval(&zero)?;
        let w = if v.is_finite() { inst.solution_map(&zero)?.pieces().first().map(|q| q.witness()) } else { None };
        (v, w, Some(inst.mu))
    };

    let (inf, dual_witness) = dual_slice_min(f, n)?;
    let v_d = inf.neg();

    // V_d = μ**(0)
    if let Some(mu) = &mu {
        if mu.assert_proper() {
            if let Ok(ms) = fenchel(mu) {
                let mss = if ms.epi.is_empty() { Extended::PosInf } else { fenchel_value(&ms, &zero)? };
                checks.insert("V_d_equals_mu_biconjugate".to_string(), mss == v_d);
            }
        }
    }
    // −f*(0, y*) at the dual witness reproduces V_d
    if let Some(y) = &dual_witness {
        let mut z = linalg::zeros(n);
        z.extend(y.iter().cloned());
        checks.insert("dual_witness_value".to_string(), fenchel_value(f, &z)?.neg() == v_d);
    }
    // ∂μ(0) ≠ ∅ forces a zero gap
    if let (Some(mu), true) = (&mu, v.is_finite()) {
        if let Ok(sd) = subdifferential(mu, &zero) {
            if !sd.is_empty() {
                checks.insert("subdiff_nonempty_zero_gap".to_string(), v == v_d);
            }
        }
    }
    Ok(finish(Scheme::General, v, v_d, flags, primal_witness, dual_witness, checks))
}

fn finish(
    scheme: Scheme,
    v: Extended,
    v_d: Extended,
    qc_flags: BTreeMap<String, QcFlag>,
    primal_witness: Option<RVector>,
    dual_witness: Option<RVector>,
    cross_checks: BTreeMap<String, bool>,
) -> DualityReport {
    // equal infinite values count as a closed gap
    let gap = if v == v_d { Extended::Finite(Rational::zero()) } else { v.sub(&v_d) };
    let mut r = DualityReport {
        scheme,
        weak_duality: v >= v_d,
        strong_holds: v == v_d,
        v,
        v_d,
        gap,
        qc_flags,
        primal_witness,
        dual_witness,
        strong_asserted: false,
        cross_checks,
    };
    r.strong_asserted = r.all_qc();
    r
}

/// `inf λ` over the closures of the epigraph pieces.
fn min_over_pieces(f: &PLFunction) -> Extended {
    let mut c = linalg::zeros(f.n + 1);
    c[f.n] = -Rational::one();
    support_by_pieces(&f.epi, &c).neg()
}

/// `φ + δ_S` as a function.
fn restrict_to(phi: &PLFunction, s: &NCSet) -> PLFunction {
    let cyl = s.cylinder(phi.n + 1, &range(0, phi.n));
    PLFunction::trusted(phi.n, phi.epi.intersect_pointwise(&cyl, false))
}

/// `V = inf{φ(x) : x ∈ Θ, 0 ∈ G(x)}` directly.
fn lagrange_primal(phi: &PLFunction, theta: &NCSet, g: &SVMap) -> Result<Extended, DualError> {
    let zero = NCSet::from_closed(&crate::polyhedron::HPoly::point(&linalg::zeros(g.p)));
    let (feasible, _) = g.inverse_image(&zero)?;
    let f = restrict_to(&restrict_to(phi, theta), &feasible);
    Ok(min_over_pieces(&f))
}

/// `v_G(x, y*) = inf{⟨−y*, y⟩ : y ∈ G(x)}`.
pub fn v_g(g: &SVMap, x: &[Rational], ystar: &[Rational]) -> Result<Extended, DualError> {
    let fx = g.eval(x)?;
    Ok(support_by_pieces(&fx, ystar).neg())
}

/// `v_G` for `G(x) = Gx + c + K`: `−⟨y*, g(x)⟩` if `−y* ∈ K*`, else `−∞`.
pub fn v_g_cone(gm: &RMatrix, c: &[Rational], k: &PolyCone, x: &[Rational], ystar: &[Rational]) -> Result<Extended, DualError> {
    let kd = k.dual()?;
    if !kd.contains(&linalg::neg(ystar)) {
        return Ok(Extended::NegInf);
    }
    let gx = linalg::add(&gm.mul_vec(x), c);
    Ok(Extended::Finite(-dot(ystar, &gx)))
}

/// `h(y*) = inf{φ(x) + v_G(x, y*) : x ∈ Θ}` by pieces of the perturbation.
pub fn lagrange_dual_function(phi: &PLFunction, theta: &NCSet, g: &SVMap, ystar: &[Rational]) -> Result<Extended, DualError> {
    dims(g.p, ystar.len())?;
    let (f, _) = build_composite_phi(phi, theta, g)?;
    let mut z = linalg::zeros(phi.n);
    z.extend(ystar.iter().cloned());
    z.push(-Rational::one());
    Ok(support_by_pieces(&f.epi, &z).neg())
}

pub fn lagrange_duality(phi: &PLFunction, theta: &NCSet, g: &SVMap) -> Result<DualityReport, DualError> {
    dims(phi.n, theta.dim())?;
    dims(phi.n, g.n)?;
    if !phi.is_proper() {
        return Err(DualError::ImproperObjective);
    }
    let (f, _) = build_composite_phi(phi, theta, g)?;
    let mut r = general_duality(&f, phi.n)?;
    r.scheme = Scheme::Lagrange;
    r.qc_flags.clear();
    let dom_phi = phi.dom();
    let dom_g = g.dom();
    r.qc_flags.insert("ri_dom_phi_dom_G_theta".to_string(), qc_common_ri(&[&dom_phi, &dom_g, theta])?);
    let (cut, _) = theta.intersect(&dom_phi)?;
    let (img, _) = g.image_of_set(&cut)?;
    let img = img.validate().unwrap_or_else(|_| NCSet::empty(g.p));
    let q2 = if img.is_empty() { QcFlag::no(g.p) } else { qc_point_in_ri(&img, &linalg::zeros(g.p))? };
    r.qc_flags.insert("zero_in_ri_G_image".to_string(), q2);
    r.strong_asserted = r.all_qc();

    let direct = lagrange_primal(phi, theta, g)?;
    r.cross_checks.insert("V_direct".to_string(), direct == r.v);
    if let Some(y) = &r.dual_witness {
        let h = lagrange_dual_function(phi, theta, g, y)?;
        r.cross_checks.insert("h_at_dual_witness".to_string(), h == r.v_d);
    }
    Ok(r)
}

/// Lagrange duality for `g(x) ≤_K 0` with `g(x) = Gx + c`; the dual witness
/// is reported in the sign convention `y* ∈ K*`.
pub fn lagrange_cone_duality(phi: &PLFunction, theta: &NCSet, gm: &RMatrix, c: &[Rational], k: &PolyCone) -> Result<DualityReport, DualError> {
    let g = SVMap::affine_plus_cone(gm, c, k.hpoly())?;
    let mut r = lagrange_duality(phi, theta, &g)?;
    let q = gm.nrows();
    // ri Θ ∩ ri dom φ ≠ ∅ and 0 ∈ g(ri Θ ∩ ri dom φ) + ri K
    let dom_phi = phi.dom();
    let first = qc_common_ri(&[theta, &dom_phi])?;
    let second = match (theta.relative_interior()?, dom_phi.relative_interior()?) {
        (Some(a), Some(b)) if first.holds => {
            let core = a.intersect(&b).expect("ri's meet");
            let moved = NCSet::single(core.image(gm, c));
            let kk = NCSet::open(k.hpoly());
            let s = moved.minkowski_sum(&kk)?;
            qc_point_in_ri(&s, &linalg::zeros(q))?
        }
        _ => QcFlag::no(q),
    };
    r.qc_flags.insert("cone_ri_theta_dom_phi".to_string(), first);
    r.qc_flags.insert("cone_zero_in_g_plus_ri_K".to_string(), second);
    r.strong_asserted = r.all_qc();
    if let Some(y) = r.dual_witness.take() {
        let ycor = linalg::neg(&y);
        let kd = k.dual()?;
        r.cross_checks.insert("multiplier_in_dual_cone".to_string(), kd.contains(&ycor));
        let val = cone_dual_function(phi, theta, gm, c, &ycor)?;
        r.cross_checks.insert("cone_dual_function_at_multiplier".to_string(), val == r.v_d);
        r.dual_witness = Some(ycor);
    }
    Ok(r)
}

/// `inf{φ(x) + ⟨y*, g(x)⟩ : x ∈ Θ}` for `g(x) = Gx + c`.
pub fn cone_dual_function(phi: &PLFunction, theta: &NCSet, gm: &RMatrix, c: &[Rational], ystar: &[Rational]) -> Result<Extended, DualError> {
    let f = restrict_to(phi, theta);
    let a = gm.transpose().mul_vec(ystar);
    let mut z = linalg::neg(&a);
    z.push(-Rational::one());
    let s = support_by_pieces(&f.epi, &z);
    Ok(s.neg().add(&Extended::Finite(dot(ystar, c))))
}

/// `h₁(u*, y*) = −φ*(u*) + inf{⟨u*, x⟩ + v_G(x, y*) : x ∈ Θ}`.
pub fn fenchel_lagrange_dual_function(
    phi: &PLFunction,
    theta: &NCSet,
    g: &SVMap,
    ustar: &[Rational],
    ystar: &[Rational],
) -> Result<Extended, DualError> {
    let (rg, _) = g.restrict(theta)?;
    let mut z = linalg::neg(ustar);
    z.extend(ystar.iter().cloned());
    let inner = support_by_pieces(&rg.graph, &z).neg();
    Ok(fenchel_value(phi, ustar)?.neg().add(&inner))
}

pub fn fenchel_lagrange_duality(phi: &PLFunction, theta: &NCSet, g: &SVMap) -> Result<DualityReport, DualError> {
    dims(phi.n, theta.dim())?;
    dims(phi.n, g.n)?;
    if !phi.is_proper() {
        return Err(DualError::ImproperObjective);
    }
    let n = phi.n;
    let (f1, _) = build_composite_psi(phi, theta, g)?;
    let mut r = general_duality(&f1, n)?;
    r.scheme = Scheme::FenchelLagrange;
    r.qc_flags.clear();
    let dom_phi = phi.dom();
    let dom_g = g.dom();
    r.qc_flags.insert("ri_dom_phi_dom_G_theta".to_string(), qc_common_ri(&[&dom_phi, &dom_g, theta])?);
    let (cut, _) = theta.intersect(&dom_phi)?;
    let (img, _) = g.image_of_set(&cut)?;
    let img = img.validate().unwrap_or_else(|_| NCSet::empty(g.p));
    let q2 = if img.is_empty() { QcFlag::no(g.p) } else { qc_point_in_ri(&img, &linalg::zeros(g.p))? };
    r.qc_flags.insert("zero_in_ri_G_image".to_string(), q2);
    r.strong_asserted = r.all_qc();
    let direct = lagrange_primal(phi, theta, g)?;
    r.cross_checks.insert("V_direct".to_string(), direct == r.v);
    if let Some(w) = &r.dual_witness {
        let h1 = fenchel_lagrange_dual_function(phi, theta, g, &w[..n], &w[n..])?;
        r.cross_checks.insert("h1_at_dual_witness".to_string(), h1 == r.v_d);
    }
    Ok(r)
}

/// `sup_{y*} −g*(−Aᵀy*) − h*(y*)` as one LP, with a maximizer.
fn fenchel_dual_lp(g: &PLFunction, h: &PLFunction, a: &RMatrix) -> Result<(Extended, Option<RVector>), DualError> {
    let (p, n) = (a.nrows(), a.ncols());
    let gg = g.generators()?;
    let gh = h.generators()?;
    // variables (y*, β1, β2)
    let (b1, b2) = (p, p + 1);
    let mut sys = MixedSystem::new(p + 2);
    // (−Aᵀy*, β1) ∈ epi g*: ⟨−Aᵀy*, x_i⟩ − λ_i ≤ β1, i.e. ⟨−A x_i, y*⟩ − β1 ≤ λ_i
    let row_g = |x: &[Rational]| -> RVector { linalg::neg(&a.mul_vec(x)) };
    for pt in &gg.points {
        let mut row = row_g(&pt[..n]);
        row.push(-Rational::one());
        row.push(Rational::zero());
        sys.weak.push(Constraint::new(row, pt[n].clone()));
    }
    for r in &gg.rays {
        let mut row = row_g(&r[..n]);
        row.extend(linalg::zeros(2));
        sys.weak.push(Constraint::new(row, r[n].clone()));
    }
    for pt in &gh.points {
        let mut row = pt[..p].to_vec();
        row.push(Rational::zero());
        row.push(-Rational::one());
        sys.weak.push(Constraint::new(row, pt[p].clone()));
    }
    for r in &gh.rays {
        let mut row = r[..p].to_vec();
        row.extend(linalg::zeros(2));
        sys.weak.push(Constraint::new(row, r[p].clone()));
    }
    let mut obj = linalg::zeros(p + 2);
    obj[b1] = Rational::one();
    obj[b2] = Rational::one();
    let out = exactlp::solve_lp(&obj, &sys).expect("dims");
    Ok(match out.status {
        LpStatus::Optimal => (out.value.neg(), out.primal_witness.map(|w| w[..p].to_vec())),
        LpStatus::Unbounded => (Extended::PosInf, None),
        LpStatus::Infeasible => (Extended::NegInf, None),
    })
}

pub fn fenchel_duality(g: &PLFunction, h: &PLFunction, a: &RMatrix) -> Result<DualityReport, DualError> {
    dims(g.n, a.ncols())?;
    dims(h.n, a.nrows())?;
    if !g.is_proper() || !h.is_proper() {
        return Err(DualError::ImproperObjective);
    }
    let f = sum_affine_composite(g, h, a)?;
    let mut r = general_duality(&f, g.n)?;
    r.scheme = Scheme::Fenchel;
    r.qc_flags.clear();
    let q = match (g.dom().relative_interior()?, h.dom().relative_interior()?) {
        (Some(rg), Some(rh)) => {
            let moved = rg.image(a, &linalg::zeros(a.nrows()));
            let mut sys = moved.system();
            sys.append(&rh.system());
            QcFlag::from_system(&sys)
        }
        _ => QcFlag::no(a.nrows()),
    };
    r.qc_flags.insert("A_ri_dom_g_meets_ri_dom_h".to_string(), q);
    r.strong_asserted = r.all_qc();

    // V directly: inf over epi(g + h∘A)
    let hc = crate::conjugate::compose_linear(h, a)?;
    let (s, _) = g.epigraphical_map().sum(&hc.epigraphical_map())?;
    let direct = min_over_pieces(&PLFunction::trusted(g.n, s.graph));
    r.cross_checks.insert("V_direct".to_string(), direct == r.v);
    let (vd2, w2) = fenchel_dual_lp(g, h, a)?;
    r.cross_checks.insert("V_d_scheme_formula".to_string(), vd2 == r.v_d);
    if let Some(y) = &w2 {
        let at = linalg::neg(&a.transpose().mul_vec(y));
        let val = fenchel_value(g, &at)?.add(&fenchel_value(h, y)?).neg();
        r.cross_checks.insert("scheme_witness_value".to_string(), val == r.v_d);
    }
    Ok(r)
}
