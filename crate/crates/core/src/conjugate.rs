//! Support functions, Fenchel conjugates and infimal convolutions.

use serde::Serialize;

use crate::exactlp::{self, Constraint, Extended, LpStatus, MixedSystem};
use crate::linalg::{self, dot, RMatrix, RVector};
use crate::ncset::{ri_meet, NCSet, NcError};
use crate::plfunc::{sum_affine_composite, FnError, PLFunction};
use crate::polyhedron::{HPoly, PolyError, VPoly};
use crate::rational::Rational;
use crate::svmap::{SVMap, SvError};
use crate::variational::OVFInstance;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConjError {
    #[error(transparent)]
    Func(#[from] FnError),
    #[error("function has empty domain")]
    EmptyDomain,
    #[error("qualification condition fails")]
    QCViolated,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl From<NcError> for ConjError {
    fn from(e: NcError) -> Self {
        ConjError::Func(FnError::Set(e))
    }
}

impl From<PolyError> for ConjError {
    fn from(e: PolyError) -> Self {
        ConjError::Func(FnError::from(e))
    }
}

impl From<SvError> for ConjError {
    fn from(e: SvError) -> Self {
        ConjError::Func(FnError::Map(e))
    }
}

fn dims(expected: usize, got: usize) -> Result<(), ConjError> {
    if expected == got {
        Ok(())
    } else {
        Err(ConjError::DimensionMismatch { expected, got })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportEvaluation {
    pub value: Extended,
    pub maximizer: Option<RVector>,
    /// Recession direction along which `⟨v, ·⟩` grows, when the value is `+∞`.
    pub ray: Option<RVector>,
}

/// `sup ⟨v, x⟩` over a closed polyhedron.
pub fn support_poly(p: &HPoly, v: &[Rational]) -> SupportEvaluation {
    let out = exactlp::maximize(v, &p.system()).expect("dims");
    match out.status {
        LpStatus::Optimal => SupportEvaluation { value: out.value, maximizer: out.primal_witness, ray: None },
        LpStatus::Unbounded => SupportEvaluation { value: Extended::PosInf, maximizer: None, ray: out.certificate },
        LpStatus::Infeasible => SupportEvaluation { value: Extended::NegInf, maximizer: None, ray: None },
    }
}

/// `σ_Ω(v)`, computed over `cl Ω`.
pub fn support(omega: &NCSet, v: &[Rational]) -> Result<SupportEvaluation, ConjError> {
    dims(omega.dim(), v.len())?;
    Ok(support_poly(&omega.closure()?, v))
}

/// `σ` as the largest value over the individual pieces (no closure needed).
pub fn support_by_pieces(omega: &NCSet, v: &[Rational]) -> Extended {
    omega.pieces().iter().map(|p| support_poly(p.base(), v).value).max().unwrap_or(Extended::NegInf)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub w1: RVector,
    pub w2: RVector,
    pub v: Option<RVector>,
    pub parts: (Rational, Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvolutionReport {
    pub lhs: Extended,
    pub rhs: Extended,
    pub witness: Option<SplitWitness>,
    pub qc: bool,
    pub verdict: bool,
}

/// Linear expression over LP variables plus a constant.
struct Lp {
    dim: usize,
    sys: MixedSystem,
}

impl Lp {
    fn new(dim: usize) -> Lp {
        Lp { dim, sys: MixedSystem::new(dim) }
    }

    /// `Σ coef·var ≤ rhs`.
    fn le(&mut self, terms: &[(usize, Rational)], rhs: Rational) {
        let mut row = linalg::zeros(self.dim);
        for (j, a) in terms {
            row[*j] += a;
        }
        self.sys.weak.push(Constraint::new(row, rhs));
    }

    fn eq(&mut self, terms: &[(usize, Rational)], rhs: Rational) {
        let mut row = linalg::zeros(self.dim);
        for (j, a) in terms {
            row[*j] += a;
        }
        self.sys.eq.push(Constraint::new(row, rhs));
    }

    fn minimize(&self, obj: &[(usize, Rational)]) -> (Extended, Option<RVector>) {
        let mut c = linalg::zeros(self.dim);
        for (j, a) in obj {
            c[*j] += a;
        }
        let out = exactlp::solve_lp(&c, &self.sys).expect("dims");
        match out.status {
            LpStatus::Optimal => (out.value, out.primal_witness),
            LpStatus::Unbounded => (Extended::NegInf, None),
            LpStatus::Infeasible => (Extended::PosInf, None),
        }
    }
}

/// Generator rows for `σ_C(z) ≤ t`, `C = conv(points) + cone(rays)`:
/// `⟨z, p⟩ − t ≤ 0` and `⟨z, r⟩ ≤ 0`, with `z` given as an affine
/// expression `z_k = Σ coef·var + const_k`.
fn add_support_epi(lp: &mut Lp, gens: &VPoly, z: &[Vec<(usize, Rational)>], z_const: &[Rational], t: usize) {
    let row = |lp: &mut Lp, g: &RVector, with_t: bool| {
        let mut terms = Vec::new();
        let mut rhs = Rational::zero();
        for (k, gk) in g.iter().enumerate() {
            if gk.is_zero() {
                continue;
            }
            for (j, a) in &z[k] {
                terms.push((*j, a * gk));
            }
            rhs -= &z_const[k] * gk;
        }
        if with_t {
            terms.push((t, -Rational::one()));
        }
        lp.le(&terms, rhs);
    };
    for p in &gens.points {
        row(lp, p, true);
    }
    for r in &gens.rays {
        row(lp, r, false);
    }
}

fn var(j: usize) -> Vec<(usize, Rational)> {
    vec![(j, Rational::one())]
}

fn konst() -> Vec<(usize, Rational)> {
    vec![]
}

/// `(σ_{Ω1} □ σ_{Ω2})(v)` by one LP, with the split.
fn support_convolution(g1: &VPoly, g2: &VPoly, v: &[Rational]) -> (Extended, Option<(RVector, RVector)>) {
    let n = v.len();
    // variables (v1, t1, t2)
    let (t1, t2) = (n, n + 1);
    let mut lp = Lp::new(n + 2);
    let z1: Vec<_> = (0..n).map(var).collect();
    add_support_epi(&mut lp, g1, &z1, &linalg::zeros(n), t1);
    let z2: Vec<_> = (0..n).map(|j| vec![(j, -Rational::one())]).collect();
    add_support_epi(&mut lp, g2, &z2, v, t2);
    let (val, sol) = lp.minimize(&[(t1, Rational::one()), (t2, Rational::one())]);
    let split = sol.map(|s| {
        let w1 = s[..n].to_vec();
        let w2 = linalg::sub(v, &w1);
        (w1, w2)
    });
    (val, split)
}

/// `σ_{Ω1∩Ω2}(v)` against `(σ_{Ω1} □ σ_{Ω2})(v)`.
pub fn support_of_intersection(o1: &NCSet, o2: &NCSet, v: &[Rational]) -> Result<ConvolutionReport, ConjError> {
    dims(o1.dim(), v.len())?;
    dims(o2.dim(), v.len())?;
    let qc = ri_meet(o1, o2)?;
    if !qc {
        return Err(ConjError::QCViolated);
    }
    let (inter, _) = o1.intersect(o2)?;
    let lhs = support(&inter, v)?.value;
    let (rhs, split) = support_convolution(&o1.generators()?, &o2.generators()?, v);
    let witness = match split {
        Some((w1, w2)) => {
            let p1 = support(o1, &w1)?.value;
            let p2 = support(o2, &w2)?.value;
            match (p1, p2) {
                (Extended::Finite(a), Extended::Finite(b)) => Some(SplitWitness { w1, w2, v: None, parts: (a, b) }),
                _ => None,
            }
        }
        None => None,
    };
    let parts_ok = witness.as_ref().is_none_or(|w| Extended::Finite(&w.parts.0 + &w.parts.1) == rhs);
    Ok(ConvolutionReport { verdict: lhs == rhs && parts_ok, lhs, rhs, witness, qc })
}

/// `f*(w) = σ_{epi f}(w, −1)`.
pub fn fenchel_value(f: &PLFunction, w: &[Rational]) -> Result<Extended, ConjError> {
    dims(f.n, w.len())?;
    if f.epi.is_empty() {
        return Ok(Extended::NegInf);
    }
    let mut z = w.to_vec();
    z.push(-Rational::one());
    let hull = f.epi.hull()?;
    Ok(support_poly(&hull, &z).value)
}

/// `sup_x ⟨w, x⟩ − f(x)` piece by piece from the definition.
pub fn fenchel_value_by_pieces(f: &PLFunction, w: &[Rational]) -> Result<Extended, ConjError> {
    dims(f.n, w.len())?;
    let mut z = w.to_vec();
    z.push(-Rational::one());
    Ok(support_by_pieces(&f.epi, &z))
}

/// Rows of `epi f*` in `(w, β)` from the generators of `cl epi f`.
fn conjugate_epi(f: &PLFunction) -> Result<HPoly, ConjError> {
    let n = f.n;
    let g = f.generators()?;
    let mut ineq = Vec::new();
    for p in &g.points {
        let mut row = p[..n].to_vec();
        row.push(-Rational::one());
        ineq.push(Constraint::new(row, p[n].clone()));
    }
    for r in &g.rays {
        let mut row = r[..n].to_vec();
        row.push(Rational::zero());
        ineq.push(Constraint::new(row, r[n].clone()));
    }
    Ok(HPoly::new(n + 1, ineq, vec![]))
}

/// `f*` as a closed convex function (`+∞` everywhere when `f` is improper).
pub fn fenchel(f: &PLFunction) -> Result<PLFunction, ConjError> {
    if f.epi.is_empty() {
        return Err(ConjError::EmptyDomain);
    }
    let n = f.n;
    let epi = conjugate_epi(f)?;
    let set = match epi.canonical() {
        Some(c) => NCSet::from_closed(&c),
        None => NCSet::empty(n + 1),
    };
    Ok(PLFunction::trusted(n, set))
}

/// `F*(u, v) = σ_{gph F}(u, v)`.
pub fn svm_conjugate(f: &SVMap, u: &[Rational], v: &[Rational]) -> Result<SupportEvaluation, ConjError> {
    dims(f.n, u.len())?;
    dims(f.p, v.len())?;
    let mut z = u.to_vec();
    z.extend(v.iter().cloned());
    support(&f.graph, &z)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OvfConjugateReport {
    pub lhs: Extended,
    pub rhs: Extended,
    pub witness: Option<SplitWitness>,
    pub qc: bool,
    pub verdict: bool,
}

/// `μ*(w)` against `(f* □ F*)(w, 0)` for an optimal value function.
pub fn ovf_conjugate(inst: &OVFInstance, w: &[Rational]) -> Result<OvfConjugateReport, ConjError> {
    let (n, p) = (inst.n(), inst.p());
    dims(n, w.len())?;
    if !inst.qc {
        return Err(ConjError::QCViolated);
    }
    let lhs = fenchel_value(&inst.mu, w)?;
    let gf = inst.f.generators()?;
    let gg = inst.map.graph.generators()?;
    // variables (w1, v, t1, t2); (w1, v, −1) against epi f, (w − w1, −v) against gph F
    let (t1, t2) = (n + p, n + p + 1);
    let mut lp = Lp::new(n + p + 2);
    let mut z1: Vec<_> = (0..n + p).map(var).collect();
    z1.push(konst());
    let mut c1 = linalg::zeros(n + p);
    c1.push(-Rational::one());
    add_support_epi(&mut lp, &gf, &z1, &c1, t1);
    let mut z2: Vec<_> = (0..n).map(|j| vec![(j, -Rational::one())]).collect();
    z2.extend((n..n + p).map(|j| vec![(j, -Rational::one())]));
    let mut c2 = w.to_vec();
    c2.extend(linalg::zeros(p));
    add_support_epi(&mut lp, &gg, &z2, &c2, t2);
    let (rhs, sol) = lp.minimize(&[(t1, Rational::one()), (t2, Rational::one())]);
    let mut witness = None;
    if let Some(s) = sol {
        let w1 = s[..n].to_vec();
        let v = s[n..n + p].to_vec();
        let w2 = linalg::sub(w, &w1);
        let mut a = w1.clone();
        a.extend(v.iter().cloned());
        let fa = fenchel_value(&inst.f, &a)?;
        let fb = svm_conjugate(&inst.map, &w2, &linalg::neg(&v))?.value;
        if let (Extended::Finite(x), Extended::Finite(y)) = (fa, fb) {
            witness = Some(SplitWitness { w1, w2, v: Some(v), parts: (x, y) });
        }
    }
    let parts_ok = witness.as_ref().is_none_or(|s| Extended::Finite(&s.parts.0 + &s.parts.1) == rhs);
    Ok(OvfConjugateReport { verdict: lhs == rhs && parts_ok, lhs, rhs, witness, qc: true })
}

/// `μ*(w) = f*(w, 0)` when `F ≡ R^p`; holds for any `f`.
pub fn ovf_conjugate_full_space(f: &PLFunction, n: usize, w: &[Rational]) -> Result<Extended, ConjError> {
    dims(n, w.len())?;
    let mut z = w.to_vec();
    z.extend(linalg::zeros(f.n - n));
    fenchel_value(f, &z)
}

/// `(f₁ + f₂)*(w)` against `(f₁* □ f₂*)(w)`.
pub fn conjugate_sum(f1: &PLFunction, f2: &PLFunction, w: &[Rational]) -> Result<ConvolutionReport, ConjError> {
    dims(f1.n, w.len())?;
    dims(f2.n, w.len())?;
    let qc = ri_meet(&f1.dom(), &f2.dom())?;
    if !qc {
        return Err(ConjError::QCViolated);
    }
    let (s, _) = f1.epigraphical_map().sum(&f2.epigraphical_map())?;
    let sum = PLFunction::trusted(f1.n, s.graph);
    let lhs = fenchel_value(&sum, w)?;
    let n = w.len();
    let (t1, t2) = (n, n + 1);
    let mut lp = Lp::new(n + 2);
    let mut z1: Vec<_> = (0..n).map(var).collect();
    z1.push(konst());
    let mut c1 = linalg::zeros(n);
    c1.push(-Rational::one());
    add_support_epi(&mut lp, &f1.generators()?, &z1, &c1, t1);
    let mut z2: Vec<_> = (0..n).map(|j| vec![(j, -Rational::one())]).collect();
    z2.push(konst());
    let mut c2 = w.to_vec();
    c2.push(-Rational::one());
    add_support_epi(&mut lp, &f2.generators()?, &z2, &c2, t2);
    let (rhs, sol) = lp.minimize(&[(t1, Rational::one()), (t2, Rational::one())]);
    let mut witness = None;
    if let Some(s) = sol {
        let w1 = s[..n].to_vec();
        let w2 = linalg::sub(w, &w1);
        if let (Extended::Finite(a), Extended::Finite(b)) = (fenchel_value(f1, &w1)?, fenchel_value(f2, &w2)?) {
            witness = Some(SplitWitness { w1, w2, v: None, parts: (a, b) });
        }
    }
    let parts_ok = witness.as_ref().is_none_or(|s| Extended::Finite(&s.parts.0 + &s.parts.1) == rhs);
    Ok(ConvolutionReport { verdict: lhs == rhs && parts_ok, lhs, rhs, witness, qc })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub lhs: Extended,
    pub rhs: Extended,
    pub witness: Option<RVector>,
    pub qc: bool,
    pub verdict: bool,
}

/// `g ∘ A` for `g` on `R^p` and `A` of shape `p × n`.
pub fn compose_linear(g: &PLFunction, a: &RMatrix) -> Result<PLFunction, ConjError> {
    let (p, n) = (a.nrows(), a.ncols());
    dims(g.n, p)?;
    let mut t = RMatrix::zeros(p + 1, n + 1);
    for i in 0..p {
        for j in 0..n {
            t.set(i, j, a.get(i, j).clone());
        }
    }
    t.set(p, n, Rational::one());
    let (epi, _) = g.epi.affine_preimage(&t, &linalg::zeros(p + 1))?;
    Ok(PLFunction::trusted(n, epi))
}

/// `(g ∘ A)*(w)` against `inf{g*(v) : Aᵀ v = w}`.
pub fn conjugate_chain(g: &PLFunction, a: &RMatrix, w: &[Rational]) -> Result<ChainReport, ConjError> {
    let (p, n) = (a.nrows(), a.ncols());
    dims(g.n, p)?;
    dims(n, w.len())?;
    let qc = match g.dom().relative_interior()? {
        Some(r) => r.preimage(a, &linalg::zeros(p)).is_some(),
        None => false,
    };
    if !qc {
        return Err(ConjError::QCViolated);
    }
    let lhs = fenchel_value(&compose_linear(g, a)?, w)?;
    // variables (v, β)
    let beta = p;
    let mut lp = Lp::new(p + 1);
    let mut z: Vec<_> = (0..p).map(var).collect();
    z.push(konst());
    let mut c = linalg::zeros(p);
    c.push(-Rational::one());
    add_support_epi(&mut lp, &g.generators()?, &z, &c, beta);
    for j in 0..n {
        let terms: Vec<_> = (0..p).map(|i| (i, a.get(i, j).clone())).collect();
        lp.eq(&terms, w[j].clone());
    }
    let (rhs, sol) = lp.minimize(&[(beta, Rational::one())]);
    let witness = sol.map(|s| s[..p].to_vec());
    let witness_ok = match (&witness, &rhs) {
        (Some(v), Extended::Finite(_)) => fenchel_value(g, v)? == rhs && a.transpose().mul_vec(v) == w,
        _ => true,
    };
    Ok(ChainReport { verdict: lhs == rhs && witness_ok, lhs, rhs, witness, qc })
}

/// `f(x, y) = g(x) + h(Ax + y)`: returns `f*(0, y*)` and `g*(−Aᵀy*) + h*(y*)`.
pub fn composite_conjugate_check(g: &PLFunction, h: &PLFunction, a: &RMatrix, ystar: &[Rational]) -> Result<(Extended, Extended), ConjError> {
    let f = sum_affine_composite(g, h, a)?;
    let mut z = linalg::zeros(g.n);
    z.extend(ystar.iter().cloned());
    let lhs = fenchel_value(&f, &z)?;
    let at = linalg::neg(&a.transpose().mul_vec(ystar));
    let rhs = fenchel_value(g, &at)?.add(&fenchel_value(h, ystar)?);
    Ok((lhs, rhs))
}

/// `⟨w, x⟩ − f(x) ≤ f*(w)` at one point (Young's inequality).
pub fn young_holds(f: &PLFunction, x: &[Rational], w: &[Rational]) -> Result<bool, ConjError> {
    let fx = f.eval(x)?;
    let fs = fenchel_value(f, w)?;
    Ok(Extended::Finite(dot(w, x)) <= fx.add(&fs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use crate::variational::build_ovf;

    fn c(row: &[i64], rhs: i64) -> Constraint {
        Constraint::new(row.iter().map(|&x| int(x)).collect(), int(rhs))
    }

    fn fin(v: i64) -> Extended {
        Extended::Finite(int(v))
    }

    fn abs_shift(s: i64) -> PLFunction {
        PLFunction::max_affine(1, &[(vec![int(1)], int(-s)), (vec![int(-1)], int(s))], &NCSet::open(&HPoly::universe(1))).unwrap()
    }

    fn square() -> NCSet {
        NCSet::from_closed(&HPoly::cube(2, &int(0), &int(1)))
    }

    #[test]
    fn supports() {
        let s = support(&square(), &[int(1), int(1)]).unwrap();
        assert_eq!(s.value, fin(2));
        assert_eq!(s.maximizer, Some(vec![int(1), int(1)]));
        assert_eq!(support(&square(), &[int(0), int(0)]).unwrap().value, fin(0));
        let b = NCSet::from_pieces(2, &[HPoly::cube(2, &int(0), &int(1))]);
        for v in [[1, -3], [-2, 5], [0, -1], [7, 7]] {
            let v: Vec<_> = v.iter().map(|&x| int(x)).collect();
            assert_eq!(support(&b, &v).unwrap().value, support(&square(), &v).unwrap().value);
            assert_eq!(support_by_pieces(&b, &v), support(&square(), &v).unwrap().value);
        }
    }

    #[test]
    fn intersection_support() {
        let tri = NCSet::from_closed(&HPoly::new(2, vec![c(&[1, 1], 1), c(&[-1, 0], 0), c(&[0, -1], 0)], vec![]));
        let r = support_of_intersection(&square(), &tri, &[int(1), int(1)]).unwrap();
        assert!(r.verdict);
        assert_eq!(r.lhs, fin(1));
        let w = r.witness.unwrap();
        assert_eq!(linalg::add(&w.w1, &w.w2), vec![int(1), int(1)]);
        let r = support_of_intersection(&square(), &tri, &[int(0), int(0)]).unwrap();
        assert_eq!(r.lhs, fin(0));
        assert!(r.verdict);
        let a = NCSet::from_closed(&HPoly::cube(1, &int(0), &int(1)));
        let b = NCSet::from_closed(&HPoly::cube(1, &int(1), &int(2)));
        assert_eq!(support_of_intersection(&a, &b, &[int(1)]), Err(ConjError::QCViolated));
    }

    #[test]
    fn conjugates() {
        let abs = abs_shift(0);
        let fs = fenchel(&abs).unwrap();
        assert_eq!(fs.eval(&[q(1, 2)]).unwrap(), fin(0));
        assert_eq!(fs.eval(&[int(2)]).unwrap(), Extended::PosInf);
        assert_eq!(fenchel_value(&abs, &[int(1)]).unwrap(), fin(0));
        assert_eq!(fenchel_value(&abs, &[int(-3)]).unwrap(), Extended::PosInf);

        let lin = PLFunction::linear(&[int(2)], &int(3));
        assert_eq!(fenchel_value(&lin, &[int(2)]).unwrap(), fin(-3));
        assert_eq!(fenchel_value(&lin, &[int(1)]).unwrap(), Extended::PosInf);

        let ind = PLFunction::indicator(&NCSet::from_closed(&HPoly::cube(1, &int(0), &int(1))));
        for w in [-2, 0, 3] {
            assert_eq!(fenchel_value(&ind, &[int(w)]).unwrap(), fin(w.max(0)));
            assert_eq!(fenchel_value_by_pieces(&ind, &[int(w)]).unwrap(), fin(w.max(0)));
        }
        let bi = fenchel(&fenchel(&abs).unwrap()).unwrap();
        assert!(bi.epi.same_points(&abs.epi));

        let improper = PLFunction::trusted(1, NCSet::open(&HPoly::universe(2)));
        assert!(fenchel(&improper).unwrap().epi.is_empty());
    }

    #[test]
    fn map_conjugate() {
        let g = HPoly::new(2, vec![c(&[1, 0], 2), c(&[-1, 0], 0), c(&[1, -1], 0), c(&[-1, 1], 1)], vec![]);
        let f = SVMap::from_closed_graph(1, 1, &g).unwrap();
        let s = svm_conjugate(&f, &[int(1)], &[int(1)]).unwrap();
        assert_eq!(s.value, fin(5));
        assert_eq!(s.maximizer, Some(vec![int(2), int(3)]));
        assert_eq!(svm_conjugate(&f, &[int(0)], &[int(0)]).unwrap().value, fin(0));
        let up = SVMap::from_closed_graph(1, 1, &HPoly::new(2, vec![c(&[1, -1], 0)], vec![])).unwrap();
        let s = svm_conjugate(&up, &[int(0)], &[int(1)]).unwrap();
        assert_eq!(s.value, Extended::PosInf);
        assert!(s.ray.is_some());
    }

    #[test]
    fn ovf_conjugates() {
        let g = HPoly::new(2, vec![c(&[1, 0], 2), c(&[-1, 0], 0), c(&[1, -1], 0), c(&[-1, 1], 1)], vec![]);
        let map = SVMap::from_closed_graph(1, 1, &g).unwrap();
        let f = PLFunction::linear(&[int(0), int(1)], &int(0));
        let inst = build_ovf(&f, &map).unwrap();
        let r = ovf_conjugate(&inst, &[int(2)]).unwrap();
        assert!(r.verdict);
        assert_eq!(r.lhs, fin(2));
        let w = r.witness.unwrap();
        assert_eq!(linalg::add(&w.w1, &w.w2), vec![int(2)]);
        let r = ovf_conjugate(&inst, &[int(1)]).unwrap();
        assert!(r.verdict);
        assert_eq!(r.lhs, fin(0));

        let g2 =
            PLFunction::max_affine(2, &[(vec![int(1), int(0)], int(0)), (vec![int(-1), int(0)], int(0))], &NCSet::open(&HPoly::universe(2))).unwrap();
        let all = SVMap::constant(1, &NCSet::open(&HPoly::universe(1)));
        let inst = build_ovf(&g2, &all).unwrap();
        for w in [q(1, 2), int(2)] {
            let r = ovf_conjugate(&inst, std::slice::from_ref(&w)).unwrap();
            assert!(r.verdict);
            assert_eq!(r.lhs, ovf_conjugate_full_space(&g2, 1, &[w]).unwrap());
        }
    }

    #[test]
    fn sum_rule() {
        let r = conjugate_sum(&abs_shift(0), &abs_shift(1), &[int(0)]).unwrap();
        assert!(r.verdict);
        assert_eq!(r.lhs, fin(-1));
        let w = r.witness.unwrap();
        assert_eq!(Extended::Finite(&w.parts.0 + &w.parts.1), fin(-1));
        let zero = PLFunction::linear(&[int(0)], &int(0));
        let r = conjugate_sum(&abs_shift(0), &zero, &[q(1, 3)]).unwrap();
        assert!(r.verdict);
        assert_eq!(r.lhs, fenchel_value(&abs_shift(0), &[q(1, 3)]).unwrap());
        let a = PLFunction::indicator(&NCSet::from_closed(&HPoly::cube(1, &int(0), &int(1))));
        let b = PLFunction::indicator(&NCSet::from_closed(&HPoly::cube(1, &int(1), &int(2))));
        assert_eq!(conjugate_sum(&a, &b, &[int(0)]), Err(ConjError::QCViolated));
    }

    #[test]
    fn chain_rule() {
        let g = PLFunction::max_affine(
            2,
            &[(vec![int(1), int(1)], int(0)), (vec![int(1), int(-1)], int(0)), (vec![int(-1), int(1)], int(0)), (vec![int(-1), int(-1)], int(0))],
            &NCSet::open(&HPoly::universe(2)),
        )
        .unwrap();
        let a = RMatrix::from_rows(vec![vec![int(1)], vec![int(1)]], 1);
        for (w, expect) in [(int(1), fin(0)), (int(-2), fin(0)), (int(3), Extended::PosInf)] {
            let r = conjugate_chain(&g, &a, &[w]).unwrap();
            assert!(r.verdict);
            assert_eq!(r.lhs, expect);
        }
        let r = conjugate_chain(&abs_shift(0), &RMatrix::identity(1), &[q(1, 2)]).unwrap();
        assert!(r.verdict && r.lhs == fin(0));

        let (l, rr) = composite_conjugate_check(&abs_shift(0), &abs_shift(0), &RMatrix::identity(1), &[q(1, 2)]).unwrap();
        assert_eq!(l, fin(0));
        assert_eq!(l, rr);
    }
}
