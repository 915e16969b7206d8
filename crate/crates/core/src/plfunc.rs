//! Extended-real nearly convex functions with polyhedral epigraph pieces.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactlp::{Constraint, Extended};
use crate::linalg::{self, RMatrix, RVector};
use crate::ncset::{faces, ri_meet, NCSet, NcError, ROPoly};
use crate::polyhedron::{HPoly, PolyError};
use crate::rational::Rational;
use crate::svmap::{self, SVMap, SvError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FnError {
    #[error(transparent)]
    Set(#[from] NcError),
    #[error(transparent)]
    Map(#[from] SvError),
    #[error("epigraph is not closed under upward vertical rays")]
    NotUpwardClosed { witness: RVector },
    #[error("epigraph slice misses its lower endpoint")]
    SliceNotClosed { witness: RVector },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cone must be given by homogeneous constraints")]
    NotACone,
    #[error("function value is not finite at the query point")]
    ValueNotFinite,
    #[error("function takes the value -inf")]
    Improper,
}

impl From<PolyError> for FnError {
    fn from(e: PolyError) -> Self {
        FnError::Set(NcError::Poly(e))
    }
}

/// `f : R^n → [−∞, +∞]`, stored as `epi f ⊆ R^{n+1}` (last coordinate λ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    pub n: usize,
    pub epi: NCSet,
}

/// `K ⊆ R^m` given by homogeneous constraints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HPoly", into = "HPoly")]
pub struct PolyCone {
    k: HPoly,
}

impl TryFrom<HPoly> for PolyCone {
    type Error = FnError;
    fn try_from(k: HPoly) -> Result<Self, FnError> {
        PolyCone::new(k)
    }
}

impl From<PolyCone> for HPoly {
    fn from(c: PolyCone) -> HPoly {
        c.k
    }
}

impl PolyCone {
    pub fn new(k: HPoly) -> Result<PolyCone, FnError> {
        if k.ineq.iter().chain(&k.eq).any(|c| !c.rhs.is_zero()) {
            return Err(FnError::NotACone);
        }
        Ok(PolyCone { k })
    }

    pub fn orthant(m: usize) -> PolyCone {
        let ineq = (0..m).map(|i| Constraint::new(linalg::neg(&linalg::unit(m, i)), Rational::zero())).collect();
        PolyCone { k: HPoly::new(m, ineq, vec![]) }
    }

    pub fn hpoly(&self) -> &HPoly {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.k.dim
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        self.k.contains(y)
    }

    /// `K* = {y* : ⟨y*, y⟩ ≥ 0 for all y ∈ K}`.
    pub fn dual(&self) -> Result<PolyCone, FnError> {
        let v = self.k.to_vrep()?;
        let m = self.k.dim;
        let ineq = v.rays.iter().map(|r| Constraint::new(linalg::neg(r), Rational::zero())).collect();
        let k = HPoly::new(m, ineq, vec![]).canonical().expect("contains 0");
        Ok(PolyCone { k })
    }
}

pub fn dual_cone(k: &PolyCone) -> Result<PolyCone, FnError> {
    k.dual()
}

fn lambda_coef(c: &Constraint) -> &Rational {
    c.row.last().expect("epigraph rows have a λ entry")
}

/// `cl P + R₊ e_λ` for a closed polyhedron in `R^{n+1}`.
fn add_up_ray(base: &HPoly) -> HPoly {
    let d = base.dim;
    let ray = HPoly::new(1, vec![Constraint::new(vec![-Rational::one()], Rational::zero())], vec![]);
    let mut t = RMatrix::zeros(d, d + 1);
    for i in 0..d {
        t.set(i, i, Rational::one());
    }
    t.set(d - 1, d, Rational::one());
    base.product(&ray).image(&t, &linalg::zeros(d))
}

/// Pieces `ri F ∩ (proj P × R)` for faces `F` of `cl P` made of slice minimizers.
fn lower_endpoints(piece: &ROPoly) -> Vec<ROPoly> {
    let base = piece.base();
    let d = base.dim;
    if base.eq.iter().any(|c| !lambda_coef(c).is_zero()) {
        return vec![];
    }
    if !base.ineq.iter().any(|c| lambda_coef(c).is_negative()) {
        return vec![];
    }
    let coords: Vec<usize> = (0..d - 1).collect();
    let shadow = piece.project(&coords);
    let mut t = RMatrix::zeros(d - 1, d);
    for i in 0..d - 1 {
        t.set(i, i, Rational::one());
    }
    let cyl = shadow.preimage(&t, &linalg::zeros(d - 1)).expect("surjective");
    let mut out = Vec::new();
    for f in faces(base) {
        // lower face: on f, λ is pinned by an equality involving it
        if !f.eq.iter().any(|c| !lambda_coef(c).is_zero()) {
            continue;
        }
        let r = ROPoly::from_canonical(f);
        if let Some(s) = r.intersect(&cyl) {
            out.push(s);
        }
    }
    out
}

impl PLFunction {
    /// Checks the vertical-ray and closed-slice invariants.
    pub fn new(n: usize, epi: NCSet) -> Result<PLFunction, FnError> {
        if epi.dim() != n + 1 {
            return Err(FnError::DimensionMismatch { expected: n + 1, got: epi.dim() });
        }
        let f = PLFunction { n, epi };
        f.check_invariants()?;
        Ok(f)
    }

    /// No invariant checks.
    pub fn trusted(n: usize, epi: NCSet) -> PLFunction {
        debug_assert_eq!(epi.dim(), n + 1);
        PLFunction { n, epi }
    }

    /// Epigraph of `x ↦ inf{λ : (x, λ) ∈ E}` for an upward closed `E`:
    /// adds the missing lower endpoints of every slice.
    pub fn closing_slices(n: usize, e: &NCSet) -> PLFunction {
        let mut pieces: Vec<ROPoly> = e.pieces().to_vec();
        for p in e.pieces() {
            pieces.extend(lower_endpoints(p));
        }
        PLFunction { n, epi: NCSet::from_ro(n + 1, pieces, e.is_validated()) }
    }

    /// `max_i ⟨a_i, x⟩ + b_i` on `domain`, `+∞` elsewhere.
    pub fn max_affine(n: usize, pieces: &[(RVector, Rational)], domain: &NCSet) -> Result<PLFunction, FnError> {
        if domain.dim() != n {
            return Err(FnError::DimensionMismatch { expected: n, got: domain.dim() });
        }
        let mut ineq = Vec::new();
        for (a, b) in pieces {
            if a.len() != n {
                return Err(FnError::DimensionMismatch { expected: n, got: a.len() });
            }
            let mut r = a.clone();
            r.push(-Rational::one());
            ineq.push(Constraint::new(r, -b));
        }
        let epi = NCSet::from_closed(&HPoly::new(n + 1, ineq, vec![]));
        let cyl = domain.cylinder(n + 1, &(0..n).collect::<Vec<_>>());
        let qc = !domain.is_empty() && !pieces.is_empty();
        Ok(PLFunction { n, epi: epi.intersect_pointwise(&cyl, qc && domain.is_validated()) })
    }

    /// Indicator of `s`.
    pub fn indicator(s: &NCSet) -> PLFunction {
        let n = s.dim();
        PLFunction::max_affine(n, &[(linalg::zeros(n), Rational::zero())], s).expect("dims agree")
    }

    /// `x ↦ ⟨a, x⟩ + b` on all of `R^n`.
    pub fn linear(a: &[Rational], b: &Rational) -> PLFunction {
        let n = a.len();
        PLFunction::max_affine(n, &[(a.to_vec(), b.clone())], &NCSet::open(&HPoly::universe(n))).expect("dims agree")
    }

    fn check_invariants(&self) -> Result<(), FnError> {
        let up = self.strict_epi();
        if let Some(w) = self.epi.uncovered_point(&up) {
            return Err(FnError::NotUpwardClosed { witness: w });
        }
        let mut low = Vec::new();
        for p in self.epi.pieces() {
            low.extend(lower_endpoints(p));
        }
        let low = NCSet::from_ro(self.n + 1, low, false);
        if let Some(w) = self.epi.uncovered_point(&low) {
            return Err(FnError::SliceNotClosed { witness: w });
        }
        Ok(())
    }

    /// `{(x, λ) : f(x) < λ}`, one piece `ri(cl P + R₊ e_λ)` per epigraph piece.
    pub fn strict_epi(&self) -> NCSet {
        let pieces = self.epi.pieces().iter().filter_map(|p| ROPoly::ri_of(&add_up_ray(p.base()))).collect();
        NCSet::from_ro(self.n + 1, pieces, false)
    }

    /// `cl(epi_s f) = cl(epi f)`.
    pub fn strict_epi_closure_matches(&self) -> Result<bool, FnError> {
        let a = self.strict_epi().hull()?;
        let b = self.epi.hull()?;
        Ok(a.same_set(&b))
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Extended, FnError> {
        if x.len() != self.n {
            return Err(FnError::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let mut t = RMatrix::zeros(self.n + 1, 1);
        t.set(self.n, 0, Rational::one());
        let mut c = x.to_vec();
        c.push(Rational::zero());
        let mut best = Extended::PosInf;
        for p in self.epi.pieces() {
            let Some(slice) = p.preimage(&t, &c) else { continue };
            let v = slice_min(slice.base());
            if v < best {
                best = v;
            }
        }
        Ok(best)
    }

    pub fn dom(&self) -> NCSet {
        self.epi.project(&(0..self.n).collect::<Vec<_>>())
    }

    /// No point where the value is `−∞`.
    pub fn assert_proper(&self) -> bool {
        self.epi.pieces().iter().all(|p| {
            let b = p.base();
            b.eq.iter().any(|c| !lambda_coef(c).is_zero()) || b.ineq.iter().any(|c| lambda_coef(c).is_negative())
        })
    }

    /// Proper in the usual sense: nowhere `−∞` and somewhere finite.
    pub fn is_proper(&self) -> bool {
        !self.epi.is_empty() && self.assert_proper()
    }

    pub fn epigraphical_map(&self) -> SVMap {
        SVMap::trusted(self.n, 1, self.epi.clone())
    }

    pub fn from_epigraphical(f: &SVMap) -> Result<PLFunction, FnError> {
        if f.p != 1 {
            return Err(FnError::DimensionMismatch { expected: 1, got: f.p });
        }
        PLFunction::new(f.n, f.graph.clone())
    }

    /// `f_Ω = f + δ_Ω` with the flag `ri(dom f) ∩ ri Ω ≠ ∅`.
    pub fn restrict(&self, omega: &NCSet) -> Result<(PLFunction, bool), FnError> {
        let (g, qc) = self.epigraphical_map().restrict(omega)?;
        Ok((PLFunction { n: self.n, epi: g.graph }, qc))
    }

    /// Relative interior of the epigraph.
    pub fn ri_epi(&self) -> Result<Option<ROPoly>, FnError> {
        Ok(self.epi.relative_interior()?)
    }

    pub fn is_nearly_convex(&self) -> Result<bool, FnError> {
        Ok(self.epi.is_nearly_convex()?.nearly_convex)
    }

    /// Points and rays generating `cl epi f`.
    pub fn generators(&self) -> Result<crate::polyhedron::VPoly, FnError> {
        Ok(self.epi.generators()?)
    }
}

pub fn restrict_function(f: &PLFunction, omega: &NCSet) -> Result<(PLFunction, bool), FnError> {
    f.restrict(omega)
}

/// Smallest λ over a canonical closed polyhedron in `R^1`.
fn slice_min(b: &HPoly) -> Extended {
    if let Some(e) = b.eq.first() {
        return Extended::Finite(&e.rhs / &e.row[0]);
    }
    let mut lo: Option<Rational> = None;
    for c in &b.ineq {
        if c.row[0].is_negative() {
            let v = &c.rhs / &c.row[0];
            lo = Some(match lo {
                Some(l) => l.max(v),
                None => v,
            });
        }
    }
    lo.map_or(Extended::NegInf, Extended::Finite)
}

/// `epi_M(g) = {(x, y) : y − G x − c ∈ M}` and whether its relative interior
/// equals `{(x, y) : y − G x − c ∈ ri M}`.
pub fn epi_m(g: &RMatrix, c: &[Rational], m: &NCSet) -> Result<(NCSet, bool), FnError> {
    let p = g.nrows();
    if m.dim() != p || c.len() != p {
        return Err(FnError::DimensionMismatch { expected: p, got: m.dim() });
    }
    let neg_g = RMatrix::from_rows(g.rows().iter().map(|r| linalg::neg(r)).collect(), g.ncols());
    let t = linalg::hcat(&neg_g, &RMatrix::identity(p));
    let shift = linalg::neg(c);
    let (set, _) = m.affine_preimage(&t, &shift)?;
    let (ri_pre, _) = m.ri_set()?.affine_preimage(&t, &shift)?;
    let certified = set.ri_set()?.same_points(&ri_pre);
    Ok((set, certified))
}

/// `φ(x, y) = f(x)` if `x ∈ Θ` and `y ∈ G(x)`, `+∞` otherwise.
pub fn build_composite_phi(f: &PLFunction, theta: &NCSet, g: &SVMap) -> Result<(PLFunction, bool), FnError> {
    let (phi, qc) = svmap::build_phi(theta, &f.epigraphical_map(), g)?;
    Ok((PLFunction { n: phi.n, epi: phi.graph }, qc))
}

/// `ψ(x, u, y) = f(x + u)` if `x ∈ Θ` and `y ∈ G(x)`, `+∞` otherwise.
pub fn build_composite_psi(f: &PLFunction, theta: &NCSet, g: &SVMap) -> Result<(PLFunction, bool), FnError> {
    let (psi, qc) = svmap::build_psi(theta, &f.epigraphical_map(), g)?;
    Ok((PLFunction { n: psi.n, epi: psi.graph }, qc))
}

/// Cone form: `G(x) = {y : g(x) ≤_K y}` with `g(x) = G x + c`.
pub fn build_composite_phi_cone(f: &PLFunction, theta: &NCSet, g: &RMatrix, c: &[Rational], k: &PolyCone) -> Result<(PLFunction, bool), FnError> {
    let gm = SVMap::affine_plus_cone(g, c, k.hpoly())?;
    build_composite_phi(f, theta, &gm)
}

pub fn build_composite_psi_cone(f: &PLFunction, theta: &NCSet, g: &RMatrix, c: &[Rational], k: &PolyCone) -> Result<(PLFunction, bool), FnError> {
    let gm = SVMap::affine_plus_cone(g, c, k.hpoly())?;
    build_composite_psi(f, theta, &gm)
}

/// `φ(x, y) = f(x) + g(A x + y)` for proper `f`, `g`.
pub fn sum_affine_composite(f: &PLFunction, g: &PLFunction, a: &RMatrix) -> Result<PLFunction, FnError> {
    if !f.assert_proper() || !g.assert_proper() {
        return Err(FnError::Improper);
    }
    let m = svmap::sum_with_affine_inner(&f.epigraphical_map(), &g.epigraphical_map(), a)?;
    Ok(PLFunction { n: m.n, epi: m.graph })
}

/// `ri(dom f) ∩ ri Ω ≠ ∅`.
pub fn dom_meets(f: &PLFunction, omega: &NCSet) -> Result<bool, FnError> {
    Ok(ri_meet(&f.dom(), omega)?)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize)]
struct PLOut<'a> {
    n: usize,
    epi: &'a NCSet,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PLIn {
    Epi { n: usize, epi: NCSet },
    MaxAffine { max_affine: Vec<RVector>, domain: NCSet },
}

impl Serialize for PLFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PLOut { n: self.n, epi: &self.epi }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match PLIn::deserialize(d)? {
            PLIn::Epi { n, epi } => PLFunction::new(n, epi).map_err(D::Error::custom),
            PLIn::MaxAffine { max_affine, domain } => {
                let n = domain.dim();
                let pieces = max_affine
                    .into_iter()
                    .map(|mut r| {
                        if r.len() != n + 1 {
                            return Err(D::Error::custom("affine piece length must be n + 1"));
                        }
                        let b = r.pop().expect("nonempty");
                        Ok((r, b))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PLFunction::max_affine(n, &pieces, &domain).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn abs() -> PLFunction {
        PLFunction::max_affine(1, &[(vec![int(1)], int(0)), (vec![int(-1)], int(0))], &NCSet::open(&HPoly::universe(1))).unwrap()
    }

    fn interval(lo: i64, hi: i64) -> NCSet {
        NCSet::from_closed(&HPoly::cube(1, &int(lo), &int(hi)))
    }

    fn fin(v: Rational) -> Extended {
        Extended::Finite(v)
    }

    #[test]
    fn evaluation() {
        let f = abs();
        assert_eq!(f.eval(&[int(-2)]).unwrap(), fin(int(2)));
        let ind = PLFunction::indicator(&interval(0, 1));
        assert_eq!(ind.eval(&[int(2)]).unwrap(), Extended::PosInf);
        assert_eq!(ind.eval(&[q(1, 2)]).unwrap(), fin(int(0)));
        PLFunction::new(1, f.epi.clone()).unwrap();

        // ri{λ ≥ x} plus the boundary face gives a valid epigraph
        let h = HPoly::new(2, vec![Constraint::new(vec![int(1), int(-1)], int(0))], vec![]);
        let g = PLFunction::new(1, NCSet::from_closed(&h)).unwrap();
        assert_eq!(g.eval(&[int(3)]).unwrap(), fin(int(3)));
        let open_only = NCSet::open(&h);
        assert!(matches!(PLFunction::new(1, open_only), Err(FnError::SliceNotClosed { .. })));

        let slab = HPoly::new(2, vec![Constraint::new(vec![int(0), int(1)], int(1))], vec![]);
        assert!(matches!(PLFunction::new(1, NCSet::from_closed(&slab)), Err(FnError::NotUpwardClosed { .. })));
    }

    #[test]
    fn properness() {
        assert!(abs().assert_proper());
        let whole = PLFunction::new(1, NCSet::open(&HPoly::universe(2))).unwrap();
        assert!(!whole.assert_proper());
        assert_eq!(whole.eval(&[int(5)]).unwrap(), Extended::NegInf);
    }

    #[test]
    fn epigraphical_roundtrip() {
        let f = abs();
        let e = f.epigraphical_map();
        let up = NCSet::from_closed(&HPoly::new(1, vec![Constraint::new(vec![int(-1)], int(-1))], vec![]));
        assert!(e.eval(&[int(1)]).unwrap().same_points(&up));
        assert!(e.dom().same_points(&f.dom()));
        assert_eq!(PLFunction::from_epigraphical(&e).unwrap(), f);
    }

    #[test]
    fn restriction() {
        let half_open = NCSet::from_pieces(1, &[HPoly::cube(1, &int(0), &int(1)), HPoly::point(&[int(1)])]);
        let (r, qc) = abs().restrict(&half_open.validate().unwrap()).unwrap();
        assert!(qc);
        assert_eq!(r.eval(&[int(0)]).unwrap(), Extended::PosInf);
        assert_eq!(r.eval(&[int(1)]).unwrap(), fin(int(1)));
        let (same, _) = abs().restrict(&interval(-9, 9)).unwrap();
        assert_eq!(same.eval(&[int(3)]).unwrap(), fin(int(3)));
        let ind = PLFunction::indicator(&interval(0, 1));
        let (_, qc) = ind.restrict(&NCSet::from_closed(&HPoly::point(&[int(1)]))).unwrap();
        assert!(!qc);
    }

    #[test]
    fn epi_m_examples() {
        let up = NCSet::from_closed(&HPoly::new(1, vec![Constraint::new(vec![int(-1)], int(0))], vec![]));
        let (s, ok) = epi_m(&RMatrix::identity(1), &[int(0)], &up).unwrap();
        assert!(ok);
        assert!(s.contains(&[int(1), int(1)]) && !s.contains(&[int(1), int(0)]));
        let ri = s.relative_interior().unwrap().unwrap();
        assert!(ri.contains(&[int(0), q(1, 10)]) && !ri.contains(&[int(0), int(0)]));

        let m = interval(0, 1);
        let (s, ok) = epi_m(&RMatrix::zeros(1, 2), &[int(0)], &m).unwrap();
        assert!(ok);
        assert!(s.same_points(&m.cylinder(3, &[2])));

        // ri(g(X) + M) = g(ri X) + ri M with g(x) = 2x, X = [0,1], M = [0,1)
        let x = interval(0, 1);
        let m = NCSet::from_faces(&HPoly::cube(1, &int(0), &int(1)), &[vec![1]]).unwrap();
        let two = RMatrix::from_rows(vec![vec![int(2)]], 1);
        let lhs = x.linear_image(&two).unwrap().minkowski_sum(&m).unwrap().ri_set().unwrap();
        let rhs = x.ri_set().unwrap().linear_image(&two).unwrap().minkowski_sum(&m.ri_set().unwrap()).unwrap();
        assert!(lhs.same_points(&rhs));
        assert!(lhs.same_points(&NCSet::open(&HPoly::cube(1, &int(0), &int(3)))));
    }

    #[test]
    fn composites() {
        let g = SVMap::affine_plus_cone(&RMatrix::identity(1), &[int(0)], PolyCone::orthant(1).hpoly()).unwrap();
        let (phi, qc) = build_composite_phi(&abs(), &interval(-1, 1), &g).unwrap();
        assert!(qc);
        assert_eq!(phi.eval(&[int(0), int(1)]).unwrap(), fin(int(0)));
        assert_eq!(phi.eval(&[int(0), int(-1)]).unwrap(), Extended::PosInf);
        assert!(phi.is_nearly_convex().unwrap());

        let everything = SVMap::constant(1, &NCSet::open(&HPoly::universe(1)));
        let (phi, _) = build_composite_phi(&abs(), &NCSet::open(&HPoly::universe(1)), &everything).unwrap();
        assert_eq!(phi.eval(&[int(-3), int(7)]).unwrap(), fin(int(3)));

        let s = sum_affine_composite(&abs(), &abs(), &RMatrix::identity(1)).unwrap();
        assert_eq!(s.eval(&[int(1), int(-3)]).unwrap(), fin(int(3)));
        assert!(s.is_nearly_convex().unwrap());

        let (psi, qc) = build_composite_psi(&abs(), &interval(-1, 1), &g).unwrap();
        assert!(qc);
        assert_eq!(psi.eval(&[int(0), int(-2), int(1)]).unwrap(), fin(int(2)));
    }

    #[test]
    fn dual_cones() {
        let k = PolyCone::orthant(1);
        assert!(k.dual().unwrap().hpoly().same_set(k.hpoly()));
        let all = PolyCone::new(HPoly::universe(2)).unwrap();
        assert!(all.dual().unwrap().hpoly().same_set(&HPoly::point(&[int(0), int(0)])));
        let k = PolyCone::new(HPoly::new(
            2,
            vec![Constraint::new(vec![int(-1), int(0)], int(0)), Constraint::new(vec![int(1), int(-1)], int(0))],
            vec![],
        ))
        .unwrap();
        let d = k.dual().unwrap();
        assert!(d.contains(&[int(1), int(0)]) && d.contains(&[int(-1), int(1)]));
        assert!(!d.contains(&[int(-1), q(1, 2)]) && !d.contains(&[int(0), int(-1)]));
    }

    #[test]
    fn lemma_strict_epigraph() {
        assert!(abs().strict_epi_closure_matches().unwrap());
        let (r, _) = abs().restrict(&interval(0, 1)).unwrap();
        assert!(r.strict_epi_closure_matches().unwrap());
    }

    #[test]
    fn json_forms() {
        let s = r#"{"max_affine":[["1","0"],["-1","0"]],"domain":{"dim":1,"pieces":[{"dim":1,"ineq":[]}]}}"#;
        let f: PLFunction = serde_json::from_str(s).unwrap();
        assert_eq!(f.eval(&[int(-4)]).unwrap(), fin(int(4)));
        let back: PLFunction = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
