//! Nearly convex set-valued mappings given by their graphs.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactlp::Constraint;
use crate::linalg::{self, RMatrix, RVector};
use crate::ncset::{ri_common_point, ri_meet, NCSet, NcError, ROPoly};
use crate::polyhedron::HPoly;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SvError {
    #[error(transparent)]
    Set(#[from] NcError),
    #[error("mapping has empty domain")]
    EmptyDomain,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

fn mismatch(expected: usize, got: usize) -> Result<(), SvError> {
    if expected == got {
        Ok(())
    } else {
        Err(SvError::DimensionMismatch { expected, got })
    }
}

/// `F : R^n ⇉ R^p`, stored as `gph F ⊆ R^{n+p}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SVMap {
    pub n: usize,
    pub p: usize,
    pub graph: NCSet,
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

impl SVMap {
    /// Validates the graph.
    pub fn new(n: usize, p: usize, graph: NCSet) -> Result<SVMap, SvError> {
        mismatch(n + p, graph.dim())?;
        Ok(SVMap { n, p, graph: graph.validate()? })
    }

    /// Caller guarantees the graph is nearly convex.
    pub fn trusted(n: usize, p: usize, graph: NCSet) -> SVMap {
        debug_assert_eq!(n + p, graph.dim());
        SVMap { n, p, graph }
    }

    /// Mapping with a closed polyhedral graph.
    pub fn from_closed_graph(n: usize, p: usize, g: &HPoly) -> Result<SVMap, SvError> {
        mismatch(n + p, g.dim)?;
        Ok(SVMap { n, p, graph: NCSet::from_closed(g) })
    }

    /// `F(x) = C` for every `x ∈ R^n`.
    pub fn constant(n: usize, c: &NCSet) -> SVMap {
        let graph = c.cylinder(n + c.dim(), &range(n, n + c.dim()));
        SVMap { n, p: c.dim(), graph }
    }

    /// `F(x) = {T x + c}` on `R^n`.
    pub fn affine(t: &RMatrix, c: &[Rational]) -> SVMap {
        let (p, n) = (t.nrows(), t.ncols());
        let eq = (0..p)
            .map(|i| {
                let mut r = linalg::neg(t.row(i));
                r.extend(linalg::unit(p, i));
                Constraint::new(r, c[i].clone())
            })
            .collect();
        let g = HPoly::new(n + p, vec![], eq);
        SVMap { n, p, graph: NCSet::open(&g) }
    }

    /// `G(x) = g(x) + K` with `g(x) = G x + c` and `K` a polyhedral cone.
    pub fn affine_plus_cone(g: &RMatrix, c: &[Rational], cone: &HPoly) -> Result<SVMap, SvError> {
        let (m, n) = (g.nrows(), g.ncols());
        mismatch(m, cone.dim)?;
        mismatch(m, c.len())?;
        // (x, y) ↦ y − G x − c
        let t = linalg::hcat(&neg_matrix(g), &RMatrix::identity(m));
        let k = NCSet::from_closed(cone);
        let (graph, _) = k.affine_preimage(&t, &linalg::neg(c))?;
        Ok(SVMap { n, p: m, graph: graph.assume_valid() })
    }

    /// `G(x) = {y : y_i ≥ max_j ⟨a_ij, x⟩ + b_ij}`, i.e. `g(x) ≤_K y` with `K`
    /// the nonnegative orthant and `g` componentwise max-affine.
    pub fn max_affine_orthant(n: usize, comps: &[Vec<(RVector, Rational)>]) -> Result<SVMap, SvError> {
        let m = comps.len();
        let mut ineq = Vec::new();
        for (i, pieces) in comps.iter().enumerate() {
            for (a, b) in pieces {
                mismatch(n, a.len())?;
                let mut r = a.clone();
                r.extend(linalg::neg(&linalg::unit(m, i)));
                ineq.push(Constraint::new(r, -b));
            }
        }
        SVMap::from_closed_graph(n, m, &HPoly::new(n + m, ineq, vec![]))
    }

    pub fn eval(&self, x: &[Rational]) -> Result<NCSet, SvError> {
        mismatch(self.n, x.len())?;
        let mut t = RMatrix::zeros(self.n + self.p, self.p);
        for i in 0..self.p {
            t.set(self.n + i, i, Rational::one());
        }
        let mut c = x.to_vec();
        c.extend(linalg::zeros(self.p));
        let pieces = self.graph.pieces().iter().filter_map(|q| q.preimage(&t, &c)).collect();
        Ok(NCSet::from_ro(self.p, pieces, false))
    }

    pub fn dom(&self) -> NCSet {
        self.graph.project(&range(0, self.n))
    }

    pub fn rge(&self) -> NCSet {
        self.graph.project(&range(self.n, self.n + self.p))
    }

    pub fn inverse(&self) -> SVMap {
        let mut perm = range(self.n, self.n + self.p);
        perm.extend(0..self.n);
        SVMap { n: self.p, p: self.n, graph: self.graph.permute(&perm) }
    }

    pub fn ri_graph(&self) -> Result<ROPoly, SvError> {
        self.graph.relative_interior()?.ok_or(SvError::EmptyDomain)
    }

    /// Fiber characterization of the graph's relative interior at `(x, y)`:
    /// returns the pair (in ri gph F, x ∈ ri dom F and y ∈ ri F(x)).
    pub fn ri_fiber_check(&self, x: &[Rational], y: &[Rational]) -> Result<(bool, bool), SvError> {
        let ri = self.ri_graph()?;
        let mut xy = x.to_vec();
        xy.extend(y.iter().cloned());
        let lhs = ri.contains(&xy);
        let dom = self.dom();
        let in_dom = dom.relative_interior()?.is_some_and(|r| r.contains(x));
        let rhs = in_dom && {
            let fx = self.eval(x)?;
            fx.relative_interior()?.is_some_and(|r| r.contains(y))
        };
        Ok((lhs, rhs))
    }

    /// `F(Ω)` with the flag `ri(dom F) ∩ ri Ω ≠ ∅`.
    pub fn image_of_set(&self, omega: &NCSet) -> Result<(NCSet, bool), SvError> {
        mismatch(self.n, omega.dim())?;
        let qc = ri_meet(&self.dom(), omega)?;
        let lifted = omega.cylinder(self.n + self.p, &range(0, self.n));
        let cut = self.graph.intersect_pointwise(&lifted, false);
        let img = cut.project(&range(self.n, self.n + self.p));
        Ok((if qc { img.assume_valid() } else { img }, qc))
    }

    /// `F⁻¹(Θ)` with the flag `ri(rge F) ∩ ri Θ ≠ ∅`.
    pub fn inverse_image(&self, theta: &NCSet) -> Result<(NCSet, bool), SvError> {
        mismatch(self.p, theta.dim())?;
        let qc = ri_meet(&self.rge(), theta)?;
        let (img, _) = self.inverse().image_of_set(theta)?;
        Ok((if qc { img.assume_valid() } else { img }, qc))
    }

    /// `F_Ω` (graph cut to `Ω × R^p`) with the flag `ri(dom F) ∩ ri Ω ≠ ∅`.
    pub fn restrict(&self, omega: &NCSet) -> Result<(SVMap, bool), SvError> {
        mismatch(self.n, omega.dim())?;
        let qc = ri_meet(&self.dom(), omega)?;
        let lifted = omega.cylinder(self.n + self.p, &range(0, self.n));
        let graph = self.graph.intersect_pointwise(&lifted, qc && omega.is_validated());
        Ok((SVMap { n: self.n, p: self.p, graph }, qc))
    }

    /// `F1 + F2` with the flag `ri(dom F1) ∩ ri(dom F2) ≠ ∅`.
    pub fn sum(&self, other: &SVMap) -> Result<(SVMap, bool), SvError> {
        mismatch(self.n, other.n)?;
        mismatch(self.p, other.p)?;
        let (n, p) = (self.n, self.p);
        let qc = ri_meet(&self.dom(), &other.dom())?;
        // (x, y1, y2)
        let total = n + 2 * p;
        let c1 = range(0, n + p);
        let mut c2 = range(0, n);
        c2.extend(n + p..total);
        let g1 = self.graph.cylinder(total, &c1);
        let g2 = other.graph.cylinder(total, &c2);
        let cut = g1.intersect_pointwise(&g2, false);
        let mut t = RMatrix::zeros(n + p, total);
        for i in 0..n {
            t.set(i, i, Rational::one());
        }
        for i in 0..p {
            t.set(n + i, n + i, Rational::one());
            t.set(n + i, n + p + i, Rational::one());
        }
        let graph = cut.affine_image(&t, &linalg::zeros(n + p));
        Ok((SVMap { n, p, graph: if qc { graph.assume_valid() } else { graph } }, qc))
    }

    /// `G ∘ F` for `G = outer`, with the flag `ri(rge F) ∩ ri(dom G) ≠ ∅`.
    pub fn compose(&self, outer: &SVMap) -> Result<(SVMap, bool), SvError> {
        mismatch(self.p, outer.n)?;
        let (n, p, q) = (self.n, self.p, outer.p);
        let qc = ri_meet(&self.rge(), &outer.dom())?;
        let total = n + p + q;
        let gf = self.graph.cylinder(total, &range(0, n + p));
        let gg = outer.graph.cylinder(total, &range(n, total));
        let cut = gf.intersect_pointwise(&gg, false);
        let mut keep = range(0, n);
        keep.extend(n + p..total);
        let graph = cut.project(&keep);
        Ok((SVMap { n, p: q, graph: if qc { graph.assume_valid() } else { graph } }, qc))
    }

    /// Nonempty graph.
    pub fn is_proper(&self) -> bool {
        !self.graph.is_empty()
    }
}

fn neg_matrix(a: &RMatrix) -> RMatrix {
    let rows = a.rows().iter().map(|r| linalg::neg(r)).collect();
    RMatrix::from_rows(rows, a.ncols())
}

/// `Φ(x, y) = F(x)` if `x ∈ Θ` and `y ∈ G(x)`, else empty; flag is
/// `ri(dom F) ∩ ri(dom G) ∩ ri Θ ≠ ∅`.
pub fn build_phi(theta: &NCSet, f: &SVMap, g: &SVMap) -> Result<(SVMap, bool), SvError> {
    let n = f.n;
    mismatch(n, g.n)?;
    mismatch(n, theta.dim())?;
    let (m, p) = (g.p, f.p);
    let qc = ri_common_point(&[&f.dom(), &g.dom(), theta])?.is_some();
    // (x, y, z)
    let total = n + m + p;
    let mut cf = range(0, n);
    cf.extend(n + m..total);
    let a = f.graph.cylinder(total, &cf);
    let b = g.graph.cylinder(total, &range(0, n + m));
    let c = theta.cylinder(total, &range(0, n));
    let graph = a.intersect_pointwise(&b, false).intersect_pointwise(&c, qc);
    Ok((SVMap { n: n + m, p, graph }, qc))
}

/// `Ψ(x, u, y) = F(x + u)` if `x ∈ Θ` and `y ∈ G(x)`, else empty; same flag as
/// [`build_phi`].
pub fn build_psi(theta: &NCSet, f: &SVMap, g: &SVMap) -> Result<(SVMap, bool), SvError> {
    let n = f.n;
    mismatch(n, g.n)?;
    mismatch(n, theta.dim())?;
    let (m, p) = (g.p, f.p);
    let qc = ri_common_point(&[&f.dom(), &g.dom(), theta])?.is_some();
    // (x, u, y, z)
    let total = 2 * n + m + p;
    let mut t = RMatrix::zeros(n + p, total);
    for i in 0..n {
        t.set(i, i, Rational::one());
        t.set(i, n + i, Rational::one());
    }
    for i in 0..p {
        t.set(n + i, 2 * n + m + i, Rational::one());
    }
    let (a, _) = f.graph.affine_preimage(&t, &linalg::zeros(n + p))?;
    let mut cg = range(0, n);
    cg.extend(2 * n..2 * n + m);
    let b = g.graph.cylinder(total, &cg);
    let c = theta.cylinder(total, &range(0, n));
    let graph = a.intersect_pointwise(&b, false).intersect_pointwise(&c, qc);
    Ok((SVMap { n: 2 * n + m, p, graph }, qc))
}

/// `Φ(x, y) = F(x) + G(A x + y)` for proper `F : R^n ⇉ R^q`, `G : R^p ⇉ R^q`
/// and `A` of shape `p × n`. Nearly convex without any qualification.
pub fn sum_with_affine_inner(f: &SVMap, g: &SVMap, a: &RMatrix) -> Result<SVMap, SvError> {
    mismatch(f.p, g.p)?;
    mismatch(g.n, a.nrows())?;
    mismatch(f.n, a.ncols())?;
    if !f.is_proper() || !g.is_proper() {
        return Err(SvError::EmptyDomain);
    }
    let (n, p, q) = (f.n, g.n, f.p);
    // (x, y, z1, z2)
    let total = n + p + 2 * q;
    let mut cf = range(0, n);
    cf.extend(n + p..n + p + q);
    let lf = f.graph.cylinder(total, &cf);
    let mut t = RMatrix::zeros(p + q, total);
    for i in 0..p {
        for j in 0..n {
            t.set(i, j, a.get(i, j).clone());
        }
        t.set(i, n + i, Rational::one());
    }
    for i in 0..q {
        t.set(p + i, n + p + q + i, Rational::one());
    }
    let (lg, _) = g.graph.affine_preimage(&t, &linalg::zeros(p + q))?;
    let cut = lf.intersect_pointwise(&lg, false);
    let mut s = RMatrix::zeros(n + p + q, total);
    for i in 0..n + p {
        s.set(i, i, Rational::one());
    }
    for i in 0..q {
        s.set(n + p + i, n + p + i, Rational::one());
        s.set(n + p + i, n + p + q + i, Rational::one());
    }
    let graph = cut.affine_image(&s, &linalg::zeros(n + p + q)).assume_valid();
    Ok(SVMap { n: n + p, p: q, graph })
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize)]
struct SVMapOut<'a> {
    n: usize,
    p: usize,
    graph: &'a NCSet,
}

#[derive(Deserialize)]
struct AffinePart {
    #[serde(rename = "G")]
    g: RMatrix,
    c: RVector,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SVMapIn {
    Graph { n: usize, p: usize, graph: NCSet },
    Cone { g_affine: AffinePart, cone: HPoly },
}

impl Serialize for SVMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SVMapOut { n: self.n, p: self.p, graph: &self.graph }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SVMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = match SVMapIn::deserialize(d)? {
            SVMapIn::Graph { n, p, graph } => SVMap::new(n, p, graph),
            SVMapIn::Cone { g_affine, cone } => SVMap::affine_plus_cone(&g_affine.g, &g_affine.c, &cone),
        };
        r.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn c(row: &[i64], rhs: i64) -> Constraint {
        Constraint::new(row.iter().map(|&x| int(x)).collect(), int(rhs))
    }

    fn interval(lo: i64, hi: i64) -> HPoly {
        HPoly::cube(1, &int(lo), &int(hi))
    }

    /// gph F = {0 ≤ x ≤ 2, x ≤ y ≤ x + 1}
    fn strip() -> SVMap {
        let g = HPoly::new(2, vec![c(&[1, 0], 2), c(&[-1, 0], 0), c(&[1, -1], 0), c(&[-1, 1], 1)], vec![]);
        SVMap::from_closed_graph(1, 1, &g).unwrap()
    }

    fn closed(lo: i64, hi: i64) -> NCSet {
        NCSet::from_closed(&interval(lo, hi))
    }

    fn point(v: i64) -> NCSet {
        NCSet::from_closed(&HPoly::point(&[int(v)]))
    }

    #[test]
    fn eval_dom_rge_inverse() {
        let f = strip();
        assert!(f.eval(&[int(1)]).unwrap().same_points(&closed(1, 2)));
        assert!(f.dom().same_points(&closed(0, 2)));
        assert!(f.rge().same_points(&closed(0, 3)));
        assert!(f.inverse().eval(&[int(2)]).unwrap().same_points(&closed(1, 2)));
        assert!(f.inverse().inverse().graph.same_points(&f.graph));
    }

    #[test]
    fn ri_graph_fibers() {
        let f = strip();
        let ri = f.ri_graph().unwrap();
        let strict = HPoly::new(2, vec![c(&[1, 0], 2), c(&[-1, 0], 0), c(&[1, -1], 0), c(&[-1, 1], 1)], vec![]);
        assert_eq!(Some(ri), ROPoly::ri_of(&strict));
        for (x, y) in [(q(1, 1), q(3, 2)), (q(1, 1), q(1, 1)), (q(0, 1), q(1, 2)), (q(1, 2), q(1, 1))] {
            let (l, r) = f.ri_fiber_check(&[x], &[y]).unwrap();
            assert_eq!(l, r);
        }
        let k = SVMap::constant(1, &closed(0, 1));
        assert!(k.ri_graph().unwrap().contains(&[int(100), q(1, 2)]));
    }

    #[test]
    fn images_and_inverse_images() {
        let f = strip();
        let (img, qc) = f.image_of_set(&closed(0, 1)).unwrap();
        assert!(qc && img.same_points(&closed(0, 2)));
        let (img, qc) = f.image_of_set(&point(1)).unwrap();
        assert!(qc && img.same_points(&closed(1, 2)));
        let below = NCSet::from_closed(&HPoly::new(1, vec![c(&[1], 0)], vec![]));
        let (img, qc) = f.image_of_set(&below).unwrap();
        assert!(!qc && img.same_points(&closed(0, 1)));

        let (pre, qc) = f.inverse_image(&point(2)).unwrap();
        assert!(qc && pre.same_points(&closed(1, 2)));
        let (pre, qc) = f.inverse_image(&f.rge()).unwrap();
        assert!(qc && pre.same_points(&f.dom()));
        let (pre, qc) = f.inverse_image(&point(3)).unwrap();
        assert!(!qc && pre.same_points(&point(2)));
    }

    #[test]
    fn restrictions() {
        let f = strip();
        let (r, qc) = f.restrict(&closed(0, 1)).unwrap();
        assert!(qc);
        assert!(r.ri_graph().unwrap().contains(&[q(1, 2), q(1, 1)]));
        assert!(!r.ri_graph().unwrap().contains(&[q(3, 2), q(2, 1)]));
        let (r, qc) = f.restrict(&closed(-5, 5)).unwrap();
        assert!(qc && r.graph.same_points(&f.graph));
        let (_, qc) = f.restrict(&point(2)).unwrap();
        assert!(!qc);
    }

    #[test]
    fn sums() {
        let f1 = SVMap::constant(1, &closed(0, 1));
        let f2 = SVMap::affine(&RMatrix::identity(1), &[int(0)]);
        let (s, qc) = f1.sum(&f2).unwrap();
        assert!(qc);
        let expect = HPoly::new(2, vec![c(&[1, -1], 0), c(&[-1, 1], 1)], vec![]);
        assert!(s.graph.same_points(&NCSet::from_closed(&expect)));
        let zero = SVMap::constant(1, &point(0));
        let (s, _) = f1.sum(&zero).unwrap();
        assert!(s.graph.same_points(&f1.graph));
        let a = SVMap::from_closed_graph(1, 1, &HPoly::cube(2, &int(0), &int(1))).unwrap();
        let b = SVMap::from_closed_graph(1, 1, &interval(1, 2).product(&interval(0, 1))).unwrap();
        assert!(!a.sum(&b).unwrap().1);
    }

    #[test]
    fn compositions() {
        let f = strip();
        let g = SVMap::affine(&RMatrix::from_rows(vec![vec![int(2)]], 1), &[int(0)]);
        let (h, qc) = f.compose(&g).unwrap();
        assert!(qc);
        assert!(h.eval(&[int(1)]).unwrap().same_points(&closed(2, 4)));
        assert!(h.ri_graph().unwrap().contains(&[int(1), int(3)]));
        let (same, _) = f.compose(&SVMap::affine(&RMatrix::identity(1), &[int(0)])).unwrap();
        assert!(same.graph.same_points(&f.graph));
        let touch = SVMap::from_closed_graph(1, 1, &interval(3, 4).product(&interval(0, 1))).unwrap();
        assert!(!f.compose(&touch).unwrap().1);
    }

    #[test]
    fn phi_and_psi() {
        let f = strip();
        let g = SVMap::affine(&RMatrix::identity(1), &[int(0)]);
        let theta = closed(0, 2);
        let (phi, qc) = build_phi(&theta, &f, &g).unwrap();
        assert!(qc);
        assert!(phi.graph.is_nearly_convex().unwrap().nearly_convex);
        assert!(phi.eval(&[int(1), int(1)]).unwrap().same_points(&closed(1, 2)));
        assert!(phi.eval(&[int(1), int(0)]).unwrap().is_empty());

        let (psi, qc) = build_psi(&theta, &f, &g).unwrap();
        assert!(qc);
        assert!(psi.eval(&[int(1), int(0), int(1)]).unwrap().same_points(&closed(1, 2)));
        assert!(psi.eval(&[int(0), int(1), int(0)]).unwrap().same_points(&closed(1, 2)));

        let (_, qc) = build_phi(&closed(5, 6), &f, &g).unwrap();
        assert!(!qc);
    }

    #[test]
    fn affine_inner_sum() {
        let f = SVMap::constant(1, &closed(0, 1));
        let g = SVMap::affine(&RMatrix::identity(1), &[int(0)]);
        let a = RMatrix::identity(1);
        let phi = sum_with_affine_inner(&f, &g, &a).unwrap();
        assert!(phi.eval(&[int(1), int(2)]).unwrap().same_points(&closed(3, 4)));

        let f2 = SVMap::from_closed_graph(1, 1, &interval(0, 1).product(&interval(0, 1))).unwrap();
        let g2 = SVMap::from_closed_graph(1, 1, &interval(5, 6).product(&interval(0, 0))).unwrap();
        let phi = sum_with_affine_inner(&f2, &g2, &a).unwrap();
        assert!(phi.graph.is_nearly_convex().unwrap().nearly_convex);
        assert!(!phi.graph.is_empty());

        let bad = RMatrix::zeros(2, 1);
        assert!(matches!(sum_with_affine_inner(&f, &g, &bad), Err(SvError::DimensionMismatch { .. })));
    }

    #[test]
    fn cone_wrapper_json() {
        let s = r#"{"g_affine":{"G":[["1"]],"c":["0"]},"cone":{"dim":1,"ineq":[["-1","0"]]}}"#;
        let m: SVMap = serde_json::from_str(s).unwrap();
        assert!(m.eval(&[int(2)]).unwrap().same_points(&NCSet::from_closed(&HPoly::new(1, vec![c(&[-1], -2)], vec![]))));
        let back: SVMap = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert!(back.graph.same_points(&m.graph));
    }
}
