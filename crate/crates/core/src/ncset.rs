//! Nearly convex sets as finite unions of relatively open polyhedra.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactlp::{self, Constraint, MixedSystem};
use crate::linalg::{self, RMatrix, RVector};
use crate::polyhedron::{HPoly, PolyError, VPoly};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NcError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("set is not nearly convex (witness {witness:?})")]
    NotNearlyConvex { witness: Option<RVector> },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not in the set")]
    PointNotInSet,
    #[error("face index {0} out of range")]
    BadFaceIndex(usize),
}

/// `ri(base)` for a canonical, nonempty closed polyhedron `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ROPoly {
    base: HPoly,
}

impl ROPoly {
    /// Relative interior of `p`; `None` when `p` is empty.
    pub fn ri_of(p: &HPoly) -> Option<ROPoly> {
        p.canonical().map(|base| ROPoly { base })
    }

    /// The base must already be canonical.
    pub fn from_canonical(base: HPoly) -> ROPoly {
        ROPoly { base }
    }

    pub fn base(&self) -> &HPoly {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim
    }

    /// Dimension of the affine hull.
    pub fn aff_dim(&self) -> usize {
        self.base.dim - self.base.eq.len()
    }

    pub fn system(&self) -> MixedSystem {
        self.base.strict_system()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.base.dim && self.system().satisfied_by(x)
    }

    /// A point of the piece.
    pub fn witness(&self) -> RVector {
        exactlp::feasible(&self.system()).expect("pieces are nonempty")
    }

    pub fn meets(&self, other: &ROPoly) -> bool {
        let mut s = self.system();
        s.append(&other.system());
        exactlp::feasible(&s).is_some()
    }

    /// `ri Q ∩ ri Q'`, which is `ri(Q ∩ Q')` whenever nonempty.
    pub fn intersect(&self, other: &ROPoly) -> Option<ROPoly> {
        if !self.meets(other) {
            return None;
        }
        ROPoly::ri_of(&self.base.intersect(&other.base))
    }

    pub fn product(&self, other: &ROPoly) -> ROPoly {
        // product of canonical forms is canonical up to normalization
        let p = self.base.product(&other.base);
        ROPoly { base: p.renormalized().expect("nonempty") }
    }

    /// `T(ri Q) + c = ri(T Q + c)`.
    pub fn image(&self, t: &RMatrix, c: &[Rational]) -> ROPoly {
        ROPoly::ri_of(&self.base.image(t, c)).expect("image of a nonempty set")
    }

    /// `{x : T x + c ∈ ri Q}`, equal to `ri` of the closed preimage when nonempty.
    pub fn preimage(&self, t: &RMatrix, c: &[Rational]) -> Option<ROPoly> {
        let pulled = self.base.preimage(t, c);
        exactlp::feasible(&pulled.strict_system())?;
        ROPoly::ri_of(&pulled)
    }

    /// Coordinate projection, `ri` of the projected base.
    pub fn project(&self, coords: &[usize]) -> ROPoly {
        ROPoly::ri_of(&self.base.project(coords)).expect("projection of a nonempty set")
    }

    pub fn permute(&self, perm: &[usize]) -> ROPoly {
        ROPoly { base: self.base.permute(perm).renormalized().expect("nonempty") }
    }

    /// `ri Q' ⊆ ri Q` for `Q' = other`.
    pub fn contains_ro(&self, other: &ROPoly) -> bool {
        self.base.contains_poly(&other.base) && self.meets(other)
    }
}

impl Serialize for ROPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.base.serialize(s)
    }
}

/// Finite union of relatively open polyhedra in `R^dim`.
#[derive(Debug)]
pub struct NCSet {
    dim: usize,
    pieces: Vec<ROPoly>,
    validated: bool,
    hull: OnceLock<Result<HPoly, PolyError>>,
}

impl Clone for NCSet {
    fn clone(&self) -> Self {
        let hull = OnceLock::new();
        if let Some(h) = self.hull.get() {
            let _ = hull.set(h.clone());
        }
        NCSet { dim: self.dim, pieces: self.pieces.clone(), validated: self.validated, hull }
    }
}

impl PartialEq for NCSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.pieces == other.pieces
    }
}

impl Eq for NCSet {}

/// Outcome of the near-convexity test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcDiagnostic {
    pub nearly_convex: bool,
    /// `closure_gap`: a hull point outside every piece closure;
    /// `interior_gap`: a point of ri(hull) outside every piece.
    pub reason: Option<&'static str>,
    pub witness: Option<RVector>,
}

fn sort_key(p: &ROPoly) -> String {
    serde_json::to_string(&p.base).expect("serializable")
}

impl NCSet {
    /// Builds from relatively open pieces (given by their closures); not validated.
    pub fn from_pieces(dim: usize, bases: &[HPoly]) -> NCSet {
        let pieces = bases.iter().filter_map(ROPoly::ri_of).collect();
        NCSet::from_ro(dim, pieces, false)
    }

    pub fn from_ro(dim: usize, mut pieces: Vec<ROPoly>, validated: bool) -> NCSet {
        debug_assert!(pieces.iter().all(|p| p.dim() == dim));
        pieces.sort_by_cached_key(sort_key);
        pieces.dedup();
        NCSet { dim, pieces, validated, hull: OnceLock::new() }
    }

    pub fn empty(dim: usize) -> NCSet {
        NCSet { dim, pieces: vec![], validated: true, hull: OnceLock::new() }
    }

    pub fn single(piece: ROPoly) -> NCSet {
        let dim = piece.dim();
        NCSet::from_ro(dim, vec![piece], true)
    }

    /// ri of a closed polyhedron.
    pub fn open(p: &HPoly) -> NCSet {
        match ROPoly::ri_of(p) {
            Some(r) => NCSet::single(r),
            None => NCSet::empty(p.dim),
        }
    }

    /// A closed polyhedron, as the union of the relative interiors of its faces.
    pub fn from_closed(p: &HPoly) -> NCSet {
        let faces = faces(p);
        let pieces = faces.into_iter().map(ROPoly::from_canonical).collect();
        NCSet::from_ro(p.dim, pieces, true)
    }

    /// `ri P` together with `ri F` for each listed face, a face given by the
    /// indices of the inequalities of `p` made tight.
    pub fn from_faces(p: &HPoly, active: &[Vec<usize>]) -> Result<NCSet, NcError> {
        let mut pieces: Vec<ROPoly> = ROPoly::ri_of(p).into_iter().collect();
        for set in active {
            let mut f = p.clone();
            for &i in set {
                let row = p.ineq.get(i).ok_or(NcError::BadFaceIndex(i))?;
                f.eq.push(row.clone());
            }
            if let Some(r) = ROPoly::ri_of(&f) {
                pieces.push(r);
            }
        }
        Ok(NCSet::from_ro(p.dim, pieces, true))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[ROPoly] {
        &self.pieces
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Marks the set validated after running the near-convexity test.
    pub fn validate(mut self) -> Result<NCSet, NcError> {
        if self.validated {
            return Ok(self);
        }
        let d = self.is_nearly_convex()?;
        if d.nearly_convex {
            self.validated = true;
            Ok(self)
        } else {
            Err(NcError::NotNearlyConvex { witness: d.witness })
        }
    }

    /// Trusts the caller (constructions covered by a theorem).
    pub fn assume_valid(mut self) -> NCSet {
        self.validated = true;
        self
    }

    pub fn membership(&self, x: &[Rational]) -> Result<bool, NcError> {
        if x.len() != self.dim {
            return Err(NcError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(self.pieces.iter().any(|p| p.contains(x)))
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    /// Union of the V-representations of all piece closures.
    pub fn generators(&self) -> Result<VPoly, PolyError> {
        let mut points = BTreeSet::new();
        let mut rays = BTreeSet::new();
        for p in &self.pieces {
            let v = p.base.to_vrep()?;
            points.extend(v.points);
            rays.extend(v.rays);
        }
        Ok(VPoly { dim: self.dim, points: points.into_iter().collect(), rays: rays.into_iter().collect() })
    }

    /// Canonical closed convex hull of the union of piece closures (cached).
    pub fn hull(&self) -> Result<HPoly, PolyError> {
        self.hull
            .get_or_init(|| {
                if self.pieces.is_empty() {
                    return Ok(HPoly::empty(self.dim));
                }
                if self.pieces.len() == 1 {
                    return Ok(self.pieces[0].base.clone());
                }
                let h = self.generators()?.to_hrep()?;
                // DD output has no implicit equalities or redundant rows
                Ok(h)
            })
            .clone()
    }

    pub fn is_nearly_convex(&self) -> Result<NcDiagnostic, NcError> {
        if self.pieces.is_empty() {
            return Ok(NcDiagnostic { nearly_convex: true, reason: None, witness: None });
        }
        let h = self.hull()?;
        let closed: Vec<MixedSystem> = sorted_by_dim(&self.pieces).iter().map(|p| p.base.system()).collect();
        if let Some(w) = uncovered(&h.system(), &closed) {
            return Ok(NcDiagnostic { nearly_convex: false, reason: Some("closure_gap"), witness: Some(w) });
        }
        let open: Vec<MixedSystem> = sorted_by_dim(&self.pieces).iter().map(|p| p.system()).collect();
        if let Some(w) = uncovered(&h.strict_system(), &open) {
            return Ok(NcDiagnostic { nearly_convex: false, reason: Some("interior_gap"), witness: Some(w) });
        }
        Ok(NcDiagnostic { nearly_convex: true, reason: None, witness: None })
    }

    fn require_valid(&self) -> Result<(), NcError> {
        if self.validated {
            return Ok(());
        }
        let d = self.is_nearly_convex()?;
        if d.nearly_convex {
            Ok(())
        } else {
            Err(NcError::NotNearlyConvex { witness: d.witness })
        }
    }

    pub fn closure(&self) -> Result<HPoly, NcError> {
        self.require_valid()?;
        Ok(self.hull()?)
    }

    pub fn relative_interior(&self) -> Result<Option<ROPoly>, NcError> {
        self.require_valid()?;
        let h = self.hull()?;
        Ok(h.canonical().map(ROPoly::from_canonical))
    }

    /// `ri` as a set (empty when the set is empty).
    pub fn ri_set(&self) -> Result<NCSet, NcError> {
        Ok(match self.relative_interior()? {
            Some(r) => NCSet::single(r),
            None => NCSet::empty(self.dim),
        })
    }

    pub fn affine_hull(&self) -> Result<Vec<Constraint>, NcError> {
        self.require_valid()?;
        Ok(self.hull()?.affine_hull()?)
    }

    pub fn product(&self, other: &NCSet) -> NCSet {
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                pieces.push(a.product(b));
            }
        }
        NCSet::from_ro(self.dim + other.dim, pieces, self.validated && other.validated)
    }

    /// Pointwise intersection together with the flag `ri S1 ∩ ri S2 ≠ ∅`.
    pub fn intersect(&self, other: &NCSet) -> Result<(NCSet, bool), NcError> {
        self.same_dim(other)?;
        let qc = ri_meet(self, other)?;
        Ok((self.intersect_pointwise(other, qc && self.validated && other.validated), qc))
    }

    pub fn intersect_pointwise(&self, other: &NCSet, validated: bool) -> NCSet {
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                if let Some(r) = a.intersect(b) {
                    pieces.push(r);
                }
            }
        }
        NCSet::from_ro(self.dim, pieces, validated)
    }

    pub fn affine_image(&self, t: &RMatrix, c: &[Rational]) -> NCSet {
        assert_eq!(t.ncols(), self.dim);
        let pieces = self.pieces.iter().map(|p| p.image(t, c)).collect();
        NCSet::from_ro(t.nrows(), pieces, self.validated)
    }

    pub fn linear_image(&self, t: &RMatrix) -> Result<NCSet, NcError> {
        if t.ncols() != self.dim {
            return Err(NcError::DimensionMismatch { expected: self.dim, got: t.ncols() });
        }
        Ok(self.affine_image(t, &linalg::zeros(t.nrows())))
    }

    /// Projection onto the listed coordinates.
    pub fn project(&self, coords: &[usize]) -> NCSet {
        let pieces = self.pieces.iter().map(|p| p.project(coords)).collect();
        NCSet::from_ro(coords.len(), pieces, self.validated)
    }

    pub fn minkowski_sum(&self, other: &NCSet) -> Result<NCSet, NcError> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut t = RMatrix::zeros(n, 2 * n);
        for i in 0..n {
            t.set(i, i, Rational::one());
            t.set(i, n + i, Rational::one());
        }
        self.product(other).linear_image(&t)
    }

    /// `{x : T x + c ∈ S}` with the flag `T⁻¹(ri S) ≠ ∅` (shifted by `c`).
    pub fn affine_preimage(&self, t: &RMatrix, c: &[Rational]) -> Result<(NCSet, bool), NcError> {
        if t.nrows() != self.dim {
            return Err(NcError::DimensionMismatch { expected: self.dim, got: t.nrows() });
        }
        let qc = match self.relative_interior()? {
            Some(r) => r.preimage(t, c).is_some(),
            None => false,
        };
        let pieces = self.pieces.iter().filter_map(|p| p.preimage(t, c)).collect();
        Ok((NCSet::from_ro(t.ncols(), pieces, qc && self.validated), qc))
    }

    pub fn preimage(&self, t: &RMatrix) -> Result<(NCSet, bool), NcError> {
        self.affine_preimage(t, &linalg::zeros(t.nrows()))
    }

    /// Cylinder `{z ∈ R^total : z[coords] ∈ S}`; always nearly convex when `S` is.
    pub fn cylinder(&self, total: usize, coords: &[usize]) -> NCSet {
        assert_eq!(coords.len(), self.dim);
        let t = selection(total, coords);
        let pieces =
            self.pieces.iter().map(|p| ROPoly { base: p.base.preimage(&t, &linalg::zeros(self.dim)).renormalized().expect("nonempty") }).collect();
        NCSet::from_ro(total, pieces, self.validated)
    }

    pub fn permute(&self, perm: &[usize]) -> NCSet {
        let pieces = self.pieces.iter().map(|p| p.permute(perm)).collect();
        NCSet::from_ro(self.dim, pieces, self.validated)
    }

    /// `other ⊆ self` as point sets.
    pub fn contains_set(&self, other: &NCSet) -> bool {
        assert_eq!(self.dim, other.dim);
        let subs: Vec<MixedSystem> = sorted_by_dim(&self.pieces).iter().map(|p| p.system()).collect();
        other.pieces.iter().all(|p| uncovered(&p.system(), &subs).is_none())
    }

    /// A point of `other` not in `self`, if any.
    pub fn uncovered_point(&self, other: &NCSet) -> Option<RVector> {
        let subs: Vec<MixedSystem> = sorted_by_dim(&self.pieces).iter().map(|p| p.system()).collect();
        other.pieces.iter().find_map(|p| uncovered(&p.system(), &subs))
    }

    pub fn same_points(&self, other: &NCSet) -> bool {
        self.dim == other.dim && self.contains_set(other) && other.contains_set(self)
    }

    pub fn union(&self, other: &NCSet) -> NCSet {
        assert_eq!(self.dim, other.dim);
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        NCSet::from_ro(self.dim, pieces, false)
    }

    fn same_dim(&self, other: &NCSet) -> Result<(), NcError> {
        if self.dim != other.dim {
            Err(NcError::DimensionMismatch { expected: self.dim, got: other.dim })
        } else {
            Ok(())
        }
    }
}

/// `ri S1 ∩ ri S2 ≠ ∅` for nearly convex sets.
pub fn ri_meet(a: &NCSet, b: &NCSet) -> Result<bool, NcError> {
    let (Some(ra), Some(rb)) = (a.relative_interior()?, b.relative_interior()?) else {
        return Ok(false);
    };
    Ok(ra.meets(&rb))
}

/// Common point of several relative interiors.
pub fn ri_common_point(sets: &[&NCSet]) -> Result<Option<RVector>, NcError> {
    let Some(first) = sets.first() else { return Ok(None) };
    let mut sys = MixedSystem::new(first.dim());
    for s in sets {
        match s.relative_interior()? {
            Some(r) => sys.append(&r.system()),
            None => return Ok(None),
        }
    }
    Ok(exactlp::feasible(&sys))
}

/// 0/1 matrix picking `coords` out of `R^n`.
pub fn selection(n: usize, coords: &[usize]) -> RMatrix {
    let mut t = RMatrix::zeros(coords.len(), n);
    for (i, &c) in coords.iter().enumerate() {
        t.set(i, c, Rational::one());
    }
    t
}

fn sorted_by_dim(pieces: &[ROPoly]) -> Vec<&ROPoly> {
    let mut v: Vec<&ROPoly> = pieces.iter().collect();
    v.sort_by_key(|p| std::cmp::Reverse(p.aff_dim()));
    v
}

/// A point of `cell` outside every system in `subs`, by recursive cell splitting.
fn uncovered(cell: &MixedSystem, subs: &[MixedSystem]) -> Option<RVector> {
    let w = exactlp::feasible(cell)?;
    if !subs.iter().any(|s| s.satisfied_by(&w)) {
        return Some(w);
    }
    for (i, s) in subs.iter().enumerate() {
        let mut inter = cell.clone();
        inter.append(s);
        if exactlp::feasible(&inter).is_none() {
            continue;
        }
        let rest = &subs[i + 1..];
        let mut prefix = cell.clone();
        for c in &s.eq {
            for side in [c.clone(), Constraint::new(linalg::neg(&c.row), -&c.rhs)] {
                let mut sub = prefix.clone();
                sub.strict.push(side);
                if let Some(p) = uncovered(&sub, rest) {
                    return Some(p);
                }
            }
            prefix.eq.push(c.clone());
        }
        for c in &s.weak {
            let mut sub = prefix.clone();
            sub.strict.push(Constraint::new(linalg::neg(&c.row), -&c.rhs));
            if let Some(p) = uncovered(&sub, rest) {
                return Some(p);
            }
            prefix.weak.push(c.clone());
        }
        for c in &s.strict {
            let mut sub = prefix.clone();
            sub.weak.push(Constraint::new(linalg::neg(&c.row), -&c.rhs));
            if let Some(p) = uncovered(&sub, rest) {
                return Some(p);
            }
            prefix.strict.push(c.clone());
        }
        return None;
    }
    Some(w)
}

/// All nonempty faces of a closed polyhedron, canonical.
pub fn faces(p: &HPoly) -> Vec<HPoly> {
    let Some(top) = p.canonical() else { return vec![] };
    let mut seen: BTreeSet<HPoly> = BTreeSet::new();
    let mut stack = vec![top.clone()];
    seen.insert(top);
    while let Some(f) = stack.pop() {
        for r in &f.ineq {
            let mut g = f.clone();
            g.eq.push(r.clone());
            if let Some(c) = g.canonical() {
                if seen.insert(c.clone()) {
                    stack.push(c);
                }
            }
        }
    }
    seen.into_iter().collect()
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize)]
struct NCSetOut<'a> {
    dim: usize,
    pieces: Vec<&'a HPoly>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NCSetIn {
    Pieces { dim: usize, pieces: Vec<HPoly> },
    Faces { closure: HPoly, faces: Vec<Vec<usize>> },
}

impl Serialize for NCSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NCSetOut { dim: self.dim, pieces: self.pieces.iter().map(|p| &p.base).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NCSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match NCSetIn::deserialize(d)? {
            NCSetIn::Pieces { dim, pieces } => {
                if pieces.iter().any(|p| p.dim != dim) {
                    return Err(serde::de::Error::custom("piece dimension mismatch"));
                }
                Ok(NCSet::from_pieces(dim, &pieces))
            }
            NCSetIn::Faces { closure, faces } => NCSet::from_faces(&closure, &faces).map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn c(row: &[i64], rhs: i64) -> Constraint {
        Constraint::new(row.iter().map(|&x| int(x)).collect(), int(rhs))
    }

    fn square() -> HPoly {
        HPoly::cube(2, &int(0), &int(1))
    }

    fn pt(x: &[Rational]) -> HPoly {
        HPoly::point(x)
    }

    /// Unit square with (1/2, 0) removed.
    pub(crate) fn omega_b() -> NCSet {
        let s = square();
        let edge = |i: usize| {
            let mut e = s.clone();
            e.eq.push(s.ineq[i].clone());
            e
        };
        // ineq order of cube: x ≤ 1, −x ≤ 0, y ≤ 1, −y ≤ 0
        let mut left_half = s.clone();
        left_half.eq.push(c(&[0, 1], 0));
        left_half.ineq.push(Constraint::new(vec![int(1), int(0)], q(1, 2)));
        let mut right_half = s.clone();
        right_half.eq.push(c(&[0, 1], 0));
        right_half.ineq.push(Constraint::new(vec![int(-1), int(0)], q(-1, 2)));
        let pieces = vec![
            s.clone(),
            edge(0),
            edge(1),
            edge(2),
            left_half,
            right_half,
            pt(&[int(0), int(0)]),
            pt(&[int(1), int(0)]),
            pt(&[int(0), int(1)]),
            pt(&[int(1), int(1)]),
        ];
        NCSet::from_pieces(2, &pieces)
    }

    #[test]
    fn omega_b_membership() {
        let o = omega_b();
        assert_eq!(o.pieces().len(), 10);
        assert!(!o.membership(&[q(1, 2), int(0)]).unwrap());
        assert!(o.membership(&[q(1, 2), q(1, 2)]).unwrap());
        assert!(o.membership(&[q(1, 4), int(0)]).unwrap());
        assert!(o.membership(&[int(1), int(0)]).unwrap());
    }

    #[test]
    fn near_convexity_examples() {
        assert!(omega_b().is_nearly_convex().unwrap().nearly_convex);

        let two = NCSet::from_pieces(1, &[pt(&[int(0)]), pt(&[int(1)])]);
        let d = two.is_nearly_convex().unwrap();
        assert!(!d.nearly_convex);
        assert_eq!(d.witness, Some(vec![q(1, 2)]));

        assert!(NCSet::open(&square()).is_nearly_convex().unwrap().nearly_convex);

        let edges = NCSet::from_closed(&square());
        let boundary: Vec<ROPoly> = edges.pieces().iter().filter(|p| p.aff_dim() < 2).cloned().collect();
        let d = NCSet::from_ro(2, boundary, false).is_nearly_convex().unwrap();
        assert_eq!(d.reason, Some("closure_gap"));

        // closure convex, but the open halves miss the line x = 1/2
        let mut left = square();
        left.ineq.push(Constraint::new(vec![int(1), int(0)], q(1, 2)));
        let mut right = square();
        right.ineq.push(Constraint::new(vec![int(-1), int(0)], q(-1, 2)));
        let d = NCSet::from_pieces(2, &[left, right]).is_nearly_convex().unwrap();
        assert_eq!(d.reason, Some("interior_gap"));
    }

    #[test]
    fn closure_and_ri() {
        let o = omega_b().validate().unwrap();
        assert!(o.closure().unwrap().same_set(&square()));
        assert_eq!(o.relative_interior().unwrap(), ROPoly::ri_of(&square()));

        let half_open = NCSet::from_pieces(1, &[HPoly::cube(1, &int(0), &int(1)), pt(&[int(1)])]);
        assert!(half_open.closure().unwrap().same_set(&HPoly::cube(1, &int(0), &int(1))));
        let p = NCSet::from_pieces(2, &[pt(&[int(1), int(2)])]);
        assert_eq!(p.relative_interior().unwrap().unwrap().base(), &pt(&[int(1), int(2)]).canonical().unwrap());
    }

    fn half_open_unit() -> NCSet {
        NCSet::from_pieces(1, &[HPoly::cube(1, &int(0), &int(1)), pt(&[int(1)])]).validate().unwrap()
    }

    #[test]
    fn products() {
        let h = half_open_unit();
        let p = h.product(&h);
        assert!(p.is_validated());
        assert!(p.is_nearly_convex().unwrap().nearly_convex);
        assert_eq!(p.relative_interior().unwrap(), ROPoly::ri_of(&square()));
        assert!(p.contains(&[int(1), int(1)]));
        assert!(!p.contains(&[int(0), q(1, 2)]));
    }

    #[test]
    fn intersections() {
        let closed_unit = NCSet::from_closed(&HPoly::cube(1, &int(0), &int(1)));
        let s1 = half_open_unit().product(&closed_unit);
        let s2 = closed_unit.product(&half_open_unit());
        let (i, qc) = s1.intersect(&s2).unwrap();
        assert!(qc);
        assert_eq!(i.relative_interior().unwrap(), ROPoly::ri_of(&square()));

        let a = NCSet::from_closed(&HPoly::cube(1, &int(0), &int(1)));
        let b = NCSet::from_closed(&HPoly::cube(1, &int(1), &int(2)));
        let (i, qc) = a.intersect(&b).unwrap();
        assert!(!qc);
        assert!(!i.is_validated());
        assert!(i.same_points(&NCSet::from_pieces(1, &[pt(&[int(1)])])));

        let o = omega_b();
        let (i, qc) = o.intersect(&o).unwrap();
        assert!(qc);
        assert!(i.same_points(&o));
    }

    #[test]
    fn images() {
        let o = omega_b().validate().unwrap();
        let proj = RMatrix::from_rows(vec![vec![int(1), int(0)]], 2);
        let img = o.linear_image(&proj).unwrap();
        assert!(img.same_points(&NCSet::from_closed(&HPoly::cube(1, &int(0), &int(1)))));
        assert_eq!(img.relative_interior().unwrap(), ROPoly::ri_of(&HPoly::cube(1, &int(0), &int(1))));

        let id = o.linear_image(&RMatrix::identity(2)).unwrap();
        assert!(id.same_points(&o));

        let open = NCSet::open(&HPoly::cube(1, &int(0), &int(1)));
        let sum = open.minkowski_sum(&open).unwrap();
        assert!(sum.same_points(&NCSet::open(&HPoly::cube(1, &int(0), &int(2)))));
    }

    #[test]
    fn preimages() {
        let t = RMatrix::from_rows(vec![vec![int(1), int(0)]], 2);
        let (pre, qc) = half_open_unit().preimage(&t).unwrap();
        assert!(qc);
        assert!(pre.contains(&[int(1), int(-7)]));
        assert!(!pre.contains(&[int(0), int(0)]));
        let ri = pre.relative_interior().unwrap().unwrap();
        assert!(ri.contains(&[q(1, 2), int(100)]));
        assert!(!ri.contains(&[int(1), int(0)]));

        let (same, qc) = omega_b().preimage(&RMatrix::identity(2)).unwrap();
        assert!(qc && same.same_points(&omega_b()));

        let away = NCSet::open(&HPoly::cube(1, &int(1), &int(2)));
        let (e, qc) = away.preimage(&RMatrix::zeros(1, 2)).unwrap();
        assert!(!qc);
        assert!(e.is_empty());
    }

    #[test]
    fn faces_of_square() {
        assert_eq!(faces(&square()).len(), 9);
        let f = NCSet::from_faces(&square(), &[vec![3], vec![1, 3]]).unwrap();
        assert_eq!(f.pieces().len(), 3);
        assert!(f.is_nearly_convex().unwrap().nearly_convex);
        assert!(f.contains(&[int(0), int(0)]));
        assert!(!f.contains(&[int(1), int(0)]));
    }

    #[test]
    fn json_roundtrip() {
        let o = omega_b();
        let s = serde_json::to_string(&o).unwrap();
        let back: NCSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, o);
        let sugar = r#"{"closure":{"dim":1,"ineq":[["1","1"],["-1","0"]]},"faces":[[0]]}"#;
        let h: NCSet = serde_json::from_str(sugar).unwrap();
        assert!(h.same_points(&half_open_unit()));
    }
}
