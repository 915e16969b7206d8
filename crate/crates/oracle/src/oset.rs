//! Sets evaluated straight from their defining formulas.
//!
//! Every piece is a convex set `{x : eq rows = , strict rows <}` kept next to
//! the vertices and rays of its closure. Images go through vertex enumeration,
//! emptiness through the barycenter of the generators; nothing here calls the
//! simplex solver.

use nearconvex::exactlp::Constraint;
use nearconvex::linalg::{self, dot};
use nearconvex::polyhedron::{HPoly, VPoly};
use nearconvex::{Extended, MixedSystem, NCSet, RMatrix, RVector, Rational};

#[derive(Clone, Debug)]
pub struct Piece {
    pub sys: MixedSystem,
    pub gens: VPoly,
}

impl Piece {
    /// `None` when the system has no solution.
    pub fn new(sys: MixedSystem) -> Option<Piece> {
        debug_assert!(sys.weak.is_empty());
        let closed = HPoly::new(sys.dim, sys.strict.clone(), sys.eq.clone());
        let gens = closed.to_vrep().ok()?;
        if gens.points.is_empty() {
            return None;
        }
        let piece = Piece { sys, gens };
        piece.sys.satisfied_by(&piece.center()).then_some(piece)
    }

    /// A point of the relative interior of the closure, hence of the piece.
    pub fn center(&self) -> RVector {
        let k = Rational::from_int(self.gens.points.len() as i64);
        let mut c = linalg::zeros(self.gens.dim);
        for p in &self.gens.points {
            c = linalg::add(&c, p);
        }
        c = linalg::scale(&c, &k.recip());
        for r in &self.gens.rays {
            c = linalg::add(&c, r);
        }
        c
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.sys.satisfied_by(x)
    }
}

/// Relative interior of the convex hull of `gens`.
fn ri_of_gens(gens: &VPoly) -> Option<Piece> {
    if gens.points.is_empty() {
        return None;
    }
    let h = gens.to_hrep().ok()?;
    let mut sys = MixedSystem::new(gens.dim);
    sys.eq = h.eq.clone();
    for c in &h.ineq {
        let tight = gens.points.iter().all(|p| dot(&c.row, p) == c.rhs) && gens.rays.iter().all(|r| dot(&c.row, r).is_zero());
        if tight {
            sys.eq.push(c.clone());
        } else {
            sys.strict.push(c.clone());
        }
    }
    Some(Piece { sys, gens: gens.clone() })
}

#[derive(Clone, Debug)]
pub struct OSet {
    pub dim: usize,
    pub pieces: Vec<Piece>,
}

impl OSet {
    pub fn new(dim: usize, systems: Vec<MixedSystem>) -> OSet {
        OSet { dim, pieces: systems.into_iter().filter_map(Piece::new).collect() }
    }

    pub fn empty(dim: usize) -> OSet {
        OSet { dim, pieces: vec![] }
    }

    pub fn universe(dim: usize) -> OSet {
        OSet::new(dim, vec![MixedSystem::new(dim)])
    }

    pub fn from_ncset(s: &NCSet) -> OSet {
        OSet::new(s.dim(), s.pieces().iter().map(|p| p.system()).collect())
    }

    /// A closed polyhedron as the relative interiors of all its faces.
    pub fn closed(p: &HPoly) -> OSet {
        let mut out = vec![];
        face_walk(p, &mut out);
        OSet::new(p.dim, out)
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    pub fn generators(&self) -> VPoly {
        let mut v = VPoly { dim: self.dim, points: vec![], rays: vec![] };
        for p in &self.pieces {
            v.points.extend(p.gens.points.iter().cloned());
            v.rays.extend(p.gens.rays.iter().cloned());
        }
        v.points.sort();
        v.points.dedup();
        v.rays.sort();
        v.rays.dedup();
        v
    }

    /// Closure of the convex hull.
    pub fn hull(&self) -> Option<HPoly> {
        let g = self.generators();
        if g.points.is_empty() {
            return None;
        }
        g.to_hrep().ok()
    }

    /// `ri(conv Ω)`; equals `ri Ω` for nearly convex `Ω`.
    pub fn ri(&self) -> OSet {
        OSet { dim: self.dim, pieces: ri_of_gens(&self.generators()).into_iter().collect() }
    }

    pub fn union(&self, other: &OSet) -> OSet {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        OSet { dim: self.dim, pieces }
    }

    pub fn product(&self, other: &OSet) -> OSet {
        let (n, m) = (self.dim, other.dim);
        let mut out = vec![];
        for a in &self.pieces {
            for b in &other.pieces {
                let mut s = MixedSystem::new(n + m);
                let lift = |c: &Constraint, left: bool| {
                    let mut row = if left { c.row.clone() } else { linalg::zeros(n) };
                    if left {
                        row.extend(linalg::zeros(m));
                    } else {
                        row.extend(c.row.iter().cloned());
                    }
                    Constraint::new(row, c.rhs.clone())
                };
                s.eq.extend(a.sys.eq.iter().map(|c| lift(c, true)));
                s.strict.extend(a.sys.strict.iter().map(|c| lift(c, true)));
                s.eq.extend(b.sys.eq.iter().map(|c| lift(c, false)));
                s.strict.extend(b.sys.strict.iter().map(|c| lift(c, false)));
                out.push(s);
            }
        }
        OSet::new(n + m, out)
    }

    pub fn intersect(&self, other: &OSet) -> OSet {
        let mut out = vec![];
        for a in &self.pieces {
            for b in &other.pieces {
                let mut s = a.sys.clone();
                s.append(&b.sys);
                out.push(s);
            }
        }
        OSet::new(self.dim, out)
    }

    /// `{x : T x + c ∈ self}`.
    pub fn preimage(&self, t: &RMatrix, c: &[Rational]) -> OSet {
        let tt = t.transpose();
        let pull = |k: &Constraint| Constraint::new(tt.mul_vec(&k.row), &k.rhs - &dot(&k.row, c));
        let systems = self
            .pieces
            .iter()
            .map(|p| {
                let mut s = MixedSystem::new(t.ncols());
                s.eq = p.sys.eq.iter().map(pull).collect();
                s.strict = p.sys.strict.iter().map(pull).collect();
                s
            })
            .collect();
        OSet::new(t.ncols(), systems)
    }

    /// `{T x + c : x ∈ self}`, piece by piece through the generators.
    pub fn image(&self, t: &RMatrix, c: &[Rational]) -> OSet {
        let pieces = self
            .pieces
            .iter()
            .filter_map(|p| {
                let g = VPoly {
                    dim: t.nrows(),
                    points: p.gens.points.iter().map(|x| linalg::add(&t.mul_vec(x), c)).collect(),
                    rays: p.gens.rays.iter().map(|r| t.mul_vec(r)).filter(|r| !linalg::is_zero_vec(r)).collect(),
                };
                ri_of_gens(&g)
            })
            .collect();
        OSet { dim: t.nrows(), pieces }
    }

    pub fn cylinder(&self, total: usize, coords: &[usize]) -> OSet {
        self.preimage(&selection(total, coords), &linalg::zeros(coords.len()))
    }

    pub fn project(&self, coords: &[usize]) -> OSet {
        self.image(&selection(self.dim, coords), &linalg::zeros(coords.len()))
    }

    pub fn minkowski(&self, other: &OSet) -> OSet {
        let n = self.dim;
        let mut t = RMatrix::zeros(n, 2 * n);
        for i in 0..n {
            t.set(i, i, Rational::one());
            t.set(i, n + i, Rational::one());
        }
        self.product(other).image(&t, &linalg::zeros(n))
    }

    /// Fiber `{y : (x, y) ∈ self}` for `x ∈ R^n`.
    pub fn fiber(&self, x: &[Rational]) -> OSet {
        let n = x.len();
        let p = self.dim - n;
        let mut t = RMatrix::zeros(self.dim, p);
        for i in 0..p {
            t.set(n + i, i, Rational::one());
        }
        let mut c = x.to_vec();
        c.extend(linalg::zeros(p));
        self.preimage(&t, &c)
    }

    /// `sup ⟨v, x⟩` over the set.
    pub fn support(&self, v: &[Rational]) -> Extended {
        let mut best = Extended::NegInf;
        for p in &self.pieces {
            if p.gens.rays.iter().any(|r| dot(v, r).is_positive()) {
                return Extended::PosInf;
            }
            for x in &p.gens.points {
                best = best.max(Extended::Finite(dot(v, x)));
            }
        }
        best
    }

    /// `inf` of the last coordinate.
    pub fn inf_last(&self) -> Extended {
        let mut v = linalg::zeros(self.dim);
        v[self.dim - 1] = -Rational::one();
        self.support(&v).neg()
    }

    pub fn meets(&self, other: &OSet) -> bool {
        !self.intersect(other).is_empty()
    }
}

pub fn selection(total: usize, coords: &[usize]) -> RMatrix {
    let mut t = RMatrix::zeros(coords.len(), total);
    for (i, &j) in coords.iter().enumerate() {
        t.set(i, j, Rational::one());
    }
    t
}

/// Relative interiors of all faces, found by tightening rows one at a time.
fn face_walk(p: &HPoly, out: &mut Vec<MixedSystem>) {
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![(p.ineq.clone(), p.eq.clone())];
    while let Some((ineq, eq)) = stack.pop() {
        let face = HPoly::new(p.dim, ineq.clone(), eq.clone());
        let Ok(g) = face.to_vrep() else { continue };
        let Some(piece) = ri_of_gens(&g) else { continue };
        let key = {
            let mut pts = g.points.clone();
            pts.sort();
            pts.dedup();
            let mut rays = g.rays.clone();
            rays.sort();
            rays.dedup();
            (pts, rays)
        };
        if !seen.insert(key) {
            continue;
        }
        out.push(piece.sys.clone());
        for (i, c) in ineq.iter().enumerate() {
            if piece.sys.strict.iter().any(|s| s == c) {
                let mut rest = ineq.clone();
                rest.remove(i);
                let mut e = eq.clone();
                e.push(c.clone());
                stack.push((rest, e));
            }
        }
    }
}

/// Membership test in the relative interior of a set given by its closure
/// generators.
pub fn ri_test(gens: &VPoly) -> OSet {
    OSet { dim: gens.dim, pieces: ri_of_gens(gens).into_iter().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nearconvex::rational::{int, q};

    fn square() -> HPoly {
        HPoly::cube(2, &int(0), &int(1))
    }

    #[test]
    fn faces_of_square() {
        let s = OSet::closed(&square());
        assert_eq!(s.pieces.len(), 9);
        assert!(s.contains(&[int(0), int(0)]));
        assert!(s.contains(&[q(1, 2), int(1)]));
        assert!(!s.contains(&[int(2), int(0)]));
        let ri = s.ri();
        assert!(ri.contains(&[q(1, 2), q(1, 2)]));
        assert!(!ri.contains(&[int(0), q(1, 2)]));
    }

    #[test]
    fn images_and_fibers() {
        let open = OSet::from_ncset(&NCSet::open(&square()));
        let shadow = open.project(&[0]);
        assert!(shadow.contains(&[q(1, 3)]));
        assert!(!shadow.contains(&[int(1)]));
        let f = open.fiber(&[q(1, 2)]);
        assert!(f.contains(&[q(1, 2)]));
        assert!(!f.contains(&[int(0)]));
        assert!(open.fiber(&[int(1)]).is_empty());
        assert_eq!(open.support(&[int(1), int(1)]), Extended::Finite(int(2)));
        assert_eq!(OSet::universe(1).support(&[int(1)]), Extended::PosInf);
    }
}
